"""Simplicial complexes on an ambient vertex set {0..n}.

Faces are stored implicitly through the set of facets (maximal faces).
The empty face belongs to every complex; vertices of the ambient set that
appear in no face ("ghost" vertices) are permitted and contribute degree-one
generators to the Stanley-Reisner ideal.  Internally faces are vertex
bitmasks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .errors import InputError, PreconditionError


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _unmask(m: int) -> tuple:
    out = []
    v = 0
    while m:
        if m & 1:
            out.append(v)
        m >>= 1
        v += 1
    return tuple(out)


def _subsets(m: int):
    """All submasks of m, including 0 and m."""
    sub = m
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & m


@dataclass(frozen=True)
class SimplicialComplex:
    """ambient = number of available vertices n+1; facets are canonical."""

    ambient: int
    facets: tuple

    @staticmethod
    def from_facets(ambient: int, facets: Iterable[Iterable[int]]) -> "SimplicialComplex":
        if ambient < 1:
            raise InputError("ambient vertex count must be at least 1")
        masks = set()
        for f in facets:
            fm = _mask(f)
            if fm >> ambient:
                raise InputError(f"facet {sorted(f)} out of range for ambient {ambient}")
            masks.add(fm)
        if not masks:
            masks = {0}
        # drop facets contained in another facet
        maximal = {f for f in masks if not any(f != g and f & g == f for g in masks)}
        canon = tuple(sorted((_unmask(f) for f in maximal), key=lambda t: (len(t), t)))
        return SimplicialComplex(ambient, canon)

    @staticmethod
    def simplex(ambient: int) -> "SimplicialComplex":
        """The full simplex on all ambient vertices."""
        return SimplicialComplex.from_facets(ambient, [range(ambient)])

    @staticmethod
    def empty(ambient: int) -> "SimplicialComplex":
        """The complex whose only face is the empty face."""
        return SimplicialComplex.from_facets(ambient, [[]])

    @cached_property
    def facet_masks(self) -> tuple:
        return tuple(_mask(f) for f in self.facets)

    @cached_property
    def face_masks(self) -> frozenset:
        out = set()
        for fm in self.facet_masks:
            out.update(_subsets(fm))
        return frozenset(out)

    def faces(self) -> tuple:
        return tuple(sorted((_unmask(m) for m in self.face_masks), key=lambda t: (len(t), t)))

    @cached_property
    def used_mask(self) -> int:
        m = 0
        for fm in self.facet_masks:
            m |= fm
        return m

    def used_vertices(self) -> tuple:
        return _unmask(self.used_mask)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.ambient:
            raise InputError(f"vertex {v} out of range for ambient {self.ambient}")

    def is_face(self, vertices: Iterable[int]) -> bool:
        vm = _mask(vertices)
        if vm >> self.ambient:
            raise InputError(f"vertex set {sorted(_unmask(vm))} out of range")
        return any(vm & fm == vm for fm in self.facet_masks)

    def is_simplex(self) -> bool:
        """True when the used vertices themselves form a face."""
        return self.used_mask in self.face_masks

    def __str__(self) -> str:
        body = ", ".join("{" + ",".join(map(str, f)) + "}" for f in self.facets)
        return f"Complex(ambient={self.ambient}, facets=[{body}])"


def minimal_nonfaces(c: SimplicialComplex) -> tuple:
    """Vertex sets that are not faces while every proper subset is a face."""
    out = []
    for m in range(1, 1 << c.ambient):
        if m in c.face_masks:
            continue
        ok = True
        mm = m
        while mm:
            low = mm & -mm
            if (m ^ low) not in c.face_masks:
                ok = False
                break
            mm ^= low
        if ok:
            out.append(_unmask(m))
    out.sort(key=lambda t: (len(t), t))
    return tuple(out)


def sr_ideal(c: SimplicialComplex) -> tuple:
    """Square-free exponent vectors generating the Stanley-Reisner ideal."""
    gens = []
    for nf in minimal_nonfaces(c):
        exps = [0] * c.ambient
        for v in nf:
            exps[v] = 1
        gens.append(tuple(exps))
    return tuple(gens)


def deletion(c: SimplicialComplex, v: int) -> SimplicialComplex:
    """Faces of c that avoid v."""
    c._check_vertex(v)
    bit = 1 << v
    return SimplicialComplex.from_facets(
        c.ambient, [_unmask(fm & ~bit) for fm in c.facet_masks])


def link(c: SimplicialComplex, v: int) -> SimplicialComplex:
    """Faces F with v not in F and F + {v} a face of c."""
    c._check_vertex(v)
    bit = 1 << v
    if not c.used_mask & bit:
        raise InputError(f"link at unused vertex {v}")
    return SimplicialComplex.from_facets(
        c.ambient, [_unmask(fm & ~bit) for fm in c.facet_masks if fm & bit])


def cone(c: SimplicialComplex, v: int) -> SimplicialComplex:
    """Cone over c with fresh apex v."""
    c._check_vertex(v)
    bit = 1 << v
    if c.used_mask & bit:
        raise InputError(f"cone apex {v} already used by the complex")
    return SimplicialComplex.from_facets(
        c.ambient, [_unmask(fm | bit) for fm in c.facet_masks])


def star(c: SimplicialComplex, v: int) -> SimplicialComplex:
    """Closed star of v: the cone over the link with apex v."""
    return cone(link(c, v), v)


@dataclass(frozen=True)
class ApexDecomposition:
    """Split of a non-simplex complex at an apex vertex.

    ``deletion_part`` and ``link_part`` satisfy, with C the cone over the
    link at the apex:  faces(c) = faces(deletion_part) | faces(C)  and
    faces(deletion_part) & faces(C) = faces(link_part).
    """

    apex: int
    deletion_part: SimplicialComplex
    link_part: SimplicialComplex

    def cone_part(self) -> SimplicialComplex:
        return cone(self.link_part, self.apex)


def apex_decomposition(c: SimplicialComplex) -> ApexDecomposition:
    """Split at the smallest used vertex whose star is proper."""
    if c.is_simplex():
        raise PreconditionError("cannot decompose a simplex")
    apex = None
    for v in c.used_vertices():
        if star(c, v) != c:
            apex = v
            break
    if apex is None:
        raise PreconditionError("no admissible apex found (complex is a cone over every vertex)")
    d = deletion(c, apex)
    l = link(c, apex)
    split = ApexDecomposition(apex, d, l)
    _check_split(c, split)
    return split


def _check_split(c: SimplicialComplex, s: ApexDecomposition) -> None:
    cone_faces = s.cone_part().face_masks
    del_faces = s.deletion_part.face_masks
    link_faces = s.link_part.face_masks
    if del_faces | cone_faces != c.face_masks:
        raise PreconditionError("decomposition does not cover the complex")
    if del_faces & cone_faces != link_faces:
        raise PreconditionError("decomposition overlap is not the link")
    if not link_faces <= del_faces:
        raise PreconditionError("link is not contained in the deletion")


def complexes_on(ambient: int):
    """Every simplicial complex on the ambient vertex set (exhaustive).

    Enumerates antichains of nonempty vertex subsets; the complex with no
    used vertices is included.  Intended for small ambient counts.
    """
    yield SimplicialComplex.empty(ambient)
    masks = list(range(1, 1 << ambient))

    def rec(start: int, chosen: list):
        for idx in range(start, len(masks)):
            m = masks[idx]
            if any(m & c == m or m & c == c for c in chosen):
                continue
            chosen.append(m)
            yield SimplicialComplex.from_facets(ambient, [_unmask(x) for x in chosen])
            yield from rec(idx + 1, chosen)
            chosen.pop()

    yield from rec(0, [])


def random_complex(ambient: int, rng) -> SimplicialComplex:
    """Random complex: a handful of random facets, minimalized."""
    k = rng.randint(1, max(2, ambient))
    facets = []
    for _ in range(k):
        size = rng.randint(0, ambient)
        facets.append(rng.sample(range(ambient), size))
    return SimplicialComplex.from_facets(ambient, facets)
