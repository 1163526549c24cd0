"""Presented rings k[x0..xn]/I for monomial I, their maps, and fiber squares.

Monomial quotients admit term-dropping normal forms: a term survives iff
its monomial is divisible by no ideal generator, which makes normal forms
canonical and multiplicative.  The fiber square built from an apex
decomposition is the workhorse for all patching constructions.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations_with_replacement
from typing import Optional, Sequence

from .errors import (ContextError, GlueError, HomError, InputError,
                     InternalCheckError, PreconditionError)
from .fields import Field
from .matrix import PolyMatrix
from .poly import GREVLEX, Polynomial, PolyRing, TermOrder, exp_divides
from .simplicial import (ApexDecomposition, SimplicialComplex,
                         apex_decomposition, sr_ideal)


def _minimalize(gens: Sequence[tuple]) -> tuple:
    gens = sorted(set(g for g in gens), key=lambda e: (sum(e), e))
    out = []
    for g in gens:
        if not any(exp_divides(h, g) for h in out):
            out.append(g)
    return tuple(out)


@dataclass(frozen=True)
class QuotientRing:
    """k[x0..xn]/(monomial ideal); generators stored minimalized."""

    context: PolyRing
    generators: tuple

    @staticmethod
    def make(field_: Field, nvars: int, generators: Sequence[tuple] = (),
             order: TermOrder = GREVLEX) -> "QuotientRing":
        ctx = PolyRing(field_, nvars, order)
        for g in generators:
            if len(g) != nvars or any(e < 0 for e in g) or not any(g):
                raise InputError(f"bad monomial generator {g}")
        return QuotientRing(ctx, _minimalize(generators))

    @property
    def field(self) -> Field:
        return self.context.field

    @property
    def nvars(self) -> int:
        return self.context.nvars

    def is_free_context(self) -> bool:
        return not self.generators

    def is_square_free(self) -> bool:
        return all(all(e <= 1 for e in g) for g in self.generators)

    def survives(self, exps: tuple) -> bool:
        return not any(exp_divides(g, exps) for g in self.generators)

    def normal_form(self, f: Polynomial) -> Polynomial:
        """Drop every term divisible by an ideal generator."""
        if f.ring != self.context:
            raise ContextError("polynomial over a different context")
        if not self.generators:
            return f
        kept = tuple(t for t in f.terms if self.survives(t[0]))
        return f if len(kept) == len(f.terms) else Polynomial(self.context, kept)

    def nf_matrix(self, m: PolyMatrix) -> PolyMatrix:
        return m.map_entries(self.normal_form)

    def mul(self, f: Polynomial, g: Polynomial) -> Polynomial:
        return self.normal_form(f * g)

    def mat_mul(self, a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
        return self.nf_matrix(a * b)

    def generator_polys(self) -> tuple:
        return tuple(self.context.monomial(g) for g in self.generators)

    def killed_variables(self) -> tuple:
        """Variables that are themselves ideal generators."""
        out = []
        for g in self.generators:
            if sum(g) == 1:
                out.append(g.index(1))
        return tuple(sorted(out))

    def free_variables(self) -> tuple:
        """Variables that appear in no generator at all."""
        used = set()
        for g in self.generators:
            for i, e in enumerate(g):
                if e:
                    used.add(i)
        return tuple(i for i in range(self.nvars) if i not in used)


def sr_quotient(field_: Field, c: SimplicialComplex,
                order: TermOrder = GREVLEX) -> QuotientRing:
    """The Stanley-Reisner ring of a complex over the given field."""
    return QuotientRing.make(field_, c.ambient, sr_ideal(c), order)


def complex_of_ring(r: QuotientRing) -> SimplicialComplex:
    """Recover the complex whose Stanley-Reisner ideal presents r."""
    if not r.is_square_free():
        raise PreconditionError("ideal is not square-free; no underlying complex")
    supports = [frozenset(i for i, e in enumerate(g) if e) for g in r.generators]
    faces = []
    for m in range(1 << r.nvars):
        verts = frozenset(i for i in range(r.nvars) if m >> i & 1)
        if not any(s <= verts for s in supports):
            faces.append(verts)
    c = SimplicialComplex.from_facets(r.nvars, [sorted(f) for f in faces])
    if sr_quotient(r.field, c, r.context.order) != r:
        raise InternalCheckError("complex reconstruction does not round-trip")
    return c


@dataclass(frozen=True)
class RingHom:
    """Variable-assignment map between presented rings."""

    source: QuotientRing
    target: QuotientRing
    images: tuple
    verified: bool = False

    @staticmethod
    def make(source: QuotientRing, target: QuotientRing,
             images: Sequence[Polynomial], verify: bool = True) -> "RingHom":
        if len(images) != source.nvars:
            raise InputError("need one image per source variable")
        images = tuple(target.normal_form(p) for p in images)
        h = RingHom(source, target, images, False)
        return hom_check(h) if verify else h

    @staticmethod
    def identity(ring: QuotientRing) -> "RingHom":
        imgs = [ring.context.variable(i) for i in range(ring.nvars)]
        return RingHom.make(ring, ring, imgs)

    @staticmethod
    def quotient_map(source: QuotientRing, target: QuotientRing) -> "RingHom":
        """Identity on variables; valid when source ideal sits inside target's."""
        imgs = [target.context.variable(i) for i in range(source.nvars)]
        return RingHom.make(source, target, imgs)

    def __call__(self, f: Polynomial) -> Polynomial:
        assignment = {i: img for i, img in enumerate(self.images)}
        return self.target.normal_form(
            f.substitute(assignment, target=self.target.context))

    def apply_matrix(self, m: PolyMatrix) -> PolyMatrix:
        return m.map_entries(self.__call__)

    def compose(self, inner: "RingHom") -> "RingHom":
        """self after inner (inner first)."""
        if inner.target != self.source:
            raise ContextError("homs do not compose")
        imgs = [self(img) for img in inner.images]
        return RingHom.make(inner.source, self.target, imgs, verify=False)._as_verified()

    def _as_verified(self) -> "RingHom":
        return replace(self, verified=True) if not self.verified else self

    def is_identity_pattern(self) -> bool:
        ctx = self.target.context
        return all(img == self.target.normal_form(ctx.variable(i))
                   for i, img in enumerate(self.images))


def hom_check(h: RingHom) -> RingHom:
    """Verify every source ideal generator maps to normal-form zero."""
    for g in h.source.generators:
        image = h(h.source.context.monomial(g))
        if not image.is_zero():
            raise HomError(
                f"generator {h.source.context.monomial(g)} maps to nonzero {image}",
                generator=g, image=image)
    return h._as_verified()


def augmentation_hom(r: QuotientRing) -> RingHom:
    """Every variable to zero, landing in the constants-only presentation."""
    consts = constants_ring(r)
    zero = consts.context.zero()
    return RingHom.make(r, consts, [zero] * r.nvars)


def constants_ring(r: QuotientRing) -> QuotientRing:
    gens = [tuple(1 if j == i else 0 for j in range(r.nvars)) for i in range(r.nvars)]
    return QuotientRing.make(r.field, r.nvars, gens, r.context.order)


def constants_inclusion(r: QuotientRing) -> RingHom:
    """The constants presentation mapped into r (variables to zero)."""
    consts = constants_ring(r)
    zero = r.context.zero()
    return RingHom.make(consts, r, [zero] * r.nvars)


@dataclass(frozen=True)
class FiberSquare:
    """Cartesian square of Stanley-Reisner rings at an apex vertex.

        a  --i1-->  a1
        |i2         |j1
        a2 --j2-->  a0

    j2 kills the apex variable and splits via ``section``.
    """

    a: QuotientRing
    a1: QuotientRing
    a2: QuotientRing
    a0: QuotientRing
    i1: RingHom
    i2: RingHom
    j1: RingHom
    j2: RingHom
    section: RingHom
    apex: int
    complex: SimplicialComplex
    split: ApexDecomposition

    def corner_ring(self, name: str) -> QuotientRing:
        return {"a": self.a, "a1": self.a1, "a2": self.a2, "a0": self.a0}[name]


def build_fiber_square(field_: Field, c: SimplicialComplex,
                       order: TermOrder = GREVLEX) -> FiberSquare:
    """Construct and verify the patching square of a non-simplex complex."""
    if c.is_simplex():
        raise PreconditionError("fiber square needs a non-simplex complex")
    split = apex_decomposition(c)
    apex = split.apex
    a = sr_quotient(field_, c, order)
    a1 = sr_quotient(field_, split.deletion_part, order)
    a2 = sr_quotient(field_, split.cone_part(), order)
    a0 = sr_quotient(field_, split.link_part, order)

    i1 = RingHom.quotient_map(a, a1)
    i2 = RingHom.quotient_map(a, a2)
    j1 = RingHom.quotient_map(a1, a0)
    ctx0 = a0.context
    j2_imgs = [ctx0.zero() if v == apex else ctx0.variable(v) for v in range(a2.nvars)]
    j2 = RingHom.make(a2, a0, j2_imgs)
    ctx2 = a2.context
    sec_imgs = [ctx2.zero() if v == apex else ctx2.variable(v) for v in range(a0.nvars)]
    section = RingHom.make(a0, a2, sec_imgs)

    square = FiberSquare(a, a1, a2, a0, i1, i2, j1, j2, section, apex, c, split)
    check_square(square)
    return square


def check_square(s: FiberSquare) -> None:
    """Re-verify commutativity and the splitting of j2."""
    for h in (s.i1, s.i2, s.j1, s.j2, s.section):
        hom_check(h)
    ctx = s.a.context
    for v in range(s.a.nvars):
        xv = ctx.variable(v)
        if s.j1(s.i1(xv)) != s.j2(s.i2(xv)):
            raise InternalCheckError(f"square does not commute at x{v}")
    ctx0 = s.a0.context
    for v in range(s.a0.nvars):
        xv = s.a0.normal_form(ctx0.variable(v))
        if s.j2(s.section(xv)) != xv:
            raise InternalCheckError(f"section law fails at x{v}")


@dataclass(frozen=True)
class FiberReport:
    ok: bool
    degree: int
    count_a: int
    count_a1: int
    count_a2: int
    count_a0: int
    failure: Optional[str] = None

    def counts(self) -> tuple:
        return (self.count_a, self.count_a1, self.count_a2, self.count_a0)


def _monomials_up_to(nvars: int, degree: int):
    for total in range(degree + 1):
        for combo in combinations_with_replacement(range(nvars), total):
            exps = [0] * nvars
            for v in combo:
                exps[v] += 1
            yield tuple(exps)


def fiber_check(square: FiberSquare, degree: int = 4) -> FiberReport:
    """Verify the square is cartesian on monomial bases up to the degree.

    Checks, for every monomial m of total degree <= degree: m survives in a
    iff it survives in a1 or a2; it survives in both a1 and a2 iff it
    survives in a0; and the survivor counts satisfy the inclusion-exclusion
    identity |B(a)| = |B(a1)| + |B(a2)| - |B(a0)| with the pairing
    (m  ->  (image in a1, image in a2)) bijective onto compatible pairs.
    """
    n = square.a.nvars
    apex_bit = square.apex
    c = c1 = c2 = c0 = 0
    diag = only1 = only2 = with_apex = 0
    for exps in _monomials_up_to(n, degree):
        s = square.a.survives(exps)
        s1 = square.a1.survives(exps)
        s2 = square.a2.survives(exps)
        s0 = square.a0.survives(exps)
        c += s
        c1 += s1
        c2 += s2
        c0 += s0
        if s != (s1 or s2):
            return FiberReport(False, degree, c, c1, c2, c0,
                               failure=f"survival mismatch at {exps}")
        if (s1 and s2) != s0:
            return FiberReport(False, degree, c, c1, c2, c0,
                               failure=f"overlap mismatch at {exps}")
        if s:
            if s0:
                diag += 1
            elif s1:
                only1 += 1
            elif s2:
                if exps[apex_bit] == 0:
                    return FiberReport(False, degree, c, c1, c2, c0,
                                       failure=f"apex-free monomial {exps} missing from a0")
                with_apex += 1
                only2 += 1
    if c != c1 + c2 - c0:
        return FiberReport(False, degree, c, c1, c2, c0, failure="count identity fails")
    if diag != c0 or only1 != c1 - c0 or only2 != c2 - c0:
        return FiberReport(False, degree, c, c1, c2, c0, failure="pairing is not bijective")
    return FiberReport(True, degree, c, c1, c2, c0)


# -- gluing -------------------------------------------------------------------

def glue_element(square: FiberSquare, f1: Polynomial, f2: Polynomial) -> Polynomial:
    """The unique element of a restricting to f1 over a1 and f2 over a2."""
    g1 = square.j1(square.a1.normal_form(f1))
    g2 = square.j2(square.a2.normal_form(f2))
    if g1 != g2:
        raise GlueError(f"incompatible patch data: j1 gives {g1}, j2 gives {g2}")
    ctx = square.a.context
    raw = Polynomial(ctx, f1.terms) + Polynomial(ctx, f2.terms) - Polynomial(ctx, g1.terms)
    m = square.a.normal_form(raw)
    if square.i1(m) != square.a1.normal_form(f1) or square.i2(m) != square.a2.normal_form(f2):
        raise InternalCheckError("glued element does not restrict to its parts")
    return m


def glue_matrix(square: FiberSquare, m1: PolyMatrix, m2: PolyMatrix) -> PolyMatrix:
    if (m1.rows, m1.cols) != (m2.rows, m2.cols):
        raise GlueError("glue of matrices with different shapes")
    entries = [glue_element(square, a, b) for a, b in zip(m1.entries, m2.entries)]
    return PolyMatrix(square.a.context, m1.rows, m1.cols, entries)


# -- verified invertible matrices over a quotient -----------------------------

class GLMat:
    """A square matrix over a quotient ring together with a verified inverse."""

    __slots__ = ("ring", "mat", "inv")

    def __init__(self, ring: QuotientRing, mat: PolyMatrix, inv: PolyMatrix):
        mat = ring.nf_matrix(mat)
        inv = ring.nf_matrix(inv)
        if not mat.is_square or mat.rows != inv.rows or not inv.is_square:
            raise PreconditionError("GL element must be square with a square inverse")
        eye = PolyMatrix.identity(ring.context, mat.rows)
        if ring.nf_matrix(mat * inv) != eye or ring.nf_matrix(inv * mat) != eye:
            raise PreconditionError("matrix inverse fails to verify")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "inv", inv)

    def __setattr__(self, *a):
        raise AttributeError("GLMat is immutable")

    @property
    def size(self) -> int:
        return self.mat.rows

    @staticmethod
    def identity(ring: QuotientRing, n: int) -> "GLMat":
        eye = PolyMatrix.identity(ring.context, n)
        return GLMat(ring, eye, eye)

    @staticmethod
    def elementary(ring: QuotientRing, n: int, i: int, j: int, f: Polynomial) -> "GLMat":
        """I + f * E_ij for i != j."""
        if i == j:
            raise InputError("elementary matrix needs i != j")
        ctx = ring.context
        m = [[ctx.one() if a == b else ctx.zero() for b in range(n)] for a in range(n)]
        minv = [row[:] for row in m]
        m[i][j] = ring.normal_form(f)
        minv[i][j] = ring.normal_form(-f)
        return GLMat(ring, PolyMatrix.from_rows(ctx, m), PolyMatrix.from_rows(ctx, minv))

    @staticmethod
    def permutation(ring: QuotientRing, perm: Sequence[int]) -> "GLMat":
        n = len(perm)
        ctx = ring.context
        m = [[ctx.one() if perm[a] == b else ctx.zero() for b in range(n)] for a in range(n)]
        pm = PolyMatrix.from_rows(ctx, m)
        return GLMat(ring, pm, pm.transpose())

    @staticmethod
    def diagonal(ring: QuotientRing, entries: Sequence[tuple]) -> "GLMat":
        """Diagonal of (unit, inverse) pairs, each pair verified."""
        ctx = ring.context
        n = len(entries)
        m = PolyMatrix.zeros(ctx, n, n).to_lists()
        minv = [row[:] for row in m]
        for k, (u, uinv) in enumerate(entries):
            m[k][k] = ring.normal_form(u)
            minv[k][k] = ring.normal_form(uinv)
        return GLMat(ring, PolyMatrix.from_rows(ctx, m), PolyMatrix.from_rows(ctx, minv))

    def __mul__(self, other: "GLMat") -> "GLMat":
        if self.ring != other.ring:
            raise ContextError("GL elements over different rings")
        return GLMat(self.ring,
                     self.ring.mat_mul(self.mat, other.mat),
                     self.ring.mat_mul(other.inv, self.inv))

    def inverse(self) -> "GLMat":
        return GLMat(self.ring, self.inv, self.mat)

    def apply_hom(self, h: RingHom) -> "GLMat":
        if h.source != self.ring:
            raise ContextError("hom source does not match")
        return GLMat(h.target, h.apply_matrix(self.mat), h.apply_matrix(self.inv))

    def __eq__(self, other) -> bool:
        return (isinstance(other, GLMat) and self.ring == other.ring
                and self.mat == other.mat and self.inv == other.inv)

    def __repr__(self) -> str:
        return f"GLMat({self.mat!r})"
