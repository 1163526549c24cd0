"""Sparse multivariate polynomials with exact coefficients.

A polynomial is an immutable sequence of (exponent-vector, coefficient)
terms, strictly descending under the ring's term order, with no zero
coefficients.  All operations are pure and return canonical values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .errors import ContextError, InputError
from .fields import Field, check_same_field


@dataclass(frozen=True)
class TermOrder:
    """Monomial order: grevlex or lex, with an optional precedence permutation.

    ``precedence`` lists variable indices from most to least significant;
    None means the natural order 0 > 1 > ... > n.
    """

    kind: str = "grevlex"
    precedence: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex"):
            raise InputError(f"unknown term order kind {self.kind!r}")
        if self.precedence is not None:
            object.__setattr__(self, "precedence", tuple(self.precedence))

    def key(self, exps: tuple):
        """Sort key; larger key means larger monomial."""
        prec = self.precedence
        if prec is None:
            ordered = exps
        else:
            ordered = tuple(exps[i] for i in prec)
        if self.kind == "lex":
            return ordered
        return (sum(exps), tuple(-e for e in reversed(ordered)))


GREVLEX = TermOrder("grevlex")


@dataclass(frozen=True)
class PolyRing:
    """Free polynomial context: coefficient field, variable count, term order."""

    field: Field
    nvars: int
    order: TermOrder = GREVLEX

    def __post_init__(self):
        if self.nvars < 0:
            raise InputError("variable count must be non-negative")
        if self.order.precedence is not None and len(self.order.precedence) != self.nvars:
            raise InputError("term order precedence must list every variable once")

    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    def one(self) -> "Polynomial":
        return self.constant(self.field.one)

    def constant(self, c) -> "Polynomial":
        if isinstance(c, int):
            c = self.field.from_int(c)
        elif isinstance(c, Fraction) and self.field.char:
            c = self.field.from_fraction(c)
        if not c:
            return self.zero()
        return Polynomial(self, (((0,) * self.nvars, c),))

    def from_int(self, n: int) -> "Polynomial":
        return self.constant(self.field.from_int(n))

    def variable(self, i: int) -> "Polynomial":
        if not 0 <= i < self.nvars:
            raise ContextError(f"variable x{i} outside context with {self.nvars} variables")
        exps = tuple(1 if j == i else 0 for j in range(self.nvars))
        return Polynomial(self, ((exps, self.field.one),))

    def monomial(self, exps: Iterable[int], coeff=None) -> "Polynomial":
        exps = tuple(exps)
        if len(exps) != self.nvars or any(e < 0 for e in exps):
            raise ContextError("bad exponent vector for this context")
        c = self.field.one if coeff is None else coeff
        if not c:
            return self.zero()
        return Polynomial(self, ((exps, c),))

    def from_terms(self, mapping: Mapping[tuple, object]) -> "Polynomial":
        return _from_dict(self, dict(mapping))


def _from_dict(ring: PolyRing, d: dict) -> "Polynomial":
    key = ring.order.key
    items = [(e, c) for e, c in d.items() if c]
    items.sort(key=lambda ec: key(ec[0]), reverse=True)
    return Polynomial(ring, tuple(items))


class Polynomial:
    """Immutable canonical sparse polynomial over a PolyRing."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: tuple):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", terms)

    def __setattr__(self, *a):
        raise AttributeError("Polynomial is immutable")

    # -- predicates ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(self.terms[0][0]))

    def is_one(self) -> bool:
        return self.is_constant() and bool(self.terms) and self.terms[0][1] == self.ring.field.one

    def constant_term(self):
        """Coefficient of the monomial 1 (the value at the augmentation)."""
        for exps, c in self.terms:
            if not any(exps):
                return c
        return self.ring.field.zero

    def total_degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=0)

    def variables(self) -> frozenset:
        out = set()
        for exps, _ in self.terms:
            for i, e in enumerate(exps):
                if e:
                    out.add(i)
        return frozenset(out)

    # -- leading data (w.r.t. the ring order) --------------------------
    def leading(self):
        """(exponent vector, coefficient) of the leading term."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return self.terms[0]

    # -- arithmetic ----------------------------------------------------
    def _check(self, other: "Polynomial") -> None:
        if self.ring != other.ring:
            raise ContextError("polynomials over different contexts")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        fld = self.ring.field
        d = dict(self.terms)
        for e, c in other.terms:
            s = fld.add(d.get(e, fld.zero), c)
            if s:
                d[e] = s
            else:
                d.pop(e, None)
        return _from_dict(self.ring, d)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        fld = self.ring.field
        d = dict(self.terms)
        for e, c in other.terms:
            s = fld.sub(d.get(e, fld.zero), c)
            if s:
                d[e] = s
            else:
                d.pop(e, None)
        return _from_dict(self.ring, d)

    def __neg__(self) -> "Polynomial":
        fld = self.ring.field
        return Polynomial(self.ring, tuple((e, fld.neg(c)) for e, c in self.terms))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        fld = self.ring.field
        d: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                s = fld.add(d.get(e, fld.zero), fld.mul(c1, c2))
                if s:
                    d[e] = s
                else:
                    d.pop(e, None)
        return _from_dict(self.ring, d)

    def scale(self, c) -> "Polynomial":
        fld = self.ring.field
        if not c:
            return self.ring.zero()
        return Polynomial(self.ring, tuple((e, fld.mul(k, c)) for e, k in self.terms))

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise InputError("negative polynomial power")
        out = self.ring.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def substitute(self, assignment: Mapping[int, "Polynomial"],
                   target: Optional[PolyRing] = None) -> "Polynomial":
        """Apply the variable assignment; unassigned variables map to themselves."""
        tgt = target if target is not None else self.ring
        check_same_field(self.ring.field, tgt.field)
        for i, img in assignment.items():
            if img.ring != tgt:
                raise ContextError(f"image of x{i} is not over the target context")
        out = tgt.zero()
        cache: dict = {}
        for exps, coeff in self.terms:
            acc = tgt.constant(coeff)
            for i, e in enumerate(exps):
                if not e:
                    continue
                img = assignment.get(i)
                if img is None:
                    if i >= tgt.nvars:
                        raise ContextError(f"variable x{i} has no image in the target context")
                    p = tgt.monomial(tuple(e if j == i else 0 for j in range(tgt.nvars)))
                else:
                    key = (i, e)
                    p = cache.get(key)
                    if p is None:
                        p = img ** e
                        cache[key] = p
                acc = acc * p
            out = out + acc
        return out

    # -- comparisons / hashing -----------------------------------------
    def __eq__(self, other) -> bool:
        return (isinstance(other, Polynomial) and self.ring == other.ring
                and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.ring, self.terms))

    # -- printing --------------------------------------------------------
    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)})"


def _format_monomial(exps: tuple) -> str:
    parts = []
    for i, e in enumerate(exps):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^{e}")
    return "*".join(parts)


def format_polynomial(f: Polynomial) -> str:
    """Canonical textual form, re-readable by the expression parser."""
    if not f.terms:
        return "0"
    fld = f.ring.field
    out = []
    for idx, (exps, c) in enumerate(f.terms):
        mono = _format_monomial(exps)
        neg = fld.char == 0 and c < 0
        mag = -c if neg else c
        if mono and mag == fld.one:
            body = mono
        elif mono:
            body = f"{fld.format(mag)}*{mono}"
        else:
            body = fld.format(mag)
        if idx == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(out)


def exp_divides(g: tuple, m: tuple) -> bool:
    """Does the monomial with exponents g divide the one with exponents m?"""
    return all(a <= b for a, b in zip(g, m))


def exp_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def exp_div(a: tuple, b: tuple) -> tuple:
    out = tuple(x - y for x, y in zip(a, b))
    if any(e < 0 for e in out):
        raise InputError("monomial division with negative exponent")
    return out


def exp_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))
