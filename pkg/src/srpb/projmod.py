"""Projective modules as idempotent matrices, with explicit isomorphism
witnesses, kernel modules of unimodular rows, and Milnor patching over
fiber squares.

A module is the image of an idempotent E; an isomorphism is a pair of
matrices (fwd, bwd) satisfying the four corner laws

    fwd == E_tgt * fwd * E_src      bwd == E_src * bwd * E_tgt
    bwd * fwd == E_src              fwd * bwd == E_tgt

so that every claim in this module is an exact matrix identity a verifier
can re-check without trusting the construction that produced it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import (ContextError, InternalCheckError, LifterError,
                     PreconditionError, RankError, ShapeError)
from .matrix import PolyMatrix, scalar_rank
from .quotient import (FiberSquare, GLMat, QuotientRing, RingHom, glue_matrix)


@dataclass(frozen=True)
class ProjModule:
    """Image of the idempotent ``matrix`` over ``ring``."""

    ring: QuotientRing
    matrix: PolyMatrix

    @staticmethod
    def make(ring: QuotientRing, matrix: PolyMatrix) -> "ProjModule":
        matrix = ring.nf_matrix(matrix)
        if not matrix.is_square:
            raise ShapeError("module presentation must be square")
        if ring.mat_mul(matrix, matrix) != matrix:
            raise PreconditionError("matrix is not idempotent over the ring")
        return ProjModule(ring, matrix)

    @staticmethod
    def free(ring: QuotientRing, rank: int, size: int = None) -> "ProjModule":
        size = rank if size is None else size
        ctx = ring.context
        eye = PolyMatrix.identity(ctx, rank)
        if size > rank:
            e = eye.direct_sum(PolyMatrix.zeros(ctx, size - rank, size - rank))
        else:
            e = eye
        return ProjModule.make(ring, e)

    @property
    def size(self) -> int:
        return self.matrix.rows

    def augmented_matrix(self) -> PolyMatrix:
        return self.matrix.augmentation()

    def rank(self) -> int:
        return module_rank(self)


def module_rank(p: ProjModule) -> int:
    """Rank of the module: the rank of its augmentation at x = 0.

    Cross-checked against the augmentation trace (equal over Q, congruent
    mod p over F_p); disagreement raises RankError.
    """
    e0 = p.augmented_matrix()
    r = scalar_rank(e0)
    tr = e0.trace().constant_term()
    fld = p.ring.field
    if fld.char == 0:
        if tr != r:
            raise RankError(f"augmentation trace {tr} is not the rank {r}")
    else:
        if tr != r % fld.char:
            raise RankError(f"augmentation trace {tr} not congruent to rank {r}")
    if not 0 <= r <= p.size:
        raise RankError("rank outside [0, size]")
    return r


def base_change(p: ProjModule, h: RingHom) -> ProjModule:
    """Push the module along a verified ring map."""
    if h.source != p.ring:
        raise ContextError("hom source does not match the module ring")
    if not h.verified:
        raise PreconditionError("base change needs a verified hom")
    e = h.apply_matrix(p.matrix)
    if h.target.mat_mul(e, e) != e:
        raise InternalCheckError("base change broke idempotency")
    return ProjModule(h.target, e)


@dataclass(frozen=True)
class ModIso:
    """Two-sided isomorphism witness between modules over one ring."""

    source: ProjModule
    target: ProjModule
    fwd: PolyMatrix
    bwd: PolyMatrix

    @staticmethod
    def make(source: ProjModule, target: ProjModule,
             fwd: PolyMatrix, bwd: PolyMatrix) -> "ModIso":
        if source.ring != target.ring:
            raise ContextError("iso between modules over different rings")
        ring = source.ring
        fwd = ring.nf_matrix(fwd)
        bwd = ring.nf_matrix(bwd)
        es, et = source.matrix, target.matrix
        if fwd != ring.mat_mul(ring.mat_mul(et, fwd), es):
            raise PreconditionError("forward witness is not a corner map")
        if bwd != ring.mat_mul(ring.mat_mul(es, bwd), et):
            raise PreconditionError("backward witness is not a corner map")
        if ring.mat_mul(bwd, fwd) != es:
            raise PreconditionError("bwd * fwd is not the source idempotent")
        if ring.mat_mul(fwd, bwd) != et:
            raise PreconditionError("fwd * bwd is not the target idempotent")
        return ModIso(source, target, fwd, bwd)

    @staticmethod
    def identity(p: ProjModule) -> "ModIso":
        return ModIso.make(p, p, p.matrix, p.matrix)

    @property
    def ring(self) -> QuotientRing:
        return self.source.ring

    def inverse(self) -> "ModIso":
        return ModIso.make(self.target, self.source, self.bwd, self.fwd)

    def compose(self, inner: "ModIso") -> "ModIso":
        """self after inner."""
        if inner.target.matrix != self.source.matrix or inner.ring != self.ring:
            raise ContextError("isos do not compose")
        ring = self.ring
        return ModIso.make(inner.source, self.target,
                           ring.mat_mul(self.fwd, inner.fwd),
                           ring.mat_mul(inner.bwd, self.bwd))

    def apply_hom(self, h: RingHom) -> "ModIso":
        return ModIso.make(base_change(self.source, h), base_change(self.target, h),
                           h.apply_matrix(self.fwd), h.apply_matrix(self.bwd))


def conjugation_iso(p: ProjModule, g: GLMat, target_matrix: PolyMatrix) -> ModIso:
    """Iso from im(E) to im(g E g^-1) witnessed by corner-projected g."""
    ring = p.ring
    if g.ring != ring:
        raise ContextError("conjugator over a different ring")
    tgt = ProjModule.make(ring, target_matrix)
    fwd = ring.mat_mul(ring.mat_mul(tgt.matrix, g.mat), p.matrix)
    bwd = ring.mat_mul(ring.mat_mul(p.matrix, g.inv), tgt.matrix)
    return ModIso.make(p, tgt, fwd, bwd)


# -- unimodular rows ---------------------------------------------------------

@dataclass(frozen=True)
class UmRow:
    """Row v with completion certificate w: v * w^T == 1 in the ring."""

    ring: QuotientRing
    v: PolyMatrix
    w: PolyMatrix

    @staticmethod
    def make(ring: QuotientRing, v: PolyMatrix, w: PolyMatrix) -> "UmRow":
        v = ring.nf_matrix(v)
        w = ring.nf_matrix(w)
        if v.rows != 1 or w.rows != 1 or v.cols != w.cols:
            raise ShapeError("unimodular data must be two rows of equal length")
        prod = ring.mat_mul(v, w.transpose())
        if prod[0, 0] != ring.context.one():
            raise PreconditionError(f"v * w^T == {prod[0, 0]}, expected 1")
        return UmRow(ring, v, w)

    @property
    def width(self) -> int:
        return self.v.cols

    def augmented(self) -> tuple:
        return self.v.augmentation(), self.w.augmentation()

    def apply_hom(self, h: RingHom) -> "UmRow":
        return UmRow.make(h.target, h.apply_matrix(self.v), h.apply_matrix(self.w))


def kernel_module(u: UmRow) -> ProjModule:
    """The kernel of the row map as an idempotent image: I - w^T v."""
    ring = u.ring
    e = ring.mat_mul(u.w.transpose(), u.v)
    eye = PolyMatrix.identity(ring.context, u.width)
    k = ring.nf_matrix(eye - e)
    p = ProjModule.make(ring, k)
    if not ring.mat_mul(u.v, p.matrix).is_zero():
        raise InternalCheckError("kernel idempotent does not kill the row")
    return p


# -- unimodular elements of a projective module -------------------------------

@dataclass(frozen=True)
class UmElement:
    """Column u in im(E) with a functional row c: c * u == 1, c == c * E."""

    module: ProjModule
    u: PolyMatrix
    c: PolyMatrix

    @staticmethod
    def make(module: ProjModule, u: PolyMatrix, c: PolyMatrix) -> "UmElement":
        ring = module.ring
        u = ring.nf_matrix(u)
        c = ring.nf_matrix(c)
        if u.cols != 1 or c.rows != 1 or u.rows != module.size or c.cols != module.size:
            raise ShapeError("unimodular element shapes do not match the module")
        if ring.mat_mul(module.matrix, u) != u:
            raise PreconditionError("element does not lie in the module")
        if ring.mat_mul(c, module.matrix) != c:
            raise PreconditionError("functional does not factor through the module")
        if ring.mat_mul(c, u)[0, 0] != ring.context.one():
            raise PreconditionError("functional does not evaluate to 1")
        return UmElement(module, u, c)

    def apply_hom(self, h: RingHom) -> "UmElement":
        return UmElement.make(base_change(self.module, h),
                              h.apply_matrix(self.u), h.apply_matrix(self.c))


# -- Milnor patching -----------------------------------------------------------

def milnor_patch(square: FiberSquare, rank: int, sigma: GLMat) -> ProjModule:
    """Glue the free rank-r patch data twisted by sigma over the overlap.

    sigma is stabilized to sigma (+) sigma^-1 in GL_2r via the Whitehead
    lift U over the cone-side ring, the idempotent U (I_r (+) 0) U^-1 is
    glued against the constant I_r (+) 0, and the result restricts exactly
    to its parts.
    """
    from .lifting import whitehead_lift

    if sigma.ring != square.a0:
        raise ContextError("patch data must live over the overlap ring")
    if sigma.size != rank:
        raise ShapeError("sigma size must equal the requested rank")
    u = whitehead_lift(sigma, square.j2, square.section)
    ctx = square.a.context
    corner = PolyMatrix.identity(ctx, rank).direct_sum(PolyMatrix.zeros(ctx, rank, rank))
    e2 = square.a2.nf_matrix(u.mat * corner * u.inv)
    e1 = square.a1.nf_matrix(corner)
    if square.j1.apply_matrix(e1) != square.j2.apply_matrix(e2):
        raise InternalCheckError("patch data incompatible over the overlap")
    e = glue_matrix(square, e1, e2)
    p = ProjModule.make(square.a, e)
    if square.i1.apply_matrix(p.matrix) != e1 or square.i2.apply_matrix(p.matrix) != e2:
        raise InternalCheckError("glued idempotent does not restrict to its parts")
    if module_rank(p) != rank:
        raise InternalCheckError("glued module has the wrong rank")
    return p


@dataclass(frozen=True)
class GlueTrace:
    """Intermediates of an iso glue, kept for the certificate."""

    mismatch: ModIso     # automorphism of Q_0
    alpha2: ModIso       # its lift to Aut(Q_2)
    phi2_fixed: ModIso   # corrected second patch iso


def glue_iso(square: FiberSquare, p: ProjModule, q: ProjModule,
             phi1: ModIso, phi2: ModIso,
             aut_lifter: Callable[[ModIso], ModIso]) -> ModIso:
    """Patch isos P_i ~ Q_i into P ~ Q, fixing the overlap mismatch.

    The mismatch j2(phi2) o j1(phi1)^-1 in Aut(Q_0) is lifted to Aut(Q_2)
    by the caller-supplied lifter, phi2 is corrected by its inverse, and the
    corrected pair is glued entrywise.
    """
    iso, _ = glue_iso_traced(square, p, q, phi1, phi2, aut_lifter)
    return iso


def glue_iso_traced(square: FiberSquare, p: ProjModule, q: ProjModule,
                    phi1: ModIso, phi2: ModIso,
                    aut_lifter: Callable[[ModIso], ModIso]):
    _check_glue_inputs(square, p, q, phi1, phi2)
    j1, j2 = square.j1, square.j2
    phi1_0 = phi1.apply_hom(j1)
    phi2_0 = phi2.apply_hom(j2)
    mismatch = phi2_0.compose(phi1_0.inverse())  # Aut(Q_0)
    alpha2 = aut_lifter(mismatch)
    _check_lifter_output(square, alpha2, mismatch, phi2.target)
    phi2_fixed = alpha2.inverse().compose(phi2)
    fwd = glue_matrix(square, phi1.fwd, phi2_fixed.fwd)
    bwd = glue_matrix(square, phi1.bwd, phi2_fixed.bwd)
    iso = ModIso.make(p, q, fwd, bwd)
    return iso, GlueTrace(mismatch, alpha2, phi2_fixed)


def _check_glue_inputs(square, p, q, phi1, phi2) -> None:
    if p.ring != square.a or q.ring != square.a:
        raise ContextError("modules must live over the square's total ring")
    if phi1.source.matrix != square.i1.apply_matrix(p.matrix) or \
       phi1.target.matrix != square.i1.apply_matrix(q.matrix):
        raise PreconditionError("phi1 does not connect the i1 base changes")
    if phi2.source.matrix != square.i2.apply_matrix(p.matrix) or \
       phi2.target.matrix != square.i2.apply_matrix(q.matrix):
        raise PreconditionError("phi2 does not connect the i2 base changes")


def _check_lifter_output(square, alpha2: ModIso, alpha0: ModIso, q2: ProjModule) -> None:
    if alpha2.ring != square.a2:
        raise LifterError("lifter output lives over the wrong ring")
    if alpha2.source.matrix != q2.matrix or alpha2.target.matrix != q2.matrix:
        raise LifterError("lifter output is not an automorphism of Q_2")
    down = alpha2.apply_hom(square.j2)
    if down.fwd != alpha0.fwd or down.bwd != alpha0.bwd:
        raise LifterError("lifter output does not reduce to the requested automorphism")


def pair_aut(square: FiberSquare, p: ProjModule, alpha1: ModIso,
             aut_lifter: Callable[[ModIso], ModIso]) -> ModIso:
    """Extend an automorphism of P_1 to P across the square."""
    if p.ring != square.a:
        raise ContextError("module must live over the square's total ring")
    p1 = base_change(p, square.i1)
    if alpha1.source.matrix != p1.matrix or alpha1.target.matrix != p1.matrix:
        raise PreconditionError("alpha1 is not an automorphism of the i1 base change")
    alpha0 = alpha1.apply_hom(square.j1)
    alpha2 = aut_lifter(alpha0)
    p2 = base_change(p, square.i2)
    _check_lifter_output(square, alpha2, alpha0, p2)
    fwd = glue_matrix(square, alpha1.fwd, alpha2.fwd)
    bwd = glue_matrix(square, alpha1.bwd, alpha2.bwd)
    return ModIso.make(p, p, fwd, bwd)


def pair_um(square: FiberSquare, p: ProjModule, u1: UmElement,
            um_lifter: Callable[[UmElement], UmElement]) -> UmElement:
    """Extend a unimodular element of P_1 to P across the square."""
    if p.ring != square.a:
        raise ContextError("module must live over the square's total ring")
    p1 = base_change(p, square.i1)
    if u1.module.matrix != p1.matrix:
        raise PreconditionError("u1 does not live in the i1 base change")
    u0 = u1.apply_hom(square.j1)
    u2 = um_lifter(u0)
    p2 = base_change(p, square.i2)
    if u2.module.matrix != p2.matrix or u2.module.ring != square.a2:
        raise LifterError("lifter output does not live in P_2")
    down_u = square.j2.apply_matrix(u2.u)
    down_c = square.j2.apply_matrix(u2.c)
    if down_u != u0.u or down_c != u0.c:
        raise LifterError("lifter output does not reduce to the pushed element")
    u = glue_matrix(square, u1.u, u2.u)
    c = glue_matrix(square, u1.c, u2.c)
    return UmElement.make(p, u, c)


# -- default lifters through the section ---------------------------------------

def section_aut_lifter(square: FiberSquare, q2: ProjModule) -> Callable[[ModIso], ModIso]:
    """Constant lift of overlap automorphisms through the section.

    Sound whenever Q_2's idempotent is the section image of its reduction,
    which holds for every base change of a module defined over the total
    ring of the square; otherwise raises LifterError.
    """
    def lifter(alpha0: ModIso) -> ModIso:
        if alpha0.ring != square.a0:
            raise LifterError("expected an automorphism over the overlap ring")
        lifted_e = square.section.apply_matrix(alpha0.source.matrix)
        if lifted_e != q2.matrix:
            raise LifterError("Q_2 is not the section image of its reduction")
        fwd = square.section.apply_matrix(alpha0.fwd)
        bwd = square.section.apply_matrix(alpha0.bwd)
        return ModIso.make(q2, q2, fwd, bwd)

    return lifter


def section_um_lifter(square: FiberSquare, p2: ProjModule) -> Callable[[UmElement], UmElement]:
    """Constant lift of overlap unimodular elements through the section."""
    def lifter(u0: UmElement) -> UmElement:
        if u0.module.ring != square.a0:
            raise LifterError("expected an element over the overlap ring")
        lifted_e = square.section.apply_matrix(u0.module.matrix)
        if lifted_e != p2.matrix:
            raise LifterError("P_2 is not the section image of its reduction")
        return UmElement.make(p2,
                              square.section.apply_matrix(u0.u),
                              square.section.apply_matrix(u0.c))

    return lifter
