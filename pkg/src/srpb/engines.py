"""Certificate-emitting engines: extension witnesses, cancellation
witnesses, and unimodular-row lifting.

The three engines share one recursion scheme: split the ring's complex at
an apex, push the problem to the deletion side and the cone side, solve
both (recursively, down to simplex base cases), fix the overlap mismatch
with a lifter through the section, and glue.  Base cases are discharged by
a built-in oracle chain (constant presentations, then univariate freeness
via Smith normal form) followed by an optional caller oracle; anything
else surfaces as an Obligation rather than a guess.

Every step deposits its matrices into a certificate payload that the
independent verifier re-checks with plain normal-form arithmetic; the
engines never appear on the verification path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import certs
from .errors import (AllStrategiesFailed, InternalCheckError, LifterError,
                     PreconditionError)
from .lifting import lift_gl
from .matrix import PolyMatrix, scalar_inverse
from .projmod import (ModIso, ProjModule, UmRow, base_change, glue_iso_traced,
                      kernel_module, module_rank, section_aut_lifter)
from .quotient import (GLMat, QuotientRing, RingHom, build_fiber_square,
                       complex_of_ring)
from .smith import smith_normal_form

ExtendOracle = Callable[[ProjModule], Optional[ModIso]]


@dataclass(frozen=True)
class Obligation:
    """An undischarged base case, returned instead of a guessed witness."""

    kind: str  # "extend" | "stable-extend" | "cancel"
    ring: QuotientRing
    module: PolyMatrix

    def payload(self) -> dict:
        return {"kind": self.kind,
                "ring": certs.ring_payload(self.ring),
                "module": certs.matrix_payload(self.module)}


@dataclass(frozen=True)
class HypothesisProfile:
    """Advisory record of the dimension/characteristic side conditions."""

    characteristic: int
    rank: int
    base_dimension: int = 0

    def payload(self) -> dict:
        p, r = self.characteristic, self.rank
        return {
            "characteristic": p,
            "rank": r,
            "base_dimension": self.base_dimension,
            "char_prime_to_rank_factorial": bool(p) and math.gcd(p, math.factorial(r)) == 1,
            "rank_at_least_half_dim_plus_two": r >= self.base_dimension / 2 + 2,
        }


@dataclass
class ExtendResult:
    iso: Optional[ModIso]
    certificate: dict
    obligations: tuple

    @property
    def ok(self) -> bool:
        return self.iso is not None and not self.obligations


@dataclass
class CancelResult:
    iso: Optional[ModIso]
    certificate: dict
    obligations: tuple

    @property
    def ok(self) -> bool:
        return self.iso is not None and not self.obligations


@dataclass
class UmLiftResult:
    row: Optional[UmRow]
    certificate: dict
    obligations: tuple = ()
    diagnostics: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.row is not None


def always_fail_oracle(p: ProjModule) -> Optional[ModIso]:
    """Stub oracle that discharges nothing."""
    return None


def stable_adapter(base_oracle: Optional[ExtendOracle]) -> ExtendOracle:
    """Wrap a stable-extension base oracle for use by the extension engine.

    The wrapped oracle's contract is the stable one (its inputs come with
    a free rank-one complement already known to be extended); undischarged
    base cases are tagged "stable-extend".
    """
    def wrapped(p: ProjModule) -> Optional[ModIso]:
        return base_oracle(p) if base_oracle is not None else None

    wrapped.obligation_kind = "stable-extend"  # type: ignore[attr-defined]
    return wrapped


def conjugation_witness_oracle(g: GLMat) -> ExtendOracle:
    """Oracle built from offline construction data.

    When the module at a base case is a conjugate of a constant idempotent
    by the image of ``g``, the reinterpreted conjugator is a witness; the
    oracle verifies everything and declines otherwise.
    """
    def oracle(p: ProjModule) -> Optional[ModIso]:
        ring = p.ring
        try:
            h = GLMat(ring, PolyMatrix(ring.context, g.mat.rows, g.mat.cols, g.mat.entries),
                      PolyMatrix(ring.context, g.inv.rows, g.inv.cols, g.inv.entries))
        except PreconditionError:
            return None
        if h.size != p.size:
            return None
        c = ring.mat_mul(ring.mat_mul(h.inv, p.matrix), h.mat)
        if not c.is_constant():
            return None
        h0 = GLMat(ring, h.mat.augmentation(), h.inv.augmentation())
        target = ProjModule.make(ring, p.augmented_matrix())
        fwd = ring.mat_mul(ring.mat_mul(h0.mat, c), h.inv)
        bwd = ring.mat_mul(ring.mat_mul(h.mat, c), h0.inv)
        return ModIso.make(p, target, fwd, bwd)

    return oracle


def chain_oracles(*oracles: Optional[ExtendOracle]) -> ExtendOracle:
    """First oracle that discharges wins."""
    def oracle(p: ProjModule) -> Optional[ModIso]:
        for o in oracles:
            if o is None:
                continue
            iso = o(p)
            if iso is not None:
                return iso
        return None

    return oracle


# -- built-in base oracle -------------------------------------------------------

def _point_normalize(iso: ModIso) -> ModIso:
    """Compose with a constant corner automorphism so fwd(0) is the target."""
    ring = iso.ring
    theta = iso.fwd.augmentation()
    theta_back = iso.bwd.augmentation()
    if theta == iso.target.matrix:
        return iso
    fwd = ring.mat_mul(theta_back, iso.fwd)
    bwd = ring.mat_mul(iso.bwd, theta)
    return ModIso.make(iso.source, iso.target, fwd, bwd)


def _builtin_extend_base(p: ProjModule):
    """(method, iso) for constant or univariate base cases, else None."""
    ring = p.ring
    e = p.matrix
    if e.is_constant():
        target = ProjModule.make(ring, e)
        return "constant", ModIso.make(p, target, e, e)
    if len(ring.free_variables()) <= 1:
        return "smith", _smith_freeness_iso(p)
    return None


def _smith_freeness_iso(p: ProjModule) -> ModIso:
    """Change of basis to a constant idempotent over a univariate base."""
    ring = p.ring
    ctx = ring.context
    e = p.matrix
    n = e.rows
    eye = PolyMatrix.identity(ctx, n)
    dec1 = smith_normal_form(eye - e)   # kernel of I - E  =  im(E)
    dec0 = smith_normal_form(e)         # kernel of E      =  im(I - E)
    cols = []
    for dec in (dec1, dec0):
        for j in range(n):
            if dec.d[j, j].is_zero():
                cols.append(dec.v.col(j))
    if len(cols) != n:
        raise InternalCheckError("kernel bases do not span the free module")
    g = PolyMatrix(ctx, n, n, [cols[j][i] for i in range(n) for j in range(n)])
    det = g.det()
    if not det.is_constant() or det.is_zero():
        raise InternalCheckError("basis matrix determinant is not a unit")
    inv_scalar = ctx.constant(ctx.field.inv(det.constant_term()))
    ginv = g.adjugate().scale(inv_scalar)
    s = len([j for j in range(n) if dec1.d[j, j].is_zero()])
    corner = PolyMatrix.identity(ctx, s).direct_sum(PolyMatrix.zeros(ctx, n - s, n - s))
    if ring.nf_matrix(ginv * e * g) != ring.nf_matrix(corner):
        raise InternalCheckError("basis change does not diagonalize the idempotent")
    g0 = g.augmentation()
    g0inv = scalar_inverse(g0)
    target = ProjModule.make(ring, p.augmented_matrix())
    fwd = ring.nf_matrix(g0 * corner * ginv)
    bwd = ring.nf_matrix(g * corner * g0inv)
    return ModIso.make(p, target, fwd, bwd)


# -- extension engine -----------------------------------------------------------

def extend_witness(p: ProjModule, oracle: Optional[ExtendOracle] = None) -> ExtendResult:
    """Witness that p is extended from the base field, or obligations.

    Returns the final isomorphism from p to the base change of its
    augmentation together with a certificate tree; undischarged base cases
    are collected as obligations and leave the tree partial.
    """
    if not p.ring.is_square_free():
        raise PreconditionError("extension engine needs a square-free presentation")
    budget = len(complex_of_ring(p.ring).face_masks) + 1
    iso, node, obligations = _extend_rec(p, oracle, budget)
    profile = HypothesisProfile(p.ring.field.char, module_rank(p))
    cert = certs.wrap_root(node, profile.payload(), [o.payload() for o in obligations])
    if iso is not None:
        _assert_extend_result(p, iso)
    return ExtendResult(iso, cert, tuple(obligations))


def _assert_extend_result(p: ProjModule, iso: ModIso) -> None:
    if iso.source.matrix != p.matrix:
        raise InternalCheckError("witness source is not the input module")
    if iso.target.matrix != p.augmented_matrix():
        raise InternalCheckError("witness target is not the augmented module")


def _oracle_kind(oracle) -> str:
    return getattr(oracle, "obligation_kind", "extend")


def _extend_rec(p: ProjModule, oracle: Optional[ExtendOracle], budget: int):
    if budget <= 0:
        raise InternalCheckError("decomposition recursion exceeded its face budget")
    ring = p.ring
    cplx = complex_of_ring(ring)
    if cplx.is_simplex() or p.matrix.is_constant():
        got = _builtin_extend_base(p)
        method = None
        iso = None
        if got is not None:
            method, iso = got
        elif oracle is not None:
            iso = oracle(p)
            if iso is not None:
                _assert_extend_result(p, iso)
                iso = _point_normalize(iso)
                method = "oracle"
        if iso is None:
            ob = Obligation(_oracle_kind(oracle), ring, p.matrix)
            return None, certs.base_node("extend", ring, p.matrix, obligation=ob.kind), [ob]
        iso = _point_normalize(iso)
        node = certs.base_node("extend", ring, p.matrix, method=method,
                               target=iso.target.matrix, iso=iso)
        return iso, node, []

    square = build_fiber_square(ring.field, cplx, ring.context.order)
    if square.a != ring:
        raise InternalCheckError("fiber square total ring mismatch")
    p1 = base_change(p, square.i1)
    p2 = base_change(p, square.i2)
    iso1, node1, ob1 = _extend_rec(p1, oracle, budget - 1)
    iso2, node2, ob2 = _extend_rec(p2, oracle, budget - 1)
    obligations = list(ob1) + list(ob2)
    if obligations:
        node = certs.decompose_node("extend", ring, p.matrix, square, [node1, node2])
        return None, node, obligations

    q = ProjModule.make(ring, p.augmented_matrix())
    q2 = base_change(q, square.i2)
    lifter = section_aut_lifter(square, q2)
    iso, trace = glue_iso_traced(square, p, q, iso1, iso2, lifter)
    node = certs.decompose_node("extend", ring, p.matrix, square, [node1, node2],
                                glue=trace, iso=iso, target=q.matrix)
    return iso, node, []


# -- cancellation engine ----------------------------------------------------------

def cancel_witness(p: ProjModule, q: ProjModule, stab: ModIso,
                   aut_lifter_factory=None) -> CancelResult:
    """Witness p isomorphic to q given a stabilized isomorphism, or obligations.

    ``stab`` must connect p + free(1) to q + free(1); it is validated and
    recorded.  ``aut_lifter_factory(square, q2)`` supplies the overlap
    automorphism lifter (defaults to the constant lift through the section,
    whose failures surface as obligations of kind "cancel").
    """
    if p.ring != q.ring:
        raise PreconditionError("modules over different rings")
    if not p.ring.is_square_free():
        raise PreconditionError("cancellation engine needs a square-free presentation")
    if module_rank(p) != module_rank(q):
        raise PreconditionError("modules of different ranks cannot be matched")
    _validate_stab(p, q, stab)
    budget = len(complex_of_ring(p.ring).face_masks) + 1
    factory = aut_lifter_factory or section_aut_lifter
    iso, node, obligations = _cancel_rec(p, q, factory, budget)
    profile = HypothesisProfile(p.ring.field.char, module_rank(p))
    cert = certs.wrap_root(node, profile.payload(), [o.payload() for o in obligations],
                           stab=stab)
    if iso is not None and (iso.source.matrix != p.matrix or iso.target.matrix != q.matrix):
        raise InternalCheckError("cancellation witness endpoints are wrong")
    return CancelResult(iso, cert, tuple(obligations))


def _validate_stab(p: ProjModule, q: ProjModule, stab: ModIso) -> None:
    ctx = p.ring.context
    one = PolyMatrix.identity(ctx, 1)
    want_src = p.matrix.direct_sum(one)
    want_tgt = q.matrix.direct_sum(one)
    if stab.source.matrix != want_src or stab.target.matrix != want_tgt:
        raise PreconditionError("stabilized iso does not connect P+free and Q+free")


def _cancel_base(p: ProjModule, q: ProjModule):
    ring = p.ring
    ep, eq = p.matrix, q.matrix
    if ep.is_constant() and eq.is_constant():
        return "constant", _constant_pair_iso(p, q)
    if len(ring.free_variables()) <= 1:
        ip = _smith_freeness_iso(p)
        iq = _smith_freeness_iso(q)
        mid = _constant_pair_iso(ip.target, iq.target)
        return "smith", iq.inverse().compose(mid).compose(ip)
    return None


def _constant_pair_iso(p: ProjModule, q: ProjModule) -> ModIso:
    """Explicit iso between equal-rank constant idempotents over a field."""
    from .matrix import column_space_basis, kernel_basis

    ring = p.ring
    ctx = ring.context

    def basis_matrix(e: PolyMatrix) -> PolyMatrix:
        cols = column_space_basis(e) + kernel_basis(e)
        n = e.rows
        if len(cols) != n:
            raise InternalCheckError("constant idempotent bases do not span")
        return PolyMatrix.from_scalars(ctx, [[cols[j][i] for j in range(n)] for i in range(n)])

    gp = basis_matrix(p.matrix)
    gq = basis_matrix(q.matrix)
    h = gq * scalar_inverse(gp)
    hinv = gp * scalar_inverse(gq)
    fwd = ring.mat_mul(ring.mat_mul(q.matrix, h), p.matrix)
    bwd = ring.mat_mul(ring.mat_mul(p.matrix, hinv), q.matrix)
    return ModIso.make(p, q, fwd, bwd)


def _cancel_rec(p: ProjModule, q: ProjModule, lifter_factory, budget: int):
    if budget <= 0:
        raise InternalCheckError("decomposition recursion exceeded its face budget")
    ring = p.ring
    cplx = complex_of_ring(ring)
    if cplx.is_simplex() or (p.matrix.is_constant() and q.matrix.is_constant()):
        got = _cancel_base(p, q)
        if got is None:
            ob = Obligation("cancel", ring, p.matrix)
            node = certs.base_node("cancel", ring, p.matrix, other=q.matrix,
                                   obligation=ob.kind)
            return None, node, [ob]
        method, iso = got
        node = certs.base_node("cancel", ring, p.matrix, other=q.matrix,
                               method=method, target=q.matrix, iso=iso)
        return iso, node, []

    square = build_fiber_square(ring.field, cplx, ring.context.order)
    p1, q1 = base_change(p, square.i1), base_change(q, square.i1)
    p2, q2 = base_change(p, square.i2), base_change(q, square.i2)
    iso1, node1, ob1 = _cancel_rec(p1, q1, lifter_factory, budget - 1)
    iso2, node2, ob2 = _cancel_rec(p2, q2, lifter_factory, budget - 1)
    obligations = list(ob1) + list(ob2)
    if obligations:
        node = certs.decompose_node("cancel", ring, p.matrix, square, [node1, node2],
                                    other=q.matrix)
        return None, node, obligations
    try:
        iso, trace = glue_iso_traced(square, p, q, iso1, iso2,
                                     lifter_factory(square, q2))
    except LifterError:
        ob = Obligation("cancel", ring, p.matrix)
        node = certs.decompose_node("cancel", ring, p.matrix, square, [node1, node2],
                                    other=q.matrix)
        return None, node, obligations + [ob]
    node = certs.decompose_node("cancel", ring, p.matrix, square, [node1, node2],
                                glue=trace, iso=iso, target=q.matrix, other=q.matrix)
    return iso, node, []


# -- unimodular row lifting --------------------------------------------------------

def umrow_lift(row: UmRow, oracle: Optional[ExtendOracle] = None,
               target: Optional[QuotientRing] = None) -> UmLiftResult:
    """Lift a unimodular row along R/I -> R/J for square-free monomial J.

    Builds the kernel module, extends it from the base via the extension
    engine, realizes the comparison matrix from the witness pair, lifts it
    through the GL strategy stack, and re-verifies both the congruence and
    the unimodularity certificate of the lifted row.
    """
    ring = row.ring
    if not ring.is_square_free():
        raise PreconditionError("row lifting needs a square-free quotient")
    if target is None:
        target = QuotientRing.make(ring.field, ring.nvars, (), ring.context.order)
    for g in target.generators:
        if ring.survives(g):
            raise PreconditionError("target ideal is not contained in the row's ideal")

    kernel = kernel_module(row)
    ext = extend_witness(kernel, oracle)
    profile = HypothesisProfile(ring.field.char, row.width)
    if not ext.ok:
        cert = certs.umrow_node(ring, target, row, ext.certificate,
                                profile.payload(), partial=True)
        return UmLiftResult(None, cert, obligations=ext.obligations)

    iso = ext.iso
    v0 = row.v.augmentation()
    w0 = row.w.augmentation()
    sigma_m = ring.nf_matrix(iso.bwd + row.w.transpose() * v0)
    sigma_inv = ring.nf_matrix(iso.fwd + w0.transpose() * row.v)
    sigma = GLMat(ring, sigma_m, sigma_inv)
    if ring.nf_matrix(row.v * sigma.mat) != ring.nf_matrix(v0):
        raise InternalCheckError("comparison matrix does not move v to v(0)")

    pi = RingHom.quotient_map(target, ring)
    try:
        delta = lift_gl(sigma, pi)
    except AllStrategiesFailed as exc:
        cert = certs.umrow_node(ring, target, row, ext.certificate,
                                profile.payload(), sigma=sigma, partial=True)
        return UmLiftResult(None, cert, diagnostics=dict(exc.diagnostics))

    u = target.nf_matrix(v0 * delta.inv)
    w_prime = target.nf_matrix(w0 * delta.mat.transpose())
    lifted = UmRow.make(target, u, w_prime)
    if pi.apply_matrix(lifted.v) != row.v:
        raise InternalCheckError("lifted row is not congruent to the input")
    cert = certs.umrow_node(ring, target, row, ext.certificate, profile.payload(),
                            sigma=sigma, delta=delta, lifted=lifted)
    return UmLiftResult(lifted, cert)
