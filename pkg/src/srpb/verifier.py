"""Independent certificate verifier.

Re-evaluates every identity a certificate claims using only normal-form
arithmetic over the rings named in the file; no engine code is imported.
One rule per identity type:

    idempotency            nf(E*E) == E
    hom well-definedness   every source ideal generator maps to 0
    square commutativity   j1 o i1 == j2 o i2 on variables, section law
    restriction            child data equals the hom image of parent data
    ModIso laws            the four corner identities
    compose                corrected patch iso equals its defining product
    Whitehead reduction    j2(U) == sigma (+) sigma^-1 and U*U^-1 == I
    GL lift reduction      pi(Delta) == sigma and Delta*Delta^-1 == I
    Um congruence          pi(u) == v, nf(u*w'^T) == 1, v*sigma == v(0)
    augmentation           target == module evaluated at zero, constant
    rank                   augmentation rank equals the claimed rank

Failures are report entries naming the node and the identity, with both
sides' normal forms; the verifier never raises on bad certificates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

from . import certs
from .errors import SrpbError
from .matrix import PolyMatrix, scalar_rank
from .poly import PolyRing, format_polynomial
from .quotient import QuotientRing, RingHom

CHECK_KINDS = (
    "idempotency", "hom-defined", "square-commutes", "restriction",
    "mod-iso-laws", "compose", "whitehead", "gl-lift", "um-congruence",
    "augmentation", "rank", "structure",
)


@dataclass
class ReportEntry:
    node: str
    check: str
    ok: bool
    detail: str = ""


@dataclass
class VerifierReport:
    entries: List[ReportEntry] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def first_failure(self) -> Optional[ReportEntry]:
        for e in self.entries:
            if not e.ok:
                return e
        return None

    def add(self, node: str, check: str, ok: bool, detail: str = "") -> None:
        self.entries.append(ReportEntry(node, check, ok, detail))

    def summary(self) -> str:
        bad = [e for e in self.entries if not e.ok]
        status = "PASS" if not bad else "FAIL"
        lines = [f"{status}: {len(self.entries) - len(bad)}/{len(self.entries)} checks passed"]
        for w in self.warnings:
            lines.append(f"warning: {w}")
        for e in self.entries:
            mark = "ok  " if e.ok else "FAIL"
            detail = f" :: {e.detail}" if e.detail else ""
            lines.append(f"  [{mark}] {e.node} {e.check}{detail}")
        return "\n".join(lines)


def verify_file(path: str) -> VerifierReport:
    return verify_payload(certs.read_payload(path, "cert"))


def verify_payload(payload: dict) -> VerifierReport:
    report = VerifierReport()
    root = payload.get("root")
    if root is None or root.get("kind") == "empty":
        report.warnings.append("certificate claims nothing; vacuous pass")
        return report
    try:
        _verify_node(root, "root", report)
        if "stab" in payload:
            _verify_stab(payload, root, report)
    except SrpbError as exc:
        report.add("root", "structure", False, f"malformed certificate: {exc}")
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        report.add("root", "structure", False, f"malformed certificate: {exc!r}")
    for ob in payload.get("obligations", []):
        report.warnings.append(f"undischarged obligation: {ob.get('kind')}")
    return report


def _verify_stab(payload: dict, root: dict, report: VerifierReport) -> None:
    """The recorded stabilized iso must connect E_P (+) 1 and E_Q (+) 1."""
    ring = certs.parse_ring(root["ring"])
    ctx = ring.context
    e_p = certs.parse_matrix(root["module"], ctx)
    e_q = certs.parse_matrix(root["module_other"], ctx)
    one = PolyMatrix.identity(ctx, 1)
    fwd = certs.parse_matrix(payload["stab"]["fwd"], ctx)
    bwd = certs.parse_matrix(payload["stab"]["bwd"], ctx)
    _check_iso_laws(report, "root.stab", ring, e_p.direct_sum(one),
                    e_q.direct_sum(one), fwd, bwd)


# -- shared helpers --------------------------------------------------------------

def _mat(node: dict, key: str, ctx: PolyRing) -> PolyMatrix:
    return certs.parse_matrix(node[key], ctx)

def _pair(node: dict, key: str, ctx: PolyRing) -> tuple:
    return (certs.parse_matrix(node[key]["fwd"], ctx),
            certs.parse_matrix(node[key]["bwd"], ctx))


def _node_iso(node: dict, ctx: PolyRing) -> tuple:
    """The final iso of a discharged base or decompose node."""
    payload = node["glue"]["iso"] if node.get("kind") == "decompose" else node["iso"]
    return (certs.parse_matrix(payload["fwd"], ctx),
            certs.parse_matrix(payload["bwd"], ctx))


def _glpair(node: dict, key: str, ctx: PolyRing) -> tuple:
    return (certs.parse_matrix(node[key]["m"], ctx),
            certs.parse_matrix(node[key]["minv"], ctx))


def _eq(report, where, check, lhs: PolyMatrix, rhs: PolyMatrix, what: str) -> bool:
    ok = lhs == rhs
    detail = "" if ok else f"{what}: left {_show(lhs)} right {_show(rhs)}"
    report.add(where, check, ok, detail)
    return ok


def _show(m: PolyMatrix) -> str:
    return "[" + "; ".join(", ".join(format_polynomial(p) for p in m.row(i))
                           for i in range(m.rows)) + "]"


def _check_idempotent(report, where, ring: QuotientRing, e: PolyMatrix) -> None:
    _eq(report, where, "idempotency", ring.mat_mul(e, e), e, "E*E vs E")


def _check_iso_laws(report, where, ring: QuotientRing, es: PolyMatrix, et: PolyMatrix,
                    fwd: PolyMatrix, bwd: PolyMatrix) -> None:
    nf = ring.nf_matrix
    mm = ring.mat_mul
    ok = (nf(fwd) == mm(mm(et, fwd), es) and nf(bwd) == mm(mm(es, bwd), et)
          and mm(bwd, fwd) == nf(es) and mm(fwd, bwd) == nf(et))
    detail = "" if ok else "corner laws fail"
    report.add(where, "mod-iso-laws", ok, detail)


def _identity_hom(source: QuotientRing, target: QuotientRing) -> RingHom:
    imgs = [target.context.variable(i) for i in range(source.nvars)]
    return RingHom.make(source, target, imgs, verify=False)


def _check_hom_defined(report, where, h: RingHom, label: str) -> None:
    bad = None
    for g in h.source.generators:
        image = h(h.source.context.monomial(g))
        if not image.is_zero():
            bad = (g, image)
            break
    ok = bad is None
    detail = "" if ok else f"{label}: generator {bad[0]} maps to {format_polynomial(bad[1])}"
    report.add(where, "hom-defined", ok, detail)


# -- square ----------------------------------------------------------------------

def _load_square(node: dict) -> dict:
    rings = {k: certs.parse_ring(v) for k, v in node["square"]["rings"].items()}
    ctxs = {k: r.context for k, r in rings.items()}
    homs_raw = node["square"]["homs"]

    def hom(name, src, tgt):
        imgs = [certs.parse_expression(t, ctxs[tgt]) for t in homs_raw[name]]
        return RingHom.make(rings[src], rings[tgt], imgs, verify=False)

    return {
        "rings": rings,
        "i1": hom("i1", "a", "a1"),
        "i2": hom("i2", "a", "a2"),
        "j1": hom("j1", "a1", "a0"),
        "j2": hom("j2", "a2", "a0"),
        "section": hom("section", "a0", "a2"),
        "apex": int(node["apex"]) if "apex" in node else int(node["square"]["apex"]),
    }


def _check_square(report, where, sq: dict) -> None:
    for name in ("i1", "i2", "j1", "j2", "section"):
        _check_hom_defined(report, where, sq[name], name)
    a = sq["rings"]["a"]
    ctx = a.context
    ok = True
    for v in range(a.nvars):
        xv = ctx.variable(v)
        if sq["j1"](sq["i1"](xv)) != sq["j2"](sq["i2"](xv)):
            ok = False
            break
    report.add(where, "square-commutes", ok, "" if ok else f"j1(i1(x{v})) != j2(i2(x{v}))")
    a0 = sq["rings"]["a0"]
    ok = True
    for v in range(a0.nvars):
        xv = a0.normal_form(a0.context.variable(v))
        if sq["j2"](sq["section"](xv)) != xv:
            ok = False
            break
    report.add(where, "square-commutes", ok, "" if ok else "section law fails")


# -- node dispatch -----------------------------------------------------------------

def _verify_node(node: dict, where: str, report: VerifierReport) -> None:
    kind = node.get("kind")
    if kind == "base":
        _verify_base(node, where, report)
    elif kind == "decompose":
        _verify_decompose(node, where, report)
    elif kind == "umrow-lift":
        _verify_umrow(node, where, report)
    elif kind == "gl-lift":
        _verify_gl_lift(node, where, report)
    elif kind == "patch":
        _verify_patch(node, where, report)
    elif kind == "empty":
        report.warnings.append(f"{where}: empty node")
    else:
        report.add(where, "structure", False, f"unknown node kind {kind!r}")


def _verify_base(node: dict, where: str, report: VerifierReport) -> None:
    ring = certs.parse_ring(node["ring"])
    ctx = ring.context
    e = _mat(node, "module", ctx)
    _check_idempotent(report, where, ring, e)
    if not node.get("discharged", False):
        report.warnings.append(f"{where}: obligation ({node.get('obligation')}) pending")
        return
    target = _mat(node, "target", ctx)
    fwd, bwd = _pair(node, "iso", ctx)
    _check_idempotent(report, where, ring, target)
    if node.get("task") == "extend":
        ok = target == e.augmentation() and target.is_constant()
        report.add(where, "augmentation", ok,
                   "" if ok else "target is not the augmented module")
    else:
        _eq(report, where, "restriction", target, _mat(node, "module_other", ctx),
            "cancel target vs other module")
    _check_iso_laws(report, where, ring, e, target, fwd, bwd)


def _verify_decompose(node: dict, where: str, report: VerifierReport) -> None:
    ring = certs.parse_ring(node["ring"])
    ctx = ring.context
    e = _mat(node, "module", ctx)
    _check_idempotent(report, where, ring, e)
    sq = _load_square(node)
    _check_square(report, where, sq)
    ok = sq["rings"]["a"] == ring
    report.add(where, "structure", ok, "" if ok else "square total ring differs")

    task = node.get("task", "extend")
    children = node.get("children", [])
    if len(children) != 2:
        report.add(where, "structure", False, "decompose node needs two children")
        return
    for idx, (corner, hom) in enumerate((("a1", sq["i1"]), ("a2", sq["i2"]))):
        child = children[idx]
        child_ring = certs.parse_ring(child["ring"])
        ok = child_ring == sq["rings"][corner]
        report.add(where, "structure", ok,
                   "" if ok else f"child {idx} ring is not the {corner} corner")
        child_e = certs.parse_matrix(child["module"], ctx)
        _eq(report, f"{where}.child{idx}", "restriction",
            child_e, hom.apply_matrix(e), "child module vs restriction")
        if task == "cancel" and "module_other" in node:
            other = _mat(node, "module_other", ctx)
            child_other = certs.parse_matrix(child["module_other"], ctx)
            _eq(report, f"{where}.child{idx}", "restriction",
                child_other, hom.apply_matrix(other), "child other-module vs restriction")
        _verify_node(child, f"{where}.child{idx}", report)

    if not node.get("discharged", False):
        report.warnings.append(f"{where}: decomposition left partial")
        return
    if not (children[0].get("discharged") and children[1].get("discharged")):
        report.add(where, "structure", False, "glued node with undischarged children")
        return

    a1, a2, a0 = sq["rings"]["a1"], sq["rings"]["a2"], sq["rings"]["a0"]
    j1, j2 = sq["j1"], sq["j2"]
    target = _mat(node, "target", ctx)
    _check_idempotent(report, where, ring, target)
    if task == "extend":
        ok = target == e.augmentation() and target.is_constant()
        report.add(where, "augmentation", ok,
                   "" if ok else "target is not the augmented module")
    else:
        _eq(report, where, "restriction", target, _mat(node, "module_other", ctx),
            "cancel target vs other module")

    phi1_f, phi1_b = _node_iso(children[0], ctx)
    phi2_f, phi2_b = _node_iso(children[1], ctx)
    glue = node["glue"]
    alpha0_f, alpha0_b = _pair(glue, "alpha0", ctx)
    alpha2_f, alpha2_b = _pair(glue, "alpha2", ctx)
    fix_f, fix_b = _pair(glue, "phi2", ctx)
    iso_f, iso_b = _pair(glue, "iso", ctx)

    # mismatch definition: alpha0 = j2(phi2) o j1(phi1)^-1 over a0
    _eq(report, where, "compose", alpha0_f,
        a0.mat_mul(j2.apply_matrix(phi2_f), j1.apply_matrix(phi1_b)),
        "alpha0 fwd vs j2(phi2)*j1(phi1 bwd)")
    _eq(report, where, "compose", alpha0_b,
        a0.mat_mul(j1.apply_matrix(phi1_f), j2.apply_matrix(phi2_b)),
        "alpha0 bwd vs j1(phi1 fwd)*j2(phi2 bwd)")

    # alpha2 is an automorphism of Q_2 reducing to alpha0
    q2 = a2.nf_matrix(sq["i2"].apply_matrix(target))
    _check_iso_laws(report, where, a2, q2, q2, alpha2_f, alpha2_b)
    _eq(report, where, "restriction", j2.apply_matrix(alpha2_f), a0.nf_matrix(alpha0_f),
        "j2(alpha2 fwd) vs alpha0 fwd")
    _eq(report, where, "restriction", j2.apply_matrix(alpha2_b), a0.nf_matrix(alpha0_b),
        "j2(alpha2 bwd) vs alpha0 bwd")

    # corrected second iso: phi2' = alpha2^-1 o phi2
    _eq(report, where, "compose", fix_f, a2.mat_mul(alpha2_b, phi2_f),
        "phi2' fwd vs alpha2 bwd * phi2 fwd")
    _eq(report, where, "compose", fix_b, a2.mat_mul(phi2_b, alpha2_f),
        "phi2' bwd vs phi2 bwd * alpha2 fwd")

    # glued iso restricts to its parts and satisfies the laws
    _eq(report, where, "restriction", sq["i1"].apply_matrix(iso_f), a1.nf_matrix(phi1_f),
        "i1(iso fwd) vs phi1 fwd")
    _eq(report, where, "restriction", sq["i2"].apply_matrix(iso_f), a2.nf_matrix(fix_f),
        "i2(iso fwd) vs phi2' fwd")
    _eq(report, where, "restriction", sq["i1"].apply_matrix(iso_b), a1.nf_matrix(phi1_b),
        "i1(iso bwd) vs phi1 bwd")
    _eq(report, where, "restriction", sq["i2"].apply_matrix(iso_b), a2.nf_matrix(fix_b),
        "i2(iso bwd) vs phi2' bwd")
    _check_iso_laws(report, where, ring, e, target, iso_f, iso_b)


def _verify_umrow(node: dict, where: str, report: VerifierReport) -> None:
    ring = certs.parse_ring(node["ring"])
    ctx = ring.context
    v = _mat(node, "v", ctx)
    w = _mat(node, "w", ctx)
    one = PolyMatrix.identity(ctx, 1)
    _eq(report, where, "um-congruence", ring.mat_mul(v, w.transpose()), ring.nf_matrix(one),
        "v*w^T vs 1")

    extend = node["extend"]
    kernel = ring.nf_matrix(PolyMatrix.identity(ctx, v.cols) - w.transpose() * v)
    ext_ring = certs.parse_ring(extend["ring"])
    report.add(where, "structure", ext_ring == ring,
               "" if ext_ring == ring else "extend subtree over a different ring")
    _eq(report, where, "restriction", certs.parse_matrix(extend["module"], ctx), kernel,
        "extend module vs I - w^T v")
    _verify_node(extend, f"{where}.extend", report)

    if not node.get("discharged", False) or "sigma" not in node:
        report.warnings.append(f"{where}: row lift left partial")
        return
    sigma_m, sigma_i = _glpair(node, "sigma", ctx)
    _eq(report, where, "gl-lift", ring.mat_mul(sigma_m, sigma_i),
        ring.nf_matrix(PolyMatrix.identity(ctx, sigma_m.rows)), "sigma*sigma^-1 vs I")
    v0 = v.augmentation()
    w0 = w.augmentation()
    if extend.get("discharged"):
        fwd, bwd = _node_iso(extend, ctx)
        _eq(report, where, "compose", sigma_m,
            ring.nf_matrix(bwd + w.transpose() * v0), "sigma vs bwd + w^T v(0)")
        _eq(report, where, "compose", sigma_i,
            ring.nf_matrix(fwd + w0.transpose() * v), "sigma^-1 vs fwd + w(0)^T v")
    _eq(report, where, "um-congruence", ring.mat_mul(v, sigma_m), ring.nf_matrix(v0),
        "v*sigma vs v(0)")

    if "delta" not in node:
        report.warnings.append(f"{where}: no GL lift recorded")
        return
    target_ring = certs.parse_ring(node["target_ring"])
    tctx = target_ring.context
    ok = all(not ring.survives(g) for g in target_ring.generators)
    report.add(where, "structure", ok, "" if ok else "target ideal escapes the quotient")
    delta_m, delta_i = _glpair(node, "delta", tctx)
    _eq(report, where, "gl-lift", target_ring.mat_mul(delta_m, delta_i),
        target_ring.nf_matrix(PolyMatrix.identity(tctx, delta_m.rows)), "delta*delta^-1 vs I")
    pi = _identity_hom(target_ring, ring)
    _eq(report, where, "gl-lift", pi.apply_matrix(delta_m), ring.nf_matrix(sigma_m),
        "pi(delta) vs sigma")

    u = _mat(node, "u", tctx)
    w_prime = _mat(node, "w_prime", tctx)
    _eq(report, where, "compose", u,
        target_ring.nf_matrix(v0_in(tctx, v0) * delta_i), "u vs v(0)*delta^-1")
    _eq(report, where, "compose", w_prime,
        target_ring.nf_matrix(v0_in(tctx, w0) * delta_m.transpose()), "w' vs w(0)*delta^T")
    one_t = PolyMatrix.identity(tctx, 1)
    _eq(report, where, "um-congruence", target_ring.mat_mul(u, w_prime.transpose()),
        target_ring.nf_matrix(one_t), "u*w'^T vs 1")
    _eq(report, where, "um-congruence", pi.apply_matrix(u), ring.nf_matrix(v),
        "u mod J vs v")


def v0_in(ctx: PolyRing, m: PolyMatrix) -> PolyMatrix:
    """Reinterpret a constant matrix in another context with the same shape."""
    return PolyMatrix(ctx, m.rows, m.cols,
                      [ctx.constant(p.constant_term()) for p in m.entries])


def _verify_gl_lift(node: dict, where: str, report: VerifierReport) -> None:
    ring = certs.parse_ring(node["ring"])
    target_ring = certs.parse_ring(node["target_ring"])
    ctx, tctx = ring.context, target_ring.context
    sigma_m, sigma_i = _glpair(node, "sigma", ctx)
    delta_m, delta_i = _glpair(node, "delta", tctx)
    _eq(report, where, "gl-lift", ring.mat_mul(sigma_m, sigma_i),
        ring.nf_matrix(PolyMatrix.identity(ctx, sigma_m.rows)), "sigma*sigma^-1 vs I")
    _eq(report, where, "gl-lift", target_ring.mat_mul(delta_m, delta_i),
        target_ring.nf_matrix(PolyMatrix.identity(tctx, delta_m.rows)), "delta*delta^-1 vs I")
    pi = _identity_hom(target_ring, ring)
    _eq(report, where, "gl-lift", pi.apply_matrix(delta_m), ring.nf_matrix(sigma_m),
        "pi(delta) vs sigma")


def _verify_patch(node: dict, where: str, report: VerifierReport) -> None:
    sq = _load_square(node)
    _check_square(report, where, sq)
    a, a1, a2, a0 = (sq["rings"][k] for k in ("a", "a1", "a2", "a0"))
    ring = certs.parse_ring(node["ring"])
    report.add(where, "structure", ring == a, "" if ring == a else "ring is not the square total")
    ctx = a.context
    rank = int(node["rank"])
    sigma_m, sigma_i = _glpair(node, "sigma", ctx)
    u_m, u_i = _glpair(node, "whitehead", ctx)
    _eq(report, where, "gl-lift", a0.mat_mul(sigma_m, sigma_i),
        a0.nf_matrix(PolyMatrix.identity(ctx, rank)), "sigma*sigma^-1 vs I")
    _eq(report, where, "whitehead", a2.mat_mul(u_m, u_i),
        a2.nf_matrix(PolyMatrix.identity(ctx, 2 * rank)), "U*U^-1 vs I")
    _eq(report, where, "whitehead", sq["j2"].apply_matrix(u_m),
        a0.nf_matrix(sigma_m.direct_sum(sigma_i)), "j2(U) vs sigma (+) sigma^-1")
    corner = PolyMatrix.identity(ctx, rank).direct_sum(PolyMatrix.zeros(ctx, rank, rank))
    e2 = a2.nf_matrix(u_m * corner * u_i)
    e = _mat(node, "module", ctx)
    _check_idempotent(report, where, a, e)
    _eq(report, where, "restriction", sq["i1"].apply_matrix(e), a1.nf_matrix(corner),
        "i1(E) vs I_r (+) 0")
    _eq(report, where, "restriction", sq["i2"].apply_matrix(e), e2,
        "i2(E) vs whitehead conjugate")
    got_rank = scalar_rank(e.augmentation())
    report.add(where, "rank", got_rank == rank,
               "" if got_rank == rank else f"rank {got_rank} != {rank}")
