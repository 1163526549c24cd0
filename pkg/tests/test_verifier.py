import copy

from srpb import (GLMat, QQ, PolyMatrix, ProjModule, QuotientRing, RingHom,
                  UmRow, build_fiber_square, extend_witness, lift_gl,
                  milnor_patch, sr_quotient, umrow_lift, verify_payload)
from srpb.certs import empty_node, gl_lift_node, patch_node
from srpb.engines import HypothesisProfile, conjugation_witness_oracle
from srpb.expr import parse_expression
from srpb.lifting import whitehead_lift
from srpb.poly import format_polynomial
from helpers import (conjugated_idempotent, hollow_triangle, make_rng,
                     random_elementary_product, random_gl_with_units)


def xy_ring():
    return QuotientRing.make(QQ, 2, ((1, 1),))


def corpus_certificates():
    """A spread of valid certificates across every node kind."""
    rng = make_rng("verifier-corpus")
    out = []

    r = xy_ring()
    e, g = conjugated_idempotent(r, rng, size=2, rank=1)
    out.append(("extend-two-points", extend_witness(ProjModule.make(r, e)).certificate))

    hring = sr_quotient(QQ, hollow_triangle())
    e, g = conjugated_idempotent(hring, rng, size=2, rank=1)
    res = extend_witness(ProjModule.make(hring, e), oracle=conjugation_witness_oracle(g))
    assert res.ok
    out.append(("extend-hollow", res.certificate))

    free = QuotientRing.make(QQ, 2, ())
    m = random_elementary_product(free, 3, rng, count=4)
    ctx = r.context
    e1 = PolyMatrix.from_scalars(ctx, [[1, 0, 0]])
    v = r.nf_matrix(e1 * m.mat)
    w = r.nf_matrix((m.inv * e1.transpose()).transpose())
    um = umrow_lift(UmRow.make(r, v, w))
    assert um.ok
    out.append(("umrow", um.certificate))

    sq = build_fiber_square(QQ, hollow_triangle())
    sigma = random_gl_with_units(sq.a0, 2, rng)
    module = milnor_patch(sq, 2, sigma)
    u = whitehead_lift(sigma, sq.j2, sq.section)
    prof = HypothesisProfile(0, 2).payload()
    out.append(("patch", patch_node(sq, 2, sigma, u, module.matrix, prof)))

    pi = RingHom.quotient_map(free, r)
    d0 = random_elementary_product(free, 2, rng, count=3)
    sig = d0.apply_hom(pi)
    delta = lift_gl(sig, pi)
    out.append(("gl-lift", gl_lift_node(r, free, sig, delta, prof)))

    out.append(("cancel", _cancel_certificate(rng)))
    return out


def _cancel_certificate(rng):
    from srpb import ModIso, cancel_witness, extend_witness

    r = xy_ring()
    ctx = r.context
    corner = PolyMatrix.from_scalars(ctx, [[1, 0], [0, 0]])
    g1 = GLMat.elementary(r, 2, 0, 1, ctx.variable(0))
    g2 = GLMat.elementary(r, 2, 1, 0, ctx.variable(1))
    p = ProjModule.make(r, r.mat_mul(r.mat_mul(g1.mat, corner), g1.inv))
    q = ProjModule.make(r, r.mat_mul(r.mat_mul(g2.mat, corner), g2.inv))
    mid = extend_witness(q).iso.inverse().compose(extend_witness(p).iso)
    one = PolyMatrix.identity(ctx, 1)
    stab = ModIso.make(ProjModule.make(r, p.matrix.direct_sum(one)),
                       ProjModule.make(r, q.matrix.direct_sum(one)),
                       mid.fwd.direct_sum(one), mid.bwd.direct_sum(one))
    res = cancel_witness(p, q, stab)
    assert res.ok
    return res.certificate


def test_valid_certificates_pass():
    for name, cert in corpus_certificates():
        rep = verify_payload(cert)
        assert rep.ok, f"{name}: {rep.summary()}"
        assert rep.entries, name


def test_empty_certificate_vacuous_pass_with_warning():
    rep = verify_payload(empty_node())
    assert rep.ok
    assert rep.warnings


def test_malformed_certificate_reports_not_raises():
    rep = verify_payload({"root": {"kind": "base", "task": "extend"}})
    assert not rep.ok


def test_unknown_node_kind_fails():
    rep = verify_payload({"root": {"kind": "mystery"}})
    assert not rep.ok


def _matrix_sites(payload, path=()):
    """Paths to every matrix entry list in the payload."""
    sites = []
    if isinstance(payload, dict):
        for key, value in payload.items():
            if key == "entries" and isinstance(value, list):
                sites.append(path + (key,))
            else:
                sites.extend(_matrix_sites(value, path + (key,)))
    elif isinstance(payload, list):
        for i, value in enumerate(payload):
            sites.extend(_matrix_sites(value, path + (i,)))
    return sites


def _get(payload, path):
    cur = payload
    for step in path:
        cur = cur[step]
    return cur


def mutate_one_coefficient(cert, rng):
    """Flip a single coefficient of a single matrix entry; returns a copy."""
    cert = copy.deepcopy(cert)
    sites = _matrix_sites(cert)
    assert sites
    path = rng.choice(sites)
    entries = _get(cert, path)
    idx = rng.randrange(len(entries))
    ring_payload = cert["root"].get("ring", {"field": "Q", "vars": 2})
    from srpb.certs import parse_ring

    # context wide enough for any entry in the file
    nvars = 0
    def scan(node):
        nonlocal nvars
        if isinstance(node, dict):
            if "vars" in node:
                nvars = max(nvars, int(node["vars"]))
            for v in node.values():
                scan(v)
        elif isinstance(node, list):
            for v in node:
                scan(v)
    scan(cert)
    fld = parse_ring({"field": ring_payload["field"], "vars": nvars, "ideal": []})
    ctx = fld.context
    poly = parse_expression(entries[idx], ctx)
    bumped = poly + ctx.one()
    entries[idx] = format_polynomial(bumped)
    return cert


def test_mutation_sensitivity_each_kind():
    rng = make_rng("mutate")
    for name, cert in corpus_certificates():
        for _ in range(12):
            bad = mutate_one_coefficient(cert, rng)
            rep = verify_payload(bad)
            assert not rep.ok, f"{name}: mutation passed verification"
            fail = rep.first_failure()
            assert fail is not None and fail.check


def test_verifier_is_independent_of_the_engines():
    # the verification path must not touch engine, lifting or module code
    import srpb.verifier as v

    src = open(v.__file__).read()
    for forbidden in ("engines", "lifting", "projmod", "groebner", "smith"):
        assert f"from .{forbidden}" not in src and f"import {forbidden}" not in src


def test_verifier_covers_every_emitted_node_kind():
    from srpb.certs import NODE_KINDS
    import srpb.verifier as v

    src = open(v.__file__).read()
    for kind in NODE_KINDS:
        assert f'"{kind}"' in src, f"no verifier rule for node kind {kind}"
    # the enumerated identity rules all exist
    for rule in ("idempotency", "hom-defined", "square-commutes", "mod-iso-laws",
                 "whitehead", "gl-lift", "um-congruence", "augmentation",
                 "restriction", "compose", "rank"):
        assert rule in v.CHECK_KINDS
