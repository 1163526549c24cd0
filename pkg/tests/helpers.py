"""Shared test fixtures: seeded randomness, random algebra, and the corpus."""

from __future__ import annotations

import os
import random

from srpb import QQ, GLMat, PolyMatrix, SimplicialComplex
from srpb.simplicial import complexes_on, random_complex

SEED = int(os.environ.get("SRPB_SEED", "20260808"))


def make_rng(tag: str = "") -> random.Random:
    return random.Random(f"{SEED}:{tag}")


def random_poly(ring, rng, max_deg=2, terms=3, nonzero=False):
    ctx = ring.context if hasattr(ring, "context") else ring
    out = ctx.zero()
    for _ in range(terms):
        exps = [0] * ctx.nvars
        for _ in range(rng.randint(0, max_deg)):
            exps[rng.randrange(ctx.nvars)] += 1
        coeff = rng.randint(-3, 3)
        out = out + ctx.monomial(tuple(exps), ctx.field.from_int(coeff))
    if hasattr(ring, "normal_form"):
        out = ring.normal_form(out)
    if nonzero and out.is_zero():
        return ctx.one()
    return out


def random_elementary_product(ring, size, rng, count=None, max_deg=2):
    g = GLMat.identity(ring, size)
    n = rng.randint(1, 4) if count is None else count
    for _ in range(n):
        i, j = rng.sample(range(size), 2)
        g = g * GLMat.elementary(ring, size, i, j, random_poly(ring, rng, max_deg, 2))
    return g


def random_gl_with_units(ring, size, rng, count=4, max_deg=2):
    """Product of elementaries and constant diagonal units."""
    from fractions import Fraction

    g = GLMat.identity(ring, size)
    for _ in range(rng.randint(1, count)):
        if size > 1 and rng.random() < 0.7:
            i, j = rng.sample(range(size), 2)
            g = g * GLMat.elementary(ring, size, i, j, random_poly(ring, rng, max_deg, 2))
        else:
            ctx = ring.context
            pairs = []
            for k in range(size):
                c = rng.choice([1, 2, 3, -1, -2])
                if ctx.field.char == 0:
                    pairs.append((ctx.constant(c), ctx.constant(Fraction(1, c))))
                else:
                    cc = ctx.field.from_int(c)
                    if not cc:
                        cc = ctx.field.one
                    pairs.append((ctx.constant(cc), ctx.constant(ctx.field.inv(cc))))
            g = g * GLMat.diagonal(ring, pairs)
    return g


def conjugated_idempotent(ring, rng, size=None, rank=None, elementaries=4, max_deg=2):
    """(module matrix E, conjugator g) with E = g (I_s + 0) g^-1."""
    size = size if size is not None else rng.randint(2, 3)
    rank = rank if rank is not None else rng.randint(1, size - 1)
    g = random_elementary_product(ring, size, rng, count=rng.randint(1, elementaries),
                                  max_deg=max_deg)
    ctx = ring.context
    corner = PolyMatrix.from_scalars(
        ctx, [[1 if i == j and i < rank else 0 for j in range(size)] for i in range(size)])
    e = ring.mat_mul(ring.mat_mul(g.mat, corner), g.inv)
    return e, g


# -- named complexes -----------------------------------------------------------

def two_points():
    return SimplicialComplex.from_facets(2, [[0], [1]])


def hollow_triangle():
    return SimplicialComplex.from_facets(3, [[0, 1], [1, 2], [0, 2]])


def cone_two_points():
    return SimplicialComplex.from_facets(3, [[0, 1], [0, 2]])


def four_cycle():
    return SimplicialComplex.from_facets(4, [[0, 1], [1, 2], [2, 3], [0, 3]])


def ghost_pair():
    # one edge plus a ghost vertex
    return SimplicialComplex.from_facets(3, [[0, 1]])


def empty_on(ambient):
    return SimplicialComplex.empty(ambient)


NAMED_COMPLEXES = {
    "two-points": two_points(),
    "hollow-triangle": hollow_triangle(),
    "cone-two-points": cone_two_points(),
    "four-cycle": four_cycle(),
    "ghost-pair": ghost_pair(),
    "empty-2": empty_on(2),
    "simplex-3": SimplicialComplex.simplex(3),
    "point-with-ghosts": SimplicialComplex.from_facets(3, [[1]]),
}


def corpus_complexes(max_exhaustive=4, sample5=60, sample6=60):
    """The shared test corpus: exhaustive small, seeded samples above."""
    rng = make_rng("corpus")
    out = list(NAMED_COMPLEXES.values())
    for n in range(1, max_exhaustive + 1):
        out.extend(complexes_on(n))
    seen = set()
    for ambient, count in ((5, sample5), (6, sample6)):
        added = 0
        while added < count:
            c = random_complex(ambient, rng)
            key = (c.ambient, c.facets)
            if key in seen:
                continue
            seen.add(key)
            out.append(c)
            added += 1
    return out


def corpus_squares(field=QQ):
    from srpb import build_fiber_square

    names = ["two-points", "hollow-triangle", "cone-two-points", "four-cycle",
             "ghost-pair", "point-with-ghosts"]
    out = []
    for name in names:
        c = NAMED_COMPLEXES[name]
        if not c.is_simplex():
            out.append((name, build_fiber_square(field, c)))
    return out
