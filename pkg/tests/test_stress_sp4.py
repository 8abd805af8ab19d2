"""Generality stress test on the rank-2 symplectic algebra.

The catalog pairs only exercise structure constants of absolute value one
and two on the diagonal; the C2 root system also produces off-diagonal
constants of absolute value two.  The algebra is built here from exact
4x4 matrices, so the structure constants themselves come out of a linear
solve rather than being typed in.

Depth-5 Jacobi and arity-6 square checks are certified on the catalog pairs;
here the sweeps stop one level lower to keep the suite fast (the full-depth
run passes as well, in about ten seconds).
"""

import random
from fractions import Fraction
from itertools import combinations

import pytest

from l3pair import linalg
from l3pair import deraction as da
from l3pair import mc as mcmod
from l3pair.liepair import LieAlgebra, LiePair, build_l3
from l3pair.linfty import (
    brackets_to_codifferential,
    check_codifferential,
    iter_normalized_tuples,
    jacobi_sweep,
)


def _E(i, j):
    m = [[Fraction(0)] * 4 for _ in range(4)]
    m[i][j] = Fraction(1)
    return m


def _add(*ms):
    out = [[Fraction(0)] * 4 for _ in range(4)]
    for m in ms:
        for i in range(4):
            for j in range(4):
                out[i][j] += m[i][j]
    return out


def _neg(m):
    return [[-x for x in row] for row in m]


def _bracket(a, b):
    def mul(x, y):
        return [[sum(x[i][k] * y[k][j] for k in range(4)) for j in range(4)] for i in range(4)]

    ab = mul(a, b)
    ba = mul(b, a)
    return [[p - q for p, q in zip(ra, rb)] for ra, rb in zip(ab, ba)]


@pytest.fixture(scope="module")
def sp4_l3():
    basis = {
        "h1": _add(_E(0, 0), _neg(_E(2, 2))),
        "h2": _add(_E(1, 1), _neg(_E(3, 3))),
        "a12": _add(_E(0, 1), _neg(_E(3, 2))),
        "a21": _add(_E(1, 0), _neg(_E(2, 3))),
        "b11": _E(0, 2),
        "b22": _E(1, 3),
        "b12": _add(_E(0, 3), _E(1, 2)),
        "c11": _E(2, 0),
        "c22": _E(3, 1),
        "c12": _add(_E(2, 1), _E(3, 0)),
    }
    names = list(basis)
    flat = {nm: [basis[nm][i][j] for i in range(4) for j in range(4)] for nm in names}
    cols = [[flat[nm][k] for nm in names] for k in range(16)]
    brackets = {}
    for x, y in combinations(names, 2):
        br = _bracket(basis[x], basis[y])
        coeffs = linalg.solve(cols, [br[i][j] for i in range(4) for j in range(4)])
        assert coeffs is not None  # sp4 closes under the matrix bracket
        out = {nm: c for nm, c in zip(names, coeffs) if c}
        if out:
            brackets[(x, y)] = out
    constants = {abs(c) for out in brackets.values() for c in out.values()}
    assert Fraction(2) in constants  # the C2-specific constants show up
    alg = LieAlgebra(names, brackets)
    return build_l3(LiePair(alg, ["h1", "h2"]))


def test_sp4_bracket_structure(sp4_l3):
    st = sp4_l3.structure()
    assert not jacobi_sweep(st, range(1, 5))
    assert not check_codifferential(brackets_to_codifferential(st), 4)


def test_sp4_bracket_routes_sampled(sp4_l3):
    rng = random.Random(13)
    l3 = sp4_l3
    for key in iter_normalized_tuples(l3.basis, 2, False):
        a = l3.bracket2(l3.basis.unit(key[0]), l3.basis.unit(key[1]))
        b = l3.bracket2_generated(l3.basis.unit(key[0]), l3.basis.unit(key[1]))
        assert a == b, key
    names = l3.basis.names
    for _ in range(250):
        key = tuple(rng.choice(names) for _ in range(3))
        a = l3.bracket3(*[l3.basis.unit(nm) for nm in key])
        b = l3.bracket3_generated(*[l3.basis.unit(nm) for nm in key])
        assert a == b, key


def test_sp4_derivations_and_gauge(sp4_l3):
    l3 = sp4_l3
    ders = da.derivations(l3.pair.algebra)
    assert len(ders) == 10  # simple algebra: only inner derivations
    inner = [da.ad(l3.pair.algebra, l3.pair.algebra.unit(nm)).to_vector() for nm in l3.pair.algebra.names]
    assert all(linalg.in_span(inner, d.to_vector()) is not None for d in ders)
    ctx = mcmod.MCContext(l3, order=3)
    rng = random.Random(17)
    b = mcmod.random_gauge_parameter(ctx, rng)
    assert mcmod.bridge_defects(ctx, b) == []
    for _ in range(3):
        xi = mcmod.random_mc_element(ctx, rng)
        bb = mcmod.random_gauge_parameter(ctx, rng)
        equal, diff = mcmod.check_gauge_coincidence(ctx, bb, xi, check_bridges=False)
        assert equal, diff
