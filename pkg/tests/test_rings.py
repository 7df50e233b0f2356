from math import comb

import numpy as np
import pytest

from bggtate.bgg import random_lambda_module
from bggtate.homalg import ModuleComplex, find_isomorphism
from bggtate.rings import (
    contraction_module,
    double_dual_map,
    exterior_algebra_module,
    monomial_basis,
    mult_map,
    residue_field_module,
    twist_dual_certificate,
    zero_module,
)

from conftest import ext_ring, sym_ring


def _iso(A, B, rng):
    X = ModuleComplex(A.ring, {0: A}, {}, 0, 0)
    Y = ModuleComplex(B.ring, {0: B}, {}, 0, 0)
    return find_isomorphism(X, Y, rng)


def test_monomial_bases():
    assert len(monomial_basis(sym_ring(2), 2)) == comb(4, 2)
    assert monomial_basis(ext_ring(2), 2) == [(0, 1), (0, 2), (1, 2)]
    assert monomial_basis(ext_ring(2), 4) == []
    assert monomial_basis(sym_ring(2), -1) == []


def test_mult_map_exterior_sign():
    L = ext_ring(1)
    m = mult_map(L, {(0,): 1}, 1)
    assert m.tolist() == [[0, 1]]
    m = mult_map(L, {(1,): 1}, 1)
    assert m.tolist() == [[L.field.p - 1, 0]]


def test_mult_map_variable_injective():
    S = sym_ring(2)
    m = mult_map(S, {(1, 0, 0): 1}, 1)
    assert m.shape == (6, 3) and S.field.rank(m) == 3


def test_mult_map_rejects_inhomogeneous():
    S = sym_ring(2)
    with pytest.raises(ValueError):
        mult_map(S, {(1, 0, 0): 1, (0, 0, 0): 1}, 0)


def test_contraction_action():
    L = ext_ring(2)
    W = contraction_module(L)
    # e_0 . (X_0 ^ X_1) = X_1
    col = W.act(0, -2)[:, 0]
    assert col.tolist() == [0, 1, 0]
    for i in range(4):
        assert W.dim(-i) == comb(3, i)
    assert W.degrees() == [-3, -2, -1, 0]


@pytest.mark.parametrize("seed", range(30))
def test_random_modules_anticommute(seed):
    g = np.random.default_rng(seed)
    L = ext_ring(int(g.integers(1, 3)), p=7)
    N = random_lambda_module(L, g)
    N.validate()
    for a in (-1, 2):
        N.twist(a).validate()
    N.dual().validate()


@pytest.mark.parametrize("seed", range(15))
def test_twist_laws(seed):
    g = np.random.default_rng(seed)
    L = ext_ring(2, p=5)
    N = random_lambda_module(L, g)
    assert N.twist(0).equals(N)
    a = int(g.integers(-3, 4))
    assert N.twist(a).twist(-a).equals(N)
    assert all(N.twist(a).dim(p) == N.dim(p + a) for p in range(-6, 6))


@pytest.mark.parametrize("seed", range(15))
def test_double_dual(seed):
    g = np.random.default_rng(100 + seed)
    N = random_lambda_module(ext_ring(2, p=7), g)
    mu = double_dual_map(N)
    assert mu.is_linear() and mu.is_isomorphism()


def test_dual_of_zero():
    L = ext_ring(2)
    assert zero_module(L).dual().is_zero()


def test_dual_of_contraction_is_exterior_algebra(rng):
    for n in (1, 2, 3):
        L = ext_ring(n)
        assert _iso(contraction_module(L).dual(), exterior_algebra_module(L), rng) is not None


def test_exterior_algebra_is_twisted_contraction(rng):
    for n in (1, 2):
        L = ext_ring(n)
        W = contraction_module(L).twist(-(n + 1))
        E = exterior_algebra_module(L)
        assert W.dims == E.dims
        assert _iso(W, E, rng) is not None


def test_twist_dual_certificate():
    L = ext_ring(2)
    W = contraction_module(L)
    cert = twist_dual_certificate(W, 0)
    assert all((b == np.eye(b.shape[0], dtype=b.dtype)).all() for b in cert.blocks.values())
    cert = twist_dual_certificate(W, 1)
    for p, b in cert.blocks.items():
        sign = (-1) ** ((p - 1) % 2)
        assert (b == L.field.asarray(sign * np.eye(b.shape[0], dtype=np.int64))).all()
    g = np.random.default_rng(5)
    for _ in range(10):
        N = random_lambda_module(L, g)
        assert twist_dual_certificate(N, int(g.integers(-2, 3))).is_linear()


def test_multiplication_by_linear_form_is_linear():
    """(v . -): N(b) -> N(b+1) commutes with the twisted actions."""
    L = ext_ring(2)
    F = L.field
    N = exterior_algebra_module(L).direct_sum(residue_field_module(L, 1))
    for b in (-1, 0, 1):
        src, tgt = N.twist(b), N.twist(b + 1)
        for p in src.degrees():
            v = F.add(N.act(0, p + b), F.scale(3, N.act(2, p + b)))
            for i in range(3):
                lhs = F.matmul(tgt.act(i, p), v)
                vv = F.add(N.act(0, p + b + 1), F.scale(3, N.act(2, p + b + 1)))
                rhs = F.matmul(vv, src.act(i, p))
                assert F.equal(lhs, rhs)
