import numpy as np
import pytest

from bggtate import bgg
from bggtate.homalg import ModuleComplex, ModulePresentation, polynomial_window, random_presentation, residue_field_window
from bggtate.rings import contraction_module, exterior_algebra_module, residue_field_module

from conftest import ext_ring, sym_ring


def test_F_of_contraction_module_is_koszul():
    K = bgg.F(contraction_module(ext_ring(2)))
    assert [K.term(p).rank for p in K.positions()] == [1, 3, 3, 1]
    assert [set(K.term(p).twists) for p in K.positions()] == [{-3}, {-2}, {-1}, {0}]
    assert K.is_minimal() and K.linear_part().equals(K)


def test_F_of_residue_field_and_twists():
    L = ext_ring(2)
    C = bgg.F(residue_field_module(L)).trimmed()
    assert list(C.positions()) == [0] and list(C.term(0).twists) == [0]
    for a in (-2, 1, 3):
        # T^a k(-a): the module k(-a) (k in degree a) placed at position -a
        Nc = ModuleComplex(L, {-a: residue_field_module(L, a)}, {}, -a, -a)
        C = bgg.F(Nc).trimmed()
        assert list(C.positions()) == [0] and list(C.term(0).twists) == [a]


def test_G_of_k_and_of_S():
    S = sym_ring(2)
    C = bgg.G(residue_field_window(S))
    assert list(C.positions()) == [0] and list(C.term(0).twists) == [0]
    C = bgg.G(polynomial_window(S, 0, 3), exact_above=False)
    assert [list(C.term(p).twists) for p in range(4)] == [[0], [1] * 3, [2] * 6, [3] * 10]
    degs = range(-6, 2)
    assert {d: C.homology_dim(0, d) for d in degs} == {d: int(d == 0) for d in degs}
    for p in (1, 2):
        assert all(C.homology_dim(p, d) == 0 for d in degs)


@pytest.mark.parametrize("seed", range(10))
def test_twist_identities(seed):
    g = np.random.default_rng(seed)
    L = ext_ring(2, p=7)
    a = int(g.integers(-3, 4))
    assert bgg.check_twist_identity_F(bgg.random_lambda_complex(L, g), a)
    M = random_presentation(L.with_kind("symmetric"), g)
    assert bgg.check_twist_identity_G(M.window(0, 2), a)


@pytest.mark.parametrize("seed", range(10))
def test_translation_and_cone(seed):
    g = np.random.default_rng(50 + seed)
    L = ext_ring(2, p=7)
    F_ = L.field
    Nc = bgg.random_lambda_complex(L, g)
    lhs = bgg.F(Nc.translate(1)).trimmed()
    rhs = bgg.F(Nc).translate(1).trimmed()
    assert lhs.is_zero() and rhs.is_zero() or lhs.equals(rhs)
    N = bgg.random_lambda_module(L, g)
    b = int(g.integers(-1, 2))
    c = [int(x) for x in g.integers(0, 7, size=3)]
    src, tgt = N.twist(b), N.twist(b + 1)
    phi = {}
    for d in src.degrees():
        m = F_.zeros(tgt.dim(d), src.dim(d))
        for i, ci in enumerate(c):
            m = F_.add(m, F_.scale(ci, N.act(i, d + b)))
        phi[d] = m
    assert bgg.cone_identity_F(phi, src, tgt)


def test_gf_resolution_examples():
    L = ext_ring(2)
    C, beta, rep = bgg.gf_resolution(residue_field_module(L), 3)
    assert rep["ok"]
    assert [list(C.term(p).twists) for p in range(3)] == [[0], [1] * 3, [2] * 6]
    L1 = ext_ring(1)
    C, beta, rep = bgg.gf_resolution(exterior_algebra_module(L1), 3)
    assert rep["ok"]
    C, beta, rep = bgg.gf_resolution(contraction_module(L), 3)
    assert rep["ok"]


@pytest.mark.parametrize("seed", range(20))
def test_gf_resolution_random(seed):
    g = np.random.default_rng(seed)
    L = ext_ring(int(g.integers(1, 3)), p=7)
    N = bgg.random_lambda_module(L, g)
    _, _, rep = bgg.gf_resolution(N, 3)
    assert rep["ok"], rep


def test_left_resolution_examples():
    L = ext_ring(2)
    C, rep = bgg.left_resolution(residue_field_module(L), 3)
    assert rep["ok"]
    C, rep = bgg.left_resolution(exterior_algebra_module(L), 2)
    assert rep["ok"]


@pytest.mark.parametrize("seed", range(8))
def test_left_resolution_random(seed):
    g = np.random.default_rng(seed)
    L = ext_ring(2, p=7)
    C, rep = bgg.left_resolution(bgg.random_lambda_complex(L, g, length=2), 2)
    assert rep["ok"], rep["mismatches"][:3]


def test_duality_on_fixtures(rng):
    L = ext_ring(2)
    for N in (contraction_module(L), residue_field_module(L, 1), exterior_algebra_module(L)):
        literal, iso = bgg.check_duality_F(N)
        assert literal and iso
    S = sym_ring(2)
    for W in (residue_field_window(S), polynomial_window(S, 0, 2), ModulePresentation.free(S, [1]).window(-1, 1)):
        assert bgg.check_duality_G(W, rng) is not None
