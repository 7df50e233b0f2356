import json
from math import comb

import numpy as np
import pytest

from bggtate import bgg, sheaf, tate
from bggtate.homalg import ModulePresentation, dualize_complex, hilbert_data, minimal_free_resolution, random_presentation
from bggtate.rings import contraction_module

from conftest import euler_module, ext_ring, residue_field, structure_sheaf, sym_ring, var


def cotangent_module(S):
    """ker(S(-1)^3 -> S): Koszul syzygies in degree 2 with one relation."""
    n = 2
    return ModulePresentation.from_generators(
        S, [2, 2, 2], [{0: {var(n, 2): 1}, 1: {var(n, 1): -1}, 2: {var(n, 0): 1}}]
    )


def test_structure_sheaf_table():
    S = sym_ring(2)
    T = sheaf.cohomology_table(structure_sheaf(S), -5, 5)
    for d in range(-5, 6):
        assert T.get(0, d) == (comb(d + 2, 2) if d >= 0 else 0)
        assert T.get(1, d) == 0
        assert T.get(2, d) == (comb(-d - 1, 2) if d <= -3 else 0)
        # h^2 against the monomial count of h^0(O(-d-3))
        assert T.get(2, d) == (comb(-d - 3 + 2, 2) if -d - 3 >= 0 else 0)


def test_residue_field_table_is_zero():
    assert sheaf.cohomology_table(residue_field(sym_ring(2)), -4, 4).is_zero()


def test_euler_table_and_text():
    S = sym_ring(2)
    T = sheaf.cohomology_table(euler_module(S), -4, 3)
    assert [d for d in T.columns() if T.get(1, d)] == [-3]
    txt = T.to_text()
    assert txt.splitlines()[1].startswith("h^2") and txt.splitlines()[-1].startswith("h^0")
    js = T.to_json()
    assert json.loads(json.dumps(js)) == js


def test_split_check_free_modules():
    S = sym_ring(2)
    v = sheaf.horrocks_split_check(ModulePresentation.free(S, [-1, 2]))
    assert v.splits and sorted(v.twists) == [-1, 2]
    assert v.describe() == "splits: O(-1) ⊕ O(2)"


@pytest.mark.parametrize("seed", range(10))
def test_split_check_random_free(seed):
    g = np.random.default_rng(seed)
    n = int(g.integers(2, 4))
    twists = sorted(int(a) for a in g.integers(-3, 4, size=int(g.integers(1, 5))))
    v = sheaf.horrocks_split_check(ModulePresentation.free(sym_ring(n), twists))
    assert v.splits and sorted(v.twists) == twists


def test_split_check_non_split():
    S = sym_ring(2)
    v = sheaf.horrocks_split_check(cotangent_module(S))
    assert not v.splits and v.witness == (1, 0)
    v = sheaf.horrocks_split_check(euler_module(S))
    assert not v.splits and v.witness == (1, -3)
    assert "h^1(F(-3)) != 0" in v.describe()


def test_split_check_em_sheaf_never_splits():
    S = sym_ring(3)
    for E in (residue_field(S), residue_field(S).direct_sum(residue_field(S).twist(1))):
        M, _ = tate.em_sheaf(tate.EMSpec(E, 1))
        assert not sheaf.horrocks_split_check(M).splits


def test_split_check_rejects_small_n():
    with pytest.raises(ValueError):
        sheaf.horrocks_split_check(structure_sheaf(sym_ring(1)))


def test_horrocks_complex_examples():
    S = sym_ring(2)
    from bggtate.homalg import zero_complex

    assert sheaf.is_horrocks_complex(zero_complex(S)).is_horrocks
    K = bgg.F(contraction_module(ext_ring(2))).translate(2)
    rep = sheaf.is_horrocks_complex(K)
    assert not rep.is_horrocks and not any(rep.verdicts.values())


@pytest.mark.parametrize("a", [-2, 0, 3])
def test_horrocks_resolution_of_line_bundle(a):
    S = sym_ring(2)
    K = sheaf.horrocks_resolution(ModulePresentation.free(S, [a]))
    assert list(K.term(-1).twists) == [a]
    assert sheaf.is_horrocks_complex(K).is_horrocks


@pytest.mark.parametrize("builder", [residue_field, euler_module, cotangent_module])
def test_horrocks_resolution_fixtures(builder):
    S = sym_ring(2)
    M = builder(S)
    K = sheaf.horrocks_resolution(M)
    rep = sheaf.is_horrocks_complex(K)
    assert rep.is_horrocks
    assert sorted(K.term(-1).twists) == sorted(minimal_free_resolution(M).term(0).twists)
    for b in (-1, 2):
        assert sheaf.is_horrocks_complex(K.twist(b)).is_horrocks


def test_horrocks_resolution_matches_em_complex():
    S = sym_ring(2)
    E = residue_field(S)
    M, _ = tate.em_sheaf(tate.EMSpec(E, 1))
    K = sheaf.horrocks_resolution(M).trimmed()
    Q = minimal_free_resolution(E)
    ref = dualize_complex(Q).translate(2 - 1 + 1).trimmed()
    assert K.betti() == ref.betti()
    assert sheaf.is_horrocks_complex(ref).is_horrocks


def test_stabilize_examples():
    S = sym_ring(2)
    assert sheaf.stabilize(structure_sheaf(S)).gens.rank == 0
    k = residue_field(S)
    st = sheaf.stabilize(k.direct_sum(ModulePresentation.free(S, [3])))
    assert minimal_free_resolution(st).betti() == minimal_free_resolution(k).betti()
    E = euler_module(S)
    a = sheaf.stabilize(E.direct_sum(ModulePresentation.free(S, [-1])))
    b = sheaf.stabilize(E)
    assert minimal_free_resolution(a).betti() == minimal_free_resolution(b).betti()


@pytest.mark.parametrize("seed", range(12))
def test_euler_characteristic_and_stable_range(seed):
    g = np.random.default_rng(seed)
    S = sym_ring(int(g.integers(1, 4)), p=7)
    M = random_presentation(S, g)
    T = sheaf.cohomology_table(M, -4, 12)
    H = hilbert_data(M)
    for d in range(-4, 13):
        chi = sum((-1) ** i * T.get(i, d) for i in range(S.n + 1))
        assert chi == H.polynomial_value(d)
    for d in range(10, 13):
        assert T.get(0, d) == M.dim(d)
