import numpy as np
import pytest

from bggtate import bgg, perturb as P
from bggtate.exactlin import PrimeField
from bggtate.homalg import DoubleComplex, ModuleComplex, free_complex_window, polynomial_window, total_complex
from bggtate.rings import exterior_algebra_module, residue_field_module

from conftest import ext_ring, sym_ring

F5, F7 = PrimeField(5), PrimeField(7)


def two_term(F, a=1):
    return P.vector_space_complex(F, [1, 1], [F.asarray([[a]])])


def homology_dims(C):
    return P.positionwise_homology(C)


def e2_dims(X):
    """Independent E_2 of the column filtration: H(H_I(X), d'')."""
    F = X.ring.field
    cells = X.terms

    def mat(d, key, rows, cols):
        m = d.get(key)
        return m.coeff(()) if m is not None else F.zeros(rows, cols)

    def rk(*blocks):
        blocks = [b for b in blocks if b.shape[1]]
        return F.rank(np.concatenate(blocks, axis=1)) if blocks else 0

    out = {}
    for (p, q), T in cells.items():
        k = T.rank
        nxt_h = cells.get((p + 1, q))
        dh = mat(X.dh, (p, q), nxt_h.rank if nxt_h else 0, k)
        Z = F.kernel(dh) if dh.shape[0] else F.eye(k)
        prev = cells.get((p - 1, q))
        B = mat(X.dh, (p - 1, q), k, prev.rank) if prev else F.zeros(k, 0)
        up = cells.get((p, q + 1))
        if up:
            dv = mat(X.dv, (p, q), up.rank, k)
            left = up.rank
            prev_up = cells.get((p - 1, q + 1))
            Bup = mat(X.dh, (p - 1, q + 1), left, prev_up.rank) if prev_up else F.zeros(left, 0)
            img = F.matmul(dv, Z)
            cyc = Z.shape[1] - (rk(Bup, img) - rk(Bup))
        else:
            cyc = Z.shape[1]
        down = cells.get((p, q - 1))
        if down:
            dvd = mat(X.dv, (p, q - 1), k, down.rank)
            nh = cells.get((p + 1, q - 1))
            dhd = mat(X.dh, (p, q - 1), nh.rank if nh else 0, down.rank)
            Zd = F.kernel(dhd) if dhd.shape[0] else F.eye(down.rank)
            bnd = rk(B, F.matmul(dvd, Zd))
        else:
            bnd = rk(B)
        out[(p, q)] = cyc - bnd
    return out


def hi_dims(X):
    F = X.ring.field
    out = {}
    for (p, q), T in X.terms.items():
        dh = X.dh.get((p, q))
        dm = X.dh.get((p - 1, q))
        r_out = F.rank(dh.coeff(())) if dh is not None else 0
        r_in = F.rank(dm.coeff(())) if dm is not None else 0
        out[(p, q)] = T.rank - r_out - r_in
    return out


# -- normalize ---------------------------------------------------------------


def test_normalize_leaves_contractions_alone(rng):
    X = P.random_complex(F7, rng, 4)
    c = P.split_contraction(X)
    cn = P.normalize(X, c.small, c.f, c.g, c.h)
    assert cn.h.equals(c.h) and cn.f.equals(c.f) and cn.g.equals(c.g)
    idX = P.GradedOp.identity(X)
    zero = P.GradedOp(X, X, -1, {})
    assert P.normalize(X, X, idX, idX, zero).h.is_zero()


@pytest.mark.parametrize("seed", range(30))
def test_normalize_random(seed):
    g = np.random.default_rng(seed)
    X = P.random_complex(F5, g, int(g.integers(2, 6)))
    c = P.split_contraction(X)
    f, gg, h = P.random_raw_contraction(c, g)
    assert all(P.normalize(X, c.small, f, gg, h).identities().values())


def test_normalize_rejects_bad_input(rng):
    X = two_term(F5)
    c = P.split_contraction(X)
    idX = P.GradedOp.identity(X)
    with pytest.raises(P.ContractionError, match=r"\(ii\)"):
        P.normalize(X, X, idX, idX, P.GradedOp(X, X, -1, {0: c.h.maps[0], 1: c.h.maps[1]}))
    Y = P.vector_space_complex(F5, [1, 0], [F5.zeros(0, 1)])
    z = P.GradedOp(X, Y, 0, {})
    with pytest.raises(P.ContractionError, match=r"\(i\)"):
        P.normalize(X, Y, z, P.GradedOp(Y, X, 0, {}), c.h)


# -- cancel and split ------------------------------------------------------------


def test_cancel_examples():
    X = two_term(F5)
    c = P.cancel(X, P.unit_split(X, 0))
    assert all(c.small.term(p).rank == 0 for p in c.small.positions())
    c = P.cancel(X, {})
    assert c.small.equals(X) and c.h.is_zero()


@pytest.mark.parametrize("seed", range(20))
def test_cancel_random(seed):
    g = np.random.default_rng(seed)
    X = P.random_complex(F7, g, 5)
    cand = [q for q in range(X.lo, X.hi) if np.any(X.diff(q).coeff(()))]
    if not cand:
        return
    c = P.cancel(X, P.unit_split(X, cand[0]))
    assert homology_dims(c.small) == homology_dims(X)


def test_cancel_rejects_singular_block():
    X = P.vector_space_complex(F5, [1, 1], [F5.zeros(1, 1)])
    with pytest.raises((P.ContractionError, ValueError, np.linalg.LinAlgError)):
        P.cancel(X, {0: ([0], []), 1: ([], [0])})


def test_split_examples():
    X = two_term(F5)
    assert P.split_contraction(X).small.term(0).rank == 0
    Z = P.vector_space_complex(F5, [2, 1], [F5.zeros(1, 2)])
    c = P.split_contraction(Z)
    assert [c.small.term(p).rank for p in (0, 1)] == [2, 1] and c.h.is_zero()


@pytest.mark.parametrize("seed", range(20))
def test_split_matches_rank_nullity(seed):
    g = np.random.default_rng(seed)
    X = P.random_complex(F7, g, 5)
    c = P.split_contraction(X)
    ranks = {q: F7.rank(X.diff(q).coeff(())) if q < X.hi else 0 for q in X.positions()}
    for q in X.positions():
        betti = X.term(q).rank - ranks[q] - ranks.get(q - 1, 0)
        assert c.small.term(q).rank == betti
    assert all(c.small.diff(q).is_zero() for q in range(X.lo, X.hi))


# -- bpl ---------------------------------------------------------------------


def test_bpl_zero_perturbation(rng):
    X = P.random_complex(F7, rng, 4)
    c = P.split_contraction(X)
    ch = P.bpl(c, P.GradedOp(X, X, 1, {}))
    assert ch.f.equals(c.f) and ch.g.equals(c.g) and ch.h.equals(c.h) and ch.small.equals(c.small)


def test_bpl_invertible_case():
    X = two_term(F5)
    c = P.split_contraction(X)
    pert = P.GradedOp(X, X, 1, {0: X.diff(0)})
    ch = P.bpl(c, pert)
    assert ch.big.diff(0).coeff(()).tolist() == [[2]]
    assert all(ch.small.term(p).rank == 0 for p in ch.small.positions())


def test_bpl_rejects_non_square_zero():
    X = P.vector_space_complex(F5, [1, 1, 1], [F5.asarray([[1]]), F5.zeros(1, 1)])
    c = P.split_contraction(X)
    pert = P.GradedOp(X, X, 1, {1: X.diff(0).with_modules(X.term(1), X.term(2))})
    with pytest.raises(P.ContractionError, match="square to zero"):
        P.bpl(c, pert)


@pytest.mark.parametrize("seed", range(25))
def test_bpl_filtered_random(seed):
    g = np.random.default_rng(seed)
    D = P.random_double_complex(F7, g)
    tot = total_complex(D)
    totI = total_complex(DoubleComplex(D.ring, D.terms, D.dh, {}), tot.lo, tot.hi)
    c0 = P.split_contraction(totI)
    pert = P.GradedOp(totI, totI, 1, {m: tot.diff(m) - totI.diff(m) for m in range(tot.lo, tot.hi)})
    ch = P.bpl(c0, pert)
    assert homology_dims(ch.small) == homology_dims(tot)
    ch.small.check_square_zero()
    assert P.direct_sum_report(c0, ch)


# -- double complexes --------------------------------------------------------


def test_minimalize_one_row():
    g = np.random.default_rng(1)
    A = P.random_complex(F7, g, 4)
    X = DoubleComplex(A.ring, {(p, 0): A.term(p) for p in A.positions()},
                      {(p, 0): A.diff(p) for p in range(A.lo, A.hi)}, {})
    fm = P.minimalize_double(X)
    assert homology_dims(fm.complex) == homology_dims(A)
    assert all(fm.complex.diff(p).is_zero() for p in range(fm.complex.lo, fm.complex.hi))


@pytest.mark.parametrize("seed", range(20))
def test_minimalize_double_filtration(seed):
    g = np.random.default_rng(seed)
    X = P.random_double_complex(F7, g, rows=2, cols=3)
    fm = P.minimalize_double(X)
    assert fm.is_filtered()
    HI = hi_dims(X)
    ps = sorted({p for p, _ in X.terms})
    for m in ps:
        dims = fm.filtration_dims(m)
        for n, k in dims.items():
            assert k == sum(v for (p, q), v in HI.items() if p <= m and p + q == n)
    E2 = e2_dims(X)
    gr = homology_dims(fm.graded_part())
    for n, (k,) in gr.items():
        assert k == sum(v for (p, q), v in E2.items() if p + q == n)


def test_minimalize_G_of_S_is_itself():
    S = sym_ring(2)
    W = polynomial_window(S, 0, 3)
    fm = P.minimalize_bgg(W, "G")
    assert fm.complex.betti() == bgg.G(W).betti()
    # the G-double complex of GF(k): F(k) = S, windowed in degrees 0..3
    Fk = bgg.F(residue_field_module(ext_ring(2)))
    Wk = free_complex_window(Fk, 0, 3)
    fk = P.minimalize_bgg(Wk, "G")
    assert fk.is_minimal() and fk.complex.betti() == bgg.G(W).betti()


def test_minimalize_F_of_free_module():
    L = ext_ring(2)
    E = exterior_algebra_module(L)
    fm = P.minimalize_bgg(E)
    assert fm.is_minimal()
    assert fm.complex.trimmed().betti() == bgg.F(P.homology_modules(ModuleComplex(L, {0: E}, {}, 0, 0))).trimmed().betti()


def test_minimalize_cone_of_isomorphism():
    L = ext_ring(2)
    N = bgg.random_lambda_module(L, np.random.default_rng(4))
    ident = {d: L.field.eye(k) for d, k in N.dims.items()}
    con = ModuleComplex(L, {-1: N, 0: N}, {-1: ident}, -1, 0)
    fm = P.minimalize_bgg(con)
    assert all(fm.complex.term(p).rank == 0 for p in fm.complex.positions())
