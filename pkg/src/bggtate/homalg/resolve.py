"""Minimal generators, scalar cancellation and minimal free resolutions.

Everything is degree-by-degree linear algebra: a submodule of a free module is
known through its degree pieces, and its minimal generators in degree d are
the vectors not reached from degree d-1 by the degree-one ring generators.
"""

import numpy as np

from ..rings import LambdaModule, GradedMap, contract
from .complexes import FreeComplex
from .free import FreeModule, OpMatrix, column_from_vector, map_from_columns
from .modules import ModulePresentation

SERIES_LIMIT = 512


# ---------------------------------------------------------------------------
# minimal generators of submodules


def minimal_generators(module, subspace, degrees):
    """Generators of a submodule given by ``subspace(d)`` (spanning columns).

    ``subspace(d)`` returns either a matrix K or a pair (K, rows) where
    K[rows] is the identity, so that elements of the span are determined by
    those coordinates.  ``degrees`` must be increasing and contiguous.
    Returns a list of (twist, {key: column}) in the format of
    :func:`column_from_vector`.
    """
    F = module.field
    out = []
    prev_deg, prev = None, None
    for d in degrees:
        K = subspace(d)
        rows = None
        if isinstance(K, tuple):
            K, rows = K
        if K.shape[1]:
            have_prev = prev is not None and prev_deg == d - 1 and prev.shape[1]
            if rows is not None:
                # work in the coordinates K[rows] = I
                if have_prev:
                    span = np.concatenate([B[rows] for B in _actions(module, d, prev)], axis=1)
                else:
                    span = F.zeros(len(rows), 0)
                picked = F.extend_columns(span, F.eye(len(rows)))
            else:
                if have_prev:
                    span = np.concatenate(_actions(module, d, prev), axis=1)
                else:
                    span = F.zeros(K.shape[0], 0)
                picked = F.extend_columns(span, K)
            for j in picked:
                out.append(column_from_vector(module, K[:, j], d))
        prev_deg, prev = d, K
    return out


def _actions(module, d, X):
    if hasattr(module, "apply_actions"):
        return module.apply_actions(d, X)
    return [module.field.matmul(A, X) for A in module.action_matrices(d)]


def kernel_generators(phi, degrees):
    F = phi.field
    return minimal_generators(phi.source, lambda d: F.kernel_with_free(phi.degree_matrix(d)), degrees)


def image_generators(phi, degrees):
    F = phi.field
    return minimal_generators(phi.target, lambda d: F.column_space(phi.degree_matrix(d)), degrees)


def generator_span(phi):
    """Contiguous degree range covering the generators of phi's source."""
    degs = phi.source.generator_degrees()
    if not degs:
        return range(0)
    return range(min(degs), max(degs) + 1)


def lambda_degrees(module):
    r = module.degree_range()
    if r is None:
        return range(0)
    return range(r[0], r[1] + 1)


# ---------------------------------------------------------------------------
# scalar cancellation


def series_inverse(D):
    """Inverse of a square map whose scalar part is invertible."""
    F = D.field
    unit = D.ring.unit
    A = D.scalar_part()
    Ainv_m = F.inverse(A)
    Ainv = OpMatrix(D.target, D.source, {unit: Ainv_m}, check=False)
    N = D - OpMatrix(D.source, D.target, {unit: A}, check=False)
    step = -(Ainv @ N)
    term = Ainv
    total = Ainv
    for _ in range(SERIES_LIMIT):
        term = step @ term
        if term.is_zero():
            return total
        total = total + term
    raise RuntimeError("inverse series did not terminate")


def scalar_pivots(A, F):
    """Rows I and columns J such that A[I, J] is an invertible block of full rank."""
    J = F.independent_columns(A)
    if not J:
        return [], []
    I = F.independent_columns(A[:, J].T)
    return I, J


def cancel_at(C, p):
    """Cancel the full scalar block of d^p (one step of Gaussian elimination).

    Returns the smaller complex; homology is unchanged.
    """
    F = C.field
    d = C.diffs[p]
    I, J = scalar_pivots(d.scalar_part(), F)
    if not I:
        return C
    rows_y = [i for i in range(d.target.rank) if i not in set(I)]
    cols_y = [j for j in range(d.source.rank) if j not in set(J)]
    d_wv = d.restrict(I, J)
    d_wy = d.restrict(I, cols_y)
    d_yv = d.restrict(rows_y, J)
    d_yy = d.restrict(rows_y, cols_y)
    new_d = d_yy - d_yv @ series_inverse(d_wv) @ d_wy
    terms = dict(C.terms)
    diffs = dict(C.diffs)
    labels = dict(C.labels)
    terms[p] = d_yy.source
    terms[p + 1] = d_yy.target
    diffs[p] = new_d.with_modules(terms[p], terms[p + 1])
    if p - 1 in diffs:
        diffs[p - 1] = diffs[p - 1].restrict(cols_y, None).with_modules(terms[p - 1], terms[p])
    if p + 1 in diffs:
        diffs[p + 1] = diffs[p + 1].restrict(None, rows_y).with_modules(terms[p + 1], terms[p + 2])
    if p in labels:
        labels[p] = [labels[p][j] for j in cols_y]
    if p + 1 in labels:
        labels[p + 1] = [labels[p + 1][i] for i in rows_y]
    return FreeComplex(C.ring, terms, diffs, C.lo, C.hi, C.bounded, labels)


def minimize_complex(C):
    """Cancel scalar blocks until the complex is minimal."""
    changed = True
    while changed:
        changed = False
        for p in range(C.lo, C.hi):
            if C.ring.unit in C.diffs[p].coeffs:
                C = cancel_at(C, p)
                changed = True
    return C


# ---------------------------------------------------------------------------
# presentations and resolutions over S


def minimal_presentation(M):
    """An isomorphic presentation whose relation map has no unit entries and
    whose relations minimally generate their image."""
    rels = M.rels
    while True:
        if rels.source.rank:
            cols = image_generators(rels, generator_span(rels))
            rels = map_from_columns(rels.target, cols) if cols else OpMatrix.zero(FreeModule(M.ring, ()), rels.target)
        if M.ring.unit not in rels.coeffs:
            return ModulePresentation(rels)
        C = FreeComplex(M.ring, {-1: rels.source, 0: rels.target}, {-1: rels}, -1, 0, True)
        C = cancel_at(C, -1)
        rels = C.diffs[-1]


def default_syzygy_bound(phi, n):
    degs = phi.source.generator_degrees()
    return (max(degs) if degs else 0) + n + 2


def minimal_free_resolution(M, degree_bound=None, verify=True):
    """Minimal free resolution L of M over S, as a FreeComplex on [-(n+1), 0].

    Kernel generators are searched up to ``max generator degree + n + 2``
    (or ``degree_bound`` if given) at every step; the Hilbert-function identity
    sum (-1)^k dim L^{-k}_d = dim M_d is then checked on a degree window
    beyond every search bound, and the search is widened if it fails.
    """
    ring = M.ring
    n = ring.n
    pres = minimal_presentation(M)
    extra = 0
    for _ in range(4):
        C = _resolve(pres, n, degree_bound, extra)
        if not verify or _hilbert_identity_holds(C, pres, n, extra):
            return C
        extra += n + 2
    raise AssertionError("resolution failed the Hilbert-function identity")


def resolve_as_given(pres, degree_bound=None):
    """Like :func:`minimal_free_resolution` but keeps the given generators.

    ``pres.rels`` must already minimally generate the syzygies of the
    generators; L^0 is then exactly ``pres.gens``.
    """
    n = pres.ring.n
    extra = 0
    for _ in range(4):
        C = _resolve(pres, n, degree_bound, extra)
        if _hilbert_identity_holds(C, pres, n, extra):
            return C
        extra += n + 2
    raise AssertionError("resolution failed the Hilbert-function identity")


def _resolve(pres, n, degree_bound, extra):
    ring = pres.ring
    terms = {0: pres.gens}
    diffs = {}
    if pres.rels.source.rank:
        terms[-1] = pres.rels.source
        diffs[-1] = pres.rels
        k = 1
        while True:
            psi = diffs[-k]
            bound = degree_bound if degree_bound is not None else default_syzygy_bound(psi, n) + extra
            degs = psi.source.generator_degrees()
            cols = kernel_generators(psi, range(min(degs) + 1, bound + 1))
            if not cols:
                break
            if k >= n + 1:
                raise AssertionError("resolution longer than n+1 steps")
            phi = map_from_columns(psi.source, cols)
            terms[-k - 1] = phi.source
            diffs[-k - 1] = phi
            k += 1
    lo = min(terms)
    return FreeComplex(ring, terms, diffs, min(lo, -(n + 1)), 0, True)


def _hilbert_identity_holds(C, M, n, extra):
    gens = [g for t in C.terms.values() for g in t.generator_degrees()]
    if not gens:
        return True
    top = max(gens) + 2 * (n + 2) + extra
    for d in range(min(gens), top + 1):
        alt = sum((-1) ** (-p) * C.terms[p].dim(d) for p in C.positions())
        if alt != M.dim(d):
            return False
    return True


# ---------------------------------------------------------------------------
# leftward resolution over the exterior algebra


def left_kernel_step(phi):
    """Minimal free cover of ker(phi) over the exterior algebra, as an OpMatrix."""
    cols = kernel_generators(phi, lambda_degrees(phi.source))
    if not cols:
        return OpMatrix.zero(FreeModule(phi.ring, ()), phi.source)
    return map_from_columns(phi.source, cols)


def resolve_kernel_leftwards(phi, steps):
    """Maps psi_1: P_1 -> source(phi), psi_2: P_2 -> P_1, ... resolving ker(phi)."""
    maps = []
    cur = phi
    for _ in range(steps):
        psi = left_kernel_step(cur)
        maps.append(psi)
        if psi.source.rank == 0:
            break
        cur = psi
    return maps


def free_to_lambda(P):
    """The free exterior module as a :class:`LambdaModule`."""
    ring = P.ring
    rng = P.degree_range()
    if rng is None:
        return LambdaModule(ring, {}, {}, check=False)
    dims = {d: P.dim(d) for d in range(rng[0], rng[1] + 1)}
    action = {}
    for d in range(rng[0], rng[1]):
        for i, A in enumerate(P.action_matrices(d + 1)):
            action[(i, d)] = A
    return LambdaModule(ring, dims, action, check=False)


def opmatrix_to_graded(phi):
    """Degreewise blocks of an exterior OpMatrix as a GradedMap."""
    src = free_to_lambda(phi.source)
    tgt = free_to_lambda(phi.target)
    degs = set(src.dims) | set(tgt.dims)
    return GradedMap(src, tgt, {d: phi.degree_matrix(d) for d in degs})


def lambda_cover(N):
    """Minimal free cover P -> N of a LambdaModule, as (P, {degree: matrix}).

    A generator y in degree g gives the summand with twist -g-n-1; its basis
    vector X_T goes to (-1)^{a|v|} eps(v) e_v . y with v the complement of T and
    C_v X_{0..n} = eps(v) X_T.
    """
    ring = N.ring
    F = N.field
    n1 = ring.n + 1
    full = tuple(range(n1))
    gens = []
    for d in N.degrees():
        K = F.eye(N.dim(d))
        span_parts = [N.act(i, d - 1) for i in range(n1) if N.dim(d - 1)]
        span = np.concatenate(span_parts, axis=1) if span_parts else F.zeros(N.dim(d), 0)
        for j in F.extend_columns(span, K):
            gens.append((d, K[:, j]))
    P = FreeModule(ring, [-g - n1 for g, _ in gens])
    blocks = {}
    rng = P.degree_range()
    if rng is None:
        return P, blocks
    for d in range(rng[0], rng[1] + 1):
        offs = P.offsets(d)
        m = F.zeros(N.dim(d), offs[-1])
        for j, (g, y) in enumerate(gens):
            a = P.twists[j]
            for t, T in enumerate(P.summand_basis(j, d)):
                v = tuple(x for x in full if x not in T)
                eps, _ = contract(v, full)
                s = eps * (-1) ** ((a * len(v)) % 2)
                col = F.matmul(N.act_monomial(v, g), F.asarray(y).reshape(-1, 1))[:, 0]
                m[:, offs[j] + t] = F.scale(s, col) if col.size else col
        blocks[d] = m
    return P, blocks


def lambda_resolution(N, steps):
    """Minimal free (left) resolution of a LambdaModule on positions -steps..0.

    Returns (FreeComplex, augmentation blocks P^0 -> N).
    """
    ring = N.ring
    F = N.field
    P0, aug = lambda_cover(N)
    terms = {0: P0}
    diffs = {}
    # kernel of the augmentation, degree by degree
    def ker0(d):
        if d in aug and aug[d].shape[1]:
            if aug[d].shape[0] == 0:
                return F.eye(aug[d].shape[1])
            return F.kernel(aug[d])
        return F.eye(P0.dim(d))

    cols = minimal_generators(P0, ker0, lambda_degrees(P0)) if P0.rank else []
    if steps >= 1:
        psi = map_from_columns(P0, cols) if cols else OpMatrix.zero(FreeModule(ring, ()), P0)
        terms[-1] = psi.source
        diffs[-1] = psi
        for k in range(2, steps + 1):
            if psi.source.rank == 0:
                break
            psi = left_kernel_step(psi)
            terms[-k] = psi.source
            diffs[-k] = psi
    return FreeComplex(ring, terms, diffs, -steps, 0, False), aug
