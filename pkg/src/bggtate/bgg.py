"""The BGG functors F and G, their twist and duality identities, and the
resolutions built from them.

F sends a graded module N over the exterior algebra to the linear complex
F(N)^p = S(p) (x) N_p with differential sum_i X_i (x) e_i.  G sends a graded
S-module M to G(M)^p = M_p (x) Wedge(V*)(p) with differential
sum_i (X_i on M) (x) (contraction by e_i).  Both extend to complexes through
total complexes of double complexes.
"""

import numpy as np

from .homalg import (
    DoubleComplex,
    FreeComplex,
    FreeModule,
    ModuleComplex,
    OpMatrix,
    dualize_complex,
    find_isomorphism,
    free_complex_to_modules,
    free_complex_window,
    free_to_lambda,
    pq_sign_isomorphism,
    total_complex,
)
from .homalg.complexes import is_chain_map
from .rings import EXTERIOR, SYMMETRIC, LambdaModule, contract, ext_monomials


def _as_complex(X, ring):
    if isinstance(X, ModuleComplex):
        return X
    return ModuleComplex(ring, {0: X}, {}, 0, 0, check=False)


def exterior_ring(r):
    return r if r.kind == EXTERIOR else r.with_kind(EXTERIOR)


def symmetric_ring(r):
    return r if r.kind == SYMMETRIC else r.with_kind(SYMMETRIC)


# ---------------------------------------------------------------------------
# F


def F_double(N):
    """Double complex X^{pq} = S(q) (x) (N^p)_q of a complex of exterior modules."""
    Nc = _as_complex(N, N.ring)
    S = symmetric_ring(Nc.ring)
    terms, dh, dv = {}, {}, {}
    for p, Np in Nc.terms.items():
        for q in Np.degrees():
            terms[(p, q)] = FreeModule(S, [q] * Np.dim(q))
    for (p, q), X in terms.items():
        if (p, q + 1) in terms:
            Np = Nc.terms[p]
            coeffs = {S.var(i): Np.act(i, q) for i in range(S.n + 1)}
            dv[(p, q)] = OpMatrix(X, terms[(p, q + 1)], coeffs, check=False)
        if (p + 1, q) in terms:
            dh[(p, q)] = OpMatrix(X, terms[(p + 1, q)], {S.unit: Nc.block(p, q)}, check=False)
    return DoubleComplex(S, terms, dh, dv)


def F(N):
    """F of a LambdaModule or of a bounded ModuleComplex of them (bounded S-complex)."""
    X = F_double(N)
    C = total_complex(X)
    if not X.terms:
        S = symmetric_ring(N.ring)
        return FreeComplex(S, {}, {}, 0, 0, True)
    return C


# ---------------------------------------------------------------------------
# G


def G_double(M):
    """Double complex Y^{pq} = (M^p)_q (x) Wedge(V*)(q) of a complex of S-module windows."""
    Mc = _as_complex(M, M.ring)
    L = exterior_ring(Mc.ring)
    terms, dh, dv = {}, {}, {}
    for p, Mp in Mc.terms.items():
        for q in Mp.degrees():
            terms[(p, q)] = FreeModule(L, [q] * Mp.dim(q))
    for (p, q), Y in terms.items():
        if (p, q + 1) in terms:
            Mp = Mc.terms[p]
            coeffs = {(i,): Mp.act(i, q) for i in range(L.n + 1)}
            dv[(p, q)] = OpMatrix(Y, terms[(p, q + 1)], coeffs, check=False)
        if (p + 1, q) in terms:
            dh[(p, q)] = OpMatrix(Y, terms[(p + 1, q)], {L.unit: Mc.block(p, q)}, check=False)
    return DoubleComplex(L, terms, dh, dv)


def G(M, exact_below=True, exact_above=True, lo=None, hi=None):
    """G of an S-module window (or a complex of them) as a free exterior complex.

    Windows cut off in internal degree make the far end of the result
    unreliable; the ``exact_*`` flags record which ends are genuinely zero.
    """
    X = G_double(M)
    if not X.terms:
        return FreeComplex(exterior_ring(M.ring), {}, {}, 0, 0, True)
    C = total_complex(X, lo, hi)
    C.zero_below, C.zero_above = exact_below, exact_above
    return C


# ---------------------------------------------------------------------------
# twists of module complexes


def twist_module_complex(Mc, a):
    """Twist every term by a (maps re-indexed in internal degree, no sign over S;
    over the exterior algebra the module twist already carries its sign and
    the differential is multiplied by (-1)^a)."""
    F = Mc.field
    terms = {p: t.twist(a) for p, t in Mc.terms.items()}
    s = a % 2 if Mc.ring.kind == EXTERIOR else 0
    maps = {p: {d - a: (F.neg(m) if s else m) for d, m in b.items()} for p, b in Mc.maps.items()}
    return ModuleComplex(Mc.ring, terms, maps, Mc.lo, Mc.hi, check=False)


# ---------------------------------------------------------------------------
# identities


def check_twist_identity_F(N, a):
    """F(N(a)) equals T^a F(N)(-a) as stored data."""
    Nc = _as_complex(N, N.ring)
    left = F(twist_module_complex(Nc, a))
    right = F(Nc).twist(-a).translate(a)
    return _same_complex(left, right)


def check_twist_identity_G(M, a):
    """G(M(a)) equals T^a G(M)(-a) as stored data."""
    Mc = _as_complex(M, M.ring)
    left = G(twist_module_complex(Mc, a))
    right = G(Mc).twist(-a).translate(a)
    return _same_complex(left, right)


def _same_complex(A, B):
    A, B = A.trimmed(), B.trimmed()
    if A.is_zero() and B.is_zero():
        return True
    return A.equals(B)


def check_duality_F(N):
    """F(N*) against F(N)^dual.

    Returns (literal equality, chain isomorphism found).  For a single module
    the two agree on the nose; for complexes the identification is the
    blockwise (-1)^{pq} map.
    """
    Nc = _as_complex(N, N.ring)
    left = F(Nc.dual())
    right = dualize_complex(F(Nc))
    literal = _same_complex(left, right)
    X = F_double(Nc)
    tot_d, dual_t, maps = pq_sign_isomorphism(X)
    iso = _same_complex(tot_d, left) and is_chain_map(maps, tot_d, dual_t)
    for m in maps.values():
        sc = m.scalar_part()
        iso = iso and (sc.shape[0] == 0 or left.field.rank(sc) == sc.shape[0])
    return literal, iso


def check_duality_G(M, rng):
    """Search for an invertible chain map G(M)* -> T^{-n-1} G((M (x) w_S)*).

    Returns the maps (or None when no isomorphism is found).
    """
    Mc = _as_complex(M, M.ring)
    n = Mc.ring.n
    left = free_complex_to_modules(G(Mc)).dual()
    twisted = twist_module_complex(Mc, -(n + 1))
    right = free_complex_to_modules(G(twisted.dual()).translate(-(n + 1)))
    return find_isomorphism(left, right, rng)


def cone_identity_F(phi_blocks, N0, N1):
    """F(Con(phi)) against Con(F(phi)) for a module map phi: N0 -> N1.

    Con(phi) = [N0 -> N1] at positions (-1, 0).  Returns True when the stored
    complexes agree.
    """
    from .homalg import cone

    con = ModuleComplex(N0.ring, {-1: N0, 0: N1}, {-1: phi_blocks}, -1, 0)
    left = F(con)
    X, Y = F(N0), F(N1)
    S = X.ring
    maps = {}
    for p in X.positions():
        src, tgt = X.term(p), Y.term(p)
        mat = phi_blocks.get(p, N0.ring.field.zeros(N1.dim(p), N0.dim(p)))
        maps[p] = OpMatrix(src, tgt, {S.unit: mat}, check=False)
    right = cone(maps, X, Y)
    return _same_complex(left, right)


# ---------------------------------------------------------------------------
# maps into twisted contraction modules


def maps_into_contraction(N, phi, a):
    """Extend phi: N_{-a} -> U to the exterior-linear map N -> U (x) Wedge(V*)(a).

    The coefficient of X_T (|T| = r) in the image of y is
    (-1)^{a r} s_T phi(e_T . y), where C_T X_T = s_T.  Returns {degree: matrix}
    with rows ordered U-index major, then X_T.
    """
    F = N.field
    n1 = N.ring.n + 1
    phi = F.asarray(phi)
    u = phi.shape[0]
    blocks = {}
    for r in range(n1 + 1):
        d = -a - r
        if not N.dim(d):
            continue
        mons = ext_monomials(n1, r)
        m = F.zeros(u * len(mons), N.dim(d))
        for t, T in enumerate(mons):
            s, _ = contract(T, T)
            sign = s * (-1) ** ((a * r) % 2)
            img = F.matmul(phi, N.act_monomial(T, d))
            rows = [k * len(mons) + t for k in range(u)]
            m[rows, :] = F.scale(sign, img)
        blocks[d] = m
    return blocks


# ---------------------------------------------------------------------------
# GF(N) and the augmentation


def gf_resolution(N, length):
    """GF(N) on positions 0..length together with beta: N -> GF(N)^0.

    beta is built from (-1)^p id on N_p through :func:`maps_into_contraction`.
    Returns (complex, beta blocks, report) where the report records linearity,
    the chain condition and the homology check.
    """
    L = exterior_ring(N.ring)
    Fc = F(N)
    degs = N.degrees()
    if not degs:
        return FreeComplex(L, {}, {}, 0, max(length, 0), True), {}, {"ok": True}
    # F(N)^p is S(p) (x) N_p; G needs its degree-q pieces for p + q in 0..length+1
    pmin, pmax = min(degs), max(degs)
    window = free_complex_window(Fc, -pmax, length + 1 - pmin)
    C = G(window, exact_below=True, exact_above=False, lo=0, hi=length + 1)
    C = C.restrict(0, length + 1)
    C.zero_below = True
    F_ = N.field
    # beta, summand by summand in the label order of position 0
    labels = C.labels.get(0, [])
    P0 = C.term(0)
    beta = {}
    for d in range(min(degs) - N.ring.n - 1, max(degs) + 1):
        if not N.dim(d) and not P0.dim(d):
            continue
        beta[d] = F_.zeros(P0.dim(d), N.dim(d))
    row = {d: 0 for d in beta}
    for p in sorted({lab[0] for lab in labels}):
        phi = F_.eye(N.dim(p))
        if p % 2:
            phi = F_.neg(phi)
        blocks = maps_into_contraction(N, phi, -p)
        for d in beta:
            k = N.dim(p) * len(ext_monomials(N.ring.n + 1, p - d)) if 0 <= p - d <= N.ring.n + 1 else 0
            if k and d in blocks:
                beta[d][row[d] : row[d] + k, :] = blocks[d]
            row[d] += k
    report = check_augmentation(N, C, beta)
    return C, beta, report


def check_augmentation(N, C, beta):
    F_ = N.field
    P0 = free_to_lambda(C.term(0))
    linear = True
    for d in beta:
        for i in range(N.ring.n + 1):
            lhs = F_.matmul(beta.get(d + 1, F_.zeros(P0.dim(d + 1), N.dim(d + 1))), N.act(i, d))
            rhs = F_.matmul(P0.act(i, d), beta[d])
            if lhs.shape == rhs.shape and not F_.equal(lhs, rhs):
                linear = False
    chain = all(F_.is_zero(F_.matmul(C.diff(0).degree_matrix(d), b)) for d, b in beta.items() if b.size)
    iso = True
    for d, b in beta.items():
        ker = P0.dim(d) - F_.rank(C.diff(0).degree_matrix(d))
        if F_.rank(b) != N.dim(d) or ker != N.dim(d):
            iso = False
    acyclic = True
    rng = C.internal_degree_range()
    for p in range(1, C.hi):
        for d in range(rng[0], rng[1] + 1):
            if C.homology_dim(p, d):
                acyclic = False
    return {"linear": linear, "chain_map": chain, "h0_iso": iso, "acyclic": acyclic,
            "ok": linear and chain and iso and acyclic}


# ---------------------------------------------------------------------------
# left resolutions


def left_resolution(N, depth):
    """The complex T^{-n-1} G((F(N)^dual (x) w_S)*) on positions -depth..top.

    Returns (complex, report) where the report compares homology with the
    homology of N on the window.
    """
    Nc = _as_complex(N, N.ring)
    n = Nc.ring.n
    D = dualize_complex(F(Nc)).twist(-(n + 1))
    # (S(b))* lives in degrees q <= b; collect enough q for positions >= -depth - 1
    twists = [a for t in D.terms.values() for a in t.twists]
    if not twists:
        L = exterior_ring(Nc.ring)
        return FreeComplex(L, {}, {}, -depth, 0, True), {"ok": True}
    qhi = max(twists)
    pmax = -D.lo
    # position s of the result is position s - n - 1 of G(E)
    qlo = (-depth - n - 3) - pmax
    E = free_complex_window(D, -qhi, -qlo).dual()
    C = G(E, exact_below=False, exact_above=True)
    C = C.translate(-(n + 1))
    top = C.hi
    C = C.restrict(-depth - 1, top)
    C.zero_above = True
    report = compare_homology(C, Nc, range(-depth, top + 1))
    return C, report


def compare_homology(C, Nc, positions):
    """Positionwise, degreewise homology dims of a free exterior complex vs a module complex."""
    rng = C.internal_degree_range()
    degs = range(rng[0], rng[1] + 1) if rng else range(0)
    mismatches = []
    for p in positions:
        if p <= C.lo and not C.zero_below:
            continue
        for d in degs:
            want = Nc.homology_dim(p, d) if p in Nc.terms else 0
            got = C.homology_dim(p, d)
            if want != got:
                mismatches.append((p, d, got, want))
    return {"ok": not mismatches, "mismatches": mismatches}


# ---------------------------------------------------------------------------
# random inputs for property tests


def _span_module(P, gens):
    """Degreewise bases of the submodule of P generated by (degree, vector) pairs."""
    F = P.field
    n1 = P.n + 1
    cols = {}
    for d, y in gens:
        y = F.asarray(y).reshape(-1, 1)
        for r in range(n1 + 1):
            for S in ext_monomials(n1, r):
                if P.dim(d + r):
                    cols.setdefault(d + r, []).append(F.matmul(P.act_monomial(S, d), y))
    basis = {}
    for d, cs in cols.items():
        B = F.column_space(np.concatenate(cs, axis=1))
        if B.shape[1]:
            basis[d] = B
    return basis


def submodule(P, gens):
    """The submodule generated by ``gens`` with its inclusion blocks."""
    F = P.field
    B = _span_module(P, gens)
    action = {}
    for d, b in B.items():
        if d + 1 not in B:
            continue
        for i in range(P.n + 1):
            action[(i, d)] = F.solve(B[d + 1], F.matmul(P.act(i, d), b))
    U = LambdaModule(P.ring, {d: b.shape[1] for d, b in B.items()}, action, check=False)
    return U, B


def quotient_module(P, B):
    """P / U for U given by degreewise bases B; returns (quotient, projection blocks)."""
    F = P.field
    dims, comp, proj = {}, {}, {}
    for d in P.degrees():
        k = P.dim(d)
        U = B.get(d, F.zeros(k, 0))
        extra = F.extend_columns(U, F.eye(k))
        C = F.eye(k)[:, extra]
        comp[d] = C
        full = np.concatenate([U, C], axis=1)
        # coordinates in [U | C], keep the C part
        proj[d] = F.inverse(full)[U.shape[1] :, :]
        if extra:
            dims[d] = len(extra)
    action = {}
    for d in dims:
        if d + 1 not in dims:
            continue
        for i in range(P.n + 1):
            action[(i, d)] = F.matmul(proj[d + 1], F.matmul(P.act(i, d), comp[d]))
    Q = LambdaModule(P.ring, dims, action, check=False)
    return Q, {d: proj[d] for d in dims}


def _random_ambient(L, rng):
    from .rings import contraction_module, exterior_algebra_module

    base = exterior_algebra_module(L) if rng.integers(0, 2) else contraction_module(L)
    P = base.twist(int(rng.integers(-2, 3)))
    if rng.integers(0, 3) == 0:
        other = (contraction_module(L) if rng.integers(0, 2) else exterior_algebra_module(L)).twist(int(rng.integers(-2, 3)))
        P = P.direct_sum(other)
    return P


def random_lambda_module(ring, rng, max_dim=3, attempts=200):
    """A random finite module: a sub or quotient module of a sum of twisted free modules."""
    L = exterior_ring(ring)
    F = L.field
    for _ in range(attempts):
        P = _random_ambient(L, rng)
        degs = P.degrees()
        gens = []
        for _ in range(int(rng.integers(1, 3))):
            d = degs[int(rng.integers(0, len(degs)))]
            gens.append((d, F.random_matrix(rng, P.dim(d), 1)))
        U, B = submodule(P, gens)
        N = U if rng.integers(0, 2) else quotient_module(P, B)[0]
        if all(k <= max_dim for k in N.dims.values()):
            return N
    return LambdaModule(L, {0: 1}, {})


def random_lambda_complex(ring, rng, length=3, max_dim=3, attempts=200):
    """A random bounded complex of exterior modules on positions 0..length-1.

    Direct sum of pieces of three kinds: a single module, a chain
    N(b) -> N(b+1) -> ... with differential v.- for a random linear form v,
    and a short exact piece U -> P -> P/U.
    """
    L = exterior_ring(ring)
    F = L.field
    for _ in range(attempts):
        pieces = []
        for _ in range(int(rng.integers(1, 3))):
            kind = int(rng.integers(0, 3))
            start = int(rng.integers(0, length))
            if kind == 0:
                pieces.append(({start: random_lambda_module(L, rng, max_dim)}, {}))
            elif kind == 1:
                N = random_lambda_module(L, rng, max_dim)
                b = int(rng.integers(-1, 2))
                c = [F.scalar(int(x)) for x in rng.integers(0, 7, size=L.n + 1)]
                span = int(rng.integers(2, length + 1))
                start = min(start, length - span)
                terms = {start + k: N.twist(b + k) for k in range(span)}
                maps = {}
                for k in range(span - 1):
                    p = start + k
                    blocks = {}
                    for d in terms[p].degrees():
                        m = F.zeros(N.dim(d + b + k + 1), N.dim(d + b + k))
                        for i, ci in enumerate(c):
                            if ci:
                                m = F.add(m, F.scale(ci, N.act(i, d + b + k)))
                        blocks[d] = m
                    maps[p] = blocks
                pieces.append((terms, maps))
            else:
                P = _random_ambient(L, rng)
                degs = P.degrees()
                d0 = degs[int(rng.integers(0, len(degs)))]
                U, B = submodule(P, [(d0, F.random_matrix(rng, P.dim(d0), 1))])
                Q, proj = quotient_module(P, B)
                start = min(start, length - 3) if length >= 3 else 0
                terms = {start: U, start + 1: P, start + 2: Q}
                maps = {start: dict(B), start + 1: proj}
                terms = {p: t for p, t in terms.items() if p < length}
                maps = {p: m for p, m in maps.items() if p + 1 < length}
                pieces.append((terms, maps))
        C = _sum_pieces(L, pieces, length)
        if all(k <= max_dim for t in C.terms.values() for k in t.dims.values()):
            return C
    return ModuleComplex(L, {0: LambdaModule(L, {0: 1}, {})}, {}, 0, length - 1)


def _sum_pieces(L, pieces, length):
    F = L.field
    from .rings import zero_module

    terms = {p: zero_module(L) for p in range(length)}
    offsets = []
    for pt, _ in pieces:
        off = {}
        for p in range(length):
            off[p] = {d: terms[p].dim(d) for d in set(terms[p].dims) | set(pt.get(p, zero_module(L)).dims)}
            if p in pt:
                terms[p] = terms[p].direct_sum(pt[p])
        offsets.append(off)
    maps = {}
    for p in range(length - 1):
        src, tgt = terms[p], terms[p + 1]
        blocks = {}
        for d in set(src.dims) | set(tgt.dims):
            blocks[d] = F.zeros(tgt.dim(d), src.dim(d))
        for (pt, pm), off in zip(pieces, offsets):
            for d, m in pm.get(p, {}).items():
                if not m.size:
                    continue
                r0, c0 = off[p + 1].get(d, 0), off[p].get(d, 0)
                blocks[d][r0 : r0 + m.shape[0], c0 : c0 + m.shape[1]] = m
        maps[p] = blocks
    return ModuleComplex(L, terms, maps, 0, length - 1)


__all__ = [
    "F",
    "F_double",
    "G",
    "G_double",
    "check_duality_F",
    "check_duality_G",
    "check_twist_identity_F",
    "check_twist_identity_G",
    "cone_identity_F",
    "compare_homology",
    "gf_resolution",
    "left_resolution",
    "maps_into_contraction",
    "quotient_module",
    "random_lambda_complex",
    "random_lambda_module",
    "submodule",
    "twist_module_complex",
]
