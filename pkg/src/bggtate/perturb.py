"""Contractions of complexes and the perturbation lemma.

A contraction of X onto Y is a triple (f, g, h) with f: X -> Y, g: Y -> X
chain maps and h a degree -1 operator on X such that

    fg = id,  id - gf = dh + hd,  fh = 0,  hg = 0,  hh = 0.

Operators are stored position by position as :class:`OpMatrix` values, so the
same code runs over S, over the exterior algebra and over plain vector spaces
(the :class:`ScalarRing` key algebra).
"""

from dataclasses import dataclass, field

import numpy as np

from .homalg import (
    DoubleComplex,
    FreeComplex,
    FreeModule,
    ModuleComplex,
    OpMatrix,
    ScalarRing,
    total_complex,
    zero_free,
)
from .homalg.resolve import scalar_pivots, series_inverse


class ContractionError(ValueError):
    """A contraction identity failed; the message names the identity."""


# ---------------------------------------------------------------------------
# graded operators


class GradedOp:
    """A family of maps maps[p]: source^p -> target^{p+degree}."""

    def __init__(self, source, target, degree, maps=None):
        self.source = source
        self.target = target
        self.degree = degree
        self.maps = {}
        for p in source.positions():
            m = (maps or {}).get(p)
            if m is None:
                m = OpMatrix.zero(source.term(p), _term(target, p + degree))
            self.maps[p] = m

    @classmethod
    def identity(cls, X):
        return cls(X, X, 0, {p: OpMatrix.identity(X.term(p)) for p in X.positions()})

    @classmethod
    def differential(cls, X):
        return cls(X, X, 1, {p: X.diff(p) if p < X.hi else None for p in X.positions()})

    def __getitem__(self, p):
        return self.maps.get(p)

    def __matmul__(self, other):
        out = {}
        for p, b in other.maps.items():
            a = self.maps.get(p + other.degree)
            if a is None:
                continue
            out[p] = a @ b
        return GradedOp(other.source, self.target, self.degree + other.degree, out)

    def __add__(self, other):
        return GradedOp(self.source, self.target, self.degree, {p: m + other.maps[p] for p, m in self.maps.items()})

    def __neg__(self):
        return GradedOp(self.source, self.target, self.degree, {p: -m for p, m in self.maps.items()})

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self):
        return all(m.is_zero() for m in self.maps.values())

    def equals(self, other):
        return all(m.equals(other.maps[p]) for p, m in self.maps.items())


def _term(C, p):
    if C.lo <= p <= C.hi:
        return C.terms[p]
    return zero_free(C.ring)


# ---------------------------------------------------------------------------
# contractions


@dataclass
class Contraction:
    big: FreeComplex
    small: FreeComplex
    f: GradedOp
    g: GradedOp
    h: GradedOp

    def identities(self):
        X, Y = self.big, self.small
        dX, dY = GradedOp.differential(X), GradedOp.differential(Y)
        idX, idY = GradedOp.identity(X), GradedOp.identity(Y)
        f, g, h = self.f, self.g, self.h
        return {
            "f chain map": (dY @ f).equals(f @ dX),
            "g chain map": (dX @ g).equals(g @ dY),
            "(i) fg = id": (f @ g).equals(idY),
            "(ii) id - gf = dh + hd": (idX - g @ f).equals(dX @ h + h @ dX),
            "(iii) fh = 0": (f @ h).is_zero(),
            "(iv) hg = 0": (h @ g).is_zero(),
            "(v) hh = 0": (h @ h).is_zero(),
        }

    def check(self):
        bad = [k for k, ok in self.identities().items() if not ok]
        if bad:
            raise ContractionError("contraction identities fail: " + ", ".join(bad))
        return self


def normalize(X, Y, f, g, h):
    """Enforce the side conditions on data satisfying (i) and (ii).

    phi = id - gf, h' = phi h phi, h'' = h' d h'.
    """
    dX = GradedOp.differential(X)
    idX, idY = GradedOp.identity(X), GradedOp.identity(Y)
    if not (f @ g).equals(idY):
        raise ContractionError("(i) fg = id fails")
    phi = idX - g @ f
    if not phi.equals(dX @ h + h @ dX):
        raise ContractionError("(ii) id - gf = dh + hd fails")
    h1 = phi @ h @ phi
    h2 = h1 @ dX @ h1
    return Contraction(X, Y, f, g, h2).check()


# ---------------------------------------------------------------------------
# cancellation (Gaussian elimination on a complex)


def _embed(op, rows, cols, source, target):
    """Place op (rows x cols blocks) inside a map source -> target."""
    F = source.field
    out = {}
    for k, v in op.coeffs.items():
        m = F.zeros(target.rank, source.rank)
        if len(rows) and len(cols):
            m[np.ix_(rows, cols)] = v
        out[k] = m
    return OpMatrix(source, target, out, check=False)


def cancel(X, split):
    """Contraction of X onto Y from decompositions X^p = V^p + W^p + Y^p.

    ``split[p] = (V indices, W indices)`` (summand indices of X^p); the rest
    is Y^p.  The component d_wv: V^p -> W^{p+1} must be invertible.
    """
    ring = X.ring
    parts = {}
    for p in X.positions():
        V, W = split.get(p, ([], []))
        V, W = list(V), list(W)
        Yi = [j for j in range(X.term(p).rank) if j not in set(V) | set(W)]
        parts[p] = (V, W, Yi)

    def comp(p, rows_of, cols_of):
        d = X.diff(p)
        return d.restrict(rows_of, cols_of)

    inv = {}
    for p in X.positions():
        V = parts[p][0]
        Wn = parts[p + 1][1] if p + 1 in parts else []
        if len(V) != len(Wn):
            raise ContractionError(f"d_wv at position {p} is not square")
        if not V:
            continue
        dwv = comp(p, Wn, V)
        if dwv.scalar_part().shape[0] and X.field.rank(dwv.scalar_part()) != len(V):
            raise ContractionError(f"d_wv at position {p} is not invertible")
        inv[p] = series_inverse(dwv)  # W^{p+1} -> V^p

    terms, diffs = {}, {}
    for p in X.positions():
        terms[p] = X.term(p).sub(parts[p][2])
    labels = {p: [X.labels[p][j] for j in parts[p][2]] for p in X.positions() if p in X.labels}
    for p in range(X.lo, X.hi):
        Y0, Y1 = parts[p][2], parts[p + 1][2]
        dyy = comp(p, Y1, Y0)
        if p in inv:
            V, W1 = parts[p][0], parts[p + 1][1]
            dyy = dyy - comp(p, Y1, V) @ inv[p] @ comp(p, W1, Y0)
        diffs[p] = dyy.with_modules(terms[p], terms[p + 1])
    Y = FreeComplex(ring, terms, diffs, X.lo, X.hi, X.bounded, labels)

    f, g, h = {}, {}, {}
    for p in X.positions():
        V, W, Yi = parts[p]
        Xp, Yp = X.term(p), Y.term(p)
        fp = _embed(OpMatrix.identity(Yp), list(range(len(Yi))), Yi, Xp, Yp)
        if p - 1 in inv:
            Vm = parts[p - 1][0]
            corr = -(comp(p - 1, Yi, Vm) @ inv[p - 1])  # W^p -> Y^p
            fp = fp + _embed(corr, list(range(len(Yi))), W, Xp, Yp)
        f[p] = fp
        gp = _embed(OpMatrix.identity(Yp), Yi, list(range(len(Yi))), Yp, Xp)
        if p in inv:
            W1 = parts[p + 1][1]
            corr = -(inv[p] @ comp(p, W1, Yi))  # Y^p -> V^p
            gp = gp + _embed(corr, V, list(range(len(Yi))), Yp, Xp)
        g[p] = gp
        if p - 1 in inv:
            Vm = parts[p - 1][0]
            h[p] = _embed(inv[p - 1], Vm, W, Xp, X.term(p - 1))
    return Contraction(
        X, Y, GradedOp(X, Y, 0, f), GradedOp(Y, X, 0, g), GradedOp(X, X, -1, h)
    ).check()


def unit_split(X, p):
    """A cancellation split using the full scalar block of d^p."""
    I, J = scalar_pivots(X.diff(p).scalar_part(), X.field)
    return {p: (J, []), p + 1: ([], I)}


# ---------------------------------------------------------------------------
# splitting complexes


def _scalar_only(d):
    return all(k == d.ring.unit for k in d.coeffs)


def split_contraction(X):
    """Contraction (pi, u, h) of X onto its homology with zero differential.

    The differential must have scalar entries only (a complex of vector
    spaces, or such a complex tensored with free modules).  Each class of
    equal twists is split separately: V = standard vectors at the pivot
    columns of d, B = d(V) one step later, H a greedy complement of B in ker d.
    """
    F = X.field
    ring = X.ring
    for p in range(X.lo, X.hi):
        if not _scalar_only(X.diff(p)):
            raise ValueError("split_contraction needs scalar differentials")
    pos = list(X.positions())
    twists = sorted({a for p in pos for a in X.term(p).twists})
    Hidx = {p: [] for p in pos}  # (twist, column vector in X^p) pairs
    pi_rows = {p: [] for p in pos}
    u_cols = {p: [] for p in pos}
    h_blocks = {p: [] for p in pos}
    for t in twists:
        idx = {p: [j for j, a in enumerate(X.term(p).twists) if a == t] for p in pos}
        D = {}
        for p in pos:
            if p < X.hi:
                D[p] = X.diff(p).scalar_part()[np.ix_(idx[p + 1], idx[p])]
        Vb = {}
        for p in pos:
            n = len(idx[p])
            if p in D and n:
                piv = F.rref(D[p])[2] if D[p].shape[0] else []
            else:
                piv = []
            Vb[p] = F.eye(n)[:, piv] if n else F.zeros(0, 0)
        for p in pos:
            n = len(idx[p])
            if not n:
                continue
            Bp = F.matmul(D[p - 1], Vb[p - 1]) if (p - 1) in D and Vb[p - 1].shape[1] else F.zeros(n, 0)
            Zp = F.kernel(D[p]) if p in D and D[p].shape[0] else F.eye(n)
            Hp = Zp[:, F.extend_columns(Bp, Zp)] if Zp.shape[1] else F.zeros(n, 0)
            Q = np.concatenate([Vb[p], Bp, Hp], axis=1)
            Qinv = F.inverse(Q)
            nv, nb = Vb[p].shape[1], Bp.shape[1]
            pi_rows[p].append((idx[p], Qinv[nv + nb :, :]))
            u_cols[p].append((idx[p], Hp))
            Hidx[p].extend([t] * Hp.shape[1])
            if nb:
                # h^p: B^p -> V^{p-1}, V^{p-1} basis times the B-coordinates
                h_blocks[p].append((idx[p], idx[p - 1], F.matmul(Vb[p - 1], Qinv[nv : nv + nb, :])))
    Hterms = {p: FreeModule(ring, Hidx[p]) for p in pos}
    H = FreeComplex(ring, Hterms, {}, X.lo, X.hi, X.bounded)
    pi, u, h = {}, {}, {}
    for p in pos:
        Xp, Hp_mod = X.term(p), Hterms[p]
        P = F.zeros(Hp_mod.rank, Xp.rank)
        U = F.zeros(Xp.rank, Hp_mod.rank)
        r = 0
        for (cols, rows), (_, ucols) in zip(pi_rows[p], u_cols[p]):
            k = rows.shape[0]
            if k:
                P[np.ix_(list(range(r, r + k)), cols)] = rows
                U[np.ix_(cols, list(range(r, r + k)))] = ucols
            r += k
        pi[p] = OpMatrix(Xp, Hp_mod, {ring.unit: P}, check=False)
        u[p] = OpMatrix(Hp_mod, Xp, {ring.unit: U}, check=False)
        if h_blocks[p]:
            Hm = F.zeros(X.term(p - 1).rank, Xp.rank)
            for cols, rows, blk in h_blocks[p]:
                Hm[np.ix_(rows, cols)] = blk
            h[p] = OpMatrix(Xp, X.term(p - 1), {ring.unit: Hm}, check=False)
    return Contraction(X, H, GradedOp(X, H, 0, pi), GradedOp(H, X, 0, u), GradedOp(X, X, -1, h)).check()


# ---------------------------------------------------------------------------
# basic perturbation lemma


def _powers(A, limit, what):
    """[A, A^2, ...] until zero; raises if A^limit is still nonzero."""
    out = []
    cur = A
    for i in range(1, limit + 1):
        if cur.is_zero():
            return out
        out.append(cur)
        cur = cur @ A
    if cur.is_zero():
        return out
    raise ContractionError(f"{what} is not nilpotent: power {limit + 1} is nonzero")


def _alternating_sum(pows, X):
    acc = GradedOp.identity(X)
    for i, P in enumerate(pows, start=1):
        acc = acc - P if i % 2 else acc + P
    return acc


def _inverse_of_one_plus(A, X):
    F = X.field
    maps = {}
    for p, m in A.maps.items():
        k = X.term(p).rank
        mat = F.add(F.eye(k), m.coeff(X.ring.unit)) if k else F.zeros(0, 0)
        if k and F.rank(mat) < k:
            raise ContractionError(f"id + h d' is neither nilpotent-perturbed nor invertible at position {p}")
        maps[p] = OpMatrix(X.term(p), X.term(p), {X.ring.unit: F.inverse(mat) if k else mat}, check=False)
    return GradedOp(X, X, 0, maps)


def bpl(c, pert, nilpotence_bound=64):
    """Perturb the contraction c by pert (a degree +1 operator on the big complex).

    Uses the explicit alternating series when h d' is nilpotent.  For
    scalar operators where the series does not terminate, id + h d' is
    inverted directly instead.  Returns the contraction of (X, d + d') onto
    (Y, d_Y + ...).
    """
    X, Y = c.big, c.small
    ring = X.ring
    f, g, h = c.f, c.g, c.h
    newd = {p: X.diff(p) + pert.maps[p] for p in range(X.lo, X.hi)}
    try:
        Xh = FreeComplex(ring, X.terms, newd, X.lo, X.hi, X.bounded, X.labels)
    except AssertionError as exc:
        raise ContractionError("perturbed differential does not square to zero") from exc
    hd = h @ pert
    dh = pert @ h
    # A = sum_i (-h d')^i and B = sum_i (-d' h)^i, i.e. (id + h d')^-1 and (id + d' h)^-1
    try:
        A = _alternating_sum(_powers(hd, nilpotence_bound, "h d'"), X)
        B = _alternating_sum(_powers(dh, nilpotence_bound + 1, "d' h"), X)
    except ContractionError:
        if not all(_scalar_only(m) for op in (hd, dh) for m in op.maps.values()):
            raise
        # scalar operators: sum the series in closed form when id + h d' is invertible
        A = _inverse_of_one_plus(hd, X)
        B = _inverse_of_one_plus(dh, X)
    dY = GradedOp.differential(Y) + f @ pert @ A @ g
    fh = f @ B
    gh = A @ g
    hh = A @ h
    try:
        Yh = FreeComplex(ring, Y.terms, {p: dY.maps[p] for p in range(Y.lo, Y.hi)}, Y.lo, Y.hi, Y.bounded, Y.labels)
    except AssertionError as exc:
        raise ContractionError("perturbed small differential does not square to zero") from exc
    return Contraction(
        Xh,
        Yh,
        GradedOp(Xh, Yh, 0, fh.maps),
        GradedOp(Yh, Xh, 0, gh.maps),
        GradedOp(Xh, Xh, -1, hh.maps),
    ).check()


def direct_sum_report(c, ch, degrees=(0,)):
    """Check dim X^p = dim Y^p + dim U^p with U = ker f, and H(U) = 0.

    ``c`` is the original contraction, ``ch`` the perturbed one; U is the
    kernel of the original f with the original differential.
    """
    F = c.big.field
    X = c.big
    ok = True
    for d in degrees:
        for p in X.positions():
            fp = c.f.maps[p].degree_matrix(d)
            dimX = X.term(p).dim(d)
            dimY = ch.small.term(p).dim(d)
            dimU = dimX - F.rank(fp) if dimX else 0
            if dimX != dimY + dimU:
                ok = False
        # H(U): U = ker f is a subcomplex; compute through (id - gf) whose image is U
        for p in X.positions():
            if p <= X.lo and not X.zero_below or p >= X.hi and not X.zero_above:
                continue
            proj = lambda q: (GradedOp.identity(X) - c.g @ c.f).maps[q].degree_matrix(d) if X.lo <= q <= X.hi else None
            Up = proj(p)
            if Up is None or not Up.size:
                continue
            basis = F.column_space(Up)
            if not basis.shape[1]:
                continue
            dp = X.diff(p).degree_matrix(d)
            ker_in_U = basis.shape[1] - F.rank(F.matmul(dp, basis)) if dp.size else basis.shape[1]
            prev = X.diff(p - 1).degree_matrix(d)
            Um = proj(p - 1)
            img = F.rank(F.matmul(prev, F.column_space(Um))) if Um is not None and Um.size and prev.size else 0
            if ker_in_U != img:
                ok = False
    return ok


# ---------------------------------------------------------------------------
# double complexes


@dataclass
class FilteredMinimalComplex:
    """Y with summand labels (p, q, k): H_I^{pq} summand k, filtered by p."""

    complex: FreeComplex
    contraction: Contraction
    labels: dict = field(default_factory=dict)

    def filtration_indices(self, m, n):
        return [j for j, lab in enumerate(self.labels.get(n, [])) if lab[0] <= m]

    def filtration_dims(self, m):
        return {n: len(self.filtration_indices(m, n)) for n in self.complex.positions()}

    def filtration_twists(self, m):
        out = {}
        for n in self.complex.positions():
            t = self.complex.term(n).twists
            out[n] = sorted(t[j] for j in self.filtration_indices(m, n))
        return out

    def is_filtered(self):
        """Every F_m is a subcomplex: d_Y never raises the p-label."""
        Y = self.complex
        for n in range(Y.lo, Y.hi):
            d = Y.diff(n)
            src, tgt = self.labels.get(n, []), self.labels.get(n + 1, [])
            for a in d.coeffs.values():
                for i, j in zip(*np.nonzero(a)):
                    if tgt[i][0] > src[j][0]:
                        return False
        return True

    def linear_part(self):
        return self.complex.linear_part()

    def graded_part(self):
        """gr_F(Y): keep only the components that preserve the p-label."""
        Y = self.complex
        diffs = {}
        for n in range(Y.lo, Y.hi):
            d = Y.diff(n)
            src, tgt = self.labels.get(n, []), self.labels.get(n + 1, [])
            out = {}
            for k, a in d.coeffs.items():
                b = a.copy()
                for i in range(b.shape[0]):
                    for j in range(b.shape[1]):
                        if tgt[i][0] != src[j][0]:
                            b[i, j] = 0
                out[k] = b
            diffs[n] = OpMatrix(d.source, d.target, out, check=False)
        return FreeComplex(Y.ring, Y.terms, diffs, Y.lo, Y.hi, Y.bounded, self.labels)

    def is_minimal(self):
        return self.complex.is_minimal()


def minimalize_double(X):
    """Contract tot(X) onto Y with Y^n = sum of H_I^{pq}, p + q = n.

    Rows must have scalar horizontal differentials.  The horizontal
    contraction comes from :func:`split_contraction` applied to tot(X_I); the
    vertical part delta'' = (-1)^p d'' is the perturbation.
    """
    ring = X.ring
    for d in X.dh.values():
        if not _scalar_only(d):
            raise ValueError("rows must have scalar differentials")
    if not X.terms:
        Z = FreeComplex(ring, {}, {}, 0, 0, True)
        idZ = GradedOp.identity(Z)
        c = Contraction(Z, Z, idZ, idZ, GradedOp(Z, Z, -1, {}))
        return FilteredMinimalComplex(Z, c, {})
    tot = total_complex(X)
    XI = DoubleComplex(ring, X.terms, X.dh, {}, check=False)
    totI = total_complex(XI, tot.lo, tot.hi)
    c0 = split_contraction(totI)
    # labels of the small complex: (p, q, k) from the summands kept in each cell
    labels = _homology_labels(c0, totI)
    small = c0.small
    small = FreeComplex(ring, small.terms, small.diffs, small.lo, small.hi, small.bounded, labels, check=False)
    c0 = Contraction(totI, small, GradedOp(totI, small, 0, c0.f.maps), GradedOp(small, totI, 0, c0.g.maps), c0.h)
    pert = GradedOp(totI, totI, 1, {m: tot.diff(m) - totI.diff(m) for m in range(tot.lo, tot.hi)})
    width = len({p for p, _ in X.terms}) + 1
    c = bpl(c0, pert, nilpotence_bound=width + 1)
    Y = c.small
    Y.labels = labels
    return FilteredMinimalComplex(Y, c, labels)


def _homology_labels(c0, totI):
    """Label each homology summand by the (p, q) cell it lives in."""
    labels = {}
    for m in totI.positions():
        U = c0.g.maps[m].scalar_part() if c0.small.term(m).rank else None
        cells = totI.labels.get(m, [])
        labs = []
        if U is not None:
            for k in range(U.shape[1]):
                rows = np.nonzero(U[:, k])[0]
                cellset = {(cells[r][0], cells[r][1]) for r in rows}
                if len(cellset) != 1:
                    raise AssertionError("homology representative spans several cells")
                p, q = cellset.pop()
                labs.append((p, q, k))
        labels[m] = labs
    return labels


def truncate_module_complex(Nc, m):
    """tau^{<= m}: terms below m, the kernel of d^m at m, zero above."""
    from .rings import LambdaModule

    F = Nc.field
    terms = {p: t for p, t in Nc.terms.items() if p < m}
    maps = {p: b for p, b in Nc.maps.items() if p < m - 1}
    if m in Nc.terms:
        T = Nc.terms[m]
        bases = {}
        for d in T.degrees():
            blk = Nc.block(m, d)
            bases[d] = F.kernel(blk) if blk.shape[0] else F.eye(T.dim(d))
        dims = {d: b.shape[1] for d, b in bases.items()}
        action = {}
        for d, B in bases.items():
            for i in range(Nc.ring.n + 1):
                if d + 1 in bases and B.shape[1] and bases[d + 1].shape[1]:
                    img = F.matmul(T.act(i, d), B)
                    action[(i, d)] = F.solve(bases[d + 1], img)
        K = type(T)(Nc.ring, dims, action, check=False) if isinstance(T, LambdaModule) else None
        if K is None:
            raise ValueError("truncation implemented for exterior-module complexes")
        terms[m] = K
        if m - 1 in Nc.maps:
            blocks = {}
            for d, B in bases.items():
                prev = Nc.block(m - 1, d)
                if prev.size and B.shape[1]:
                    blocks[d] = F.solve(B, prev)
            maps[m - 1] = blocks
    lo = min(terms) if terms else m
    return ModuleComplex(Nc.ring, terms, maps, lo, max(lo, m), check=True)


def homology_modules(Nc):
    """H^p(N) of a complex of exterior modules as modules (zero differential complex)."""
    from .rings import LambdaModule

    F = Nc.field
    terms = {}
    for p, T in Nc.terms.items():
        dims, bases = {}, {}
        for d in T.degrees():
            out = Nc.block(p, d)
            Z = F.kernel(out) if out.shape[0] else F.eye(T.dim(d))
            Bm = F.column_space(Nc.block(p - 1, d)) if Nc.block(p - 1, d).size else F.zeros(T.dim(d), 0)
            cols = F.extend_columns(Bm, Z)
            Hb = Z[:, cols]
            dims[d] = Hb.shape[1]
            full = np.concatenate([Bm, Hb], axis=1)
            bases[d] = (Bm.shape[1], Hb, full)
        action = {}
        for d, (nb, Hb, full) in bases.items():
            if not Hb.shape[1] or d + 1 not in bases or not bases[d + 1][1].shape[1]:
                continue
            nb1, Hb1, full1 = bases[d + 1]
            for i in range(Nc.ring.n + 1):
                img = F.matmul(T.act(i, d), Hb)
                coords = F.solve(full1, img)
                action[(i, d)] = coords[nb1:, :]
        terms[p] = LambdaModule(Nc.ring, dims, action, check=False)
    return ModuleComplex(Nc.ring, terms, {}, Nc.lo, Nc.hi, check=False)


def minimalize_bgg(N, functor="F"):
    """Minimal model of F(N) (or G(M)) with its strand filtration.

    Returns the :class:`FilteredMinimalComplex`; its linear part has the
    terms of F(H(N)) (resp. G(H(M))).
    """
    from .bgg import F_double, G_double

    X = F_double(N) if functor == "F" else G_double(N)
    return minimalize_double(X)


# ---------------------------------------------------------------------------
# random inputs for property tests


def vector_space_complex(field, dims, diffs, lo=0):
    """A bounded complex of vector spaces from dims and matrices."""
    ring = ScalarRing(field)
    terms = {lo + i: FreeModule(ring, [0] * k) for i, k in enumerate(dims)}
    ds = {lo + i: OpMatrix(terms[lo + i], terms[lo + i + 1], {(): m}) for i, m in enumerate(diffs)}
    return FreeComplex(ring, terms, ds, lo, lo + len(dims) - 1, True)


def random_invertible(field, rng, n):
    while True:
        m = field.random_matrix(rng, n, n)
        if field.rank(m) == n:
            return m


def random_complex(field, rng, length=4, max_dim=3):
    """Random bounded complex of vector spaces: conjugated sum of [k -> k] pieces and k's."""
    F = field
    pieces_h = [int(rng.integers(0, max_dim)) for _ in range(length)]
    pieces_e = [int(rng.integers(0, 2)) for _ in range(length - 1)]
    dims = []
    for p in range(length):
        dims.append(pieces_h[p] + (pieces_e[p] if p < length - 1 else 0) + (pieces_e[p - 1] if p > 0 else 0))
    mats = []
    g = [random_invertible(F, rng, k) if k else F.zeros(0, 0) for k in dims]
    for p in range(length - 1):
        d = F.zeros(dims[p + 1], dims[p])
        # source: [H | E_out | E_in], target similarly
        src_out = pieces_h[p]
        tgt_in = pieces_h[p + 1] + (pieces_e[p + 1] if p + 1 < length - 1 else 0)
        for k in range(pieces_e[p]):
            d[tgt_in + k, src_out + k] = 1
        if dims[p] and dims[p + 1]:
            d = F.matmul(g[p + 1], F.matmul(d, F.inverse(g[p])))
        mats.append(d)
    return vector_space_complex(F, dims, mats)


def random_raw_contraction(c, rng):
    """Spoil the side conditions while keeping (i) and (ii).

    With t = h s for a random degree-0 s: Y -> X, the triple
    (f, g + dt + td, h - tf) still satisfies (i) and (ii).
    """
    X, Y = c.big, c.small
    F = X.field
    s = {}
    for p in Y.positions():
        r, k = X.term(p).rank, Y.term(p).rank
        s[p] = OpMatrix(Y.term(p), X.term(p), {X.ring.unit: F.random_matrix(rng, r, k)}, check=False)
    S = GradedOp(Y, X, 0, s)
    t = c.h @ S
    dX, dY = GradedOp.differential(X), GradedOp.differential(Y)
    g2 = c.g + dX @ t + t @ dY
    h2 = c.h - t @ c.f
    return c.f, GradedOp(Y, X, 0, g2.maps), GradedOp(X, X, -1, h2.maps)


def random_double_complex(field, rng, rows=2, cols=3, max_dim=2):
    """Tensor product of two random complexes, conjugated cellwise."""
    F = field
    A = random_complex(F, rng, cols, max_dim)
    B = random_complex(F, rng, rows, max_dim)
    ring = A.ring
    terms, dh, dv = {}, {}, {}
    g = {}
    for p in A.positions():
        for q in B.positions():
            k = A.term(p).rank * B.term(q).rank
            if k:
                terms[(p, q)] = FreeModule(ring, [0] * k)
                g[(p, q)] = random_invertible(F, rng, k)
    for (p, q) in terms:
        a_id = F.eye(A.term(p).rank)
        b_id = F.eye(B.term(q).rank)
        if (p + 1, q) in terms:
            m = F.asarray(np.kron(A.diff(p).coeff(()), b_id))
            m = F.matmul(g[(p + 1, q)], F.matmul(m, F.inverse(g[(p, q)])))
            dh[(p, q)] = OpMatrix(terms[(p, q)], terms[(p + 1, q)], {(): m}, check=False)
        if (p, q + 1) in terms:
            m = F.asarray(np.kron(a_id, B.diff(q).coeff(())))
            m = F.matmul(g[(p, q + 1)], F.matmul(m, F.inverse(g[(p, q)])))
            dv[(p, q)] = OpMatrix(terms[(p, q)], terms[(p, q + 1)], {(): m}, check=False)
    return DoubleComplex(ring, terms, dh, dv)


def positionwise_homology(C, degrees=(0,)):
    out = {}
    for p in C.positions():
        out[p] = tuple(C.homology_dim(p, d) for d in degrees)
    return out


__all__ = [
    "Contraction",
    "ContractionError",
    "FilteredMinimalComplex",
    "GradedOp",
    "bpl",
    "cancel",
    "direct_sum_report",
    "homology_modules",
    "minimalize_bgg",
    "minimalize_double",
    "normalize",
    "positionwise_homology",
    "random_complex",
    "random_double_complex",
    "random_raw_contraction",
    "split_contraction",
    "truncate_module_complex",
    "unit_split",
    "vector_space_complex",
]
