"""Sheaf cohomology on projective space through graded modules.

A coherent sheaf is always given as the sheafification of a finitely
presented graded S-module M.  Cohomology comes from Ext^j_S(M, w_S) with
w_S = S(-n-1); row 0 of a table is dim M_d corrected by the two outer Ext
modules.
"""

from dataclasses import dataclass, field
from math import comb

from .homalg import (
    FreeComplex,
    FreeModule,
    ModulePresentation,
    OpMatrix,
    dualize_complex,
    ext_complex,
    hilbert_data,
    homology_module,
    hstack,
    kernel_generators,
    map_from_columns,
    minimal_free_resolution,
    minimal_presentation,
    resolve_as_given,
)


@dataclass
class SheafByModule:
    """The sheaf M~ attached to a graded S-module M."""

    M: ModulePresentation
    saturated: bool = False

    @property
    def ring(self):
        return self.M.ring

    @property
    def n(self):
        return self.M.ring.n

    def twist(self, a):
        return SheafByModule(self.M.twist(a), self.saturated)

    def direct_sum(self, other):
        return SheafByModule(self.M.direct_sum(other.M), self.saturated and other.saturated)


def as_sheaf(F):
    return F if isinstance(F, SheafByModule) else SheafByModule(F)


@dataclass
class CohomologyTable:
    """Entries h^i(F(d)) for i = 0..n and d = lo..hi; None marks an unknown entry."""

    n: int
    lo: int
    hi: int
    rows: dict = field(default_factory=dict)

    def __post_init__(self):
        for i in range(self.n + 1):
            self.rows.setdefault(i, [0] * (self.hi - self.lo + 1))

    def get(self, i, d):
        if not 0 <= i <= self.n:
            return 0
        if not self.lo <= d <= self.hi:
            return None
        return self.rows[i][d - self.lo]

    def set(self, i, d, v):
        self.rows[i][d - self.lo] = v

    def columns(self):
        return list(range(self.lo, self.hi + 1))

    def is_zero(self):
        return all(v == 0 for r in self.rows.values() for v in r)

    def agrees_with(self, other):
        """Equal wherever both tables know the entry (and at least one entry is compared)."""
        compared = 0
        for i in range(self.n + 1):
            for d in self.columns():
                a, b = self.get(i, d), other.get(i, d)
                if a is None or b is None:
                    continue
                compared += 1
                if a != b:
                    return False
        return compared > 0

    def to_text(self):
        def cell(v):
            return "?" if v is None else str(v)

        cols = self.columns()
        body = [[cell(self.rows[i][k]) for k in range(len(cols))] for i in range(self.n, -1, -1)]
        width = max([len(str(d)) for d in cols] + [len(c) for r in body for c in r])
        label = max(len(f"h^{self.n}"), 1)
        lines = [" " * (label + 1) + " ".join(str(d).rjust(width) for d in cols)]
        for i, r in zip(range(self.n, -1, -1), body):
            lines.append(f"h^{i}".ljust(label) + " " + " ".join(c.rjust(width) for c in r))
        return "\n".join(lines) + "\n"

    def to_json(self):
        return {
            "n": self.n,
            "lo": self.lo,
            "hi": self.hi,
            "degrees": self.columns(),
            "rows": {str(i): list(self.rows[i]) for i in range(self.n + 1)},
        }


# ---------------------------------------------------------------------------
# cohomology


def _ext_data(M):
    L = minimal_free_resolution(M)
    return L, ext_complex(M, L)


def cohomology_table(F, lo, hi, resolution=None):
    """h^i(F(d)) for d in [lo, hi] via graded duality."""
    F = as_sheaf(F)
    M, n = F.M, F.n
    L = resolution if resolution is not None else minimal_free_resolution(M)
    D = ext_complex(M, L)
    T = CohomologyTable(n, lo, hi)
    for d in range(lo, hi + 1):
        for i in range(1, n + 1):
            T.set(i, d, D.homology_dim(n - i, -d))
        T.set(0, d, M.dim(d) - D.homology_dim(n + 1, -d) + D.homology_dim(n, -d))
    return T


def ext_presentations(F):
    """{j: Ext^j_S(M, w_S) as a minimal presentation} for j = 0..n+1."""
    F = as_sheaf(F)
    _, D = _ext_data(F.M)
    return {j: homology_module(D, j) for j in range(F.n + 2)}


def _nonzero(P):
    return P.gens.rank > 0


def _laurent_dual_series(P):
    """{d: dim (P*)_d} = {d: dim P_{-d}} for a module of finite length."""
    if not _nonzero(P):
        return {}
    H = hilbert_data(P)
    if H.krull_dim > 0:
        return None
    out = {}
    for k, c in enumerate(H.reduced):
        if c:
            out[-(k + H.shift)] = c
    return out


@dataclass
class SplitVerdict:
    splits: bool
    twists: list = field(default_factory=list)
    witness: tuple = None

    def describe(self):
        if self.splits:
            if not self.twists:
                return "splits: 0"
            return "splits: " + " ⊕ ".join(f"O({a})" for a in self.twists)
        i, d = self.witness
        return f"does not split: h^{i}(F({d})) != 0"

    def to_json(self):
        return {"splits": self.splits, "twists": self.twists, "witness": list(self.witness) if self.witness else None}


def horrocks_split_check(F):
    """Decide whether F is a sum of line bundles, via vanishing of the middle Ext modules.

    On success the twists are read off the free module H^0_*(F): its Hilbert
    series is that of M corrected by the two finite-length duality terms.
    """
    F = as_sheaf(F)
    n = F.n
    if n < 2:
        raise ValueError("the splitting criterion needs n >= 2")
    ext = ext_presentations(F)
    for i in range(1, n):
        P = ext[n - i]
        if _nonzero(P):
            g = min(P.gens.generator_degrees())
            return SplitVerdict(False, [], (i, -g))
    ext_top, ext_n = ext[n + 1], ext[n]
    corr_top = _laurent_dual_series(ext_top)
    corr_n = _laurent_dual_series(ext_n)
    if corr_n is None or corr_top is None:
        raise ValueError("H^0(F(-t)) does not vanish for t >> 0; Ext^n(M, w_S) has positive dimension")
    H = hilbert_data(F.M)
    nv = n + 1
    # numerator of H^0_* over (1-t)^(n+1): N_M(t) t^shift + (1-t)^(n+1) * (corr_n - corr_top)
    num = {}
    if H.krull_dim >= 0:
        for k, c in enumerate(H.numerator):
            if c:
                num[k + H.shift] = num.get(k + H.shift, 0) + c
    binom = [(-1) ** k * comb(nv, k) for k in range(nv + 1)]
    for sgn, corr in ((1, corr_n), (-1, corr_top)):
        for d, c in corr.items():
            for k, b in enumerate(binom):
                num[d + k] = num.get(d + k, 0) + sgn * c * b
    num = {d: c for d, c in num.items() if c}
    if any(c < 0 for c in num.values()):
        raise AssertionError("saturation is not free although the middle cohomology vanishes")
    twists = sorted(-d for d, c in num.items() for _ in range(c))
    return SplitVerdict(True, twists, None)


# ---------------------------------------------------------------------------
# Horrocks complexes


@dataclass
class HorrocksReport:
    complex: FreeComplex
    verdicts: dict
    dims_dual: dict
    dims: dict

    @property
    def is_horrocks(self):
        return all(self.verdicts.values())

    def to_json(self):
        return {
            "horrocks": self.is_horrocks,
            "verdicts": {str(k): v for k, v in self.verdicts.items()},
            "krull_dims_dual": {str(k): v for k, v in self.dims_dual.items()},
            "krull_dims": {str(k): v for k, v in self.dims.items()},
        }


def _homology_krull_dims(C):
    from .homalg import krull_dimension

    out = {}
    for p in C.positions():
        H = homology_module(C, p)
        out[p] = krull_dimension(H) if _nonzero(H) else -1
    return out


def is_horrocks_complex(K):
    """Evaluate the three equivalent conditions and insist that they agree."""
    if not K.is_bounded:
        raise ValueError("Horrocks conditions need a bounded complex")
    n = K.ring.n
    Kd = dualize_complex(K)
    dims = _homology_krull_dims(K)
    dims_dual = _homology_krull_dims(Kd)
    low = all(d < 0 for p, d in dims.items() if p <= -2)
    low_dual = all(d < 0 for p, d in dims_dual.items() if p <= 1)
    c1 = low and low_dual
    c2 = low_dual and all(d < 0 or d <= n + 2 - p for p, d in dims_dual.items() if p > 1)
    c3 = low and all(d < 0 or d <= n - 1 - p for p, d in dims.items() if p >= -1)
    verdicts = {1: c1, 2: c2, 3: c3}
    if len(set(verdicts.values())) != 1:
        raise AssertionError(f"Horrocks conditions disagree: {verdicts}")
    return HorrocksReport(K, verdicts, dims_dual, dims)


def dual_module_map(M, L=None):
    """zeta: L'^0 -> (L^0)^dual with image M^dual = Hom(M, S), plus the pieces."""
    L = L if L is not None else minimal_free_resolution(M)
    D = dualize_complex(L)
    d0 = D.diff(0)
    src = D.term(0)
    degs = src.generator_degrees()
    if not degs:
        return L, D, OpMatrix.zero(FreeModule(M.ring, ()), src)
    top = max(degs + D.term(1).generator_degrees()) if D.term(1).rank else max(degs)
    cols = kernel_generators(d0, range(min(degs), top + M.ring.n + 3))
    if not cols:
        return L, D, OpMatrix.zero(FreeModule(M.ring, ()), src)
    return L, D, map_from_columns(src, cols)


def horrocks_resolution(M):
    """Glue a resolution of M^dual to the shifted dual of a resolution of M, then dualize."""
    ring = M.ring
    L, D, zeta = dual_module_map(M)
    if zeta.source.rank:
        syz = kernel_generators(zeta, range(min(zeta.source.generator_degrees()), max(zeta.source.generator_degrees()) + ring.n + 3))
        rels = map_from_columns(zeta.source, syz) if syz else OpMatrix.zero(FreeModule(ring, ()), zeta.source)
        Lp = resolve_as_given(ModulePresentation(rels))
    else:
        Lp = FreeComplex(ring, {0: zeta.source}, {}, 0, 0, True)
    terms, diffs = {}, {}
    for p in Lp.positions():
        terms[p] = Lp.term(p)
        if p < 0:
            diffs[p] = Lp.diff(p)
    for p in D.positions():
        terms[p + 1] = D.term(p)
        if p < D.hi:
            diffs[p + 1] = -D.diff(p)
    diffs[0] = zeta.with_modules(terms[0], terms[1])
    P = FreeComplex(ring, terms, diffs, min(terms), max(terms), True)
    K = dualize_complex(P)
    if K.term(-1).twists != L.term(0).twists:
        raise AssertionError("C^{-1} of the Horrocks resolution differs from M")
    d = K.diff(-2)
    if L.lo < 0 and not (d.equals(L.diff(-1)) or d.equals(-L.diff(-1))):
        raise AssertionError("C^{-1} of the Horrocks resolution differs from M")
    return K


# ---------------------------------------------------------------------------
# stable category


def free_summand_rank(M, g):
    """(rank, scalar parts) of the free summands of M generated in degree g."""
    F = M.field
    gens = M.gens
    idx = [j for j, e in enumerate(gens.generator_degrees()) if e == g]
    if not idx:
        return 0, F.zeros(0, 0)
    dual = M.rels.transpose()  # F0^dual -> F1^dual
    src = dual.source
    if M.rels.source.rank:
        K = F.kernel(dual.degree_matrix(-g))
    else:
        K = F.eye(src.dim(-g))
    offs = src.offsets(-g)
    # summand j with g_j = g has a one-dimensional piece in this degree
    rows = [offs[j] for j in idx]
    C = K[rows, :] if K.shape[1] else F.zeros(len(rows), 0)
    C = F.column_space(C) if C.shape[1] else C
    return C.shape[1], C.T.copy() if C.shape[1] else F.zeros(0, len(idx))


def stabilize(M):
    """Split off every free direct summand; the result has none left."""
    M = minimal_presentation(M)
    F = M.field
    changed = True
    while changed:
        changed = False
        for g in sorted(set(M.gens.generator_degrees())):
            r, C = free_summand_rank(M, g)
            if not r:
                continue
            idx = [j for j, e in enumerate(M.gens.generator_degrees()) if e == g]
            # right inverse W of C on the degree-g generators
            W = F.solve(C, F.eye(r))
            cols = F.zeros(M.gens.rank, r)
            cols[idx, :] = W
            extra = OpMatrix(FreeModule(M.ring, [-g] * r), M.gens, {M.ring.unit: cols})
            rels = hstack([M.rels, extra], target=M.gens) if M.rels.source.rank else extra
            M = minimal_presentation(ModulePresentation(rels))
            changed = True
            break
    return M


__all__ = [
    "CohomologyTable",
    "HorrocksReport",
    "SheafByModule",
    "SplitVerdict",
    "as_sheaf",
    "cohomology_table",
    "dual_module_map",
    "ext_presentations",
    "free_summand_rank",
    "horrocks_resolution",
    "horrocks_split_check",
    "is_horrocks_complex",
    "stabilize",
]
