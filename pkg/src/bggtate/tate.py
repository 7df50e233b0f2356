"""Tate resolution windows, strands, Horrocks-Trautmann complexes and
Eilenberg-MacLane fixtures.

A summand Wedge(V*)(a) of the term at position p lies in strand i = p - a;
the Tate resolution of a sheaf F has c_{p,i} = h^i(F(p - i)) such summands.
"""

from dataclasses import dataclass, field

from .bgg import F as F_functor
from .bgg import G, exterior_ring
from .homalg import (
    FreeComplex,
    ModulePresentation,
    hilbert_data,
    krull_dimension,
    minimal_free_resolution,
    resolve_kernel_leftwards,
    zero_free,
)
from .rings import LambdaModule
from .sheaf import CohomologyTable, as_sheaf, cohomology_table, ext_presentations


class TateError(ValueError):
    pass


@dataclass
class TateWindow:
    """Positions lo..hi of a Tate resolution with strand counts.

    ``m`` is the tail position: terms from m on are G(M_{>=m}); everything to
    its left comes from a minimal resolution of the kernel at m.
    """

    complex: FreeComplex
    lo: int
    hi: int
    m: int
    n: int
    counts: dict = field(default_factory=dict)
    labels: dict = field(default_factory=dict)

    def strand_of(self, p, j):
        return self.labels[p][j]

    def homology_at_interior(self):
        """{p: total homology dimension} over the interior positions."""
        C = self.complex
        out = {}
        for p in range(self.lo + 1, self.hi):
            tot = 0
            for d in _lambda_degree_span(C, p):
                tot += C.homology_dim(p, d)
            out[p] = tot
        return out

    def is_exact(self):
        return all(v == 0 for v in self.homology_at_interior().values())

    def is_filtered(self):
        """The differential never raises the strand index."""
        C = self.complex
        for p in range(self.lo, self.hi):
            for a in C.diff(p).coeffs.values():
                for r in range(a.shape[0]):
                    for c in range(a.shape[1]):
                        if a[r, c] and self.labels[p + 1][r] > self.labels[p][c]:
                            return False
        return True

    def betti_json(self):
        return self.complex.betti_json()

    def to_json(self):
        return {
            "lo": self.lo,
            "hi": self.hi,
            "tail": self.m,
            "n": self.n,
            "strands": {str(p): {str(i): c for i, c in sorted(self.counts[p].items())} for p in sorted(self.counts)},
            "betti": self.complex.betti_json(),
        }


def _lambda_degree_span(C, p):
    degs = set()
    for q in (p - 1, p, p + 1):
        if C.lo <= q <= C.hi:
            r = C.term(q).degree_range()
            if r is not None:
                degs.update(range(r[0], r[1] + 1))
    return sorted(degs)


# ---------------------------------------------------------------------------
# tail position


def _min_gen(P):
    degs = P.gens.generator_degrees()
    return min(degs) if degs else None


def tail_position(F, ext=None):
    """Smallest m with M_{>=m} = H^0_*(F)_{>=m} having a linear resolution.

    Read off the minimal generators of the Ext modules: h^i(F(d)) vanishes
    for d > -g where g is the lowest generator degree of Ext^{n-i}(M, w_S).
    """
    F = as_sheaf(F)
    n = F.n
    ext = ext if ext is not None else ext_presentations(F)
    bound = []
    g = _min_gen(ext[n + 1])
    if g is not None:
        bound.append(-g + 1)
    g = _min_gen(ext[n])
    if g is not None:
        bound.append(-g + 2)
    for i in range(1, n + 1):
        g = _min_gen(ext[n - i])
        if g is not None:
            bound.append(i - g + 1)
    gens = F.M.gens.generator_degrees()
    if gens:
        bound.append(max(gens))
    return max(bound) if bound else 0


def check_hypothesis(F, ext):
    """H^0(F(-t)) = 0 for t >> 0: both outer Ext modules must have finite length."""
    n = F.n
    for j in (n + 1, n):
        P = ext[j]
        if P.gens.rank and krull_dimension(P) > 0:
            raise TateError(f"H^0_*(F) is not finitely generated: Ext^{j}(M, w_S) has positive dimension")


def tate_window(F, lo, hi):
    F = as_sheaf(F)
    if lo >= hi:
        raise ValueError("tate_window needs lo < hi")
    n = F.n
    ext = ext_presentations(F)
    check_hypothesis(F, ext)
    m = max(tail_position(F, ext), hi + 1)
    W = F.M.window(m, m + 2)
    tail = G(W, exact_below=False, exact_above=False, lo=m, hi=m + 1)
    L = exterior_ring(F.ring)
    terms = {m: tail.term(m), m + 1: tail.term(m + 1)}
    diffs = {m: tail.diff(m)}
    maps = resolve_kernel_leftwards(tail.diff(m), m - lo)
    pos = m
    for psi in maps:
        pos -= 1
        terms[pos] = psi.source
        diffs[pos] = psi
    while pos > lo:
        pos -= 1
        terms.setdefault(pos, zero_free(L))
    C = FreeComplex(L, terms, diffs, lo, m + 1, (False, False), check=True)
    if not C.is_minimal():
        raise AssertionError("Tate window is not minimal")
    C = C.restrict(lo, hi)
    counts, labels = {}, {}
    for p in C.positions():
        row, lab = {}, []
        for a in C.term(p).twists:
            i = p - a
            if not 0 <= i <= n:
                raise AssertionError(f"summand of strand {i} at position {p}")
            row[i] = row.get(i, 0) + 1
            lab.append(i)
        counts[p] = row
        labels[p] = lab
    C.labels = {p: [(i,) for i in labels[p]] for p in labels}
    return TateWindow(C, lo, hi, m, n, counts, labels)


def strand_table(T, lo=None, hi=None):
    """h^i(F(d)) = c_{d+i, i}; entries needing positions outside the window are None."""
    lo = T.lo - T.n if lo is None else lo
    hi = T.hi if hi is None else hi
    tab = CohomologyTable(T.n, lo, hi)
    for d in range(lo, hi + 1):
        for i in range(T.n + 1):
            p = d + i
            tab.set(i, d, T.counts[p].get(i, 0) if T.lo <= p <= T.hi else None)
    return tab


# ---------------------------------------------------------------------------
# Horrocks-Trautmann complexes


@dataclass
class HTComplex:
    complex: FreeComplex
    n: int
    partial: bool = False
    counts: dict = field(default_factory=dict)
    strand_duals: dict = field(default_factory=dict)

    def is_zero(self):
        return self.complex.is_zero()

    def invariants(self):
        """Isomorphism invariants used to compare HT complexes as stored data.

        Betti table, strand counts and the rank of every differential in
        every internal degree (all unchanged by a change of basis).
        """
        C = self.complex
        ranks = {}
        for p in range(C.lo, C.hi):
            r = {}
            for d in _lambda_degree_span(C, p):
                k = C.field.rank(C.diff(p).degree_matrix(d)) if C.term(p).dim(d) and C.term(p + 1).dim(d) else 0
                if k:
                    r[str(d)] = k
            if r:
                ranks[str(p)] = r
        return {
            "betti": C.trimmed().betti_json() if not C.is_zero() else {"positions": [], "rows": {}},
            "strands": {str(p): {str(i): c for i, c in sorted(v.items())} for p, v in sorted(self.counts.items()) if v},
            "ranks": ranks,
            "partial": self.partial,
        }

    def to_json(self):
        out = self.invariants()
        out["n"] = self.n
        return out


def ht_complex(T, F=None):
    """Keep strands 1..n-1 of a Tate window with the induced differential."""
    n = T.n
    C = T.complex
    keep = {p: [j for j, i in enumerate(T.labels[p]) if 1 <= i <= n - 1] for p in C.positions()}
    terms = {p: C.term(p).sub(keep[p]) for p in C.positions()}
    diffs = {}
    for p in range(C.lo, C.hi):
        diffs[p] = C.diff(p).restrict(keep[p + 1], keep[p]).with_modules(terms[p], terms[p + 1])
    H = FreeComplex(C.ring, terms, diffs, C.lo, C.hi, (False, False), check=True)
    if not H.is_minimal():
        raise AssertionError("HT complex is not minimal")
    partial = any(T.counts[q].get(i, 0) for q in (T.lo, T.hi) for i in range(1, n))
    counts = {p: {i: c for i, c in T.counts[p].items() if 1 <= i <= n - 1} for p in C.positions()}
    duals = {}
    if F is not None:
        ext = ext_presentations(F)
        duals = {i: ext[n - i] for i in range(1, n)}
    return HTComplex(H, n, partial, counts, duals)


def ht_conditions(Hc, growth_window=None):
    """Condition (1) structurally and condition (2) through Krull dimensions of strand duals."""
    n = Hc.n
    C = Hc.complex
    cond1 = C.is_minimal() and all(1 <= i <= n - 1 for v in Hc.counts.values() for i in v)
    dims = {}
    cond2 = True
    for i, P in sorted(Hc.strand_duals.items()):
        d = krull_dimension(P) if P.gens.rank else -1
        dims[i] = d
        if d > i + 1:
            cond2 = False
    growth = {}
    if growth_window is not None:
        lo, hi = growth_window
        for i in range(1, n):
            growth[i] = {p: Hc.counts.get(p, {}).get(i, 0) for p in range(lo, hi + 1)}
    return {"condition_1": cond1, "condition_2": cond2, "strand_dual_dims": dims, "growth": growth}


def strand_window(E, i, lo, hi, n=None):
    """T^{-i} G(H) on positions lo..hi for H the graded dual of E (twisted by w_S).

    H_e = (E_{-e-n-1})^*, so the window needs E in degrees -hi+i-n-1 .. -lo+i-n-1.
    """
    n = E.ring.n if n is None else n
    e_lo, e_hi = lo - i - 1, hi - i + 1
    Ew = E.twist(-(n + 1)).window(-e_hi, -e_lo)
    Hw = Ew.dual()
    C = G(Hw, exact_below=False, exact_above=False, lo=e_lo, hi=e_hi)
    C = C.translate(-i)
    return C.restrict(max(lo, C.lo), min(hi, C.hi))


# ---------------------------------------------------------------------------
# Eilenberg-MacLane sheaves


@dataclass
class EMSpec:
    E: ModulePresentation
    i: int


@dataclass
class EMPrediction:
    """The predicted HT complex T^{-i} G(H) with H = (E (x) w_S)^*."""

    E: ModulePresentation
    i: int
    n: int

    def h_dim(self, e):
        """dim H_e = dim E_{-e-n-1}."""
        return self.E.dim(-e - self.n - 1)

    def counts(self, lo, hi):
        """Predicted strand-i counts c_{p,i} = dim H_{p-i} on positions lo..hi."""
        return {p: self.h_dim(p - self.i) for p in range(lo, hi + 1)}

    def to_json(self, lo, hi):
        return {"i": self.i, "n": self.n, "counts": {str(p): c for p, c in self.counts(lo, hi).items()}}


def em_sheaf(spec):
    """M = coker of the dual of d^{-n+i}: Q^{-n+i} -> Q^{-n+i+1} for Q a resolution of E."""
    E, i = spec.E, spec.i
    n = E.ring.n
    if not 0 < i < n:
        raise ValueError("need 0 < i < n")
    dimE = hilbert_data(E).krull_dim
    if dimE > i + 1:
        raise ValueError(f"Krull dimension {dimE} of E exceeds i + 1 = {i + 1}")
    Q = minimal_free_resolution(E)
    d = Q.diff(-n + i)
    M = ModulePresentation(d.transpose())
    return M, EMPrediction(E, i, n)


# ---------------------------------------------------------------------------
# kernel modules


@dataclass
class KernelReport:
    Z: LambdaModule
    m: int
    socle_annihilated: bool
    rows: dict
    expected: dict

    @property
    def matches(self):
        return self.rows == self.expected

    def to_json(self):
        return {
            "m": self.m,
            "socle_annihilated": self.socle_annihilated,
            "matches": self.matches,
            "dims": {str(k): v for k, v in self.Z.dims.items()},
            "rows": {str(i): {str(j): v for j, v in r.items()} for i, r in self.rows.items()},
            "expected": {str(i): {str(j): v for j, v in r.items()} for i, r in self.expected.items()},
        }


def kernel_module(T, m):
    """Z^m = ker(I^m -> I^{m+1}) as a graded exterior module."""
    C = T.complex
    Fd = C.field
    src = C.term(m)
    rng = src.degree_range()
    bases = {}
    if rng is not None:
        for d in range(rng[0], rng[1] + 1):
            if not src.dim(d):
                continue
            K = Fd.kernel(C.diff(m).degree_matrix(d)) if C.term(m + 1).dim(d) else Fd.eye(src.dim(d))
            if K.shape[1]:
                bases[d] = K
    L = C.ring
    action = {}
    for d, B in bases.items():
        if d + 1 not in bases:
            continue
        mats = src.action_matrices(d + 1)
        for j in range(L.n + 1):
            img = Fd.matmul(mats[j], B)
            action[(j, d)] = Fd.solve(bases[d + 1], img)
    return LambdaModule(L, {d: B.shape[1] for d, B in bases.items()}, action)


def kernel_module_check(T, m, F, spread=2):
    """Compare H^{i-m}(F(Z^m))_j with h^i(F(j)) for j >= m - i (zero below)."""
    if not T.lo < m < T.hi:
        raise ValueError("m must be interior to the window")
    n = T.n
    Z = kernel_module(T, m)
    soc = Z.socle_annihilated()
    if not soc:
        raise AssertionError("kernel module is not annihilated by the socle")
    FZ = F_functor(Z)
    j_lo, j_hi = m - n - spread, m + spread
    tab = cohomology_table(F, j_lo, j_hi)
    rows, expected = {}, {}
    for i in range(n + 1):
        rows[i], expected[i] = {}, {}
        for j in range(j_lo, j_hi + 1):
            p = i - m
            got = FZ.homology_dim(p, j) if FZ.lo <= p <= FZ.hi else 0
            rows[i][j] = got
            expected[i][j] = tab.get(i, j) if j >= m - i else 0
    return KernelReport(Z, m, soc, rows, expected)


__all__ = [
    "EMPrediction",
    "EMSpec",
    "HTComplex",
    "KernelReport",
    "TateError",
    "TateWindow",
    "check_hypothesis",
    "em_sheaf",
    "ht_complex",
    "ht_conditions",
    "kernel_module",
    "kernel_module_check",
    "strand_table",
    "strand_window",
    "tail_position",
    "tate_window",
]
