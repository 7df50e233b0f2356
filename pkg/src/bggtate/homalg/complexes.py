"""Complexes and double complexes of free modules.

A :class:`FreeComplex` stores terms and differentials on a window of
positions [lo, hi].  Outside the window a bounded complex is zero; an
unbounded one is unknown there, and asking for it raises.
"""

import numpy as np

from ..rings import EXTERIOR, SYMMETRIC
from .free import FreeModule, OpMatrix, block_matrix, ring_kind, zero_free


class WindowError(ValueError):
    """Raised when data outside the stored window of a complex is requested."""


class FreeComplex:
    """Terms ``terms[p]`` and differentials ``diffs[p]: terms[p] -> terms[p+1]``.

    ``labels`` optionally records, for every summand of every term, where it
    came from (used for total complexes and strand bookkeeping).
    """

    def __init__(self, ring, terms, diffs=None, lo=None, hi=None, bounded=True, labels=None, check=True):
        self.ring = ring
        terms = {int(p): t for p, t in terms.items()}
        if lo is None:
            lo = min(terms) if terms else 0
        if hi is None:
            hi = max(terms) if terms else 0
        if lo > hi:
            raise ValueError("empty window")
        self.lo, self.hi = int(lo), int(hi)
        if isinstance(bounded, tuple):
            self.zero_below, self.zero_above = bool(bounded[0]), bool(bounded[1])
        else:
            self.zero_below = self.zero_above = bool(bounded)
        self.terms = {p: terms.get(p, zero_free(ring)) for p in range(self.lo, self.hi + 1)}
        self.diffs = {}
        for p in range(self.lo, self.hi):
            d = (diffs or {}).get(p)
            if d is None:
                d = OpMatrix.zero(self.terms[p], self.terms[p + 1])
            elif d.source.twists != self.terms[p].twists or d.target.twists != self.terms[p + 1].twists:
                raise ValueError(f"differential at position {p} does not match the terms")
            self.diffs[p] = d
        self.labels = labels or {}
        if check:
            self.check_square_zero()

    def __repr__(self):
        shape = {p: t.rank for p, t in self.terms.items() if t.rank}
        return f"FreeComplex({ring_kind(self.ring)}, window=[{self.lo},{self.hi}], ranks={shape})"

    @property
    def field(self):
        return self.ring.field

    @property
    def bounded(self):
        """Zero outside the window on both sides (or a (below, above) pair of flags)."""
        if self.zero_below == self.zero_above:
            return self.zero_below
        return (self.zero_below, self.zero_above)

    @property
    def is_bounded(self):
        return self.zero_below and self.zero_above

    def positions(self):
        return range(self.lo, self.hi + 1)

    def term(self, p):
        if self.lo <= p <= self.hi:
            return self.terms[p]
        if (p < self.lo and self.zero_below) or (p > self.hi and self.zero_above):
            return zero_free(self.ring)
        raise WindowError(f"position {p} lies outside the window [{self.lo}, {self.hi}]")

    def diff(self, p):
        if self.lo <= p < self.hi:
            return self.diffs[p]
        if (p < self.lo and self.zero_below) or (p >= self.hi and self.zero_above):
            return OpMatrix.zero(self.term(p), self.term(p + 1))
        raise WindowError(f"differential at {p} lies outside the window [{self.lo}, {self.hi}]")

    def check_square_zero(self):
        for p in range(self.lo, self.hi - 1):
            comp = self.diffs[p + 1] @ self.diffs[p]
            if not comp.is_zero():
                raise AssertionError(f"d^{p + 1} o d^{p} != 0")

    def ranks(self):
        return {p: self.terms[p].rank for p in self.positions()}

    def is_zero(self):
        return all(t.rank == 0 for t in self.terms.values())

    def is_minimal(self):
        """True when no differential has a nonzero scalar (unit key) entry."""
        unit = self.ring.unit
        return all(unit not in d.coeffs for d in self.diffs.values())

    def equals(self, other):
        if (self.lo, self.hi) != (other.lo, other.hi):
            return False
        if any(self.terms[p].twists != other.terms[p].twists for p in self.positions()):
            return False
        return all(self.diffs[p].equals(other.diffs[p]) for p in range(self.lo, self.hi))

    # -- structural operations ----------------------------------------------
    def translate(self, k=1):
        """T^k: position p holds the old term p+k, differential times (-1)^k."""
        terms = {p - k: t for p, t in self.terms.items()}
        diffs = {p - k: d.sign(k) for p, d in self.diffs.items()}
        labels = {p - k: v for p, v in self.labels.items()}
        return FreeComplex(self.ring, terms, diffs, self.lo - k, self.hi - k, self.bounded, labels, check=False)

    def twist(self, a):
        """Internal twist: every summand shifted by a.

        Over the exterior algebra the differential picks up (-1)^a, matching the
        sign convention for twisted module actions.
        """
        terms = {p: t.twist(a) for p, t in self.terms.items()}
        s = a if ring_kind(self.ring) == EXTERIOR else 0
        diffs = {p: d.with_modules(terms[p], terms[p + 1]).sign(s) for p, d in self.diffs.items()}
        return FreeComplex(self.ring, terms, diffs, self.lo, self.hi, self.bounded, self.labels, check=False)

    def restrict(self, lo, hi):
        """The stored data on a sub-window, flagged as unbounded."""
        lo, hi = max(lo, self.lo), min(hi, self.hi)
        terms = {p: self.terms[p] for p in range(lo, hi + 1)}
        diffs = {p: self.diffs[p] for p in range(lo, hi)}
        labels = {p: v for p, v in self.labels.items() if lo <= p <= hi}
        return FreeComplex(self.ring, terms, diffs, lo, hi, False, labels, check=False)

    def trimmed(self):
        """Drop zero terms at both ends (bounded complexes only)."""
        nz = [p for p in self.positions() if self.terms[p].rank]
        if not nz or not self.is_bounded:
            return self
        return FreeComplex(
            self.ring,
            {p: self.terms[p] for p in range(nz[0], nz[-1] + 1)},
            {p: self.diffs[p] for p in range(nz[0], nz[-1])},
            nz[0],
            nz[-1],
            True,
            {p: v for p, v in self.labels.items() if nz[0] <= p <= nz[-1]},
            check=False,
        )

    def linear_part(self):
        """Keep only the degree-one keys of every differential."""
        diffs = {p: d.part_of_degree(1) for p, d in self.diffs.items()}
        return FreeComplex(self.ring, self.terms, diffs, self.lo, self.hi, self.bounded, self.labels, check=False)

    # -- degreewise data -----------------------------------------------------
    def degree_matrix(self, p, d):
        return self.diff(p).degree_matrix(d)

    def homology_dim(self, p, d):
        """dim H^p in internal degree d."""
        if (p <= self.lo and not self.zero_below) or (p >= self.hi and not self.zero_above):
            raise WindowError(f"homology at {p} needs positions {p - 1}..{p + 1} inside the window")
        F = self.field
        dim = self.term(p).dim(d)
        if dim == 0:
            return 0
        out = self.degree_matrix(p, d)
        inc = self.degree_matrix(p - 1, d)
        return dim - F.rank(out) - F.rank(inc)

    def homology_table(self, p, degrees):
        return {d: self.homology_dim(p, d) for d in degrees}

    def internal_degree_range(self):
        """Degrees in which some term may be nonzero (upper end None over S)."""
        lows, highs = [], []
        for t in self.terms.values():
            r = t.degree_range()
            if r is None:
                continue
            lows.append(r[0])
            highs.append(r[1])
        if not lows:
            return None
        return (min(lows), None if None in highs else max(highs))

    # -- Betti tables ----------------------------------------------------------
    def betti(self):
        """{position: {generator degree: count}} for the nonzero terms."""
        out = {}
        for p in self.positions():
            counts = {}
            for g in self.terms[p].generator_degrees():
                counts[g] = counts.get(g, 0) + 1
            if counts:
                out[p] = dict(sorted(counts.items()))
        return out

    def betti_json(self):
        pos = list(self.positions())
        degrees = sorted({g for c in self.betti().values() for g in c})
        rows = {}
        table = self.betti()
        for g in degrees:
            rows[str(g)] = [table.get(p, {}).get(g, 0) for p in pos]
        return {"positions": pos, "rows": rows}

    def to_json(self):
        """Positions, twists, generator degrees and differential entries."""
        kind = ring_kind(self.ring)
        F = self.field
        to_int = getattr(F, "to_int", None)

        def scal(x):
            if to_int is not None and hasattr(F, "p"):
                return int(to_int(x))
            return str(x)

        terms = []
        for p in self.positions():
            t = self.terms[p]
            terms.append({"position": p, "twists": list(t.twists), "generator_degrees": t.generator_degrees()})
        diffs = []
        for p in range(self.lo, self.hi):
            d = self.diffs[p]
            entries = []
            for key in sorted(d.coeffs, key=self.ring.sort_key):
                a = d.coeffs[key]
                for i, j in zip(*np.nonzero(a)):
                    entries.append({"row": int(i), "col": int(j), "monomial": list(key), "coeff": scal(a[i, j])})
            entries.sort(key=lambda e: (e["row"], e["col"], self.ring.sort_key(tuple(e["monomial"]))))
            diffs.append({"position": p, "entries": entries})
        return {
            "ring": kind,
            "n": getattr(self.ring, "n", 0),
            "window": [self.lo, self.hi],
            "zero_below": self.zero_below,
            "zero_above": self.zero_above,
            "terms": terms,
            "differentials": diffs,
        }


def zero_complex(ring, lo=0, hi=0):
    return FreeComplex(ring, {}, {}, lo, hi, True)


def single_term(module, position=0):
    return FreeComplex(module.ring, {position: module}, {}, position, position, True)


def from_map(phi, source_position=-1):
    """Two-term complex source -> target at positions (p, p+1)."""
    p = source_position
    return FreeComplex(phi.ring, {p: phi.source, p + 1: phi.target}, {p: phi}, p, p + 1, True)


def dualize_complex(C):
    """Hom into the ring over S: term p is (C^{-p})^dual, d^p = (-1)^{p+1} (d^{-p-1})^T."""
    if ring_kind(C.ring) != SYMMETRIC:
        raise ValueError("free-module dualization is only stored over S; use the degreewise dual over the exterior algebra")
    terms = {-p: FreeModule(C.ring, [-a for a in t.twists]) for p, t in C.terms.items()}
    diffs = {}
    for p in range(-C.hi, -C.lo):
        diffs[p] = C.diffs[-p - 1].transpose().sign(p + 1)
    labels = {-p: v for p, v in C.labels.items()}
    return FreeComplex(C.ring, terms, diffs, -C.hi, -C.lo, (C.zero_above, C.zero_below), labels)


def cone(phi_maps, X, Y):
    """Mapping cone of a chain map phi: X -> Y given as {p: OpMatrix X^p -> Y^p}.

    Con(phi)^p = X^{p+1} + Y^p with d = [[-d_X, 0], [phi, d_Y]].
    """
    lo = min(X.lo - 1, Y.lo)
    hi = max(X.hi - 1, Y.hi)
    terms, diffs, labels = {}, {}, {}
    for p in range(lo, hi + 1):
        terms[p] = X.term(p + 1).direct_sum(Y.term(p))
        labels[p] = [("X", j) for j in range(X.term(p + 1).rank)] + [("Y", j) for j in range(Y.term(p).rank)]
    for p in range(lo, hi):
        blocks = {
            (0, 0): -X.diff(p + 1),
            (1, 1): Y.diff(p),
        }
        if p + 1 in phi_maps:
            blocks[(1, 0)] = phi_maps[p + 1]
        diffs[p] = block_matrix(
            blocks, [X.term(p + 1), Y.term(p)], [X.term(p + 2), Y.term(p + 1)]
        ).with_modules(terms[p], terms[p + 1])
    return FreeComplex(X.ring, terms, diffs, lo, hi, True, labels)


class DoubleComplex:
    """Terms X^{pq} with d' : X^{pq} -> X^{p+1,q} and d'' : X^{pq} -> X^{p,q+1}.

    Missing terms are zero; both differentials square to zero and commute.
    """

    def __init__(self, ring, terms, dh=None, dv=None, check=True):
        self.ring = ring
        self.terms = {(int(p), int(q)): t for (p, q), t in terms.items() if t.rank}
        self.dh = {}
        self.dv = {}
        for (p, q), d in (dh or {}).items():
            if (p, q) in self.terms and (p + 1, q) in self.terms and not d.is_zero():
                self.dh[(p, q)] = d
        for (p, q), d in (dv or {}).items():
            if (p, q) in self.terms and (p, q + 1) in self.terms and not d.is_zero():
                self.dv[(p, q)] = d
        if check:
            self.check()

    def term(self, p, q):
        return self.terms.get((p, q), zero_free(self.ring))

    def h(self, p, q):
        d = self.dh.get((p, q))
        return d if d is not None else OpMatrix.zero(self.term(p, q), self.term(p + 1, q))

    def v(self, p, q):
        d = self.dv.get((p, q))
        return d if d is not None else OpMatrix.zero(self.term(p, q), self.term(p, q + 1))

    def check(self):
        for (p, q) in self.terms:
            if not (self.h(p + 1, q) @ self.h(p, q)).is_zero():
                raise AssertionError(f"d'd' != 0 at ({p},{q})")
            if not (self.v(p, q + 1) @ self.v(p, q)).is_zero():
                raise AssertionError(f"d''d'' != 0 at ({p},{q})")
            if not (self.v(p + 1, q) @ self.h(p, q)).equals(self.h(p, q + 1) @ self.v(p, q)):
                raise AssertionError(f"d'd'' != d''d' at ({p},{q})")

    def total_range(self):
        if not self.terms:
            return (0, 0)
        sums = [p + q for p, q in self.terms]
        return (min(sums), max(sums))

    def antidiagonal(self, m):
        return sorted((p, q) for (p, q) in self.terms if p + q == m)

    def dual(self):
        """Hom into the ring over S: X^{pq} -> (X^{-p,-q})^dual with the dualizing signs.

        d' at (p, q) is (-1)^{p+1} (d'^{-p-1,-q})^T, d'' is (-1)^{q+1} (d''^{-p,-q-1})^T.
        """
        terms = {(-p, -q): FreeModule(self.ring, [-a for a in t.twists]) for (p, q), t in self.terms.items()}
        dh = {}
        dv = {}
        for (p, q) in terms:
            if (-p - 1, -q) in self.dh:
                dh[(p, q)] = self.dh[(-p - 1, -q)].transpose().sign(p + 1)
            if (-p, -q - 1) in self.dv:
                dv[(p, q)] = self.dv[(-p, -q - 1)].transpose().sign(q + 1)
        return DoubleComplex(self.ring, terms, dh, dv)


def total_complex(X, lo=None, hi=None):
    """tot(X): term m = sum over p+q=m (ordered by p), d = d' + (-1)^p d''.

    ``labels[m]`` lists (p, q, j) for every summand, j its index in X^{pq}.
    """
    if lo is None or hi is None:
        tl, th = X.total_range()
        lo = tl if lo is None else lo
        hi = th if hi is None else hi
    terms, labels, parts = {}, {}, {}
    for m in range(lo, hi + 1):
        cells = X.antidiagonal(m)
        parts[m] = cells
        terms[m] = FreeModule(X.ring, [a for c in cells for a in X.terms[c].twists])
        labels[m] = [(p, q, j) for (p, q) in cells for j in range(X.terms[(p, q)].rank)]
    diffs = {}
    for m in range(lo, hi):
        src, tgt = parts[m], parts[m + 1]
        tindex = {c: i for i, c in enumerate(tgt)}
        blocks = {}
        for si, (p, q) in enumerate(src):
            if (p + 1, q) in tindex and (p, q) in X.dh:
                blocks[(tindex[(p + 1, q)], si)] = X.dh[(p, q)]
            if (p, q + 1) in tindex and (p, q) in X.dv:
                blocks[(tindex[(p, q + 1)], si)] = X.dv[(p, q)].sign(p)
        if src and tgt:
            d = block_matrix(blocks, [X.terms[c] for c in src], [X.terms[c] for c in tgt])
            diffs[m] = d.with_modules(terms[m], terms[m + 1])
    return FreeComplex(X.ring, terms, diffs, lo, hi, True, labels)


def pq_sign_isomorphism(X):
    """Blockwise (-1)^{pq} identification tot(dual X) -> dual(tot X).

    Returns (tot of the dual, dual of the total complex, {m: OpMatrix}).
    """
    D = X.dual()
    tot_d = total_complex(D)
    dual_t = dualize_complex(total_complex(X))
    F = X.ring.field
    maps = {}
    for m in tot_d.positions():
        src = tot_d.labels.get(m, [])
        tgt = dual_t.labels.get(m, [])
        where = {lab: i for i, lab in enumerate(tgt)}
        mat = F.zeros(len(tgt), len(src))
        for k, (p, q, j) in enumerate(src):
            mat[where[(-p, -q, j)], k] = F.scalar((-1) ** ((p * q) % 2))
        maps[m] = OpMatrix(tot_d.term(m), dual_t.term(m), {X.ring.unit: mat})
    return tot_d, dual_t, maps


def is_chain_map(maps, X, Y):
    """True when maps[p] : X^p -> Y^p commute with the differentials."""
    lo = min(X.lo, Y.lo)
    hi = max(X.hi, Y.hi)

    def get(p):
        if p in maps:
            return maps[p]
        return OpMatrix.zero(X.term(p), Y.term(p))

    for p in range(lo - 1, hi + 1):
        try:
            left = Y.diff(p) @ get(p)
            right = get(p + 1) @ X.diff(p)
        except WindowError:
            continue
        if not left.equals(right):
            return False
    return True
