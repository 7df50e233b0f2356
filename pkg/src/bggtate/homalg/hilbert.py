"""Homology modules, Ext against the canonical module, and Hilbert data."""

from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import dualize_complex
from .free import hstack, map_from_columns
from .modules import ModulePresentation
from .resolve import kernel_generators, minimal_free_resolution, minimal_presentation


def homology(C, p, degrees):
    """{degree: dim H^p(C)_d}; positions at the edge of an unbounded window raise."""
    return C.homology_table(p, degrees)


def homology_module(C, p, degree_bound=None):
    """H^p(C) of a complex of free S-modules as a minimal presentation.

    Generators are minimal generators of ker d^p; relations are the kernel of
    [zeta | d^{p-1}] projected onto the generator part.  Both searches stop at
    a syzygy-style degree bound; the dimensions of the result are then
    compared with dim H^p_d of the complex just past the bound, and the
    search is widened if they disagree.
    """
    ring = C.ring
    n = ring.n
    dp = C.diff(p)
    dm = C.diff(p - 1)
    src = dp.source
    degs = src.generator_degrees()
    if not degs:
        return ModulePresentation.free(ring, [])
    top = max(degs + dm.source.generator_degrees())
    extra = 0
    for _ in range(4):
        bound = degree_bound if degree_bound is not None else top + n + 2 + extra
        H = _homology_attempt(dp, dm, degs, bound, n + 2 + extra)
        if degree_bound is not None:
            return H
        check = range(min(degs), bound + 2)
        if all(H.dim(d) == C.homology_dim(p, d) for d in check):
            return H
        extra += n + 2
    raise AssertionError(f"homology presentation at {p} failed the dimension check")


def _homology_attempt(dp, dm, degs, bound, slack):
    ring = dp.ring
    src = dp.source
    cols = kernel_generators(dp, range(min(degs), bound + 1))
    if not cols:
        return ModulePresentation.free(ring, [])
    zeta = map_from_columns(src, cols)
    G = zeta.source
    both = hstack([zeta, dm], target=src)
    gdegs = G.generator_degrees() + dm.source.generator_degrees()
    rel_cols = kernel_generators(both, range(min(gdegs), max(gdegs) + slack + 1))
    if not rel_cols:
        return minimal_presentation(ModulePresentation.free(ring, G.twists))
    rel = map_from_columns(both.source, rel_cols)
    proj = rel.restrict(list(range(G.rank)), None).with_modules(rel.source, G)
    return minimal_presentation(ModulePresentation(proj))


def ext_complex(M, resolution=None):
    """Hom_S(L, S(-n-1)) for a minimal free resolution L of M."""
    L = resolution if resolution is not None else minimal_free_resolution(M)
    return dualize_complex(L).twist(-(M.ring.n + 1))


def ext_modules(M, resolution=None):
    """[Ext^i_S(M, w_S) for i = 0..n+1] as minimal presentations."""
    D = ext_complex(M, resolution)
    return [homology_module(D, i) for i in range(M.ring.n + 2)]


def ext_dims(M, i, degrees, resolution=None):
    """dim Ext^i_S(M, w_S)_d for d in degrees, straight from the complex."""
    D = ext_complex(M, resolution)
    return {d: D.homology_dim(i, d) for d in degrees}


# ---------------------------------------------------------------------------
# Hilbert series


def _poly_div_one_minus_t(coeffs):
    """Divide a polynomial (list, lowest degree first) by (1 - t); None if not divisible."""
    out = []
    acc = 0
    for c in coeffs[:-1]:
        acc += c
        out.append(acc)
    if acc + coeffs[-1] != 0:
        return None
    return out


@dataclass
class HilbertData:
    """Hilbert series N(t) t^shift / (1-t)^(n+1), its reduced form, and dimension."""

    numerator: list
    shift: int
    nvars: int
    reduced: list = field(default_factory=list)
    krull_dim: int = -1

    def series_string(self):
        def poly(cs, sh):
            out = ""
            for k, c in enumerate(cs):
                if not c:
                    continue
                e = k + sh
                mono = "" if e == 0 else "t" if e == 1 else f"t^{e}"
                mag = abs(c)
                body = f"{mag}" if not mono else mono if mag == 1 else f"{mag}*{mono}"
                if not out:
                    out = ("-" if c < 0 else "") + body
                else:
                    out += (" - " if c < 0 else " + ") + body
            return out or "0"

        if self.krull_dim < 0:
            return "0"
        if self.krull_dim == 0:
            return poly(self.reduced, self.shift)
        return f"({poly(self.reduced, self.shift)}) / (1-t)^{self.krull_dim}"

    def hilbert_polynomial(self):
        """Coefficients (Fractions, constant term first) of the Hilbert polynomial in d."""
        D = self.krull_dim
        if D <= 0:
            return []
        # sum_k q_k C(d - k - shift + D - 1, D - 1)
        result = [Fraction(0)] * D
        for k, q in enumerate(self.reduced):
            if not q:
                continue
            c = -(k + self.shift) + D - 1
            # C(d + c, D - 1) as a polynomial in d
            p = [Fraction(1)]
            for r in range(D - 1):
                p = _poly_mul(p, [Fraction(c - r), Fraction(1)])
            denom = 1
            for r in range(1, D):
                denom *= r
            for i, v in enumerate(p):
                result[i] += q * v / denom
        return result

    def polynomial_value(self, d):
        return sum(c * d**i for i, c in enumerate(self.hilbert_polynomial()))

    def to_json(self):
        return {
            "numerator": self.numerator,
            "shift": self.shift,
            "nvars": self.nvars,
            "reduced_numerator": self.reduced,
            "krull_dim": self.krull_dim,
            "hilbert_polynomial": [str(c) for c in self.hilbert_polynomial()],
        }


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def hilbert_from_resolution(L, nvars):
    gens = {}
    for p in L.positions():
        for g in L.terms[p].generator_degrees():
            gens[g] = gens.get(g, 0) + (-1) ** (-p % 2)
    gens = {g: c for g, c in gens.items() if c}
    if not gens:
        return HilbertData([0], 0, nvars, [], -1)
    shift = min(gens)
    num = [0] * (max(gens) - shift + 1)
    for g, c in gens.items():
        num[g - shift] = c
    reduced = list(num)
    order = nvars
    while order > 0:
        q = _poly_div_one_minus_t(reduced)
        if q is None:
            break
        reduced = q
        order -= 1
    while reduced and reduced[-1] == 0:
        reduced.pop()
    if not reduced:
        return HilbertData(num, shift, nvars, [], -1)
    return HilbertData(num, shift, nvars, reduced, order)


def hilbert_data(M, resolution=None):
    L = resolution if resolution is not None else minimal_free_resolution(M)
    return hilbert_from_resolution(L, M.ring.n + 1)


def krull_dimension(M):
    """Krull dimension of coker; the zero module gets -1."""
    if minimal_presentation(M).gens.rank == 0:
        return -1
    return hilbert_data(M).krull_dim
