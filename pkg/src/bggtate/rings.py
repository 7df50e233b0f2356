"""The symmetric algebra S, the exterior algebra and graded modules over it.

S = k[X_0..X_n] is graded with deg X_i = 1.  The exterior algebra on
e_0..e_n is graded positively; its module ``Wedge(V*)`` (here the
*contraction module*) has the basis X_T of exterior monomials in the X_i, the
element X_T sitting in degree -|T|, and e_k acts by contraction

    e_k . X_{t_1} ^ ... ^ X_{t_r} = sum_j (-1)^(j-1) delta(k, t_j) X_{T minus t_j}.

A graded module over the exterior algebra is stored as its degreewise
dimensions plus the matrices of the e_i actions.  Twisting N(a) shifts the
degrees (N(a)_p = N_{p+a}) and multiplies every action matrix by (-1)^a; the
graded dual has (N*)_p = (N_{-p})* with e_i acting in degree p by
(-1)^(p+1) times the transpose of the action N_{-p-1} -> N_{-p}.
"""

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from math import comb

import numpy as np

from .exactlin import Field, make_field

SYMMETRIC = "symmetric"
EXTERIOR = "exterior"
BASIS_CACHE_DEGREE = 14


# ---------------------------------------------------------------------------
# monomials


def sym_monomials(nvars, d):
    """Exponent vectors of total degree d in lexicographic (descending) order."""
    if d < 0:
        return []
    if nvars == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in sym_monomials(nvars - 1, d - first):
            out.append((first,) + rest)
    return out


def ext_monomials(nvars, d):
    """Strictly increasing index tuples of length d, lexicographic."""
    if d < 0 or d > nvars:
        return []
    return list(combinations(range(nvars), d))


def merge_sign(a, b):
    """Sign of e_a ^ e_b relative to e_{a union b}; 0 if they overlap."""
    if set(a) & set(b):
        return 0, None
    inversions = 0
    for x in a:
        for y in b:
            if x > y:
                inversions += 1
    return (-1) ** inversions, tuple(sorted(a + b))


def contract(v, t):
    """Apply C_v = C_{v_1} o ... o C_{v_r} to X_t; returns (sign, t') or (0, None).

    C_k X_t = (-1)^(position of k in t) X_{t minus k}, positions counted from 0.
    """
    sign = 1
    cur = list(t)
    for k in reversed(v):
        if k not in cur:
            return 0, None
        pos = cur.index(k)
        if pos % 2:
            sign = -sign
        cur.pop(pos)
    return sign, tuple(cur)


# ---------------------------------------------------------------------------
# key algebras: how the entries of a map of free modules compose


class KeyAlgebra:
    """Monomial bookkeeping for the entries of maps between free modules.

    A map between free modules is stored as {key: coefficient matrix}; the key
    is a monomial of the ring (a power product for S, an exterior monomial
    acting by contraction for the exterior side, the empty key for plain
    vector spaces).  ``mul(k1, k2)`` describes the composite "k1 after k2".
    """

    kind = "scalar"
    unit = ()

    def degree(self, key):
        return 0

    def mul(self, k1, k2):
        return 1, ()

    def sort_key(self, key):
        return key


class ScalarKeys(KeyAlgebra):
    kind = "scalar"
    unit = ()


@dataclass(frozen=True)
class RingSpec(KeyAlgebra):
    """S = k[X_0..X_n] (kind symmetric) or the exterior algebra on e_0..e_n."""

    n: int
    field: Field = dc_field(default=None, compare=False)
    kind: str = SYMMETRIC
    _tables: dict = dc_field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.kind not in (SYMMETRIC, EXTERIOR):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        object.__setattr__(self, "field", make_field(self.field))
        tables = {}
        top = BASIS_CACHE_DEGREE if self.kind == SYMMETRIC else self.n + 1
        for d in range(top + 1):
            mons = self._monomials(d)
            tables[d] = (mons, {m: i for i, m in enumerate(mons)})
        object.__setattr__(self, "_tables", tables)

    # -- basics -----------------------------------------------------------
    @property
    def nvars(self):
        return self.n + 1

    @property
    def unit(self):
        return (0,) * (self.n + 1) if self.kind == SYMMETRIC else ()

    def with_kind(self, kind):
        return RingSpec(self.n, self.field, kind)

    def var(self, i):
        if self.kind == SYMMETRIC:
            e = [0] * (self.n + 1)
            e[i] = 1
            return tuple(e)
        return (i,)

    def degree(self, key):
        return sum(key) if self.kind == SYMMETRIC else len(key)

    def mul(self, k1, k2):
        if self.kind == SYMMETRIC:
            return 1, tuple(a + b for a, b in zip(k1, k2))
        return merge_sign(k1, k2)

    def sort_key(self, key):
        if self.kind == SYMMETRIC:
            return (sum(key), tuple(-x for x in key))
        return (len(key), key)

    def _monomials(self, d):
        if self.kind == SYMMETRIC:
            return sym_monomials(self.n + 1, d)
        return ext_monomials(self.n + 1, d)

    # -- bases ------------------------------------------------------------
    def basis(self, d):
        """Canonical ordered monomial basis of the degree-d piece."""
        if d < 0:
            return []
        hit = self._tables.get(d)
        if hit is not None:
            return hit[0]
        return self._monomials(d)

    def index(self, d):
        """Dictionary monomial -> position in :meth:`basis`."""
        hit = self._tables.get(d)
        if hit is not None:
            return hit[1]
        return {m: i for i, m in enumerate(self._monomials(d))}

    def dim(self, d):
        if d < 0:
            return 0
        if self.kind == SYMMETRIC:
            return comb(d + self.n, self.n)
        return comb(self.n + 1, d) if d <= self.n + 1 else 0


def monomial_basis(r, d):
    return r.basis(d)


def element_degree(r, x):
    """Degree of a homogeneous element given as {monomial: coefficient}."""
    degs = {r.degree(m) for m, c in x.items() if r.field.scalar(c) != 0}
    if len(degs) > 1:
        raise ValueError("element is not homogeneous")
    return degs.pop() if degs else None


def mult_map(r, x, d):
    """Matrix of left multiplication by x from degree d to degree d + deg(x)."""
    e = element_degree(r, x)
    F = r.field
    if e is None:
        e = 0
    src = r.basis(d)
    tgt_index = r.index(d + e)
    m = F.zeros(len(tgt_index), len(src))
    for mono, c in x.items():
        c = F.scalar(c)
        if c == 0:
            continue
        for j, s in enumerate(src):
            sign, prod = r.mul(mono, s)
            if sign == 0:
                continue
            i = tgt_index[prod]
            m[i, j] = F.scalar(m[i, j] + sign * c)
    return m


# ---------------------------------------------------------------------------
# graded modules over the exterior algebra


class LambdaModule:
    """A finite graded module over the exterior algebra on e_0..e_n.

    ``dims`` maps degree -> dimension (zero degrees may be omitted) and
    ``action[(i, d)]`` is the matrix of e_i from degree d to degree d+1.
    Missing action entries are zero.
    """

    def __init__(self, ring, dims, action, check=True):
        self.ring = ring
        self.field = ring.field
        self.dims = {int(d): int(k) for d, k in dims.items() if k}
        self.action = {}
        F = self.field
        for (i, d), mat in action.items():
            a = F.asarray(mat)
            if a.size and not F.is_zero(a):
                self.action[(int(i), int(d))] = a
        if check:
            self.validate()

    # -- accessors -----------------------------------------------------------
    @property
    def n(self):
        return self.ring.n

    def dim(self, d):
        return self.dims.get(d, 0)

    def degrees(self):
        return sorted(self.dims)

    def total_dim(self):
        return sum(self.dims.values())

    def is_zero(self):
        return not self.dims

    def act(self, i, d):
        m = self.action.get((i, d))
        if m is None:
            return self.field.zeros(self.dim(d + 1), self.dim(d))
        return m

    def act_monomial(self, v, d):
        """Matrix of e_v = e_{v_1} ^ ... ^ e_{v_r} from degree d to d + r."""
        F = self.field
        m = F.eye(self.dim(d))
        cur = d
        for k in reversed(v):
            m = F.matmul(self.act(k, cur), m)
            cur += 1
        return m

    def validate(self):
        F = self.field
        for (i, d), mat in self.action.items():
            if mat.shape != (self.dim(d + 1), self.dim(d)):
                raise ValueError(f"action of e_{i} in degree {d} has shape {mat.shape}")
        for d in self.degrees():
            for i in range(self.n + 1):
                for j in range(i, self.n + 1):
                    s = F.add(
                        F.matmul(self.act(j, d + 1), self.act(i, d)),
                        F.matmul(self.act(i, d + 1), self.act(j, d)),
                    )
                    if not F.is_zero(s):
                        raise ValueError(f"e_{i}, e_{j} do not anticommute in degree {d}")

    def equals(self, other):
        if self.dims != other.dims:
            return False
        keys = set(self.action) | set(other.action)
        return all(self.field.equal(self.act(i, d), other.act(i, d)) for i, d in keys)

    def __repr__(self):
        return f"LambdaModule(n={self.n}, dims={dict(sorted(self.dims.items()))})"

    # -- constructions ------------------------------------------------------
    def twist(self, a):
        """N(a): N(a)_p = N_{p+a}, actions multiplied by (-1)^a."""
        F = self.field
        dims = {d - a: k for d, k in self.dims.items()}
        action = {}
        for (i, d), m in self.action.items():
            action[(i, d - a)] = F.neg(m) if a % 2 else m.copy()
        return LambdaModule(self.ring, dims, action, check=False)

    def dual(self):
        """Graded dual: (N*)_p = (N_{-p})*, e_i acting by (-1)^(p+1) A^T."""
        F = self.field
        dims = {-d: k for d, k in self.dims.items()}
        action = {}
        for (i, d), m in self.action.items():
            # m: N_d -> N_{d+1}; transpose lands in degree p = -d-1 -> -d
            p = -d - 1
            t = m.T.copy()
            action[(i, p)] = F.neg(t) if (p + 1) % 2 else t
        return LambdaModule(self.ring, dims, action, check=False)

    def direct_sum(self, other):
        F = self.field
        dims = {}
        for d in set(self.dims) | set(other.dims):
            dims[d] = self.dim(d) + other.dim(d)
        action = {}
        for d in dims:
            for i in range(self.n + 1):
                m = F.zeros(self.dim(d + 1) + other.dim(d + 1), dims[d])
                m[: self.dim(d + 1), : self.dim(d)] = self.act(i, d)
                m[self.dim(d + 1) :, self.dim(d) :] = other.act(i, d)
                action[(i, d)] = m
        return LambdaModule(self.ring, dims, action, check=False)

    def socle_annihilated(self):
        """True when the top exterior power e_0 ^ ... ^ e_n acts as zero."""
        top = tuple(range(self.n + 1))
        return all(self.field.is_zero(self.act_monomial(top, d)) for d in self.degrees())


def zero_module(ring):
    return LambdaModule(ring, {}, {})


def residue_field_module(ring, degree=0):
    """k placed in the given degree."""
    return LambdaModule(ring, {degree: 1}, {})


def contraction_module(ring):
    """Wedge(V*) with basis X_T in degree -|T| and e_k acting by contraction."""
    F = ring.field
    n = ring.n
    dims = {-r: comb(n + 1, r) for r in range(n + 2)}
    action = {}
    for r in range(1, n + 2):
        src = ext_monomials(n + 1, r)
        tgt = {t: i for i, t in enumerate(ext_monomials(n + 1, r - 1))}
        for k in range(n + 1):
            m = F.zeros(len(tgt), len(src))
            for j, t in enumerate(src):
                sign, rest = contract((k,), t)
                if sign:
                    m[tgt[rest], j] = F.scalar(sign)
            action[(k, -r)] = m
    return LambdaModule(ring, dims, action, check=False)


def exterior_algebra_module(ring):
    """The exterior algebra as a module over itself (basis e_S in degree |S|)."""
    F = ring.field
    n = ring.n
    dims = {r: comb(n + 1, r) for r in range(n + 2)}
    action = {}
    for r in range(n + 1):
        src = ext_monomials(n + 1, r)
        tgt = {t: i for i, t in enumerate(ext_monomials(n + 1, r + 1))}
        for k in range(n + 1):
            m = F.zeros(len(tgt), len(src))
            for j, s in enumerate(src):
                sign, prod = merge_sign((k,), s)
                if sign:
                    m[tgt[prod], j] = F.scalar(sign)
            action[(k, r)] = m
    return LambdaModule(ring, dims, action, check=False)


# ---------------------------------------------------------------------------
# degreewise morphisms


@dataclass
class GradedMap:
    """A degree-0 map of graded vector spaces, stored per degree."""

    source: LambdaModule
    target: LambdaModule
    blocks: dict

    def block(self, d):
        m = self.blocks.get(d)
        if m is None:
            return self.source.field.zeros(self.target.dim(d), self.source.dim(d))
        return m

    def is_linear(self):
        """Does the map commute with every e_i action?"""
        F = self.source.field
        for d in set(self.source.dims) | set(self.target.dims):
            for i in range(self.source.n + 1):
                lhs = F.matmul(self.block(d + 1), self.source.act(i, d))
                rhs = F.matmul(self.target.act(i, d), self.block(d))
                if not F.equal(lhs, rhs):
                    return False
        return True

    def is_isomorphism(self):
        F = self.source.field
        if self.source.dims != self.target.dims:
            return False
        return all(F.rank(self.block(d)) == k for d, k in self.source.dims.items())


def map_from_generator(module, y, degree):
    """The module map from the free module on one generator of ``degree``.

    The free module is the exterior algebra shifted so that 1 sits in
    ``degree``; e_S goes to e_S . y.  Returned as a GradedMap whose source is
    that shifted free module.
    """
    ring = module.ring
    F = ring.field
    free = exterior_algebra_module(ring).twist(-degree)
    # twist(-degree) flips action signs by (-1)^degree; undo so that the
    # generator still multiplies with the plain exterior product
    if degree % 2:
        free = LambdaModule(
            ring, free.dims, {k: F.neg(m) for k, m in free.action.items()}, check=False
        )
    y = F.asarray(y).reshape(-1)
    blocks = {}
    for r in range(ring.n + 2):
        cols = [F.matmul(module.act_monomial(s, degree), y.reshape(-1, 1))[:, 0]
                for s in ext_monomials(ring.n + 1, r)]
        if cols:
            blocks[degree + r] = np.stack(cols, axis=1) if module.dim(degree + r) else F.zeros(0, len(cols))
    return GradedMap(free, module, blocks)


def double_dual_map(module):
    """mu: N -> N**, mu_p = (-1)^p times the canonical identification."""
    F = module.field
    dd = module.dual().dual()
    blocks = {}
    for d, k in module.dims.items():
        e = F.eye(k)
        blocks[d] = F.neg(e) if d % 2 else e
    return GradedMap(module, dd, blocks)


def twist_dual_certificate(module, a):
    """alpha: N*(-a) -> (N(a))*, alpha_p = (-1)^((p-a)a) id; checked to be linear."""
    F = module.field
    src = module.dual().twist(-a)
    tgt = module.twist(a).dual()
    blocks = {}
    for p, k in src.dims.items():
        e = F.eye(k)
        blocks[p] = F.neg(e) if ((p - a) * a) % 2 else e
    cert = GradedMap(src, tgt, blocks)
    if not cert.is_linear():
        raise AssertionError("twist/dual identification does not intertwine the actions")
    return cert
