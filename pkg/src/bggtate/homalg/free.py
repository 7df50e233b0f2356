"""Free modules over S, over the exterior algebra, or over the ground field.

Free modules are recorded by their twists.  Over S the summand S(a) has its
generator in degree -a.  Over the exterior algebra every free module is a sum
of twisted contraction modules Wedge(V*)(a); the summand Wedge(V*)(a) has
basis X_T in degree -|T| - a, and e_k acts on it by (-1)^a times contraction.
Its free generator X_{0..n} sits in degree -(n+1) - a.

A map between free modules is an :class:`OpMatrix`: a dictionary
``key -> coefficient matrix`` (rows index target summands, columns source
summands).  Over S the key is an exponent vector acting by multiplication;
over the exterior algebra the key v acts by the *untwisted* contraction
C_v = C_{v_1} o ... o C_{v_r}, which is linear over the exterior algebra
between twisted summands exactly when |v| matches the twist difference.  In
both cases an entry between S(a_j) -> S(b_i) (resp. Wedge(V*)(a_j) ->
Wedge(V*)(b_i)) has key degree b_i - a_j.
"""

from functools import lru_cache

import numpy as np

from ..rings import EXTERIOR, SYMMETRIC, KeyAlgebra, ScalarKeys, contract, ext_monomials, sym_monomials


def ring_kind(ring):
    return getattr(ring, "kind", "scalar")


@lru_cache(maxsize=None)
def _sym_shift(nvars, key, e):
    """Positions of key*m in basis(e + deg key) for each m in basis(e)."""
    src = sym_monomials(nvars, e)
    tgt = {m: i for i, m in enumerate(sym_monomials(nvars, e + sum(key)))}
    idx = np.array([tgt[tuple(a + b for a, b in zip(key, m))] for m in src], dtype=np.int64)
    return idx


@lru_cache(maxsize=None)
def _ext_contract(nvars, key, r):
    """(source positions, target positions, signs) of C_key on X_T with |T| = r."""
    src = ext_monomials(nvars, r)
    tgt = {m: i for i, m in enumerate(ext_monomials(nvars, r - len(key)))}
    s_idx, t_idx, signs = [], [], []
    for j, t in enumerate(src):
        sign, rest = contract(key, t)
        if sign:
            s_idx.append(j)
            t_idx.append(tgt[rest])
            signs.append(sign)
    return (
        np.array(s_idx, dtype=np.int64),
        np.array(t_idx, dtype=np.int64),
        np.array(signs, dtype=np.int64),
    )


class FreeModule:
    """A finite direct sum of twisted free modules."""

    __slots__ = ("ring", "twists")

    def __init__(self, ring, twists=()):
        self.ring = ring
        self.twists = tuple(int(a) for a in twists)

    @property
    def rank(self):
        return len(self.twists)

    @property
    def field(self):
        return self.ring.field

    def __eq__(self, other):
        return isinstance(other, FreeModule) and self.twists == other.twists and ring_kind(self.ring) == ring_kind(other.ring)

    def __hash__(self):
        return hash(self.twists)

    def __repr__(self):
        return f"FreeModule({ring_kind(self.ring)}, {list(self.twists)})"

    def generator_degree(self, j):
        kind = ring_kind(self.ring)
        if kind == SYMMETRIC:
            return -self.twists[j]
        if kind == EXTERIOR:
            return -(self.ring.n + 1) - self.twists[j]
        return 0

    def generator_degrees(self):
        return [self.generator_degree(j) for j in range(self.rank)]

    def twist(self, c):
        return FreeModule(self.ring, [a + c for a in self.twists])

    def direct_sum(self, other):
        return FreeModule(self.ring, self.twists + other.twists)

    def sub(self, indices):
        return FreeModule(self.ring, [self.twists[j] for j in indices])

    # -- degree pieces ---------------------------------------------------------
    def summand_dim(self, j, d):
        kind = ring_kind(self.ring)
        if kind == SYMMETRIC:
            return self.ring.dim(d + self.twists[j])
        if kind == EXTERIOR:
            r = -d - self.twists[j]
            return self.ring.dim(r) if 0 <= r <= self.ring.n + 1 else 0
        return 1 if d == 0 else 0

    def offsets(self, d):
        """Start offsets of each summand inside the degree-d piece, plus total."""
        offs = [0]
        for j in range(self.rank):
            offs.append(offs[-1] + self.summand_dim(j, d))
        return offs

    def dim(self, d):
        return self.offsets(d)[-1]

    def degree_range(self):
        """Degrees where the module can be nonzero (upper end None over S)."""
        if not self.rank:
            return None
        kind = ring_kind(self.ring)
        if kind == SYMMETRIC:
            return (min(self.generator_degrees()), None)
        if kind == EXTERIOR:
            return (-(self.ring.n + 1) - max(self.twists), -min(self.twists))
        return (0, 0)

    def summand_basis(self, j, d):
        kind = ring_kind(self.ring)
        if kind == SYMMETRIC:
            return self.ring.basis(d + self.twists[j])
        if kind == EXTERIOR:
            return ext_monomials(self.ring.n + 1, -d - self.twists[j])
        return [()] if d == 0 else []

    def degree_basis(self, d):
        """List of (summand, monomial) labelling the basis of the degree-d piece."""
        out = []
        for j in range(self.rank):
            out.extend((j, m) for m in self.summand_basis(j, d))
        return out

    def action_entries(self, d):
        """Sparse form of :meth:`action_matrices`: per variable, (rows, cols, values)."""
        kind = ring_kind(self.ring)
        nv = self.ring.n + 1
        src_off = self.offsets(d - 1)
        tgt_off = self.offsets(d)
        out = []
        for i in range(nv):
            rows, cols, vals = [], [], []
            for j in range(self.rank):
                if kind == SYMMETRIC:
                    e = d - 1 + self.twists[j]
                    if e < 0:
                        continue
                    idx = _sym_shift(nv, self.ring.var(i), e)
                    rows.append(tgt_off[j] + idx)
                    cols.append(src_off[j] + np.arange(len(idx)))
                    vals.append(np.ones(len(idx), dtype=np.int64))
                else:
                    r = -(d - 1) - self.twists[j]
                    if r < 1 or r > nv:
                        continue
                    s_idx, t_idx, signs = _ext_contract(nv, (i,), r)
                    rows.append(tgt_off[j] + t_idx)
                    cols.append(src_off[j] + s_idx)
                    vals.append(-signs if self.twists[j] % 2 else signs)
            cat = lambda parts: np.concatenate(parts).astype(np.int64) if parts else np.zeros(0, dtype=np.int64)
            out.append((cat(rows), cat(cols), cat(vals)))
        return out

    def action_matrices(self, d):
        """Matrices of the degree-one ring generators from degree d-1 to d.

        Over S these are multiplication by X_i; over the exterior algebra the
        actions of e_k (with the (-1)^a twist sign on each summand).
        """
        shape = (self.dim(d), self.dim(d - 1))
        mats = []
        for rows, cols, vals in self.action_entries(d):
            m = _scratch(self.field, *shape)
            m[rows, cols] = vals
            mats.append(self.field.asarray(m))
        return mats

    def apply_actions(self, d, X):
        """[A @ X for A in action_matrices(d)] without forming the matrices."""
        F = self.field
        out = []
        for rows, cols, vals in self.action_entries(d):
            m = F.zeros(self.dim(d), X.shape[1])
            if len(rows):
                block = X[cols]
                if np.any(vals != 1):
                    block = F.asarray(vals.reshape(-1, 1) * block) if hasattr(F, "p") else block * vals.reshape(-1, 1)
                m[rows] = block
            out.append(m)
        return out


def _scratch(field, rows, cols):
    """Integer workspace for prime fields, Fraction workspace otherwise."""
    if hasattr(field, "p"):
        return np.zeros((rows, cols), dtype=np.int64)
    return field.zeros(rows, cols)


class ScalarRing(ScalarKeys):
    """Key algebra for maps of plain graded vector spaces (only the empty key)."""

    def __init__(self, field):
        self.field = field
        self.n = 0


def zero_free(ring):
    return FreeModule(ring, ())


class OpMatrix:
    """A degree-0 map of free modules: {key: coefficient matrix}."""

    __slots__ = ("ring", "source", "target", "coeffs")

    def __init__(self, source, target, coeffs=None, check=True):
        self.ring = source.ring
        self.source = source
        self.target = target
        F = self.ring.field
        self.coeffs = {}
        for key, mat in (coeffs or {}).items():
            a = F.asarray(mat)
            if a.shape != (target.rank, source.rank):
                raise ValueError(f"coefficient for {key} has shape {a.shape}, expected {(target.rank, source.rank)}")
            if not F.is_zero(a):
                self.coeffs[tuple(key)] = a
        if check:
            self.check_degrees()

    @property
    def field(self):
        return self.ring.field

    def __repr__(self):
        return f"OpMatrix({self.source.twists} -> {self.target.twists}, keys={len(self.coeffs)})"

    def check_degrees(self):
        kind = ring_kind(self.ring)
        for key, a in self.coeffs.items():
            if kind == "scalar":
                if key != ():
                    raise ValueError("scalar maps only carry the empty key")
                continue
            kd = self.ring.degree(key)
            rows, cols = np.nonzero(a)
            for i, j in zip(rows, cols):
                if self.target.twists[i] - self.source.twists[j] != kd:
                    raise ValueError(
                        f"entry ({i},{j}) with key {key} has degree {kd}, expected "
                        f"{self.target.twists[i] - self.source.twists[j]}"
                    )

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, source, target):
        return cls(source, target, {}, check=False)

    @classmethod
    def identity(cls, module):
        F = module.field
        return cls(module, module, {module.ring.unit: F.eye(module.rank)}, check=False)

    @classmethod
    def scalar(cls, source, target, mat):
        return cls(source, target, {source.ring.unit: mat})

    # -- algebra -------------------------------------------------------------
    def is_zero(self):
        return not self.coeffs

    def coeff(self, key):
        m = self.coeffs.get(tuple(key))
        if m is None:
            return self.field.zeros(self.target.rank, self.source.rank)
        return m

    def scalar_part(self):
        return self.coeff(self.ring.unit)

    def __add__(self, other):
        F = self.field
        out = {k: v.copy() for k, v in self.coeffs.items()}
        for k, v in other.coeffs.items():
            out[k] = F.add(out[k], v) if k in out else v.copy()
        return OpMatrix(self.source, self.target, out, check=False)._clean()

    def __neg__(self):
        F = self.field
        return OpMatrix(self.source, self.target, {k: F.neg(v) for k, v in self.coeffs.items()}, check=False)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        F = self.field
        if F.scalar(c) == F.scalar(1):
            return self
        return OpMatrix(self.source, self.target, {k: F.scale(c, v) for k, v in self.coeffs.items()}, check=False)._clean()

    def sign(self, s):
        return self if s % 2 == 0 else -self

    def _clean(self):
        F = self.field
        self.coeffs = {k: v for k, v in self.coeffs.items() if not F.is_zero(v)}
        return self

    def __matmul__(self, other):
        """Composite ``self o other``."""
        if self.source.twists != other.target.twists:
            raise ValueError("composition of incompatible maps")
        F = self.field
        out = {}
        for k1, a in self.coeffs.items():
            for k2, b in other.coeffs.items():
                sign, key = self.ring.mul(k1, k2)
                if sign == 0:
                    continue
                prod = F.matmul(a, b)
                if sign < 0:
                    prod = F.neg(prod)
                out[key] = F.add(out[key], prod) if key in out else prod
        return OpMatrix(other.source, self.target, out, check=False)._clean()

    def equals(self, other):
        if self.source.twists != other.source.twists or self.target.twists != other.target.twists:
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self.field.equal(self.coeff(k), other.coeff(k)) for k in keys)

    def transpose(self):
        """Dual map between dual free modules over S (twists negated)."""
        src = FreeModule(self.ring, [-a for a in self.target.twists])
        tgt = FreeModule(self.ring, [-a for a in self.source.twists])
        return OpMatrix(src, tgt, {k: v.T.copy() for k, v in self.coeffs.items()}, check=False)

    def restrict(self, rows=None, cols=None):
        rows = list(range(self.target.rank)) if rows is None else list(rows)
        cols = list(range(self.source.rank)) if cols is None else list(cols)
        src = self.source.sub(cols)
        tgt = self.target.sub(rows)
        out = {k: v[np.ix_(rows, cols)] for k, v in self.coeffs.items()}
        return OpMatrix(src, tgt, out, check=False)._clean()

    def with_modules(self, source, target):
        return OpMatrix(source, target, self.coeffs, check=False)

    def max_key_degree(self):
        if not self.coeffs:
            return 0
        return max(self.ring.degree(k) for k in self.coeffs)

    def min_key_degree(self):
        if not self.coeffs:
            return None
        return min(self.ring.degree(k) for k in self.coeffs)

    def part_of_degree(self, e):
        """Keep only the keys of degree e (for example the linear part)."""
        return OpMatrix(
            self.source, self.target, {k: v for k, v in self.coeffs.items() if self.ring.degree(k) == e}, check=False
        )

    # -- degreewise matrices ---------------------------------------------------
    def degree_matrix(self, d):
        """Matrix of the map from source_d to target_d in the monomial bases."""
        F = self.field
        kind = ring_kind(self.ring)
        s_off = self.source.offsets(d)
        t_off = self.target.offsets(d)
        m = _scratch(F, t_off[-1], s_off[-1])
        if kind == "scalar":
            if d == 0 and self.coeffs:
                return self.coeff(()).copy()
            return m
        nv = self.ring.n + 1
        for key, a in self.coeffs.items():
            rows, cols = np.nonzero(a)
            for i, j in zip(rows, cols):
                c = a[i, j]
                if kind == SYMMETRIC:
                    e = d + self.source.twists[j]
                    if e < 0:
                        continue
                    idx = _sym_shift(nv, key, e)
                    m[t_off[i] + idx, s_off[j] + np.arange(len(idx))] += c
                else:
                    r = -d - self.source.twists[j]
                    if r < len(key) or r > nv:
                        continue
                    s_idx, t_idx, signs = _ext_contract(nv, key, r)
                    if len(s_idx):
                        m[t_off[i] + t_idx, s_off[j] + s_idx] += signs * c
        return F.asarray(m)


def hstack(maps, target=None):
    """[A | B | ...] as a map from the direct sum of sources."""
    target = target or maps[0].target
    src = FreeModule(target.ring, [a for m in maps for a in m.source.twists])
    F = target.field
    out = {}
    col = 0
    for m in maps:
        for k, v in m.coeffs.items():
            if k not in out:
                out[k] = F.zeros(target.rank, src.rank)
            out[k][:, col : col + m.source.rank] = v
        col += m.source.rank
    return OpMatrix(src, target, out, check=False)


def block_matrix(blocks, sources, targets):
    """Assemble a map from a dict {(target index, source index): OpMatrix}."""
    ring = sources[0].ring if sources else targets[0].ring
    src = FreeModule(ring, [a for s in sources for a in s.twists])
    tgt = FreeModule(ring, [a for t in targets for a in t.twists])
    F = ring.field
    s_off = np.cumsum([0] + [s.rank for s in sources])
    t_off = np.cumsum([0] + [t.rank for t in targets])
    out = {}
    for (ti, si), m in blocks.items():
        for k, v in m.coeffs.items():
            if k not in out:
                out[k] = F.zeros(tgt.rank, src.rank)
            out[k][t_off[ti] : t_off[ti + 1], s_off[si] : s_off[si + 1]] = F.add(
                out[k][t_off[ti] : t_off[ti + 1], s_off[si] : s_off[si + 1]], v
            )
    return OpMatrix(src, tgt, out, check=False)._clean()


def column_from_vector(module, z, d):
    """The map from one new free summand onto the element z of module_d.

    Returns (twist of the new summand, {key: column vector}).
    """
    kind = ring_kind(module.ring)
    F = module.field
    offs = module.offsets(d)
    cols = {}
    if kind == SYMMETRIC:
        new_twist = -d
        for j in range(module.rank):
            for t, mono in enumerate(module.summand_basis(j, d)):
                c = z[offs[j] + t]
                if c != 0:
                    if mono not in cols:
                        cols[mono] = F.zeros(module.rank, 1)
                    cols[mono][j, 0] = c
        return new_twist, cols
    if kind == EXTERIOR:
        n1 = module.ring.n + 1
        full = tuple(range(n1))
        new_twist = -d - n1
        for j in range(module.rank):
            for t, mono in enumerate(module.summand_basis(j, d)):
                c = z[offs[j] + t]
                if c == 0:
                    continue
                v = tuple(x for x in full if x not in mono)
                sign, rest = contract(v, full)
                assert rest == mono
                if v not in cols:
                    cols[v] = F.zeros(module.rank, 1)
                cols[v][j, 0] = F.scalar(sign * c)
        return new_twist, cols
    return 0, {(): F.asarray(np.asarray(z).reshape(-1, 1))}


def map_from_columns(target, columns):
    """Assemble generator images (as returned by column_from_vector) into a map."""
    F = target.field
    twists = [t for t, _ in columns]
    src = FreeModule(target.ring, twists)
    out = {}
    for j, (_, cols) in enumerate(columns):
        for k, v in cols.items():
            if k not in out:
                out[k] = F.zeros(target.rank, src.rank)
            out[k][:, j : j + 1] = v
    return OpMatrix(src, target, out)


__all__ = [
    "FreeModule",
    "OpMatrix",
    "ScalarKeys",
    "ScalarRing",
    "KeyAlgebra",
    "block_matrix",
    "column_from_vector",
    "hstack",
    "map_from_columns",
    "ring_kind",
    "zero_free",
]
