"""Exact dense linear algebra over Z/p and over the rationals.

Matrices are plain numpy arrays: int64 with residues in [0, p) for a prime
field, object arrays of ``fractions.Fraction`` for the rationals.  Pivoting
always takes the first nonzero entry in column order, so every basis produced
here is reproducible from run to run.
"""

import os
from fractions import Fraction

import numpy as np

from ._kernels import rref_mod_p

DEFAULT_PRIME = 32003
_FLOAT_EXACT = 2**53
MAX_PRIME = 2**31


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class Field:
    """Common interface; see :class:`PrimeField` and :class:`RationalField`."""

    name = "field"

    # ---- construction -------------------------------------------------
    def zeros(self, rows, cols):
        raise NotImplementedError

    def asarray(self, data):
        raise NotImplementedError

    def eye(self, n):
        m = self.zeros(n, n)
        for i in range(n):
            m[i, i] = self.one
        return m

    def scalar(self, x):
        raise NotImplementedError

    # ---- arithmetic ---------------------------------------------------
    def matmul(self, a, b):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def scale(self, c, a):
        raise NotImplementedError

    def inv_scalar(self, x):
        raise NotImplementedError

    def is_zero(self, a):
        return not np.any(a != 0)

    def equal(self, a, b):
        return a.shape == b.shape and not np.any(a != b)

    def random_matrix(self, rng, rows, cols):
        raise NotImplementedError

    # ---- elimination --------------------------------------------------
    def _rref_inplace(self, a, ncols_pivot):
        raise NotImplementedError

    def rref(self, m):
        """Return (rank, reduced row echelon form, pivot columns)."""
        a = self.asarray(m).copy()
        if a.ndim != 2:
            raise ValueError("rref expects a 2-d matrix")
        rank, piv = self._rref_inplace(a, a.shape[1])
        return rank, a, [int(c) for c in piv]

    def rref_transform(self, m):
        """Like :meth:`rref` but also returns an invertible T with T @ m = R."""
        a = self.asarray(m)
        rows, cols = a.shape
        aug = np.concatenate([a, self.eye(rows)], axis=1) if rows else a.copy()
        rank, piv = self._rref_inplace(aug, cols)
        return rank, aug[:, :cols].copy(), [int(c) for c in piv], aug[:, cols:].copy()

    def rank(self, m):
        a = self.asarray(m)
        if a.size == 0:
            return 0
        return self.rref(a)[0]

    def kernel(self, m):
        """Columns spanning {x : m x = 0}; shape (cols, cols - rank)."""
        return self.kernel_with_free(m)[0]

    def kernel_with_free(self, m):
        """Kernel basis K together with the rows ``free`` where K is the identity.

        Any x in the kernel equals K @ x[free].
        """
        a = self.asarray(m)
        rows, cols = a.shape
        if rows == 0:
            return self.eye(cols), list(range(cols))
        rank, r, piv = self.rref(a)
        pivset = set(piv)
        free = [c for c in range(cols) if c not in pivset]
        k = self.zeros(cols, len(free))
        if free:
            cols_j = np.arange(len(free))
            k[free, cols_j] = self.one
            if piv:
                k[np.ix_(piv, cols_j)] = self.neg(r[: len(piv)][:, free])
        return k, free

    def solve(self, m, b):
        """Some x with m x = b, or None when the system is inconsistent.

        ``b`` may be a vector or a matrix of right-hand sides (then every
        column must be solvable).  A shape mismatch raises ValueError.
        """
        a = self.asarray(m)
        rhs = self.asarray(b)
        vector = rhs.ndim == 1
        if vector:
            rhs = rhs.reshape(-1, 1)
        if a.ndim != 2 or rhs.shape[0] != a.shape[0]:
            raise ValueError(
                f"dimension mismatch: matrix has {a.shape[0] if a.ndim == 2 else '?'} rows, "
                f"right-hand side has {rhs.shape[0]}"
            )
        rows, cols = a.shape
        if rows == 0:
            x = self.zeros(cols, rhs.shape[1])
            return x[:, 0] if vector else x
        aug = np.concatenate([a, rhs], axis=1)
        rank, piv = self._rref_inplace(aug, cols)
        if rank < rows and not self.is_zero(aug[rank:, cols:]):
            return None
        x = self.zeros(cols, rhs.shape[1])
        for i, pc in enumerate(piv):
            x[pc, :] = aug[i, cols:]
        return x[:, 0] if vector else x

    def inverse(self, m):
        a = self.asarray(m)
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValueError("inverse of a non-square matrix")
        rank, _, _, t = self.rref_transform(a)
        if rank != n:
            raise np.linalg.LinAlgError("matrix is singular")
        return t

    def independent_columns(self, m):
        """Indices of the first maximal independent subset of columns."""
        a = self.asarray(m)
        if a.shape[0] == 0:
            return []
        return self.rref(a)[2]

    def extend_columns(self, span, cand):
        """Indices of columns of ``cand`` that extend the column span of ``span``.

        Greedy in column order, so the choice is deterministic.
        """
        s = self.asarray(span)
        c = self.asarray(cand)
        if c.shape[1] == 0:
            return []
        if s.shape[1] == 0:
            return self.independent_columns(c)
        both = np.concatenate([s, c], axis=1)
        k = s.shape[1]
        return [j - k for j in self.independent_columns(both) if j >= k]

    def column_space(self, m):
        a = self.asarray(m)
        return a[:, self.independent_columns(a)] if a.shape[1] else a


class PrimeField(Field):
    """Z/p with canonical residues stored as int64."""

    def __init__(self, p=DEFAULT_PRIME):
        p = int(p)
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p >= MAX_PRIME:
            raise ValueError(f"prime {p} too large (must be < 2^31)")
        self.p = p
        self.one = 1
        self.dtype = np.int64
        self.name = f"GF({p})"
        # largest inner dimension whose dot products stay inside int64
        self._chunk = max(1, (2**63 - 1) // max(1, (p - 1) ** 2))

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def spec(self):
        return self.p

    def zeros(self, rows, cols):
        return np.zeros((rows, cols), dtype=np.int64)

    def asarray(self, data):
        if isinstance(data, np.ndarray) and data.dtype == np.int64:
            if data.size and (data.min() < 0 or data.max() >= self.p):
                return data % self.p
            return data.copy()
        if isinstance(data, np.ndarray) and data.dtype == object:
            return np.vectorize(self.scalar, otypes=[np.int64])(data) if data.size else data.astype(np.int64)
        return np.asarray(data, dtype=np.int64) % self.p

    def scalar(self, x):
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def matmul(self, a, b):
        k = a.shape[1]
        if k * (self.p - 1) ** 2 < _FLOAT_EXACT:
            # every partial sum is an integer below 2^53, so BLAS in float64 is exact
            prod = a.astype(np.float64) @ b.astype(np.float64)
            return prod.astype(np.int64) % self.p
        if k <= self._chunk:
            return (a @ b) % self.p
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for s in range(0, k, self._chunk):
            out = (out + (a[:, s : s + self._chunk] @ b[s : s + self._chunk]) % self.p) % self.p
        return out

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def scale(self, c, a):
        return (self.scalar(c) * a) % self.p

    def inv_scalar(self, x):
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, self.p - 2, self.p)

    def random_matrix(self, rng, rows, cols):
        return rng.integers(0, self.p, size=(rows, cols), dtype=np.int64)

    def to_int(self, x):
        """Symmetric representative, handy for printing."""
        x = int(x) % self.p
        return x - self.p if x > self.p // 2 else x

    def _rref_inplace(self, a, ncols_pivot):
        return rref_mod_p(a, self.p, ncols_pivot)


class RationalField(Field):
    """Q with entries stored as Fractions in object arrays."""

    def __init__(self):
        self.one = Fraction(1)
        self.dtype = object
        self.name = "QQ"

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def spec(self):
        return "rational"

    def zeros(self, rows, cols):
        m = np.empty((rows, cols), dtype=object)
        m.fill(Fraction(0))
        return m

    def asarray(self, data):
        arr = np.asarray(data, dtype=object)
        out = np.empty(arr.shape, dtype=object)
        for idx, v in np.ndenumerate(arr):
            out[idx] = Fraction(v)
        return out

    def scalar(self, x):
        return Fraction(x)

    def matmul(self, a, b):
        if a.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        return np.dot(a, b)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def scale(self, c, a):
        return Fraction(c) * a

    def inv_scalar(self, x):
        x = Fraction(x)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / x

    def random_matrix(self, rng, rows, cols):
        return self.asarray(rng.integers(-3, 4, size=(rows, cols)))

    def to_int(self, x):
        return x

    def _rref_inplace(self, a, ncols_pivot):
        rows, cols = a.shape
        pivots = []
        r = 0
        for c in range(ncols_pivot):
            if r == rows:
                break
            nz = [i for i in range(r, rows) if a[i, c] != 0]
            if not nz:
                continue
            i = nz[0]
            if i != r:
                a[[r, i]] = a[[i, r]]
            a[r, c:] = a[r, c:] / a[r, c]
            for i in range(rows):
                if i != r and a[i, c] != 0:
                    a[i, c:] = a[i, c:] - a[i, c] * a[r, c:]
            pivots.append(c)
            r += 1
        return r, pivots


QQ = RationalField()


def make_field(spec=None):
    """Field from a user spec: a prime, ``"rational"``/``"QQ"``, or None.

    ``None`` means the default prime, overridable through ``BGGTATE_PRIME``.
    """
    if isinstance(spec, Field):
        return spec
    if spec is None:
        return PrimeField(int(os.environ.get("BGGTATE_PRIME", DEFAULT_PRIME)))
    if isinstance(spec, str):
        if spec.strip().lower() in ("rational", "qq", "q"):
            return QQ
        return PrimeField(int(spec))
    return PrimeField(int(spec))


# module-level spellings of the core operations


def rref(m, field):
    return field.rref(m)


def kernel_basis(m, field):
    return field.kernel(m)


def solve(m, b, field):
    return field.solve(m, b)


def rank(m, field):
    return field.rank(m)
