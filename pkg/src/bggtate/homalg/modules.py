"""Finitely presented graded S-modules and finite windows of graded modules."""

import numpy as np

from .free import FreeModule, OpMatrix


class ModulePresentation:
    """coker(rels: F1 -> F0) for free S-modules F0, F1."""

    def __init__(self, rels):
        self.ring = rels.ring
        self.rels = rels
        self.gens = rels.target

    # -- constructors ---------------------------------------------------------
    @classmethod
    def free(cls, ring, twists):
        F0 = FreeModule(ring, twists)
        return cls(OpMatrix.zero(FreeModule(ring, ()), F0))

    @classmethod
    def from_generators(cls, ring, gen_degrees, relations=()):
        """Presentation from generator degrees and relation columns.

        Each relation is a dict {generator index: {exponent tuple: coefficient}}
        and must be homogeneous.
        """
        twists0 = [-g for g in gen_degrees]
        F0 = FreeModule(ring, twists0)
        F = ring.field
        rel_twists = []
        coeffs = {}
        for r, rel in enumerate(relations):
            deg = None
            for j, poly in rel.items():
                for mono, c in poly.items():
                    if F.scalar(c) == 0:
                        continue
                    e = gen_degrees[j] + sum(mono)
                    if deg is not None and deg != e:
                        raise ValueError(f"relation {r} is not homogeneous")
                    deg = e
            rel_twists.append(-(deg if deg is not None else 0))
        F1 = FreeModule(ring, rel_twists)
        for r, rel in enumerate(relations):
            for j, poly in rel.items():
                for mono, c in poly.items():
                    key = tuple(int(x) for x in mono)
                    if key not in coeffs:
                        coeffs[key] = F.zeros(F0.rank, F1.rank)
                    coeffs[key][j, r] = F.add(coeffs[key][j, r], F.scalar(c))
        return cls(OpMatrix(F1, F0, coeffs))

    @classmethod
    def cokernel(cls, phi):
        return cls(phi)

    def __repr__(self):
        return f"ModulePresentation(gens={self.gens.generator_degrees()}, relations={self.rels.source.rank})"

    @property
    def field(self):
        return self.ring.field

    @property
    def n(self):
        return self.ring.n

    # -- degree pieces ----------------------------------------------------------
    def dim(self, d):
        full = self.gens.dim(d)
        if not full or not self.rels.source.rank:
            return full
        return full - self.field.rank(self.rels.degree_matrix(d))

    def hilbert_function(self, degrees):
        return {d: self.dim(d) for d in degrees}

    def piece(self, d):
        """(complement basis E, projection P) for M_d = F0_d / im.

        E has standard basis columns spanning a complement of the relations;
        P maps F0_d onto the coordinates of that complement.
        """
        F = self.field
        N = self.gens.dim(d)
        if not self.rels.source.rank:
            return F.eye(N), F.eye(N)
        R = self.rels.degree_matrix(d)
        B = F.column_space(R)
        eye = F.eye(N)
        J = F.extend_columns(B, eye)
        E = eye[:, J]
        if not J:
            return E, F.zeros(0, N)
        full = np.concatenate([B, E], axis=1)
        P = F.inverse(full)[B.shape[1] :, :]
        return E, P

    def action(self, i, d):
        """Multiplication by X_i from M_d to M_{d+1} in the quotient bases."""
        F = self.field
        E, _ = self.piece(d)
        _, P = self.piece(d + 1)
        X = self.gens.action_matrices(d + 1)[i]
        return F.matmul(P, F.matmul(X, E))

    def window(self, lo, hi):
        """Degrees lo..hi as a :class:`SModuleWindow`."""
        F = self.field
        pieces = {d: self.piece(d) for d in range(lo, hi + 2)}
        dims = {d: pieces[d][0].shape[1] for d in range(lo, hi + 1)}
        action = {}
        for d in range(lo, hi):
            E = pieces[d][0]
            P = pieces[d + 1][1]
            mats = self.gens.action_matrices(d + 1)
            for i in range(self.n + 1):
                action[(i, d)] = F.matmul(P, F.matmul(mats[i], E))
        return SModuleWindow(self.ring, dims, action, lo, hi)

    # -- structure -------------------------------------------------------------
    def twist(self, a):
        src = self.rels.source.twist(a)
        tgt = self.rels.target.twist(a)
        return ModulePresentation(self.rels.with_modules(src, tgt))

    def direct_sum(self, other):
        from .free import block_matrix

        phi = block_matrix(
            {(0, 0): self.rels, (1, 1): other.rels},
            [self.rels.source, other.rels.source],
            [self.gens, other.gens],
        )
        return ModulePresentation(phi)

    def minimal(self):
        """Remove generators killed by unit relations, then redundant relations."""
        from .resolve import minimal_presentation

        return minimal_presentation(self)

    def is_zero(self):
        """Every generator lies in the image of the relations."""
        F = self.field
        for j in range(self.gens.rank):
            d = self.gens.generator_degree(j)
            offs = self.gens.offsets(d)
            v = F.zeros(self.gens.dim(d), 1)
            v[offs[j], 0] = 1
            if not self.rels.source.rank:
                return False
            if F.solve(self.rels.degree_matrix(d), v) is None:
                return False
        return True

    def generator_degrees(self):
        return self.gens.generator_degrees()


class SModuleWindow:
    """Graded S-module data on degrees lo..hi: dims and X_i action matrices.

    ``action[(i, d)]`` maps degree d to degree d+1.  Data outside the window is
    treated as zero, which is how finite-length modules are stored.
    """

    def __init__(self, ring, dims, action, lo=None, hi=None, check=True):
        self.ring = ring
        self.dims = {int(d): int(v) for d, v in dims.items()}
        if lo is None:
            lo = min(self.dims) if self.dims else 0
        if hi is None:
            hi = max(self.dims) if self.dims else 0
        self.lo, self.hi = lo, hi
        F = ring.field
        self.action = {}
        for d in range(lo, hi + 1):
            for i in range(ring.n + 1):
                m = action.get((i, d))
                shape = (self.dim(d + 1), self.dim(d))
                self.action[(i, d)] = F.zeros(*shape) if m is None else F.asarray(m)
                if self.action[(i, d)].shape != shape:
                    raise ValueError(f"action of X_{i} in degree {d} has the wrong shape")
        if check:
            self.validate()

    @property
    def n(self):
        return self.ring.n

    @property
    def field(self):
        return self.ring.field

    def dim(self, d):
        if d < self.lo or d > self.hi:
            return 0
        return self.dims.get(d, 0)

    def degrees(self):
        return [d for d in range(self.lo, self.hi + 1) if self.dim(d)]

    def act(self, i, d):
        if (i, d) in self.action:
            return self.action[(i, d)]
        return self.field.zeros(self.dim(d + 1), self.dim(d))

    def validate(self):
        F = self.field
        for d in range(self.lo, self.hi):
            for i in range(self.n + 1):
                for j in range(i + 1, self.n + 1):
                    a = F.matmul(self.act(j, d + 1), self.act(i, d))
                    b = F.matmul(self.act(i, d + 1), self.act(j, d))
                    if not F.equal(a, b):
                        raise AssertionError(f"X_{i} and X_{j} do not commute in degree {d}")

    def twist(self, a):
        """M(a)_d = M_{d+a}."""
        dims = {d - a: v for d, v in self.dims.items()}
        action = {(i, d - a): m for (i, d), m in self.action.items()}
        return SModuleWindow(self.ring, dims, action, self.lo - a, self.hi - a, check=False)

    def dual(self):
        """Graded k-dual: degree p holds (M_{-p})*, X_i acts by the transpose."""
        dims = {-d: v for d, v in self.dims.items()}
        action = {}
        for p in range(-self.hi, -self.lo + 1):
            for i in range(self.n + 1):
                action[(i, p)] = self.act(i, -p - 1).T.copy()
        return SModuleWindow(self.ring, dims, action, -self.hi, -self.lo, check=False)

    def direct_sum(self, other):
        F = self.field
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        dims = {d: self.dim(d) + other.dim(d) for d in range(lo, hi + 1)}
        action = {}
        for d in range(lo, hi + 1):
            for i in range(self.n + 1):
                m = F.zeros(dims.get(d + 1, 0) if d + 1 <= hi else 0, dims[d])
                a, b = self.act(i, d), other.act(i, d)
                m[: a.shape[0], : a.shape[1]] = a
                m[a.shape[0] :, a.shape[1] :] = b
                action[(i, d)] = m
        return SModuleWindow(self.ring, dims, action, lo, hi, check=False)

    def total_dim(self):
        return sum(self.dim(d) for d in range(self.lo, self.hi + 1))

    def equals(self, other):
        if self.degrees() != other.degrees():
            return False
        if any(self.dim(d) != other.dim(d) for d in self.degrees()):
            return False
        F = self.field
        return all(
            F.equal(self.act(i, d), other.act(i, d)) for d in self.degrees() for i in range(self.n + 1)
        )


def residue_field_window(ring, degree=0):
    return SModuleWindow(ring, {degree: 1}, {}, degree, degree)


def polynomial_window(ring, lo, hi):
    """S itself truncated to degrees lo..hi (lo >= 0)."""
    return ModulePresentation.free(ring, [0]).window(lo, hi)


def random_presentation(ring, rng, max_gens=2, max_rels=2):
    """A random homogeneous presentation with generators in degrees 0..1."""
    from ..rings import sym_monomials

    F = ring.field
    gens = sorted(int(g) for g in rng.integers(0, 2, size=int(rng.integers(1, max_gens + 1))))
    rels = []
    for _ in range(int(rng.integers(0, max_rels + 1))):
        deg = max(gens) + int(rng.integers(1, 3))
        rel = {}
        for j, g in enumerate(gens):
            poly = {}
            for mono in sym_monomials(ring.n + 1, deg - g):
                if rng.integers(0, 3) == 0:
                    poly[mono] = int(F.scalar(int(rng.integers(1, 50))))
            if poly:
                rel[j] = poly
        rels.append(rel)
    return ModulePresentation.from_generators(ring, gens, rels)
