"""Complexes of finite graded modules stored degree by degree.

Used where free-module data is not the natural representation: complexes of
exterior-algebra modules (inputs to F, graded duals of free exterior
complexes) and windows of S-module complexes (inputs to G).
"""

import numpy as np



class ModuleComplex:
    """terms[p] (LambdaModule or SModuleWindow) with maps[p][d]: terms[p]_d -> terms[p+1]_d."""

    def __init__(self, ring, terms, maps=None, lo=None, hi=None, check=True):
        self.ring = ring
        self.terms = dict(terms)
        if lo is None:
            lo = min(self.terms) if self.terms else 0
        if hi is None:
            hi = max(self.terms) if self.terms else 0
        self.lo, self.hi = lo, hi
        self.maps = {}
        for p in range(lo, hi):
            if p not in self.terms or p + 1 not in self.terms:
                continue
            blocks = (maps or {}).get(p, {})
            self.maps[p] = {d: self.field.asarray(m) for d, m in blocks.items()}
        if check:
            self.validate()

    @property
    def field(self):
        return self.ring.field

    def term(self, p):
        return self.terms.get(p)

    def degrees(self):
        out = set()
        for t in self.terms.values():
            out.update(t.degrees())
        return sorted(out)

    def block(self, p, d):
        t0, t1 = self.terms.get(p), self.terms.get(p + 1)
        r = t1.dim(d) if t1 is not None else 0
        c = t0.dim(d) if t0 is not None else 0
        m = self.maps.get(p, {}).get(d)
        if m is None or m.shape != (r, c):
            if m is not None and m.size:
                raise ValueError(f"map at position {p}, degree {d} has shape {m.shape}, expected {(r, c)}")
            return self.field.zeros(r, c)
        return m

    def validate(self):
        F = self.field
        for p in self.maps:
            src, tgt = self.terms[p], self.terms[p + 1]
            for d in self.degrees():
                for i in range(self.ring.n + 1):
                    lhs = F.matmul(self.block(p, d + 1), src.act(i, d))
                    rhs = F.matmul(tgt.act(i, d), self.block(p, d))
                    if not F.equal(lhs, rhs):
                        raise AssertionError(f"differential at {p} is not module linear in degree {d}")
            if p + 1 in self.maps:
                for d in self.degrees():
                    if not F.is_zero(F.matmul(self.block(p + 1, d), self.block(p, d))):
                        raise AssertionError(f"d o d != 0 at {p} in degree {d}")

    def homology_dim(self, p, d):
        F = self.field
        t = self.terms.get(p)
        if t is None or not t.dim(d):
            return 0
        return t.dim(d) - F.rank(self.block(p, d)) - F.rank(self.block(p - 1, d))

    def homology_table(self, p):
        return {d: self.homology_dim(p, d) for d in self.degrees() if self.homology_dim(p, d)}

    def dual(self):
        """Graded dual complex: term p is (term -p)*, d^p = (-1)^{p+1} (d^{-p-1})^T."""
        F = self.field
        terms = {-p: t.dual() for p, t in self.terms.items()}
        maps = {}
        for p in range(-self.hi, -self.lo):
            q = -p - 1
            if q not in self.maps:
                continue
            blocks = {}
            for d, m in self.maps[q].items():
                t = m.T.copy()
                blocks[-d] = F.neg(t) if (p + 1) % 2 else t
            maps[p] = blocks
        return ModuleComplex(self.ring, terms, maps, -self.hi, -self.lo, check=False)

    def translate(self, k):
        F = self.field
        terms = {p - k: t for p, t in self.terms.items()}
        maps = {p - k: {d: (F.neg(m) if k % 2 else m) for d, m in b.items()} for p, b in self.maps.items()}
        return ModuleComplex(self.ring, terms, maps, self.lo - k, self.hi - k, check=False)


def chain_map_space(X, Y, positions=None):
    """Basis of degree-0 chain maps X -> Y commuting with the module actions.

    Returns (unknown layout, kernel basis).  Layout is a list of
    (position, degree, rows, cols) blocks.
    """
    F = X.field
    ring = X.ring
    if positions is None:
        positions = sorted(set(X.terms) | set(Y.terms))
    degrees = sorted(set(X.degrees()) | set(Y.degrees()))
    layout, offsets = [], {}
    off = 0
    for p in positions:
        for d in degrees:
            r = Y.terms[p].dim(d) if p in Y.terms else 0
            c = X.terms[p].dim(d) if p in X.terms else 0
            if r and c:
                offsets[(p, d)] = (off, r, c)
                layout.append((p, d, r, c))
                off += r * c
    nunk = off
    eqs = []

    def var_block(p, d, left=None, right=None, out_shape=None):
        """Rows expressing left @ Phi_{p,d} @ right as a linear map of the unknowns."""
        rows_out, cols_out = out_shape
        mat = F.zeros(rows_out * cols_out, nunk)
        if (p, d) not in offsets:
            return mat
        o, r, c = offsets[(p, d)]
        L = left if left is not None else F.eye(r)
        R = right if right is not None else F.eye(c)
        # vec(L Phi R) = (L kron R^T) vec(Phi) for row-major vec
        mat[:, o : o + r * c] = F.asarray(np.kron(L, R.T)) if L.size and R.size else 0
        return mat

    for p in positions:
        for d in degrees:
            Xp, Yp = X.terms.get(p), Y.terms.get(p)
            xd = Xp.dim(d) if Xp is not None else 0
            yd1 = Yp.dim(d + 1) if Yp is not None else 0
            # module linearity: Phi_{d+1} A^X = A^Y Phi_d
            if xd and yd1:
                for i in range(ring.n + 1):
                    a = var_block(p, d + 1, right=Xp.act(i, d), out_shape=(yd1, xd))
                    b = var_block(p, d, left=Yp.act(i, d), out_shape=(yd1, xd))
                    eqs.append(F.sub(a, b))
            # chain condition: d_Y Phi^p = Phi^{p+1} d_X
            Yn = Y.terms.get(p + 1)
            yn = Yn.dim(d) if Yn is not None else 0
            if xd and yn:
                a = var_block(p, d, left=Y.block(p, d), out_shape=(yn, xd))
                b = var_block(p + 1, d, right=X.block(p, d), out_shape=(yn, xd))
                eqs.append(F.sub(a, b))
    if not nunk:
        return layout, F.zeros(0, 0)
    A = np.concatenate(eqs, axis=0) if eqs else F.zeros(0, nunk)
    return layout, F.kernel(A)


def find_isomorphism(X, Y, rng, attempts=8):
    """A degreewise invertible chain map X -> Y, or None.

    A random element of the solution space is tried a few times; over a large
    prime field a generic element is invertible whenever any element is.
    """
    F = X.field
    for p in set(X.terms) | set(Y.terms):
        for d in set(X.degrees()) | set(Y.degrees()):
            a = X.terms[p].dim(d) if p in X.terms else 0
            b = Y.terms[p].dim(d) if p in Y.terms else 0
            if a != b:
                return None
    layout, K = chain_map_space(X, Y)
    if K.shape[1] == 0:
        return {} if not layout else None
    for _ in range(attempts):
        coeffs = F.random_matrix(rng, K.shape[1], 1)
        vec = F.matmul(K, coeffs)[:, 0]
        maps, off, ok = {}, 0, True
        for p, d, r, c in layout:
            m = vec[off : off + r * c].reshape(r, c)
            off += r * c
            if F.rank(m) != r:
                ok = False
                break
            maps.setdefault(p, {})[d] = m
        if ok:
            return maps
    return None


def free_complex_to_modules(C):
    """A free exterior complex as a ModuleComplex of LambdaModules."""
    from .resolve import free_to_lambda

    terms = {p: free_to_lambda(C.terms[p]) for p in C.positions()}
    maps = {}
    for p in range(C.lo, C.hi):
        degs = set(terms[p].dims) | set(terms[p + 1].dims)
        maps[p] = {d: C.diffs[p].degree_matrix(d) for d in degs}
    return ModuleComplex(C.ring, terms, maps, C.lo, C.hi, check=False)


def free_complex_window(C, lo_deg, hi_deg):
    """A free S-complex restricted to internal degrees lo..hi, as a ModuleComplex."""
    from .modules import ModulePresentation

    terms = {}
    maps = {}
    for p in C.positions():
        terms[p] = ModulePresentation.free(C.ring, C.terms[p].twists).window(lo_deg, hi_deg)
    for p in range(C.lo, C.hi):
        maps[p] = {d: C.diffs[p].degree_matrix(d) for d in range(lo_deg, hi_deg + 1)}
    return ModuleComplex(C.ring, terms, maps, C.lo, C.hi, check=False)
