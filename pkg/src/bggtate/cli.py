"""Batch command-line front end.

Input is a JSON document describing the ring, named S-modules, named
exterior-algebra modules and named complexes of exterior modules.  Every
command prints a plain-text table to stdout and, with ``--out``, writes the
same numbers as JSON.
"""

import argparse
import json
import logging
import re
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

import yaml

from . import bgg, perturb, sheaf, tate
from .exactlin import make_field
from .homalg import ModuleComplex, ModulePresentation, hilbert_data, minimal_free_resolution
from .rings import (
    EXTERIOR,
    LambdaModule,
    RingSpec,
    contraction_module,
    exterior_algebra_module,
    residue_field_module,
)

log = logging.getLogger("bggtate")

EXIT_OK, EXIT_COMPUTE, EXIT_INPUT = 0, 1, 2

COMMANDS = (
    "resolve",
    "betti",
    "hilbert",
    "ext",
    "cohomology-table",
    "split-check",
    "horrocks-resolution",
    "bgg-f",
    "bgg-g",
    "minimalize",
    "tate",
    "strands",
    "ht",
    "em-fixture",
)


class InputError(Exception):
    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self):
        if self.line is None:
            return f"input error: {self.message}"
        return f"input error at line {self.line}, column {self.column}: {self.message}"


# ---------------------------------------------------------------------------
# input documents


class _Positions:
    """JSON path -> (line, column), from the YAML node tree of the same text."""

    def __init__(self, text):
        self.table = {}
        try:
            root = yaml.compose(text)
        except yaml.YAMLError:
            root = None
        if root is not None:
            self._walk(root, ())

    def _walk(self, node, path):
        self.table[path] = (node.start_mark.line + 1, node.start_mark.column + 1)
        if isinstance(node, yaml.MappingNode):
            for k, v in node.value:
                self._walk(v, path + (k.value,))
        elif isinstance(node, yaml.SequenceNode):
            for i, v in enumerate(node.value):
                self._walk(v, path + (i,))

    def at(self, path):
        path = tuple(path)
        while path and path not in self.table:
            path = path[:-1]
        return self.table.get(path, (1, 1))


@dataclass
class InputDocument:
    n: int
    field_spec: object
    modules: dict = field(default_factory=dict)
    lambda_modules: dict = field(default_factory=dict)
    complexes: dict = field(default_factory=dict)

    def to_json(self):
        out = {"ring": {"n": self.n}}
        if self.field_spec is not None:
            out["ring"]["field"] = self.field_spec
        if self.modules:
            out["modules"] = self.modules
        if self.lambda_modules:
            out["lambda_modules"] = self.lambda_modules
        if self.complexes:
            out["complexes"] = self.complexes
        return out

    # -- realisations --------------------------------------------------------
    def ring(self, prime=None):
        spec = prime if prime is not None else self.field_spec
        return RingSpec(self.n, make_field(spec))

    def module(self, name, ring):
        if name not in self.modules:
            raise InputError(f"unknown module {name!r}")
        return module_from_entry(self.modules[name], ring)

    def lambda_module(self, name, ring):
        if name not in self.lambda_modules:
            raise InputError(f"unknown exterior module {name!r}")
        return lambda_module_from_entry(self.lambda_modules[name], ring.with_kind(EXTERIOR))

    def complex(self, name, ring):
        L = ring.with_kind(EXTERIOR)
        if name in self.complexes:
            entry = self.complexes[name]
            terms = {int(p): self.lambda_module(m, ring) for p, m in entry["terms"].items()}
            maps = {}
            for mp in entry.get("maps", []):
                maps.setdefault(int(mp["position"]), {})[int(mp["degree"])] = _matrix(mp["matrix"], L.field)
            try:
                return ModuleComplex(L, terms, maps)
            except (AssertionError, ValueError) as exc:
                raise InputError(f"complex {name!r}: {exc}") from exc
        if name in self.lambda_modules:
            return ModuleComplex(L, {0: self.lambda_module(name, ring)}, {})
        raise InputError(f"unknown complex {name!r}")


def _coeff(c, F):
    if isinstance(c, str):
        c = Fraction(c)
    return F.scalar(c)


def _matrix(rows, F):
    if not rows:
        return F.zeros(0, 0)
    return F.asarray([[_coeff(c, F) for c in r] for r in rows])


def module_from_entry(entry, ring):
    gens = entry["gens"]
    rels = []
    for col in entry.get("rels", []):
        rel = {}
        for j, poly in enumerate(col):
            terms = {}
            for mono, c in poly:
                key = tuple(int(x) for x in mono)
                terms[key] = terms.get(key, 0) + (Fraction(c) if isinstance(c, str) else c)
            if terms:
                rel[j] = terms
        rels.append(rel)
    return ModulePresentation.from_generators(ring, gens, rels)


def lambda_module_from_entry(entry, L):
    if "builtin" in entry:
        kind = entry["builtin"]
        N = {
            "exterior_algebra": exterior_algebra_module,
            "residue_field": residue_field_module,
            "contraction": contraction_module,
        }[kind](L)
        return N.twist(int(entry.get("twist", 0)))
    dims = {int(d): int(k) for d, k in entry["dims"].items()}
    action = {}
    for a in entry.get("action", []):
        action[(int(a["var"]), int(a["degree"]))] = _matrix(a["matrix"], L.field)
    return LambdaModule(L, dims, action)


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


def _is_prime(p):
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def _check_coeff(c, is_qq, err, path):
    if _is_int(c):
        return
    if isinstance(c, str) and is_qq:
        try:
            Fraction(c)
            return
        except ValueError:
            pass
    err(path, f"invalid coefficient {c!r}")


def parse_input(text):
    """Parse and validate an input document; errors carry line and column."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, exc.lineno, exc.colno) from exc
    pos = _Positions(text)

    def err(path, msg):
        line, col = pos.at(path)
        raise InputError(msg, line, col)

    if not isinstance(data, dict):
        err((), "document must be an object")
    ring = data.get("ring")
    if not isinstance(ring, dict):
        err(("ring",) if "ring" in data else (), "missing ring description")
    n = ring.get("n")
    if not _is_int(n) or n < 1:
        err(("ring", "n"), "ring.n must be an integer >= 1")
    fs = ring.get("field", ring.get("p"))
    fkey = "field" if "field" in ring else "p"
    if fs is None:
        pass
    elif isinstance(fs, str):
        if fs.strip().lower() not in ("qq", "q", "rational"):
            err(("ring", fkey), f"bad field spec {fs!r}")
        fs = "QQ"
    elif not _is_int(fs) or not _is_prime(fs):
        err(("ring", fkey), f"bad field spec {fs!r}: expected a prime or \"QQ\"")
    is_qq = fs == "QQ"
    nv = n + 1
    modules = data.get("modules", {})
    if not isinstance(modules, dict):
        err(("modules",), "modules must be an object")
    for name, m in modules.items():
        base = ("modules", name)
        if not isinstance(m, dict) or not isinstance(m.get("gens"), list):
            err(base, f"module {name!r} needs a list of generator degrees")
        gens = m["gens"]
        for k, g in enumerate(gens):
            if not _is_int(g):
                err(base + ("gens", k), "generator degrees must be integers")
        rels = m.get("rels", [])
        if not isinstance(rels, list):
            err(base + ("rels",), "rels must be a list of columns")
        for r, col in enumerate(rels):
            cpath = base + ("rels", r)
            if not isinstance(col, list) or len(col) != len(gens):
                err(cpath, f"relation {r} must have one polynomial per generator ({len(gens)})")
            deg = None
            for j, poly in enumerate(col):
                if not isinstance(poly, list):
                    err(cpath + (j,), "malformed polynomial: expected a list of [exponents, coefficient]")
                for t, term in enumerate(poly):
                    tpath = cpath + (j, t)
                    if not isinstance(term, list) or len(term) != 2 or not isinstance(term[0], list):
                        err(tpath, "malformed polynomial term: expected [exponents, coefficient]")
                    mono, c = term
                    if len(mono) != nv:
                        err(tpath + (0,), f"exponent vector has length {len(mono)}, expected {nv}")
                    if not all(_is_int(x) and x >= 0 for x in mono):
                        err(tpath + (0,), "exponents must be nonnegative integers")
                    _check_coeff(c, is_qq, err, tpath + (1,))
                    e = gens[j] + sum(mono)
                    if deg is not None and e != deg:
                        err(tpath, f"degree mismatch: term has degree {e}, relation has degree {deg}")
                    deg = e
    lmods = data.get("lambda_modules", {})
    if not isinstance(lmods, dict):
        err(("lambda_modules",), "lambda_modules must be an object")
    for name, m in lmods.items():
        base = ("lambda_modules", name)
        if not isinstance(m, dict):
            err(base, "exterior module must be an object")
        if "builtin" in m:
            if m["builtin"] not in ("exterior_algebra", "residue_field", "contraction"):
                err(base + ("builtin",), f"unknown builtin {m['builtin']!r}")
            if not _is_int(m.get("twist", 0)):
                err(base + ("twist",), "twist must be an integer")
            continue
        dims = m.get("dims")
        if not isinstance(dims, dict):
            err(base, "exterior module needs dims")
        for d, k in dims.items():
            if not re.fullmatch(r"-?\d+", d) or not _is_int(k) or k < 0:
                err(base + ("dims", d), "dims must map integer degrees to nonnegative sizes")
        for a_i, a in enumerate(m.get("action", [])):
            apath = base + ("action", a_i)
            if not isinstance(a, dict) or not all(key in a for key in ("var", "degree", "matrix")):
                err(apath, "action entries need var, degree and matrix")
            if not _is_int(a["var"]) or not 0 <= a["var"] <= n:
                err(apath + ("var",), f"variable index must lie in 0..{n}")
            d = a["degree"]
            rows = dims.get(str(d + 1), 0)
            cols = dims.get(str(d), 0)
            mat = a["matrix"]
            if not isinstance(mat, list) or len(mat) != rows or any(not isinstance(r, list) or len(r) != cols for r in mat):
                err(apath + ("matrix",), f"matrix must be {rows} x {cols}")
            for r_i, r in enumerate(mat):
                for c_i, c in enumerate(r):
                    _check_coeff(c, is_qq, err, apath + ("matrix", r_i, c_i))
    cpx = data.get("complexes", {})
    if not isinstance(cpx, dict):
        err(("complexes",), "complexes must be an object")
    for name, c in cpx.items():
        base = ("complexes", name)
        if not isinstance(c, dict) or not isinstance(c.get("terms"), dict):
            err(base, "complex needs terms")
        for p, mname in c["terms"].items():
            if not re.fullmatch(r"-?\d+", p):
                err(base + ("terms", p), "positions must be integers")
            if mname not in lmods:
                err(base + ("terms", p), f"unknown exterior module {mname!r}")
        for k, mp in enumerate(c.get("maps", [])):
            if not isinstance(mp, dict) or not all(key in mp for key in ("position", "degree", "matrix")):
                err(base + ("maps", k), "maps need position, degree and matrix")
    doc = InputDocument(n, fs, modules, lmods, cpx)
    # realise everything once so that algebraic problems surface as input errors
    R = doc.ring()
    for name in modules:
        try:
            doc.module(name, R)
        except ValueError as exc:
            err(("modules", name), str(exc))
    for name in lmods:
        try:
            doc.lambda_module(name, R)
        except (AssertionError, ValueError) as exc:
            err(("lambda_modules", name), f"exterior module {name!r}: {exc}")
    for name in cpx:
        try:
            doc.complex(name, R)
        except InputError as exc:
            line, col = pos.at(("complexes", name))
            raise InputError(exc.message, line, col) from exc
    return doc


def serialize(doc):
    return json.dumps(doc.to_json(), indent=2, sort_keys=True) + "\n"


def parse_window(s):
    m = re.fullmatch(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*", s or "")
    if not m:
        raise InputError(f"bad window {s!r}: expected lo..hi")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise InputError(f"bad window {s!r}: lo must not exceed hi")
    return lo, hi


# ---------------------------------------------------------------------------
# text rendering


def betti_text(bj, title=None):
    pos = bj["positions"]
    rows = bj["rows"]
    lines = [title] if title else []
    if not rows:
        lines.append("(zero complex)")
        return "\n".join(lines) + "\n"
    cells = [[str(v) if v else "." for v in rows[g]] for g in rows]
    width = max([len(str(p)) for p in pos] + [len(c) for r in cells for c in r])
    labels = [f"{g}:" for g in rows]
    lw = max(len(x) for x in labels + ["deg"])
    lines.append("deg".ljust(lw) + " " + " ".join(str(p).rjust(width) for p in pos))
    for lab, r in zip(labels, cells):
        lines.append(lab.ljust(lw) + " " + " ".join(c.rjust(width) for c in r))
    return "\n".join(lines) + "\n"


def counts_text(counts, n, lo, hi):
    """Strand counts c_{p,i}: rows i = n..0, columns p."""
    cols = list(range(lo, hi + 1))
    body = {i: [str(counts.get(str(p), {}).get(str(i), 0)) for p in cols] for i in range(n + 1)}
    width = max([len(str(p)) for p in cols] + [len(c) for r in body.values() for c in r])
    lw = len(f"c{n}")
    lines = ["".ljust(lw) + " " + " ".join(str(p).rjust(width) for p in cols)]
    for i in range(n, -1, -1):
        lines.append(f"c{i}".ljust(lw) + " " + " ".join(c.rjust(width) for c in body[i]))
    return "\n".join(lines) + "\n"


def module_entry(M):
    """An S-module presentation in the input-document format."""
    F = M.field
    to_int = getattr(F, "to_int", None)

    def scal(x):
        return int(to_int(x)) if to_int is not None and hasattr(F, "p") else str(x)

    gens = M.gens.generator_degrees()
    rels = []
    phi = M.rels
    keys = sorted(phi.coeffs, key=M.ring.sort_key)
    for r in range(phi.source.rank):
        col = []
        for j in range(len(gens)):
            poly = []
            for k in keys:
                c = phi.coeffs[k][j, r]
                if c:
                    poly.append([list(k), scal(c)])
            col.append(poly)
        rels.append(col)
    return {"gens": gens, "rels": rels}


# ---------------------------------------------------------------------------
# commands


def _need(args, what):
    v = getattr(args, what)
    if v is None:
        raise InputError(f"--{what.replace('_', '-')} is required for {args.command}")
    return v


def _window(args):
    return parse_window(_need(args, "window"))


def cmd_resolve(doc, R, args):
    name = _need(args, "module")
    L = minimal_free_resolution(doc.module(name, R)).trimmed()
    out = {"command": "resolve", "module": name, "betti": L.betti_json(), "complex": L.to_json()}
    return betti_text(out["betti"], f"minimal free resolution of {name}"), out


def cmd_betti(doc, R, args):
    name = _need(args, "module")
    L = minimal_free_resolution(doc.module(name, R)).trimmed()
    out = {"command": "betti", "module": name, "betti": L.betti_json()}
    return betti_text(out["betti"], f"Betti table of {name}"), out


def cmd_hilbert(doc, R, args):
    name = _need(args, "module")
    H = hilbert_data(doc.module(name, R))
    out = {"command": "hilbert", "module": name, "hilbert": H.to_json(), "series": H.series_string()}
    txt = (
        f"Hilbert series: {out['series']}\n"
        f"Krull dimension: {H.krull_dim}\n"
        f"Hilbert polynomial coefficients (constant first): {', '.join(out['hilbert']['hilbert_polynomial']) or '0'}\n"
    )
    return txt, out


def cmd_ext(doc, R, args):
    from .homalg import krull_dimension

    name = _need(args, "module")
    ext = sheaf.ext_presentations(doc.module(name, R))
    rows = []
    lines = [f"Ext^j(M, w_S) for {name}"]
    for j in sorted(ext):
        P = ext[j]
        gd = P.gens.generator_degrees()
        kd = krull_dimension(P) if gd else -1
        rows.append({"index": j, "generator_degrees": gd, "relations": P.rels.source.rank, "krull_dim": kd})
        lines.append(f"Ext^{j}: generators in degrees {gd}, {P.rels.source.rank} relations, dimension {kd}")
    out = {"command": "ext", "module": name, "ext": rows}
    return "\n".join(lines) + "\n", out


def cmd_cohomology_table(doc, R, args):
    name = _need(args, "module")
    lo, hi = _window(args)
    T = sheaf.cohomology_table(doc.module(name, R), lo, hi)
    out = {"command": "cohomology-table", "module": name, "table": T.to_json()}
    return T.to_text(), out


def cmd_split_check(doc, R, args):
    name = _need(args, "module")
    v = sheaf.horrocks_split_check(doc.module(name, R))
    out = {"command": "split-check", "module": name, "verdict": v.to_json(), "text": v.describe()}
    return v.describe() + "\n", out


def cmd_horrocks_resolution(doc, R, args):
    name = _need(args, "module")
    K = sheaf.horrocks_resolution(doc.module(name, R))
    rep = sheaf.is_horrocks_complex(K)
    Kt = K.trimmed()
    out = {
        "command": "horrocks-resolution",
        "module": name,
        "betti": Kt.betti_json(),
        "horrocks": rep.to_json(),
        "complex": Kt.to_json(),
    }
    txt = betti_text(out["betti"], f"Horrocks resolution of {name}")
    txt += "conditions: " + ", ".join(f"({k}) {'holds' if v else 'fails'}" for k, v in sorted(rep.verdicts.items())) + "\n"
    return txt, out


def cmd_bgg_f(doc, R, args):
    name = _need(args, "complex")
    C = bgg.F(doc.complex(name, R)).trimmed()
    out = {"command": "bgg-f", "input": name, "betti": C.betti_json(), "complex": C.to_json()}
    return betti_text(out["betti"], f"F({name})"), out


def cmd_bgg_g(doc, R, args):
    name = _need(args, "module")
    lo, hi = _window(args)
    W = doc.module(name, R).window(lo, hi)
    C = bgg.G(W, exact_below=False, exact_above=False)
    out = {"command": "bgg-g", "module": name, "window": [lo, hi], "betti": C.betti_json(), "complex": C.to_json()}
    return betti_text(out["betti"], f"G({name}) on degrees {lo}..{hi}"), out


def cmd_minimalize(doc, R, args):
    name = _need(args, "complex")
    fm = perturb.minimalize_bgg(doc.complex(name, R))
    Y = fm.complex
    ps = sorted({lab[0] for labs in fm.labels.values() for lab in labs})
    filt = {str(m): {str(k): v for k, v in fm.filtration_dims(m).items() if v} for m in ps}
    out = {
        "command": "minimalize",
        "input": name,
        "betti": Y.betti_json(),
        "linear_betti": fm.linear_part().betti_json(),
        "minimal": Y.is_minimal(),
        "filtered": fm.is_filtered(),
        "filtration": filt,
    }
    txt = betti_text(out["betti"], f"minimal model of F({name})")
    txt += f"minimal: {out['minimal']}, filtered: {out['filtered']}\n"
    for m in ps:
        txt += f"F_{m}: " + ", ".join(f"{k}:{v}" for k, v in filt[str(m)].items()) + "\n"
    return txt, out


def cmd_tate(doc, R, args):
    name = _need(args, "module")
    lo, hi = _window(args)
    T = tate.tate_window(doc.module(name, R), lo, hi)
    tj = T.to_json()
    out = {"command": "tate", "module": name, "window": [lo, hi], "tate": tj, "exact": T.is_exact()}
    txt = f"Tate window {lo}..{hi} of {name} (tail at {T.m})\n" + counts_text(tj["strands"], T.n, lo, hi)
    txt += f"exact at interior positions: {out['exact']}\n"
    return txt, out


def cmd_strands(doc, R, args):
    name = _need(args, "module")
    lo, hi = _window(args)
    T = tate.tate_window(doc.module(name, R), lo, hi)
    tab = tate.strand_table(T)
    out = {"command": "strands", "module": name, "window": [lo, hi], "table": tab.to_json()}
    return tab.to_text(), out


def _ht_window(M, n):
    """A window holding every nonzero middle-cohomology strand, when they are finite."""
    from .homalg import krull_dimension

    ext = sheaf.ext_presentations(M)
    ps = []
    for i in range(1, n):
        P = ext[n - i]
        if not P.gens.rank:
            continue
        if krull_dimension(P) > 0:
            raise InputError("middle cohomology is infinite; pass --window explicitly")
        H = hilbert_data(P)
        # Ext^{n-i} in degree e gives h^i(F(-e)), which sits at position i - e
        ps += [i - (k + H.shift) for k, c in enumerate(H.reduced) if c]
    if not ps:
        return -1, 1
    return min(ps) - 1, max(ps) + 1


def cmd_ht(doc, R, args):
    name = _need(args, "module")
    M = doc.module(name, R)
    if args.window is not None:
        lo, hi = parse_window(args.window)
    else:
        lo, hi = _ht_window(M, R.n)
    T = tate.tate_window(M, lo, hi)
    H = tate.ht_complex(T, M)
    cond = tate.ht_conditions(H)
    cj = {
        "condition_1": cond["condition_1"],
        "condition_2": cond["condition_2"],
        "strand_dual_dims": {str(k): v for k, v in cond["strand_dual_dims"].items()},
    }
    out = {"command": "ht", "module": name, "window": [lo, hi], "ht": H.to_json(), "conditions": cj}
    txt = betti_text(out["ht"]["betti"], f"Horrocks-Trautmann complex of {name} on {lo}..{hi}")
    txt += f"partial: {H.partial}; condition (1): {cj['condition_1']}; condition (2): {cj['condition_2']}\n"
    return txt, out


def cmd_em_fixture(doc, R, args):
    name = _need(args, "module")
    i = _need(args, "i")
    E = doc.module(name, R)
    M, pred = tate.em_sheaf(tate.EMSpec(E, i))
    if args.window is not None:
        lo, hi = parse_window(args.window)
    else:
        Hd = hilbert_data(E)
        if Hd.krull_dim > 0:
            raise InputError("E has positive dimension; pass --window for the predicted counts")
        degs = [k + Hd.shift for k, c in enumerate(Hd.reduced) if c] or [0]
        # dim H_e = dim E_{-e-n-1} at position p = e + i
        ps = [-g - R.n - 1 + i for g in degs]
        lo, hi = min(ps), max(ps)
    counts = pred.counts(lo, hi)
    out = {
        "command": "em-fixture",
        "module": name,
        "i": i,
        "M": module_entry(M),
        "prediction": {"window": [lo, hi], "counts": {str(p): c for p, c in counts.items()}},
    }
    txt = f"M: generators in degrees {out['M']['gens']}, {len(out['M']['rels'])} relations\n"
    txt += f"predicted strand {i} of the HT complex on {lo}..{hi}: " + " ".join(str(counts[p]) for p in range(lo, hi + 1)) + "\n"
    return txt, out


DISPATCH = {
    "resolve": cmd_resolve,
    "betti": cmd_betti,
    "hilbert": cmd_hilbert,
    "ext": cmd_ext,
    "cohomology-table": cmd_cohomology_table,
    "split-check": cmd_split_check,
    "horrocks-resolution": cmd_horrocks_resolution,
    "bgg-f": cmd_bgg_f,
    "bgg-g": cmd_bgg_g,
    "minimalize": cmd_minimalize,
    "tate": cmd_tate,
    "strands": cmd_strands,
    "ht": cmd_ht,
    "em-fixture": cmd_em_fixture,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="bggtate", description="BGG transforms, Tate windows and cohomology tables.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("input", help="JSON input document")
    ap.add_argument("--module", help="name of an S-module in the document")
    ap.add_argument("--complex", help="name of an exterior complex or module in the document")
    ap.add_argument("--window", help="lo..hi (positions or degrees, depending on the command)")
    ap.add_argument("--i", type=int, help="cohomological index for em-fixture")
    ap.add_argument("--out", help="write JSON output to this path")
    ap.add_argument("--format", choices=("table", "json"), default="table", help="stdout format")
    ap.add_argument("--prime", type=int, help="override the document's field with this prime")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    return ap


def _normalize_argv(argv):
    """Allow ``--window -4..3``: argparse would read -4..3 as an option."""
    out = []
    it = iter(argv)
    for a in it:
        if a == "--window":
            v = next(it, None)
            out.append(a if v is None else f"--window={v}")
        else:
            out.append(a)
    return out


def run(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    argv = _normalize_argv(list(sys.argv[1:] if argv is None else argv))
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else logging.WARNING)
    try:
        with open(args.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"input error: cannot read {args.input}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    t0 = time.perf_counter()
    try:
        doc = parse_input(text)
        if args.prime is not None and not _is_prime(args.prime):
            raise InputError(f"--prime {args.prime} is not a prime")
        R = doc.ring(args.prime)
        txt, out = DISPATCH[args.command](doc, R, args)
    except InputError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, AssertionError, RuntimeError, ValueError) as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    log.info("%s finished in %.3f s", args.command, time.perf_counter() - t0)
    js = json.dumps(out, indent=2, sort_keys=True) + "\n"
    stdout.write(js if args.format == "json" else txt)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(js)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
