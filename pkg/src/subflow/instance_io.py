"""Plain-text instance files.

::

    digraph n=4
    vertex 0 s                      # optional label
    arc 0 1 w=1
    family F { 0 1 | 0 1 2 }        # explicit sets, '|' or newlines between them
    family D { builder dicuts }
    family L {
      lattice 0 3 min=0 max=0,1,2 order=1<2
    }
    fn f family=F builder=table
    set 0 1 = 2
    set 0 1 2 = 1
    fn g family=D builder=dicut-slack:1

Blank lines and ``#`` comments are ignored; anything else is an error
carrying its line number.
"""

import re
from dataclasses import dataclass, field
from math import ceil
from fractions import Fraction

from .errors import InputError
from .graph import Digraph, cut_degrees, members, vset
from .setfam import (
    ExplicitFamily,
    LatticeFamily,
    SubmodularOracle,
    WellProvidedFamily,
    all_proper,
    dicut_family,
    empty_family,
    isolated_cut_family,
    singletons_and_complements,
    table_oracle,
)

FAMILY_BUILDERS = ("dicuts", "all-proper", "singletons-complements", "isolated-cuts", "empty")
FN_BUILDERS = ("outdeg-minus", "dicut-slack", "ceil-half-imbalance", "table", "constant")


@dataclass(frozen=True)
class FamilySpec:
    name: str
    kind: str  # explicit | builder | lattice
    sets: tuple = ()
    builder: str = None
    lattices: tuple = ()  # (u, v, lo, hi, relations)


@dataclass(frozen=True)
class FnSpec:
    name: str
    family: str
    builder: str
    param: int = None
    table: tuple = ()  # sorted (mask, value)


@dataclass(frozen=True)
class Instance:
    d: Digraph
    labels: tuple = ()  # (id, label)
    families: tuple = ()
    fns: tuple = ()
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def family_spec(self, name):
        for spec in self.families:
            if spec.name == name:
                return spec
        if name in FAMILY_BUILDERS:
            return FamilySpec(name, "builder", builder=name)
        raise InputError(f"unknown family {name!r}")

    def family(self, name):
        return build_family(self.d, self.family_spec(name))

    def fn_spec(self, name):
        for spec in self.fns:
            if spec.name == name:
                return spec
        raise InputError(f"unknown function {name!r}")

    def oracle(self, name):
        spec = self.fn_spec(name)
        return build_oracle(self.d, self.family(spec.family), spec)


def build_family(d, spec):
    if spec.kind == "explicit":
        return ExplicitFamily(d.n, spec.sets, tag=spec.name)
    if spec.kind == "lattice":
        lat = []
        for u, v, lo, hi, rel in spec.lattices:
            lat.append(((u, v), LatticeFamily.from_relations(d.n, lo, hi, rel)))
        return WellProvidedFamily(d.n, tuple(lat), tag=spec.name)
    return {
        "dicuts": lambda: dicut_family(d),
        "all-proper": lambda: all_proper(d.n),
        "singletons-complements": lambda: singletons_and_complements(d.n),
        "isolated-cuts": lambda: isolated_cut_family(d),
        "empty": lambda: empty_family(d.n),
    }[spec.builder]()


def build_oracle(d, family, spec):
    tag = spec.builder if spec.param is None else f"{spec.builder}:{spec.param}"
    if spec.builder == "table":
        return table_oracle(family, dict(spec.table), spec.name)
    if spec.builder == "outdeg-minus":
        return SubmodularOracle(family, lambda U: cut_degrees(d, U)[0] - spec.param, tag)
    if spec.builder == "dicut-slack":
        return SubmodularOracle(family, lambda U: cut_degrees(d, U)[0] - spec.param, tag)
    if spec.builder == "constant":
        return SubmodularOracle(family, lambda U: spec.param, tag)

    def half(U):
        dout, din = cut_degrees(d, U)
        return ceil(Fraction(dout - din, 2))

    return SubmodularOracle(family, half, tag)


# -- parsing ---------------------------------------------------------------------

def _int(tok, lineno, what="integer"):
    if not re.fullmatch(r"-?\d+", tok):
        raise InputError(f"line {lineno}: expected {what}, got {tok!r}")
    return int(tok)


def _ids(text, lineno, n):
    text = text.strip()
    if text in ("", "-"):
        return 0
    ids = [_int(t, lineno, "vertex id") for t in re.split(r"[,\s]+", text) if t]
    for v in ids:
        _vertex(v, n, lineno)
    return vset(ids)


def _vertex(v, n, lineno):
    if not 0 <= v < n:
        raise InputError(f"line {lineno}: vertex {v} outside 0..{n - 1}")
    return v


def _proper(U, n, lineno):
    if U == 0 or U == (1 << n) - 1:
        raise InputError(f"line {lineno}: sets must be proper and non-empty")
    return U


def _keyvals(tokens, lineno, allowed):
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise InputError(f"line {lineno}: expected key=value, got {tok!r}")
        key, val = tok.split("=", 1)
        if key not in allowed:
            raise InputError(f"line {lineno}: unknown key {key!r}")
        if key in out:
            raise InputError(f"line {lineno}: repeated key {key!r}")
        out[key] = val
    return out


def parse_instance(text):
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise InputError("empty instance file")
    lineno, head = lines[0]
    m = re.fullmatch(r"digraph\s+n=(\d+)", head)
    if not m:
        raise InputError(f"line {lineno}: instance must start with 'digraph n=<int>'")
    n = int(m.group(1))
    arcs, weights, labels, families, fns = [], [], [], [], []
    names = set()
    i = 1
    while i < len(lines):
        lineno, line = lines[i]
        tokens = line.split()
        kw = tokens[0]
        if kw == "arc":
            if len(tokens) not in (3, 4):
                raise InputError(f"line {lineno}: arc needs tail, head and optional w=")
            t, h = (_vertex(_int(tok, lineno), n, lineno) for tok in tokens[1:3])
            if t == h:
                raise InputError(f"line {lineno}: loops are not allowed")
            w = 1
            if len(tokens) == 4:
                w = _keyvals(tokens[3:], lineno, {"w"})["w"]
                if w not in ("0", "1"):
                    raise InputError(f"line {lineno}: arc weight must be 0 or 1")
                w = int(w)
            arcs.append((t, h))
            weights.append(w)
            i += 1
        elif kw == "vertex":
            if len(tokens) != 3:
                raise InputError(f"line {lineno}: vertex needs an id and a label")
            labels.append((_vertex(_int(tokens[1], lineno), n, lineno), tokens[2]))
            i += 1
        elif kw == "family":
            spec, i = _parse_family(lines, i, n)
            if spec.name in names:
                raise InputError(f"line {lineno}: name {spec.name!r} used twice")
            names.add(spec.name)
            families.append(spec)
        elif kw == "fn":
            spec, i = _parse_fn(lines, i, n)
            if spec.name in names:
                raise InputError(f"line {lineno}: name {spec.name!r} used twice")
            names.add(spec.name)
            fns.append(spec)
        else:
            raise InputError(f"line {lineno}: unknown keyword {kw!r}")
    d = Digraph(n, tuple(arcs), tuple(weights))
    inst = Instance(d, tuple(sorted(labels)), tuple(families), tuple(fns))
    for spec in inst.fns:  # validate eagerly
        inst.oracle(spec.name)
    for spec in inst.families:
        inst.family(spec.name)
    return inst


def _parse_family(lines, i, n):
    lineno, line = lines[i]
    m = re.fullmatch(r"family\s+(\S+)\s*\{(.*)", line)
    if not m:
        raise InputError(f"line {lineno}: expected 'family <name> {{'")
    name, rest = m.group(1), m.group(2)
    body = []
    if "}" in rest:
        inner, after = rest.split("}", 1)
        if after.strip():
            raise InputError(f"line {lineno}: text after '}}'")
        body = [(lineno, part.strip()) for part in inner.split("|") if part.strip()]
        i += 1
    else:
        if rest.strip():
            body.append((lineno, rest.strip()))
        i += 1
        while True:
            if i >= len(lines):
                raise InputError(f"line {lineno}: family {name!r} is not closed")
            ln, text = lines[i]
            i += 1
            if text == "}":
                break
            body.append((ln, text))
    builders = [t for ln, t in body if t.startswith("builder")]
    lattice = [(ln, t) for ln, t in body if t.startswith("lattice")]
    explicit = [(ln, t) for ln, t in body if not t.startswith(("builder", "lattice"))]
    if builders:
        if len(body) != 1:
            raise InputError(f"line {lineno}: a builder family has exactly one line")
        parts = builders[0].split()
        if len(parts) != 2 or parts[1] not in FAMILY_BUILDERS:
            raise InputError(f"line {lineno}: unknown family builder {' '.join(parts[1:])!r}")
        return FamilySpec(name, "builder", builder=parts[1]), i
    if lattice:
        if explicit:
            raise InputError(f"line {lineno}: cannot mix lattice and explicit lines")
        lats = []
        for ln, text in lattice:
            parts = text.split()
            if len(parts) < 3:
                raise InputError(f"line {ln}: lattice needs a pair u v")
            u, v = (_vertex(_int(tok, ln), n, ln) for tok in parts[1:3])
            kv = _keyvals(parts[3:], ln, {"min", "max", "order"})
            lo = _ids(kv.get("min", ""), ln, n)
            hi = _ids(kv.get("max", ""), ln, n)
            rel = []
            for pair in filter(None, kv.get("order", "").split(",")):
                a, _, b = pair.partition("<")
                rel.append((_vertex(_int(a, ln), n, ln), _vertex(_int(b, ln), n, ln)))
            lats.append((u, v, lo, hi, tuple(sorted(rel))))
        return FamilySpec(name, "lattice", lattices=tuple(sorted(lats))), i
    sets = tuple(sorted({_proper(_ids(t, ln, n), n, ln) for ln, t in explicit}))
    return FamilySpec(name, "explicit", sets=sets), i


def _parse_fn(lines, i, n):
    lineno, line = lines[i]
    tokens = line.split()
    if len(tokens) < 2:
        raise InputError(f"line {lineno}: fn needs a name")
    kv = _keyvals(tokens[2:], lineno, {"family", "builder"})
    if "family" not in kv or "builder" not in kv:
        raise InputError(f"line {lineno}: fn needs family= and builder=")
    builder, _, param = kv["builder"].partition(":")
    if builder not in FN_BUILDERS:
        raise InputError(f"line {lineno}: unknown function builder {builder!r}")
    needs_param = builder in ("outdeg-minus", "dicut-slack", "constant")
    if needs_param != bool(param):
        raise InputError(f"line {lineno}: builder {builder!r} parameter mismatch")
    value = _int(param, lineno) if param else None
    i += 1
    table = {}
    while i < len(lines) and lines[i][1].startswith("set"):
        ln, text = lines[i]
        m = re.fullmatch(r"set\s+([\d\s,]+?)\s*=\s*(-?\d+)", text)
        if not m:
            raise InputError(f"line {ln}: expected 'set <ids> = <int>'")
        U = _proper(_ids(m.group(1), ln, n), n, ln)
        if U in table:
            raise InputError(f"line {ln}: set given twice")
        table[U] = int(m.group(2))
        i += 1
    if table and builder != "table":
        raise InputError(f"line {lineno}: set rows only belong to table functions")
    return FnSpec(tokens[1], kv["family"], builder, value, tuple(sorted(table.items()))), i


# -- printing ---------------------------------------------------------------------

def _fmt_ids(U):
    return " ".join(map(str, members(U)))


def format_instance(inst):
    d = inst.d
    out = [f"digraph n={d.n}"]
    for v, label in inst.labels:
        out.append(f"vertex {v} {label}")
    for (t, h), w in zip(d.arcs, d.weights):
        out.append(f"arc {t} {h}" + ("" if w == 1 else f" w={w}"))
    for spec in inst.families:
        if spec.kind == "builder":
            out.append(f"family {spec.name} {{ builder {spec.builder} }}")
        elif spec.kind == "explicit":
            out.append(f"family {spec.name} {{")
            out.extend(f"  {_fmt_ids(U)}" for U in spec.sets)
            out.append("}")
        else:
            out.append(f"family {spec.name} {{")
            for u, v, lo, hi, rel in spec.lattices:
                line = f"  lattice {u} {v} min={','.join(map(str, members(lo))) or '-'}"
                line += f" max={','.join(map(str, members(hi))) or '-'}"
                if rel:
                    line += " order=" + ",".join(f"{a}<{b}" for a, b in rel)
                out.append(line)
            out.append("}")
    for spec in inst.fns:
        b = spec.builder if spec.param is None else f"{spec.builder}:{spec.param}"
        out.append(f"fn {spec.name} family={spec.family} builder={b}")
        out.extend(f"set {_fmt_ids(U)} = {v}" for U, v in spec.table)
    return "\n".join(out) + "\n"


def digraph_instance(d):
    return Instance(d)


def read_instance(path):
    with open(path) as fh:
        return parse_instance(fh.read())


def parse_vector(text, length=None, allow_inf=False):
    """Whitespace/comma separated integers (``inf``/``-inf`` if allowed)."""
    vals = []
    for tok in re.split(r"[,\s]+", text.strip()):
        if not tok:
            continue
        if allow_inf and tok in ("inf", "+inf", "-inf"):
            vals.append(float(tok))
        else:
            vals.append(_int(tok, 0, "integer"))
    if length is not None and len(vals) == 1 and length != 1:
        vals = vals * length
    if length is not None and len(vals) != length:
        raise InputError(f"expected {length} values, got {len(vals)}")
    return tuple(vals)
