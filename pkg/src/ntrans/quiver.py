"""Bound quivers: data model, text format, validation and the opposite quiver.

Paths are written right to left, so ``a2.a1`` means "a1, then a2".  A
:class:`Path` keeps its arrows in written order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .linalg import QQ, Field, Mod, format_scalar


class QuiverError(ValueError):
    """Structural problem in a quiver or its text; carries an optional location."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Path:
    """A path from ``source`` to ``target``; ``arrows`` in written (right-to-left) order."""

    source: str
    target: str
    arrows: tuple = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    @classmethod
    def trivial(cls, v: str) -> "Path":
        return cls(v, v, ())

    def __str__(self):
        return ".".join(self.arrows) if self.arrows else f"e{self.source}"


class Element:
    """A linear combination of paths; zero coefficients are never stored."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Path, object] | Iterable = ()):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        d = {}
        for p, c in items:
            if c:
                d[p] = d[p] + c if p in d else c
                if not d[p]:
                    del d[p]
        self.terms = d
        self._hash = None

    @classmethod
    def of_path(cls, p: Path, field: Field = QQ) -> "Element":
        return cls({p: field.one})

    def is_zero(self) -> bool:
        return not self.terms

    def paths(self) -> list[Path]:
        return list(self.terms)

    def coeff(self, p: Path, field: Field = QQ):
        return self.terms.get(p, field.zero)

    @property
    def degree(self) -> int | None:
        lens = {p.length for p in self.terms}
        return lens.pop() if len(lens) == 1 else None

    @property
    def source(self):
        s = {p.source for p in self.terms}
        return s.pop() if len(s) == 1 else None

    @property
    def target(self):
        s = {p.target for p in self.terms}
        return s.pop() if len(s) == 1 else None

    def degrees(self) -> set:
        return {p.length for p in self.terms}

    def endpoints(self) -> set:
        return {(p.source, p.target) for p in self.terms}

    def __add__(self, other: "Element") -> "Element":
        return Element(list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "Element":
        return Element({p: -c for p, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c) -> "Element":
        return Element({p: c * x for p, x in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, Element) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset((p, c) for p, c in self.terms.items()))
        return self._hash

    def __repr__(self):
        return f"Element({format_element(self)!r})"


def format_element(x: Element, order=None) -> str:
    """Render ``x`` in the relation syntax; ``order`` is a sort key on paths."""
    if x.is_zero():
        return "0"
    paths = sorted(x.terms, key=order) if order else list(x.terms)
    out = []
    for k, p in enumerate(paths):
        c = x.terms[p]
        neg = False
        if isinstance(c, Fraction) and c < 0:
            neg, c = True, -c
        elif isinstance(c, Mod) and 2 * c.v > c.p:
            neg, c = True, -c
        body = str(p)
        cs = format_scalar(c)
        term = body if cs == "1" else f"{cs}*{body}"
        if k == 0:
            out.append(("-" if neg else "") + term)
        else:
            out.append(("- " if neg else "+ ") + term)
    return " ".join(out)


@dataclass(frozen=True)
class BoundQuiver:
    """Finite quiver with homogeneous relations over an exact field."""

    vertices: tuple
    arrows: tuple
    relations: tuple = ()
    field: Field = QQ
    n: int | None = None
    translation: tuple = ()     # declared (i, tau i) pairs
    metadata: tuple = ()        # (key, value) string pairs

    # -- lookups ------------------------------------------------------------
    @cached_property
    def arrow_by_name(self) -> dict:
        return {a.name: a for a in self.arrows}

    @cached_property
    def arrow_index(self) -> dict:
        return {a.name: k for k, a in enumerate(self.arrows)}

    @cached_property
    def vertex_index(self) -> dict:
        return {v: k for k, v in enumerate(self.vertices)}

    @cached_property
    def _out(self) -> dict:
        d = {v: [] for v in self.vertices}
        for a in self.arrows:
            d.setdefault(a.source, []).append(a)
        return d

    @cached_property
    def _in(self) -> dict:
        d = {v: [] for v in self.vertices}
        for a in self.arrows:
            d.setdefault(a.target, []).append(a)
        return d

    def arrows_from(self, v: str) -> list[Arrow]:
        return self._out.get(v, [])

    def arrows_to(self, v: str) -> list[Arrow]:
        return self._in.get(v, [])

    def arrow(self, name: str) -> Arrow:
        try:
            return self.arrow_by_name[name]
        except KeyError:
            raise QuiverError(f"unknown arrow {name!r}") from None

    def path_key(self, p: Path):
        """Lexicographic order on written arrow sequences (declaration order of arrows)."""
        idx = self.arrow_index
        return (len(p.arrows), tuple(idx[a] for a in p.arrows), self.vertex_index.get(p.source, -1))

    def make_path(self, written: Iterable[str]) -> Path:
        """Build a path from arrow names in written order, checking composability."""
        names = tuple(written)
        if not names:
            raise QuiverError("use Path.trivial for trivial paths")
        arrs = [self.arrow(a) for a in names]
        for later, earlier in zip(arrs, arrs[1:]):
            if earlier.target != later.source:
                raise QuiverError(
                    f"path {'.'.join(names)} is not composable: {earlier.name} ends at "
                    f"{earlier.target} but {later.name} starts at {later.source}")
        return Path(arrs[-1].source, arrs[0].target, names)

    def extend(self, p: Path, a: Arrow, on_left: bool) -> Path:
        """Compose ``a`` after p (on_left) or before p."""
        if on_left:
            return Path(p.source, a.target, (a.name,) + p.arrows)
        return Path(a.source, p.target, p.arrows + (a.name,))

    def words(self, length: int, source: str, target: str) -> list[Path]:
        """All paths of the given length from source to target, in lexicographic order."""
        return self._words_from(length, source).get(target, [])

    def _words_from(self, length: int, source: str) -> dict:
        cache = self.__dict__.setdefault("_word_cache", {})
        key = (length, source)
        if key in cache:
            return cache[key]
        if length == 0:
            res = {source: [Path.trivial(source)]}
        else:
            res = {}
            for tgt, ps in self._words_from(length - 1, source).items():
                for a in self.arrows_from(tgt):
                    res.setdefault(a.target, []).extend(self.extend(p, a, True) for p in ps)
            for v in res:
                res[v].sort(key=self.path_key)
        cache[key] = res
        return res

    @property
    def is_quadratic(self) -> bool:
        return all(r.degrees() == {2} for r in self.relations)

    def meta(self, key: str, default=None):
        for k, v in self.metadata:
            if k == key:
                return v
        return default

    def with_(self, **changes) -> "BoundQuiver":
        fields = dict(vertices=self.vertices, arrows=self.arrows, relations=self.relations,
                      field=self.field, n=self.n, translation=self.translation,
                      metadata=self.metadata)
        fields.update(changes)
        return BoundQuiver(**fields)

    def total_arrow_count(self) -> int:
        return len(self.arrows)


def element_from_words(q: BoundQuiver, terms: Iterable[tuple]) -> Element:
    """Element from (coefficient, written arrow names) pairs."""
    return Element([(q.make_path(w), q.field(c)) for c, w in terms])


# -- validation ----------------------------------------------------------------

def validate(q: BoundQuiver) -> list[str]:
    """List structural violations; an empty list means the quiver is valid."""
    problems = []
    seen = set()
    for v in q.vertices:
        if not v:
            problems.append("empty vertex name")
        if v in seen:
            problems.append(f"duplicate vertex {v}")
        seen.add(v)
    names = set()
    for a in q.arrows:
        if a.name in names:
            problems.append(f"duplicate arrow {a.name}")
        names.add(a.name)
        for end in (a.source, a.target):
            if end not in seen:
                problems.append(f"arrow {a.name} has dangling endpoint {end}")
    for k, r in enumerate(q.relations):
        label = f"relation {k + 1} ({format_element(r)})"
        if r.is_zero():
            problems.append(f"{label}: zero relation")
            continue
        degs = r.degrees()
        if len(degs) > 1:
            problems.append(f"{label}: mixed degrees")
        elif min(degs) < 2:
            problems.append(f"{label}: relation degree < 2")
        if len(r.endpoints()) > 1:
            problems.append(f"{label}: mixed endpoints")
        for p in r.terms:
            try:
                if p.arrows and q.make_path(p.arrows) != p:
                    problems.append(f"{label}: endpoints of {p} disagree with its arrows")
            except QuiverError as exc:
                problems.append(f"{label}: {exc.message}")
    for i, j in q.translation:
        for v in (i, j):
            if v not in seen:
                problems.append(f"translation mentions unknown vertex {v}")
    return problems


# -- text format -----------------------------------------------------------------

_NAME = r"[^\s.+\-#]+"
_NAME_RE = re.compile(rf"^{_NAME}$")
_TERM_RE = re.compile(r"\s*([+-])?\s*([^\s+-]+)")
_COEFF_RE = re.compile(r"^(\d+(?:/\d+)?)\*(.+)$")


def _check_name(name: str, line: int, col: int, what: str):
    if not _NAME_RE.match(name):
        raise QuiverError(f"bad {what} name {name!r}", line, col)


def parse_relation(q: BoundQuiver, text: str, line: int | None = None, col0: int = 1) -> Element:
    terms = []
    pos = 0
    text = text.rstrip()
    first = True
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise QuiverError("cannot parse relation term", line, col0 + pos)
        sign, body = m.group(1), m.group(2)
        if sign is None and not first:
            raise QuiverError("missing + or - between terms", line, col0 + m.start(2))
        first = False
        coeff = Fraction(1)
        cm = _COEFF_RE.match(body)
        if cm:
            coeff = Fraction(cm.group(1))
            body = cm.group(2)
        if sign == "-":
            coeff = -coeff
        names = body.split(".")
        col = col0 + m.start(2)
        for nm in names:
            if not nm:
                raise QuiverError("empty arrow name in path", line, col)
            if nm not in q.arrow_by_name:
                raise QuiverError(f"unknown arrow {nm!r}", line, col)
        try:
            path = q.make_path(names)
        except QuiverError as exc:
            raise QuiverError(exc.message, line, col) from None
        terms.append((path, q.field(coeff)))
        pos = m.end()
    if not terms:
        raise QuiverError("empty relation", line, col0)
    return Element(terms)


def parse_quiver(text: str) -> BoundQuiver:
    """Parse the line-oriented quiver format."""
    field = QQ
    n = None
    vertices: list[str] = []
    arrows: list[Arrow] = []
    rel_lines: list[tuple[int, int, str]] = []
    trans: list[tuple[str, str]] = []
    meta: list[tuple[str, str]] = []
    seen_v: set = set()
    seen_a: set = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        if raw.startswith("#:"):
            kv = raw[2:].strip().split(None, 1)
            if kv:
                meta.append((kv[0], kv[1] if len(kv) > 1 else ""))
            continue
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        parts = line.split()
        kw = parts[0]
        if kw == "field":
            if parts[1:] == ["rational"]:
                field = QQ
            elif len(parts) == 3 and parts[1] == "gf" and parts[2].isdigit():
                try:
                    field = Field(int(parts[2]))
                except ValueError as exc:
                    raise QuiverError(str(exc), lineno, indent + 1) from None
            else:
                raise QuiverError("expected 'field rational' or 'field gf <prime>'", lineno, indent + 1)
        elif kw == "n":
            if len(parts) != 2 or not parts[1].isdigit():
                raise QuiverError("expected 'n <nonnegative integer>'", lineno, indent + 1)
            n = int(parts[1])
        elif kw == "vertex":
            if len(parts) < 2:
                raise QuiverError("vertex line needs at least one name", lineno, indent + 1)
            for v in parts[1:]:
                col = line.index(v, indent + 6) + 1
                _check_name(v, lineno, col, "vertex")
                if v in seen_v:
                    raise QuiverError(f"duplicate vertex {v!r}", lineno, col)
                seen_v.add(v)
                vertices.append(v)
        elif kw == "arrow":
            if len(parts) != 4:
                raise QuiverError("expected 'arrow <name> <source> <target>'", lineno, indent + 1)
            name, s, t = parts[1:]
            _check_name(name, lineno, indent + 7, "arrow")
            if name in seen_a:
                raise QuiverError(f"duplicate arrow {name!r}", lineno, indent + 7)
            for v in (s, t):
                if v not in seen_v:
                    raise QuiverError(f"unknown vertex {v!r}", lineno, line.index(v, indent + 7) + 1)
            seen_a.add(name)
            arrows.append(Arrow(name, s, t))
        elif kw == "relation":
            body_start = line.index("relation") + len("relation")
            rel_lines.append((lineno, body_start + 1, line[body_start:]))
        elif kw == "translation":
            m = re.match(rf"^\s*translation\s+({_NAME})\s*->\s*({_NAME})\s*$", line)
            if not m:
                raise QuiverError("expected 'translation <i> -> <j>'", lineno, indent + 1)
            for v in m.groups():
                if v not in seen_v:
                    raise QuiverError(f"unknown vertex {v!r}", lineno, line.index(v) + 1)
            trans.append((m.group(1), m.group(2)))
        else:
            raise QuiverError(f"unknown directive {kw!r}", lineno, indent + 1)
    q = BoundQuiver(tuple(vertices), tuple(arrows), (), field, n, tuple(trans), tuple(meta))
    rels = []
    for lineno, col, body in rel_lines:
        r = parse_relation(q, body, lineno, col)
        if len(r.degrees()) > 1:
            raise QuiverError("mixed-degree relation", lineno, col)
        if len(r.endpoints()) > 1:
            raise QuiverError("mixed-endpoint relation", lineno, col)
        if r.is_zero():
            raise QuiverError("relation cancels to zero", lineno, col)
        rels.append(r)
    return q.with_(relations=tuple(rels))


def serialize(q: BoundQuiver) -> str:
    """Deterministic text form; ``parse_quiver(serialize(q)) == q``."""
    lines = [f"field {q.field.describe()}"]
    for k, v in q.metadata:
        lines.append(f"#: {k} {v}".rstrip())
    if q.n is not None:
        lines.append(f"n {q.n}")
    if q.vertices:
        lines.append("vertex " + " ".join(q.vertices))
    for a in q.arrows:
        lines.append(f"arrow {a.name} {a.source} {a.target}")
    for r in q.relations:
        lines.append("relation " + format_element(r, q.path_key))
    for i, j in q.translation:
        lines.append(f"translation {i} -> {j}")
    return "\n".join(lines) + "\n"


def load_quiver(path) -> BoundQuiver:
    with open(path, encoding="utf-8") as fh:
        return parse_quiver(fh.read())


def to_dot(q: BoundQuiver, name: str = "Q") -> str:
    """Graphviz rendering; vertices named ``x@t`` are grouped into one column per layer."""
    out = [f"digraph {name} {{", "  rankdir=LR;"]
    if q.relations:
        out.append("  /* relations:")
        for r in q.relations:
            out.append("     " + format_element(r, q.path_key))
        out.append("  */")
    layers: dict[str, list[str]] = {}
    for v in q.vertices:
        if "@" in v:
            layers.setdefault(v.rsplit("@", 1)[1], []).append(v)
    for v in q.vertices:
        out.append(f'  "{v}";')
    for t, vs in layers.items():
        out.append("  { rank=same; " + " ".join(f'"{v}";' for v in vs) + " }")
    for a in q.arrows:
        out.append(f'  "{a.source}" -> "{a.target}" [label="{a.name}"];')
    out.append("}")
    return "\n".join(out) + "\n"


# -- opposite quiver ------------------------------------------------------------------

def opposite(q: BoundQuiver, suffix: str = "*") -> BoundQuiver:
    """Reverse every arrow (renamed with ``suffix``) and every relation word."""
    ren = {a.name: a.name + suffix for a in q.arrows}
    arrows = tuple(Arrow(ren[a.name], a.target, a.source) for a in q.arrows)
    rels = []
    for r in q.relations:
        rels.append(Element({Path(p.target, p.source, tuple(ren[x] for x in reversed(p.arrows))): c
                             for p, c in r.terms.items()}))
    trans = tuple((j, i) for i, j in q.translation)
    return q.with_(arrows=arrows, relations=tuple(rels), translation=trans)


def rename_arrows(q: BoundQuiver, mapping: Mapping[str, str]) -> BoundQuiver:
    arrows = tuple(Arrow(mapping.get(a.name, a.name), a.source, a.target) for a in q.arrows)
    rels = tuple(Element({Path(p.source, p.target, tuple(mapping.get(x, x) for x in p.arrows)): c
                          for p, c in r.terms.items()}) for r in q.relations)
    return q.with_(arrows=arrows, relations=rels)


def strip_suffix(name: str, suffix: str = "*") -> str:
    while suffix and name.endswith(suffix):
        name = name[: -len(suffix)]
    return name
