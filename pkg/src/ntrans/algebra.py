"""Graded normal-form bases of k(Q) = kQ/(ρ), multiplication, and resolutions.

Degree t+1 is built from degree t: every word of length t+1 reduces to a
pair (basis word of degree t, arrow), and the relations contribute the
rows b·r for basis words b of complementary degree.  Columns are ordered
lexicographically, so pivots are the lexicographically smallest words of
each relation and the surviving (non-pivot) words form the basis.  This
is the same basis as a global rref of the degree-t relation span with
lexicographic columns, without ever materialising all words of length t.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field

from .linalg import SparseEchelon, kernel_sparse, rref_rows
from .quiver import BoundQuiver, Element, Path, QuiverError


class DegreeOverflowError(ValueError):
    pass


class GradedBasis:
    """Normal-form bases of e_j Λ_t e_i for 0 ≤ t ≤ max_degree."""

    def __init__(self, quiver: BoundQuiver, max_degree: int):
        if max_degree < 0:
            raise ValueError("max_degree must be nonnegative")
        for r in quiver.relations:
            if len(r.degrees()) != 1 or len(r.endpoints()) != 1:
                raise QuiverError(f"relation {r!r} is not homogeneous")
            if r.degree < 2:
                raise QuiverError(f"relation {r!r} has degree < 2")
        self.quiver = quiver
        self.max_degree = max_degree
        self.field = quiver.field
        self._basis: dict[tuple, list[Path]] = {}
        self._rmul: dict[tuple, dict] = {}
        self._lmul: dict[tuple, dict] = {}
        self._by_degree: list[list[tuple]] = []
        self._build()

    # -- construction ---------------------------------------------------------
    def _build(self):
        q, F = self.quiver, self.field
        one = F.one
        comps0 = []
        for v in q.vertices:
            self._basis[(0, v, v)] = [Path.trivial(v)]
            comps0.append((v, v))
        self._by_degree.append(comps0)
        rels_by_deg: dict[int, list[Element]] = {}
        for r in q.relations:
            rels_by_deg.setdefault(r.degree, []).append(r)
        for t in range(0, self.max_degree):
            # candidates (b, α) with b in degree t, α applied first
            cands: dict[tuple, list[tuple[Path, str, Path]]] = {}
            for (i, j) in self._by_degree[t]:
                for b in self._basis[(t, i, j)]:
                    for a in q.arrows_to(i):
                        w = Path(a.source, j, b.arrows + (a.name,))
                        cands.setdefault((a.source, j), []).append((b, a.name, w))
            rows_by_comp: dict[tuple, list[dict]] = {}
            for d, rels in rels_by_deg.items():
                s = t + 1 - d
                if s < 0:
                    continue
                for r in rels:
                    k, ip = r.source, r.target
                    for j in q.vertices:
                        for bp in self._basis.get((s, ip, j), ()):
                            row: dict[tuple, object] = {}
                            for w, c in r.terms.items():
                                head = self._rmul_chain({bp: one}, w.arrows[:-1])
                                last = w.arrows[-1]
                                for b, cb in head.items():
                                    key = (b, last)
                                    row[key] = row.get(key, F.zero) + c * cb
                            row = {key: v for key, v in row.items() if v}
                            if row:
                                rows_by_comp.setdefault((k, j), []).append(row)
            comps = []
            for (k, j), cl in cands.items():
                cl.sort(key=lambda x: q.path_key(x[2]))
                col = {(b, a): n for n, (b, a, _) in enumerate(cl)}
                rows = []
                for row in rows_by_comp.get((k, j), ()):
                    dense = [F.zero] * len(cl)
                    for key, v in row.items():
                        dense[col[key]] = v
                    rows.append(dense)
                red, pivots = rref_rows(rows, len(cl))
                pivset = set(pivots)
                basis = [cl[n][2] for n in range(len(cl)) if n not in pivset]
                for n, (b, a, w) in enumerate(cl):
                    if n not in pivset:
                        self._rmul[(b, a)] = {w: one}
                for row, pc in zip(red, pivots):
                    b, a, _ = cl[pc]
                    self._rmul[(b, a)] = {cl[n][2]: -row[n] for n in range(len(cl))
                                          if n not in pivset and row[n]}
                if basis:
                    self._basis[(t + 1, k, j)] = basis
                    comps.append((k, j))
            self._by_degree.append(comps)

    def _rmul_chain(self, elem: dict, letters) -> dict:
        """Right-multiply a normal-form dict by arrows given in written order."""
        F = self.field
        cur = elem
        for a in letters:
            nxt: dict = {}
            for b, c in cur.items():
                if b.length >= self.max_degree:
                    raise DegreeOverflowError(f"product exceeds degree cap {self.max_degree}")
                img = self._rmul.get((b, a))
                if img is None:
                    if self.quiver.arrow(a).target != b.source:
                        raise QuiverError(f"arrow {a} does not compose with {b}")
                    continue
                for w, cw in img.items():
                    nxt[w] = nxt.get(w, F.zero) + c * cw
            cur = {w: c for w, c in nxt.items() if c}
            if not cur:
                break
        return cur

    # -- queries --------------------------------------------------------------
    def basis(self, t: int, i: str, j: str) -> list[Path]:
        """Basis of e_j Λ_t e_i (paths from i to j)."""
        self._check_degree(t)
        return self._basis.get((t, i, j), [])

    def dim(self, t: int, i: str, j: str) -> int:
        return len(self.basis(t, i, j))

    def components(self, t: int) -> list[tuple]:
        """(source, target) pairs with a nonzero degree-t component."""
        self._check_degree(t)
        return list(self._by_degree[t])

    def dim_degree(self, t: int) -> int:
        return sum(len(self._basis[(t, i, j)]) for i, j in self.components(t))

    def total_dim(self) -> int:
        return sum(self.dim_degree(t) for t in range(self.max_degree + 1))

    def top_degree(self) -> int:
        """Largest t ≤ max_degree with Λ_t ≠ 0."""
        return max(t for t in range(self.max_degree + 1) if self._by_degree[t])

    def is_finite_within_cap(self) -> bool:
        return not self._by_degree[self.max_degree] or not self.quiver.arrows

    def _check_degree(self, t: int):
        if t < 0 or t > self.max_degree:
            raise DegreeOverflowError(f"degree {t} outside 0..{self.max_degree}")

    def basis_from(self, t: int, i: str) -> list[Path]:
        return [p for (s, j) in self.components(t) if s == i for p in self._basis[(t, s, j)]]

    def basis_to(self, t: int, j: str) -> list[Path]:
        return [p for (i, tg) in self.components(t) if tg == j for p in self._basis[(t, i, tg)]]

    # -- arithmetic -------------------------------------------------------------
    def word_nf(self, p: Path) -> dict:
        """Normal form of a single path, as {basis path: coefficient}."""
        if p.length > self.max_degree:
            raise DegreeOverflowError(f"path of length {p.length} beyond cap {self.max_degree}")
        if p.is_trivial:
            return {p: self.field.one}
        a0 = self.quiver.arrow(p.arrows[0])
        return self._rmul_chain({Path(a0.source, a0.target, (a0.name,)): self.field.one}, p.arrows[1:])

    def normal_form(self, x: Element) -> Element:
        F = self.field
        acc: dict = {}
        for p, c in x.terms.items():
            for w, cw in self.word_nf(p).items():
                acc[w] = acc.get(w, F.zero) + c * cw
        return Element(acc)

    def mul_paths(self, x: Path, y: Path) -> dict:
        """Normal form of x·y (y applied first) for basis paths x, y."""
        if x.source != y.target:
            return {}
        if x.length + y.length > self.max_degree:
            raise DegreeOverflowError("product exceeds degree cap")
        if y.is_trivial:
            return {x: self.field.one}
        if x.is_trivial:
            return {y: self.field.one}
        return self._rmul_chain({x: self.field.one}, y.arrows)

    def left_arrow(self, a: str, b: Path) -> dict:
        """Normal form of α·b for an arrow α and basis path b (cached)."""
        key = (a, b)
        res = self._lmul.get(key)
        if res is None:
            arr = self.quiver.arrow(a)
            if arr.source != b.target:
                res = {}
            else:
                res = self._rmul_chain({Path(arr.source, arr.target, (a,)): self.field.one}, b.arrows)
            self._lmul[key] = res
        return res

    def right_arrow(self, b: Path, a: str) -> dict:
        """Normal form of b·α (α applied first)."""
        return self._rmul_chain({b: self.field.one}, (a,))

    def mul_dicts(self, x: dict, y: dict) -> dict:
        F = self.field
        acc: dict = {}
        for p, c in x.items():
            for r, d in y.items():
                for w, cw in self.mul_paths(p, r).items():
                    acc[w] = acc.get(w, F.zero) + c * d * cw
        return {w: c for w, c in acc.items() if c}

    def multiply(self, x: Element, y: Element) -> Element:
        """x·y in the quotient algebra (y applied first), as a normal-form Element."""
        if x.is_zero() or y.is_zero():
            return Element()
        if x.source is None or y.target is None or x.source != y.target:
            raise QuiverError("endpoint mismatch in multiply")
        dx, dy = x.degree, y.degree
        if dx is None or dy is None:
            raise QuiverError("multiply expects homogeneous elements")
        if dx + dy > self.max_degree:
            raise DegreeOverflowError(f"degree {dx + dy} exceeds cap {self.max_degree}")
        nx = self.normal_form(x).terms
        ny = self.normal_form(y).terms
        return Element(self.mul_dicts(nx, ny))

    def coords(self, x: dict | Element, t: int, i: str, j: str) -> list:
        terms = x.terms if isinstance(x, Element) else x
        F = self.field
        v = [F.zero] * self.dim(t, i, j)
        pos = {p: n for n, p in enumerate(self.basis(t, i, j))}
        for p, c in terms.items():
            v[pos[p]] = c
        return v

    def element(self, coords, t: int, i: str, j: str) -> Element:
        return Element(zip(self.basis(t, i, j), coords))

    def path(self, text: str) -> Path:
        """Parse ``a2.a1`` or ``e3`` into a path of this quiver."""
        if text.startswith("e") and text[1:] in self.quiver.vertex_index:
            return Path.trivial(text[1:])
        return self.quiver.make_path(text.split("."))


def graded_basis(q: BoundQuiver, D: int) -> GradedBasis:
    return GradedBasis(q, D)


def loewy_length(gb: GradedBasis):
    """1 + top nonzero degree, or the string '>D' when Λ_D ≠ 0."""
    if gb.components(gb.max_degree) and gb.quiver.arrows:
        return f">{gb.max_degree}"
    return 1 + gb.top_degree()


def dims_table(gb: GradedBasis) -> dict:
    rows = []
    for t in range(gb.max_degree + 1):
        for i, j in sorted(gb.components(t), key=lambda c: (gb.quiver.vertex_index[c[0]],
                                                            gb.quiver.vertex_index[c[1]])):
            rows.append({"t": t, "from": i, "to": j, "dim": gb.dim(t, i, j)})
    top = gb.max_degree if isinstance(loewy_length(gb), str) else gb.top_degree()
    totals = [gb.dim_degree(t) for t in range(top + 1)]
    return {"totals": totals, "dims": rows, "loewy": loewy_length(gb)}


# -- minimal graded projective resolutions ---------------------------------------------

@dataclass
class Generator:
    vertex: str
    degree: int
    image: dict        # coordinates in the previous term: {(gen index, basis path): coeff}


@dataclass
class BettiTable:
    """Generators of each term of a minimal resolution of S(vertex), up to ``cap``."""

    vertex: str
    cap: int
    steps: list = dc_field(default_factory=list)      # list of list[Generator]

    def counts(self, s: int) -> Counter:
        return Counter((g.vertex, g.degree) for g in self.steps[s])

    def as_lists(self) -> list[list[tuple]]:
        return [sorted(self.counts(s).items()) for s in range(len(self.steps))]

    def __len__(self):
        return len(self.steps)


class FreeModule:
    """A graded projective ⊕ Λ e_{v_g}[-d_g] with piecewise coordinates."""

    def __init__(self, gb: GradedBasis, gens: list[Generator]):
        self.gb = gb
        self.gens = gens
        self._labels: dict[tuple, list] = {}

    def labels(self, j: str, d: int) -> list:
        key = (j, d)
        lab = self._labels.get(key)
        if lab is None:
            lab = []
            for g, gen in enumerate(self.gens):
                e = d - gen.degree
                if 0 <= e <= self.gb.max_degree:
                    lab.extend((g, b) for b in self.gb.basis(e, gen.vertex, j))
            self._labels[key] = lab
        return lab

    def left_arrow(self, a: str, vec: dict) -> dict:
        F = self.gb.field
        out: dict = {}
        for (g, b), c in vec.items():
            for w, cw in self.gb.left_arrow(a, b).items():
                out[(g, w)] = out.get((g, w), F.zero) + c * cw
        return {k: v for k, v in out.items() if v}

    def act(self, lam: Path, vec: dict) -> dict:
        """λ·vec for a basis path λ (vec applied first)."""
        F = self.gb.field
        out: dict = {}
        for (g, b), c in vec.items():
            for w, cw in self.gb.mul_paths(lam, b).items():
                out[(g, w)] = out.get((g, w), F.zero) + c * cw
        return {k: v for k, v in out.items() if v}


def _map_images(src: FreeModule, dst: FreeModule, j: str, d: int):
    """Images of the (j, d) basis labels of src in dst, as sparse dicts over dst labels."""
    dom = src.labels(j, d)
    cod = dst.labels(j, d)
    return dom, cod, [src.act(lam, src.gens[h].image) for h, lam in dom]


def _map_matrix(src: FreeModule, dst: FreeModule, j: str, d: int):
    """Dense columns of the map src → dst on the (j, d) piece."""
    F = src.gb.field
    dom, cod, imgs = _map_images(src, dst, j, d)
    pos = {lab: n for n, lab in enumerate(cod)}
    cols = []
    for img in imgs:
        v = [F.zero] * len(cod)
        for k, c in img.items():
            v[pos[k]] = c
        cols.append(v)
    return dom, cod, cols


def _kernel_piece(src: FreeModule, dst: FreeModule | None, j: str, d: int) -> list[dict]:
    """Basis of the kernel of src → dst on (j, d), as sparse vectors over src labels."""
    F = src.gb.field
    dom = src.labels(j, d)
    if not dom:
        return []
    if dst is None:   # augmentation onto the simple top
        if d == 0:
            return []
        return [{lab: F.one} for lab in dom]
    _, cod, imgs = _map_images(src, dst, j, d)
    rows: dict = {}
    for h, img in enumerate(imgs):
        for k, c in img.items():
            rows.setdefault(k, {})[h] = c
    ker = kernel_sparse(rows.values(), len(dom), F)
    return [{dom[n]: x for n, x in v.items()} for v in ker]


def minimal_resolution(gb: GradedBasis, i: str, steps: int, D: int | None = None) -> BettiTable:
    """Minimal graded projective resolution of S(i) through ``steps`` syzygies.

    Generators in internal degree above ``D`` (default: the basis cap) are not computed.
    """
    D = gb.max_degree if D is None else min(D, gb.max_degree)
    q = gb.quiver
    table = BettiTable(i, D)
    prev: FreeModule | None = None
    cur = FreeModule(gb, [Generator(i, 0, {})])
    table.steps.append(cur.gens)
    for _ in range(steps):
        new_gens: list[Generator] = []
        kers: dict[tuple, list[dict]] = {}
        for d in range(D + 1):
            for j in q.vertices:
                kers[(j, d)] = _kernel_piece(cur, prev, j, d)
        for d in range(D + 1):
            for j in q.vertices:
                Z = kers[(j, d)]
                if not Z:
                    continue
                pos = {lab: n for n, lab in enumerate(cur.labels(j, d))}
                span = SparseEchelon(gb.field)
                if d > 0:
                    # the radical part: arrows applied to kernel elements one degree down
                    for a in q.arrows_to(j):
                        for z in kers[(a.source, d - 1)]:
                            img = cur.left_arrow(a.name, z)
                            if img:
                                span.add({pos[k]: c for k, c in img.items()})
                for z in Z:
                    if span.add({pos[k]: c for k, c in z.items()}):
                        new_gens.append(Generator(j, d, dict(z)))
        prev, cur = cur, FreeModule(gb, new_gens)
        table.steps.append(new_gens)
    return table
