"""Koszul spaces K^t, Koszul complexes, homology and (p,q)-classification."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .algebra import GradedBasis
from .linalg import LabeledSpace, kernel_rows, kernel_sparse, rank_of_sparse, rref_rows
from .quiver import BoundQuiver, Path


class NotQuadraticError(ValueError):
    pass


def _word(q: BoundQuiver, names: tuple) -> Path:
    first = q.arrow(names[-1])
    last = q.arrow(names[0])
    return Path(first.source, last.target, names)


@dataclass
class KoszulSpaces:
    """Canonical bases of K^t ⊆ (kQ_1)^{⊗t}, keyed by (t, source, target).

    Each basis vector is a dict {word Path: coefficient} in rref form over
    lexicographically ordered words.
    """

    quiver: BoundQuiver
    max_degree: int
    spaces: dict = dc_field(default_factory=dict)

    def basis(self, t: int, i: str, j: str) -> list[dict]:
        return self.spaces.get((t, i, j), [])

    def dim(self, t: int, i: str, j: str) -> int:
        return len(self.basis(t, i, j))

    def components(self, t: int) -> list[tuple]:
        return [(i, j) for (s, i, j) in self.spaces if s == t]

    def dim_degree(self, t: int) -> int:
        return sum(len(v) for (s, _, _), v in self.spaces.items() if s == t)

    def vanishes_from(self):
        """Smallest t ≤ cap with K^t = 0, or None."""
        for t in range(self.max_degree + 1):
            if not self.components(t):
                return t
        return None


def _canonical(q: BoundQuiver, vectors: list[dict], field) -> list[dict]:
    labels = sorted({w for v in vectors for w in v}, key=q.path_key)
    space = LabeledSpace()
    for w in labels:
        space.add(w)
    red, _ = rref_rows([space.dense(v, field) for v in vectors], len(labels))
    return [{w: c for w, c in zip(labels, r) if c} for r in red]


def relation_space(q: BoundQuiver) -> dict:
    """Canonical basis of the quadratic relation span R per (source, target)."""
    if not q.is_quadratic:
        raise NotQuadraticError("Koszul analysis needs quadratic relations")
    comps: dict = {}
    for r in q.relations:
        comps.setdefault((r.source, r.target), []).append(dict(r.terms))
    return {k: _canonical(q, v, q.field) for k, v in comps.items()}


def _perp_heads(q: BoundQuiver, R: dict) -> dict:
    """R⊥ per component, indexed by 2-word: arrows -> [(functional id, coefficient)]."""
    F = q.field
    out: dict = {}
    for i in q.vertices:
        for j in q.vertices:
            words = q.words(2, i, j)
            if not words:
                continue
            rows = [[r.get(w, F.zero) for w in words] for r in R.get((i, j), [])]
            for m, f in enumerate(kernel_rows(rows, len(words), F)):
                for w, c in zip(words, f):
                    if c:
                        out.setdefault(w.arrows, []).append(((i, j, m), c))
    return out


def koszul_spaces(gb: GradedBasis, D: int | None = None) -> KoszulSpaces:
    q, F = gb.quiver, gb.field
    if D is None:
        D = gb.max_degree
    R = relation_space(q)
    ks = KoszulSpaces(q, D)
    for v in q.vertices:
        ks.spaces[(0, v, v)] = [{Path.trivial(v): F.one}]
    if D >= 1:
        for a in q.arrows:
            ks.spaces.setdefault((1, a.source, a.target), []).append({Path(a.source, a.target, (a.name,)): F.one})
        for key in list(ks.spaces):
            if key[0] == 1:
                ks.spaces[key] = _canonical(q, ks.spaces[key], F)
    if D >= 2:
        for (i, j), basis in R.items():
            if basis:
                ks.spaces[(2, i, j)] = basis
    perp = _perp_heads(q, R)
    for t in range(2, D):
        # Λ1 ⊗ K^t already satisfies R at every position but the outermost pair, so
        # K^{t+1} is the part of it that R⊥ kills there
        left: dict = {}
        for (i, j) in ks.components(t):
            for kap in ks.basis(t, i, j):
                for a in q.arrows_from(j):
                    left.setdefault((i, a.target), []).append(
                        {Path(i, a.target, (a.name,) + w.arrows): c for w, c in kap.items()})
        for key, A in left.items():
            rows: dict = {}
            for k, vec in enumerate(A):
                for w, c in vec.items():
                    for f, fc in perp.get(w.arrows[:2], ()):
                        row = rows.setdefault((f, w.arrows[2:]), {})
                        row[k] = row.get(k, F.zero) + fc * c
            ker = kernel_sparse([r for r in rows.values() if any(r.values())], len(A), F)
            if not ker:
                continue
            vecs = []
            for z in ker:
                acc: dict = {}
                for k, c in z.items():
                    for w, x in A[k].items():
                        acc[w] = acc.get(w, F.zero) + c * x
                vecs.append({w: x for w, x in acc.items() if x})
            ks.spaces[(t + 1, key[0], key[1])] = _canonical(q, vecs, F)
    return ks


# -- Koszul complexes ------------------------------------------------------------------------

def _complex_labels(gb: GradedBasis, ks: KoszulSpaces, i: str, s: int, d: int, j: str) -> list:
    """Basis labels (b, m, k) of (Λ ⊗ K^s e_i)_d at target j: b ∈ e_jΛ_{d-s}e_m, κ_k ∈ e_mK^s e_i."""
    e = d - s
    if e < 0 or e > gb.max_degree:
        return []
    out = []
    for (src, m) in ks.components(s):
        if src != i:
            continue
        for b in gb.basis(e, m, j):
            for k in range(ks.dim(s, i, m)):
                out.append((b, m, k))
    return out


def _differential_rank(gb: GradedBasis, ks: KoszulSpaces, i: str, s: int, d: int, j: str) -> int:
    """Rank of d_s: (Λ⊗K^s e_i)_d → (Λ⊗K^{s-1} e_i)_d at target j."""
    if s <= 0:
        return 0
    F = gb.field
    dom = _complex_labels(gb, ks, i, s, d, j)
    if not dom:
        return 0
    images = []
    for b, m, k in dom:
        kap = ks.basis(s, i, m)[k]
        img: dict = {}
        for w, c in kap.items():
            head, tail = w.arrows[0], w.arrows[1:]
            tail_path = Path(w.source, gb.quiver.arrow(head).source, tail)
            for x, cx in gb.right_arrow(b, head).items():
                key = (x, tail_path)
                img[key] = img.get(key, F.zero) + c * cx
        images.append({k2: v for k2, v in img.items() if v})
    return rank_of_sparse(images, F)


def complex_dim(gb: GradedBasis, ks: KoszulSpaces, i: str, s: int, d: int, j: str) -> int:
    return len(_complex_labels(gb, ks, i, s, d, j))


def koszul_homology(gb: GradedBasis, ks: KoszulSpaces, i: str, D: int | None = None) -> dict:
    """H_s(i)_d per target vertex: {(s, d, j): dim} for nonzero entries, d ≤ D."""
    D = min(gb.max_degree if D is None else D, gb.max_degree, ks.max_degree)
    table = {}
    q = gb.quiver
    ranks: dict = {}

    def rank(s, d, j):
        key = (s, d, j)
        if key not in ranks:
            ranks[key] = _differential_rank(gb, ks, i, s, d, j)
        return ranks[key]

    for d in range(D + 1):
        for s in range(d + 1):
            for j in q.vertices:
                dim = complex_dim(gb, ks, i, s, d, j)
                if not dim:
                    continue
                h = dim - rank(s, d, j) - rank(s + 1, d, j)
                if h:
                    table[(s, d, j)] = h
    return table


@dataclass
class KoszulReport:
    p: int | None                     # top degree of Λ, None when Λ_D ≠ 0
    q: int | None                     # finite horizon, None when Koszul up to the cap
    koszul_up_to: int | None
    cap: int
    homology: dict                    # vertex -> {(s, d, j): dim}
    k_vanishes_from: int | None
    failure: str | None = None
    n_translation: dict = dc_field(default_factory=dict)

    @property
    def is_koszul_up_to_cap(self) -> bool:
        return self.failure is None and self.q is None

    @property
    def is_pq_koszul(self) -> bool:
        return self.failure is None and self.p is not None

    @property
    def generalized_coxeter(self):
        return self.q if self.failure is None else None

    @property
    def gorenstein_parameter(self):
        if self.failure is not None:
            return None
        return self.q if self.q is not None else 0

    def homology_rows(self, vertex_order) -> list[dict]:
        rows = []
        for v in vertex_order:
            agg: dict = {}
            for (s, d, j), h in self.homology.get(v, {}).items():
                agg[(s, d)] = agg.get((s, d), 0) + h
            for (s, d), h in sorted(agg.items()):
                rows.append({"vertex": v, "position": s, "degree": d, "dim": h})
        return rows

    def to_json(self, vertex_order) -> dict:
        out = {"p": self.p}
        if self.q is not None:
            out["q"] = self.q
        elif self.failure is None:
            out["koszul_up_to"] = self.koszul_up_to
        if self.failure:
            out["failure"] = self.failure
        out["cap"] = self.cap
        out["generalized_coxeter"] = self.generalized_coxeter
        out["gorenstein_parameter"] = self.gorenstein_parameter
        out["homology"] = self.homology_rows(vertex_order)
        out["n_translation"] = self.n_translation
        return out

    def format_table(self, vertex_order) -> str:
        lines = [f"{'vertex':>8} {'pos':>4} {'deg':>4} {'dim':>4}"]
        for r in self.homology_rows(vertex_order):
            lines.append(f"{r['vertex']:>8} {r['position']:>4} {r['degree']:>4} {r['dim']:>4}")
        return "\n".join(lines)


def classify_pq(gb: GradedBasis, ks: KoszulSpaces | None = None, D: int | None = None,
                n: int | None = None) -> KoszulReport:
    """(p,q)-classification from Koszul homology, with the n-translation verdict.

    ``n`` defaults to p - 1.
    """
    from .translation import TranslationError, check_n_translation, infer_translation

    q = gb.quiver
    D = min(gb.max_degree if D is None else D, gb.max_degree)
    if ks is None:
        ks = koszul_spaces(gb, D)
    p = None if gb.components(gb.max_degree) and q.arrows else gb.top_degree()
    homology = {i: koszul_homology(gb, ks, i, D) for i in q.vertices}
    positions = sorted({s for tab in homology.values() for (s, d, j) in tab if s >= 1})
    failure = None
    qq = None
    up_to = None
    if not positions:
        up_to = D
    else:
        qq = positions[0]
        if p is None:
            failure = "homology above position 0 but Λ not finite within the cap"
        else:
            for i, tab in homology.items():
                bad = [(s, d) for (s, d, j) in tab if s >= 1 and (s != qq or d != p + qq)]
                if bad:
                    failure = f"fails condition (3): vertex {i} has homology at (position, degree) {bad[0]}"
                    break
            if failure is None and qq + 1 <= ks.max_degree and ks.components(qq + 1):
                failure = f"fails condition (2): K^{qq + 1} ≠ 0"
            if failure is None and qq + 1 > ks.max_degree:
                failure = "cap too small to certify K^{q+1} = 0"
    rep = KoszulReport(p, qq, up_to, D, homology, ks.vanishes_from(), failure)
    if n is None and p is not None:
        n = max(p - 1, 0)
    if n is not None:
        verdict = {"n": n, "is_n_translation_algebra": False}
        try:
            from .algebra import GradedBasis as _GB
            gbn = gb if gb.max_degree >= n + 2 else _GB(q, n + 2)
            ts = infer_translation(gbn, n)
            chk = check_n_translation(gbn, ts)
            koszul_ok = failure is None and (
                qq is None or (qq >= 2 and p == n + 1))
            verdict.update({
                "check_passes": chk["passes"],
                "top_degree_ok": p == n + 1,
                "is_n_translation_algebra": bool(chk["passes"] and p == n + 1
                                                 and koszul_ok),
                "stable": chk["stable"],
            })
        except TranslationError as exc:
            verdict["check_passes"] = False
            verdict["reason"] = str(exc)
        rep.n_translation = verdict
    return rep


def predicted_betti(ks: KoszulSpaces, homology_i: dict, i: str, steps: int, D: int) -> list:
    """Betti data of S(i) implied by the Koszul complex at vertex i, internal degrees ≤ D.

    With s* the first position ≥ 1 carrying homology, positions s ≤ s* give K^s e_i
    in internal degree s.  Step s*+1 adds the homology at s* when it sits in a single
    internal degree (it is then semisimple and generates freely).  Steps that cannot
    be predicted this way are None.
    """
    positions = sorted({s for (s, d, j) in homology_i if s >= 1})
    star = positions[0] if positions else None
    out: list = []
    for s in range(steps + 1):
        if star is not None and s > star + 1:
            out.append(None)
            continue
        row: dict = {}
        if s <= min(ks.max_degree, D):
            for (src, m) in ks.components(s):
                if src == i:
                    row[(m, s)] = ks.dim(s, i, m)
        elif s > D:
            pass
        else:
            out.append(None)
            continue
        if star is not None and s == star + 1:
            degs = {d for (pos, d, j) in homology_i if pos == star}
            if len(degs) != 1:
                out.append(None)
                continue
            for (pos, d, j), h in homology_i.items():
                if pos == star:
                    row[(j, d)] = row.get((j, d), 0) + h
        out.append(row)
    return out
