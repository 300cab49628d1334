"""τ-hammocks, radical layers, n-almost split sequences and partial AS-regularity.

Γ below is always E(Λ) = (Λ^!)^op, drawn on the same vertices and with the same
arrow orientation as Λ, so that Γe_i is spanned by Γ-paths starting at i.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .algebra import GradedBasis, graded_basis, minimal_resolution
from .koszul import KoszulReport, KoszulSpaces, koszul_spaces
from .linalg import rank_rows, rref_rows, reduce_vector
from .quiver import BoundQuiver, Element, Path
from .translation import TranslationStructure


class HypothesisError(ValueError):
    """The input does not satisfy the hypotheses an operation needs."""


@dataclass
class Hammock:
    start: str
    n: int
    levels: list                       # levels[t] = {j: μ(j, t)}, trailing empty levels dropped
    arrows: list = dc_field(default_factory=list)   # (j, t, j2, label): (j,t) → (j2,t+1)

    def mu(self, j: str, t: int) -> int:
        return self.levels[t].get(j, 0) if t < len(self.levels) else 0

    def entries(self) -> list[tuple]:
        return [(j, t, m) for t, lev in enumerate(self.levels) for j, m in lev.items()]

    def vertices(self) -> set:
        return {j for lev in self.levels for j in lev}

    def to_json(self) -> dict:
        return {
            "start": self.start,
            "n": self.n,
            "levels": [[{"vertex": j, "mult": m} for j, m in lev.items()] for lev in self.levels],
            "arrows": [{"from": [j, t], "to": [j2, t + 1], "label": a} for j, t, j2, a in self.arrows],
        }

    def to_dot(self, name: str = "H") -> str:
        def node(j, t):
            return f'"{j},{t}"'
        lines = [f'digraph "{name}" {{', "  rankdir=LR;"]
        for t, lev in enumerate(self.levels):
            body = " ".join(f'{node(j, t)} [label="({j},{t}) x{m}"];' for j, m in lev.items())
            lines.append(f"  {{ rank=same; {body} }}")
        for j, t, j2, a in self.arrows:
            lines.append(f'  {node(j, t)} -> {node(j2, t + 1)} [label="{a}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def hammock(gb: GradedBasis, ts: TranslationStructure | None, i: str, n: int | None = None) -> Hammock:
    """μ^i(j,t) = dim e_jΛ_te_i for t = 0..n+1, with arrows along bound extensions."""
    q = gb.quiver
    if i not in q.vertex_index:
        raise KeyError(f"unknown vertex {i}")
    if n is None:
        n = ts.n if ts is not None else max(gb.top_degree() - 1, 0)
    top = min(n + 1, gb.max_degree)
    levels = []
    arrows = []
    for t in range(top + 1):
        lev = {}
        for j in q.vertices:
            d = gb.dim(t, i, j)
            if d:
                lev[j] = d
        levels.append(lev)
        if t == top:
            break
        for j in lev:
            for a in q.arrows_from(j):
                if any(gb.left_arrow(a.name, b) for b in gb.basis(t, i, j)):
                    arrows.append((j, t, a.target, a.name))
    while levels and not levels[-1]:
        levels.pop()
    arrows = [x for x in arrows if x[1] + 1 < len(levels)]
    return Hammock(i, n, levels, arrows)


def radical_layers(gb: GradedBasis, i: str) -> list[list[tuple]]:
    """Λ_te_i as ⊕ S(j)^μ for every degree t up to the top (or the cap)."""
    q = gb.quiver
    out = []
    for t in range(gb.max_degree + 1):
        layer = [(j, gb.dim(t, i, j)) for j in q.vertices if gb.dim(t, i, j)]
        if not layer:
            break
        out.append(layer)
    return out


def format_layers(layers: list[list[tuple]]) -> str:
    def one(j, m):
        return f"S({j})" if m == 1 else f"S({j})^{m}"
    return "\n".join(f"{t}: " + " + ".join(one(j, m) for j, m in layer) for t, layer in enumerate(layers))


def _dual(q: BoundQuiver):
    from .dual import koszul_dual_quiver
    return koszul_dual_quiver(q)


@dataclass
class AlmostSplitEntry:
    vertex: str
    exists: bool
    reason: str
    terms: list                        # terms[t] = [(proj vertex, mult)]
    witness_dim: int = 0
    oracle_exists: bool | None = None

    def to_json(self) -> dict:
        out = {"vertex": self.vertex, "exists": self.exists, "reason": self.reason,
               "terms": [[{"proj": j, "mult": m} for j, m in term] for term in self.terms]}
        if self.witness_dim:
            out["witness_dim"] = self.witness_dim
        if self.oracle_exists is not None:
            out["oracle_exists"] = self.oracle_exists
        return out


@dataclass
class AlmostSplitReport:
    n: int
    q: int | None
    cap: int
    entries: list

    @property
    def oracle_agrees(self) -> bool:
        return all(e.oracle_exists is None or e.oracle_exists == e.exists for e in self.entries)

    def to_json(self) -> dict:
        return {"n": self.n, "q": self.q, "cap": self.cap, "oracle_agrees": self.oracle_agrees,
                "vertices": [e.to_json() for e in self.entries]}

    def format_text(self) -> str:
        lines = []
        for e in self.entries:
            lines.append(f"{e.vertex}: {'exists' if e.exists else 'none'} ({e.reason})")
            for t, term in enumerate(e.terms):
                body = " + ".join(f"Γe{j}" + (f"^{m}" if m > 1 else "") for j, m in term)
                lines.append(f"  M^{t} = {body}")
        return "\n".join(lines)


def almost_split_report(q: BoundQuiver, gb: GradedBasis, ts: TranslationStructure, kr: KoszulReport,
                        oracle: bool = True) -> AlmostSplitReport:
    """n-almost split sequences in add Γ, one entry per vertex i ∉ I.

    The sequence for i exists when q is infinite (Koszul up to the cap) or
    Γ_q e_{νi} = 0 with ν = τ⁻¹.  Terms are M^t = ⊕ (Γe_j)^{μ^i(j,t)}.  With
    ``oracle`` the minimal Γ-resolution of S(i) is also checked for vanishing at
    step n+2.
    """
    if not kr.n_translation.get("is_n_translation_algebra"):
        raise HypothesisError("input is not an n-translation algebra")
    n = ts.n
    cap = kr.cap
    G = _dual(q)
    ggb = graded_basis(G, max(cap, n + 2))
    ks = None
    nu = ts.tau_inv
    entries = []
    for i in q.vertices:
        if i not in nu:
            continue
        h = hammock(gb, ts, i, n)
        terms = [sorted(lev.items(), key=lambda kv: q.vertex_index[kv[0]]) for lev in h.levels]
        if kr.q is None:
            exists, reason, wd = True, f"q infinite (Koszul up to cap {cap})", 0
        else:
            if kr.q > ggb.max_degree:
                ggb = graded_basis(G, kr.q)
            wd = sum(ggb.dim(kr.q, nu[i], j) for j in G.vertices)
            if ks is None:
                ks = koszul_spaces(gb, max(kr.q, 1))
            kd = sum(ks.dim(kr.q, nu[i], j) for j in q.vertices)
            if kd != wd:
                raise AssertionError(f"dim Γ_q e_{nu[i]} = {wd} but K^q gives {kd}")
            exists = wd == 0
            reason = (f"Γ_{kr.q} e_{nu[i]} = 0" if exists else f"Γ_{kr.q} e_{nu[i]} ≠ 0 (dim {wd})")
        entry = AlmostSplitEntry(i, exists, reason, terms, wd)
        if exists and (len(terms) != n + 2 or terms[n + 1] != [(nu[i], 1)]):
            raise AssertionError(f"hammock of {i} does not end in the singleton {nu[i]}")
        if oracle:
            res = minimal_resolution(ggb, i, n + 2)
            entry.oracle_exists = not res.steps[n + 2]
        entries.append(entry)
    return AlmostSplitReport(n, kr.q, cap, entries)


# -- partial Artin-Schelter regularity -------------------------------------------------

def _hom_labels(ggb: GradedBasis, gens: list, e: int) -> list:
    """Basis of Hom(P, Γ) in degree e: (generator, path ending at its vertex of degree d_g + e)."""
    out = []
    for g, gen in enumerate(gens):
        k = gen.degree + e
        if 0 <= k <= ggb.max_degree:
            out.extend((g, x) for x in ggb.basis_to(k, gen.vertex))
    return out


def _hom_differential(ggb: GradedBasis, src_gens: list, dst_gens: list, e: int):
    """Matrix (rows = dst labels) of f ↦ f∘∂ from Hom(P^t, Γ)_e to Hom(P^{t+1}, Γ)_e."""
    F = ggb.field
    dom = _hom_labels(ggb, src_gens, e)
    cod = _hom_labels(ggb, dst_gens, e)
    pos = {lab: k for k, lab in enumerate(cod)}
    rows = [[F.zero] * len(dom) for _ in cod]
    for c, (g, x) in enumerate(dom):
        for h, gen in enumerate(dst_gens):
            for (g2, mu), coef in gen.image.items():
                if g2 != g:
                    continue
                for w, cw in ggb.mul_paths(mu, x).items():
                    rows[pos[(h, w)]][c] += coef * cw
    return dom, cod, rows


def hom_cohomology(ggb: GradedBasis, i: str, n: int):
    """Cohomology of the truncated complex Hom(P^0) → … → Hom(P^{n+1}) for S(i) over Γ.

    Returns ({(t, e): dim}, resolution, certified degrees) where e is the internal degree
    shift of the homomorphisms.  Degrees whose pieces would need paths above the cap
    are skipped.
    """
    res = minimal_resolution(ggb, i, n + 1)
    dmax = max((g.degree for step in res.steps for g in step), default=0)
    out = {}
    degrees = [e for e in range(-dmax, ggb.max_degree - dmax + 1)]
    for e in degrees:
        ranks = {}
        dims = {}
        for t in range(n + 2):
            dims[t] = len(_hom_labels(ggb, res.steps[t], e))
            if t <= n:
                _, _, rows = _hom_differential(ggb, res.steps[t], res.steps[t + 1], e)
                ranks[t] = rank_rows(rows, dims[t]) if rows and dims[t] else 0
        for t in range(n + 2):
            h = dims[t] - ranks.get(t, 0) - ranks.get(t - 1, 0)
            if h:
                out[(t, e)] = h
    return out, res, degrees


def _top_class_at(ggb: GradedBasis, res, n: int, v: str) -> bool:
    """Is the identity on a generator of P^{n+1} at vertex v outside the image of δ?"""
    last = res.steps[n + 1]
    for h, gen in enumerate(last):
        if gen.vertex != v:
            continue
        e = -gen.degree
        _, cod, rows = _hom_differential(ggb, res.steps[n], last, e)
        F = ggb.field
        cols = [[rows[r][c] for r in range(len(cod))] for c in range(len(rows[0]) if rows else 0)]
        red, piv = rref_rows(cols, len(cod))
        target = [F.zero] * len(cod)
        target[cod.index((h, Path.trivial(v)))] = F.one
        if any(reduce_vector(target, red, piv)):
            return True
    return False


def partial_as_regular(q: BoundQuiver, gb: GradedBasis, ts: TranslationStructure, kr: KoszulReport,
                       D: int | None = None, oracle: bool = True) -> dict:
    """Verdict on Γ = E(Λ) being partial Artin-Schelter n-regular, through the Koszul equivalence.

    Needs n+1 ≥ 2 and q ≥ 2 (or Koszul up to the cap); otherwise the verdict is
    "out of theorem scope".  The oracle computes, for each non-injective vertex i,
    the truncated complex Hom_Γ(P^•, Γ) from the minimal resolution of S(i) and
    asks for vanishing in positions 1..n and a single class at position n+1
    carried by Γe_{νi}.
    """
    n = ts.n
    D = kr.cap if D is None else D
    out: dict = {"n": n}
    in_scope = (n + 1 >= 2 and kr.failure is None and (kr.q is None or kr.q >= 2))
    if in_scope:
        out["is_partial_AS_n_regular"] = bool(kr.n_translation.get("is_n_translation_algebra"))
        out["nakayama"] = dict(ts.tau_inv)
        out["gorenstein_parameter"] = kr.q if kr.q is not None else 0
    else:
        out["is_partial_AS_n_regular"] = "out of theorem scope"
    if not oracle:
        return out
    ggb = graded_basis(_dual(q), max(D, n + 3))
    per = {}
    ok_all = True
    for i in q.vertices:
        if i not in ts.tau_inv:
            continue
        coh, res, _ = hom_cohomology(ggb, i, n)
        low = {k: v for k, v in coh.items() if 1 <= k[0] <= n}
        top = sum(v for (t, _), v in coh.items() if t == n + 1)
        ok = not low and top == 1 and _top_class_at(ggb, res, n, ts.tau_inv[i])
        per[i] = {"ok": ok, "ext_low": sorted([list(k) + [v] for k, v in low.items()]), "ext_top": top}
        ok_all = ok_all and ok
    out["oracle"] = per
    out["oracle_verdict"] = ok_all
    if in_scope:
        out["oracle_agrees"] = ok_all == out["is_partial_AS_n_regular"]
    return out


# -- slice truncation ------------------------------------------------------------------

def koszul_hammock_vertices(ks: KoszulSpaces, i: str) -> set:
    """Vertices j with K^s(i → j) ≠ 0 for some s: the hammock of S(i)'s linear resolution."""
    out = {i}
    for t in range(1, ks.max_degree + 1):
        for (src, j) in ks.components(t):
            if src == i:
                out.add(j)
    return out


def slice_truncation(big: BoundQuiver, gb: GradedBasis, ts: TranslationStructure | None, slice_: list,
                     mode: str = "koszul", D: int | None = None) -> BoundQuiver:
    """Full bound subquiver on the union of the hammocks starting at the slice vertices.

    ``mode="koszul"`` uses the hammocks of the linear resolutions (vertices reached
    by the Koszul spaces K^s e_i); ``mode="algebra"`` uses the τ-hammocks of Λ.
    Relations keep their surviving terms when both endpoints survive.
    """
    for v in slice_:
        if v not in big.vertex_index:
            raise KeyError(f"slice vertex {v} not in quiver")
    keep: set = set()
    if mode == "koszul":
        ks = koszul_spaces(gb, D if D is not None else gb.max_degree)
        for v in slice_:
            keep |= koszul_hammock_vertices(ks, v)
    elif mode == "algebra":
        for v in slice_:
            keep |= hammock(gb, ts, v, gb.max_degree).vertices()
    else:
        raise ValueError(f"unknown hammock mode {mode}")
    verts = tuple(v for v in big.vertices if v in keep)
    arrows = tuple(a for a in big.arrows if a.source in keep and a.target in keep)
    names = {a.name for a in arrows}
    rels = []
    trimmed = 0
    for r in big.relations:
        if r.source not in keep or r.target not in keep:
            continue
        terms = {p: c for p, c in r.terms.items() if all(x in names for x in p.arrows)}
        if len(terms) != len(r.terms):
            trimmed += 1
        if terms:
            rels.append(Element(terms))
    # drop duplicates created by trimming, keeping first occurrences
    seen = set()
    uniq = []
    for r in rels:
        key = frozenset(r.terms.items())
        if key not in seen:
            seen.add(key)
            uniq.append(r)
    trans = tuple((a, b) for a, b in big.translation if a in keep and b in keep)
    meta = tuple((k, v) for k, v in big.metadata if k not in ("dropped_relations", "window", "margin"))
    meta += (("slice", ",".join(slice_)), ("trimmed_relations", str(trimmed)))
    return big.with_(vertices=verts, arrows=arrows, relations=tuple(uniq), translation=trans, metadata=meta)
