"""Trivial extensions, smash-product quivers ℤ_v|Q and extendability."""
from __future__ import annotations

from dataclasses import dataclass

from .algebra import GradedBasis
from .quiver import Arrow, BoundQuiver, Element, Path
from .translation import (TranslationError, TranslationStructure, arrow_translation,
                          check_admissible, check_n_translation)


class ConstructionError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Window:
    """v > 0: the cyclic group ℤ_v; v = 0: layers t_min..t_max of ℤ."""

    v: int
    t_min: int = 0
    t_max: int = 0

    def __post_init__(self):
        if self.v < 0:
            raise ValueError("v must be nonnegative")
        if self.v == 0 and self.t_min > self.t_max:
            raise ValueError("empty window")

    def layers(self) -> list[int]:
        return list(range(self.v)) if self.v else list(range(self.t_min, self.t_max + 1))

    def wrap(self, t: int):
        if self.v:
            return t % self.v
        return t if self.t_min <= t <= self.t_max else None


def beta_names(q: BoundQuiver, ts: TranslationStructure) -> dict:
    """Names b<i> for the returning arrows, primed when they clash with existing arrows."""
    taken = {a.name for a in q.arrows}
    names = {}
    for i in q.vertices:
        if i not in ts.tau:
            continue
        nm = f"b{i}"
        while nm in taken:
            nm += "'"
        taken.add(nm)
        names[i] = nm
    return names


def _require_admissible(gb: GradedBasis, ts: TranslationStructure):
    chk = check_n_translation(gb, ts)
    if not chk["passes"]:
        raise ConstructionError("input is not an n-translation quiver", chk["failures"])
    adm = check_admissible(gb, ts)
    if not adm["pass"]:
        bad = next(k for k in ("i", "ii", "iii") if not adm[k]["pass"])
        raise ConstructionError(f"admissibility ({bad}) fails", adm[bad]["witness"])


def _translated_arrows(gb: GradedBasis, ts: TranslationStructure) -> dict:
    out = {}
    for a in gb.quiver.arrows:
        if a.source in ts.tau and a.target in ts.tau:
            try:
                out[a.name] = arrow_translation(gb, ts, a.name)
            except TranslationError as exc:
                raise ConstructionError(f"arrow translation failed for {a.name}: {exc}") from None
    return out


def trivial_extension(q: BoundQuiver, gb: GradedBasis, ts: TranslationStructure) -> BoundQuiver:
    """Quiver of Λ ⋉ D_*Λ: add β_i: i → τi with the ββ and commutation relations."""
    _require_admissible(gb, ts)
    F = q.field
    tau_arrow = _translated_arrows(gb, ts)
    bn = beta_names(q, ts)
    arrows = list(q.arrows) + [Arrow(bn[i], i, ts.tau[i]) for i in q.vertices if i in bn]
    rels = list(q.relations)
    for i in q.vertices:
        if i in ts.tau and ts.tau[i] in ts.tau:
            ti = ts.tau[i]
            rels.append(Element({Path(i, ts.tau[ti], (bn[ti], bn[i])): F.one}))
    for a in q.arrows:
        if a.name not in tau_arrow:
            continue
        i, j = a.source, a.target
        terms = {Path(i, ts.tau[j], (z.arrows[0], bn[i])): c for z, c in tau_arrow[a.name].terms.items()}
        terms[Path(i, ts.tau[j], (bn[j], a.name))] = terms.get(Path(i, ts.tau[j], (bn[j], a.name)), F.zero) - F.one
        rels.append(Element(terms))
    out = q.with_(arrows=tuple(arrows), relations=tuple(r for r in rels if not r.is_zero()),
                  n=ts.n + 1, translation=tuple((v, v) for v in q.vertices), metadata=())
    return out


def _layer(name: str, t) -> str:
    return f"{name}@{t}"


def smash_extension(q: BoundQuiver, gb: GradedBasis, ts: TranslationStructure, w: Window) -> BoundQuiver:
    """The quiver ℤ_v|_{n+1}Q of the smash product of the trivial extension with kℤ_v^*.

    Vertices (i, t) are named ``i@t``; layer arrows ``α@t``; cross arrows
    ``b<i>@t`` run (i, t-1) → (τi, t).  For v = 0 only the window's layers are
    built and relations that would leave the window are dropped.
    """
    _require_admissible(gb, ts)
    F = q.field
    tau_arrow = _translated_arrows(gb, ts)
    bn = beta_names(q, ts)
    layers = w.layers()
    vertices = tuple(_layer(i, t) for t in layers for i in q.vertices)
    arrows = []
    for t in layers:
        for a in q.arrows:
            arrows.append(Arrow(_layer(a.name, t), _layer(a.source, t), _layer(a.target, t)))
    for t in layers:
        prev = w.wrap(t - 1)
        if prev is None:
            continue
        for i in q.vertices:
            if i in bn:
                arrows.append(Arrow(_layer(bn[i], t), _layer(i, prev), _layer(ts.tau[i], t)))
    names = {a.name: a for a in arrows}
    dropped = 0

    def path(*names_written) -> Path | None:
        arrs = [names.get(nm) for nm in names_written]
        if any(a is None for a in arrs):
            return None
        return Path(arrs[-1].source, arrs[0].target, tuple(names_written))

    rels = []
    for t in layers:
        for r in q.relations:
            terms = {}
            ok = True
            for p, c in r.terms.items():
                pp = path(*(_layer(x, t) for x in p.arrows))
                if pp is None:
                    ok = False
                    break
                terms[pp] = c
            if ok:
                rels.append(Element(terms))
            else:
                dropped += 1
    for t in layers:
        t1 = w.wrap(t + 1)
        for i in q.vertices:
            if i in ts.tau and ts.tau[i] in ts.tau:
                if t1 is None or w.wrap(t) is None:
                    dropped += 1
                    continue
                pp = path(_layer(bn[ts.tau[i]], t1), _layer(bn[i], t))
                if pp is None:
                    dropped += 1
                    continue
                rels.append(Element({pp: F.one}))
    for t in layers:
        t1 = w.wrap(t + 1)
        for a in q.arrows:
            if a.name not in tau_arrow:
                continue
            if t1 is None:
                dropped += 1
                continue
            i, j = a.source, a.target
            terms: dict = {}
            ok = True
            for z, c in tau_arrow[a.name].terms.items():
                pp = path(_layer(z.arrows[0], t1), _layer(bn[i], t1))
                if pp is None:
                    ok = False
                    break
                terms[pp] = terms.get(pp, F.zero) + c
            pp = path(_layer(bn[j], t1), _layer(a.name, t))
            if pp is None or not ok:
                dropped += 1
                continue
            terms[pp] = terms.get(pp, F.zero) - F.one
            rels.append(Element(terms))
    trans = []
    for t in layers:
        prev = w.wrap(t - 1)
        if prev is None:
            continue
        for i in q.vertices:
            trans.append((_layer(i, t), _layer(i, prev)))
    meta = [("smash_v", str(w.v))]
    if w.v == 0:
        meta.append(("window", f"{w.t_min}..{w.t_max}"))
        meta.append(("margin", str(ts.n + 1)))
        meta.append(("dropped_relations", str(dropped)))
    return BoundQuiver(vertices, tuple(arrows), tuple(r for r in rels if not r.is_zero()), F,
                       ts.n + 1, tuple(trans), tuple(meta))


def is_extendable(q: BoundQuiver, gb: GradedBasis, ts: TranslationStructure, D: int) -> dict:
    """Build the trivial extension and decide whether it is an (n+1)-translation algebra."""
    from .algebra import graded_basis
    from .koszul import classify_pq
    from .translation import infer_translation
    try:
        tq = trivial_extension(q, gb, ts)
    except ConstructionError as exc:
        return {"extendable": False, "reason": str(exc), "witness": exc.witness}
    tgb = graded_basis(tq, max(D, ts.n + 3))
    try:
        tts = infer_translation(tgb, ts.n + 1)
    except TranslationError as exc:
        return {"extendable": False, "reason": f"trivial extension: {exc}"}
    chk = check_n_translation(tgb, tts)
    adm = check_admissible(tgb, tts)
    rep = classify_pq(tgb, None, D, n=ts.n + 1)
    ok = chk["passes"] and adm["pass"] and rep.n_translation.get("is_n_translation_algebra", False)
    out = {"extendable": bool(ok), "p": rep.p, "q": rep.q,
           "koszul_up_to": rep.koszul_up_to, "stable": chk["stable"], "admissible": adm["pass"]}
    if not ok:
        out["reason"] = rep.failure or "trivial extension is not an (n+1)-translation algebra"
    return out
