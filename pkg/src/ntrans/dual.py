"""Quadratic duals.

The dual of a word x = α2.α1 is the word α1*.α2* on the opposite quiver and the
two pair to 1; distinct words pair to 0.  This is the evaluation rule
f2⊗f1(x1⊗x2) = f1(x1)·f2(x2) with no signs.
"""
from __future__ import annotations

from .koszul import NotQuadraticError, relation_space
from .linalg import kernel_rows, rref_rows
from .quiver import BoundQuiver, Element, Path, opposite, rename_arrows


def dual_word(w: Path, suffix: str = "*") -> Path:
    return Path(w.target, w.source, tuple(a + suffix for a in reversed(w.arrows)))


def perp_components(q: BoundQuiver) -> dict:
    """R⊥ per (source, target) of q, expressed in q's own word coordinates."""
    if not q.is_quadratic:
        raise NotQuadraticError("quadratic dual needs quadratic relations")
    R = relation_space(q)
    F = q.field
    out = {}
    for i in q.vertices:
        for j in q.vertices:
            words = q.words(2, i, j)
            if not words:
                continue
            rows = [[r.get(w, F.zero) for w in words] for r in R.get((i, j), [])]
            ker = kernel_rows(rows, len(words), F)
            if ker:
                out[(i, j)] = [{w: c for w, c in zip(words, v) if c} for v in ker]
    return out


def quadratic_dual(q: BoundQuiver, suffix: str = "*") -> BoundQuiver:
    """Λ^! on the opposite quiver with relations R⊥ in rref over dual words."""
    perp = perp_components(q)
    dq = opposite(q.with_(relations=()), suffix)
    F = q.field
    rels = []
    for i in q.vertices:
        for j in q.vertices:
            vecs = perp.get((i, j))
            if not vecs:
                continue
            dual_vecs = [{dual_word(w, suffix): c for w, c in v.items()} for v in vecs]
            words = sorted({w for v in dual_vecs for w in v}, key=dq.path_key)
            red, _ = rref_rows([[v.get(w, F.zero) for w in words] for v in dual_vecs], len(words))
            rels.extend(Element({w: c for w, c in zip(words, r) if c}) for r in red)
    return dq.with_(relations=tuple(rels), n=None, translation=(), metadata=())


def koszul_dual_quiver(q: BoundQuiver, suffix: str = "*") -> BoundQuiver:
    """E(Λ) = (Λ^!)^op: same orientation as q, relations R⊥, arrows renamed with ``suffix``."""
    return opposite(quadratic_dual(q, suffix), "")


def _spans_equal(a: BoundQuiver, b: BoundQuiver) -> bool:
    ra, rb = relation_space(a), relation_space(b)
    keys = {k for k, v in ra.items() if v} | {k for k, v in rb.items() if v}
    return all(ra.get(k, []) == rb.get(k, []) for k in keys)


def check_double_dual(q: BoundQuiver) -> bool:
    """(Λ^!)^! = Λ under α ↦ α**, compared by canonical relation spans."""
    dd = quadratic_dual(quadratic_dual(q, "*"), "*")
    ren = {a.name: a.name[:-2] for a in dd.arrows}
    back = rename_arrows(dd, ren)
    if back.vertices != q.vertices:
        return False
    if [(a.name, a.source, a.target) for a in back.arrows] != [(a.name, a.source, a.target) for a in q.arrows]:
        return False
    return _spans_equal(back, q)
