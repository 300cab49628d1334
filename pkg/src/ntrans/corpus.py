"""Named test quivers and a seeded generator of small random quadratic ones."""
from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .linalg import QQ, Field, rref_rows
from .quiver import Arrow, BoundQuiver, Element, parse_quiver

NAMED = ("a4rad2", "tilde_a4rad2", "loop_x2", "a2_free")


def named(name: str) -> BoundQuiver:
    text = resources.files("ntrans").joinpath("data", f"{name}.quiver").read_text(encoding="utf-8")
    return parse_quiver(text)


@lru_cache(maxsize=None)
def derived() -> dict:
    """The constructed members: smash quivers of a4rad2, the ℤ window and its slice truncation Q(2)."""
    from .algebra import graded_basis
    from .constructions import Window, smash_extension
    from .hammock import slice_truncation
    from .translation import infer_translation

    q = named("a4rad2")
    gb = graded_basis(q, 4)
    ts = infer_translation(gb, 0)
    out = {
        "smash_v1": smash_extension(q, gb, ts, Window(1)),
        "smash_v2": smash_extension(q, gb, ts, Window(2)),
    }
    z = smash_extension(q, gb, ts, Window(0, 1, 4))
    out["z_window_1_4"] = z
    zgb = graded_basis(z, 8)
    out["q2"] = slice_truncation(z, zgb, None, [f"{i}@1" for i in q.vertices])
    return out


def random_quadratic(rng: random.Random, field: Field = QQ, max_vertices: int = 3,
                     max_arrows: int = 4) -> BoundQuiver:
    """A small quiver with a random quadratic relation space, given in rref over words."""
    nv = rng.randint(1, max_vertices)
    verts = tuple(str(k + 1) for k in range(nv))
    na = rng.randint(1, max_arrows)
    arrows = tuple(Arrow(f"x{k + 1}", rng.choice(verts), rng.choice(verts)) for k in range(na))
    q = BoundQuiver(verts, arrows, (), field, None, (), ())
    rels = []
    for i in verts:
        for j in verts:
            words = q.words(2, i, j)
            if not words:
                continue
            k = rng.randint(0, len(words))
            rows = [[field(Fraction(rng.randint(-2, 2))) if rng.random() < 0.6 else field.zero
                     for _ in words] for _ in range(k)]
            red, _ = rref_rows(rows, len(words))
            for r in red:
                rels.append(Element({w: c for w, c in zip(words, r) if c}))
    return q.with_(relations=tuple(rels))


def random_corpus(seed: int, count: int = 10, field: Field = QQ) -> list[BoundQuiver]:
    rng = random.Random(seed)
    return [random_quadratic(rng, field) for _ in range(count)]
