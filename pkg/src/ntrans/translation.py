"""n-translation structure: inference of τ, P, I and the checks built on it."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .algebra import GradedBasis
from .linalg import InconsistentSystemError, Matrix, rank_rows, rref_rows, reduce_vector, solve
from .quiver import Element, Path


class TranslationError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass
class TranslationStructure:
    n: int
    tau: dict                     # i -> τi, defined off P
    P: tuple
    I: tuple
    p: dict = dc_field(default_factory=dict)   # i -> chosen path of length n+1 from τi to i

    @property
    def tau_inv(self) -> dict:
        return {j: i for i, j in self.tau.items()}

    @property
    def is_null(self) -> bool:
        return not self.tau

    @property
    def is_stable(self) -> bool:
        return not self.P and not self.I

    def to_json(self) -> dict:
        return {"n": self.n, "tau": dict(self.tau), "P": list(self.P), "I": list(self.I),
                "paths": {i: str(p) for i, p in self.p.items()}}


def _ordered(gb: GradedBasis, vs) -> tuple:
    idx = gb.quiver.vertex_index
    return tuple(sorted(vs, key=idx.__getitem__))


def _require_top(gb: GradedBasis, n: int):
    if gb.max_degree < n + 2:
        raise TranslationError(f"degree cap {gb.max_degree} too small to certify Λ_{n + 2} = 0")
    if gb.components(n + 2):
        i, j = gb.components(n + 2)[0]
        raise TranslationError(f"Λ_{n + 2} ≠ 0", witness=str(gb.basis(n + 2, i, j)[0]))


def socle_piece(gb: GradedBasis, t: int, i: str, j: str) -> list[list]:
    """Basis (coordinates) of elements of e_jΛ_te_i killed by every arrow on both sides."""
    F = gb.field
    basis = gb.basis(t, i, j)
    if not basis or t + 1 > gb.max_degree:
        return [[F.one if k == m else F.zero for k in range(len(basis))] for m in range(len(basis))]
    return _annihilated(gb, t, i, j, left=True, right=True)


def _annihilated(gb: GradedBasis, t: int, i: str, j: str, left: bool, right: bool) -> list[list]:
    from .linalg import kernel_rows
    q, F = gb.quiver, gb.field
    basis = gb.basis(t, i, j)
    rows = []
    blocks = []
    if left:
        for a in q.arrows_from(j):
            blocks.append([gb.left_arrow(a.name, b) for b in basis])
    if right:
        for a in q.arrows_to(i):
            blocks.append([gb.right_arrow(b, a.name) for b in basis])
    for imgs in blocks:
        labels = sorted({w for im in imgs for w in im}, key=gb.quiver.path_key)
        for w in labels:
            rows.append([im.get(w, F.zero) for im in imgs])
    return kernel_rows(rows, len(basis), F)


def infer_translation(gb: GradedBasis, n: int) -> TranslationStructure:
    """Read τ, P, I off the degree-(n+1) part of Λ."""
    q = gb.quiver
    _require_top(gb, n)
    if not gb.components(n + 1):
        verts = tuple(q.vertices)
        return TranslationStructure(n, {}, verts, verts, {})
    for t in range(0, n + 1):
        for i, j in gb.components(t):
            soc = socle_piece(gb, t, i, j)
            if soc:
                w = gb.element(soc[0], t, i, j)
                raise TranslationError(f"maximal path of wrong length {t} (expected {n + 1})",
                                       witness=str(w))
    tau: dict = {}
    p: dict = {}
    for i in q.vertices:
        sources = [s for (s, tg) in gb.components(n + 1) if tg == i]
        if not sources:
            continue
        if len(sources) > 1:
            raise TranslationError(f"maximal paths into {i} start at several vertices {sources}",
                                   witness=(i, sources))
        s = sources[0]
        if gb.dim(n + 1, s, i) > 1:
            raise TranslationError(f"two independent maximal paths {s}→{i}", witness=(s, i))
        tau[i] = s
        p[i] = gb.basis(n + 1, s, i)[0]
    images = list(tau.values())
    if len(set(images)) != len(images):
        dup = next(v for v in images if images.count(v) > 1)
        raise TranslationError(f"τ not injective: several vertices map to {dup}", witness=dup)
    P = _ordered(gb, [v for v in q.vertices if v not in tau])
    I = _ordered(gb, [v for v in q.vertices if v not in set(images)])
    return TranslationStructure(n, tau, P, I, p)


def pairing_matrix(gb: GradedBasis, ts: TranslationStructure, i: str, j: str, t: int):
    """M[u, v] = coefficient of p_i in u·v for u ∈ e_iΛ_te_j, v ∈ e_jΛ_{n+1-t}e_{τi}."""
    F = gb.field
    ti = ts.tau[i]
    pi = ts.p[i]
    U = gb.basis(t, j, i)
    V = gb.basis(ts.n + 1 - t, ti, j)
    M = []
    for u in U:
        M.append([gb.mul_paths(u, v).get(pi, F.zero) for v in V])
    return U, V, M


def self_injective_test(gb: GradedBasis):
    """Nakayama-permutation criterion, computed independently of τ.

    Each Λe_i must have a simple socle S(νi), each e_iΛ a simple socle, and ν must be a
    permutation matching the right socles.  Returns None when Λ is not finite within the cap.
    """
    q = gb.quiver
    D = gb.max_degree
    if gb.components(D) and q.arrows:
        return None
    left_soc: dict = {}
    right_soc: dict = {}
    for i in q.vertices:
        found = []
        for t in range(D + 1):
            for (s, j) in gb.components(t):
                if s != i:
                    continue
                if t == D:
                    k = gb.dim(t, s, j)
                else:
                    k = len(_annihilated(gb, t, s, j, left=True, right=False))
                found.extend([j] * k)
        if len(found) != 1:
            return False
        left_soc[i] = found[0]
        found = []
        for t in range(D + 1):
            for (s, j) in gb.components(t):
                if j != i:
                    continue
                if t == D:
                    k = gb.dim(t, s, j)
                else:
                    k = len(_annihilated(gb, t, s, j, left=False, right=True))
                found.extend([s] * k)
        if len(found) != 1:
            return False
        right_soc[i] = found[0]
    nu = left_soc
    if len(set(nu.values())) != len(nu):
        return False
    return all(right_soc[nu[i]] == i for i in q.vertices)


def check_n_translation(gb: GradedBasis, ts: TranslationStructure) -> dict:
    """Conditions 1, 2 and the pairing condition (5), plus stability flags."""
    q = gb.quiver
    n = ts.n
    failures = []
    cond1 = cond2 = cond5 = True
    try:
        _require_top(gb, n)
    except TranslationError as exc:
        cond1 = False
        failures.append({"condition": "1", "reason": str(exc), "witness": exc.witness})
    null = cond1 and not gb.components(n + 1)
    if cond1 and not null:
        for t in range(0, n + 1):
            for i, j in gb.components(t):
                if socle_piece(gb, t, i, j):
                    cond1 = False
                    failures.append({"condition": "1", "reason": f"maximal path of length {t}",
                                     "witness": [i, j, t]})
        for (s, i) in gb.components(n + 1):
            if ts.tau.get(i) != s:
                cond1 = False
                failures.append({"condition": "1", "reason": f"path of length {n + 1} from {s} to {i} "
                                 "does not start at τi", "witness": [s, i]})
        for i in ts.tau:
            if gb.dim(n + 1, ts.tau[i], i) == 0:
                cond1 = False
                failures.append({"condition": "1", "reason": f"no bound path τ{i}→{i}", "witness": i})
            elif gb.dim(n + 1, ts.tau[i], i) > 1:
                cond2 = False
                failures.append({"condition": "2", "reason": "independent maximal paths",
                                 "witness": [ts.tau[i], i]})
        imgs = list(ts.tau.values())
        if len(set(imgs)) != len(imgs):
            cond1 = False
            failures.append({"condition": "1", "reason": "τ not injective", "witness": imgs})
        if cond1 and cond2:
            for i in ts.tau:
                for j in q.vertices:
                    for t in range(n + 2):
                        U, V, M = pairing_matrix(gb, ts, i, j, t)
                        if not U and not V:
                            continue
                        if len(U) != len(V) or rank_rows(M, len(V)) != len(U):
                            cond5 = False
                            failures.append({"condition": "5", "reason": "degenerate pairing",
                                             "witness": [i, j, t]})
    ok = cond1 and cond2 and cond5
    return {
        "n": n,
        "conditions": {"1": cond1, "2": cond2, "5": cond5},
        "passes": ok,
        "stable": ts.is_stable and not null,
        "null": null,
        "self_injective": self_injective_test(gb),
        "failures": failures,
    }


def arrow_translation(gb: GradedBasis, ts: TranslationStructure, alpha: str) -> Element:
    """τ(α) for an arrow α: i → j with i, j ∉ P, via the two dual-basis solves."""
    q, F = gb.quiver, gb.field
    a = q.arrow(alpha)
    i, j = a.source, a.target
    for v in (i, j):
        if v not in ts.tau:
            raise TranslationError(f"vertex {v} is projective; τ({alpha}) undefined", witness=v)
    n = ts.n
    ti, tj = ts.tau[i], ts.tau[j]
    arrows_ij = [b.name for b in q.arrows_from(i) if b.target == j]
    Qn = gb.basis(n, tj, i)
    pj, pi = ts.p[j], ts.p[i]
    A = [[gb.left_arrow(b, w).get(pj, F.zero) for w in Qn] for b in arrows_ij]
    duals = []
    try:
        for k in range(len(arrows_ij)):
            rhs = [F.one if m == k else F.zero for m in range(len(arrows_ij))]
            x = solve(Matrix(tuple(tuple(r) for r in A), len(Qn), F), rhs)
            duals.append({w: c for w, c in zip(Qn, x) if c})
    except InconsistentSystemError:
        raise TranslationError("pairing degenerate while computing dual paths",
                               witness=[i, j]) from None
    targets = [b.name for b in q.arrows_from(ti) if b.target == tj]
    B = [[gb.mul_dicts(d, {Path(ti, tj, (b,)): F.one}).get(pi, F.zero) for b in targets] for d in duals]
    k = arrows_ij.index(alpha)
    rhs = [F.one if m == k else F.zero for m in range(len(duals))]
    try:
        y = solve(Matrix(tuple(tuple(r) for r in B), len(targets), F), rhs)
    except InconsistentSystemError:
        raise TranslationError("pairing degenerate while computing τ on arrows",
                               witness=[ti, tj]) from None
    return Element({Path(ti, tj, (b,)): c for b, c in zip(targets, y) if c})


# -- path classification -----------------------------------------------------------------

def _vertices_of(gb: GradedBasis, p: Path, endpoints: bool = True) -> list[str]:
    """Vertices a path passes through, in order; interior ones only when ``endpoints`` is False."""
    q = gb.quiver
    vs = [p.source]
    for name in reversed(p.arrows):
        vs.append(q.arrow(name).target)
    return vs if endpoints else vs[1:-1]


def _through(vs: list, endpoints: bool) -> list:
    return vs if endpoints else vs[1:-1]


def _span(gb: GradedBasis, t: int, i: str, j: str, paths) -> tuple[list, list]:
    rows = [gb.coords(gb.word_nf(w), t, i, j) for w in paths]
    red, piv = rref_rows(rows, gb.dim(t, i, j))
    return red, piv


def _in_span(vec, span) -> bool:
    red, piv = span
    return not any(reduce_vector(vec, red, piv))


def shift_spans(gb: GradedBasis, ts: TranslationStructure, t: int, i: str, j: str,
                endpoints: bool = True) -> dict:
    """Spans (in normal-form coordinates) of right-, left- and semi-shiftable generators.

    With ``endpoints`` False a path "passes through" only its interior vertices.
    """
    q = gb.quiver
    P, I = set(ts.P), set(ts.I)
    words = q.words(t, i, j)
    right = [w for w in words if not P.intersection(_vertices_of(gb, w, endpoints))]
    left = [w for w in words if not I.intersection(_vertices_of(gb, w, endpoints))]
    semi = []
    for w in words:
        vs = _vertices_of(gb, w)
        for k in range(len(vs)):
            if (not I.intersection(_through(vs[: k + 1], endpoints))
                    and not P.intersection(_through(vs[k:], endpoints))):
                semi.append(w)
                break
    return {"right": _span(gb, t, i, j, right), "left": _span(gb, t, i, j, left),
            "semi": _span(gb, t, i, j, semi)}


def is_left_stark(gb: GradedBasis, p: Path, t: int, i2: str) -> bool:
    """p spans its component and w ↦ p·w is injective on e_{s(p)}Λ_t e_{i2}."""
    if gb.dim(p.length, p.source, p.target) != 1:
        return False
    W = gb.basis(t, i2, p.source)
    if not W:
        return True
    nf = gb.word_nf(p)
    imgs = [gb.mul_dicts(nf, {w: gb.field.one}) for w in W]
    return _independent(gb, imgs)


def is_right_stark(gb: GradedBasis, p: Path, t: int, j2: str) -> bool:
    """p spans its component and w ↦ w·p is injective on e_{j2}Λ_t e_{t(p)}."""
    if gb.dim(p.length, p.source, p.target) != 1:
        return False
    W = gb.basis(t, p.target, j2)
    if not W:
        return True
    nf = gb.word_nf(p)
    imgs = [gb.mul_dicts({w: gb.field.one}, nf) for w in W]
    return _independent(gb, imgs)


def _independent(gb: GradedBasis, imgs: list[dict]) -> bool:
    F = gb.field
    labels = sorted({w for im in imgs for w in im}, key=gb.quiver.path_key)
    rows = [[im.get(w, F.zero) for w in labels] for im in imgs]
    return rank_rows(rows, len(labels)) == len(imgs)


def classify_path(gb: GradedBasis, ts: TranslationStructure, p: Path, endpoints: bool = True) -> dict:
    nf = gb.word_nf(p)
    if not nf:
        raise TranslationError(f"path {p} is not bound", witness=str(p))
    t, i, j = p.length, p.source, p.target
    vec = gb.coords(nf, t, i, j)
    spans = shift_spans(gb, ts, t, i, j, endpoints)
    flags = {
        "right_shiftable": _in_span(vec, spans["right"]),
        "left_shiftable": _in_span(vec, spans["left"]),
        "semi_shiftable": _in_span(vec, spans["semi"]),
    }
    top = ts.n + 1 - t
    flags["left_stark"] = {(d, v): is_left_stark(gb, p, d, v)
                           for d in range(max(top, 0) + 1) for v in gb.quiver.vertices
                           if d + t <= gb.max_degree}
    flags["right_stark"] = {(d, v): is_right_stark(gb, p, d, v)
                            for d in range(max(top, 0) + 1) for v in gb.quiver.vertices
                            if d + t <= gb.max_degree}
    return flags


def _bound_words(gb: GradedBasis, max_len: int):
    q = gb.quiver
    for t in range(max_len + 1):
        for i in q.vertices:
            for j in q.vertices:
                for w in q.words(t, i, j):
                    if gb.word_nf(w):
                        yield w


def check_admissible(gb: GradedBasis, ts: TranslationStructure, endpoints: bool = True) -> dict:
    """Admissibility conditions (i)-(iii) with witnesses.

    ``endpoints`` selects whether a path passes through its own end vertices.
    """
    F = gb.field
    n = ts.n
    P, I = set(ts.P), set(ts.I)
    result = {"i": {"pass": True, "witness": None},
              "ii": {"pass": True, "witness": None},
              "iii": {"pass": True, "witness": None}}
    # (i): every bound path extends to a bound path of length n+1
    for w in _bound_words(gb, n + 1):
        if w.length == n + 1:
            continue
        nf = gb.word_nf(w)
        ok = False
        rest = n + 1 - w.length
        for left_len in range(rest + 1):
            right_len = rest - left_len
            for (s, tg) in gb.components(left_len):
                if s != w.target:
                    continue
                for u in gb.basis(left_len, s, tg):
                    un = gb.mul_dicts({u: F.one}, nf)
                    if not un:
                        continue
                    for (s2, tg2) in gb.components(right_len):
                        if tg2 != w.source:
                            continue
                        for v in gb.basis(right_len, s2, tg2):
                            if gb.mul_dicts(un, {v: F.one}):
                                ok = True
                                break
                        if ok:
                            break
                    if ok:
                        break
                if ok:
                    break
            if ok:
                break
        if not ok:
            result["i"] = {"pass": False, "witness": str(w)}
            break
    # (ii): bound paths from non-injective to non-projective vertices are spanned by shiftable ones
    for t in range(n + 2):
        if not result["ii"]["pass"]:
            break
        for (i, j) in gb.components(t):
            if i in I or j in P:
                continue
            spans = shift_spans(gb, ts, t, i, j, endpoints)
            rows = [list(r) for s in spans.values() for r in s[0]]
            red, piv = rref_rows(rows, gb.dim(t, i, j))
            if len(piv) < gb.dim(t, i, j):
                for b in gb.basis(t, i, j):
                    if any(reduce_vector(gb.coords({b: F.one}, t, i, j), red, piv)):
                        result["ii"] = {"pass": False, "witness": str(b)}
                        break
                break
    # (iii): stark alternatives for pairs (p, q) through projective resp. injective vertices
    words = list(_bound_words(gb, n))
    for i in ts.tau:
        if not result["iii"]["pass"]:
            break
        ti = ts.tau[i]
        ps = [w for w in words if w.target == i and P.intersection(_vertices_of(gb, w, endpoints))]
        qs = [w for w in words if w.source == ti and I.intersection(_vertices_of(gb, w, endpoints))]
        for pp in ps:
            for qq in qs:
                tot = pp.length + qq.length
                if tot > n:
                    continue
                deg = n + 1 - tot
                if not (is_left_stark(gb, pp, deg, qq.target) or
                        is_right_stark(gb, qq, deg, pp.source)):
                    result["iii"] = {"pass": False, "witness": [str(pp), str(qq)]}
                    break
            if not result["iii"]["pass"]:
                break
    result["pass"] = all(result[k]["pass"] for k in ("i", "ii", "iii"))
    return result
