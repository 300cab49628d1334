"""Command-line front end: ``ntrans <command> FILE [options]``.

Exit status: 0 on success, 1 when a check fails (the report is still printed),
2 on unreadable or invalid input.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .algebra import DegreeOverflowError, dims_table, graded_basis
from .constructions import ConstructionError, Window, is_extendable, smash_extension, trivial_extension
from .dual import check_double_dual, quadratic_dual
from .hammock import (HypothesisError, almost_split_report, format_layers, hammock, partial_as_regular,
                      radical_layers, slice_truncation)
from .koszul import NotQuadraticError, classify_pq
from .linalg import Field
from .quiver import QuiverError, parse_quiver, serialize, to_dot, validate
from .translation import TranslationError, check_admissible, check_n_translation, infer_translation

SCHEMA = "ntrans/1"


class InputError(Exception):
    pass


class CheckFailed(Exception):
    """Raised after the report has been emitted, to select exit status 1."""


def _default_degree() -> int:
    raw = os.environ.get("NTRANS_MAX_DEGREE")
    if raw is None:
        return 12
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"NTRANS_MAX_DEGREE must be an integer, got {raw!r}") from None


def _parse_field(text: str) -> Field:
    t = text.strip().lower()
    if t in ("q", "qq", "rational", "0"):
        return Field()
    m = re.fullmatch(r"(?:gf)?\s*\(?(\d+)\)?", t)
    if not m:
        raise InputError(f"unknown field {text!r} (use 'rational' or 'gf<p>')")
    try:
        return Field(int(m.group(1)))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _parse_window(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", text.strip())
    if not m:
        raise InputError(f"window must look like a..b, got {text!r}")
    a, b = int(m.group(1)), int(m.group(2))
    if a > b:
        raise InputError("empty window")
    return a, b


def load(path: str, field: str | None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        q = parse_quiver(text)
        if field is not None:
            F = _parse_field(field)
            body = serialize(q).split("\n", 1)[1]
            q = parse_quiver(f"field {F.describe()}\n" + body)
    except QuiverError as exc:
        where = f"{exc.line}:" + (f"{exc.column}:" if exc.column is not None else "") if exc.line else ""
        raise InputError(f"{path}:{where} {exc.message}") from None
    return q


def _n_for(args, q, gb) -> int:
    if args.n is not None:
        return args.n
    if q.n is not None:
        return q.n
    top = gb.top_degree()
    if gb.components(gb.max_degree) and q.arrows:
        raise InputError("cannot infer n: algebra not finite within the degree cap; pass -n")
    return max(top - 1, 0)


def _basis(q, args, extra: int = 0):
    return graded_basis(q, max(args.max_degree, extra))


def _translation(q, args, gb=None):
    gb = gb or _basis(q, args, 2)
    n = _n_for(args, q, gb)
    if gb.max_degree < n + 2:
        gb = graded_basis(q, n + 2)
    try:
        ts = infer_translation(gb, n)
    except TranslationError as exc:
        raise CheckFailed(f"no {n}-translation structure: {exc}") from None
    return gb, ts


class Out:
    """Collects command output in the requested format."""

    def __init__(self, args):
        self.fmt = "json" if args.json else args.format
        self.path = args.output
        self.chunks: list[str] = []

    def text(self, s: str):
        self.chunks.append(s if s.endswith("\n") else s + "\n")

    def data(self, command: str, payload: dict, text: str | None = None):
        if self.fmt == "json":
            doc = {"schema": SCHEMA, "command": command}
            doc.update(payload)
            self.chunks.append(json.dumps(doc, indent=2, sort_keys=False, default=str) + "\n")
        else:
            self.text(text if text is not None else json.dumps(payload, indent=2, default=str))

    def flush(self):
        body = "".join(self.chunks)
        if self.path:
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(body)
        else:
            sys.stdout.write(body)


def _emit_quiver(out: Out, command: str, q, extra: dict | None = None):
    if out.fmt == "dot":
        out.text(to_dot(q))
    elif out.fmt == "json":
        payload = {"quiver": serialize(q), "vertices": len(q.vertices), "arrows": len(q.arrows),
                   "relations": len(q.relations)}
        payload.update(extra or {})
        out.data(command, payload)
    else:
        out.text(serialize(q))


# -- commands ---------------------------------------------------------------------------

def cmd_validate(args, q, out):
    issues = validate(q)
    out.data("validate", {"ok": not issues, "issues": issues},
             "ok" if not issues else "\n".join(issues))
    if issues:
        raise InputError("validation failed")


def cmd_dims(args, q, out):
    gb = _basis(q, args)
    tab = dims_table(gb)
    lines = [f"degree {t}: {d}" for t, d in enumerate(tab["totals"])]
    if args.verbose:
        lines += [f"  e{r['to']} L{r['t']} e{r['from']}: {r['dim']}" for r in tab["dims"]]
    lines.append(f"Loewy length: {tab['loewy']}")
    out.data("dims", tab, "\n".join(lines))


def cmd_translation(args, q, out):
    gb, ts = _translation(q, args)
    chk = check_n_translation(gb, ts)
    payload = {"translation": ts.to_json(), "check": chk}
    lines = [f"n = {ts.n}", "tau: " + ", ".join(f"{i} -> {j}" for i, j in ts.tau.items()),
             "P: " + " ".join(ts.P), "I: " + " ".join(ts.I),
             f"passes: {chk['passes']}", f"stable: {chk['stable']}"]
    lines += [f"failure: {f}" for f in chk["failures"]]
    out.data("translation", payload, "\n".join(lines))
    if not chk["passes"]:
        raise CheckFailed()


def cmd_admissible(args, q, out):
    gb, ts = _translation(q, args)
    adm = check_admissible(gb, ts)
    lines = [f"({k}) {'pass' if adm[k]['pass'] else 'FAIL'}"
             + ("" if adm[k]["pass"] else f"  witness {adm[k]['witness']}") for k in ("i", "ii", "iii")]
    out.data("admissible", adm, "\n".join(lines))
    if not adm["pass"]:
        raise CheckFailed()


def cmd_dual(args, q, out):
    _emit_quiver(out, "dual", quadratic_dual(q))


def cmd_double_dual(args, q, out):
    ok = check_double_dual(q)
    out.data("double-dual", {"double_dual_equal": ok}, "true" if ok else "false")
    if not ok:
        raise CheckFailed()


def cmd_trivial_ext(args, q, out):
    gb, ts = _translation(q, args)
    try:
        t = trivial_extension(q, gb, ts)
    except ConstructionError as exc:
        raise CheckFailed(f"{exc} (witness {exc.witness})") from None
    ext = is_extendable(q, gb, ts, args.max_degree) if args.check else None
    _emit_quiver(out, "trivial-ext", t, {"extendable": ext} if ext else None)


def cmd_smash(args, q, out):
    if args.v is None:
        if args.window is None:
            raise InputError("smash needs -v or --window")
        args.v = 0
    if args.v == 0 and args.window is None:
        raise InputError("smash -v 0 needs --window a..b")
    if args.v > 0 and args.window is not None:
        raise InputError("--window only applies to -v 0")
    a, b = _parse_window(args.window) if args.window else (0, 0)
    gb, ts = _translation(q, args)
    try:
        z = smash_extension(q, gb, ts, Window(args.v, a, b))
    except ConstructionError as exc:
        raise CheckFailed(f"{exc} (witness {exc.witness})") from None
    _emit_quiver(out, "smash", z)


def cmd_koszul(args, q, out):
    gb = _basis(q, args)
    n = args.n if args.n is not None else q.n
    rep = classify_pq(gb, None, args.max_degree, n=n)
    order = list(q.vertices)
    if rep.failure:
        text = f"not (p,q)-Koszul: {rep.failure}\n{rep.format_table(order)}"
    elif rep.q is None:
        text = f"p = {rep.p}, Koszul up to degree {rep.koszul_up_to}"
    else:
        text = f"p = {rep.p}, q = {rep.q}"
    if rep.n_translation:
        text += f"\n{rep.n_translation['n']}-translation algebra: {rep.n_translation['is_n_translation_algebra']}"
    if args.verbose and not rep.failure:
        text += "\n" + rep.format_table(order)
    out.data("koszul", rep.to_json(order), text)
    if rep.failure:
        raise CheckFailed()


def _vertices(args, q) -> list[str]:
    if not args.vertex:
        return list(q.vertices)
    for v in args.vertex:
        if v not in q.vertex_index:
            raise InputError(f"unknown vertex {v!r}")
    return list(args.vertex)


def cmd_hammock(args, q, out):
    gb, ts = _translation(q, args)
    hs = [hammock(gb, ts, i) for i in _vertices(args, q)]
    if out.fmt == "dot":
        for h in hs:
            out.text(h.to_dot(f"H_{h.start}"))
        return
    lines = []
    for h in hs:
        lines.append(f"hammock {h.start}:")
        for t, lev in enumerate(h.levels):
            lines.append(f"  {t}: " + " ".join(f"{j}:{m}" for j, m in lev.items()))
        lines += [f"  ({j},{t}) -> ({j2},{t + 1}) {a}" for j, t, j2, a in h.arrows]
    out.data("hammock", {"hammocks": [h.to_json() for h in hs]}, "\n".join(lines))


def cmd_layers(args, q, out):
    gb = _basis(q, args)
    res = {i: radical_layers(gb, i) for i in _vertices(args, q)}
    text = "\n".join(f"vertex {i}:\n" + format_layers(ls) for i, ls in res.items())
    out.data("layers", {"layers": {i: [[{"simple": j, "mult": m} for j, m in lay] for lay in ls]
                                   for i, ls in res.items()}}, text)


def _koszul_for(args, q, ts):
    gb = graded_basis(q, max(args.max_degree, ts.n + 3))
    return gb, classify_pq(gb, None, args.max_degree, n=ts.n)


def cmd_almost_split(args, q, out):
    _, ts = _translation(q, args)
    gb, kr = _koszul_for(args, q, ts)
    try:
        rep = almost_split_report(q, gb, ts, kr)
    except HypothesisError as exc:
        raise CheckFailed(str(exc)) from None
    out.data("almost-split", rep.to_json(), rep.format_text())


def cmd_as_regular(args, q, out):
    _, ts = _translation(q, args)
    gb, kr = _koszul_for(args, q, ts)
    res = partial_as_regular(q, gb, ts, kr, args.max_degree)
    verdict = res["is_partial_AS_n_regular"]
    lines = [f"partial AS {ts.n}-regular dual: {verdict}"]
    if "gorenstein_parameter" in res:
        lines.append(f"Gorenstein parameter: {res['gorenstein_parameter']}")
        lines.append("Nakayama: " + ", ".join(f"{i} -> {j}" for i, j in res["nakayama"].items()))
    lines.append(f"oracle: {res['oracle_verdict']}")
    out.data("as-regular", res, "\n".join(lines))
    if verdict is False or res.get("oracle_agrees") is False:
        raise CheckFailed()


def cmd_truncate_slice(args, q, out):
    if not args.slice:
        raise InputError("truncate-slice needs --slice v1,v2,...")
    sl = [v for part in args.slice for v in part.split(",") if v]
    for v in sl:
        if v not in q.vertex_index:
            raise InputError(f"unknown slice vertex {v!r}")
    gb = _basis(q, args)
    ts = None
    t2 = slice_truncation(q, gb, ts, sl, mode=args.mode)
    _emit_quiver(out, "truncate-slice", t2)


def cmd_export_dot(args, q, out):
    out.text(to_dot(q))


COMMANDS = {
    "validate": (cmd_validate, "parse and validate a quiver file"),
    "dims": (cmd_dims, "graded dimensions and Loewy length"),
    "translation": (cmd_translation, "infer and check the n-translation structure"),
    "admissible": (cmd_admissible, "check admissibility for trivial extension"),
    "dual": (cmd_dual, "quadratic dual quiver"),
    "double-dual": (cmd_double_dual, "check that the double dual returns the input"),
    "trivial-ext": (cmd_trivial_ext, "quiver of the trivial extension"),
    "smash": (cmd_smash, "smash-product quiver, cyclic (-v > 0) or a window of Z (-v 0)"),
    "koszul": (cmd_koszul, "(p,q)-Koszul classification"),
    "hammock": (cmd_hammock, "tau-hammocks"),
    "layers": (cmd_layers, "radical layers of the indecomposable projectives"),
    "almost-split": (cmd_almost_split, "n-almost split sequences of the Koszul dual"),
    "as-regular": (cmd_as_regular, "partial Artin-Schelter regularity of the Koszul dual"),
    "truncate-slice": (cmd_truncate_slice, "truncate by the hammocks of a slice"),
    "export-dot": (cmd_export_dot, "Graphviz rendering"),
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ntrans", description="Computations with n-translation quivers.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_) in COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("input", help="quiver file")
        p.add_argument("--max-degree", "-D", type=int, default=None,
                       help="degree cap D (default 12, or $NTRANS_MAX_DEGREE)")
        p.add_argument("--field", help="override the field: rational or gf<p>")
        p.add_argument("-n", type=int, default=None, help="translation degree n")
        p.add_argument("--json", action="store_true", help="same as --format json")
        p.add_argument("--format", choices=("text", "json", "dot"), default="text")
        p.add_argument("-o", "--output", help="write output here instead of stdout")
        p.add_argument("--verbose", action="store_true", help="print homology tables")
        if name == "smash":
            p.add_argument("-v", type=int, default=None, help="cyclic group order, 0 for Z")
            p.add_argument("--window", help="layer window a..b for -v 0")
        if name in ("hammock", "layers"):
            p.add_argument("--vertex", action="append", help="start vertex (repeatable)")
        if name == "truncate-slice":
            p.add_argument("--slice", action="append",
                           help="slice vertices, comma-separated or repeated")
            p.add_argument("--mode", choices=("koszul", "algebra"), default="koszul",
                           help="hammocks of linear resolutions (default) or of the algebra")
        if name == "trivial-ext":
            p.add_argument("--check", action="store_true", help="also decide extendability")
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    out = None
    try:
        if args.max_degree is None:
            args.max_degree = _default_degree()
        if args.max_degree < 1:
            raise InputError("--max-degree must be at least 1")
        q = load(args.input, args.field)
        out = Out(args)
        fn = COMMANDS[args.command][0]
        fn(args, q, out)
        out.flush()
        return 0
    except InputError as exc:
        if out is not None and out.chunks:
            out.flush()
        print(f"ntrans: error: {exc}", file=sys.stderr)
        return 2
    except CheckFailed as exc:
        if out is not None:
            out.flush()
        if str(exc):
            print(f"ntrans: {exc}", file=sys.stderr)
        return 1
    except (NotQuadraticError, DegreeOverflowError, KeyError) as exc:
        print(f"ntrans: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
