"""Command-line interface.

Exit codes: 0 when every check passes, 1 when a verified mathematical
property fails (the witness is printed), 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import override_limits
from .corpus import PAPER_KEYS, corpus_entry, corpus_get, dumps, resolve, serialize
from .errors import CapExceeded, ParseError, ReticulaError, UnknownKey, ValidationError
from .hull import build_hull, codensity_check, hull_lemmas
from .render import hasse_dot, op_table
from .report import Check, Report
from .reticulation import reticulate, verify_reticulation
from .stone import classify_stone
from .suites import run_suite


class UsageError(Exception):
    pass


def _algebra_info(A):
    return {"name": A.name, "kind": A.kind, "size": A.n, "labels": list(A.labels)}


def _emit(args, out, A, checks, witnesses, text_lines):
    if args.json:
        doc = {
            "algebra": _algebra_info(A) if A is not None else None,
            "checks": [c.to_dict() for c in checks],
            "witnesses": witnesses,
        }
        out.append(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        out.extend(text_lines)
    return 0 if all(c.passed for c in checks) else 1


def _write_dot(args, A, out):
    if args.dot:
        try:
            Path(args.dot).write_text(hasse_dot(A))
        except OSError as exc:
            raise UsageError(f"cannot write {args.dot}: {exc}") from None
        if not args.json:
            out.append(f"wrote {args.dot}")


def cmd_check(args, out):
    try:
        A = resolve(args.algebra)
    except ValidationError as exc:
        check = Check("axioms", False, exc.witness, str(exc))
        return _emit(args, out, None, [check], {"axioms": exc.witness},
                     [f"invalid: {exc}"])
    _write_dot(args, A, out)
    check = Check("axioms", True, detail="residuated lattice laws hold")
    return _emit(args, out, A, [check], {}, [f"valid residuated lattice ({A.n} elements)"])


def cmd_reticulate(args, out):
    A = resolve(args.algebra)
    R = reticulate(A)
    L = R.lattice
    rep = verify_reticulation(A, L, R.lam)
    _write_dot(args, L, out)
    lines = [f"L({A.name or 'A'}) has {L.n} elements: " + " ".join(L.labels)]
    lines.append("λ: " + ", ".join(f"{A.labels[a]}↦{L.labels[R.lam[a]]}" for a in range(A.n)))
    lines.append("principal filters: " + ", ".join(
        f"{L.labels[i]}={A.show_set(m)}" for i, m in enumerate(R.filters)))
    lines.append(op_table(L, "meet").rstrip())
    lines.append(op_table(L, "join").rstrip())
    lines.extend(rep.lines())
    wit = {c.name: c.witness for c in rep.failures}
    return _emit(args, out, A, rep.checks, wit, lines)


def cmd_classify(args, out):
    A = resolve(args.algebra)
    s = classify_stone(A, exhaustive=args.exhaustive_subsets, with_reticulation=True)
    _write_dot(args, A, out)
    lines = s.summary_lines()
    lines.append("boolean center: {" + ",".join(A.labels[e] for e in s.center.members) + "}")
    lines.append("co-annihilators: " + ", ".join(A.show_set(m) for m in s.coann.members))
    for c in s.m_conditions:
        text = f"{c.name} {str(c.passed).lower()}: {c.detail}"
        if not c.passed and c.witness is not None:
            text += f" (witness {json.dumps(c.witness, ensure_ascii=False)})"
        lines.append(text)
    # classification outcomes are results, not failures
    checks = [Check("co-Stone", True, detail=str(s.co_stone).lower()),
              Check("strongly co-Stone", True, detail=str(s.strongly).lower()),
              Check("Stone identity", True, detail=str(s.stone_identity).lower()),
              Check("conditions (I)-(V) agree", len(set(s.m_flags)) == 1)]
    for c in s.m_conditions:
        checks.append(Check(c.name, True, detail=str(c.passed).lower()))
    if args.json:
        witnesses = s.witnesses()
        witnesses["classification"] = s.to_dict()
    else:
        witnesses = {}
    return _emit(args, out, A, checks, witnesses, lines)


def cmd_hull(args, out):
    A = resolve(args.algebra)
    h = build_hull(A)
    H = h.algebra
    _write_dot(args, H, out)
    rep = hull_lemmas(h)
    ok, wit = codensity_check(h)
    s = rep.get("Ã is strongly co-Stone")
    lines = [f"hull has {H.n} elements ({len(h.poset.partitions)} partitions, {len(h.coann)} co-annihilators)"]
    lines.append("ε: " + ", ".join(f"{A.labels[a]}↦{H.labels[h.epsilon(a)]}" for a in range(A.n)))
    lines.append("codensity: " + ", ".join(
        f"{H.labels[x]}≤ε({A.labels[y]})" for x, y in wit.items() if y is not None))
    lines.append(f"strongly co-Stone: {str(s.passed).lower()}")
    lines.append(op_table(H, "implies").rstrip())
    lines.extend(rep.lines())
    lines.extend(h.notes)
    witnesses = {c.name: c.witness for c in rep.failures}
    return _emit(args, out, A, rep.checks, witnesses, lines)


def cmd_verify(args, out):
    try:
        reports = run_suite(args.suite, exhaustive=args.exhaustive_subsets)
    except KeyError:
        raise UsageError(f"unknown suite {args.suite!r}") from None
    merged = Report("verify")
    lines = []
    for r in reports:
        merged.extend(r, prefix=r.title + ": ")
        lines.append(f"{r.title}: {len(r.checks) - len(r.failures)}/{len(r.checks)} passed")
        lines.extend("  " + c.line() for c in r.failures)
    witnesses = {c.name: c.witness for c in merged.failures}
    return _emit(args, out, None, merged.checks, witnesses, lines)


def cmd_corpus(args, out):
    if args.action == "list":
        lines = []
        for key in PAPER_KEYS:
            A = corpus_get(key)
            lines.append(f"{key:8} {A.n:3}  {corpus_entry(key).source}")
        lines.append("chain:<n>    Gödel chain with n elements")
        lines.append("boolean:<n>  Boolean algebra with n = 2^k elements")
        out.extend(lines)
        return 0
    if not args.key:
        raise UsageError("corpus show needs a key")
    A = corpus_get(args.key)
    _write_dot(args, A, out)
    if args.json:
        out.append(json.dumps(serialize(A), indent=2, ensure_ascii=False))
        return 0
    out.append(dumps(serialize(A)).rstrip())
    for op in A.op_names[2:]:
        out.append(op_table(A, op).rstrip())
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--dot", metavar="PATH", help="write a Hasse diagram in DOT format")
    common.add_argument("--exhaustive-subsets", action="store_true",
                        help="also quantify over every subset (small algebras)")
    common.add_argument("--max-size", type=int, metavar="N", help="cap on constructed algebra size")

    p = argparse.ArgumentParser(prog="reticula", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in [("check", "verify the residuated-lattice axioms"),
                        ("reticulate", "build L(A) and λ"),
                        ("classify", "co-Stone classification"),
                        ("hull", "strongly co-Stone hull")]:
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("algebra", help="file path or corpus:<key>")
    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", choices=["reticulation-axioms", "transfer", "hull-lemmas", "all"])
    s = sub.add_parser("corpus", parents=[common], help="list or show corpus algebras")
    s.add_argument("action", choices=["list", "show"])
    s.add_argument("key", nargs="?")
    return p


COMMANDS = {
    "check": cmd_check, "reticulate": cmd_reticulate, "classify": cmd_classify,
    "hull": cmd_hull, "verify": cmd_verify, "corpus": cmd_corpus,
}


def run_cli(argv=None) -> tuple[int, str]:
    """Run one invocation and return (exit code, output text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), ""
    out: list[str] = []
    limits = {}
    if args.max_size is not None:
        if args.max_size < 1:
            return 2, "error: --max-size must be positive\n"
        limits["product_size"] = args.max_size
    try:
        with override_limits(**limits):
            code = COMMANDS[args.command](args, out)
    except (UsageError, UnknownKey, ParseError, CapExceeded, OSError) as exc:
        return 2, f"error: {exc}\n"
    except ValidationError as exc:
        return 1, f"invalid: {exc}\n"
    except ReticulaError as exc:
        return 1, f"failed: {exc}\n"
    return code, "\n".join(out) + "\n"


def main(argv=None) -> int:
    code, text = run_cli(argv)
    stream = sys.stdout if code != 2 else sys.stderr
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
