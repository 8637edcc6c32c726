"""Text renderings: Hasse diagrams as DOT, operation tables, reports."""

from __future__ import annotations

import json

from .algebra import BoundedLattice
from .report import Report

SYMBOLS = {"join": "∨", "meet": "∧", "times": "⊙", "implies": "→"}
OPS = {"∨": "join", "∧": "meet", "⊙": "times", "→": "implies", "->": "implies", "*": "times"}


def hasse_dot(A: BoundedLattice, name: str | None = None) -> str:
    """Cover relation as a DOT digraph drawn bottom to top."""
    name = name or A.name or "algebra"
    lines = [f"digraph {json.dumps(str(name))} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for i, lab in enumerate(A.labels):
        lines.append(f"  n{i} [label={json.dumps(lab, ensure_ascii=False)}];")
    for a, b in A.covers:
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def op_table(A: BoundedLattice, op: str, labels=None) -> str:
    """An aligned operation table; ``op`` is a name or symbol."""
    op = OPS.get(op, op)
    table = getattr(A, op)
    labels = list(labels or A.labels)
    width = max(len(s) for s in labels + [SYMBOLS.get(op, op)])
    head = SYMBOLS.get(op, op).ljust(width) + " | " + " ".join(s.ljust(width) for s in labels)
    rule = "-" * width + "-+-" + "-" * (len(head) - width - 3)
    rows = [head.rstrip(), rule]
    for i, s in enumerate(labels):
        cells = " ".join(labels[int(v)].ljust(width) for v in table[i])
        rows.append((s.ljust(width) + " | " + cells).rstrip())
    return "\n".join(rows) + "\n"


def parse_op_table(text: str) -> list[list[str]]:
    """Cells of a table produced by op_table, without the header."""
    rows = text.strip().splitlines()[2:]
    return [row.split("|", 1)[1].split() for row in rows]


def render_report(report: Report) -> str:
    return "\n".join([report.title] + ["  " + line for line in report.lines()]) + "\n"


def render(target: str, subject, **kw) -> str:
    if target == "hasse-dot":
        return hasse_dot(subject, **kw)
    if target == "op-table":
        return op_table(subject, **kw)
    if target == "report":
        return render_report(subject)
    raise ValueError(f"unknown render target {target!r}")
