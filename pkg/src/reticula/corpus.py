"""The example corpus and the JSON algebra file format.

A file is one JSON object::

    {"name": ..., "labels": [...],
     "covers": [[lo, hi], ...]          # or "join"/"meet" label matrices
     "times": [[...]] | "meet",
     "implies": [[...]],
     "source": "..."}

Matrices are row-major and indexed in label-list order.  An optional
``expected`` object holds golden values and is ignored by the parser.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .algebra import ResiduatedLattice, generate_standard, validate_algebra
from .errors import InvalidSize, LatticeAxiomViolation, ParseError, UnknownKey, ValidationError

PAPER_KEYS = ("lrex0", "lrex0_5", "lrex3", "lrex4", "lrex8")


def _locate(text: str | None, key: str):
    if not text:
        return None, None
    pos = text.find(f'"{key}"')
    if pos < 0:
        return None, None
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _fail(msg, text, key):
    line, col = _locate(text, key)
    raise ParseError(msg, line=line, column=col)


def _matrix(doc, key, index, n, text):
    raw = doc[key]
    if not isinstance(raw, list) or len(raw) != n or any(
        not isinstance(r, list) or len(r) != n for r in raw
    ):
        _fail(f"{key} must be a {n}x{n} matrix of labels", text, key)
    out = np.zeros((n, n), dtype=np.int32)
    for i, row in enumerate(raw):
        for j, lab in enumerate(row):
            if str(lab) not in index:
                _fail(f"{key}[{i}][{j}]: unknown label {lab!r}", text, key)
            out[i, j] = index[str(lab)]
    return out


def lattice_from_covers(n: int, covers, labels=None):
    """Join and meet tables from a Hasse cover list (pairs of indices lo < hi)."""
    leq = np.eye(n, dtype=bool)
    for lo, hi in covers:
        leq[lo, hi] = True
    # transitive closure
    for k in range(n):
        leq |= leq[:, k:k + 1] & leq[k:k + 1, :]
    cyc = np.argwhere(leq & leq.T & ~np.eye(n, dtype=bool))
    if len(cyc):
        a, b = (int(x) for x in cyc[0])
        raise ValidationError(f"cover list has a cycle through {_show(labels, (a, b))}",
                              law="antisymmetry", witness=(a, b))
    join = np.zeros((n, n), dtype=np.int32)
    meet = np.zeros((n, n), dtype=np.int32)
    for a in range(n):
        for b in range(n):
            ups = np.flatnonzero(leq[a] & leq[b])
            least = [u for u in ups if leq[u, ups].all()]
            if not least:
                raise LatticeAxiomViolation(
                    f"no least upper bound for {_show(labels, (a, b))}", law="join", witness=(a, b))
            downs = np.flatnonzero(leq[:, a] & leq[:, b])
            great = [d for d in downs if leq[downs, d].all()]
            if not great:
                raise LatticeAxiomViolation(
                    f"no greatest lower bound for {_show(labels, (a, b))}", law="meet", witness=(a, b))
            join[a, b] = least[0]
            meet[a, b] = great[0]
    return join, meet


def _show(labels, w):
    return tuple(labels[i] for i in w) if labels else w


def load_document(doc: dict, text: str | None = None) -> ResiduatedLattice:
    """Build and validate an algebra from a parsed JSON object."""
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object", line=1, column=1)
    if "labels" not in doc:
        raise ParseError("missing key 'labels'")
    labels = [str(x) for x in doc["labels"]]
    if not labels:
        _fail("labels must be nonempty", text, "labels")
    if len(set(labels)) != len(labels):
        _fail("labels must be distinct", text, "labels")
    n = len(labels)
    index = {lab: i for i, lab in enumerate(labels)}
    for key in ("times", "implies"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}")
    join = meet = None
    if "covers" in doc:
        pairs = []
        for k, pair in enumerate(doc["covers"]):
            if not isinstance(pair, list) or len(pair) != 2 or any(str(p) not in index for p in pair):
                _fail(f"covers[{k}] must be a pair of known labels", text, "covers")
            pairs.append((index[str(pair[0])], index[str(pair[1])]))
        join, meet = lattice_from_covers(n, pairs, labels)
    if "join" in doc or "meet" in doc:
        if "join" not in doc or "meet" not in doc:
            raise ParseError("join and meet must be given together")
        tj = _matrix(doc, "join", index, n, text)
        tm = _matrix(doc, "meet", index, n, text)
        if join is not None and not (np.array_equal(tj, join) and np.array_equal(tm, meet)):
            raise ValidationError("explicit join/meet tables disagree with the cover list", law="covers")
        join, meet = tj, tm
    if join is None:
        raise ParseError("need either 'covers' or 'join' and 'meet'")
    if doc["times"] == "meet":
        times = meet
    else:
        times = _matrix(doc, "times", index, n, text)
    implies = _matrix(doc, "implies", index, n, text)
    return validate_algebra(join, meet, times, implies, labels, name=doc.get("name"))


def parse_text(text: str) -> ResiduatedLattice:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return load_document(doc, text)


def parse_file(path) -> ResiduatedLattice:
    return parse_text(Path(path).read_text())


def serialize(A: ResiduatedLattice, source: str | None = None, tables: bool = False) -> dict:
    """The file-format object for A (covers by default, join/meet if asked)."""
    lab = A.labels

    def mat(t):
        return [[lab[int(x)] for x in row] for row in t]

    doc = {"name": A.name or "algebra", "labels": list(lab)}
    if tables:
        doc["join"] = mat(A.join)
        doc["meet"] = mat(A.meet)
    else:
        doc["covers"] = [[lab[a], lab[b]] for a, b in A.covers]
    doc["times"] = "meet" if np.array_equal(A.times, A.meet) else mat(A.times)
    doc["implies"] = mat(A.implies)
    if source:
        doc["source"] = source
    return doc


def dumps(doc: dict) -> str:
    """JSON text with one matrix row or cover pair per line."""

    def enc(value, indent):
        pad = " " * indent
        if isinstance(value, dict):
            if not value:
                return "{}"
            items = [f'{pad}  {json.dumps(k)}: {enc(v, indent + 2)}' for k, v in value.items()]
            return "{\n" + ",\n".join(items) + f"\n{pad}}}"
        if isinstance(value, list) and value and all(isinstance(v, list) for v in value):
            rows = [f"{pad}  {json.dumps(v, ensure_ascii=False)}" for v in value]
            return "[\n" + ",\n".join(rows) + f"\n{pad}]"
        return json.dumps(value, ensure_ascii=False)

    return enc(doc, 0) + "\n"


# -- corpus ----------------------------------------------------------------


@dataclass
class CorpusEntry:
    key: str
    document: dict
    expected: dict = field(default_factory=dict)

    @property
    def source(self) -> str:
        return self.document.get("source", "")


@lru_cache(maxsize=None)
def corpus_entry(key: str) -> CorpusEntry:
    if key not in PAPER_KEYS:
        raise UnknownKey(f"unknown corpus key {key!r}")
    text = resources.files("reticula").joinpath("data", f"{key}.json").read_text()
    doc = json.loads(text)
    expected = doc.pop("expected", {})
    return CorpusEntry(key, doc, expected)


@lru_cache(maxsize=None)
def corpus_get(key: str) -> ResiduatedLattice:
    """A corpus algebra by key: a paper example, ``chain:n`` or ``boolean:n``."""
    family, _, size = key.partition(":")
    if family in ("chain", "boolean") and size:
        try:
            n = int(size)
        except ValueError:
            raise UnknownKey(f"bad size in corpus key {key!r}") from None
        try:
            return generate_standard(family, n)
        except InvalidSize as exc:
            raise UnknownKey(f"corpus key {key!r}: {exc}") from None
    return load_document(corpus_entry(key).document)


def corpus_keys() -> list[str]:
    return list(PAPER_KEYS)


def paper_algebras() -> list[ResiduatedLattice]:
    return [corpus_get(k) for k in PAPER_KEYS]


def resolve(spec: str) -> ResiduatedLattice:
    """``corpus:<key>`` or a path to an algebra file."""
    if spec.startswith("corpus:"):
        return corpus_get(spec[len("corpus:"):])
    return parse_file(spec)
