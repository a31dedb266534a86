"""Reading and writing tower files.

A tower file is a UTF-8 JSON object::

    {"p": 5, "l": 2, "vertices": 3,
     "edges": [[1, 2, [1, 0]], [1, 2, [0, 1]], [2, 3, [0, 0]], [3, 1, [0, 0]]],
     "label": "optional text"}

Edges keep their order; each voltage is read along tail -> head.  Covers
written by ``iwagraph derived`` also carry ``"vertex_labels"``, one
``[v, [g...]]`` pair per vertex naming the base vertex and group element.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .multigraph import Edge, Multigraph
from .voltage import VoltageAssignment, is_prime

KEYS = ("p", "l", "vertices", "edges", "label", "vertex_labels")
REQUIRED = ("p", "l", "vertices", "edges")


class TowerFileError(ValueError):
    """Parse failure; ``kind`` is one of malformed, unknown-key, missing-key,
    bad-value, vertex-range, missing-voltage, not-prime."""

    def __init__(self, kind: str, message: str, where: str | None = None):
        self.kind = kind
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


@dataclass(frozen=True)
class TowerSpec:
    p: int
    l: int
    graph: Multigraph
    assignment: VoltageAssignment
    label: str | None = None
    vertex_labels: tuple[tuple[int, tuple[int, ...]], ...] | None = None

    @property
    def n(self) -> int:
        return self.graph.vertex_count

    @classmethod
    def from_parts(cls, X: Multigraph, a: VoltageAssignment, label: str | None = None) -> TowerSpec:
        a.check(X)
        return cls(a.p, a.l, X, a, label)

    def to_dict(self) -> dict:
        out = {
            "p": self.p,
            "l": self.l,
            "vertices": self.n,
            "edges": [[e.tail, e.head, list(self.assignment.volts[e.edge_id])] for e in self.graph.edges],
        }
        if self.label is not None:
            out["label"] = self.label
        if self.vertex_labels is not None:
            out["vertex_labels"] = [[v, list(g)] for v, g in self.vertex_labels]
        return out


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TowerFileError("bad-value", f"expected an integer, got {json.dumps(value)}", where)
    return value


def tower_from_dict(doc, source: str = "<tower>") -> TowerSpec:
    if not isinstance(doc, dict):
        raise TowerFileError("malformed", "top level must be a JSON object", source)
    unknown = sorted(set(doc) - set(KEYS))
    if unknown:
        raise TowerFileError("unknown-key", f"unknown key(s) {', '.join(map(repr, unknown))}", source)
    for k in REQUIRED:
        if k not in doc:
            raise TowerFileError("missing-key", f"missing key {k!r}", source)
    p = _int(doc["p"], f"{source}: p")
    if not is_prime(p):
        raise TowerFileError("not-prime", f"p must be prime, got {p}", f"{source}: p")
    l = _int(doc["l"], f"{source}: l")
    if l < 1:
        raise TowerFileError("bad-value", "l must be at least 1", f"{source}: l")
    n = _int(doc["vertices"], f"{source}: vertices")
    if n < 1:
        raise TowerFileError("bad-value", "vertices must be at least 1", f"{source}: vertices")
    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise TowerFileError("bad-value", "label must be a string", f"{source}: label")
    raw = doc["edges"]
    if not isinstance(raw, list):
        raise TowerFileError("malformed", "edges must be a list", f"{source}: edges")
    edges, volts = [], []
    for i, item in enumerate(raw):
        where = f"{source}: edges[{i}]"
        if not isinstance(item, list) or len(item) not in (2, 3):
            raise TowerFileError("malformed", "edge must be [tail, head, [voltage...]]", where)
        if len(item) == 2:
            raise TowerFileError("missing-voltage", "edge has no voltage vector", where)
        t = _int(item[0], where + "[0]")
        h = _int(item[1], where + "[1]")
        for pos, v in ((0, t), (1, h)):
            if not 1 <= v <= n:
                raise TowerFileError("vertex-range", f"vertex index out of range: {v} not in 1..{n}",
                                     f"{where}[{pos}]")
        vec = item[2]
        if not isinstance(vec, list):
            raise TowerFileError("malformed", "voltage must be a list of integers", where + "[2]")
        if len(vec) != l:
            kind = "missing-voltage" if len(vec) < l else "bad-value"
            raise TowerFileError(kind, f"voltage has {len(vec)} entries, expected {l}", where + "[2]")
        volts.append(tuple(_int(x, f"{where}[2][{j}]") for j, x in enumerate(vec)))
        edges.append(Edge(i, t, h))
    G = Multigraph(n, tuple(edges))
    vlabels = None
    if "vertex_labels" in doc:
        vlabels = _vertex_labels(doc["vertex_labels"], n, l, f"{source}: vertex_labels")
    return TowerSpec(p, l, G, VoltageAssignment(p, l, tuple(volts)), label, vlabels)


def _vertex_labels(raw, n: int, l: int, where: str):
    if not isinstance(raw, list) or len(raw) != n:
        raise TowerFileError("bad-value", f"expected a list of {n} [v, [g...]] pairs", where)
    out = []
    for i, item in enumerate(raw):
        w = f"{where}[{i}]"
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[1], list) and len(item[1]) == l):
            raise TowerFileError("malformed", f"vertex label must be [v, [g_1..g_{l}]]", w)
        out.append((_int(item[0], w + "[0]"), tuple(_int(x, f"{w}[1][{j}]") for j, x in enumerate(item[1]))))
    return tuple(out)


def parse_tower(text: str, source: str = "<tower>") -> TowerSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TowerFileError("malformed", f"invalid JSON: {exc.msg}",
                             f"{source}:{exc.lineno}:{exc.colno}") from None
    return tower_from_dict(doc, source)


def parse_tower_file(path: str | Path) -> TowerSpec:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError:
        raise TowerFileError("malformed", "file is not UTF-8", str(path)) from None
    return parse_tower(text, str(path))


def serialize_tower(spec: TowerSpec) -> str:
    """Canonical text: fixed key order, one edge per line, trailing newline."""
    d = spec.to_dict()
    more = "label" in d or "vertex_labels" in d
    lines = ["{"]
    lines.append(f'  "p": {d["p"]},')
    lines.append(f'  "l": {d["l"]},')
    lines.append(f'  "vertices": {d["vertices"]},')
    if d["edges"]:
        lines.append('  "edges": [')
        body = [f"    {json.dumps(e, separators=(', ', ': '))}" for e in d["edges"]]
        lines.append(",\n".join(body))
        lines.append("  ]" + ("," if more else ""))
    else:
        lines.append('  "edges": []' + ("," if more else ""))
    tail = []
    if "label" in d:
        tail.append(f'  "label": {json.dumps(d["label"], ensure_ascii=False)}')
    if "vertex_labels" in d:
        body = ",\n".join(f"    {json.dumps(x, separators=(', ', ': '))}" for x in d["vertex_labels"])
        tail.append('  "vertex_labels": [\n' + body + "\n  ]")
    if tail:
        lines.append(",\n".join(tail))
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_tower_file(spec: TowerSpec, path: str | Path):
    Path(path).write_text(serialize_tower(spec), encoding="utf-8")
