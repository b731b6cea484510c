"""Graph document parsing and report serialization.

Three input formats:

* ``edge_list``: one ``src dst [multiplicity]`` line per edge, 1-based ids,
  ``#`` comments, and an optional ``vertices N`` line so graphs with isolated
  vertices are expressible.
* ``json``: ``{"vertices": N, "edges": [[src, dst, mult?], ...],
  "labels": [...]?}`` with 1-based ids.
* ``dot_subset``: ``digraph { a -> b; c; }`` with bare identifier vertices;
  repeated edge statements accumulate multiplicity.

Reports serialize to json, text, or csv; numeric fields print at 15
significant digits.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass

from .errors import ParseError, StrictModeError
from .graphs import DirectedGraph

FORMAT_EDGE_LIST = "edge_list"
FORMAT_JSON = "json"
FORMAT_DOT = "dot_subset"
INPUT_FORMATS = (FORMAT_EDGE_LIST, FORMAT_JSON, FORMAT_DOT)

OUTPUT_FORMATS = ("json", "text", "csv")

_IDENTIFIER = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


@dataclass(frozen=True)
class GraphDocument:
    format: str
    payload: str


def sig15(x: float) -> float:
    """Round a float to 15 significant digits (the printed precision)."""
    return float(f"{float(x):.15g}")


def detect_format(text: str) -> str:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return FORMAT_JSON
    if re.match(r"^(strict\s+)?digraph\b", stripped):
        return FORMAT_DOT
    return FORMAT_EDGE_LIST


def parse_graph(doc, fmt: str | None = None, strict: bool = False) -> DirectedGraph:
    """Parse a graph document (``GraphDocument`` or raw text) into a graph."""
    if isinstance(doc, GraphDocument):
        payload, fmt = doc.payload, doc.format
    else:
        payload = doc
    if not payload or not payload.strip():
        raise ParseError("empty graph document")
    if fmt is None:
        fmt = detect_format(payload)
    if fmt == FORMAT_EDGE_LIST:
        return _parse_edge_list(payload, strict)
    if fmt == FORMAT_JSON:
        return _parse_json(payload, strict)
    if fmt == FORMAT_DOT:
        return _parse_dot(payload, strict)
    raise ParseError(f"unknown graph format {fmt!r}")


def _finish(vertex_count, edges, labels, strict):
    if vertex_count is None or vertex_count < 1:
        raise ParseError("graph must declare at least one vertex")
    if strict:
        for (src, dst), mult in sorted(edges.items()):
            if mult > 1:
                raise StrictModeError(
                    f"strict mode forbids multiple edges; edge {src + 1} -> {dst + 1} "
                    f"has multiplicity {mult}"
                )
    triples = [(src, dst, mult) for (src, dst), mult in sorted(edges.items())]
    return DirectedGraph.from_edges(vertex_count, triples, labels=labels)


def _parse_edge_list(text: str, strict: bool) -> DirectedGraph:
    vertex_count = None
    edges: dict[tuple[int, int], int] = {}
    max_id = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0].lower() == "vertices":
            if len(parts) != 2:
                raise ParseError("expected 'vertices N'", line=lineno)
            try:
                vertex_count = int(parts[1])
            except ValueError:
                raise ParseError(f"invalid vertex count {parts[1]!r}", line=lineno) from None
            if vertex_count < 1:
                raise ParseError("vertex count must be positive", line=lineno)
            continue
        if len(parts) not in (2, 3):
            raise ParseError("expected 'src dst [multiplicity]'", line=lineno)
        try:
            values = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"invalid integer in {line!r}", line=lineno) from None
        src, dst = values[0], values[1]
        mult = values[2] if len(values) == 3 else 1
        if src < 1 or dst < 1:
            raise ParseError("vertex ids are 1-based and must be positive", line=lineno)
        if mult < 1:
            raise ParseError("multiplicity must be at least 1", line=lineno)
        max_id = max(max_id, src, dst)
        edges[(src - 1, dst - 1)] = edges.get((src - 1, dst - 1), 0) + mult
    if vertex_count is None:
        vertex_count = max_id
    if max_id > vertex_count:
        raise ParseError(f"edge refers to vertex {max_id} but only {vertex_count} declared")
    return _finish(vertex_count, edges, None, strict)


def _parse_json(text: str, strict: bool) -> DirectedGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno) from None
    if not isinstance(data, dict):
        raise ParseError("JSON graph must be an object")
    vertex_count = data.get("vertices")
    if not isinstance(vertex_count, int) or vertex_count < 1:
        raise ParseError("'vertices' must be a positive integer")
    raw_edges = data.get("edges", [])
    if not isinstance(raw_edges, list):
        raise ParseError("'edges' must be a list")
    edges: dict[tuple[int, int], int] = {}
    for k, entry in enumerate(raw_edges):
        if not isinstance(entry, list) or len(entry) not in (2, 3) or \
                not all(isinstance(x, int) for x in entry):
            raise ParseError(f"edge #{k + 1} must be [src, dst] or [src, dst, mult]")
        src, dst = entry[0], entry[1]
        mult = entry[2] if len(entry) == 3 else 1
        if not (1 <= src <= vertex_count and 1 <= dst <= vertex_count):
            raise ParseError(f"edge #{k + 1} refers to a vertex outside 1..{vertex_count}")
        if mult < 1:
            raise ParseError(f"edge #{k + 1} has multiplicity < 1")
        edges[(src - 1, dst - 1)] = edges.get((src - 1, dst - 1), 0) + mult
    labels = data.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != vertex_count:
            raise ParseError("'labels' must list one name per vertex")
        labels = [str(s) for s in labels]
    return _finish(vertex_count, edges, labels, strict)


def _parse_dot(text: str, strict: bool) -> DirectedGraph:
    body_match = re.search(r"\{(.*)\}", text, flags=re.DOTALL)
    if body_match is None:
        raise ParseError("dot document must contain '{ ... }'")
    head = text[:body_match.start()].strip()
    if not re.match(r"^(strict\s+)?digraph(\s+[A-Za-z0-9_]+)?$", head):
        raise ParseError(f"unsupported dot header {head!r}")
    body = re.sub(r"//[^\n]*", "", body_match.group(1))
    order: list[str] = []
    index: dict[str, int] = {}

    def vertex(name: str) -> int:
        if name not in index:
            index[name] = len(order)
            order.append(name)
        return index[name]

    edges: dict[tuple[int, int], int] = {}
    for statement in re.split(r"[;\n]", body):
        statement = statement.strip()
        if not statement:
            continue
        names = [part.strip() for part in statement.split("->")]
        for name in names:
            if not _IDENTIFIER.match(name):
                raise ParseError(f"unsupported dot token {name!r}")
        ids = [vertex(name) for name in names]
        for src, dst in zip(ids, ids[1:]):
            edges[(src, dst)] = edges.get((src, dst), 0) + 1
    if not order:
        raise ParseError("dot graph declares no vertices")
    return _finish(len(order), edges, order, strict)


def serialize_graph(g: DirectedGraph, fmt: str = FORMAT_JSON) -> str:
    """Serialize so that parsing the result reproduces the graph."""
    triples = [
        (src + 1, dst + 1, int(g.adjacency[dst, src]))
        for src in range(g.vertex_count)
        for dst in range(g.vertex_count)
        if g.adjacency[dst, src] > 0
    ]
    if fmt == FORMAT_EDGE_LIST:
        lines = [f"vertices {g.vertex_count}"]
        lines += [f"{s} {d}" if m == 1 else f"{s} {d} {m}" for s, d, m in triples]
        return "\n".join(lines) + "\n"
    if fmt == FORMAT_JSON:
        doc = {"vertices": g.vertex_count, "edges": [[s, d, m] for s, d, m in triples]}
        if g.labels is not None:
            doc["labels"] = list(g.labels)
        return json.dumps(doc, sort_keys=True)
    if fmt == FORMAT_DOT:
        names = [
            g.labels[v] if g.labels is not None and _IDENTIFIER.match(g.labels[v])
            else f"v{v + 1}"
            for v in range(g.vertex_count)
        ]
        lines = [f"  {names[v]};" for v in range(g.vertex_count)]
        for s, d, m in triples:
            lines += [f"  {names[s - 1]} -> {names[d - 1]};"] * m
        return "digraph G {\n" + "\n".join(lines) + "\n}\n"
    raise ParseError(f"unknown graph format {fmt!r}")


def _state_dict(state, report) -> dict:
    return {
        "provenance": state.provenance,
        "weights": [sig15(w) for w in state.weights],
        "equality_residual": sig15(report.equality_residual),
        "inequality_violation": sig15(report.inequality_violation),
        "satisfied": report.satisfied,
    }


def _oracle_dict(summary) -> dict | None:
    if summary is None:
        return None
    return {
        "agrees": summary.agrees,
        "matched_pairs": [list(p) for p in summary.matched_pairs],
        "unmatched_oracle": list(summary.unmatched_oracle),
        "unmatched_states": list(summary.unmatched_states),
        "max_matched_distance": sig15(summary.max_matched_distance),
    }


def report_dict(report) -> dict:
    return {
        "beta": sig15(report.beta),
        "lambda0": sig15(report.lambda0),
        "regime": report.regime,
        "vertex_labels": list(report.vertex_labels),
        "extreme_states": [
            _state_dict(s, r) for s, r in zip(report.extreme_states, report.reports)
        ],
        "oracle": _oracle_dict(report.oracle_agreement),
        "notes": list(report.notes),
    }


def _report_text(report) -> str:
    lines = [
        f"beta = {report.beta:.15g}   lambda0 = {report.lambda0:.15g}   "
        f"regime = {report.regime}",
        f"extreme states: {len(report.extreme_states)}",
    ]
    for state, rep in zip(report.extreme_states, report.reports):
        weights = ", ".join(f"{w:.12g}" for w in state.weights)
        lines.append(f"  [{state.provenance}] ({weights})")
        lines.append(
            f"    equality residual {rep.equality_residual:.3e}, "
            f"inequality violation {rep.inequality_violation:.3e}"
        )
    if report.oracle_agreement is not None:
        o = report.oracle_agreement
        verdict = "agrees" if o.agrees else "DISAGREES"
        lines.append(
            f"oracle: {verdict} ({len(o.matched_pairs)} matched, "
            f"max distance {o.max_matched_distance:.3e}, "
            f"{len(o.unmatched_oracle)} oracle-only, {len(o.unmatched_states)} closed-form-only)"
        )
    for note in report.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


def _scan_csv(reports) -> str:
    buf = io.StringIO()
    labels = reports[0].vertex_labels if reports else ()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["beta", "lambda0", "regime", "state_index", "provenance",
                     *[f"w_{name}" for name in labels]])
    for report in reports:
        if not report.extreme_states:
            writer.writerow([f"{report.beta:.15g}", f"{report.lambda0:.15g}",
                             report.regime, "", "", *[""] * len(labels)])
            continue
        for i, state in enumerate(report.extreme_states):
            writer.writerow([
                f"{report.beta:.15g}", f"{report.lambda0:.15g}", report.regime,
                str(i), state.provenance, *[f"{w:.15g}" for w in state.weights],
            ])
    return buf.getvalue()


def emit_report(report, fmt: str = "text") -> str:
    """Serialize one classification report as json, text, or csv."""
    if fmt == "json":
        return json.dumps(report_dict(report), indent=2, sort_keys=True) + "\n"
    if fmt == "text":
        return _report_text(report)
    if fmt == "csv":
        return _scan_csv([report])
    raise ParseError(f"unknown output format {fmt!r}")


def emit_scan(reports, fmt: str = "text") -> str:
    """Serialize a phase scan; csv yields one row per (beta, state) pair."""
    if fmt == "json":
        return json.dumps([report_dict(r) for r in reports], indent=2, sort_keys=True) + "\n"
    if fmt == "text":
        return "\n".join(_report_text(r) for r in reports)
    if fmt == "csv":
        return _scan_csv(list(reports))
    raise ParseError(f"unknown output format {fmt!r}")


def emit_analysis(analysis: dict, fmt: str = "text") -> str:
    """Serialize the structural summary produced by ``analyze_structure``."""
    if fmt == "json":
        out = dict(analysis)
        out["lambda0"] = sig15(out["lambda0"])
        return json.dumps(out, indent=2, sort_keys=True) + "\n"
    if fmt == "text":
        p = analysis["partition"]
        numbering = analysis["numbering"]
        lines = [
            f"vertices: {analysis['vertex_count']} "
            f"({', '.join(analysis['labels'])})",
            f"sinks: {analysis['sinks']}",
            f"sources: {analysis['sources']}",
            f"partition: e1={p['e1']} e2={p['e2']} e3={p['e3']}",
            f"numbering old->new: {numbering['old_to_new']}",
            f"elimination rounds: {numbering['elimination_rounds']}",
            f"core vertices: {analysis['core']['vertices']}",
            f"lambda0: {analysis['lambda0']:.15g} "
            f"(irreducible: {analysis['core_irreducible']})",
            f"correspondence degree: {analysis['correspondence_degree']}",
        ]
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value"])
        for key in ("vertex_count", "sinks", "sources", "lambda0",
                    "core_irreducible", "correspondence_degree"):
            value = analysis[key]
            if key == "lambda0":
                value = f"{value:.15g}"
            writer.writerow([key, json.dumps(value) if isinstance(value, list) else value])
        writer.writerow(["partition", json.dumps(analysis["partition"], sort_keys=True)])
        writer.writerow(["numbering", json.dumps(analysis["numbering"], sort_keys=True)])
        writer.writerow(["core", json.dumps(analysis["core"], sort_keys=True)])
        return buf.getvalue()
    raise ParseError(f"unknown output format {fmt!r}")


def check_report_dict(report) -> dict:
    """Serialize a bare beta-condition report (the ``verify`` subcommand)."""
    return {
        "equality_residual": sig15(report.equality_residual),
        "inequality_violation": sig15(report.inequality_violation),
        "satisfied": report.satisfied,
        "tolerance": sig15(report.tolerance),
    }
