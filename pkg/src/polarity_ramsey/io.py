"""File formats: DIMACS, edge lists, arc lists and JSON certificates.

Big integers are written to JSON as decimal strings so nothing is lost to
floating point on the way through another language.
"""
from __future__ import annotations

import json
from pathlib import Path

from .digraph import Digraph
from .geometry import LoopyGraph

SCHEMA_VERSION = 1


class FormatError(ValueError):
    pass


# -- DIMACS -----------------------------------------------------------------------

def dimacs_lines(G: LoopyGraph, comments: dict | None = None) -> list[str]:
    lines = []
    meta = {**G.meta, **(comments or {})}
    for key in ("t", "q"):
        if key in meta:
            lines.append(f"c {key} {meta[key]}")
    lines.append(f"c loops {G.loop_count}")
    for key, value in (comments or {}).items():
        if key not in ("t", "q"):
            lines.append(f"c {key} {value}")
    edges = list(G.edges())
    lines.append(f"p edge {G.n} {len(edges)}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in edges)
    return lines


def write_dimacs(G: LoopyGraph, path, comments: dict | None = None) -> None:
    Path(path).write_text("\n".join(dimacs_lines(G, comments)) + "\n")


def parse_dimacs(text: str) -> LoopyGraph:
    n = None
    edges = []
    meta: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts:
            continue
        tag = parts[0]
        if tag == "c":
            if len(parts) == 3 and parts[1] in ("t", "q", "loops"):
                meta[parts[1]] = int(parts[2])
        elif tag == "p":
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise FormatError(f"line {lineno}: bad problem line {raw!r}")
            n = int(parts[2])
        elif tag == "e":
            if n is None:
                raise FormatError(f"line {lineno}: edge before problem line")
            u, v = int(parts[1]) - 1, int(parts[2]) - 1
            if not (0 <= u < n and 0 <= v < n):
                raise FormatError(f"line {lineno}: vertex out of range")
            edges.append((u, v))
        else:
            raise FormatError(f"line {lineno}: unknown line type {tag!r}")
    if n is None:
        raise FormatError("no problem line")
    G = LoopyGraph.from_edges(n, edges, meta={k: v for k, v in meta.items() if k != "loops"})
    if "loops" in meta and meta["loops"] != G.loop_count:
        raise FormatError(f"header says {meta['loops']} loops, edges give {G.loop_count}")
    return G


def read_dimacs(path) -> LoopyGraph:
    return parse_dimacs(Path(path).read_text())


# -- edge lists and labels --------------------------------------------------------

def write_edge_list(G: LoopyGraph, path) -> None:
    Path(path).write_text("".join(f"{u} {v}\n" for u, v in G.edges()))


def read_edge_list(path, n: int) -> LoopyGraph:
    edges = []
    for line in Path(path).read_text().splitlines():
        if line.strip():
            u, v = map(int, line.split())
            edges.append((u, v))
    return LoopyGraph.from_edges(n, edges)


def write_labels(G: LoopyGraph, path) -> None:
    labels = G.labels if G.labels is not None else list(range(G.n))
    Path(path).write_text(json.dumps([list(x) if isinstance(x, tuple) else x for x in labels]) + "\n")


def write_arc_list(D: Digraph, path) -> None:
    """0-based "u v" per arc, plus a sidecar ``<path>.vertices.json`` mapping index to label."""
    Path(path).write_text("".join(f"{u} {v}\n" for u, v in D.arcs()))
    labels = getattr(D, "labels", None)
    if labels is not None:
        sidecar = Path(str(path) + ".vertices.json")
        sidecar.write_text(json.dumps([list(x) if isinstance(x, tuple) else x for x in labels]) + "\n")


def read_arc_list(path, n: int) -> Digraph:
    arcs = []
    for line in Path(path).read_text().splitlines():
        if line.strip():
            u, v = map(int, line.split())
            arcs.append((u, v))
    return Digraph.from_arcs(n, arcs)


# -- certificates -----------------------------------------------------------------

def _stringify(obj):
    """Recursively turn big ints into decimal strings and tuples into lists."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) >= 2 ** 53 else obj
    if isinstance(obj, dict):
        return {str(k): _stringify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stringify(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return _stringify(obj.item())
    return obj


def make_certificate(command: list[str], results: dict, seed: int | None = None,
                     inputs: dict | None = None, notes: list[str] | None = None,
                     timings: dict | None = None) -> dict:
    cert = {
        "schema_version": SCHEMA_VERSION,
        "command": list(command),
        "seed": seed,
        "inputs": inputs or {},
        "results": results,
        "notes": notes or [],
    }
    if timings is not None:
        cert["timings"] = timings
    return _stringify(cert)


def dumps_certificate(cert: dict) -> str:
    return json.dumps(_stringify(cert), indent=2, sort_keys=True) + "\n"


def write_certificate(cert: dict, path) -> None:
    Path(path).write_text(dumps_certificate(cert))


def read_certificate(path) -> dict:
    cert = json.loads(Path(path).read_text())
    if cert.get("schema_version") != SCHEMA_VERSION:
        raise FormatError(f"unsupported schema version {cert.get('schema_version')!r}")
    return cert
