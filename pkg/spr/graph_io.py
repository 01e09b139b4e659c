"""
Reader and writer for the ``spr-graph`` text format.

    spr-graph 1
    n m k
    <k lines: one terminal id each>
    <m lines: u v w>

Ids are 0-based, weights decimal. Lines starting with ``#`` are comments and
blank lines are ignored anywhere in the file.
"""

import json
from pathlib import Path
from typing import Iterable, List, Optional, Tuple, Union

from spr.errors import IoError, ParseError, SPRError
from spr.graph_core import WeightedGraph, build_graph
from spr.schemas import MinorRecord

MAGIC = "spr-graph"
FORMAT_VERSION = 1


def _content_lines(text: str) -> List[Tuple[int, str]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append((number, line))
    return lines


def _ints(number: int, line: str, expected: int) -> List[int]:
    parts = line.split()
    if len(parts) != expected:
        raise ParseError(f"expected {expected} integers", line=number, text=line)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError("malformed integer", line=number, text=line)


def parse_graph(text: str) -> WeightedGraph:
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty graph file")
    number, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != MAGIC:
        raise ParseError(f"missing '{MAGIC} {FORMAT_VERSION}' header", line=number, text=header)
    if parts[1] != str(FORMAT_VERSION):
        raise ParseError("unsupported format version", line=number, version=parts[1])
    if len(lines) < 2:
        raise ParseError("missing size line")
    n, m, k = _ints(lines[1][0], lines[1][1], 3)
    if n < 1 or m < 0 or k < 1:
        raise ParseError("sizes must satisfy n >= 1, m >= 0, k >= 1", line=lines[1][0])
    body = lines[2:]
    if len(body) != k + m:
        raise ParseError(
            "record count does not match header", expected=k + m, found=len(body)
        )

    terminals = [_ints(num, line, 1)[0] for num, line in body[:k]]
    edges = []
    for num, line in body[k:]:
        fields = line.split()
        if len(fields) != 3:
            raise ParseError("edge lines need 'u v w'", line=num, text=line)
        try:
            edges.append((int(fields[0]), int(fields[1]), float(fields[2])))
        except ValueError:
            raise ParseError("malformed edge", line=num, text=line)
    return build_graph(edges, terminals, vertex_count=n)


def format_graph(g: WeightedGraph, comments: Optional[Iterable[str]] = None) -> str:
    out = [f"{MAGIC} {FORMAT_VERSION}"]
    for comment in comments or ():
        out.append(f"# {comment}")
    out.append(f"{g.vertex_count} {g.m} {g.k}")
    out.extend(str(t) for t in g.terminals)
    # repr keeps the shortest string that round-trips the double exactly
    out.extend(f"{u} {v} {w!r}" for u, v, w in g.edges)
    return "\n".join(out) + "\n"


def _read_text(path: Union[str, Path], what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"{what} is not valid UTF-8 text", offset=e.start, path=str(path))
    except OSError as e:
        raise IoError(f"cannot read {what}: {e}", path=str(path))


def read_graph(path: Union[str, Path]) -> WeightedGraph:
    text = _read_text(path, "graph file")
    try:
        return parse_graph(text)
    except SPRError as e:
        e.context.setdefault("path", str(path))
        raise


def write_graph(g: WeightedGraph, path: Union[str, Path], comments: Optional[Iterable[str]] = None) -> None:
    try:
        Path(path).write_text(format_graph(g, comments))
    except OSError as e:
        raise IoError(f"cannot write graph file: {e}", path=str(path))


def read_minor_record(path: Union[str, Path]) -> MinorRecord:
    """Load the first minor record from a JSON-lines file written by ``run``."""
    text = _read_text(path, "record file")
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line.startswith("{"):
            continue
        try:
            payload = json.loads(line)
        except ValueError as e:
            raise ParseError(f"malformed JSON record: {e}", line=number, path=str(path))
        if payload.get("record") != "minor":
            continue
        try:
            return MinorRecord.model_validate(payload)
        except ValueError as e:
            raise ParseError(f"malformed minor record: {e}", line=number, path=str(path))
    raise ParseError("no minor record found", path=str(path))
