"""Edge-list and DIMACS ``.col`` readers/writers."""

from __future__ import annotations

from pathlib import Path

from .graph import Graph, GraphError, from_edge_list


class GraphFormatError(GraphError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line = line


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines += [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str, source: str | None = None) -> Graph:
    """Parse ``n m`` followed by ``m`` lines of 0-indexed ``u v`` pairs.

    Blank lines and ``#`` comments are ignored.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise GraphFormatError("empty graph file", source=source)
    lineno, header = rows[0]
    if len(header) != 2:
        raise GraphFormatError(f"expected header 'n m', got {' '.join(header)!r}", lineno, source)
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise GraphFormatError(f"non-integer header {' '.join(header)!r}", lineno, source) from None
    body = rows[1:]
    if len(body) != m:
        raise GraphFormatError(f"header declares {m} edges but file has {len(body)}",
                               body[-1][0] if body else lineno, source)
    pairs = []
    for lineno, toks in body:
        if len(toks) != 2:
            raise GraphFormatError(f"expected 'u v', got {' '.join(toks)!r}", lineno, source)
        try:
            pairs.append((int(toks[0]), int(toks[1])))
        except ValueError:
            raise GraphFormatError(f"non-integer vertex in {' '.join(toks)!r}", lineno, source) from None
    return _build(n, pairs, [ln for ln, _ in body], source)


def parse_dimacs(text: str, source: str | None = None) -> Graph:
    """Parse DIMACS ``p edge n m`` / ``e u v`` (1-indexed) into a 0-indexed graph.

    Repeated edges (common in published ``.col`` files listing both
    directions) are collapsed.
    """
    n = None
    pairs, linenos, seen = [], [], set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split()
        if not toks or toks[0] == "c":
            continue
        if toks[0] == "p":
            if len(toks) != 4:
                raise GraphFormatError(f"malformed p-line {raw.strip()!r}", lineno, source)
            try:
                n = int(toks[2])
            except ValueError:
                raise GraphFormatError(f"malformed p-line {raw.strip()!r}", lineno, source) from None
        elif toks[0] == "e":
            if n is None:
                raise GraphFormatError("edge line before p-line", lineno, source)
            if len(toks) != 3:
                raise GraphFormatError(f"malformed e-line {raw.strip()!r}", lineno, source)
            try:
                u, v = int(toks[1]) - 1, int(toks[2]) - 1
            except ValueError:
                raise GraphFormatError(f"malformed e-line {raw.strip()!r}", lineno, source) from None
            key = (min(u, v), max(u, v))
            if key in seen and u != v:
                continue
            seen.add(key)
            pairs.append((u, v))
            linenos.append(lineno)
        else:
            raise GraphFormatError(f"unknown line type {toks[0]!r}", lineno, source)
    if n is None:
        raise GraphFormatError("missing p-line", source=source)
    return _build(n, pairs, linenos, source)


def format_dimacs(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.m}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def _build(n, pairs, linenos, source):
    try:
        return from_edge_list(n, pairs)
    except GraphError as exc:
        # locate the offending line for the message
        for lineno, (u, v) in zip(linenos, pairs):
            try:
                from_edge_list(n, [(u, v)])
            except GraphError:
                raise GraphFormatError(str(exc), lineno, source) from None
        seen = {}
        for lineno, (u, v) in zip(linenos, pairs):
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(str(exc), lineno, source) from None
            seen[key] = lineno
        raise GraphFormatError(str(exc), source=source) from None


def read_graph(path: str | Path) -> Graph:
    """Read a graph file; ``.col``/``.dimacs`` or a leading ``p``/``c`` line selects DIMACS."""
    path = Path(path)
    text = path.read_text()
    first = next((ln.split()[0] for ln in text.splitlines() if ln.strip()), "")
    if path.suffix in (".col", ".dimacs") or first in ("p", "c"):
        return parse_dimacs(text, str(path))
    return parse_edge_list(text, str(path))


def write_graph(g: Graph, path: str | Path) -> None:
    path = Path(path)
    text = format_dimacs(g) if path.suffix in (".col", ".dimacs") else format_edge_list(g)
    path.write_text(text)
