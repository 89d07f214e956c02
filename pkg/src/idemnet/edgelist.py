"""Plain-text edge list parsing and canonical serialization.

Format: one ``u v`` pair per line, whitespace separated, ``#`` comments
ignored. The node count is inferred as max id + 1 unless an ``n=<k>``
header (bare or inside a comment) says otherwise; a ``directed`` token in
a header comment marks arc semantics. The writer emits a canonical form
(u < v for undirected edges, lexicographically sorted, headers only when
needed) that parses back to an identical graph.
"""

from __future__ import annotations

import io
import re

from .graph import build_graph


class EdgeListError(ValueError):
    """Malformed edge-list input; carries the offending line number."""

    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


_HEADER_N = re.compile(r"\bn\s*=\s*(\d+)\b")


def parse_edge_list(source, directed=None, allow_self_loops=False):
    """Parse an edge list from a string, iterable of lines, or text stream.

    ``directed=None`` means: follow a ``# directed`` header if present,
    else undirected. A ``u u`` line marks the graph as self-loop-bearing
    regardless of ``allow_self_loops``. Duplicate edges collapse. Raises
    :class:`EdgeListError` with a line number on malformed input.
    """
    if isinstance(source, str):
        lines = io.StringIO(source)
    else:
        lines = source
    edges = []
    declared_n = None
    header_directed = False
    max_id = -1
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#") or line.startswith("n="):
            m = _HEADER_N.search(line)
            if m:
                declared_n = int(m.group(1))
            if line.startswith("#") and re.search(r"\bdirected\b", line):
                header_directed = True
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListError(f"expected 'u v', got {line!r}", line_no)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(f"non-integer endpoint in {line!r}", line_no)
        if u < 0 or v < 0:
            raise EdgeListError(f"negative node id in {line!r}", line_no)
        if declared_n is not None and (u >= declared_n or v >= declared_n):
            raise EdgeListError(
                f"node id exceeds declared n={declared_n} in {line!r}", line_no)
        edges.append((u, v))
        if u == v:
            allow_self_loops = True
        max_id = max(max_id, u, v)
    n = declared_n if declared_n is not None else max_id + 1
    if n <= 0:
        raise EdgeListError("empty edge list with no n=<k> header")
    if directed is None:
        directed = header_directed
    return build_graph(n, edges, directed=directed,
                       allow_self_loops=allow_self_loops)


def write_edge_list(g, stream):
    """Write the canonical edge list of ``g`` to a text stream.

    Headers are emitted only when parsing would otherwise lose
    information: ``# directed`` for directed graphs and ``# n=<k>`` when
    trailing isolated nodes make n larger than max id + 1.
    """
    edges = g.edges()
    max_id = int(edges.max()) if edges.size else -1
    if g.directed:
        stream.write("# directed\n")
    if g.n != max_id + 1:
        stream.write(f"# n={g.n}\n")
    for u, v in edges:
        stream.write(f"{u} {v}\n")


def edge_list_text(g):
    """Canonical edge list as a string."""
    buf = io.StringIO()
    write_edge_list(g, buf)
    return buf.getvalue()
