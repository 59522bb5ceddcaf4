"""Labeled undirected graphs and their GML serialization.

The graph model is deliberately small: simple undirected graphs (no
self-loops, no parallel edges) whose nodes and edges both carry non-empty
string labels.  Node ids are dense integers ``0..n-1`` internally; graphs
parsed from GML remember the external ids they were declared with so that
error messages and round-trips can speak the caller's language.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class GmlError(ValueError):
    """Raised for malformed GML input; carries a 1-based line/column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


def _normalize(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class LabeledGraph:
    """An immutable simple undirected graph with node and edge labels.

    Construct with :meth:`from_parts`; instances should not be mutated.
    Structural equality compares labels and edge sets, ignoring the
    external-id side map.
    """

    __slots__ = ("_labels", "_edges", "_adj", "_ext_ids")

    def __init__(self, labels: Sequence[str], edges: dict[tuple[int, int], str],
                 adj: tuple[dict[int, str], ...], ext_ids: tuple[int, ...]):
        self._labels = tuple(labels)
        self._edges = edges
        self._adj = adj
        self._ext_ids = ext_ids

    @classmethod
    def from_parts(cls, labels: Sequence[str],
                   edges: Iterable[tuple[int, int, str]],
                   ext_ids: Sequence[int] | None = None) -> "LabeledGraph":
        labels = tuple(labels)
        n = len(labels)
        for i, lbl in enumerate(labels):
            if not isinstance(lbl, str) or lbl == "":
                raise ValueError(f"node {i} has an empty or non-string label")
        edge_map: dict[tuple[int, int], str] = {}
        adj: list[dict[int, str]] = [dict() for _ in range(n)]
        for u, v, lbl in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) references an unknown node")
            if u == v:
                raise ValueError(f"self-loop on node {u} is not allowed")
            if not isinstance(lbl, str) or lbl == "":
                raise ValueError(f"edge ({u}, {v}) has an empty label")
            key = _normalize(u, v)
            if key in edge_map:
                raise ValueError(f"duplicate edge ({u}, {v})")
            edge_map[key] = lbl
            adj[u][v] = lbl
            adj[v][u] = lbl
        # Sort adjacency for deterministic iteration regardless of insert order.
        adj_sorted = tuple({k: d[k] for k in sorted(d)} for d in adj)
        edge_sorted = {k: edge_map[k] for k in sorted(edge_map)}
        if ext_ids is None:
            ext = tuple(range(n))
        else:
            ext = tuple(ext_ids)
            if len(ext) != n:
                raise ValueError("ext_ids length does not match node count")
        return cls(labels, edge_sorted, adj_sorted, ext)

    # -- basic accessors ---------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self._labels)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def node_labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def ext_ids(self) -> tuple[int, ...]:
        """External (as-declared) id for each dense node id."""
        return self._ext_ids

    def nodes(self) -> range:
        return range(len(self._labels))

    def label(self, v: int) -> str:
        return self._labels[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def neighbors(self, v: int) -> dict[int, str]:
        """Neighbor -> edge label, in ascending neighbor order."""
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return _normalize(u, v) in self._edges

    def edge_label(self, u: int, v: int) -> str | None:
        return self._edges.get(_normalize(u, v))

    def edges(self) -> Iterator[tuple[int, int, str]]:
        """Edges as (u, v, label) with u < v, ascending."""
        for (u, v), lbl in self._edges.items():
            yield u, v, lbl

    # -- derived graphs ----------------------------------------------------

    def with_labels(self, changes: dict[int, str]) -> "LabeledGraph":
        """Copy of the graph with some node labels replaced."""
        labels = list(self._labels)
        for v, lbl in changes.items():
            labels[v] = lbl
        return LabeledGraph.from_parts(labels, list(self.edges()), self._ext_ids)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return self._labels == other._labels and self._edges == other._edges

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"LabeledGraph(nodes={self.node_count}, edges={self.edge_count})"


# -- GML ------------------------------------------------------------------

_WORD_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_OPS = set("=!<>")


@dataclass(frozen=True)
class Token:
    kind: str  # 'word' | 'int' | 'str' | 'op' | '[' | ']'
    value: str
    line: int
    column: int


def tokenize_gml(text: str) -> list[Token]:
    """Split GML-style text into tokens; ``#`` starts a comment to end of line."""
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if ch in "[]":
            tokens.append(Token(ch, ch, start_line, start_col))
            i += 1
            col += 1
            continue
        if ch in _OPS:
            tokens.append(Token("op", ch, start_line, start_col))
            i += 1
            col += 1
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                if text[j] == "\n":
                    raise GmlError("unterminated string", start_line, start_col)
                j += 1
            if j >= n:
                raise GmlError("unterminated string", start_line, start_col)
            tokens.append(Token("str", text[i + 1:j], start_line, start_col))
            col += j + 1 - i
            i = j + 1
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch in _WORD_START:
            j = i + 1
            while j < n and (text[j] in _WORD_START or text[j].isdigit()):
                j += 1
            tokens.append(Token("word", text[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        raise GmlError(f"unexpected character {ch!r}", start_line, start_col)
    return tokens


class TokenStream:
    """Cursor over a token list with convenience expectations."""

    def __init__(self, tokens: list[Token], text_end: tuple[int, int]):
        self._tokens = tokens
        self._pos = 0
        self._end = text_end

    @classmethod
    def from_text(cls, text: str) -> "TokenStream":
        lines = text.split("\n")
        end = (len(lines), len(lines[-1]) + 1)
        return cls(tokenize_gml(text), end)

    def peek(self) -> Token | None:
        if self._pos < len(self._tokens):
            return self._tokens[self._pos]
        return None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise GmlError("unexpected end of input", *self._end)
        self._pos += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.next()
        if tok.kind != kind:
            want = what or kind
            raise GmlError(f"expected {want}, found {tok.value!r}", tok.line, tok.column)
        return tok

    def expect_word(self, value: str) -> Token:
        tok = self.next()
        if tok.kind != "word" or tok.value != value:
            raise GmlError(f"expected '{value}', found {tok.value!r}", tok.line, tok.column)
        return tok

    def at_end(self) -> bool:
        return self._pos >= len(self._tokens)

    def error(self, message: str) -> GmlError:
        tok = self.peek()
        if tok is None:
            return GmlError(message, *self._end)
        return GmlError(message, tok.line, tok.column)


def _parse_graph_body(ts: TokenStream) -> tuple[list[tuple[int, str, Token]],
                                                list[tuple[int, int, str, Token]]]:
    """Parse ``[ node ... edge ... ]`` returning raw node/edge declarations."""
    ts.expect("[")
    nodes: list[tuple[int, str, Token]] = []
    edges: list[tuple[int, int, str, Token]] = []
    while True:
        tok = ts.next()
        if tok.kind == "]":
            break
        if tok.kind != "word" or tok.value not in ("node", "edge"):
            raise GmlError(f"expected 'node', 'edge' or ']', found {tok.value!r}",
                           tok.line, tok.column)
        if tok.value == "node":
            ts.expect("[")
            ts.expect_word("id")
            nid = int(ts.expect("int", "node id").value)
            ts.expect_word("label")
            lbl = ts.expect("str", "node label").value
            ts.expect("]")
            nodes.append((nid, lbl, tok))
        else:
            ts.expect("[")
            ts.expect_word("source")
            src = int(ts.expect("int", "edge source").value)
            ts.expect_word("target")
            tgt = int(ts.expect("int", "edge target").value)
            ts.expect_word("label")
            lbl = ts.expect("str", "edge label").value
            ts.expect("]")
            edges.append((src, tgt, lbl, tok))
    return nodes, edges


def _graph_from_declarations(nodes: list[tuple[int, str, Token]],
                             edges: list[tuple[int, int, str, Token]]) -> LabeledGraph:
    """Validate raw GML declarations and build the dense graph."""
    ext_to_dense: dict[int, int] = {}
    labels: list[str] = []
    ext_ids: list[int] = []
    for nid, lbl, tok in nodes:
        if nid in ext_to_dense:
            raise GmlError(f"duplicate node id {nid}", tok.line, tok.column)
        if lbl == "":
            raise GmlError(f"node {nid} has an empty label", tok.line, tok.column)
        ext_to_dense[nid] = len(labels)
        labels.append(lbl)
        ext_ids.append(nid)

    dense_edges: list[tuple[int, int, str]] = []
    seen: set[tuple[int, int]] = set()
    for src, tgt, lbl, tok in edges:
        if src not in ext_to_dense:
            raise GmlError(f"edge references undeclared node {src}", tok.line, tok.column)
        if tgt not in ext_to_dense:
            raise GmlError(f"edge references undeclared node {tgt}", tok.line, tok.column)
        if src == tgt:
            raise GmlError(f"self-loop on node {src}", tok.line, tok.column)
        if lbl == "":
            raise GmlError(f"edge ({src}, {tgt}) has an empty label", tok.line, tok.column)
        u, v = ext_to_dense[src], ext_to_dense[tgt]
        key = _normalize(u, v)
        if key in seen:
            raise GmlError(f"duplicate edge ({src}, {tgt})", tok.line, tok.column)
        seen.add(key)
        dense_edges.append((u, v, lbl))
    return LabeledGraph.from_parts(labels, dense_edges, ext_ids)


def parse_gml_graph(text: str) -> LabeledGraph:
    """Parse a ``graph [ ... ]`` block into a :class:`LabeledGraph`.

    Node declarations must precede use; duplicate ids, duplicate edges and
    edges to undeclared nodes are reported with the position of the
    offending declaration.
    """
    ts = TokenStream.from_text(text)
    ts.expect_word("graph")
    nodes, edges = _parse_graph_body(ts)
    if not ts.at_end():
        raise ts.error("trailing content after graph block")
    return _graph_from_declarations(nodes, edges)


def write_gml_graph(g: LabeledGraph) -> str:
    """Serialize a graph to GML using its external ids, ascending."""
    order = sorted(g.nodes(), key=lambda v: g.ext_ids[v])
    lines = ["graph ["]
    for v in order:
        lines.append(f'  node [ id {g.ext_ids[v]} label "{g.label(v)}" ]')
    ext_edges = []
    for u, v, lbl in g.edges():
        a, b = g.ext_ids[u], g.ext_ids[v]
        if a > b:
            a, b = b, a
        ext_edges.append((a, b, lbl))
    for a, b, lbl in sorted(ext_edges):
        lines.append(f'  edge [ source {a} target {b} label "{lbl}" ]')
    lines.append("]")
    return "\n".join(lines) + "\n"


# -- combinators -----------------------------------------------------------

def disjoint_union(graphs: Sequence[LabeledGraph]) -> tuple[LabeledGraph, tuple[tuple[int, int], ...]]:
    """Stack graphs side by side.

    Returns the union and an origin map: for each node of the union, the
    pair ``(graph_index, node_id_in_that_graph)``.
    """
    labels: list[str] = []
    edges: list[tuple[int, int, str]] = []
    origin: list[tuple[int, int]] = []
    offset = 0
    for gi, g in enumerate(graphs):
        labels.extend(g.node_labels)
        for u, v, lbl in g.edges():
            edges.append((u + offset, v + offset, lbl))
        origin.extend((gi, v) for v in g.nodes())
        offset += g.node_count
    return LabeledGraph.from_parts(labels, edges), tuple(origin)


def connected_components(g: LabeledGraph) -> list[tuple[LabeledGraph, tuple[int, ...]]]:
    """Split into connected components.

    Each component comes with the tuple of original node ids it was carved
    from (ascending); components are ordered by their smallest original id.
    """
    seen = [False] * g.node_count
    components: list[tuple[LabeledGraph, tuple[int, ...]]] = []
    for start in g.nodes():
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        members = [start]
        while stack:
            v = stack.pop()
            for u in g.neighbors(v):
                if not seen[u]:
                    seen[u] = True
                    members.append(u)
                    stack.append(u)
        members.sort()
        remap = {old: new for new, old in enumerate(members)}
        labels = [g.label(old) for old in members]
        edges = [(remap[u], remap[v], lbl)
                 for u, v, lbl in g.edges() if u in remap and v in remap]
        components.append((LabeledGraph.from_parts(labels, edges), tuple(members)))
    return components
