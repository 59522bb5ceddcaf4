"""Graph rewrite rules with Double-Push-Out application semantics.

A rule is stored as a single *rule graph*: every node and edge carries an
optional left label and an optional right label.  Elements with only a
left label are deleted, elements with only a right label are created, and
elements whose labels differ between the sides are relabeled.  The left
projection of the rule graph is the pattern that is matched into host
graphs; matching conditions (wildcards and constraints) live on that side.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

from .core import GmlError, LabeledGraph, TokenStream, _normalize
from .match import (Adjacency, EdgeLabel, MatchConstraint, NodeDegree,
                    NodeLabel, NoEdge, Pattern, are_isomorphic,
                    find_monomorphisms)

log = logging.getLogger(__name__)


class RuleError(ValueError):
    """Raised for structurally invalid rules."""


class ApplicationError(RuntimeError):
    """Raised when a rewrite cannot be performed on a host graph."""


@dataclass(frozen=True)
class RuleNode:
    id: int
    left: str | None = None
    right: str | None = None


@dataclass(frozen=True)
class RuleEdge:
    source: int
    target: int
    left: str | None = None
    right: str | None = None


class RuleGraph:
    """A validated rewrite rule over external node ids."""

    def __init__(self, rule_id: str, nodes: Sequence[RuleNode],
                 edges: Sequence[RuleEdge],
                 constraints: Sequence[MatchConstraint] = (),
                 wildcard: str | None = None):
        if not rule_id:
            raise RuleError("rule must have a non-empty ruleID")
        self.rule_id = rule_id
        self.wildcard = wildcard
        self.nodes = tuple(nodes)
        self.edges = tuple(edges)
        self.constraints = tuple(constraints)
        self._validate()
        self._pattern_cache: tuple[Pattern, dict[int, int]] | None = None

    def _validate(self) -> None:
        by_id: dict[int, RuleNode] = {}
        for nd in self.nodes:
            if nd.left is None and nd.right is None:
                raise RuleError(f"node {nd.id} has neither a left nor a right label")
            if nd.left == "" or nd.right == "":
                raise RuleError(f"node {nd.id} has an empty label")
            if nd.id in by_id:
                raise RuleError(f"duplicate node id {nd.id}")
            by_id[nd.id] = nd
        seen_edges: set[tuple[int, int]] = set()
        for ed in self.edges:
            if ed.left is None and ed.right is None:
                raise RuleError(f"edge ({ed.source}, {ed.target}) has no label on either side")
            if ed.left == "" or ed.right == "":
                raise RuleError(f"edge ({ed.source}, {ed.target}) has an empty label")
            for end in (ed.source, ed.target):
                if end not in by_id:
                    raise RuleError(f"edge ({ed.source}, {ed.target}) references undeclared node {end}")
            if ed.source == ed.target:
                raise RuleError(f"self-loop on node {ed.source}")
            key = _normalize(ed.source, ed.target)
            if key in seen_edges:
                raise RuleError(f"duplicate edge ({ed.source}, {ed.target})")
            seen_edges.add(key)
            for side in ("left", "right"):
                if getattr(ed, side) is not None:
                    for end in (ed.source, ed.target):
                        if getattr(by_id[end], side) is None:
                            raise RuleError(
                                f"edge ({ed.source}, {ed.target}) is declared on the {side} side "
                                f"but node {end} is absent there")
        left_ids = {nd.id for nd in self.nodes if nd.left is not None}
        for c in self.constraints:
            refs = (c.node,) if isinstance(c, (NodeLabel, Adjacency, NodeDegree)) \
                else (c.source, c.target)
            for r in refs:
                if r not in left_ids:
                    raise RuleError(f"constraint references node {r}, which is not matched "
                                    f"on the left side")

    # -- projections -------------------------------------------------------

    def left_pattern(self) -> tuple[Pattern, dict[int, int]]:
        """The matching pattern and the external-id -> pattern-id map."""
        if self._pattern_cache is None:
            left_nodes = [nd for nd in self.nodes if nd.left is not None]
            ext_to_pid = {nd.id: i for i, nd in enumerate(left_nodes)}
            labels = [nd.left for nd in left_nodes]
            edges = [(ext_to_pid[ed.source], ext_to_pid[ed.target], ed.left)
                     for ed in self.edges if ed.left is not None]
            graph = LabeledGraph.from_parts(labels, edges,
                                            ext_ids=[nd.id for nd in left_nodes])
            constraints = [_remap_constraint(c, ext_to_pid) for c in self.constraints]
            self._pattern_cache = (Pattern(graph, constraints, self.wildcard), ext_to_pid)
        return self._pattern_cache

    def __repr__(self) -> str:
        return f"RuleGraph({self.rule_id!r}, {len(self.nodes)} nodes, {len(self.edges)} edges)"


def _remap_constraint(c: MatchConstraint, mapping: dict[int, int]) -> MatchConstraint:
    if isinstance(c, (NodeLabel, Adjacency, NodeDegree)):
        return replace(c, node=mapping[c.node])
    return replace(c, source=mapping[c.source], target=mapping[c.target])


def reverse_rule(rule: RuleGraph, rule_id: str | None = None) -> RuleGraph:
    """Swap the two sides of a rule and drop all matching constraints."""
    if rule_id is None:
        rule_id = f"{rule.rule_id} (reverse)"
    nodes = [RuleNode(nd.id, nd.right, nd.left) for nd in rule.nodes]
    edges = [RuleEdge(ed.source, ed.target, ed.right, ed.left) for ed in rule.edges]
    return RuleGraph(rule_id, nodes, edges, (), rule.wildcard)


# -- GML rule format --------------------------------------------------------

def _parse_label_list(ts: TokenStream) -> frozenset[str]:
    ts.expect("[")
    labels = []
    while True:
        tok = ts.next()
        if tok.kind == "]":
            break
        if tok.kind != "word" or tok.value != "label":
            raise GmlError(f"expected 'label' or ']', found {tok.value!r}", tok.line, tok.column)
        labels.append(ts.expect("str", "label string").value)
    return frozenset(labels)


def _parse_constraint(kind: str, ts: TokenStream) -> MatchConstraint:
    tok = ts.expect("[")
    fields: dict[str, object] = {}
    while True:
        tok = ts.next()
        if tok.kind == "]":
            break
        if tok.kind != "word":
            raise GmlError(f"expected a constraint key, found {tok.value!r}", tok.line, tok.column)
        key = tok.value
        if key in ("id", "count", "source", "target"):
            fields[key] = int(ts.expect("int", f"{key} value").value)
        elif key == "op":
            fields[key] = ts.expect("op", "an operator (= ! < >)").value
        elif key in ("nodeLabels", "edgeLabels"):
            fields[key] = _parse_label_list(ts)
        else:
            raise GmlError(f"unknown constraint key {key!r}", tok.line, tok.column)

    def need(name: str) -> object:
        if name not in fields:
            raise GmlError(f"{kind} is missing its '{name}' entry", tok.line, tok.column)
        return fields[name]

    try:
        if kind == "constrainNode":
            return NodeLabel(node=need("id"), op=need("op"),
                             labels=need("nodeLabels"))
        if kind == "constrainAdj":
            return Adjacency(node=need("id"), op=need("op"), count=need("count"),
                             node_labels=fields.get("nodeLabels", frozenset()),
                             edge_labels=fields.get("edgeLabels", frozenset()))
        return NoEdge(source=need("source"), target=need("target"))
    except ValueError as exc:
        raise GmlError(str(exc), tok.line, tok.column) from exc


_CONSTRAINT_KINDS = ("constrainNode", "constrainAdj", "constrainNoEdge")


def parse_gml_rule(text: str, groups=None) -> RuleGraph:
    """Parse a ``rule [ ... ]`` block.

    The ``context`` section declares elements present on both sides,
    ``left``/``right`` declare one-sided elements; a node or edge may appear
    in both one-sided sections to express a relabel.  Constraints are
    accepted inside ``left`` and ``context``.  When a :class:`GroupRegistry`
    is passed, node labels of the form ``[{NAME}]`` are expanded in place.
    """
    ts = TokenStream.from_text(text)
    ts.expect_word("rule")
    ts.expect("[")
    ts.expect_word("ruleID")
    rule_id = ts.expect("str", "rule id string").value

    node_sides: dict[int, dict[str, str]] = {}
    node_order: list[int] = []
    edge_sides: dict[tuple[int, int], dict[str, str]] = {}
    edge_order: list[tuple[int, int]] = []
    constraints: list[MatchConstraint] = []
    wildcard: str | None = None
    seen_sections: set[str] = set()

    def add_node(nid: int, side: str, label: str, tok) -> None:
        entry = node_sides.setdefault(nid, {})
        if nid not in node_order:
            node_order.append(nid)
        sides = ("left", "right") if side == "context" else (side,)
        for s in sides:
            if s in entry:
                raise GmlError(f"node {nid} already has a {s} label", tok.line, tok.column)
            entry[s] = label

    def add_edge(src: int, tgt: int, side: str, label: str, tok) -> None:
        key = _normalize(src, tgt)
        entry = edge_sides.setdefault(key, {})
        if key not in edge_order:
            edge_order.append(key)
        sides = ("left", "right") if side == "context" else (side,)
        for s in sides:
            if s in entry:
                raise GmlError(f"edge ({src}, {tgt}) already has a {s} label",
                               tok.line, tok.column)
            entry[s] = label

    while True:
        tok = ts.next()
        if tok.kind == "]":
            break
        if tok.kind != "word":
            raise GmlError(f"expected a rule section, found {tok.value!r}", tok.line, tok.column)
        if tok.value == "wildcard":
            if wildcard is not None:
                raise GmlError("duplicate wildcard declaration", tok.line, tok.column)
            wildcard = ts.expect("str", "wildcard label").value
            continue
        if tok.value not in ("context", "left", "right"):
            raise GmlError(f"unknown rule section {tok.value!r}", tok.line, tok.column)
        section = tok.value
        if section in seen_sections:
            raise GmlError(f"duplicate section '{section}'", tok.line, tok.column)
        seen_sections.add(section)
        ts.expect("[")
        while True:
            tok = ts.next()
            if tok.kind == "]":
                break
            if tok.kind != "word":
                raise GmlError(f"expected a declaration, found {tok.value!r}",
                               tok.line, tok.column)
            if tok.value == "node":
                ts.expect("[")
                ts.expect_word("id")
                nid = int(ts.expect("int", "node id").value)
                ts.expect_word("label")
                lbl = ts.expect("str", "node label").value
                if lbl == "":
                    raise GmlError(f"node {nid} has an empty label", tok.line, tok.column)
                ts.expect("]")
                add_node(nid, section, lbl, tok)
            elif tok.value == "edge":
                ts.expect("[")
                ts.expect_word("source")
                src = int(ts.expect("int", "edge source").value)
                ts.expect_word("target")
                tgt = int(ts.expect("int", "edge target").value)
                ts.expect_word("label")
                lbl = ts.expect("str", "edge label").value
                if lbl == "":
                    raise GmlError(f"edge ({src}, {tgt}) has an empty label",
                                   tok.line, tok.column)
                ts.expect("]")
                if src == tgt:
                    raise GmlError(f"self-loop on node {src}", tok.line, tok.column)
                add_edge(src, tgt, section, lbl, tok)
            elif tok.value in _CONSTRAINT_KINDS:
                if section == "right":
                    raise GmlError("constraints are not allowed in the right section",
                                   tok.line, tok.column)
                constraints.append(_parse_constraint(tok.value, ts))
            else:
                raise GmlError(f"unexpected declaration {tok.value!r}", tok.line, tok.column)
    if not ts.at_end():
        raise ts.error("trailing content after rule block")

    nodes = [RuleNode(nid, node_sides[nid].get("left"), node_sides[nid].get("right"))
             for nid in node_order]
    edges = [RuleEdge(src, tgt, edge_sides[(src, tgt)].get("left"),
                      edge_sides[(src, tgt)].get("right"))
             for src, tgt in edge_order]
    if groups is not None:
        raw_nodes, raw_edges = groups.expand_rule_elements(
            [(n.id, n.left, n.right) for n in nodes],
            [(e.source, e.target, e.left, e.right) for e in edges])
        nodes = [RuleNode(*item) for item in raw_nodes]
        edges = [RuleEdge(*item) for item in raw_edges]
    try:
        return RuleGraph(rule_id, nodes, edges, constraints, wildcard)
    except RuleError as exc:
        raise GmlError(str(exc), *_end_of(ts)) from exc


def _end_of(ts: TokenStream) -> tuple[int, int]:
    return ts._end  # position info for errors detected after parsing


# -- application -----------------------------------------------------------

@dataclass
class RewriteResult:
    """Outcome of one rule application.

    ``node_origin`` gives, for each node of the result graph, either the
    host node it came from or a fresh id above the host maximum for nodes
    the rule created (fresh ids are assigned in rule-declaration order).
    """
    graph: LabeledGraph
    rule: RuleGraph
    host: LabeledGraph
    match: tuple[int, ...]
    node_origin: tuple[int, ...]

    def fresh_nodes(self) -> list[int]:
        """Result node ids that were created by the rule."""
        return [v for v, o in enumerate(self.node_origin) if o >= self.host.node_count]


def apply(rule: RuleGraph, host: LabeledGraph, match: Sequence[int]) -> RewriteResult:
    """Apply a rule at a given match; the three DPO steps in order.

    Deletion: images of left-only nodes go away together with every host
    edge touching them, and images of left-only edges go away.  Relabeling:
    nodes and edges present on both sides with differing labels take the
    right label.  Addition: right-only nodes enter with fresh ids, then
    right-only edges; adding an edge that is already present raises
    :class:`ApplicationError`.
    """
    pattern, ext_to_pid = rule.left_pattern()
    if len(match) != pattern.graph.node_count:
        raise ApplicationError("match length does not fit the rule's left pattern")
    img = {ext: match[pid] for ext, pid in ext_to_pid.items()}

    deleted: set[int] = set()
    node_relabel: dict[int, str] = {}
    for nd in rule.nodes:
        if nd.left is not None and nd.right is None:
            deleted.add(img[nd.id])
        elif nd.left is not None and nd.right != nd.left:
            node_relabel[img[nd.id]] = nd.right

    killed_edges: set[tuple[int, int]] = set()
    edge_relabel: dict[tuple[int, int], str] = {}
    for ed in rule.edges:
        if ed.left is None:
            continue
        key = _normalize(img[ed.source], img[ed.target])
        if ed.right is None:
            killed_edges.add(key)
        elif ed.right != ed.left:
            edge_relabel[key] = ed.right

    survivors = [v for v in host.nodes() if v not in deleted]
    new_nodes = [nd for nd in rule.nodes if nd.left is None]
    remap = {old: i for i, old in enumerate(survivors)}
    labels = [node_relabel.get(v, host.label(v)) for v in survivors]
    origin = list(survivors)
    for j, nd in enumerate(new_nodes):
        img[nd.id] = host.node_count + j  # fresh id above the host maximum
        remap[host.node_count + j] = len(labels)
        labels.append(nd.right)
        origin.append(host.node_count + j)

    edges: dict[tuple[int, int], str] = {}
    for u, v, lbl in host.edges():
        if u in deleted or v in deleted:
            continue
        key = (u, v)
        if key in killed_edges:
            continue
        edges[key] = edge_relabel.get(key, lbl)
    for ed in rule.edges:
        if ed.left is not None or ed.right is None:
            continue
        key = _normalize(img[ed.source], img[ed.target])
        if key in edges:
            raise ApplicationError(
                f"edge already exists between host nodes {key[0]} and {key[1]}")
        edges[key] = ed.right

    dense_edges = [(remap[u], remap[v], lbl) for (u, v), lbl in edges.items()]
    graph = LabeledGraph.from_parts(labels, dense_edges)
    return RewriteResult(graph, rule, host, tuple(match), tuple(origin))


Reporter = Callable[[RewriteResult], bool | None]


def apply_all(rule: RuleGraph, host: LabeledGraph, reporter: Reporter | None = None,
              dedup: bool = False) -> list[RewriteResult]:
    """Apply a rule at every match, in deterministic match order.

    With ``dedup``, results whose graphs are isomorphic to an earlier
    result are dropped (first occurrence kept).  A reporter receives each
    surviving result; returning ``False`` stops the enumeration early.
    Matches whose application fails (an edge collision) are skipped with
    a logged diagnostic rather than aborting the enumeration.
    """
    pattern, _ = rule.left_pattern()
    results: list[RewriteResult] = []
    for match in find_monomorphisms(pattern, host):
        try:
            res = apply(rule, host, match)
        except ApplicationError as exc:
            log.warning("rule %s: skipping match %s (%s)",
                        rule.rule_id, match, exc)
            continue
        if dedup and any(are_isomorphic(res.graph, prior.graph) for prior in results):
            continue
        results.append(res)
        if reporter is not None and reporter(res) is False:
            break
    return results


# -- graph space exploration -------------------------------------------------

@dataclass
class ExploreResult:
    visited: dict[str, LabeledGraph]
    path: list[LabeledGraph] | None = None


def explore(starts: Sequence[LabeledGraph], rules: Sequence[RuleGraph],
            strategy: str = "bfs", depth: int = 1,
            key: Callable[[LabeledGraph], str] = None,
            goal: Callable[[LabeledGraph], bool] | None = None) -> ExploreResult:
    """Walk the space of graphs induced by a rule set.

    ``key`` maps each graph to the string under which it is remembered;
    graphs whose key was already seen are not expanded again.  ``depth``
    bounds the number of rewrite steps from a start graph.  With a goal
    predicate the search stops at the first satisfying graph and reports
    the path of graphs leading to it (DFS follows rule/match order, BFS
    finds a shortest such path).
    """
    if key is None:
        raise ValueError("explore requires a key function")
    if strategy not in ("bfs", "dfs"):
        raise ValueError(f"unknown strategy {strategy!r}")

    visited: dict[str, LabeledGraph] = {}
    parent: dict[str, str | None] = {}

    def reconstruct(k: str) -> list[LabeledGraph]:
        chain = []
        cur: str | None = k
        while cur is not None:
            chain.append(visited[cur])
            cur = parent[cur]
        chain.reverse()
        return chain

    if strategy == "bfs":
        frontier: deque[tuple[str, int]] = deque()
        for g in starts:
            k = key(g)
            if k in visited:
                continue
            visited[k] = g
            parent[k] = None
            if goal is not None and goal(g):
                return ExploreResult(visited, reconstruct(k))
            frontier.append((k, 0))
        while frontier:
            k, d = frontier.popleft()
            if d >= depth:
                continue
            g = visited[k]
            for rule in rules:
                for res in apply_all(rule, g):
                    ck = key(res.graph)
                    if ck in visited:
                        continue
                    visited[ck] = res.graph
                    parent[ck] = k
                    if goal is not None and goal(res.graph):
                        return ExploreResult(visited, reconstruct(ck))
                    frontier.append((ck, d + 1))
        return ExploreResult(visited, None)

    # depth-first
    found: list[str] | None = None

    def dfs(k: str, d: int) -> bool:
        g = visited[k]
        if goal is not None and goal(g):
            nonlocal found
            found = reconstruct(k)
            return True
        if d >= depth:
            return False
        for rule in rules:
            for res in apply_all(rule, g):
                ck = key(res.graph)
                if ck in visited:
                    continue
                visited[ck] = res.graph
                parent[ck] = k
                if dfs(ck, d + 1):
                    return True
        return False

    for g in starts:
        k = key(g)
        if k in visited:
            continue
        visited[k] = g
        parent[k] = None
        if dfs(k, 0):
            break
    return ExploreResult(visited, found)
