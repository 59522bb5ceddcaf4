"""Constraint-aware subgraph monomorphism for labeled graphs.

A match of a pattern ``P`` in a host ``G`` is an injective map on nodes
that preserves node labels and maps every pattern edge onto a host edge
with the same label (host may have extra edges; the embedding is not
induced).  A pattern may declare one wildcard label that matches any node
or edge label, and may carry additional application conditions that
restrict the host neighborhood of matched nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import LabeledGraph

_CMP_OPS = ("=", "!", "<", ">")
_EQ_OPS = ("=", "!")


def _check_count(op: str, have: int, want: int) -> bool:
    if op == "=":
        return have == want
    if op == "!":
        return have != want
    if op == "<":
        return have < want
    return have > want


@dataclass(frozen=True)
class NodeLabel:
    """Restrict the host label of a matched node to (or away from) a set."""
    node: int
    op: str
    labels: frozenset[str]


@dataclass(frozen=True)
class Adjacency:
    """Count host neighbors of a matched node, filtered by labels.

    A neighbor is counted when the connecting edge's label is in
    ``edge_labels`` and the neighbor's label is in ``node_labels``; an empty
    set (or a set containing the pattern's wildcard) accepts any label.
    ``<`` and ``>`` are strict.
    """
    node: int
    op: str
    count: int
    node_labels: frozenset[str] = frozenset()
    edge_labels: frozenset[str] = frozenset()


@dataclass(frozen=True)
class NoEdge:
    """Forbid a host edge between the images of two pattern nodes."""
    source: int
    target: int


@dataclass(frozen=True)
class EdgeLabel:
    """Restrict the host label of the edge matched by a pattern edge."""
    source: int
    target: int
    op: str
    labels: frozenset[str]


@dataclass(frozen=True)
class NodeDegree:
    """Compare the full host degree of a matched node against a count."""
    node: int
    op: str
    count: int


MatchConstraint = NodeLabel | Adjacency | NoEdge | EdgeLabel | NodeDegree


def _constraint_nodes(c: MatchConstraint) -> tuple[int, ...]:
    if isinstance(c, (NodeLabel, Adjacency, NodeDegree)):
        return (c.node,)
    return (c.source, c.target)


@dataclass
class Pattern:
    """A pattern graph plus optional wildcard label and constraints."""

    graph: LabeledGraph
    constraints: Sequence[MatchConstraint] = ()
    wildcard: str | None = None

    def __post_init__(self) -> None:
        n = self.graph.node_count
        for c in self.constraints:
            for v in _constraint_nodes(c):
                if not 0 <= v < n:
                    raise ValueError(f"constraint references unknown pattern node {v}")
            if isinstance(c, (NodeLabel, EdgeLabel)) and c.op not in _EQ_OPS:
                raise ValueError(f"operator {c.op!r} is not valid for label constraints")
            if isinstance(c, (Adjacency, NodeDegree)) and c.op not in _CMP_OPS:
                raise ValueError(f"unknown constraint operator {c.op!r}")
            if isinstance(c, NoEdge) and c.source == c.target:
                raise ValueError("NoEdge endpoints must be distinct")
            if isinstance(c, EdgeLabel) and not self.graph.has_edge(c.source, c.target):
                raise ValueError("EdgeLabel constraint requires the pattern edge to exist")


def _satisfies(c: MatchConstraint, host: LabeledGraph, image: Sequence[int],
               wildcard: str | None) -> bool:
    """Evaluate one constraint; every referenced pattern node must be mapped."""
    if isinstance(c, NodeLabel):
        ok = host.label(image[c.node]) in c.labels or (wildcard is not None and wildcard in c.labels)
        return ok if c.op == "=" else not ok
    if isinstance(c, Adjacency):
        any_node = not c.node_labels or (wildcard is not None and wildcard in c.node_labels)
        any_edge = not c.edge_labels or (wildcard is not None and wildcard in c.edge_labels)
        have = 0
        for u, elbl in host.neighbors(image[c.node]).items():
            if not any_edge and elbl not in c.edge_labels:
                continue
            if not any_node and host.label(u) not in c.node_labels:
                continue
            have += 1
        return _check_count(c.op, have, c.count)
    if isinstance(c, NoEdge):
        return not host.has_edge(image[c.source], image[c.target])
    if isinstance(c, EdgeLabel):
        lbl = host.edge_label(image[c.source], image[c.target])
        if lbl is None:
            return False
        ok = lbl in c.labels or (wildcard is not None and wildcard in c.labels)
        return ok if c.op == "=" else not ok
    if isinstance(c, NodeDegree):
        return _check_count(c.op, host.degree(image[c.node]), c.count)
    raise TypeError(f"unknown constraint {c!r}")


def check_constraints(pattern: Pattern, host: LabeledGraph,
                      image: Sequence[int]) -> bool:
    """Evaluate all constraints of a completely mapped pattern."""
    return all(_satisfies(c, host, image, pattern.wildcard) for c in pattern.constraints)


def _search_order(g: LabeledGraph) -> list[int]:
    """Static assignment order: prefer nodes attached to already-ordered ones."""
    n = g.node_count
    ordered: list[int] = []
    placed = [False] * n
    attached = [0] * n
    for _ in range(n):
        best = -1
        best_key = None
        for v in range(n):
            if placed[v]:
                continue
            key = (-attached[v], -g.degree(v), v)
            if best_key is None or key < best_key:
                best_key = key
                best = v
        ordered.append(best)
        placed[best] = True
        for u in g.neighbors(best):
            attached[u] += 1
    return ordered


def find_monomorphisms(pattern: Pattern | LabeledGraph, host: LabeledGraph,
                       limit: int | None = None) -> list[tuple[int, ...]]:
    """All constraint-satisfying monomorphisms of ``pattern`` into ``host``.

    Each match is a tuple ``m`` with ``m[i]`` the host node for pattern
    node ``i``.  The list is sorted lexicographically by that tuple, and
    truncated at ``limit`` if given.  Two runs on identical inputs return
    identical lists.
    """
    if isinstance(pattern, LabeledGraph):
        pattern = Pattern(pattern)
    pg = pattern.graph
    wc = pattern.wildcard
    k = pg.node_count
    if k == 0:
        return [()][: limit if limit is not None else None]
    if k > host.node_count:
        return []

    order = _search_order(pg)
    step_of = {p: t for t, p in enumerate(order)}
    # For each step: edges back to already-assigned pattern nodes.
    back_edges: list[list[tuple[int, str]]] = []
    anchor: list[tuple[int, str] | None] = []
    for t, p in enumerate(order):
        backs = [(q, lbl) for q, lbl in pg.neighbors(p).items() if step_of[q] < t]
        backs.sort(key=lambda e: step_of[e[0]])
        back_edges.append(backs)
        anchor.append(backs[0] if backs else None)
    # Constraints become checkable at the step where their last node is mapped.
    checks_at: list[list[MatchConstraint]] = [[] for _ in range(k)]
    for c in pattern.constraints:
        last = max(step_of[v] for v in _constraint_nodes(c))
        checks_at[last].append(c)

    image = [-1] * k
    used = [False] * host.node_count
    results: list[tuple[int, ...]] = []

    def candidates(t: int) -> Iterable[int]:
        back = anchor[t]
        if back is None:
            return host.nodes()
        q, lbl = back
        hq = image[q]
        if wc is not None and lbl == wc:
            return host.neighbors(hq).keys()
        return (u for u, hl in host.neighbors(hq).items() if hl == lbl)

    def extend(t: int) -> None:
        if t == k:
            results.append(tuple(image))
            return
        p = order[t]
        plbl = pg.label(p)
        pdeg = pg.degree(p)
        wild = wc is not None and plbl == wc
        for h in sorted(candidates(t)):
            if used[h]:
                continue
            if not wild and host.label(h) != plbl:
                continue
            if host.degree(h) < pdeg:
                continue
            ok = True
            for q, lbl in back_edges[t][1:] if anchor[t] is not None else []:
                hl = host.edge_label(image[q], h)
                if hl is None or (hl != lbl and not (wc is not None and lbl == wc)):
                    ok = False
                    break
            if not ok:
                continue
            image[p] = h
            used[h] = True
            if all(_satisfies(c, host, image, wc) for c in checks_at[t]):
                extend(t + 1)
            used[h] = False
            image[p] = -1

    extend(0)
    results.sort()
    if limit is not None:
        results = results[:limit]
    return results


def are_isomorphic(g1: LabeledGraph, g2: LabeledGraph) -> bool:
    """Structural isomorphism of two labeled graphs."""
    if g1.node_count != g2.node_count or g1.edge_count != g2.edge_count:
        return False
    if sorted(g1.node_labels) != sorted(g2.node_labels):
        return False
    prof1 = sorted((g1.label(v), g1.degree(v), tuple(sorted(g1.neighbors(v).values())))
                   for v in g1.nodes())
    prof2 = sorted((g2.label(v), g2.degree(v), tuple(sorted(g2.neighbors(v).values())))
                   for v in g2.nodes())
    if prof1 != prof2:
        return False
    # A label-preserving monomorphism between graphs of equal size is a bijection,
    # and with equal edge counts it is edge-surjective, hence an isomorphism.
    return bool(find_monomorphisms(Pattern(g1), g2, limit=1))


# -- canonical keys ---------------------------------------------------------

def _refine_colors(g: LabeledGraph, colors: list[int]) -> list[int]:
    while True:
        sigs = []
        for v in g.nodes():
            nbr = tuple(sorted((lbl, colors[u]) for u, lbl in g.neighbors(v).items()))
            sigs.append((colors[v], nbr))
        ranking = {sig: i for i, sig in enumerate(sorted(set(sigs)))}
        new = [ranking[s] for s in sigs]
        if new == colors:
            return colors
        colors = new


def _serialize_by_rank(g: LabeledGraph, rank: dict[int, int]) -> str:
    by_rank = sorted(g.nodes(), key=lambda v: rank[v])
    labels = ",".join(g.label(v) for v in by_rank)
    edges = sorted((min(rank[u], rank[v]), max(rank[u], rank[v]), lbl)
                   for u, v, lbl in g.edges())
    etxt = ";".join(f"{a}-{b}:{lbl}" for a, b, lbl in edges)
    return f"{g.node_count}|{labels}|{etxt}"


def canonical_key(g: LabeledGraph) -> str:
    """A string identical for isomorphic graphs and different otherwise.

    Iterative neighborhood refinement, then exhaustive individualization of
    residual symmetry classes, keeping the lexicographically smallest
    serialization.  Intended for the small graphs handled by exploration
    and deduplication; cost grows with graph symmetry.
    """
    if g.node_count == 0:
        return "0||"
    best: list[str | None] = [None]

    init = [0] * g.node_count
    ranking = {lbl: i for i, lbl in enumerate(sorted(set(g.node_labels)))}
    init = [ranking[g.label(v)] for v in g.nodes()]

    def descend(colors: list[int]) -> None:
        colors = _refine_colors(g, colors)
        groups: dict[int, list[int]] = {}
        for v in g.nodes():
            groups.setdefault(colors[v], []).append(v)
        target = None
        for c in sorted(groups):
            if len(groups[c]) > 1:
                target = c
                break
        if target is None:
            rank = {v: colors[v] for v in g.nodes()}
            s = _serialize_by_rank(g, rank)
            if best[0] is None or s < best[0]:
                best[0] = s
            return
        for v in groups[target]:
            branched = [c + 1 if c >= target else c for c in colors]
            branched[v] = target
            descend(branched)

    descend(init)
    assert best[0] is not None
    return best[0]
