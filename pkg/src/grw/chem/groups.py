"""Molecular groups: named fragments usable as pseudo-atoms.

A group is a connected molecule fragment with one designated *proxy*
atom.  Wherever a SMILES string or a rule mentions the placeholder
``[{NAME}]``, the whole fragment is spliced in and the proxy atom takes
over the placeholder's bonds.  Registries load from a GML-like file of
``group [ groupID "..." proxy N graph [ ... ] ]`` blocks.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import (GmlError, LabeledGraph, TokenStream, _graph_from_declarations,
                    _parse_graph_body)
from .atoms import BOND_SYMBOLS, parse_atom_label
from .molecule import ChemError


@dataclass(frozen=True)
class Group:
    name: str
    graph: LabeledGraph  # node ids 0..n-1; labels are atom labels
    proxy: int           # node id substituted for the placeholder
    explicit_h: dict[int, int] | None = None

    def __post_init__(self):
        if not (0 <= self.proxy < self.graph.node_count):
            raise ChemError(f"group {self.name!r}: proxy node not in fragment")


def _placeholder_name(label: str) -> str | None:
    if label.startswith("[{") and label.endswith("}]"):
        return label[2:-2]
    return None


class GroupRegistry:
    """Lookup table of molecular groups, by name."""

    def __init__(self, groups: list[Group] = ()):  # type: ignore[assignment]
        self._groups: dict[str, Group] = {}
        for grp in groups:
            self.add(grp)

    def add(self, group: Group) -> None:
        if group.name in self._groups:
            raise ChemError(f"duplicate group {group.name!r}")
        for v in group.graph.nodes():
            lbl = group.graph.label(v)
            if parse_atom_label(lbl) is None:
                raise ChemError(
                    f"group {group.name!r}: node {v} label {lbl!r} is not an atom")
        for _, _, lbl in group.graph.edges():
            if lbl not in BOND_SYMBOLS:
                raise ChemError(f"group {group.name!r}: bond label {lbl!r} unknown")
        self._groups[group.name] = group

    def __contains__(self, name: str) -> bool:
        return name in self._groups

    def __len__(self) -> int:
        return len(self._groups)

    def get(self, name: str) -> Group:
        if name not in self._groups:
            raise ChemError(f"unknown group {name!r}")
        return self._groups[name]

    def names(self) -> list[str]:
        return sorted(self._groups)

    # -- expansion hooks -----------------------------------------------

    def expand_molecule_elements(self, labels, edges, explicit_h, placeholders):
        """Replace placeholder nodes in a raw (labels, edges) molecule
        description; used by the SMILES parser.

        ``placeholders`` maps node index → group name.  The placeholder
        node keeps its index and becomes the proxy atom; the rest of the
        fragment is appended with fresh indices.
        """
        labels = list(labels)
        edges = list(edges)
        explicit_h = dict(explicit_h)
        for idx in sorted(placeholders):
            group = self.get(placeholders[idx])
            gg = group.graph
            mapping = {group.proxy: idx}
            for v in gg.nodes():
                if v != group.proxy:
                    mapping[v] = len(labels)
                    labels.append(gg.label(v))
            labels[idx] = gg.label(group.proxy)
            explicit_h.pop(idx, None)
            for u, v, lbl in gg.edges():
                edges.append((mapping[u], mapping[v], lbl))
            if group.explicit_h:
                for v, h in group.explicit_h.items():
                    explicit_h[mapping[v]] = h
        return labels, edges, explicit_h

    def expand_rule_elements(self, nodes, edges):
        """Replace placeholder nodes in a rule declaration; used by the
        rule parser.

        ``nodes`` is a list of (id, left, right) label triples and
        ``edges`` of (source, target, left, right).  Placeholders must be
        context nodes (same label both sides); the fragment is spliced in
        as context with fresh ids.
        """
        nodes = list(nodes)
        edges = list(edges)
        next_id = max((nid for nid, _, _ in nodes), default=0) + 1
        for i, (nid, left, right) in enumerate(list(nodes)):
            name = _placeholder_name(left or "") or _placeholder_name(right or "")
            if name is None:
                continue
            if left != right:
                raise ChemError(
                    f"group placeholder [{{{name}}}] on node {nid} must be a "
                    "context node (identical labels on both sides)")
            group = self.get(name)
            gg = group.graph
            mapping = {group.proxy: nid}
            proxy_label = gg.label(group.proxy)
            nodes[i] = (nid, proxy_label, proxy_label)
            for v in gg.nodes():
                if v != group.proxy:
                    mapping[v] = next_id
                    nodes.append((next_id, gg.label(v), gg.label(v)))
                    next_id += 1
            for u, v, lbl in gg.edges():
                edges.append((mapping[u], mapping[v], lbl, lbl))
        return nodes, edges


def parse_gml_groups(text: str) -> GroupRegistry:
    """Parse a registry file: a sequence of ``group [ ... ]`` blocks."""
    ts = TokenStream.from_text(text)
    registry = GroupRegistry()
    while not ts.at_end():
        ts.expect_word("group")
        ts.expect("[")
        name = None
        proxy = None
        graph = None
        while ts.peek() is not None and ts.peek().kind == "word":
            key = ts.next().value
            if key == "groupID":
                name = ts.expect("str", "group name").value
            elif key == "proxy":
                proxy = int(ts.expect("int", "proxy node id").value)
            elif key == "graph":
                nodes, edges = _parse_graph_body(ts)
                graph = _graph_from_declarations(nodes, edges)
            else:
                raise ts.error(f"unexpected key {key!r} in group")
        ts.expect("]")
        if name is None or proxy is None or graph is None:
            raise ts.error("group needs groupID, proxy and graph")
        if proxy not in graph.ext_ids:
            raise GmlError(f"proxy {proxy} is not a node of group {name!r}", 1, 1)
        try:
            registry.add(Group(name, graph, graph.ext_ids.index(proxy)))
        except ChemError as exc:
            raise GmlError(str(exc), 1, 1) from exc
    if len(registry) == 0:
        raise GmlError("no group definitions found", 1, 1)
    return registry
