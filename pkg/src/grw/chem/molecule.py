"""Molecules: labeled graphs with explicit hydrogens and valence checks."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core import LabeledGraph
from .atoms import (AtomLabel, BOND_ORDERS, BOND_SYMBOLS, allowed_valences,
                    implicit_hydrogens, parse_atom_label)


class ChemError(ValueError):
    """Raised for chemically unusable input."""


@dataclass
class Molecule:
    """A connected molecular graph.

    Hydrogens are ordinary graph nodes.  Until :func:`fill_hydrogens` has
    run, ``explicit_h`` records the hydrogen counts requested by bracket
    atoms ("[CH2]" and friends) and ``filled`` is False.
    """
    graph: LabeledGraph
    explicit_h: dict[int, int] = field(default_factory=dict)
    filled: bool = False

    @property
    def atom_count(self) -> int:
        return self.graph.node_count

    def atom(self, v: int) -> AtomLabel:
        lbl = parse_atom_label(self.graph.label(v))
        if lbl is None:
            raise ChemError(f"node {v} label {self.graph.label(v)!r} is not an atom label")
        return lbl


@dataclass(frozen=True)
class Violation:
    """One sanity finding: what is wrong, and on which node (if any)."""
    kind: str
    node: int | None
    message: str


def _bond_split(m: Molecule, v: int) -> tuple[int, int]:
    """(integer order sum of non-aromatic bonds, number of aromatic bonds)."""
    single_sum = 0
    aromatic = 0
    for _, lbl in m.graph.neighbors(v).items():
        if lbl == ":":
            aromatic += 1
        else:
            single_sum += int(BOND_ORDERS.get(lbl, 0))
    return single_sum, aromatic


def fill_hydrogens(m: Molecule) -> Molecule:
    """Add hydrogen nodes until every atom is saturated.

    Bracket atoms receive exactly their declared hydrogen count; other
    atoms are topped up to the smallest allowed valence not below their
    current bond-order sum (aromatic bonds count 1.5 with the standard
    round-down convention).  Hydrogen atoms themselves are never given
    implicit neighbors.  The operation is idempotent.
    """
    labels = list(m.graph.node_labels)
    edges = [(u, v, lbl) for u, v, lbl in m.graph.edges()]
    added = 0
    for v in m.graph.nodes():
        atom = parse_atom_label(m.graph.label(v))
        if atom is None:
            raise ChemError(f"node {v} label {m.graph.label(v)!r} is not an atom label")
        current_h = sum(1 for u in m.graph.neighbors(v)
                        if m.graph.label(u) == "H")
        if v in m.explicit_h:
            missing = m.explicit_h[v] - current_h
        elif atom.element == "H":
            missing = 0
        else:
            single_sum, aromatic = _bond_split(m, v)
            target = implicit_hydrogens(atom.element, atom.charge, single_sum, aromatic)
            missing = 0 if target is None else target
        for _ in range(max(0, missing)):
            labels.append("H")
            edges.append((v, len(labels) - 1, "-"))
            added += 1
    graph = LabeledGraph.from_parts(labels, edges) if added else m.graph
    return Molecule(graph, {}, filled=True)


def sanity_check(m: Molecule) -> list[Violation]:
    """Validate labels, connectivity and valence; returns found problems.

    Aromatic atoms are accepted with either of the two bond-order readings
    an alternating ring allows (with or without one ring double bond), so
    both pyrrole-type and pyridine-type centers pass.
    """
    out: list[Violation] = []
    g = m.graph
    if g.node_count == 0:
        return [Violation("empty", None, "molecule has no atoms")]

    if len(connected := _reachable(g)) != g.node_count:
        out.append(Violation("disconnected", None,
                             f"molecule is not connected ({len(connected)} of "
                             f"{g.node_count} atoms reachable from atom 0)"))

    for u, v, lbl in g.edges():
        if lbl not in BOND_SYMBOLS:
            out.append(Violation("bond-label", u,
                                 f"edge ({u}, {v}) label {lbl!r} is not a bond symbol"))

    for v in g.nodes():
        atom = parse_atom_label(g.label(v))
        if atom is None:
            out.append(Violation("atom-label", v,
                                 f"label {g.label(v)!r} is not an atom label"))
            continue
        single_sum, aromatic = _bond_split(m, v)
        if atom.aromatic and aromatic < 2:
            out.append(Violation("aromatic", v,
                                 f"aromatic atom {v} has {aromatic} aromatic bonds"))
        if not atom.aromatic and aromatic > 0:
            out.append(Violation("aromatic", v,
                                 f"non-aromatic atom {v} has an aromatic bond"))
        if aromatic == 1:
            out.append(Violation("aromatic", v,
                                 f"atom {v} has a dangling aromatic bond"))
            continue
        valences = allowed_valences(atom.element, atom.charge)
        if not valences:
            out.append(Violation("valence", v,
                                 f"no valence rule for {g.label(v)!r}"))
            continue
        if aromatic:
            ok = (single_sum + aromatic) in valences or \
                 (single_sum + aromatic + 1) in valences
        else:
            ok = single_sum in valences
        if not ok:
            out.append(Violation(
                "valence", v,
                f"atom {v} ({g.label(v)}) has bond-order sum "
                f"{single_sum + 1.5 * aromatic:g}, allowed valences {valences}"))
    return out


def _reachable(g: LabeledGraph) -> set[int]:
    if g.node_count == 0:
        return set()
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in g.neighbors(v):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return seen


def molecular_formula(m: Molecule) -> dict[str, int]:
    """Element -> count, for conservation checks."""
    counts: dict[str, int] = {}
    for v in m.graph.nodes():
        atom = parse_atom_label(m.graph.label(v))
        el = atom.element if atom is not None else m.graph.label(v)
        counts[el] = counts.get(el, 0) + 1
    return counts
