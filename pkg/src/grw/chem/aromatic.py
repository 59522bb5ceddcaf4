"""Aromaticity perception and kekulization.

Perception runs in two stages: first any aromatic (":") bonds are
kekulized into an explicit alternating single/double assignment, then
every ring of size ≤ 7 is scored with a π-electron table and rings
totalling 4n+2 electrons are flagged aromatic (lowercase atoms, ":"
bonds).  Rings that fail the count keep their kekulized labels, which is
exactly the "de-aromatize" behavior needed after a rewrite breaks a ring.
"""

from __future__ import annotations

from ..core import LabeledGraph
from .atoms import AtomLabel, parse_atom_label, allowed_valences
from .molecule import ChemError, Molecule, _bond_split
from .rings import all_cycles


class KekulizationError(ChemError):
    pass


def kekulize(m: Molecule) -> Molecule:
    """Rewrite aromatic bonds as alternating single/double bonds.

    Every atom with aromatic bonds is classified by how many additional
    bond orders it needs to reach its smallest feasible valence: one
    (participates in a double bond) or zero (contributes a lone pair).
    A perfect matching of the one-needing atoms along aromatic bonds is
    then searched; failure raises :class:`KekulizationError`.
    """
    g = m.graph
    arom_edges = [(u, v) for u, v, lbl in g.edges() if lbl == ":"]
    if not arom_edges:
        return m

    needs: dict[int, int] = {}
    arom_atoms = sorted({v for e in arom_edges for v in e})
    for v in arom_atoms:
        atom = parse_atom_label(g.label(v))
        if atom is None:
            raise KekulizationError(f"node {v} label {g.label(v)!r} is not an atom")
        single, arom = _bond_split(m, v)
        base = single + arom
        valences = [val for val in allowed_valences(atom.element, atom.charge)
                    if val >= base]
        if not valences:
            raise KekulizationError(
                f"node {v} ({g.label(v)}) exceeds its valence before kekulization")
        need = min(valences) - base
        if need > 1:
            # A larger valence may also be reachable with one double bond.
            need = 1 if (base + 1) in valences else need
        if need > 1:
            raise KekulizationError(
                f"node {v} ({g.label(v)}) needs {need} extra bonds; cannot kekulize")
        needs[v] = need

    arom_adj: dict[int, list[int]] = {v: [] for v in arom_atoms}
    for u, v in arom_edges:
        arom_adj[u].append(v)
        arom_adj[v].append(u)

    pending = sorted(v for v in arom_atoms if needs[v] == 1)
    matched: dict[int, int] = {}

    def search(i: int) -> bool:
        while i < len(pending) and pending[i] in matched:
            i += 1
        if i == len(pending):
            return True
        v = pending[i]
        for u in sorted(arom_adj[v]):
            if needs[u] == 1 and u not in matched:
                matched[v] = u
                matched[u] = v
                if search(i + 1):
                    return True
                del matched[v], matched[u]
        return False

    if not search(0):
        raise KekulizationError("no alternating single/double assignment exists")

    relabel_edges = {}
    for u, v in arom_edges:
        relabel_edges[(u, v)] = "=" if matched.get(u) == v else "-"
    labels = []
    for v in g.nodes():
        atom = parse_atom_label(g.label(v))
        if atom is not None and atom.aromatic:
            labels.append(AtomLabel(atom.element, atom.charge, atom.cls, False).render())
        else:
            labels.append(g.label(v))
    edges = [(u, v, relabel_edges.get((u, v), lbl)) for u, v, lbl in g.edges()]
    return Molecule(LabeledGraph.from_parts(labels, edges), dict(m.explicit_h),
                    filled=m.filled)


def _pi_contribution(m: Molecule, v: int) -> int | None:
    """π electrons the atom donates to a candidate aromatic ring, or
    ``None`` if it cannot participate."""
    g = m.graph
    atom = parse_atom_label(g.label(v))
    if atom is None:
        return None
    doubles_to = [g.label(u) for u in g.neighbors(v)
                  if g.edge_label(v, u) == "="]
    if any(g.edge_label(v, u) == "#" for u in g.neighbors(v)):
        return None
    has_double = bool(doubles_to)
    el, q = atom.element, atom.charge
    if el == "C" and q == 0:
        if not has_double:
            return None
        if any(parse_atom_label(lbl) and parse_atom_label(lbl).element == "O"
               for lbl in doubles_to):
            return 0
        return 1
    if el in ("N", "P"):
        if q == 0:
            return 1 if has_double else 2
        if q == 1:
            return 1 if has_double else None
        return None
    if el in ("O", "S") and q == 0:
        return None if has_double else 2
    return None


def perceive_aromaticity(m: Molecule) -> Molecule:
    """Flag aromatic rings (4n+2 π electrons, size ≤ 7) with lowercase
    atoms and ":" bonds; de-aromatize rings that no longer qualify."""
    g = m.graph
    has_arom = any(lbl == ":" for _, _, lbl in g.edges())
    if not has_arom and g.edge_count == g.node_count - 1:
        return m  # connected acyclic molecule: nothing to perceive

    kek = kekulize(m) if has_arom else m
    rings = all_cycles(kek.graph, max_size=7)
    if not rings:
        return kek

    contrib: dict[int, int | None] = {}
    arom_atoms: set[int] = set()
    arom_bonds: set[tuple[int, int]] = set()
    for ring in rings:
        total = 0
        ok = True
        for v in ring:
            if v not in contrib:
                contrib[v] = _pi_contribution(kek, v)
            c = contrib[v]
            if c is None:
                ok = False
                break
            total += c
        if ok and total % 4 == 2:
            arom_atoms.update(ring)
            k = len(ring)
            for i in range(k):
                a, b = ring[i], ring[(i + 1) % k]
                arom_bonds.add((a, b) if a < b else (b, a))

    if not arom_atoms:
        return kek

    kg = kek.graph
    labels = []
    for v in kg.nodes():
        atom = parse_atom_label(kg.label(v))
        if v in arom_atoms and atom is not None:
            labels.append(AtomLabel(atom.element, atom.charge, atom.cls, True).render())
        else:
            labels.append(kg.label(v))
    edges = [(u, v, ":" if (u, v) in arom_bonds else lbl)
             for u, v, lbl in kg.edges()]
    return Molecule(LabeledGraph.from_parts(labels, edges), dict(kek.explicit_h),
                    filled=kek.filled)
