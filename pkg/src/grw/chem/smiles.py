"""SMILES reading and canonical writing.

The dialect covers the needs of rule-based chemistry here: organic-subset
atoms, aromatic lowercase atoms, bracket atoms with hydrogen count, charge
and class, branches, ring-closure digits (including ``%NN``), explicit
bond symbols ``- = # :``, dot-separated components, and molecular-group
placeholders ``[{NAME}]`` expanded through a registry.  Stereochemistry
and isotopes are out of scope.

Canonical output is produced by iterative neighborhood refinement plus
exhaustive tie-breaking, so any node ordering of the same molecule yields
byte-identical SMILES.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..core import LabeledGraph
from .atoms import (AtomLabel, ORGANIC_SUBSET, implicit_hydrogens,
                    parse_atom_label, ELEMENTS, AROMATIC_ELEMENTS)
from .molecule import ChemError, Molecule


class SmilesError(ChemError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


_BRACKET_RE = re.compile(
    r"^([A-Z][a-z]?|[bcnops])(H(\d*))?([+-]\d*)?(?::(\d+))?$")
_TWO_LETTER = ("Cl", "Br")
_AROMATIC_ORGANIC = "bcnops"
_BOND_CHARS = "-=#:"


@dataclass
class _Atom:
    label: str
    aromatic: bool
    explicit_h: int | None  # None: infer; int: bracket-declared
    position: int
    group: str | None = None  # set for [{NAME}] placeholders


def _resolve_bond(a: _Atom, b: _Atom, sym: str | None) -> str:
    if sym is not None:
        return sym
    return ":" if (a.aromatic and b.aromatic) else "-"


def parse_smiles(text: str, groups=None) -> list[Molecule]:
    """Parse a SMILES string into molecules, one per dot component.

    Hydrogens are *not* filled here; bracket hydrogen counts are recorded
    on the returned molecules for :func:`fill_hydrogens` to honor.
    """
    atoms: list[_Atom] = []
    bonds: dict[tuple[int, int], str] = {}
    stack: list[int | None] = []
    prev: int | None = None
    pending: str | None = None
    ring: dict[int, tuple[int, str | None, int]] = {}

    def add_bond(a: int, b: int, sym: str | None, pos: int) -> None:
        if a == b:
            raise SmilesError("ring bond closes on its own atom", pos)
        key = (a, b) if a < b else (b, a)
        if key in bonds:
            raise SmilesError("duplicate bond between two atoms", pos)
        bonds[key] = _resolve_bond(atoms[a], atoms[b], sym)

    def add_atom(atom: _Atom) -> None:
        nonlocal prev, pending
        atoms.append(atom)
        idx = len(atoms) - 1
        if prev is not None:
            add_bond(prev, idx, pending, atom.position)
        elif pending is not None:
            raise SmilesError("bond symbol with no preceding atom", atom.position)
        prev = idx
        pending = None

    def ring_bond(num: int, pos: int) -> None:
        nonlocal pending
        if prev is None:
            raise SmilesError("ring-closure digit with no preceding atom", pos)
        if num in ring:
            a, sym_open, _ = ring.pop(num)
            sym = pending
            if sym_open is not None and sym is not None and sym_open != sym:
                raise SmilesError(f"ring bond {num} has conflicting bond symbols", pos)
            add_bond(a, prev, sym_open if sym_open is not None else sym, pos)
        else:
            ring[num] = (prev, pending, pos)
        pending = None

    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in _BOND_CHARS:
            if pending is not None:
                raise SmilesError("two bond symbols in a row", i)
            pending = ch
            i += 1
        elif ch == "(":
            if prev is None:
                raise SmilesError("branch opens with no preceding atom", i)
            stack.append(prev)
            i += 1
        elif ch == ")":
            if not stack:
                raise SmilesError("unbalanced ')'", i)
            if pending is not None:
                raise SmilesError("dangling bond symbol before ')'", i)
            prev = stack.pop()
            i += 1
        elif ch == ".":
            if stack:
                raise SmilesError("'.' inside a branch", i)
            if pending is not None:
                raise SmilesError("dangling bond symbol before '.'", i)
            prev = None
            i += 1
        elif ch.isdigit():
            ring_bond(int(ch), i)
            i += 1
        elif ch == "%":
            if i + 2 >= n + 1 or not text[i + 1:i + 3].isdigit():
                raise SmilesError("'%' must be followed by two digits", i)
            ring_bond(int(text[i + 1:i + 3]), i)
            i += 3
        elif ch == "[":
            j = text.find("]", i)
            if j < 0:
                raise SmilesError("unterminated bracket atom", i)
            inner = text[i + 1:j]
            if inner.startswith("{") and inner.endswith("}"):
                name = inner[1:-1]
                if not re.fullmatch(r"[A-Za-z0-9_-]+", name or ""):
                    raise SmilesError(f"invalid group name {name!r}", i)
                add_atom(_Atom(label=f"[{{{name}}}]", aromatic=False,
                               explicit_h=0, position=i, group=name))
                i = j + 1
                continue
            m = _BRACKET_RE.match(inner)
            if not m:
                raise SmilesError(f"malformed bracket atom [{inner}]", i)
            sym, hpart, hcount, qpart, cls = m.groups()
            aromatic = sym[0].islower()
            element = sym.capitalize() if aromatic else sym
            if element not in ELEMENTS:
                raise SmilesError(f"unknown element {sym!r}", i)
            if aromatic and element not in AROMATIC_ELEMENTS:
                raise SmilesError(f"element {sym!r} cannot be aromatic", i)
            h = 0 if hpart is None else (1 if hcount == "" else int(hcount))
            if qpart is None:
                charge = 0
            elif qpart in ("+", "-"):
                charge = 1 if qpart == "+" else -1
            else:
                charge = int(qpart[1:]) * (1 if qpart[0] == "+" else -1)
            label = AtomLabel(element, charge, int(cls) if cls else None,
                              aromatic).render()
            add_atom(_Atom(label, aromatic, h, i))
            i = j + 1
        elif ch.isalpha() or ch == "*":
            sym = None
            if text[i:i + 2] in _TWO_LETTER:
                sym = text[i:i + 2]
            elif ch in "BCNOPSFI":
                sym = ch
            elif ch in _AROMATIC_ORGANIC:
                sym = ch
            if sym is None:
                raise SmilesError(f"unexpected atom symbol {ch!r}", i)
            aromatic = sym.islower()
            element = sym.capitalize() if aromatic else sym
            add_atom(_Atom(AtomLabel(element, aromatic=aromatic).render(),
                           aromatic, None, i))
            i += len(sym)
        else:
            raise SmilesError(f"unexpected character {ch!r}", i)

    if stack:
        raise SmilesError("unbalanced '('", len(text))
    if pending is not None:
        raise SmilesError("dangling bond symbol at end of input", len(text))
    if ring:
        num, (_, _, pos) = sorted(ring.items())[0]
        raise SmilesError(f"unclosed ring bond {num}", pos)
    if not atoms:
        raise SmilesError("empty SMILES", 0)

    labels = [a.label for a in atoms]
    explicit = {i: a.explicit_h for i, a in enumerate(atoms) if a.explicit_h is not None}
    edge_list = [(u, v, lbl) for (u, v), lbl in bonds.items()]

    placeholders = [i for i, a in enumerate(atoms) if a.group is not None]
    if placeholders:
        if groups is None:
            name = atoms[placeholders[0]].group
            raise SmilesError(f"group placeholder [{{{name}}}] without a registry",
                              atoms[placeholders[0]].position)
        labels, edge_list, explicit = groups.expand_molecule_elements(
            labels, edge_list, explicit, {i: atoms[i].group for i in placeholders})

    graph = LabeledGraph.from_parts(labels, edge_list)

    from ..core import connected_components
    out = []
    for comp, members in connected_components(graph):
        eh = {new: explicit[old] for new, old in enumerate(members) if old in explicit}
        out.append(Molecule(comp, eh, filled=False))
    return out


def parse_molecule(text: str, groups=None) -> Molecule:
    """Parse a SMILES expected to hold exactly one component."""
    mols = parse_smiles(text, groups)
    if len(mols) != 1:
        raise SmilesError(f"expected one molecule, found {len(mols)}", 0)
    return mols[0]


# -- canonical form ----------------------------------------------------------

@dataclass
class _Heavy:
    """Hydrogen-suppressed view used for canonicalization."""
    atoms: list[AtomLabel]
    h_count: list[int]
    adj: list[dict[int, str]]
    edges: list[tuple[int, int, str]]


def _heavy_view(m: Molecule) -> _Heavy | None:
    g = m.graph
    heavy = [v for v in g.nodes() if g.label(v) != "H"]
    if not heavy:
        return None
    index = {v: i for i, v in enumerate(heavy)}
    atoms, h_count = [], []
    for v in heavy:
        atom = parse_atom_label(g.label(v))
        if atom is None:
            raise ChemError(f"node {v} label {g.label(v)!r} is not an atom label")
        atoms.append(atom)
        h_count.append(sum(1 for u in g.neighbors(v) if g.label(u) == "H"))
    adj: list[dict[int, str]] = [dict() for _ in heavy]
    edges = []
    for u, v, lbl in g.edges():
        if u in index and v in index:
            a, b = index[u], index[v]
            adj[a][b] = lbl
            adj[b][a] = lbl
            edges.append((a, b, lbl))
    return _Heavy(atoms, h_count, adj, edges)


_BOND_RANK = {"-": 0, "=": 1, "#": 2, ":": 3}


def _initial_colors(h: _Heavy) -> list[int]:
    sigs = []
    for i, atom in enumerate(h.atoms):
        bond_sig = tuple(sorted(h.adj[i].values()))
        sigs.append((atom.element, atom.charge, atom.cls if atom.cls is not None else -1,
                     atom.aromatic, len(h.adj[i]), h.h_count[i], bond_sig))
    ranking = {s: r for r, s in enumerate(sorted(set(sigs)))}
    return [ranking[s] for s in sigs]


def _refine(h: _Heavy, colors: list[int]) -> list[int]:
    n = len(h.atoms)
    while True:
        sigs = []
        for v in range(n):
            nbr = tuple(sorted((_BOND_RANK[lbl], colors[u]) for u, lbl in h.adj[v].items()))
            sigs.append((colors[v], nbr))
        ranking = {s: r for r, s in enumerate(sorted(set(sigs)))}
        new = [ranking[s] for s in sigs]
        if new == colors:
            return colors
        colors = new


def _atom_token(atom: AtomLabel, h: int, heavy_single: int, heavy_aromatic: int) -> str:
    """Shortest token for an atom: bare organic-subset symbol when the
    implicit-hydrogen rules reproduce the actual hydrogen count."""
    sym = atom.element.lower() if atom.aromatic else atom.element
    if atom.charge == 0 and atom.cls is None and atom.element in ORGANIC_SUBSET:
        inferred = implicit_hydrogens(atom.element, 0, heavy_single, heavy_aromatic)
        if inferred == h:
            return sym
    parts = [sym]
    if h == 1:
        parts.append("H")
    elif h > 1:
        parts.append(f"H{h}")
    if atom.charge == 1:
        parts.append("+")
    elif atom.charge == -1:
        parts.append("-")
    elif atom.charge > 1:
        parts.append(f"+{atom.charge}")
    elif atom.charge < -1:
        parts.append(f"-{-atom.charge}")
    if atom.cls is not None:
        parts.append(f":{atom.cls}")
    return "[" + "".join(parts) + "]"


def _emit(h: _Heavy, rank: list[int]) -> str:
    """Write SMILES following ranks: lowest-rank root, neighbors by rank."""
    n = len(h.atoms)
    root = min(range(n), key=lambda v: rank[v])

    parent: dict[int, int | None] = {root: None}
    visited = {root}
    preindex: dict[int, int] = {}
    counter = [0]
    tree_children: dict[int, list[int]] = {v: [] for v in range(n)}

    def build(v: int) -> None:
        preindex[v] = counter[0]
        counter[0] += 1
        for u in sorted(h.adj[v], key=lambda u: rank[u]):
            if u not in visited:
                visited.add(u)
                parent[u] = v
                tree_children[v].append(u)
                build(u)

    import sys
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 2 * n + 100))
    try:
        build(root)
        back_open: dict[int, list[int]] = {v: [] for v in range(n)}
        back_close: dict[int, list[int]] = {v: [] for v in range(n)}
        for a, b, lbl in h.edges:
            if parent.get(a) == b or parent.get(b) == a:
                continue
            first, second = (a, b) if preindex[a] < preindex[b] else (b, a)
            back_open[first].append(second)
            back_close[second].append(first)

        digit_of: dict[tuple[int, int], int] = {}
        free: list[int] = list(range(1, 100))
        out: list[str] = []

        def bond_str(a: int, b: int) -> str:
            lbl = h.adj[a][b]
            if lbl == "-":
                return "" if not (h.atoms[a].aromatic and h.atoms[b].aromatic) else "-"
            if lbl == ":":
                return "" if (h.atoms[a].aromatic and h.atoms[b].aromatic) else ":"
            return lbl

        def digit_token(d: int) -> str:
            return str(d) if d < 10 else f"%{d:02d}"

        def emit(v: int) -> None:
            single, arom = 0, 0
            for u, lbl in h.adj[v].items():
                if lbl == ":":
                    arom += 1
                else:
                    single += int({"-": 1, "=": 2, "#": 3}[lbl])
            out.append(_atom_token(h.atoms[v], h.h_count[v], single, arom))
            for u in sorted(back_close[v], key=lambda u: preindex[u]):
                key = (u, v)
                d = digit_of.pop(key)
                free.append(d)
                free.sort()
                out.append(digit_token(d))
            for u in sorted(back_open[v], key=lambda u: preindex[u]):
                d = free.pop(0)
                digit_of[(v, u)] = d
                out.append(bond_str(v, u) + digit_token(d))
            kids = tree_children[v]
            for idx, u in enumerate(kids):
                last = idx == len(kids) - 1
                if not last:
                    out.append("(")
                out.append(bond_str(v, u))
                emit(u)
                if not last:
                    out.append(")")

        emit(root)
    finally:
        sys.setrecursionlimit(old_limit)
    return "".join(out)


def _canonical_string(h: _Heavy) -> str:
    n = len(h.atoms)
    best: list[str | None] = [None]

    def descend(colors: list[int]) -> None:
        colors = _refine(h, colors)
        groups: dict[int, list[int]] = {}
        for v in range(n):
            groups.setdefault(colors[v], []).append(v)
        split = None
        for c in sorted(groups):
            if len(groups[c]) > 1:
                split = c
                break
        if split is None:
            s = _emit(h, colors)
            if best[0] is None or s < best[0]:
                best[0] = s
            return
        for v in groups[split]:
            branched = [c + 1 if c >= split else c for c in colors]
            branched[v] = split
            descend(branched)

    descend(_initial_colors(h))
    assert best[0] is not None
    return best[0]


def canonical_smiles(m: Molecule) -> str:
    """Canonical SMILES of a filled molecule.

    The same string is produced for every node ordering of isomorphic
    molecules, and re-parsing it (plus hydrogen fill) reproduces the
    molecule up to isomorphism.
    """
    if not m.filled:
        raise ChemError("canonical_smiles requires a hydrogen-filled molecule")
    h = _heavy_view(m)
    if h is None:
        if m.graph.node_count == 1:
            return "[H]"
        if m.graph.node_count == 2 and m.graph.edge_count == 1:
            return "[H][H]"
        raise ChemError("cannot canonicalize an all-hydrogen fragment this large")
    return _canonical_string(h)
