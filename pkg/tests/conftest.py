"""Shared fixtures and small helpers for the test suite."""

from __future__ import annotations

from importlib import resources
from random import Random

import pytest

from grw import LabeledGraph, RuleGraph, parse_gml_rule
from grw.chem import (Molecule, check_chem_rule, fill_hydrogens, parse_smiles,
                      perceive_aromaticity, sanity_check)


def asset_text(name: str) -> str:
    return (resources.files("grw") / "assets" / name).read_text()


def load_rule(name: str) -> RuleGraph:
    """Parse a packaged rule file and apply the chemical-rule check."""
    rule = parse_gml_rule(asset_text(name))
    violations, normalized = check_chem_rule(rule)
    assert not violations, f"{name}: {[str(v) for v in violations]}"
    return normalized


def prep(smiles: str) -> Molecule:
    """Parse a single-component SMILES into a filled, perceived molecule."""
    (m,) = parse_smiles(smiles)
    m = perceive_aromaticity(fill_hydrogens(m))
    problems = sanity_check(m)
    assert not problems, f"{smiles}: {[str(p) for p in problems]}"
    return m


def permuted(m: Molecule, rng: Random) -> Molecule:
    """The same molecule presented under a random node permutation."""
    g = m.graph
    perm = list(range(g.node_count))
    rng.shuffle(perm)  # perm[old] = new
    labels = [""] * g.node_count
    for old, new in enumerate(perm):
        labels[new] = g.label(old)
    edges = [(perm[u], perm[v], lbl) for u, v, lbl in g.edges()]
    return Molecule(LabeledGraph.from_parts(labels, edges), {}, filled=True)


@pytest.fixture(scope="session")
def formose_rules() -> list[RuleGraph]:
    return [load_rule(n) for n in
            ("keto_enol.gml", "keto_enol_reverse.gml",
             "aldol.gml", "aldol_reverse.gml")]


@pytest.fixture(scope="session")
def diels_alder_rule() -> RuleGraph:
    return load_rule("diels_alder.gml")


@pytest.fixture(scope="session")
def formose_inputs() -> list[Molecule]:
    return [prep("OCC=O"), prep("C=O")]


@pytest.fixture(scope="session")
def formose_net5(formose_rules, formose_inputs):
    from grw.network import ExpansionConfig, expand
    return expand(formose_inputs, formose_rules, ExpansionConfig(iterations=5))
