"""Molecular groups: registry files, SMILES placeholders, rule placeholders."""

from __future__ import annotations

import pytest

from grw import parse_gml_rule
from grw.chem import (ChemError, Group, GroupRegistry, canonical_smiles,
                      fill_hydrogens, parse_gml_groups, parse_molecule,
                      parse_smiles, perceive_aromaticity, sanity_check)

from conftest import asset_text, prep
from test_canonical import NADH, NADP

NADH_GROUPED = "[{CONH2}]C1[CH2]C=CN(C=1)[{Ribo-ADP}]"
NADP_GROUPED = "[{CONH2}]c1ccc[n+](c1)[{Ribo-ADP}]"


@pytest.fixture(scope="module")
def nadh_registry() -> GroupRegistry:
    return parse_gml_groups(asset_text("nadh_groups.gml"))


class TestRegistry:
    def test_parse_packaged_file(self, nadh_registry):
        assert sorted(nadh_registry.names()) == ["CONH2", "Ribo-ADP"]
        assert "CONH2" in nadh_registry
        assert len(nadh_registry) == 2

    def test_group_sizes(self, nadh_registry):
        assert nadh_registry.get("CONH2").graph.node_count == 3
        assert nadh_registry.get("Ribo-ADP").graph.node_count == 35

    def test_proxy_validated(self):
        g = parse_molecule("C=O").graph
        with pytest.raises(ChemError):
            Group("bad", g, proxy=9)

    def test_unknown_group_lookup(self, nadh_registry):
        with pytest.raises(ChemError):
            nadh_registry.get("nope")

    def test_registry_rejects_bad_labels(self):
        from grw import LabeledGraph
        reg = GroupRegistry()
        bad = LabeledGraph.from_parts(["Zz"], [])
        with pytest.raises(ChemError):
            reg.add(Group("z", bad, proxy=0))

    def test_duplicate_group_name(self, nadh_registry):
        with pytest.raises(ChemError):
            nadh_registry.add(Group("CONH2",
                                    parse_molecule("C=O").graph, proxy=0))


class TestSmilesPlaceholders:
    def test_placeholder_requires_registry(self):
        with pytest.raises(ChemError):
            parse_smiles("[{CONH2}]C")

    def test_unknown_name_rejected(self, nadh_registry):
        with pytest.raises(ChemError):
            parse_smiles("[{XYZ}]C", groups=nadh_registry)

    def test_proxy_inherits_placeholder_bonds(self, nadh_registry):
        (m,) = parse_smiles("[{CONH2}]C", groups=nadh_registry)
        # amide carbon (the proxy) bonded to: methyl C, N, O
        assert m.atom_count == 4
        proxy_neighbors = sorted(
            m.graph.label(u) for u in m.graph.neighbors(0))
        assert proxy_neighbors == ["C", "N", "O"]

    def test_nadh_group_form_equals_full_form(self, nadh_registry):
        full = prep(NADH)
        (grouped,) = parse_smiles(NADH_GROUPED, groups=nadh_registry)
        grouped = perceive_aromaticity(fill_hydrogens(grouped))
        assert sanity_check(grouped) == []
        assert canonical_smiles(grouped) == canonical_smiles(full)

    def test_nad_plus_group_form_equals_full_form(self, nadh_registry):
        full = prep(NADP)
        (grouped,) = parse_smiles(NADP_GROUPED, groups=nadh_registry)
        grouped = perceive_aromaticity(fill_hydrogens(grouped))
        assert sanity_check(grouped) == []
        assert canonical_smiles(grouped) == canonical_smiles(full)

    def test_heavy_atom_count_preserved(self, nadh_registry):
        (grouped,) = parse_smiles(NADH_GROUPED, groups=nadh_registry)
        assert grouped.atom_count == 44  # heavy atoms only before fill


class TestRulePlaceholders:
    def test_context_placeholder_expands(self, nadh_registry):
        rule = parse_gml_rule("""
            rule [
              ruleID "hydrate the amide neighbor"
              context [
                node [ id 1 label "[{CONH2}]" ]
                node [ id 2 label "O" ]
              ]
              left [ edge [ source 1 target 2 label "-" ] ]
              right [ edge [ source 1 target 2 label "=" ] ]
            ]""", groups=nadh_registry)
        labels = {nd.left for nd in rule.nodes if nd.left}
        assert "[{CONH2}]" not in labels
        assert {"C", "N", "O"} <= labels
        assert len(rule.nodes) == 2 + 2  # proxy kept, two fragment atoms added
        # The spliced fragment arrives as context: same label on both sides.
        assert all(nd.left == nd.right for nd in rule.nodes)

    def test_changing_placeholder_rejected(self, nadh_registry):
        with pytest.raises(ChemError):
            parse_gml_rule("""
                rule [
                  ruleID "bad"
                  left [ node [ id 1 label "[{CONH2}]" ] ]
                  right [ node [ id 1 label "C" ] ]
                ]""", groups=nadh_registry)
