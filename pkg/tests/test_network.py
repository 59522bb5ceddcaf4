"""Reaction-network expansion: growth numbers, determinism, exports."""

from __future__ import annotations

from collections import Counter

import pytest

from grw.chem import (canonical_smiles, load_energy_model, molecular_formula,
                      sanity_check)
from grw.network import ExpansionConfig, ReactionNetwork, expand, to_dot, to_gml

from conftest import asset_text, load_rule, prep

FORMOSE_STATS = [(0, 2, 0), (1, 3, 1), (2, 5, 4), (3, 9, 10),
                 (4, 37, 44), (5, 302, 371)]


class TestFormoseGrowth:
    def test_molecule_and_reaction_counts(self, formose_net5):
        assert formose_net5.stats() == FORMOSE_STATS

    def test_elapsed_within_budget(self, formose_net5):
        assert sum(formose_net5.elapsed.values()) < 60.0

    def test_seed_iteration_is_zero(self, formose_net5):
        assert formose_net5.molecules["C(CO)=O"][1] == 0
        assert formose_net5.molecules["C=O"][1] == 0

    def test_glycolaldehyde_enol_appears_first(self, formose_net5):
        assert formose_net5.molecules["C(=CO)O"][1] == 1

    @pytest.mark.slow
    def test_sixth_iteration(self, formose_rules, formose_inputs):
        net = expand(formose_inputs, formose_rules,
                     ExpansionConfig(iterations=6))
        assert net.stats()[6] == (6, 10572, 11239)
        assert sum(net.elapsed.values()) < 600.0


class TestNetworkInvariants:
    def test_stats_monotonic(self, formose_net5):
        rows = formose_net5.stats()
        for (i0, m0, r0), (i1, m1, r1) in zip(rows, rows[1:]):
            assert i1 == i0 + 1 and m1 >= m0 and r1 >= r0

    def test_reactions_reference_known_molecules(self, formose_net5):
        known = set(formose_net5.molecules)
        for rxn in formose_net5.reactions:
            assert set(rxn.reactants) <= known
            assert set(rxn.products) <= known

    def test_atoms_conserved_per_reaction(self, formose_rules, formose_inputs):
        net = expand(formose_inputs, formose_rules,
                     ExpansionConfig(iterations=3))

        def total(canons):
            counts: Counter = Counter()
            for c in canons:
                counts.update(molecular_formula(net.molecules[c][0]))
            return counts

        for rxn in net.reactions:
            assert total(rxn.reactants) == total(rxn.products)

    def test_molecules_sane_and_keyed_by_own_canon(self, formose_net5):
        for canon, (mol, _) in formose_net5.molecules.items():
            assert not sanity_check(mol)
            assert canonical_smiles(mol) == canon

    def test_canon_keys_reparse_to_themselves(self, formose_net5):
        for canon in formose_net5.molecules:
            assert canonical_smiles(prep(canon)) == canon

    def test_prefix_stability(self, formose_rules, formose_inputs):
        short = expand(formose_inputs, formose_rules,
                       ExpansionConfig(iterations=2))
        long = expand(formose_inputs, formose_rules,
                      ExpansionConfig(iterations=3))
        assert short.stats() == long.stats()[:3]

    def test_rerun_is_byte_identical(self, formose_rules, formose_inputs):
        nets = [expand(formose_inputs, formose_rules,
                       ExpansionConfig(iterations=3)) for _ in range(2)]
        assert to_dot(nets[0]) == to_dot(nets[1])
        assert to_gml(nets[0]) == to_gml(nets[1])
        assert [r.signature for r in nets[0].reactions] == \
               [r.signature for r in nets[1].reactions]


class TestConfig:
    def test_no_rules_no_reactions(self, formose_inputs):
        net = expand(formose_inputs, [], ExpansionConfig(iterations=2))
        assert net.molecule_count == 2 and net.reaction_count == 0

    def test_zero_iterations_keeps_seeds_only(self, formose_rules,
                                              formose_inputs):
        net = expand(formose_inputs, formose_rules,
                     ExpansionConfig(iterations=0))
        assert net.stats() == [(0, 2, 0)]

    def test_negative_iterations_rejected(self):
        with pytest.raises(ValueError):
            ExpansionConfig(iterations=-1)

    def test_bad_max_atoms_rejected(self):
        with pytest.raises(ValueError):
            ExpansionConfig(iterations=1, max_atoms=0)

    def test_max_atoms_drops_oversized_reactions(self, formose_rules,
                                                 formose_inputs):
        net = expand(formose_inputs, formose_rules,
                     ExpansionConfig(iterations=2, max_atoms=8))
        assert net.stats() == [(0, 2, 0), (1, 3, 1), (2, 3, 2)]
        assert all(m.atom_count <= 8 for m, _ in net.molecules.values())


@pytest.fixture(scope="module")
def da_net(diels_alder_rule):
    return expand([prep("CC(=C)C=C"), prep("CC=C")], [diels_alder_rule],
                  ExpansionConfig(iterations=1))


@pytest.fixture(scope="module")
def energy_net(formose_rules, formose_inputs):
    model = load_energy_model(asset_text("energy_demo.tsv"))
    return expand(formose_inputs, formose_rules,
                  ExpansionConfig(iterations=2, energy_model=model))


class TestDielsAlderNetwork:
    """Isoprene + propene: the cross reaction gives the two methyl-placement
    isomers, and isoprene also dimerizes with itself (four limonene-like
    products), all in one iteration."""

    def test_counts(self, da_net):
        assert da_net.stats() == [(0, 2, 0), (1, 8, 6)]

    def test_cross_products(self, da_net):
        cross = {tuple(r.products) for r in da_net.reactions
                 if set(r.reactants) == {"C=CC", "C=CC(=C)C"}}
        assert cross == {("CC1=CCC(C)CC1",), ("CC1=CCCC(C)C1",)}

    def test_self_dimerization(self, da_net):
        dimers = [r for r in da_net.reactions
                  if r.reactants == ("C=CC(=C)C", "C=CC(=C)C")]
        assert len(dimers) == 4

    def test_dedup_off_counts_every_rewrite(self, diels_alder_rule):
        net = expand([prep("CC(=C)C=C"), prep("CC=C")], [diels_alder_rule],
                     ExpansionConfig(iterations=1, dedup_products=False))
        assert net.reaction_count == 12
        assert net.molecule_count == 8

    def test_dot_export_shape(self, da_net):
        dot = to_dot(da_net)
        assert dot.count("[label=") == 8
        assert dot.count("[xlabel=") == 6
        assert dot.startswith("digraph RN {") and dot.endswith("}")


class TestEnergyAwareExpansion:
    def test_keto_enol_pair_is_antisymmetric(self, energy_net):
        pair = {r.reactants: r for r in energy_net.reactions
                if {r.reactants, r.products} ==
                {("C(CO)=O",), ("C(=CO)O",)}}
        fwd, rev = pair[("C(CO)=O",)], pair[("C(=CO)O",)]
        assert fwd.delta_e == -rev.delta_e == 5.5
        assert abs(fwd.rate * rev.rate - 1.0) < 1e-12

    def test_exothermic_reactions_run_faster(self, energy_net):
        for rxn in energy_net.reactions:
            if rxn.delta_e < 0:
                assert rxn.rate > 1.0
            elif rxn.delta_e > 0:
                assert rxn.rate < 1.0

    def test_rates_default_to_unity_without_model(self, formose_net5):
        assert all(r.rate == 1.0 and r.delta_e == 0.0
                   for r in formose_net5.reactions)


class TestBetaLactamOpening:
    """Serine-hydrolase style ring opening: the strained amide is attacked
    by the class-tagged alcohol while the class-tagged amine takes the
    proton, leaving a tetrahedral anion and an ammonium."""

    def test_single_recorded_reaction(self):
        rule = load_rule("beta_lactamase.gml")
        seeds = [prep("O=C1CCN1"), prep("[CH3:1]O"), prep("[CH3:1]N")]
        net = expand(seeds, [rule], ExpansionConfig(iterations=1))
        assert net.stats() == [(0, 3, 0), (1, 5, 1)]
        (rxn,) = net.reactions
        assert rxn.rule_id == "3.5.2.6-M0002-S01"
        assert rxn.reactants == ("C1CNC1=O", "[CH3:1]N", "[CH3:1]O")
        assert rxn.products == ("C1CNC1([O-])O[CH3:1]", "[CH3:1][NH3+]")
        assert rxn.rate == 1.0


class TestExports:
    def test_empty_dot(self):
        assert to_dot(ReactionNetwork()) == "digraph RN {\n}"

    def test_dot_wires_reactants_and_products(self, formose_rules,
                                              formose_inputs):
        net = expand(formose_inputs, formose_rules,
                     ExpansionConfig(iterations=1))
        dot = to_dot(net)
        assert "digraph RN {" in dot
        assert "-> r0;" in dot and "r0 ->" in dot
        assert dot.count("shape=box") == 1 and dot.count("shape=point") == 1

    def test_gml_roundtrips_counts(self, formose_rules, formose_inputs):
        net = expand(formose_inputs, formose_rules,
                     ExpansionConfig(iterations=1))
        gml = to_gml(net)
        assert gml.startswith("graph [\n  directed 1\n")
        assert gml.count("node [") == net.molecule_count + net.reaction_count
        edge_lines = gml.count("edge [")
        arcs = sum(len(r.reactants) + len(r.products) for r in net.reactions)
        assert edge_lines == arcs
