"""Subgraph monomorphism search and matching constraints."""

from __future__ import annotations

from random import Random

import pytest

from grw import (Adjacency, LabeledGraph, NodeLabel, NoEdge, Pattern,
                 are_isomorphic, disjoint_union, find_monomorphisms)
from grw.chem import fill_hydrogens, parse_smiles

from oracles import (brute_force_monomorphisms, random_constraints,
                     random_graph)


def mol_graph(smiles: str) -> LabeledGraph:
    return fill_hydrogens(parse_smiles(smiles)[0]).graph


class TestBasics:
    def test_single_node_in_methane(self):
        pattern = LabeledGraph.from_parts(["C"], [])
        assert find_monomorphisms(pattern, mol_graph("C")) == [(0,)]

    def test_wildcard_single_node_matches_everything(self):
        host = LabeledGraph.from_parts(list("ABCDE"), [])
        p = Pattern(LabeledGraph.from_parts(["*"], []), wildcard="*")
        assert find_monomorphisms(p, host) == [(i,) for i in range(5)]

    def test_no_edge_constraint_blocks_bonded_pair(self):
        host = mol_graph("CC")  # ethane: the only two carbons are bonded
        p = Pattern(LabeledGraph.from_parts(["C", "C"], []),
                    constraints=[NoEdge(source=0, target=1)])
        assert find_monomorphisms(p, host) == []

    def test_empty_pattern_has_one_empty_match(self):
        host = mol_graph("CC")
        assert find_monomorphisms(LabeledGraph.from_parts([], []), host) == [()]

    def test_pattern_larger_than_host(self):
        p = LabeledGraph.from_parts(["C", "C"], [])
        assert find_monomorphisms(p, LabeledGraph.from_parts(["C"], [])) == []

    def test_limit_truncates(self):
        host = LabeledGraph.from_parts(["A"] * 5, [])
        p = LabeledGraph.from_parts(["A"], [])
        assert find_monomorphisms(p, host, limit=2) == [(0,), (1,)]

    def test_determinism(self):
        rng = Random(99)
        host = random_graph(rng, 8, ["A", "B"], ["-", "="])
        p = random_graph(rng, 3, ["A", "B"], ["-", "="], min_nodes=1)
        first = find_monomorphisms(p, host)
        assert find_monomorphisms(p, host) == first

    def test_constraint_must_reference_existing_node(self):
        g = LabeledGraph.from_parts(["A"], [])
        with pytest.raises(ValueError):
            Pattern(g, constraints=[NodeLabel(node=3, op="=",
                                              labels=frozenset({"A"}))])


class TestDielsAlderPattern:
    def test_four_matches_in_isoprene_propene(self, diels_alder_rule):
        host, _ = disjoint_union(
            [mol_graph("C=CC(C)=C"), mol_graph("C=CC")])
        pattern, _ = diels_alder_rule.left_pattern()
        matches = find_monomorphisms(pattern, host)
        assert len(matches) == 4
        assert matches == brute_force_monomorphisms(pattern, host)


class TestWildcardCounting:
    def test_isolated_wildcard_pattern_counts_arrangements(self):
        rng = Random(5)
        for _ in range(10):
            host = random_graph(rng, 7, ["A", "B", "C"], ["-"], min_nodes=1)
            n = host.node_count
            k = rng.randint(1, min(3, n))
            p = Pattern(LabeledGraph.from_parts(["*"] * k, []), wildcard="*")
            expected = 1
            for i in range(k):
                expected *= n - i
            assert len(find_monomorphisms(p, host)) == expected


class TestOracleEquivalence:
    def test_200_random_cases(self):
        rng = Random(20260816)
        node_labels = ["A", "B", "C"]
        edge_labels = ["-", "="]
        agreed_nonempty = 0
        for case in range(200):
            wildcard = "*" if rng.random() < 0.4 else None
            host = random_graph(rng, 8, node_labels, edge_labels, edge_p=0.5)
            pool = node_labels + (["*"] if wildcard else [])
            epool = edge_labels + (["*"] if wildcard else [])
            pat = random_graph(rng, 4, pool, epool, edge_p=0.5, min_nodes=1)
            cons = random_constraints(rng, pat, node_labels,
                                      edge_labels, wildcard)
            pattern = Pattern(pat, constraints=cons, wildcard=wildcard)
            got = find_monomorphisms(pattern, host)
            want = brute_force_monomorphisms(pattern, host)
            assert got == want, f"case {case}"
            if got:
                agreed_nonempty += 1
        # The generator must actually exercise matching, not just misses.
        assert agreed_nonempty >= 20


class TestIsomorphism:
    def test_self(self):
        g = mol_graph("OCC=O")
        assert are_isomorphic(g, g)

    def test_permuted_copy(self):
        g = LabeledGraph.from_parts(
            ["A", "B", "C"], [(0, 1, "-"), (1, 2, "=")])
        h = LabeledGraph.from_parts(
            ["C", "A", "B"], [(1, 2, "-"), (2, 0, "=")])
        assert are_isomorphic(g, h)

    def test_path_vs_triangle(self):
        path = LabeledGraph.from_parts(["A"] * 3, [(0, 1, "-"), (1, 2, "-")])
        tri = LabeledGraph.from_parts(
            ["A"] * 3, [(0, 1, "-"), (1, 2, "-"), (0, 2, "-")])
        assert not are_isomorphic(path, tri)

    def test_label_sensitivity(self):
        g = LabeledGraph.from_parts(["A", "B"], [(0, 1, "-")])
        h = LabeledGraph.from_parts(["A", "A"], [(0, 1, "-")])
        assert not are_isomorphic(g, h)
