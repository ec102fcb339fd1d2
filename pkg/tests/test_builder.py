"""Tests for the mechanical refutation builder."""

import pytest

from nonham.builder import (
    FAITHFUL_CAP,
    PRUNED_CAP,
    build_case_tower,
    build_leaf,
    build_refutation,
    finalize_negation,
    resolve_mode,
    unfold_nary,
)
from nonham.encoding import encode_graph
from nonham.errors import (
    CapExceededError,
    GraphIsHamiltonianError,
    NoViolationError,
    WrongOpenSetError,
)
from nonham.formulas import bot, imp, x_var
from nonham.graphs import Graph, enumerate_graphs, find_violation, is_hamiltonian
from nonham.prooftree import check_tree, hyp, is_normal, iter_nodes, subformula_ok

ALLOWED_RULES = {"Hyp", "ImpIntro", "ImpElim", "AndElimL", "AndElimR", "OrElimN"}


def empty(n):
    return Graph(n, frozenset())


class TestLeaves:
    def test_repeat_leaf_open_set(self):
        g = empty(2)
        enc = encode_graph(g)
        leaf = build_leaf([1, 1], g, enc)
        m = check_tree(leaf)
        assert leaf.conclusion is bot()
        assert m.open_assumptions == frozenset(
            {enc.formula, x_var(1, 1), x_var(2, 1)}
        )

    def test_missing_edge_leaf_open_set(self):
        g = Graph(2, frozenset({(2, 1)}))
        enc = encode_graph(g)
        leaf = build_leaf([1, 2], g, enc)
        m = check_tree(leaf)
        assert m.open_assumptions == frozenset(
            {enc.formula, x_var(1, 1), x_var(2, 2)}
        )

    def test_leaves_are_normal(self):
        g = empty(3)
        enc = encode_graph(g)
        for seq in ([1, 1, 1], [1, 2, 3], [3, 2, 2]):
            leaf = build_leaf(seq, g, enc)
            assert is_normal(leaf)
            assert leaf.conclusion is bot()

    def test_hamiltonian_sequence_has_no_leaf(self):
        g = Graph(2, frozenset({(1, 2)}))
        with pytest.raises(NoViolationError):
            build_leaf([1, 2], g)


class TestCaseTower:
    def test_faithful_leaf_count_is_n_to_the_n(self):
        for n in (2, 3):
            tower, leaves = build_case_tower(empty(n), mode="faithful")
            assert leaves == n**n
            m = check_tree(tower)
            assert m.open_assumptions == frozenset({encode_graph(empty(n)).formula})
            assert tower.conclusion is bot()

    def test_single_vertex_graph_is_hamiltonian(self):
        with pytest.raises(GraphIsHamiltonianError) as err:
            build_case_tower(empty(1))
        assert err.value.witness == (1,)

    def test_hamiltonian_graph_raises_with_valid_witness(self):
        g = Graph(3, frozenset({(1, 2), (2, 3)}))
        with pytest.raises(GraphIsHamiltonianError) as err:
            build_case_tower(g)
        assert find_violation(err.value.witness, g) is None

    def test_pruned_tower_is_smaller_but_equivalent(self):
        g = empty(3)
        faithful, fl = build_case_tower(g, mode="faithful")
        pruned, pl = build_case_tower(g, mode="pruned")
        assert pl < fl
        mf, mp = check_tree(faithful), check_tree(pruned)
        assert mf.open_assumptions == mp.open_assumptions
        assert pruned.conclusion is faithful.conclusion
        assert mp.weight < mf.weight


class TestUnfold:
    def test_binary_towers_pass_through_unchanged(self):
        tower, _ = build_case_tower(empty(2))
        assert unfold_nary(tower) is tower

    def test_unfolded_splits_are_binary(self):
        tower, _ = build_case_tower(empty(3))
        unfolded = unfold_nary(tower)
        assert unfolded is not tower
        saw_split = False
        for node in iter_nodes(unfolded):
            if node.rule == "OrElimN":
                saw_split = True
                assert len(node.premises) == 3
        assert saw_split

    def test_unfold_preserves_conclusion_and_opens(self):
        tower, _ = build_case_tower(empty(3))
        unfolded = unfold_nary(tower)
        assert unfolded.conclusion is tower.conclusion
        assert (
            check_tree(unfolded).open_assumptions
            == check_tree(tower).open_assumptions
        )


class TestFinalize:
    def test_discharges_the_encoding(self):
        g = empty(2)
        enc = encode_graph(g)
        tower, _ = build_case_tower(g, enc)
        p = finalize_negation(unfold_nary(tower), enc)
        m = check_tree(p)
        assert p.conclusion is imp(enc.formula, bot())
        assert m.open_assumptions == frozenset()

    def test_rejects_wrong_open_set(self):
        enc = encode_graph(empty(2))
        with pytest.raises(WrongOpenSetError) as err:
            finalize_negation(hyp(bot()), enc)
        assert err.value.expected == frozenset({enc.formula})
        assert bot() in err.value.open_set


class TestModesAndCaps:
    def test_auto_mode_switches_at_the_faithful_cap(self):
        assert resolve_mode("auto", FAITHFUL_CAP) == "faithful"
        assert resolve_mode("auto", FAITHFUL_CAP + 1) == "pruned"
        assert resolve_mode("pruned", 2) == "pruned"
        with pytest.raises(ValueError):
            resolve_mode("eager", 3)

    def test_cap_exceeded(self):
        with pytest.raises(CapExceededError):
            build_refutation(empty(FAITHFUL_CAP + 1), mode="faithful")
        with pytest.raises(CapExceededError):
            build_refutation(empty(PRUNED_CAP + 1), mode="pruned")

    def test_cap_override_is_honored(self):
        with pytest.raises(CapExceededError):
            build_refutation(empty(3), cap=2)
        report = build_refutation(empty(3), mode="pruned", cap=3)
        assert report.mode == "pruned"


class TestBuildRefutation:
    def test_report_summary_fields(self):
        report = build_refutation(empty(2))
        s = report.summary()
        assert s["n"] == 2
        assert s["mode"] == "faithful"
        assert s["leaf_count"] == 4
        assert s["height"] == report.metrics.height
        assert s["tower_height"] <= s["height"]

    def test_exhaustive_small_graphs(self):
        checked = 0
        for n in (2, 3):
            for g in enumerate_graphs(n):
                if is_hamiltonian(g) is not None:
                    with pytest.raises(GraphIsHamiltonianError):
                        build_refutation(g)
                    continue
                report = build_refutation(g)
                enc = report.encoding
                m = report.metrics
                assert report.proof.conclusion is imp(enc.formula, bot())
                assert m.open_assumptions == frozenset()
                assert is_normal(report.proof)
                assert subformula_ok(report.proof, m.open_assumptions)
                for node in iter_nodes(report.proof):
                    assert node.rule in ALLOWED_RULES
                    if node.rule == "OrElimN":
                        assert len(node.premises) == 3
                checked += 1
        assert checked == 1 + 16

    def test_pruned_pipeline_on_a_mid_size_graph(self):
        g = Graph(5, frozenset({(1, 2), (2, 3), (3, 4)}))
        report = build_refutation(g)
        assert report.mode == "pruned"
        assert report.metrics.open_assumptions == frozenset()
        assert is_normal(report.proof)
