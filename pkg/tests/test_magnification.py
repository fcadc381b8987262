import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from plunnecke_lab import (HypothesisError, InputError, cut_weight, cutset_push,
                           is_cutset, iterated_image, magnification_bruteforce,
                           magnification_mincut, min_weight_cutset, push_penalty,
                           truncate, verify_bottom_layer_minimal,
                           verify_graph_plunnecke)
from plunnecke_lab.generators import (admissible_cut_rate,
                                      perfect_power_orbit_graph,
                                      random_layered_graph, random_orbit_graph)
from plunnecke_lab.maxflow import min_ratio_mincut

from conftest import build

small_graphs = st.integers(0, 10 ** 9).map(
    lambda s: random_layered_graph(random.Random(s), max_layer0=6, max_width=5))
orbit_graphs = st.integers(0, 10 ** 9).map(
    lambda s: random_orbit_graph(random.Random(s), max_n=8, max_a=3, max_h=3))


class TestMagnification:
    def test_o1_pinned_values(self, o1):
        for j, expected in ((1, 2), (2, 3)):
            assert magnification_bruteforce(o1, j).value == expected
            assert magnification_mincut(o1, j).value == expected

    def test_o2_pinned_values(self, o2):
        for j, expected in ((1, 2), (2, 2)):
            assert magnification_bruteforce(o2, j).value == expected
            assert magnification_mincut(o2, j).value == expected

    def test_dead_end_vertex_gives_zero(self):
        g = build([("v0", 0, 1), ("u0", 0, 1), ("v1", 1, 1)], [("v0", "v1", "a")])
        for method in (magnification_bruteforce, magnification_mincut):
            result = method(g, 1)
            assert result.value == 0
            assert result.witness == {"u0"}

    def test_brute_force_limit_refusal(self):
        vertices = [(f"b{i:02d}", 0, 1) for i in range(21)] + [("t", 1, 1)]
        edges = [(f"b{i:02d}", "t", "a") for i in range(1)]
        g = build(vertices, edges, height=1)
        with pytest.raises(InputError, match="mincut"):
            magnification_bruteforce(g, 1)
        assert magnification_mincut(g, 1).value == 0

    def test_out_of_range_order(self, o1):
        for j in (0, 3):
            with pytest.raises(InputError):
                magnification_bruteforce(o1, j)

    @given(small_graphs, st.data())
    def test_oracle_agreement(self, g, data):
        j = data.draw(st.integers(1, g.height))
        brute = magnification_bruteforce(g, j)
        mincut = magnification_mincut(g, j)
        assert brute.value == mincut.value
        assert brute.witness == mincut.witness

    @given(small_graphs, st.data())
    def test_witness_soundness(self, g, data):
        j = data.draw(st.integers(1, g.height))
        result = magnification_mincut(g, j)
        assert result.witness
        img = iterated_image(g, result.witness, j)
        assert g.weight(img) == result.value * g.weight(result.witness)

    @given(small_graphs, st.data())
    def test_ratio_iteration_stays_in_bounds(self, g, data):
        j = data.draw(st.integers(1, g.height))
        bottom = sorted(g.layer_set(0))
        neighbors = {v: iterated_image(g, frozenset([v]), j) for v in bottom}
        _value, _witness, trace = min_ratio_mincut(bottom, neighbors, g.atoms, g.atoms)
        assert all(trace[i + 1] < trace[i] for i in range(len(trace) - 1))
        layer_j = {u for vs in neighbors.values() for u in vs}
        assert len(trace) <= max(1, len(bottom) * max(1, len(layer_j))) + 2


class TestCutWeight:
    def test_layer_zero_ignores_rate(self, o1):
        bottom = o1.layer_set(0)
        for rate in (1, 2, Fraction(7, 3)):
            assert cut_weight(o1, bottom, rate) == o1.weight(bottom)

    def test_o1_full_layers(self, o1_full):
        assert cut_weight(o1_full, o1_full.layer_set(1), 2) == Fraction(1, 2)
        assert cut_weight(o1_full, o1_full.layer_set(2), 2) == Fraction(1, 4)

    def test_rate_one_is_plain_measure(self, o1):
        S = set(o1.atoms)
        assert cut_weight(o1, S, 1) == o1.total_weight()

    def test_nonpositive_rate(self, o1):
        with pytest.raises(InputError):
            cut_weight(o1, o1.layer_set(0), 0)


class TestIsCutset:
    def test_path(self, path3):
        assert is_cutset(path3, {"v1"})
        assert not is_cutset(path3, set())
        assert is_cutset(path3, {"v0"})
        assert is_cutset(path3, {"v2"})

    def test_o1_layers(self, o1):
        assert is_cutset(o1, o1.layer_set(1))
        one_of_two = {sorted(o1.layer_set(1))[0]}
        assert not is_cutset(o1, one_of_two)


def _min_cutset_oracle(g, rate):
    """Enumerate all vertex subsets; minimum weight, then lexicographic order."""
    ids = sorted(g.atoms)
    best = None
    for r in range(len(ids) + 1):
        for combo in combinations(ids, r):
            S = frozenset(combo)
            if not is_cutset(g, S):
                continue
            w = cut_weight(g, S, rate)
            key = (w, tuple(sorted(S)))
            if best is None or key < best:
                best = key
    return best


class TestMinWeightCutset:
    def test_unit_path_rate_one(self, path3):
        report = min_weight_cutset(path3, 1)
        assert report.weight == 1
        assert report.cutset == {"v0"}
        assert report.is_minimal

    def test_o1_full_rate_two(self, o1_full):
        report = min_weight_cutset(o1_full, 2)
        assert report.weight == Fraction(1, 4)
        assert report.cutset == o1_full.layer_set(0)

    def test_o1_rate_one(self, o1):
        report = min_weight_cutset(o1, 1)
        assert report.weight == Fraction(1, 4)
        assert report.cutset == o1.layer_set(0)

    def test_no_paths_gives_empty_cutset(self):
        g = build([("v0", 0, 1), ("v1", 1, 1)], [], height=2, labels=["a"])
        report = min_weight_cutset(g, 1)
        assert report.cutset == frozenset()
        assert report.weight == 0

    @given(st.integers(0, 10 ** 9), st.sampled_from([Fraction(1), Fraction(2), Fraction(1, 2)]))
    @settings(max_examples=25)
    def test_matches_subset_enumeration(self, seed, rate):
        g = random_layered_graph(random.Random(seed), max_layer0=4, max_width=4,
                                 max_height=2)
        if len(g.atoms) > 11:
            return
        report = min_weight_cutset(g, rate)
        expected_weight, expected_set = _min_cutset_oracle(g, rate)
        assert report.weight == expected_weight
        assert tuple(sorted(report.cutset)) == expected_set
        assert is_cutset(g, report.cutset)


class TestCutsetPush:
    def test_path_push_example(self, path4):
        pushed = cutset_push(path4, {"v2"}, 1, 2)
        assert pushed == {"v1"}
        assert is_cutset(path4, pushed)
        assert cut_weight(path4, pushed, 1) == cut_weight(path4, {"v2"}, 1) == 1

    def test_push_with_empty_middle_keeps_set(self, path4):
        S = frozenset({"v0", "v3"})
        pushed = cutset_push(path4, S, 1, 2)
        assert pushed >= S

    def test_o1_layer_one_to_layer_zero(self, o1):
        pushed = cutset_push(o1, o1.layer_set(1), 1, 1)
        assert pushed == o1.layer_set(0)
        assert cut_weight(o1, pushed, 1) == Fraction(1, 4)

    def test_rejects_non_cutsets_and_bad_layers(self, path4):
        with pytest.raises(InputError):
            cutset_push(path4, {"v0"}, 1, 3)  # j out of 1..h-1
        with pytest.raises(InputError):
            cutset_push(path4, set(), 1, 1)  # not a cutset
        with pytest.raises(InputError):
            cutset_push(path4, {"v2"}, 1, 1)  # touches layer 2, outside 0..1 + top

    @given(orbit_graphs, st.sampled_from([Fraction(1), Fraction(2)]))
    def test_exact_minimality_survives_pushing(self, g, rate):
        if g.height < 2:
            return
        m0 = min_weight_cutset(g, rate).weight
        S = min_weight_cutset(g, rate).cutset
        for j in range(g.height - 1, 0, -1):
            S = cutset_push(g, S, rate, j)
            assert is_cutset(g, S)
            assert cut_weight(g, S, rate) == m0
        assert all(g.layer[v] in (0, g.height) for v in S)

    @given(small_graphs, st.data())
    def test_push_output_is_a_cutset_even_without_commutativity(self, g, data):
        if g.height < 2:
            return
        j = data.draw(st.integers(1, g.height - 1))
        S = g.layer_set(j)
        pushed = cutset_push(g, S, 1, j)
        assert is_cutset(g, pushed)
        allowed = set(range(j)) | {g.height}
        assert all(g.layer[v] in allowed for v in pushed)

    @given(orbit_graphs, st.data())
    def test_push_respects_the_stated_slack(self, g, data):
        if g.height < 2:
            return
        rate = data.draw(st.sampled_from([Fraction(1), Fraction(2), Fraction(3, 2)]))
        j = data.draw(st.integers(1, g.height - 1))
        S = g.layer_set(j)  # a deliberately suboptimal cutset
        m0 = min_weight_cutset(g, rate).weight
        eps = cut_weight(g, S, rate) - m0
        assert eps >= 0
        pushed = cutset_push(g, S, rate, j)
        bound = m0 + eps + push_penalty(len(g.labels), rate, eps)
        assert cut_weight(g, pushed, rate) <= bound


class TestVerifyGraphPlunnecke:
    def test_o1(self, o1):
        report = verify_graph_plunnecke(o1, "O1")
        assert report.holds
        assert (report.lhs, report.rhs) == (4, 3)
        assert report.details["d"] == {"1": "2/1", "2": "3/1"}

    def test_o2(self, o2):
        report = verify_graph_plunnecke(o2, "O2")
        assert report.holds
        assert (report.lhs, report.rhs) == (4, 2)

    def test_height_one_is_trivial_equality(self, path2):
        report = verify_graph_plunnecke(path2, "edge")
        assert report.holds
        assert report.lhs == report.rhs

    def test_refuses_non_commutative_graphs(self, chain_counterexample):
        with pytest.raises(HypothesisError) as err:
            verify_graph_plunnecke(chain_counterexample)
        assert err.value.payload.failing_edge == ("v0", "v1", "a")

    @given(orbit_graphs)
    def test_holds_on_random_orbit_graphs(self, g):
        assert verify_graph_plunnecke(g).holds

    @given(orbit_graphs, st.data())
    def test_truncated_layerings_satisfy_the_inequality(self, g, data):
        k = data.draw(st.integers(1, g.height))
        assert verify_graph_plunnecke(truncate(g, k)).holds


class TestVerifyBottomLayerMinimal:
    def test_o1_full_at_the_exact_power(self, o1_full):
        report = verify_bottom_layer_minimal(o1_full, 2, "O1-full")
        assert report.holds
        assert report.lhs == report.rhs == Fraction(1, 4)

    def test_height_one_at_its_own_ratio(self, path2):
        report = verify_bottom_layer_minimal(path2, 1, "edge")
        assert report.holds

    def test_refusal_when_rate_is_too_big(self, o1_full):
        with pytest.raises(HypothesisError):
            verify_bottom_layer_minimal(o1_full, 3, "O1-full")  # 3**2 > 4

    def test_perfect_power_instances(self, rng):
        for _ in range(10):
            g, rate = perfect_power_orbit_graph(rng)
            top = magnification_mincut(g, g.height).value
            assert rate ** g.height == top
            assert verify_bottom_layer_minimal(g, rate).holds

    @given(orbit_graphs, st.data())
    def test_admissible_rates_hold(self, g, data):
        rate = admissible_cut_rate(random.Random(data.draw(st.integers(0, 9999))), g)
        assert verify_bottom_layer_minimal(g, rate).holds
