import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from plunnecke_lab import (FinAbGroup, InputError, c, c_delta,
                           c_restricted, heavy_subset, is_commutative, iterate,
                           magnification_mincut, move_set, orbit_graph,
                           product_action, product_set,
                           restricted_orbit_subgraph, translation_action,
                           validate, validate_action, verify_different_summands,
                           verify_dyn_plunnecke, verify_heavy_subset,
                           verify_multiplicativity, verify_restricted_plunnecke)
from plunnecke_lab.dynamics import measure
from plunnecke_lab.generators import (random_action, random_group_subset,
                                      random_space_subset)

from conftest import gset, translation

seeds = st.integers(0, 10 ** 9)


def _sumset_oracle(n, A, B):
    """Direct pairwise sums mod n, independent of the GroupSet machinery."""
    return {(a + b) % n for a in A for b in B}


class TestGroupSets:
    def test_sumset_mod_four(self):
        got = product_set(gset(4, 0, 1), gset(4, 0, 1))
        assert {e[0] for e in got.elements} == _sumset_oracle(4, (0, 1), (0, 1)) == {0, 1, 2}

    def test_three_fold_iterate(self):
        got = iterate(gset(4, 0, 1), 3)
        assert {e[0] for e in got.elements} == {0, 1, 2, 3}

    def test_identity_element(self):
        A = gset(6, 2, 5)
        assert product_set(A, gset(6, 0)).elements == A.elements

    def test_group_mismatch(self):
        with pytest.raises(InputError):
            product_set(gset(4, 0), gset(6, 0))

    def test_zeroth_power_is_identity_singleton(self):
        assert iterate(gset(6, 2, 3), 0).elements == {(0,)}


class TestActions:
    def test_translation_action_shape(self):
        act = translation(6)
        assert len(act.atoms) == 6
        assert set(act.atoms.values()) == {Fraction(1, 6)}
        assert validate_action(act) == []

    def test_product_action_shape(self):
        act = product_action(translation(6), translation(6))
        assert len(act.atoms) == 36
        assert set(act.atoms.values()) == {Fraction(1, 36)}
        assert validate_action(act) == []

    def test_weight_change_is_a_violation(self):
        act = translation(2)
        bad = type(act)(act.group, {"0": Fraction(2, 3), "1": Fraction(1, 3)},
                        act.generator_perms)
        assert any("weight" in v for v in validate_action(bad))

    def test_non_commuting_generators_detected(self):
        group = FinAbGroup((2, 2))
        atoms = {str(i): Fraction(1, 4) for i in range(4)}
        swap01 = {"0": "1", "1": "0", "2": "2", "3": "3"}
        cycle = {"0": "1", "1": "2", "2": "3", "3": "0"}
        bad = translation_action(group)
        bad = type(bad)(group, atoms, (swap01, cycle))
        assert any("commute" in v or "order" in v for v in validate_action(bad))

    @given(seeds)
    def test_random_actions_validate(self, seed):
        assert validate_action(random_action(random.Random(seed))) == []


class TestOrbitGraph:
    def test_o1_shape(self, o1):
        assert [len(o1.layer_set(i)) for i in range(3)] == [1, 2, 3]
        assert len(o1.edges) == 6
        assert validate(o1) == []

    def test_identity_translates_give_a_path(self):
        act = translation(5)
        g = orbit_graph(act, gset(5, 0), {"2"}, 3)
        assert len(g.atoms) == 4
        assert len(g.edges) == 3

    def test_o1_commutative(self, o1):
        assert is_commutative(o1).holds

    @given(seeds)
    def test_random_orbit_graphs_validate_and_commute(self, seed):
        rng = random.Random(seed)
        act = random_action(rng, max_coords=1, max_n=10)
        A = random_group_subset(rng, act.group, 3)
        Y = random_space_subset(rng, act, 3)
        g = orbit_graph(act, A, Y, rng.randint(1, 3))
        assert validate(g) == []
        assert is_commutative(g).holds

    @given(seeds)
    def test_multi_coordinate_orbit_graphs_commute(self, seed):
        rng = random.Random(seed)
        act = random_action(rng, max_coords=2, max_n=6)
        A = random_group_subset(rng, act.group, 3)
        Y = random_space_subset(rng, act, 2)
        g = orbit_graph(act, A, Y, rng.randint(1, 3))
        assert validate(g) == []
        assert is_commutative(g).holds


class TestMagnificationRatio:
    def test_pinned_z6_values(self):
        act = translation(6)
        result = c(act, gset(6, 0, 1), {"0", "3"})
        assert result.value == 2
        assert result.witness == {"0"}
        assert c(act, gset(6, 0), {"0", "3"}).value == 1
        assert c(act, gset(6, 0, 1, 2), {"0", "3"}).value == 3

    def test_methods_agree(self):
        act = translation(6)
        A = gset(6, 0, 1)
        B = {"0", "2", "3"}
        brute = c(act, A, B, method="brute")
        mincut = c(act, A, B, method="mincut")
        assert brute.value == mincut.value
        assert brute.witness == mincut.witness

    @given(seeds)
    def test_matches_orbit_graph_magnification(self, seed):
        rng = random.Random(seed)
        act = random_action(rng, max_coords=1, max_n=8)
        A = random_group_subset(rng, act.group, 3)
        B = random_space_subset(rng, act, 4)
        h = rng.randint(1, 3)
        j = rng.randint(1, h)
        g = orbit_graph(act, A, B, h)
        direct = c(act, iterate(A, j), B).value
        assert magnification_mincut(g, j).value == direct
        one_layer = orbit_graph(act, iterate(A, j), B, 1)
        assert magnification_mincut(one_layer, 1).value == direct


class TestHeavyRatio:
    def test_delta_one_forces_full_set(self):
        act = translation(6)
        A = gset(6, 0, 1)
        B = {"0", "3"}
        expected = measure(act, move_set(act, A, B)) / measure(act, B)
        assert c_delta(act, A, B, 1) == expected

    def test_tiny_delta_matches_plain_ratio(self):
        act = translation(6)
        A = gset(6, 0, 1)
        B = {"0", "3"}
        assert c_delta(act, A, B, Fraction(1, 100)) == c(act, A, B).value

    def test_pinned_three_quarters(self):
        act = translation(6)
        assert c_delta(act, gset(6, 0, 1, 3), {"0", "1"}, Fraction(3, 4)) == Fraction(5, 2)

    @given(seeds, st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)]))
    @settings(max_examples=30)
    def test_monotone_in_delta_and_bounded_below_by_c(self, seed, delta):
        rng = random.Random(seed)
        act = random_action(rng, max_coords=1, max_n=8)
        A = random_group_subset(rng, act.group, 3)
        B = random_space_subset(rng, act, 5)
        small = c_delta(act, A, B, Fraction(1, 1000))
        assert small == c(act, A, B).value
        assert c_delta(act, A, B, delta) >= small
        if delta < 1:
            assert c_delta(act, A, B, delta) <= c_delta(act, A, B, 1)


class TestRestrictedRatio:
    def test_empty_restriction_is_plain_c(self):
        act = translation(6)
        A = gset(6, 0, 1)
        B = {"0", "3"}
        assert c_restricted(act, A, B, frozenset()) == c(act, A, B).value

    def test_full_restriction_is_zero(self):
        act = translation(6)
        assert c_restricted(act, gset(6, 0, 1), {"0"}, set(act.atoms)) == 0

    def test_pinned_singleton(self):
        act = translation(6)
        assert c_restricted(act, gset(6, 0, 1), {"0"}, {"1"}) == 1


class TestDynPlunnecke:
    def test_pinned_z6(self):
        act = translation(6)
        report = verify_dyn_plunnecke(act, gset(6, 0, 1), {"0", "3"}, 1, 2, "z6")
        assert report.holds
        assert (report.lhs, report.rhs) == (4, 3)

    def test_pinned_z6_two_step(self):
        act = translation(6)
        report = verify_dyn_plunnecke(act, gset(6, 0, 3), {"0"}, 1, 2, "z6b")
        assert report.holds
        assert (report.lhs, report.rhs) == (4, 2)

    def test_equal_orders_are_trivially_equal(self):
        act = translation(6)
        report = verify_dyn_plunnecke(act, gset(6, 0, 1), {"0"}, 2, 2, "eq")
        assert report.holds and report.lhs == report.rhs

    @given(seeds)
    def test_holds_on_random_instances(self, seed):
        rng = random.Random(seed)
        act = random_action(rng)
        A = random_group_subset(rng, act.group, 3)
        B = random_space_subset(rng, act, 5)
        j = rng.randint(1, 2)
        k = rng.randint(j + 1, 3)
        assert verify_dyn_plunnecke(act, A, B, j, k).holds


class TestRestrictedPlunnecke:
    def test_pinned_z6(self):
        act = translation(6)
        report = verify_restricted_plunnecke(act, gset(6, 0, 1), {"0"}, {"5"}, 1, 2, "r")
        assert report.holds
        assert (report.lhs, report.rhs) == (4, 2)

    def test_empty_restriction_reduces_to_unrestricted(self):
        act = translation(6)
        A, B = gset(6, 0, 1), {"0", "3"}
        restricted = verify_restricted_plunnecke(act, A, B, frozenset(), 1, 2, "e")
        plain = verify_dyn_plunnecke(act, A, B, 1, 2, "e")
        assert (restricted.lhs, restricted.rhs) == (plain.lhs, plain.rhs)

    def test_unrestricted_subgraph_is_whole_orbit_graph(self, o1, z4_act):
        sub = restricted_orbit_subgraph(z4_act, gset(4, 0, 1), {"0"}, frozenset(), 2)
        assert sub == o1

    @given(seeds)
    def test_holds_and_subgraph_commutes_on_random_instances(self, seed):
        rng = random.Random(seed)
        act = random_action(rng)
        A = random_group_subset(rng, act.group, 3)
        B = random_space_subset(rng, act, 4)
        E = random_space_subset(rng, act, 3) if rng.random() < 0.8 else frozenset()
        j = rng.randint(1, 2)
        k = rng.randint(j + 1, 3)
        report = verify_restricted_plunnecke(act, A, B, E, j, k)
        assert report.holds
        assert report.details["restricted_subgraph_commutative"]


class TestHeavySubset:
    def test_pinned_z6(self):
        act = translation(6)
        chosen = heavy_subset(act, gset(6, 0, 1), {"0", "3"}, Fraction(1, 2), 1, 2)
        assert chosen <= {"0", "3"}
        assert measure(act, chosen) >= Fraction(1, 2) * Fraction(2, 6)

    def test_tiny_delta_keeps_initial_witness(self):
        act = translation(6)
        chosen = heavy_subset(act, gset(6, 0, 1), {"0", "3"}, Fraction(1, 100), 1, 2)
        assert chosen == {"0"}

    def test_identity_translates(self):
        act = translation(6)
        chosen = heavy_subset(act, gset(6, 0), {"0", "1", "2"}, Fraction(2, 3), 1, 2)
        assert measure(act, chosen) >= Fraction(2, 3) * Fraction(3, 6)

    @given(seeds, st.sampled_from([Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]))
    @settings(max_examples=30)
    def test_postconditions_on_random_instances(self, seed, delta):
        rng = random.Random(seed)
        act = random_action(rng)
        A = random_group_subset(rng, act.group, 3)
        B = random_space_subset(rng, act, 5)
        j = rng.randint(1, 2)
        k = rng.randint(j, 3)
        report = verify_heavy_subset(act, A, B, delta, j, k)
        assert report.holds
        assert report.details["subset_is_heavy"]
        assert report.details["subset_growth_bounded"]


class TestMultiplicativity:
    def test_pinned_two_copies(self):
        act = translation(6)
        report = verify_multiplicativity(act, act, gset(6, 0, 1), gset(6, 0, 1),
                                         {"0", "3"}, {"0", "3"}, "m")
        assert report.holds
        assert report.lhs == report.rhs == 4

    def test_identity_factor(self):
        act = translation(6)
        report = verify_multiplicativity(act, act, gset(6, 0, 1), gset(6, 0),
                                         {"0", "3"}, {"0", "1"}, "i")
        assert report.holds
        assert report.lhs == c(act, gset(6, 0, 1), {"0", "3"}).value * 1

    def test_single_atom_second_base(self):
        act = translation(6)
        report = verify_multiplicativity(act, act, gset(6, 0, 1), gset(6, 0, 2),
                                         {"0", "3"}, {"1"}, "s")
        assert report.holds

    def test_size_limit_refusal(self):
        act = translation(6)
        with pytest.raises(InputError):
            verify_multiplicativity(act, act, gset(6, 0), gset(6, 0),
                                    set(act.atoms), set(act.atoms), "big")

    @given(seeds)
    @settings(max_examples=25)
    def test_exact_equality_on_random_instances(self, seed):
        rng = random.Random(seed)
        act = random_action(rng, max_coords=1, max_n=8)
        act2 = random_action(rng, max_coords=1, max_n=8)
        B = random_space_subset(rng, act, 4)
        B2 = random_space_subset(rng, act2, 4)
        report = verify_multiplicativity(
            act, act2, random_group_subset(rng, act.group, 3),
            random_group_subset(rng, act2.group, 3), B, B2)
        assert report.holds


class TestDifferentSummands:
    def test_pinned_equality(self):
        act = translation(6)
        report = verify_different_summands(act, [gset(6, 0, 1), gset(6, 0, 2)], {"0"}, "p")
        assert report.holds
        assert report.lhs == report.rhs == 4

    def test_single_summand(self):
        act = translation(6)
        assert verify_different_summands(act, [gset(6, 0, 1)], {"0", "3"}).holds

    def test_identity_summands(self):
        act = translation(6)
        report = verify_different_summands(act, [gset(6, 0)] * 3, {"0", "2"})
        assert report.holds
        assert report.lhs == report.rhs == 1

    @given(seeds)
    def test_holds_on_random_instances(self, seed):
        rng = random.Random(seed)
        act = random_action(rng)
        k = rng.randint(1, 3)
        A_list = [random_group_subset(rng, act.group, 3) for _ in range(k)]
        B = random_space_subset(rng, act, 5)
        assert verify_different_summands(act, A_list, B).holds
