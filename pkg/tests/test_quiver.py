import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qtetra.quiver import (
    Seed,
    SeedError,
    WeightedQuiver,
    apply_vertex_permutation,
    builtin_as_reached,
    builtin_names,
    builtin_quiver,
    mutate_along,
    mutate_seed,
    mutate_weighted,
    parse_permutation,
    transposition,
)

NAMES = ["J121", "J212", "J1212", "J2121", "B2ofC2", "B3ofC2", "J123121", "J321323", "J123123123", "J321321321"]


def test_all_builtins_present():
    assert sorted(NAMES) == builtin_names()


@pytest.mark.parametrize("name", NAMES)
def test_builtin_is_skew_symmetrizable(name):
    s = builtin_quiver(name)
    for i in range(1, s.n + 1):
        for j in range(1, s.n + 1):
            assert s.bhat(i, j) == -s.bhat(j, i)


def test_j121_entries():
    s = builtin_quiver("J121")
    assert s.b(1, 3) == Fraction(1, 2)
    assert s.b(4, 5) == 1
    assert s.b(2, 4) == 1


def test_j121_mutates_to_j212():
    assert mutate_seed(builtin_quiver("J121"), 4) == builtin_quiver("J212")


def test_j1212_mutates_to_j2121():
    assert mutate_along(builtin_quiver("J1212"), [2, 5, 2]) == builtin_quiver("J2121")


def test_j1212_intermediate_quivers():
    after2 = mutate_seed(builtin_quiver("J1212"), 2)
    assert after2 == builtin_quiver("B2ofC2")
    assert mutate_seed(after2, 5) == builtin_quiver("B3ofC2")


@pytest.mark.parametrize("name", NAMES)
def test_mutation_is_an_involution(name):
    s = builtin_quiver(name)
    for k in s.mutable:
        assert mutate_seed(mutate_seed(s, k), k) == s


@pytest.mark.parametrize("name", NAMES)
def test_weighted_mutation_matches_matrix_mutation(name):
    s = builtin_quiver(name)
    for k in s.mutable:
        via_sigma = mutate_weighted(WeightedQuiver.from_seed(s), k).to_seed()
        assert via_sigma == mutate_seed(s, k)


def test_weighted_triangle_gains_arrow():
    # weights (2, 2, 1), arrows 2->1, 1->3, 3->2; mutating at 3 reverses all three
    left = WeightedQuiver.from_arrows((2, 2, 1), solid=[(2, 1), (1, 3), (3, 2)])
    right = WeightedQuiver.from_arrows((2, 2, 1), solid=[(1, 2), (3, 1), (2, 3)])
    assert mutate_weighted(left, 3) == right


def test_equal_weight_triangle_loses_arrow():
    left = WeightedQuiver.from_arrows((1, 1, 1), solid=[(2, 1), (1, 3), (3, 2)])
    out = mutate_weighted(left, 3)
    assert out.sigma2[0][1] == 0 and out.sigma2[1][0] == 0


def test_frozen_vertex_rejected():
    with pytest.raises(SeedError):
        mutate_seed(builtin_quiver("J121"), 1)


def test_final_quiver_of_tetra_sequence():
    s = mutate_along(builtin_quiver("J123121"), [8, 4, 7, 8])
    assert apply_vertex_permutation(s, transposition(4, 7, 9)) == builtin_quiver("J321323")


def test_final_quiver_of_reflection_sequence():
    s = mutate_along(builtin_quiver("J123123123"), [10, 2, 6, 2, 7, 11, 3, 6, 3, 2, 10, 2, 11])
    assert s == builtin_as_reached("J321321321")
    assert s != builtin_quiver("J321321321")  # only equal up to the drawn labelling


def test_identity_permutation():
    s = builtin_quiver("J1212")
    assert apply_vertex_permutation(s, None) == s


@given(st.sampled_from(NAMES), st.data())
def test_transposition_twice_is_identity(name, data):
    s = builtin_quiver(name)
    i = data.draw(st.integers(1, s.n))
    j = data.draw(st.integers(1, s.n))
    t = transposition(i, j, s.n) if i != j else parse_permutation(None, s.n)
    assert apply_vertex_permutation(apply_vertex_permutation(s, t), t) == s


@given(st.sampled_from(NAMES), st.lists(st.integers(0, 20), max_size=6))
def test_random_mutation_walks_stay_skew(name, picks):
    s = builtin_quiver(name)
    for p in picks:
        s = mutate_seed(s, s.mutable[p % len(s.mutable)])
    for i in range(1, s.n + 1):
        for j in range(1, s.n + 1):
            assert s.bhat(i, j) == -s.bhat(j, i)


def test_bad_permutation():
    with pytest.raises(SeedError):
        parse_permutation("1:2", 3)


@pytest.mark.parametrize("name", NAMES)
def test_json_round_trip(name):
    s = builtin_quiver(name)
    obj = json.loads(json.dumps(s.to_json()))
    assert obj["n"] == s.n
    assert Seed.from_json(obj) == s


def test_json_rejects_wrong_n():
    obj = builtin_quiver("J121").to_json()
    obj["n"] = 4
    with pytest.raises(SeedError):
        Seed.from_json(obj)


def test_skew_symmetrizability_enforced():
    with pytest.raises(SeedError):
        Seed(((0, 2), (2, 0)), (1, 1))
