"""
Tests for the path counter gadget: period vectors and significant tuples
"""

import pytest

from syds.models.errors import ResourceCapError
from syds.services.dynamics_service import orbit, simulate
from syds.tools.path_counter_tool import (
    expand_period_notation,
    gen_path_counter,
    node_sequence,
    period_length,
    period_template,
    period_vector,
    significant_nodes,
    check_tuple_positions,
)

PERIOD_VECTORS = {
    1: "(01)",
    2: "(011)(0)",
    3: "(001)(0)",
    4: "(010)^2(11)",
    5: "(001)^2(01)",
    6: "(010)^2(011)^3(0)",
    7: "(001)^5(0)",
    8: "(010)^6(110)^4(11)",
    9: "(001)^6(010)^4(01)",
    10: "(010)^6(011)^11(001)^4(0)",
    11: "(001)^17(000)(100)^3(1)",
    12: "(010)^18(110)^21(100)^3(10)",
}


def test_expand_period_notation():
    assert expand_period_notation("(010)^2(11)") == "01001011"
    assert expand_period_notation("(01)") == "01"
    with pytest.raises(ValueError):
        expand_period_notation("010")
    with pytest.raises(ValueError):
        expand_period_notation("(01)x")


def test_gen_path_counter_shape():
    syds, start = gen_path_counter(3)
    assert syds.node_count == 6
    assert start == 0
    assert syds.network.names[0] == "v1"
    assert syds.network.in_neighbors == ((), (0,), (1,), (2,), (3,), (4,))
    with pytest.raises(ValueError):
        gen_path_counter(0)


@pytest.mark.parametrize("j", sorted(PERIOD_VECTORS))
def test_period_vectors_over_256_steps(j):
    syds, start = gen_path_counter(6)
    history = simulate(syds, start, 255)
    expected = expand_period_notation(PERIOD_VECTORS[j])
    assert len(expected) == period_length(j)
    assert node_sequence(history, j) == expected * (256 // len(expected))


@pytest.mark.parametrize("j", [1, 4, 7])
def test_period_vector_helper(j):
    assert period_vector(j) == expand_period_notation(PERIOD_VECTORS[j])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_path_counter_orbit_period(n):
    syds, start = gen_path_counter(n)
    trajectory = orbit(syds, start)
    assert trajectory.tail_mu == 0
    assert trajectory.period_lambda == 2 ** (n + 1)


@pytest.mark.parametrize("j", [9, 10, 11, 12, 13, 14, 15, 16])
def test_period_templates_match_simulation(j):
    template = period_template(j)
    assert template.matches(period_vector(j))


@pytest.mark.parametrize("j", [9, 10, 11, 12])
def test_period_template_chunk_counts(j):
    template = period_template(j)
    assert 3 * template.chunk_sum + template.fixed_length == period_length(j)
    assert template.matches(expand_period_notation(PERIOD_VECTORS[j]))


def test_period_template_domain():
    with pytest.raises(ValueError):
        period_template(8)


def test_significant_nodes():
    assert significant_nodes(1) == [0]
    assert significant_nodes(4) == [0, 1, 3, 5]


def test_tuple_positions_are_bijective():
    positions = check_tuple_positions(10)
    for i in range(1, 12):
        table = positions[i]
        assert len(table) == 2**i
        assert sorted(table.values()) == list(range(2**i))
        assert table[tuple([0] * i)] == 0


def test_tuple_positions_small_case():
    positions = check_tuple_positions(3)
    assert sorted(positions[3].values()) == list(range(8))
    # v1 alone alternates 0, 1
    assert positions[1] == {(0,): 0, (1,): 1}


def test_tuple_positions_cap():
    with pytest.raises(ResourceCapError):
        check_tuple_positions(5, max_n=4)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
