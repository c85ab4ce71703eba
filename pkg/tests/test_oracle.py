"""
Tests for the explicit transition-graph oracle
"""

import numpy as np
import pytest

from syds.models.errors import ResourceCapError
from syds.models.system import LocalFunction, Network, SyDS
from syds.services.dynamics_service import orbit, successor
from syds.services.oracle_service import (
    build_transition_graph,
    estimate_memory_bytes,
    oracle_allconv,
    oracle_conv,
    oracle_reach,
)
from syds.tools.path_counter_tool import gen_path_counter


def test_transition_graph_matches_successor(rng, make_syds):
    for _ in range(20):
        n = rng.randint(1, 9)
        syds = make_syds(rng, n, max_in=3)
        tg = build_transition_graph(syds)
        assert len(tg) == 1 << n
        expected = np.array([successor(syds, x) for x in range(1 << n)])
        assert np.array_equal(tg.successor_index, expected)


def test_transition_graph_cap():
    syds, _ = gen_path_counter(3)
    with pytest.raises(ResourceCapError) as exc_info:
        build_transition_graph(syds, max_bits=5)
    assert exc_info.value.cap == 5


def test_memory_estimate_grows_with_nodes():
    assert estimate_memory_bytes(10) == 16 * 1024
    assert estimate_memory_bytes(11) == 2 * estimate_memory_bytes(10)


def test_oracle_reach_on_path_counter():
    syds, start = gen_path_counter(2)
    tg = build_transition_graph(syds)
    assert oracle_reach(tg, start, start)
    assert not oracle_reach(tg, start, 0b1111)
    fifth = start
    for _ in range(5):
        fifth = successor(syds, fifth)
    assert oracle_reach(tg, start, fifth)
    assert oracle_reach(tg, start, fifth, horizon=5)
    assert not oracle_reach(tg, start, fifth, horizon=4)


def test_oracle_conv_and_allconv():
    identity = SyDS(Network(2, [[1], [0]]), [LocalFunction.identity(1)] * 2)
    tg = build_transition_graph(identity)
    assert all(oracle_conv(tg, x) for x in range(4))
    assert oracle_allconv(tg)

    tg = build_transition_graph(SyDS(Network(1, [[]]), [LocalFunction("10")]))
    assert not oracle_conv(tg, 0)
    assert not oracle_allconv(tg)


def test_oracle_conv_respects_horizon():
    # a two-node shift register 1 -> 0 settles at 00 after two steps from 01
    syds = SyDS(Network(2, [[1], []]), [LocalFunction("0101"), LocalFunction("00")])
    tg = build_transition_graph(syds)
    assert oracle_conv(tg, 0b10, horizon=2)
    assert not oracle_conv(tg, 0b10, horizon=1)
    assert oracle_conv(tg, 0b10)


def test_oracle_allconv_matches_orbits(rng, make_syds):
    for _ in range(60):
        n = rng.randint(1, 8)
        syds = make_syds(rng, n, max_in=2)
        tg = build_transition_graph(syds)
        expected = all(orbit(syds, x).period_lambda == 1 for x in range(1 << n))
        assert oracle_allconv(tg) == expected


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
