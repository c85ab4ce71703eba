"""
Tests for the SyDS model, successor dynamics and orbit analysis
"""

import pytest

from syds.models.errors import OrbitMemoryError
from syds.models.system import LocalFunction, Network, SyDS
from syds.services.dynamics_service import (
    configuration_at,
    induced_subsystem,
    is_fixed_point,
    orbit,
    project,
    simulate,
    successor,
    to_configuration,
    validate,
)
from syds.tools.path_counter_tool import gen_path_counter
from syds.utils.bit_utils import from_bitstring, pack, to_bitstring, unpack


def identity_system(n: int) -> SyDS:
    net = Network(n, [[(v + 1) % n] if n > 1 else [] for v in range(n)])
    return SyDS(net, [LocalFunction.identity(len(ins)) for ins in net.in_neighbors])


def not_system() -> SyDS:
    return SyDS(Network(1, [[]]), [LocalFunction("10")])


def test_bit_helpers():
    """Bit k of a configuration is the state of node k; bit strings list node 0 first"""
    assert pack([1, 0, 1]) == 0b101
    assert unpack(0b110, 3) == [0, 1, 1]
    assert to_bitstring(0b01, 2) == "10"
    assert from_bitstring("011") == 0b110
    with pytest.raises(ValueError):
        pack([0, 2])
    with pytest.raises(ValueError):
        from_bitstring("01x")


def test_validate_minimal_system():
    assert validate(SyDS(Network(1, [[]]), [LocalFunction("01")])) == []


def test_validate_reports_arity_mismatch():
    syds = SyDS(Network(2, [[], [0]]), [LocalFunction("01"), LocalFunction("01")])
    violations = validate(syds)
    assert len(violations) == 1
    assert violations[0].startswith("arity mismatch")


def test_validate_reports_self_loop_and_duplicates():
    net = Network(2, [[0], [0, 0]], names=["a", "a"])
    syds = SyDS(net, [LocalFunction("0110"), LocalFunction("01101001")])
    kinds = {v.split(":")[0] for v in validate(syds)}
    assert {"self-loop", "parallel arcs", "duplicate name"} <= kinds


def test_validate_reports_bad_table():
    syds = SyDS(Network(1, [[]]), [LocalFunction("0x")])
    assert any(v.startswith("bad table") for v in validate(syds))


def test_lookup_uses_self_bit_as_most_significant():
    # table over (self, in0): output 1 only for self=1, in0=0
    f = LocalFunction("0010")
    assert f.lookup(1, [0]) == 1
    assert f.lookup(0, [1]) == 0
    assert f.arity == 2


def test_path_counter_successor_cycle():
    """00 -> 11 -> 01 -> 10 -> 00 on the two-node path counter (node 0 first)"""
    syds, start = gen_path_counter(1)
    sequence = ["00", "11", "01", "10", "00"]
    x = start
    for expected_now, expected_next in zip(sequence, sequence[1:]):
        assert to_bitstring(x, 2) == expected_now
        x = successor(syds, x)
        assert to_bitstring(x, 2) == expected_next


def test_successor_accepts_sequences():
    syds, _ = gen_path_counter(1)
    assert successor(syds, [0, 0]) == 0b11
    with pytest.raises(ValueError):
        successor(syds, [0, 0, 0])
    with pytest.raises(ValueError):
        to_configuration(syds, 4)


@pytest.mark.parametrize("x", range(8))
def test_identity_system_is_fixed_everywhere(x):
    syds = identity_system(3)
    assert successor(syds, x) == x
    assert is_fixed_point(syds, x)
    trajectory = orbit(syds, x)
    assert (trajectory.tail_mu, trajectory.period_lambda) == (0, 1)


def test_path_counter_has_no_fixed_point():
    syds, _ = gen_path_counter(2)
    assert not any(is_fixed_point(syds, x) for x in range(16))


def test_orbit_examples():
    syds, start = gen_path_counter(2)
    trajectory = orbit(syds, start)
    assert (trajectory.tail_mu, trajectory.period_lambda) == (0, 8)
    assert trajectory.prefix == simulate(syds, start, 7)

    trajectory = orbit(not_system(), 0)
    assert (trajectory.tail_mu, trajectory.period_lambda) == (0, 2)
    assert not trajectory.reaches_fixed_point


def test_orbit_is_rho_shaped_on_random_systems(rng, make_syds):
    """x^(mu+lambda) = x^mu and the prefix is pairwise distinct, exhaustively per system"""
    for _ in range(40):
        n = rng.randint(1, 8)
        syds = make_syds(rng, n, max_in=3)
        for x in range(1 << n):
            t = orbit(syds, x)
            assert t.tail_mu + t.period_lambda <= 1 << n
            history = simulate(syds, x, t.tail_mu + t.period_lambda)
            assert history[-1] == history[t.tail_mu]
            assert len(set(history[:-1])) == len(history) - 1
            assert t.prefix == history[:-1]


def test_orbit_brent_fallback_matches_hash_set(rng, make_syds):
    for _ in range(30):
        n = rng.randint(3, 10)
        syds = make_syds(rng, n, max_in=3)
        x = rng.randrange(1 << n)
        exact = orbit(syds, x)
        fallback = orbit(syds, x, memory_cap=2)
        assert (fallback.tail_mu, fallback.period_lambda) == (exact.tail_mu, exact.period_lambda)


def test_orbit_memory_cap_without_fallback():
    syds, start = gen_path_counter(3)
    with pytest.raises(OrbitMemoryError) as exc_info:
        orbit(syds, start, memory_cap=4, allow_fallback=False)
    assert exc_info.value.cap == 4


def test_orbit_truncation():
    syds, start = gen_path_counter(2)
    t = orbit(syds, start, max_steps=5)
    assert t.truncated
    assert t.prefix == simulate(syds, start, 5)
    with pytest.raises(ValueError):
        configuration_at(syds, t, start, 3)


def test_configuration_at_wraps_around_the_cycle(rng, make_syds):
    syds = make_syds(rng, 6, max_in=2)
    for x in (0, 17, 63):
        t = orbit(syds, x)
        history = simulate(syds, x, 100)
        for step in (0, 5, 37, 100):
            assert configuration_at(syds, t, x, step) == history[step]


def test_simulate_rejects_negative_steps():
    with pytest.raises(ValueError):
        simulate(not_system(), 0, -1)


def test_induced_subsystem_requires_closed_set():
    syds, _ = gen_path_counter(2)
    with pytest.raises(ValueError):
        induced_subsystem(syds, [1, 2])
    sub, mapping = induced_subsystem(syds, [0, 1])
    assert mapping == [0, 1]
    assert sub.node_count == 2


def test_projection_closure_on_random_dags(rng, make_syds):
    """The induced sub-SyDS trajectory equals the projected full trajectory"""
    for _ in range(50):
        n = rng.randint(2, 9)
        syds = make_syds(rng, n, max_in=2, acyclic=True)
        prefix = list(range(rng.randint(1, n)))
        sub, mapping = induced_subsystem(syds, prefix)
        x = rng.randrange(1 << n)
        full = simulate(syds, x, 20)
        partial = simulate(sub, project(x, mapping), 20)
        assert [project(c, mapping) for c in full] == partial


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
