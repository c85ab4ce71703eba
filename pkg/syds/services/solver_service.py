"""
Solver Service
Reachability, Convergence and Convergence Guarantee by direct simulation,
configuration-space enumeration and influence-set decomposition
"""

import logging
from typing import List, Optional, Tuple

import networkx as nx

from syds.config import get_settings
from syds.models.errors import CyclicNetworkError, GadgetError, ResourceCapError
from syds.models.schemas import InfluenceSet, ProblemInstance
from syds.models.system import Network, SyDS
from syds.services.dynamics_service import (
    advance,
    configuration_at,
    induced_subsystem,
    orbit,
    project,
)

logger = logging.getLogger(__name__)


def _require(inst: ProblemInstance, start: bool = True, target: bool = False) -> None:
    if start and inst.start is None:
        raise ValueError("This problem needs a start configuration")
    if target and inst.target is None:
        raise ValueError("Reachability needs a target configuration")


def solve_reach(
    inst: ProblemInstance, memory_cap: Optional[int] = None, allow_fallback: bool = True
) -> Tuple[bool, Optional[int]]:
    """
    Decide whether the target appears on the orbit of the start.

    Zero-step reachability counts: start == target gives (True, 0).

    Returns:
        (answer, first step at which the target occurs or None)
    """
    _require(inst, target=True)
    x, y = inst.start, inst.target
    if x == y:
        return True, 0
    trajectory = orbit(
        inst.syds, x, max_steps=inst.horizon, memory_cap=memory_cap, allow_fallback=allow_fallback
    )
    if trajectory.prefix is not None:
        window = trajectory.prefix
        if inst.horizon is not None:
            window = window[: inst.horizon + 1]
        for t, config in enumerate(window):
            if config == y:
                return True, t
        return False, None

    # Brent fallback: no stored prefix, walk the orbit once more
    if trajectory.truncated:
        last = inst.horizon
    else:
        last = trajectory.tail_mu + trajectory.period_lambda - 1
        if inst.horizon is not None:
            last = min(last, inst.horizon)
    compiled = inst.syds.compiled()
    current = x
    for t in range(1, last + 1):
        current = advance(compiled, current)
        if current == y:
            return True, t
    return False, None


def solve_conv(
    inst: ProblemInstance, memory_cap: Optional[int] = None, allow_fallback: bool = True
) -> Tuple[bool, Optional[int]]:
    """
    Decide whether the orbit of the start reaches a fixed point (within the horizon if set).

    Returns:
        (answer, the fixed point reached or None)
    """
    _require(inst)
    max_steps = None if inst.horizon is None else inst.horizon + 1
    trajectory = orbit(
        inst.syds,
        inst.start,
        max_steps=max_steps,
        memory_cap=memory_cap,
        allow_fallback=allow_fallback,
    )
    if not trajectory.reaches_fixed_point:
        return False, None
    return True, configuration_at(inst.syds, trajectory, inst.start, trajectory.tail_mu)


def _allconv_bruteforce(syds: SyDS, max_bits: int) -> bool:
    n = syds.node_count
    if n > max_bits:
        raise ResourceCapError(
            f"Brute-force Convergence Guarantee over {n} nodes exceeds the cap of {max_bits}",
            cap=max_bits,
        )
    compiled = syds.compiled()
    # 0 unknown, 1 reaches a fixed point, 2 on the walk in progress
    status = bytearray(1 << n)
    for start in range(1 << n):
        if status[start]:
            continue
        path = []
        current = start
        while status[current] == 0:
            status[current] = 2
            path.append(current)
            current = advance(compiled, current)
        if status[current] == 2 and advance(compiled, current) != current:
            return False
        for config in path:
            status[config] = 1
    return True


def solve_allconv_bruteforce(inst: ProblemInstance, max_bits: Optional[int] = None) -> bool:
    """True iff every cycle of the successor map is a fixed point (enumerates all 2^n configurations)"""
    cap = max_bits if max_bits is not None else get_settings().max_config_bits
    return _allconv_bruteforce(inst.syds, cap)


def influence_bound(p: int, d: int) -> int:
    """Size bound p * d^p + 1 on an influence set"""
    return p * d**p + 1


def longest_path_length(net: Network) -> Optional[int]:
    """Arcs on a longest directed path, or None if the network has a directed cycle"""
    graph = net.to_networkx()
    if not nx.is_directed_acyclic_graph(graph):
        return None
    return nx.dag_longest_path_length(graph)


def influence_sets(net: Network) -> List[InfluenceSet]:
    """One set per node: the node plus every node with a directed path to it"""
    graph = net.to_networkx()
    sets = [
        InfluenceSet(anchor=v, members=frozenset(nx.ancestors(graph, v) | {v}))
        for v in range(net.node_count)
    ]
    if nx.is_directed_acyclic_graph(graph):
        bound = influence_bound(nx.dag_longest_path_length(graph), net.max_in_degree)
        largest = max((len(s.members) for s in sets), default=0)
        if largest > bound:
            raise GadgetError(f"Influence set of size {largest} exceeds the bound {bound}")
    return sets


def _maximal_sets(net: Network) -> List[InfluenceSet]:
    """Influence sets not contained in another one, visited sinks first"""
    graph = net.to_networkx()
    if not nx.is_directed_acyclic_graph(graph):
        raise CyclicNetworkError(
            "Bounded solver needs an acyclic network: a directed cycle makes the "
            "longest path length undefined"
        )
    sets = influence_sets(net)
    covered = set()
    chosen = []
    for v in reversed(list(nx.topological_sort(graph))):
        if v in covered:
            continue
        chosen.append(sets[v])
        covered |= sets[v].members
    return chosen


def _check_set_size(members, cap: int) -> None:
    if len(members) > cap:
        raise ResourceCapError(
            f"Influence set of {len(members)} nodes exceeds the cap of {cap}", cap=cap
        )


def solve_conv_bounded(inst: ProblemInstance, max_set_size: Optional[int] = None) -> bool:
    """
    Convergence by simulating each influence set's induced sub-SyDS separately.

    The whole system reaches a fixed point iff every sub-SyDS does; with a
    horizon, the global arrival time is the largest sub-SyDS tail.

    Raises:
        CyclicNetworkError: If the network has a directed cycle
        ResourceCapError: If an influence set exceeds max_set_size
    """
    _require(inst)
    cap = max_set_size if max_set_size is not None else get_settings().influence_set_cap
    chosen = _maximal_sets(inst.syds.network)
    logger.debug(f"Bounded conv over {len(chosen)} maximal influence sets")
    max_steps = None if inst.horizon is None else inst.horizon + 1
    for influence in chosen:
        _check_set_size(influence.members, cap)
        sub, mapping = induced_subsystem(inst.syds, influence.members)
        trajectory = orbit(sub, project(inst.start, mapping), max_steps=max_steps)
        if not trajectory.reaches_fixed_point:
            return False
    return True


def solve_allconv_bounded(inst: ProblemInstance, max_set_size: Optional[int] = None) -> bool:
    """
    Convergence Guarantee by enumerating the configurations of each influence set.

    Networks with a directed cycle fall back to solve_allconv_bruteforce.
    """
    cap = max_set_size if max_set_size is not None else get_settings().influence_set_cap
    try:
        chosen = _maximal_sets(inst.syds.network)
    except CyclicNetworkError:
        logger.info("🔁 Network has a directed cycle, falling back to brute-force allconv")
        return solve_allconv_bruteforce(inst)
    for influence in chosen:
        _check_set_size(influence.members, cap)
        sub, _ = induced_subsystem(inst.syds, influence.members)
        if not _allconv_bruteforce(sub, cap):
            logger.debug(f"Influence set of node {influence.anchor} has a non-trivial cycle")
            return False
    return True
