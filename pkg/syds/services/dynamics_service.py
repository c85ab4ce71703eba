"""
Dynamics Service
Validation, synchronous successor, fixed points and orbit (cycle) analysis
"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from syds.config import get_settings
from syds.models.errors import OrbitMemoryError
from syds.models.schemas import Trajectory
from syds.models.system import LocalFunction, Network, SyDS
from syds.utils.bit_utils import pack

logger = logging.getLogger(__name__)

ConfigurationLike = Union[int, Sequence[int]]


def validate(syds: SyDS) -> List[str]:
    """
    Report every structural violation of a SyDS.

    Returns:
        List of human-readable violations, empty iff the system is well formed
    """
    violations: List[str] = []
    net = syds.network
    n = net.node_count

    seen_names: Dict[str, int] = {}
    for v, name in enumerate(net.names):
        if name is None:
            continue
        if name in seen_names:
            violations.append(
                f"duplicate name: '{name}' used by nodes {seen_names[name]} and {v}"
            )
        else:
            seen_names[name] = v

    for v, ins in enumerate(net.in_neighbors):
        label = net.label(v)
        for u in ins:
            if not 0 <= u < n:
                violations.append(f"unknown node: in-neighbor {u} of '{label}' is out of range")
            elif u == v:
                violations.append(f"self-loop: arc ({label},{label})")
        if len(set(ins)) != len(ins):
            violations.append(f"parallel arcs: node '{label}' lists an in-neighbor twice")

        function = syds.functions[v]
        if any(ch not in "01" for ch in function.table):
            violations.append(f"bad table: node '{label}' table has characters other than 0/1")
        expected = 1 << (len(ins) + 1)
        if len(function.table) != expected:
            violations.append(
                f"arity mismatch: node '{label}' has {len(ins)} in-neighbors, "
                f"expected table length {expected}, got {len(function.table)}"
            )
    return violations


def to_configuration(syds: SyDS, x: ConfigurationLike) -> int:
    """
    Normalize a configuration given as an int or a per-node sequence.

    Raises:
        ValueError: If the configuration does not match the system's node count
    """
    n = syds.node_count
    if isinstance(x, int):
        if not 0 <= x < (1 << n):
            raise ValueError(f"Configuration {x} does not fit {n} nodes")
        return x
    if len(x) != n:
        raise ValueError(f"Configuration length {len(x)} does not match node count {n}")
    return pack(x)


def advance(compiled, x: int) -> int:
    y = 0
    for v, ins, values in compiled:
        index = (x >> v) & 1
        for u in ins:
            index = (index << 1) | ((x >> u) & 1)
        if values[index]:
            y |= 1 << v
    return y


def successor(syds: SyDS, x: ConfigurationLike) -> int:
    """Apply every local function synchronously to configuration x"""
    return advance(syds.compiled(), to_configuration(syds, x))


def is_fixed_point(syds: SyDS, x: ConfigurationLike) -> bool:
    x = to_configuration(syds, x)
    return advance(syds.compiled(), x) == x


def simulate(syds: SyDS, x: ConfigurationLike, steps: int) -> List[int]:
    """Return the configurations x^0 .. x^steps"""
    if steps < 0:
        raise ValueError(f"steps must be non-negative, got {steps}")
    compiled = syds.compiled()
    current = to_configuration(syds, x)
    history = [current]
    for _ in range(steps):
        current = advance(compiled, current)
        history.append(current)
    return history


def orbit(
    syds: SyDS,
    x: ConfigurationLike,
    max_steps: Optional[int] = None,
    memory_cap: Optional[int] = None,
    allow_fallback: bool = True,
) -> Trajectory:
    """
    Find the tail length mu and period lambda of the orbit of x.

    Visited configurations are kept in a dict until memory_cap entries are
    stored; past that the orbit is recomputed with Brent's constant-memory
    cycle finding and no prefix is returned.

    Args:
        syds: The system
        x: Start configuration
        max_steps: If given and x^(mu+lambda) lies beyond it, the result is truncated
        memory_cap: Stored configuration cap (defaults to settings)
        allow_fallback: If False, hitting the memory cap raises OrbitMemoryError

    Returns:
        Trajectory with tail_mu, period_lambda and the first mu+lambda configurations
    """
    x0 = to_configuration(syds, x)
    if memory_cap is None:
        memory_cap = get_settings().orbit_memory_cap
    if max_steps is not None and max_steps < 0:
        raise ValueError(f"max_steps must be non-negative, got {max_steps}")
    compiled = syds.compiled()

    seen: Dict[int, int] = {x0: 0}
    history = [x0]
    current = x0
    t = 0
    while True:
        if max_steps is not None and t >= max_steps:
            return Trajectory(
                tail_mu=t, period_lambda=0, prefix=history, truncated=True, steps=t
            )
        if len(seen) >= memory_cap:
            if not allow_fallback:
                raise OrbitMemoryError(
                    f"Orbit stored {len(seen)} configurations without repeating "
                    f"(cap {memory_cap}) and fallback is disabled",
                    cap=memory_cap,
                )
            logger.warning(
                f"⚠️  orbit memory cap {memory_cap} reached, switching to Brent cycle finding"
            )
            return _brent_orbit(compiled, x0, max_steps)
        current = advance(compiled, current)
        t += 1
        if current in seen:
            mu = seen[current]
            return Trajectory(tail_mu=mu, period_lambda=t - mu, prefix=history, steps=t)
        seen[current] = t
        history.append(current)


def _brent_orbit(compiled, x0: int, max_steps: Optional[int]) -> Trajectory:
    # Brent detects a repeat within 3(mu+lambda) hare steps
    limit = None if max_steps is None else 3 * (max_steps + 1)
    power = lam = 1
    tortoise = x0
    hare = advance(compiled, x0)
    hare_steps = 1
    while tortoise != hare:
        if limit is not None and hare_steps > limit:
            return Trajectory(
                tail_mu=max_steps, period_lambda=0, truncated=True, steps=max_steps
            )
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = advance(compiled, hare)
        hare_steps += 1
        lam += 1

    tortoise = hare = x0
    for _ in range(lam):
        hare = advance(compiled, hare)
    mu = 0
    while tortoise != hare:
        tortoise = advance(compiled, tortoise)
        hare = advance(compiled, hare)
        mu += 1

    if max_steps is not None and mu + lam > max_steps:
        return Trajectory(tail_mu=max_steps, period_lambda=0, truncated=True, steps=max_steps)
    return Trajectory(tail_mu=mu, period_lambda=lam, prefix=None, steps=mu + lam)


def configuration_at(syds: SyDS, trajectory: Trajectory, x: ConfigurationLike, t: int) -> int:
    """Configuration at step t of a fully analysed orbit, using the rho shape"""
    if trajectory.truncated:
        raise ValueError("Cannot index a truncated trajectory beyond its prefix")
    mu, lam = trajectory.tail_mu, trajectory.period_lambda
    index = t if t < mu + lam else mu + (t - mu) % lam
    if trajectory.prefix is not None:
        return trajectory.prefix[index]
    return simulate(syds, x, index)[-1]


def induced_subsystem(syds: SyDS, members: Iterable[int]) -> Tuple[SyDS, List[int]]:
    """
    Restrict a SyDS to a node set closed under in-neighbors.

    Returns:
        (sub-SyDS, mapping) where mapping[k] is the original index of new node k

    Raises:
        ValueError: If the set is not closed under in-neighbors
    """
    mapping = sorted(set(members))
    position = {old: new for new, old in enumerate(mapping)}
    net = syds.network
    in_neighbors = []
    for old in mapping:
        ins = net.in_neighbors[old]
        missing = [u for u in ins if u not in position]
        if missing:
            raise ValueError(
                f"Node set is not closed under in-neighbors: '{net.label(old)}' "
                f"depends on {[net.label(u) for u in missing]}"
            )
        in_neighbors.append([position[u] for u in ins])
    sub_net = Network(len(mapping), in_neighbors, [net.names[old] for old in mapping])
    functions: List[LocalFunction] = [syds.functions[old] for old in mapping]
    return SyDS(sub_net, functions), mapping


def project(x: int, mapping: Sequence[int]) -> int:
    """Restrict configuration x to the nodes listed in mapping (new index order)"""
    y = 0
    for new, old in enumerate(mapping):
        if (x >> old) & 1:
            y |= 1 << new
    return y
