"""
Oracle Service
Explicit successor functional graph over the whole configuration space
"""

import logging
from typing import Optional

import numpy as np

from syds.config import get_settings
from syds.models.errors import ResourceCapError
from syds.models.system import SyDS

logger = logging.getLogger(__name__)


class TransitionGraph:
    """successor_index[i] is the index of the successor of configuration i"""

    def __init__(self, successor_index: np.ndarray, node_count: int):
        self.successor_index = successor_index
        self.node_count = node_count

    @property
    def size(self) -> int:
        return int(self.successor_index.shape[0])

    def __len__(self) -> int:
        return self.size


def estimate_memory_bytes(node_count: int) -> int:
    """Peak bytes for building (index, successor and one scratch array) and the allconv check"""
    itemsize = 4 if node_count <= 30 else 8
    return 4 * itemsize * (1 << node_count)


def build_transition_graph(syds: SyDS, max_bits: Optional[int] = None) -> TransitionGraph:
    """
    Tabulate the successor of every configuration.

    Raises:
        ResourceCapError: If the node count exceeds max_bits (default from settings)
    """
    n = syds.node_count
    cap = max_bits if max_bits is not None else get_settings().max_config_bits
    if n > cap:
        raise ResourceCapError(
            f"Transition graph over {n} nodes exceeds the cap of {cap} nodes", cap=cap
        )
    estimate = estimate_memory_bytes(n)
    logger.info(f"🧮 Building transition graph: 2^{n} configurations, ~{estimate / 2**20:.1f} MiB")

    dtype = np.int32 if n <= 30 else np.int64
    configs = np.arange(1 << n, dtype=dtype)
    successor_index = np.zeros(1 << n, dtype=dtype)
    for v, ins, values in syds.compiled():
        index = (configs >> v) & 1
        for u in ins:
            index = (index << 1) | ((configs >> u) & 1)
        table = np.array(values, dtype=dtype)
        successor_index |= table[index] << v
    return TransitionGraph(successor_index, n)


def oracle_reach(tg: TransitionGraph, x: int, y: int, horizon: Optional[int] = None) -> bool:
    """True iff y lies on the forward orbit of x (within horizon steps when given)"""
    succ = tg.successor_index
    visited = np.zeros(tg.size, dtype=bool)
    current, t = x, 0
    while not visited[current]:
        if current == y:
            return True
        if horizon is not None and t >= horizon:
            return False
        visited[current] = True
        current = int(succ[current])
        t += 1
    return False


def oracle_conv(tg: TransitionGraph, x: int, horizon: Optional[int] = None) -> bool:
    """True iff the orbit of x ends in a self-loop (reached within horizon steps when given)"""
    succ = tg.successor_index
    visited = np.zeros(tg.size, dtype=bool)
    current, t = x, 0
    while not visited[current]:
        if int(succ[current]) == current:
            return True
        if horizon is not None and t >= horizon:
            return False
        visited[current] = True
        current = int(succ[current])
        t += 1
    return False


def oracle_allconv(tg: TransitionGraph) -> bool:
    """True iff every cycle of the functional graph is a self-loop"""
    succ = tg.successor_index
    # After n doublings every index has moved 2^n steps and sits on its cycle
    jump = succ.copy()
    for _ in range(tg.node_count):
        jump = jump[jump]
    cycle_nodes = np.unique(jump)
    return bool(np.all(succ[cycle_nodes] == cycle_nodes))
