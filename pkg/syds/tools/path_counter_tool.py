"""
Path Counter Tool
Directed-path SyDS whose nodes have exponentially growing periods, and checks
on the tuples its significant nodes run through
"""

import logging
import re
from typing import Dict, List, NamedTuple, Optional, Tuple

from syds.config import get_settings
from syds.models.errors import GadgetError, ResourceCapError
from syds.models.system import LocalFunction, Network, SyDS
from syds.services.dynamics_service import simulate

logger = logging.getLogger(__name__)

# Local functions, called as fn(self_state, predecessor_state)
NOT_SELF = LocalFunction.from_callable(1, lambda s: 1 - s)
EQUIVALENCE = LocalFunction.from_callable(2, lambda s, p: 1 if s == p else 0)
PRED_AND_NOT_SELF = LocalFunction.from_callable(2, lambda s, p: p * (1 - s))


def gen_path_counter(n: int) -> Tuple[SyDS, int]:
    """
    Build the path v_1 -> v_2 -> ... -> v_2n and its all-zero start.

    v_1 negates itself, v_2i tests equality with its predecessor and
    v_2i+1 becomes 1 iff its predecessor is 1 and it is 0.

    Returns:
        (system, start configuration); node j-1 is v_j
    """
    if n < 1:
        raise ValueError(f"Path counter needs n >= 1, got {n}")
    size = 2 * n
    in_neighbors = [[]] + [[j - 1] for j in range(1, size)]
    names = [f"v{j}" for j in range(1, size + 1)]
    functions = [NOT_SELF]
    for j in range(2, size + 1):
        functions.append(EQUIVALENCE if j % 2 == 0 else PRED_AND_NOT_SELF)
    return SyDS(Network(size, in_neighbors, names), functions), 0


def period_length(j: int) -> int:
    """Period of node v_j: 2^(floor(j/2) + 1)"""
    if j < 1:
        raise ValueError(f"Node index must be >= 1, got {j}")
    return 2 ** (j // 2 + 1)


def node_sequence(history: List[int], j: int) -> str:
    """States of v_j along a simulated history, as a bit string"""
    return "".join(str((x >> (j - 1)) & 1) for x in history)


def period_vector(j: int) -> str:
    """Simulated states of v_j over one period starting from the all-zero configuration"""
    syds, start = gen_path_counter((j + 1) // 2)
    history = simulate(syds, start, period_length(j) - 1)
    return node_sequence(history, j)


_PIECE = re.compile(r"\(([01]+)\)(?:\^(\d+))?")


def expand_period_notation(text: str) -> str:
    """
    Expand chunk notation such as "(010)^2(11)" into "01001011".

    Raises:
        ValueError: If the text is not a sequence of (bits) or (bits)^k pieces
    """
    compact = text.replace(" ", "")
    pieces = []
    position = 0
    for match in _PIECE.finditer(compact):
        if match.start() != position:
            break
        pieces.append(match.group(1) * int(match.group(2) or 1))
        position = match.end()
    if position != len(compact) or not pieces:
        raise ValueError(f"Invalid period notation: {text!r}")
    return "".join(pieces)


class PeriodTemplate(NamedTuple):
    pattern: str
    chunk_sum: int  # number of repeated three-bit chunks the counts add up to
    fixed_length: int  # bits outside those chunks

    def matches(self, sequence: str) -> bool:
        return (
            re.fullmatch(self.pattern, sequence) is not None
            and len(sequence) == 3 * self.chunk_sum + self.fixed_length
        )


def period_template(j: int) -> PeriodTemplate:
    """
    Shape of the period vector of v_j for j >= 9, by j mod 4.

    j = 4k:    (010)^l (110)^p (100)^q (10),  l+p+q = (2^(2k+1) - 2) / 3
    j = 4k+1:  (001)^p (010)^q (01),          p+q   = (2^(2k+1) - 2) / 3
    j = 4k+2:  (010)^l (011)^p (001)^q (0),   l+p+q = (2^(2k+2) - 1) / 3
    j = 4k+3:  (001)^p (000) (100)^q (1),     p+q   = (2^(2k+2) - 4) / 3
    """
    if j < 9:
        raise ValueError(f"Period templates describe v_j for j >= 9, got {j}")
    k, case = divmod(j, 4)
    if case == 0:
        return PeriodTemplate(r"(?:010)*(?:110)*(?:100)*10", (2 ** (2 * k + 1) - 2) // 3, 2)
    if case == 1:
        return PeriodTemplate(r"(?:001)*(?:010)*01", (2 ** (2 * k + 1) - 2) // 3, 2)
    if case == 2:
        return PeriodTemplate(r"(?:010)*(?:011)*(?:001)*0", (2 ** (2 * k + 2) - 1) // 3, 1)
    return PeriodTemplate(r"(?:001)*000(?:100)*1", (2 ** (2 * k + 2) - 4) // 3, 4)


def significant_nodes(i: int) -> List[int]:
    """Indices of v_1, v_2, v_4, ..., v_(2i-2)"""
    return [0] + [2 * k - 1 for k in range(1, i)]


def check_tuple_positions(
    n: int, max_n: Optional[int] = None
) -> Dict[int, Dict[Tuple[int, ...], int]]:
    """
    Tabulate, for every i in 1..n+1, the offset q at which each tuple over the
    first i significant nodes occurs (steps 2^i * p + q for every p).

    Raises:
        ResourceCapError: If n exceeds the simulation cap
        GadgetError: If some tuple position is not periodic or not a bijection
    """
    cap = max_n if max_n is not None else get_settings().tuple_position_cap
    if n < 1:
        raise ValueError(f"Path counter needs n >= 1, got {n}")
    if n > cap:
        raise ResourceCapError(f"Tuple positions for n={n} exceed the cap of n={cap}", cap=cap)
    syds, start = gen_path_counter(n)
    history = simulate(syds, start, 2 * 2 ** (n + 1) - 1)

    positions: Dict[int, Dict[Tuple[int, ...], int]] = {}
    for i in range(1, n + 2):
        nodes = significant_nodes(i)
        period = 2**i
        table: Dict[Tuple[int, ...], int] = {}
        for q in range(period):
            tuples = {
                tuple((history[t] >> v) & 1 for v in nodes)
                for t in range(q, len(history), period)
            }
            if len(tuples) != 1:
                raise GadgetError(f"Significant tuple at offset {q} is not {period}-periodic (i={i})")
            (tup,) = tuples
            if tup in table:
                raise GadgetError(f"Tuple {tup} occurs at offsets {table[tup]} and {q} (i={i})")
            table[tup] = q
        if table.get(tuple(0 for _ in nodes)) != 0:
            raise GadgetError(f"All-zero tuple is not at offset 0 (i={i})")
        positions[i] = table
    logger.debug(f"Tuple positions verified for n={n}")
    return positions
