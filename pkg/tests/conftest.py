"""
Shared fixtures: project root on sys.path and seeded random instance factories
"""

import logging
import random
import sys
from pathlib import Path
from typing import List, Optional

import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from syds.config import reset_settings
from syds.models.formulas import CnfFormula, QbfFormula, QUANTIFIERS
from syds.models.schemas import ProblemInstance
from syds.models.system import LocalFunction, Network, SyDS


def random_table(rng: random.Random, arity: int) -> LocalFunction:
    return LocalFunction("".join(rng.choice("01") for _ in range(1 << arity)))


def random_syds(
    rng: random.Random, n: int, max_in: int = 2, acyclic: bool = False
) -> SyDS:
    """Random network on n nodes; acyclic ones only take arcs from lower ids"""
    in_neighbors: List[List[int]] = []
    for v in range(n):
        pool = list(range(v)) if acyclic else [u for u in range(n) if u != v]
        k = rng.randint(0, min(max_in, len(pool)))
        in_neighbors.append(rng.sample(pool, k))
    names = [f"n{v}" for v in range(n)]
    functions = [random_table(rng, len(ins) + 1) for ins in in_neighbors]
    return SyDS(Network(n, in_neighbors, names), functions)


def random_instance(
    rng: random.Random, n: int, max_in: int = 2, acyclic: bool = False, horizon: Optional[int] = None
) -> ProblemInstance:
    syds = random_syds(rng, n, max_in, acyclic)
    return ProblemInstance(
        syds=syds,
        start=rng.randrange(1 << n),
        target=rng.randrange(1 << n),
        horizon=horizon,
    )


def random_clause(rng: random.Random, variables: int) -> List[int]:
    return [rng.randint(1, variables) * rng.choice((1, -1)) for _ in range(3)]


def random_qbf(rng: random.Random, variables: int, clauses: int) -> QbfFormula:
    return QbfFormula(
        [rng.choice(QUANTIFIERS) for _ in range(variables)],
        [random_clause(rng, variables) for _ in range(clauses)],
    )


def random_cnf(rng: random.Random, variables: int, clauses: int) -> CnfFormula:
    return CnfFormula(variables, [random_clause(rng, variables) for _ in range(clauses)])


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test starts from default caps, unaffected by CLI overrides or a local .env"""
    for name in (
        "SYDS_ORBIT_MEMORY_CAP",
        "SYDS_MAX_CONFIG_BITS",
        "SYDS_TREEDEPTH_EXACT_CAP",
        "SYDS_LOGIC_VARIABLE_CAP",
        "SYDS_INFLUENCE_SET_CAP",
        "SYDS_TUPLE_POSITION_CAP",
        "SYDS_LOG_LEVEL",
    ):
        monkeypatch.delenv(name, raising=False)
    root = logging.getLogger()
    level = root.level
    reset_settings()
    yield
    reset_settings()
    root.setLevel(level)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def make_syds():
    return random_syds


@pytest.fixture
def make_instance():
    return random_instance


@pytest.fixture
def make_qbf():
    return random_qbf


@pytest.fixture
def make_cnf():
    return random_cnf
