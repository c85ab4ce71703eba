from pydantic import BaseModel, ConfigDict, Field, model_validator
from typing import Dict, FrozenSet, List, Literal, Optional, Tuple

from syds.models.system import SyDS


class ProblemType:
    REACH = "reach"
    CONV = "conv"
    ALLCONV = "allconv"


class ProblemInstance(BaseModel):
    """A SyDS together with the configurations a decision problem asks about"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    syds: SyDS
    start: Optional[int] = None
    target: Optional[int] = None
    horizon: Optional[int] = Field(None, ge=0)

    @model_validator(mode="after")
    def _check_configurations(self) -> "ProblemInstance":
        limit = 1 << self.syds.node_count
        for label, value in (("start", self.start), ("target", self.target)):
            if value is not None and not 0 <= value < limit:
                raise ValueError(
                    f"{label} configuration {value} does not fit {self.syds.node_count} nodes"
                )
        return self

    @property
    def node_count(self) -> int:
        return self.syds.node_count


class Trajectory(BaseModel):
    """Summary of the rho-shaped orbit of a start configuration"""

    tail_mu: int = Field(..., ge=0)
    period_lambda: int = Field(..., ge=0)  # 0 only when truncated
    prefix: Optional[List[int]] = None
    truncated: bool = False
    steps: int = 0

    @property
    def reaches_fixed_point(self) -> bool:
        return not self.truncated and self.period_lambda == 1


class InfluenceSet(BaseModel):
    anchor: int
    members: FrozenSet[int]


class KernelReport(BaseModel):
    removed_nodes: int = 0
    classes: List[List[Tuple[int, int]]] = Field(default_factory=list)
    discarded_as_trivial_no: bool = False
    original_nodes: int = 0
    kernel_nodes: int = 0


class SolveResult(BaseModel):
    problem: Literal["reach", "conv", "allconv"]
    method: str
    answer: bool
    steps: Optional[int] = None
    fixed_point: Optional[str] = None


# Document schemas
class FunctionEntry(BaseModel):
    order: List[str] = Field(..., min_length=1)
    table: str = Field(..., pattern=r"^[01]+$")


class SydsDocument(BaseModel):
    domain: int
    nodes: List[str]
    arcs: List[Tuple[str, str]] = Field(default_factory=list)
    functions: Dict[str, FunctionEntry]
    start: Optional[Dict[str, Literal[0, 1]]] = None
    target: Optional[Dict[str, Literal[0, 1]]] = None
    horizon: Optional[int] = Field(None, ge=0)


class TdDocument(BaseModel):
    parent: Dict[str, Optional[str]]
