from dataclasses import dataclass
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel


class Objective(str, Enum):
    TIME = "time"
    ERROR = "error"
    BALANCED = "balanced"


class RxDirection(str, Enum):
    LEFT = "left"
    RIGHT = "right"


_OBJECTIVE_PASS = {
    Objective.TIME: "fold_triples",
    Objective.ERROR: "commute_rx",
    Objective.BALANCED: "rewrite_pairs",
}


class RewritePlan(BaseModel):
    """
    What the optimizer aims for and which passes it runs.

    Args:
        objective (Objective): Figure of merit the passes reduce.
        lam (float): Weight of duration against error for the balanced objective.
        rx_direction (RxDirection): Side the RX sweep pushes rotations to.
        passes (List[str], optional): Pass names overriding the default order.
    """

    objective: Objective = Objective.TIME
    lam: float = 0.5
    rx_direction: RxDirection = RxDirection.LEFT
    passes: Optional[List[str]] = None

    def model_post_init(self, __context):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"balanced weight must lie in [0, 1], got {self.lam}")

    @classmethod
    def from_objective(cls, text: str) -> "RewritePlan":
        """parses `time`, `error`, `balanced` or `balanced=<lam>`"""
        name, _, weight = text.strip().lower().partition("=")
        try:
            objective = Objective(name)
        except ValueError:
            raise ValueError(f"unknown objective `{text}`; use time, error or balanced=<lam>") from None
        if weight and objective != Objective.BALANCED:
            raise ValueError(f"objective `{name}` takes no weight")
        return cls(objective=objective, lam=float(weight) if weight else 0.5)

    @property
    def pass_names(self) -> List[str]:
        if self.passes is not None:
            return list(self.passes)
        return [
            "cancel_merge",
            _OBJECTIVE_PASS[self.objective],
            "resynthesize_runs",
            "bound_pulses",
            "lower_pulses",
            "layer_pulses",
        ]

    @property
    def label(self) -> str:
        if self.objective == Objective.BALANCED:
            return f"balanced={self.lam:g}"
        return self.objective.value


@dataclass
class PassStats:
    name: str
    gates_before: int
    gates_after: int
    rewrites: int = 0
    duration_delta: float = 0.0
    error_delta: float = 0.0
    reverted: bool = False
    note: str = ""

    @property
    def gates_removed(self) -> int:
        return self.gates_before - self.gates_after
