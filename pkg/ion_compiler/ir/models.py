from enum import Enum
from itertools import combinations
from typing import Dict, List, NewType, Tuple

from pydantic import BaseModel

from ion_compiler.constants import (
    DEFAULT_BIG_E,
    DEFAULT_EPSILON,
    DEFAULT_N_QUBITS,
    DEFAULT_NEGATIVE_PAIRS,
    DEFAULT_TAU_1Q_US,
    DEFAULT_TAU_2Q_US,
)


Pair = Tuple[int, int]
ChiSigns = Dict[NewType("IonPair", Pair), NewType("ChiSign", int)]
PairErrors = Dict[NewType("IonPair", Pair), NewType("TwoQubitError", float)]


class MachineConfigError(ValueError):
    pass


class ErrorModel(str, Enum):
    # slope based: |sin theta| eps, |sin 2chi| E
    E1 = "e1"
    # angle proportional: (|theta| mod pi) eps, constant E
    E2 = "e2"


class MachineConfig(BaseModel):
    """
    Trapped-ion machine description. Qubits are 0-indexed here; files and reports
    name ions 1..n.

    Args:
        n (int): Number of ions.
        tau1q (float): Microseconds per pi of single-qubit rotation.
        tau2q (float): Microseconds per XX gate.
        epsilon (float): Single-qubit error magnitude.
        big_e (float): Two-qubit error magnitude.
        chi_sign (ChiSigns): Sign of the XX interaction for every ion pair.
        pair_e (PairErrors): Optional per-pair two-qubit error overrides.
        error_model (ErrorModel): Error model used for fidelity ranking.
    """

    n: int
    tau1q: float
    tau2q: float
    epsilon: float
    big_e: float
    chi_sign: ChiSigns
    pair_e: PairErrors = {}
    error_model: ErrorModel = ErrorModel.E1

    def model_post_init(self, __context):
        if self.n < 1:
            raise MachineConfigError(f"machine needs at least one ion, got n={self.n}")
        if self.tau1q <= 0 or self.tau2q <= 0:
            raise MachineConfigError(
                f"pulse durations must be positive, got tau1q={self.tau1q} tau2q={self.tau2q}"
            )
        for name, value in (("epsilon", self.epsilon), ("E", self.big_e)):
            if not 0 <= value < 1:
                raise MachineConfigError(f"{name} must lie in [0, 1), got {value}")

        signs = {}
        for (i, j), s in self.chi_sign.items():
            if s not in (1, -1):
                raise MachineConfigError(f"sign for pair ({i + 1},{j + 1}) must be +1 or -1, got {s}")
            key = (min(i, j), max(i, j))
            if key in signs and signs[key] != s:
                raise MachineConfigError(f"asymmetric sign for pair ({i + 1},{j + 1})")
            signs[key] = s
        missing = [pair for pair in combinations(range(self.n), 2) if pair not in signs]
        if missing:
            names = ", ".join(f"{i + 1}{j + 1}" for i, j in missing)
            raise MachineConfigError(f"sign table is missing pairs: {names}")
        self.chi_sign = {**signs, **{(j, i): s for (i, j), s in signs.items()}}

        pair_e = {}
        for (i, j), value in self.pair_e.items():
            if not 0 <= value < 1:
                raise MachineConfigError(f"E for pair ({i + 1},{j + 1}) must lie in [0, 1), got {value}")
            pair_e[(i, j)] = pair_e[(j, i)] = value
        self.pair_e = pair_e

    def sign(self, i: int, j: int) -> int:
        return self.chi_sign[(i, j)]

    def pair_error(self, i: int, j: int) -> float:
        return self.pair_e.get((i, j), self.big_e)

    @property
    def pairs(self) -> List[Pair]:
        return list(combinations(range(self.n), 2))


def default_machine() -> MachineConfig:
    negative = {(i - 1, j - 1) for i, j in DEFAULT_NEGATIVE_PAIRS}
    return MachineConfig(
        n=DEFAULT_N_QUBITS,
        tau1q=DEFAULT_TAU_1Q_US,
        tau2q=DEFAULT_TAU_2Q_US,
        epsilon=DEFAULT_EPSILON,
        big_e=DEFAULT_BIG_E,
        chi_sign={
            pair: -1 if pair in negative else 1
            for pair in combinations(range(DEFAULT_N_QUBITS), 2)
        },
    )
