from __future__ import annotations
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from math import pi, prod, sin
from typing import Dict, Iterable, List, Optional, Tuple

from ion_compiler.constants import DEFAULT_TAU_1Q_US, LEDGER_DECIMALS
from ion_compiler.cost.decorators import non_negative, rounded
from ion_compiler.ir.gates import Circuit, Gate, GateKind
from ion_compiler.ir.models import ErrorModel, MachineConfig

# coefficients closer than this are the same ledger entry
_MERGE_DECIMALS = 9
_ZERO = 1e-9


class Unit(str, Enum):
    EPSILON = "ε"
    BIG_E = "E"


@dataclass(frozen=True)
class ErrorTerm:
    """
    `multiplicity × coefficient·unit`. `magnitude` pins the unit's value for this term
    (per-pair E overrides); None means the machine-wide value.
    """

    coefficient: float
    unit: Unit
    multiplicity: int = 1
    magnitude: Optional[float] = None

    def render(self) -> str:
        coefficient = f"{self.coefficient:.{LEDGER_DECIMALS}f}".rstrip("0").rstrip(".")
        head = "" if coefficient == "1" else coefficient
        return f"{self.multiplicity} × {head}{self.unit.value}"


_Key = Tuple[float, Unit, Optional[float]]


class ErrorLedger:
    """
    Symbolic multiset of error terms. Terms with equal (coefficient, unit) merge by
    summing multiplicities.
    """

    def __init__(self, terms: Iterable[ErrorTerm] = ()):
        self._counts: Counter = Counter()
        self._exact: Dict[_Key, float] = {}
        for term in terms:
            self.add(term.coefficient, term.unit, term.multiplicity, term.magnitude)

    def add(self, coefficient: float, unit: Unit, multiplicity: int = 1, magnitude: Optional[float] = None) -> None:
        if coefficient < _ZERO or multiplicity <= 0:
            return
        key = (round(coefficient, _MERGE_DECIMALS), unit, magnitude)
        self._exact.setdefault(key, coefficient)
        self._counts[key] += multiplicity

    def __add__(self, other: ErrorLedger) -> ErrorLedger:
        return ErrorLedger(list(self.raw_terms) + list(other.raw_terms))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ErrorLedger) and self.terms == other.terms

    def __len__(self) -> int:
        return sum(self._counts.values())

    def __repr__(self) -> str:
        return f"ErrorLedger({self.render()})"

    @property
    def raw_terms(self) -> List[ErrorTerm]:
        """terms keeping per-pair magnitudes apart"""
        return [
            ErrorTerm(self._exact[key], key[1], count, key[2])
            for key, count in sorted(self._counts.items(), key=_order)
        ]

    @property
    def terms(self) -> List[ErrorTerm]:
        """terms merged for display: eps before E, ascending coefficient"""
        merged: Dict[Tuple[float, Unit], int] = {}
        exact: Dict[Tuple[float, Unit], float] = {}
        for term in self.raw_terms:
            key = (round(term.coefficient, LEDGER_DECIMALS), term.unit)
            exact.setdefault(key, term.coefficient)
            merged[key] = merged.get(key, 0) + term.multiplicity
        return [
            ErrorTerm(exact[key], key[1], count)
            for key, count in sorted(merged.items(), key=lambda item: (_UNIT_ORDER[item[0][1]], item[0][0]))
        ]

    @property
    def is_empty(self) -> bool:
        return not self._counts

    def total(self, unit: Unit) -> float:
        """sum of coefficient × multiplicity over terms in `unit`"""
        return sum(term.coefficient * term.multiplicity for term in self.raw_terms if term.unit == unit)

    def render(self) -> str:
        return " + ".join(term.render() for term in self.terms) if self._counts else "0"

    def to_dict(self) -> Dict[str, int]:
        return {term.render().split(" × ")[1]: term.multiplicity for term in self.terms}


_UNIT_ORDER = {Unit.EPSILON: 0, Unit.BIG_E: 1}


def _order(item):
    (coefficient, unit, magnitude), _ = item
    return _UNIT_ORDER[unit], coefficient, magnitude if magnitude is not None else -1.0


@dataclass(frozen=True)
class CostVector:
    """
    Duration (μs, serial execution) and the error ledgers under both error models,
    with the machine's eps/E values bound for fidelity.
    """

    duration: float = 0.0
    ledger_e1: ErrorLedger = field(default_factory=ErrorLedger)
    ledger_e2: ErrorLedger = field(default_factory=ErrorLedger)
    epsilon: float = 0.0
    big_e: float = 0.0

    def __add__(self, other: CostVector) -> CostVector:
        return CostVector(
            self.duration + other.duration,
            self.ledger_e1 + other.ledger_e1,
            self.ledger_e2 + other.ledger_e2,
            self.epsilon or other.epsilon,
            self.big_e or other.big_e,
        )

    def ledger(self, model: ErrorModel) -> ErrorLedger:
        return self.ledger_e1 if ErrorModel(model) == ErrorModel.E1 else self.ledger_e2

    @property
    @rounded(6)
    def duration_us(self) -> float:
        return self.duration

    @property
    @rounded(6)
    def fidelity_e1(self) -> float:
        return fidelity(self, ErrorModel.E1)

    @property
    @rounded(6)
    def fidelity_e2(self) -> float:
        return fidelity(self, ErrorModel.E2)


@non_negative(_ZERO)
def _e2_coefficient(theta: float) -> float:
    # |theta| mod pi, taken on |theta| folded into [0, 2pi)
    folded = abs(theta) % (2 * pi) % pi
    return 0.0 if pi - folded < _ZERO else folded


def pulse_angle(g: Gate) -> float:
    if g.kind in (GateKind.R, GateKind.RX, GateKind.RY):
        return g.params[0]
    raise TypeError(f"{g.kind.value} is not a single-qubit pulse")


def gate_cost(g: Gate, machine: MachineConfig) -> CostVector:
    """
    R(theta, phi): (|theta| tau1q / pi, |sin theta| eps, (|theta| mod pi) eps)
    XX(chi): (tau2q, |sin 2chi| E, 1 × E)
    RX/RY count as the R pulses they lower to.
    """
    if g.kind in (GateKind.R, GateKind.RX, GateKind.RY):
        theta = pulse_angle(g)
        return CostVector(
            abs(theta) * machine.tau1q / pi,
            ErrorLedger([ErrorTerm(abs(sin(theta)), Unit.EPSILON)]),
            ErrorLedger([ErrorTerm(_e2_coefficient(theta), Unit.EPSILON)]),
            machine.epsilon,
            machine.big_e,
        )
    if g.kind == GateKind.XX:
        a, b = g.qubits
        magnitude = machine.pair_e.get((a, b))
        return CostVector(
            machine.tau2q,
            ErrorLedger([ErrorTerm(abs(sin(2 * g.angle)), Unit.BIG_E, 1, magnitude)]),
            ErrorLedger([ErrorTerm(1.0, Unit.BIG_E, 1, magnitude)]),
            machine.epsilon,
            machine.big_e,
        )
    raise TypeError(f"cannot cost unlowered gate {g.kind.value}; lower it to R/XX pulses first")


def circuit_cost(circuit: Circuit, machine: MachineConfig) -> CostVector:
    total = CostVector(epsilon=machine.epsilon, big_e=machine.big_e)
    for g in circuit.gates:
        total = total + gate_cost(g, machine)
    return total


def fidelity(cost: CostVector, model: ErrorModel = ErrorModel.E1) -> float:
    """product over ledger terms of (1 - coefficient · unit value) ** multiplicity"""
    factors = []
    for term in cost.ledger(model).raw_terms:
        value = term.magnitude
        if value is None:
            value = cost.epsilon if term.unit == Unit.EPSILON else cost.big_e
        factor = 1.0 - term.coefficient * value
        if factor <= 0:
            raise ValueError(f"error term {term.render()} drives fidelity to {factor}")
        factors.append(factor**term.multiplicity)
    return float(prod(factors))


@dataclass(frozen=True)
class Lemma1Bound:
    """
    Upper bounds for a circuit with `n` qubits and `G` XX gates: every piece of wire
    (n + 2G of them) needs at most two R pulses.
    """

    n: int
    G: int
    tau1q: float = DEFAULT_TAU_1Q_US

    @property
    def pieces(self) -> int:
        return self.n + 2 * self.G

    @property
    def gate_bound(self) -> int:
        return 2 * self.pieces

    @property
    def total_gate_bound(self) -> int:
        return self.gate_bound + self.G

    @property
    def time_bound(self) -> float:
        return 2 * self.tau1q * self.pieces

    @property
    def error_bound(self) -> float:
        """in units of eps"""
        return float(self.pieces)


def lemma1_bound(n: int, G: int, tau1q: float = DEFAULT_TAU_1Q_US) -> Lemma1Bound:
    if n < 0 or G < 0:
        raise ValueError(f"qubit and gate counts must be non-negative, got n={n} G={G}")
    return Lemma1Bound(n, G, tau1q)
