from __future__ import annotations
from dataclasses import dataclass, field, replace
from enum import Enum
from math import pi
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ion_compiler.utils import normalize_angle


class GateKind(str, Enum):
    """Gate kinds. The value doubles as the circuit-file mnemonic."""

    H = "h"
    X = "x"
    Y = "y"
    Z = "z"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    V = "v"
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    U2 = "u2"
    CNOT = "cnot"
    CZ = "cz"
    CXPOW = "cxp"
    CYPOW = "cyp"
    CZPOW = "czp"
    TOFFOLI = "toffoli"
    TOFFOLI4 = "toffoli4"
    SWAP = "swap"
    R = "r"
    XX = "xx"
    ORACLE = "oracle"


class Level(str, Enum):
    LOGICAL = "logical"
    # RX/RY/R/XX mix produced by decomposition, before pulse lowering
    PULSE = "pulse"
    PHYSICAL = "physical"


ARITY: Dict[GateKind, int] = {
    **{
        kind: 1
        for kind in (
            GateKind.H, GateKind.X, GateKind.Y, GateKind.Z, GateKind.S, GateKind.SDG,
            GateKind.T, GateKind.TDG, GateKind.V, GateKind.RX, GateKind.RY, GateKind.RZ,
            GateKind.U2, GateKind.R,
        )
    },
    **{
        kind: 2
        for kind in (
            GateKind.CNOT, GateKind.CZ, GateKind.CXPOW, GateKind.CYPOW,
            GateKind.CZPOW, GateKind.SWAP, GateKind.XX,
        )
    },
    GateKind.TOFFOLI: 3,
    GateKind.TOFFOLI4: 4,
}

N_PARAMS: Dict[GateKind, int] = {
    GateKind.RX: 1,
    GateKind.RY: 1,
    GateKind.RZ: 1,
    GateKind.U2: 4,
    GateKind.R: 2,
    GateKind.CXPOW: 1,
    GateKind.CYPOW: 1,
    GateKind.CZPOW: 1,
    GateKind.XX: 1,
}

PHYSICAL_KINDS = frozenset({GateKind.R, GateKind.XX})
PULSE_KINDS = frozenset({GateKind.RX, GateKind.RY, GateKind.R, GateKind.XX})
Z_AXIS_KINDS = frozenset(
    {GateKind.RZ, GateKind.Z, GateKind.S, GateKind.SDG, GateKind.T, GateKind.TDG}
)
POWER_KINDS = frozenset({GateKind.CXPOW, GateKind.CYPOW, GateKind.CZPOW})
SELF_INVERSE_KINDS = frozenset(
    {
        GateKind.H, GateKind.X, GateKind.Y, GateKind.Z, GateKind.CNOT, GateKind.CZ,
        GateKind.SWAP, GateKind.TOFFOLI, GateKind.TOFFOLI4,
    }
)
_DAGGER = {
    GateKind.S: GateKind.SDG,
    GateKind.SDG: GateKind.S,
    GateKind.T: GateKind.TDG,
    GateKind.TDG: GateKind.T,
}


@dataclass(frozen=True)
class Gate:
    """
    A single gate application.

    Args:
        kind (GateKind): The gate kind.
        qubits (Tuple[int, ...]): Ordered operands; controls first, target last.
        params (Tuple[float, ...]): Angles in radians, or the power alpha for controlled roots.
        tag (str, optional): Oracle name for ORACLE gates.
    """

    kind: GateKind
    qubits: Tuple[int, ...]
    params: Tuple[float, ...] = ()
    tag: Optional[str] = None

    @property
    def arity(self) -> int:
        return len(self.qubits)

    @property
    def angle(self) -> float:
        return self.params[0]

    @property
    def is_single_qubit(self) -> bool:
        return self.kind != GateKind.ORACLE and len(self.qubits) == 1

    @property
    def is_multi_qubit(self) -> bool:
        return len(self.qubits) > 1 or self.kind == GateKind.ORACLE

    def acts_on(self, qubit: int) -> bool:
        return qubit in self.qubits

    def with_params(self, *params: float) -> Gate:
        return replace(self, params=tuple(float(p) for p in params))

    def relabel(self, mapping: Sequence[int]) -> Gate:
        return replace(self, qubits=tuple(mapping[q] for q in self.qubits))

    def __str__(self) -> str:
        from ion_compiler.utils import format_angle

        parts = [self.kind.value]
        if self.tag:
            parts.append(self.tag)
        parts += [str(q) for q in self.qubits]
        if self.kind in POWER_KINDS:
            parts += [f"{p:g}" for p in self.params]
        else:
            parts += [format_angle(p) for p in self.params]
        return " ".join(parts)


def rx(qubit: int, theta: float) -> Gate:
    return Gate(GateKind.RX, (qubit,), (float(theta),))


def ry(qubit: int, theta: float) -> Gate:
    return Gate(GateKind.RY, (qubit,), (float(theta),))


def rz(qubit: int, theta: float) -> Gate:
    return Gate(GateKind.RZ, (qubit,), (float(theta),))


def r(qubit: int, theta: float, phi: float) -> Gate:
    return Gate(GateKind.R, (qubit,), (float(theta), float(phi)))


def xx(a: int, b: int, chi: float) -> Gate:
    return Gate(GateKind.XX, (a, b), (float(chi),))


def gate(kind: GateKind, *qubits: int, params: Sequence[float] = (), tag: Optional[str] = None) -> Gate:
    return Gate(kind, tuple(qubits), tuple(float(p) for p in params), tag)


@dataclass
class Circuit:
    """
    Ordered gate list over `n` qubits. Gates run left to right, so the circuit
    unitary is the product of gate matrices in reverse order.

    Args:
        n (int): Qubit count.
        gates (List[Gate]): Gates in circuit order.
        level (Level): Logical, pulse (RX/RY/R/XX mix) or physical (R/XX only).
        oracles (Dict[str, Circuit]): Bodies for ORACLE tags, over local qubits 0..k-1.
    """

    n: int
    gates: List[Gate] = field(default_factory=list)
    level: Level = Level.LOGICAL
    oracles: Dict[str, "Circuit"] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __add__(self, other: Circuit) -> Circuit:
        if other.n != self.n:
            raise ValueError(f"cannot concatenate a {self.n}-qubit and a {other.n}-qubit circuit")
        level = self.level if self.level == other.level else Level.LOGICAL
        return Circuit(self.n, self.gates + other.gates, level, {**self.oracles, **other.oracles})

    def add(self, kind: GateKind, *qubits: int, params: Sequence[float] = (), tag: Optional[str] = None) -> Circuit:
        self.gates.append(gate(kind, *qubits, params=params, tag=tag))
        return self

    def with_gates(self, gates: Sequence[Gate], level: Optional[Level] = None) -> Circuit:
        return Circuit(self.n, list(gates), level or self.level, dict(self.oracles))

    def relabel(self, mapping: Sequence[int], n: Optional[int] = None) -> Circuit:
        """moves logical qubit `i` onto qubit `mapping[i]` of an `n`-qubit register"""
        return Circuit(
            n if n is not None else self.n,
            [g.relabel(mapping) for g in self.gates],
            self.level,
            dict(self.oracles),
        )

    def count(self, kind: GateKind) -> int:
        return sum(1 for g in self.gates if g.kind == kind)

    @property
    def single_qubit_count(self) -> int:
        return sum(1 for g in self.gates if g.is_single_qubit)

    @property
    def two_qubit_count(self) -> int:
        return sum(1 for g in self.gates if len(g.qubits) == 2)

    @property
    def xx_count(self) -> int:
        return self.count(GateKind.XX)

    @property
    def active_qubits(self) -> List[int]:
        return sorted({q for g in self.gates for q in g.qubits})

    def wire(self, qubit: int) -> List[int]:
        """indices of the gates touching `qubit`, in circuit order"""
        return [i for i, g in enumerate(self.gates) if qubit in g.qubits]


def inverse(g: Gate) -> Gate:
    """
    gate whose matrix is the conjugate transpose of `g`'s, expressed within the gate set
    (up to global phase for V)
    """
    if g.kind == GateKind.ORACLE:
        raise ValueError(f"oracle `{g.tag}` is opaque and has no inverse here")
    if g.kind in SELF_INVERSE_KINDS:
        return g
    if g.kind in _DAGGER:
        return replace(g, kind=_DAGGER[g.kind])
    if g.kind == GateKind.V:
        return rx(g.qubits[0], -pi / 2)
    if g.kind in (GateKind.RX, GateKind.RY, GateKind.RZ, GateKind.XX) or g.kind in POWER_KINDS:
        return g.with_params(-g.angle)
    if g.kind == GateKind.R:
        theta, phi = g.params
        return g.with_params(theta, phi - pi)
    if g.kind == GateKind.U2:
        a, b, c, d = g.params
        return g.with_params(-a, b, c + pi, -d)
    raise ValueError(f"no inverse rule for {g.kind}")


def normalize_r(g: Gate) -> Gate:
    """
    R(theta, phi) = -R(theta - 2pi, phi): folds theta into (-pi, pi] so the pulse never
    lasts longer than tau1q. phi is folded into (-pi, pi] as well.
    """
    if g.kind != GateKind.R:
        raise TypeError(f"normalize_r expects an R gate, not {g.kind}")
    theta, phi = g.params
    theta = normalize_angle(theta)
    if abs(theta) < 1e-12:
        theta = 0.0
    return g.with_params(theta, normalize_angle(phi))


def expand_oracles(circuit: Circuit) -> Circuit:
    """inlines every ORACLE gate with its registered body"""
    gates: List[Gate] = []
    for g in circuit.gates:
        if g.kind != GateKind.ORACLE:
            gates.append(g)
            continue
        if g.tag not in circuit.oracles:
            raise ValueError(f"unknown oracle tag `{g.tag}`")
        body = expand_oracles(circuit.oracles[g.tag])
        if body.n != len(g.qubits):
            raise ValueError(
                f"oracle `{g.tag}` acts on {body.n} qubits but is applied to {len(g.qubits)}"
            )
        gates.extend(inner.relabel(g.qubits) for inner in body.gates)
    return Circuit(circuit.n, gates, circuit.level)
