"""
Lowering of logical circuits to RX/RY/XX pulses and the choice of the free
v-signs that decide which RY(±pi/2) pulses meet at gate boundaries.
"""
from dataclasses import dataclass
from math import pi
from typing import Dict, List, Optional, Sequence, Tuple

from ion_compiler.gatelib.decompositions import (
    DecompositionError,
    cnot_gates,
    cxpow_gates,
    cz_gates,
    dec_toffoli,
    dec_toffoli4,
    dec_u2,
    h_gates,
    rz_3pulse_gates,
    z_angle,
)
from ion_compiler.gatelib.matrices import gate_matrix
from ion_compiler.ir.gates import Circuit, Gate, GateKind, Level, Z_AXIS_KINDS, gate, rx, ry
from ion_compiler.ir.models import MachineConfig
from ion_compiler.utils import is_zero_angle

# variable name -> gate-local qubit position whose RY pulses it steers
_FREE_VARS: Dict[GateKind, Dict[str, int]] = {
    GateKind.CNOT: {"v": 0},
    GateKind.CZ: {"v1": 0, "v2": 1},
    GateKind.H: {"v": 0},
    **{kind: {"v": 0} for kind in Z_AXIS_KINDS},
}

SignVars = Dict[str, int]
_Score = Tuple[int, int]


def sign_key(index: int, name: str) -> str:
    return f"{index}.{name}"


def expand_composites(circuit: Circuit) -> Circuit:
    """rewrites CYpow, CZpow, TOFFOLI and TOFFOLI4 into the gates that have pulse decompositions"""
    gates: List[Gate] = []
    for g in circuit.gates:
        if g.kind == GateKind.CYPOW:
            c, t = g.qubits
            gates += [gate(GateKind.SDG, t), gate(GateKind.CXPOW, c, t, params=g.params), gate(GateKind.S, t)]
        elif g.kind == GateKind.CZPOW:
            c, t = g.qubits
            gates += [gate(GateKind.H, t), gate(GateKind.CXPOW, c, t, params=g.params), gate(GateKind.H, t)]
        elif g.kind in (GateKind.TOFFOLI, GateKind.TOFFOLI4):
            body = dec_toffoli() if g.kind == GateKind.TOFFOLI else dec_toffoli4()
            gates += [inner.relabel(g.qubits) for inner in body.gates]
        elif g.kind == GateKind.SWAP:
            raise DecompositionError("SWAP gates must be eliminated before decomposition")
        elif g.kind == GateKind.ORACLE:
            raise DecompositionError(f"oracle `{g.tag}` must be compiled as its own segment")
        else:
            gates.append(g)
    return circuit.with_gates(gates)


def lower_gate(g: Gate, values: Dict[str, int], machine: MachineConfig) -> List[Gate]:
    """RX/RY/XX (and R for U2) pulses for one expanded gate"""
    q = g.qubits[0]
    v = values.get("v", 1)
    if g.kind == GateKind.X:
        return [rx(q, pi)]
    if g.kind == GateKind.Y:
        return [ry(q, pi)]
    if g.kind == GateKind.V:
        return [rx(q, pi / 2)]
    if g.kind in (GateKind.RX, GateKind.RY, GateKind.R, GateKind.XX):
        return [g]
    if g.kind in Z_AXIS_KINDS:
        theta = z_angle(g)
        return [] if is_zero_angle(theta) else rz_3pulse_gates(q, theta, v)
    if g.kind == GateKind.H:
        return h_gates(q, 1 if v == 1 else 2)
    if g.kind == GateKind.U2:
        return [p.relabel([q]) for p in dec_u2(gate_matrix(g)).gates]
    if g.kind == GateKind.CNOT:
        c, t = g.qubits
        return cnot_gates(c, t, machine.sign(c, t), v)
    if g.kind == GateKind.CZ:
        a, b = g.qubits
        return cz_gates(a, b, machine.sign(a, b), values.get("v1", 1), values.get("v2", 1))
    if g.kind == GateKind.CXPOW:
        c, t = g.qubits
        return cxpow_gates(c, t, g.angle, machine.sign(c, t))
    raise DecompositionError(f"no pulse decomposition for {g.kind.value}; expand composites first")


@dataclass(frozen=True)
class _Boundary:
    """first and last pulse of one gate instance on one wire"""

    first: Optional[Gate]
    last: Optional[Gate]
    # first/last single-qubit pulse, looking past XX gates
    first_pulse: Optional[Gate]
    last_pulse: Optional[Gate]


def _boundary(tokens: Sequence[Gate]) -> _Boundary:
    pulses = [t for t in tokens if t.is_single_qubit]
    first = tokens[0] if tokens and tokens[0].is_single_qubit else None
    last = tokens[-1] if tokens and tokens[-1].is_single_qubit else None
    return _Boundary(first, last, pulses[0] if pulses else None, pulses[-1] if pulses else None)


def _meet(left: _Boundary, right: _Boundary) -> _Score:
    """(RY cancellations, other same-axis merges) where two instances meet"""
    a, b = left.last, right.first
    if a is not None and b is not None and a.kind == b.kind == GateKind.RY:
        return (1, 0) if is_zero_angle(a.angle + b.angle) else (0, 1)
    a, b = left.last_pulse, right.first_pulse
    if a is not None and b is not None and a.kind == b.kind == GateKind.RX:
        return 0, 1
    return 0, 0


def _add(x: _Score, y: _Score) -> _Score:
    return x[0] + y[0], x[1] + y[1]


@dataclass
class SignPlan:
    signs: SignVars
    cancellations: int = 0
    merges: int = 0


def sign_plan(circuit: Circuit, machine: MachineConfig) -> SignPlan:
    """
    Chooses every free v per wire by dynamic programming over the chain of gate
    instances touching the wire. Each free variable only moves RY pulses on the wire
    it belongs to, so wires are independent. Ties keep +1.
    """
    expanded = expand_composites(circuit)
    plan = SignPlan({})
    for q in range(expanded.n):
        instances = [(i, g) for i, g in enumerate(expanded.gates) if g.acts_on(q)]
        if not instances:
            continue
        options: List[List[Tuple[Optional[str], int, _Boundary]]] = []
        for i, g in instances:
            owned = [name for name, pos in _FREE_VARS.get(g.kind, {}).items() if g.qubits[pos] == q]
            name = owned[0] if owned else None
            choices = (1, -1) if name else (1,)
            row = []
            for value in choices:
                tokens = [t for t in lower_gate(g, {name: value} if name else {}, machine) if t.acts_on(q)]
                row.append((name, value, _boundary(tokens)))
            options.append(row)

        # best[k][c]: best score from instance k onwards with instance k at choice c
        best: List[List[_Score]] = [[(0, 0)] * len(row) for row in options]
        for k in range(len(options) - 2, -1, -1):
            for c, (_, _, left) in enumerate(options[k]):
                best[k][c] = max(
                    (_add(_meet(left, right), best[k + 1][c2]) for c2, (_, _, right) in enumerate(options[k + 1])),
                )

        choice = _first_max(best[0])
        total = best[0][choice]
        picks = [choice]
        for k in range(1, len(options)):
            left = options[k - 1][picks[-1]][2]
            scores = [_add(_meet(left, right), best[k][c]) for c, (_, _, right) in enumerate(options[k])]
            picks.append(_first_max(scores))

        for (i, _), row, c in zip(instances, options, picks):
            name, value, _ = row[c]
            if name:
                plan.signs[sign_key(i, name)] = value
        plan.cancellations += total[0]
        plan.merges += total[1]
    return plan


def _first_max(scores: Sequence[_Score]) -> int:
    best = 0
    for i, score in enumerate(scores):
        if score > scores[best]:
            best = i
    return best


def choose_signs(circuit: Circuit, machine: MachineConfig) -> SignVars:
    return sign_plan(circuit, machine).signs


def decompose(circuit: Circuit, machine: MachineConfig, signs: Optional[SignVars] = None) -> Circuit:
    """pulse-level RX/RY/XX circuit for a logical circuit already placed on machine ions"""
    if circuit.n > machine.n:
        raise ValueError(f"circuit uses {circuit.n} qubits but the machine has {machine.n} ions")
    expanded = expand_composites(circuit)
    if signs is None:
        signs = choose_signs(expanded, machine)
    gates: List[Gate] = []
    for i, g in enumerate(expanded.gates):
        values = {name: signs.get(sign_key(i, name), 1) for name in _FREE_VARS.get(g.kind, {})}
        gates += lower_gate(g, values, machine)
    return Circuit(circuit.n, gates, Level.PULSE)
