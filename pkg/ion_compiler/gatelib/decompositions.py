"""
Pulse-level decompositions of the logical gate set over RX/RY/R and XX gates.
Every decomposition is written in circuit order over local qubits 0..n-1;
for controlled gates qubit 0 is the control.
"""
from __future__ import annotations
from dataclasses import dataclass, field
from math import atan2, cos, pi
from typing import Dict, List, Optional, Sequence

import numpy as np

from ion_compiler.constants import TOL
from ion_compiler.cost.ledger import CostVector, gate_cost
from ion_compiler.gatelib.matrices import (
    H,
    controlled,
    gate_matrix,
    rz_matrix,
    x_power,
    y_power,
    z_power,
)
from ion_compiler.ir.gates import (
    Circuit,
    Gate,
    GateKind,
    Level,
    Z_AXIS_KINDS,
    gate,
    normalize_r,
    r,
    rx,
    ry,
    xx,
)
from ion_compiler.ir.models import MachineConfig, default_machine
from ion_compiler.linalg import apply_unitary, global_phase, is_unitary
from ion_compiler.utils import is_zero_angle, normalize_angle, sign


class DecompositionError(ValueError):
    pass


SignVars = Dict[str, int]


@dataclass
class Decomposition:
    """
    A pulse circuit realizing `target` up to `global_phase`:
    product of gate matrices (right to left) = global_phase · target.

    Args:
        gates (List[Gate]): RX/RY/R/XX gates in circuit order.
        n (int): Number of local qubits.
        target (np.ndarray): The unitary being decomposed.
        free_vars (SignVars): The sign choices this instance was built with.
    """

    gates: List[Gate]
    n: int
    target: np.ndarray
    free_vars: SignVars = field(default_factory=dict)

    global_phase: complex = field(init=False)
    cost_hint: CostVector = field(init=False)

    def __post_init__(self):
        self.global_phase = self._set_global_phase()
        self.cost_hint = self._set_cost_hint()

    def _set_global_phase(self) -> complex:
        return complex(global_phase(self.matrix(), self.target))

    def _set_cost_hint(self) -> CostVector:
        return self.cost(default_machine())

    def matrix(self) -> np.ndarray:
        out = np.eye(2**self.n, dtype=complex)
        for g in self.gates:
            out = apply_unitary(out, gate_matrix(g), g.qubits, self.n)
        return out

    def cost(self, machine: MachineConfig) -> CostVector:
        total = CostVector(epsilon=machine.epsilon, big_e=machine.big_e)
        for g in self.gates:
            total = total + gate_cost(g, machine)
        return total

    def circuit(self) -> Circuit:
        return Circuit(self.n, list(self.gates), Level.PULSE)

    @property
    def pulse_count(self) -> int:
        return sum(1 for g in self.gates if g.is_single_qubit)


def _nonzero(gates: Sequence[Gate]) -> List[Gate]:
    return [g for g in gates if not (g.kind in (GateKind.RX, GateKind.RY, GateKind.XX) and abs(g.angle) < TOL)]


def _check_sign(name: str, value: int) -> None:
    if value not in (1, -1):
        raise DecompositionError(f"{name} must be +1 or -1, got {value}")


def dec_rx(theta: float) -> Decomposition:
    return Decomposition([r(0, theta, 0.0)], 1, gate_matrix(rx(0, theta)))


def dec_ry(theta: float) -> Decomposition:
    return Decomposition([r(0, theta, pi / 2)], 1, gate_matrix(ry(0, theta)))


def rz_3pulse_gates(qubit: int, theta: float, v: int) -> List[Gate]:
    return [ry(qubit, v * pi / 2), rx(qubit, v * theta), ry(qubit, -v * pi / 2)]


def dec_rz_3pulse(theta: float, v: int = 1) -> Decomposition:
    """RZ(theta) = RY(v pi/2) RX(v theta) RY(-v pi/2) in circuit order, for either v"""
    _check_sign("v", v)
    return Decomposition(rz_3pulse_gates(0, theta, v), 1, rz_matrix(theta), {"v": v})


def dec_rz_2pulse(theta: float, x: float = 0.0) -> Decomposition:
    """RZ(theta) = -R(pi, x) R(pi, x - theta/2); `x` is free"""
    return Decomposition([r(0, pi, x - theta / 2), r(0, pi, x)], 1, rz_matrix(theta), {})


def h_gates(qubit: int, variant: int) -> List[Gate]:
    if variant == 1:
        return [rx(qubit, pi), ry(qubit, -pi / 2)]
    if variant == 2:
        return [ry(qubit, pi / 2), rx(qubit, -pi)]
    raise DecompositionError(f"Hadamard variant must be 1 or 2, got {variant}")


def dec_h(variant: int = 1) -> Decomposition:
    return Decomposition(h_gates(0, variant), 1, H, {"variant": variant})


def u2_params(u: np.ndarray) -> tuple:
    """
    (a, b, c, d) with u = e^{id} [[e^{ia} cos b, e^{ic} sin b], [-e^{-ic} sin b, e^{-ia} cos b]],
    b in [0, pi/2]. c is set to 0 when sin b = 0 and a to 0 when cos b = 0.
    """
    if u.shape != (2, 2) or not is_unitary(u, 1e-8):
        raise DecompositionError("u2_params expects a 2x2 unitary")
    d = float(np.angle(np.linalg.det(u))) / 2
    w = u * np.exp(-1j * d)
    b = atan2(abs(w[0, 1]), abs(w[0, 0]))
    a = float(np.angle(w[0, 0])) if abs(w[0, 0]) > TOL else 0.0
    c = float(np.angle(w[0, 1])) if abs(w[0, 1]) > TOL else 0.0
    return a, b, c, d


def dec_u2(u: np.ndarray) -> Decomposition:
    """
    at most two R pulses: R(2b + pi, a - c - pi/2) then R(-pi, -c - pi/2), each folded
    into (-pi, pi]; pulses whose angle folds to 0 are dropped
    """
    a, b, c, _ = u2_params(u)
    pulses = [
        normalize_r(r(0, 2 * b + pi, a - c - pi / 2)),
        normalize_r(r(0, -pi, -c - pi / 2)),
    ]
    return Decomposition([p for p in pulses if abs(p.params[0]) > TOL], 1, u)


def single_pulse(u: np.ndarray) -> Optional[Gate]:
    """the R pulse equal to `u` up to phase, when one exists"""
    a, b, c, _ = u2_params(u)
    if abs(cos(b)) < TOL:
        return normalize_r(r(0, pi, -c - pi / 2))
    if is_zero_angle(a):
        return normalize_r(r(0, 2 * b, -c - pi / 2))
    if is_zero_angle(a - pi):
        return normalize_r(r(0, 2 * b, pi / 2 - c))
    return None


def cnot_gates(control: int, target: int, s: int, v: int) -> List[Gate]:
    return [
        ry(control, v * pi / 2),
        xx(control, target, s * pi / 4),
        rx(control, -s * pi / 2),
        rx(target, -v * s * pi / 2),
        ry(control, -v * pi / 2),
    ]


def dec_cnot(s: int, v: int = 1) -> Decomposition:
    """`s` is the hardware sign of the ion pair, `v` is free"""
    _check_sign("s", s)
    _check_sign("v", v)
    return Decomposition(cnot_gates(0, 1, s, v), 2, gate_matrix(gate(GateKind.CNOT, 0, 1)), {"v": v})


def cxpow_gates(control: int, target: int, alpha: float, s_hw: int) -> List[Gate]:
    # s follows sign(alpha) so that the XX argument s·alpha·pi/4 carries the hardware sign
    s = s_hw * sign(alpha) if alpha != 0 else s_hw
    return _nonzero(
        [
            ry(control, -s * pi / 2),
            xx(control, target, s * alpha * pi / 4),
            rx(control, -s * alpha * pi / 2),
            rx(target, alpha * pi / 2),
            ry(control, s * pi / 2),
        ]
    )


def _check_power(alpha: float) -> None:
    if not -1 - TOL <= alpha <= 1 + TOL:
        raise DecompositionError(f"power {alpha} outside [-1, 1]")


def dec_cxpow(alpha: float, s_hw: int) -> Decomposition:
    """controlled-X^alpha with a single XX gate"""
    _check_power(alpha)
    _check_sign("s_hw", s_hw)
    return Decomposition(cxpow_gates(0, 1, alpha, s_hw), 2, controlled(x_power(alpha)))


def cypow_gates(control: int, target: int, alpha: float, s_hw: int, v_pre: int, v_post: int) -> List[Gate]:
    # S^dagger on the target, controlled-X^alpha, S on the target
    return (
        rz_3pulse_gates(target, -pi / 2, v_pre)
        + cxpow_gates(control, target, alpha, s_hw)
        + rz_3pulse_gates(target, pi / 2, v_post)
    )


def dec_cypow(alpha: float, s_hw: int, v_pre: int = 1, v_post: int = 1) -> Decomposition:
    _check_power(alpha)
    _check_sign("s_hw", s_hw)
    return Decomposition(
        cypow_gates(0, 1, alpha, s_hw, v_pre, v_post),
        2,
        controlled(y_power(alpha)),
        {"v_pre": v_pre, "v_post": v_post},
    )


def czpow_gates(control: int, target: int, alpha: float, s_hw: int, h_pre: int, h_post: int) -> List[Gate]:
    return h_gates(target, h_pre) + cxpow_gates(control, target, alpha, s_hw) + h_gates(target, h_post)


def dec_czpow(alpha: float, s_hw: int, h_pre: int = 2, h_post: int = 1) -> Decomposition:
    _check_power(alpha)
    _check_sign("s_hw", s_hw)
    return Decomposition(
        czpow_gates(0, 1, alpha, s_hw, h_pre, h_post),
        2,
        controlled(z_power(alpha)),
        {"h_pre": h_pre, "h_post": h_post},
    )


def cz_gates(a: int, b: int, s: int, v1: int, v2: int) -> List[Gate]:
    # the RX layer couples each wire to the other wire's v
    return [
        ry(a, v1 * pi / 2),
        ry(b, v2 * pi / 2),
        xx(a, b, s * pi / 4),
        rx(a, -v2 * s * pi / 2),
        rx(b, -v1 * s * pi / 2),
        ry(a, -v1 * pi / 2),
        ry(b, -v2 * pi / 2),
    ]


def dec_cz(s: int, v1: int = 1, v2: int = 1) -> Decomposition:
    for name, value in (("s", s), ("v1", v1), ("v2", v2)):
        _check_sign(name, value)
    return Decomposition(cz_gates(0, 1, s, v1, v2), 2, gate_matrix(gate(GateKind.CZ, 0, 1)), {"v1": v1, "v2": v2})


def dec_toffoli() -> Circuit:
    """five two-qubit gates: CV(a;c) CV(b;c) CNOT(a;b) CV†(b;c) CNOT(a;b)"""
    return (
        Circuit(3)
        .add(GateKind.CXPOW, 0, 2, params=[0.5])
        .add(GateKind.CXPOW, 1, 2, params=[0.5])
        .add(GateKind.CNOT, 0, 1)
        .add(GateKind.CXPOW, 1, 2, params=[-0.5])
        .add(GateKind.CNOT, 0, 1)
    )


def dec_toffoli4() -> Circuit:
    """
    controlled-X^{±1/4} on every non-empty parity of the three controls, visited in
    Gray-code order so each step needs one CNOT: 7 roots + 6 CNOTs
    """
    a, b, c, d = 0, 1, 2, 3
    quarter = 0.25
    return (
        Circuit(4)
        .add(GateKind.CXPOW, a, d, params=[quarter])
        .add(GateKind.CNOT, a, b)
        .add(GateKind.CXPOW, b, d, params=[-quarter])
        .add(GateKind.CNOT, a, b)
        .add(GateKind.CXPOW, b, d, params=[quarter])
        .add(GateKind.CNOT, b, c)
        .add(GateKind.CXPOW, c, d, params=[-quarter])
        .add(GateKind.CNOT, a, c)
        .add(GateKind.CXPOW, c, d, params=[quarter])
        .add(GateKind.CNOT, b, c)
        .add(GateKind.CXPOW, c, d, params=[-quarter])
        .add(GateKind.CNOT, a, c)
        .add(GateKind.CXPOW, c, d, params=[quarter])
    )


def dec_ccz() -> Circuit:
    return Circuit(3).add(GateKind.H, 2).add(GateKind.TOFFOLI, 0, 1, 2).add(GateKind.H, 2)


def dec_c3z() -> Circuit:
    return Circuit(4).add(GateKind.H, 3).add(GateKind.TOFFOLI4, 0, 1, 2, 3).add(GateKind.H, 3)


_Z_ANGLE = {
    GateKind.Z: pi,
    GateKind.S: pi / 2,
    GateKind.SDG: -pi / 2,
    GateKind.T: pi / 4,
    GateKind.TDG: -pi / 4,
}


def z_angle(g: Gate) -> float:
    """rotation angle of a Z-axis gate, equal to RZ(angle) up to phase"""
    if g.kind == GateKind.RZ:
        return g.angle
    return _Z_ANGLE[g.kind]


def compile_zcz(circuit: Circuit, v: Optional[Dict[int, int]] = None, machine: Optional[MachineConfig] = None) -> Decomposition:
    """
    Four-layer implementation of a circuit of Z-axis rotations and CZ gates:
    RY(v_i pi/2) layer, RX layer, one XX(s_ab pi/4) per CZ, RY(-v_i pi/2) layer.
    The RX angle on qubit i is v_i·t_i - sum over CZ(i, j) of s_ij·v_j·pi/2, where t_i
    totals the qubit's Z-axis angles. Qubits are machine ions.
    """
    machine = machine or default_machine()
    v = v or {}
    totals: Dict[int, float] = {}
    cz_pairs = []
    for g in circuit.gates:
        if g.kind in Z_AXIS_KINDS:
            q = g.qubits[0]
            totals[q] = totals.get(q, 0.0) + z_angle(g)
        elif g.kind == GateKind.CZ:
            cz_pairs.append(g.qubits)
        else:
            raise DecompositionError(f"compile_zcz only accepts Z-axis rotations and CZ, got {g.kind.value}")

    entangled = {q for pair in cz_pairs for q in pair}
    signs = {q: v.get(q, 1) for q in set(totals) | entangled}
    for q, value in signs.items():
        _check_sign(f"v[{q}]", value)

    rx_angle = {q: signs[q] * totals.get(q, 0.0) for q in signs}
    for a, b in cz_pairs:
        s = machine.sign(a, b)
        rx_angle[a] -= s * signs[b] * pi / 2
        rx_angle[b] -= s * signs[a] * pi / 2

    active = sorted(q for q in signs if q in entangled or not is_zero_angle(rx_angle[q]))
    gates: List[Gate] = [ry(q, signs[q] * pi / 2) for q in active]
    gates += [rx(q, normalize_angle(rx_angle[q])) for q in active if not is_zero_angle(rx_angle[q])]
    gates += [xx(a, b, machine.sign(a, b) * pi / 4) for a, b in cz_pairs]
    gates += [ry(q, -signs[q] * pi / 2) for q in active]

    target = np.eye(2**circuit.n, dtype=complex)
    for g in circuit.gates:
        target = apply_unitary(target, gate_matrix(g), g.qubits, circuit.n)
    return Decomposition(gates, circuit.n, target, {f"v{q}": s for q, s in sorted(signs.items())})
