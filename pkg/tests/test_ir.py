from math import pi

import numpy as np
import pytest

from ion_compiler.formats import parse_machine
from ion_compiler.gatelib.matrices import gate_matrix
from ion_compiler.ir.gates import (
    Circuit,
    GateKind,
    Level,
    expand_oracles,
    gate,
    inverse,
    normalize_r,
    r,
    rx,
    xx,
)
from ion_compiler.ir.models import MachineConfig, default_machine
from ion_compiler.ir.validation import validate
from ion_compiler.linalg import circuit_unitary, equiv_global_phase


def test_default_machine_signs(machine):
    negative = {(0, 2), (0, 4), (1, 3)}
    for i, j in machine.pairs:
        expected = -1 if (i, j) in negative else 1
        assert machine.sign(i, j) == expected, f"pair ({i + 1},{j + 1})"
        assert machine.sign(j, i) == expected
    assert machine.tau1q == 20.0
    assert machine.tau2q == 235.0


def test_machine_rejects_incomplete_sign_table():
    signs = {(0, 1): 1, (0, 2): -1}
    with pytest.raises(ValueError, match="missing"):
        MachineConfig(n=3, tau1q=20, tau2q=235, epsilon=0.01, big_e=0.04, chi_sign=signs)


def test_machine_rejects_bad_values():
    signs = {(0, 1): 1}
    with pytest.raises(ValueError):
        MachineConfig(n=2, tau1q=0, tau2q=235, epsilon=0.01, big_e=0.04, chi_sign=signs)
    with pytest.raises(ValueError):
        MachineConfig(n=2, tau1q=20, tau2q=235, epsilon=1.5, big_e=0.04, chi_sign=signs)
    with pytest.raises(ValueError):
        MachineConfig(n=2, tau1q=20, tau2q=235, epsilon=0.01, big_e=0.04, chi_sign={(0, 1): 2})


def test_pair_error_override():
    machine = parse_machine("n = 2\nsign 1 2 -\nE 1 2 0.05\n")
    assert machine.pair_error(0, 1) == 0.05
    assert machine.pair_error(1, 0) == 0.05
    assert machine.sign(1, 0) == -1


@pytest.mark.parametrize(
    "g",
    [
        gate(GateKind.S, 0),
        gate(GateKind.TDG, 0),
        gate(GateKind.V, 0),
        gate(GateKind.H, 0),
        gate(GateKind.RX, 0, params=[0.7]),
        gate(GateKind.RZ, 0, params=[-1.3]),
        gate(GateKind.R, 0, params=[0.9, 0.4]),
        gate(GateKind.U2, 0, params=[0.3, 0.8, -0.5, 1.1]),
        gate(GateKind.CXPOW, 0, 1, params=[0.5]),
        gate(GateKind.CYPOW, 0, 1, params=[-0.25]),
        gate(GateKind.CZPOW, 0, 1, params=[0.125]),
        gate(GateKind.XX, 0, 1, params=[pi / 4]),
    ],
)
def test_inverse(g):
    u = gate_matrix(g)
    assert equiv_global_phase(gate_matrix(inverse(g)), u.conj().T), f"{g}"


def test_inverse_of_oracle_raises():
    with pytest.raises(ValueError):
        inverse(gate(GateKind.ORACLE, 0, tag="f"))


def test_normalize_r_keeps_unitary():
    g = r(0, 3 * pi / 2, 5.0)
    normalized = normalize_r(g)
    theta, phi = normalized.params
    assert np.isclose(theta, -pi / 2)
    assert -pi < phi <= pi
    assert equiv_global_phase(gate_matrix(normalized), gate_matrix(g))
    with pytest.raises(TypeError):
        normalize_r(rx(0, 0.1))


def test_circuit_helpers():
    circuit = (
        Circuit(3)
        .add(GateKind.H, 0)
        .add(GateKind.CNOT, 0, 1)
        .add(GateKind.TOFFOLI, 0, 1, 2)
        .add(GateKind.X, 2)
    )
    assert len(circuit) == 4
    assert circuit.single_qubit_count == 2
    assert circuit.two_qubit_count == 1
    assert circuit.count(GateKind.H) == 1
    assert circuit.wire(2) == [2, 3]
    assert circuit.active_qubits == [0, 1, 2]

    moved = circuit.relabel([4, 2, 0], 5)
    assert moved.n == 5
    assert moved.gates[2].qubits == (4, 2, 0)

    doubled = circuit + circuit
    assert len(doubled) == 8
    with pytest.raises(ValueError):
        circuit + Circuit(2)


def test_expand_oracles_relabels_body():
    body = Circuit(2).add(GateKind.CNOT, 0, 1).add(GateKind.Z, 1)
    circuit = Circuit(3, oracles={"f": body}).add(GateKind.H, 1).add(GateKind.ORACLE, 2, 0, tag="f")
    expanded = expand_oracles(circuit)
    assert [(g.kind, g.qubits) for g in expanded.gates] == [
        (GateKind.H, (1,)),
        (GateKind.CNOT, (2, 0)),
        (GateKind.Z, (0,)),
    ]
    with pytest.raises(ValueError):
        expand_oracles(Circuit(1).add(GateKind.ORACLE, 0, tag="g"))


def test_expand_oracles_checks_width():
    body = Circuit(2).add(GateKind.CZ, 0, 1)
    circuit = Circuit(3, oracles={"f": body}).add(GateKind.ORACLE, 0, 1, 2, tag="f")
    with pytest.raises(ValueError):
        expand_oracles(circuit)


def test_validate_accepts_good_circuit(machine):
    circuit = Circuit(3).add(GateKind.CXPOW, 0, 2, params=[0.5]).add(GateKind.RZ, 1, params=[pi / 8])
    assert validate(circuit, machine) == []


def test_validate_reports_problems(machine):
    circuit = Circuit(3)
    circuit.gates += [
        gate(GateKind.CNOT, 0, 3),
        gate(GateKind.CXPOW, 0, 1, params=[1.5]),
        gate(GateKind.CNOT, 1, 1),
        gate(GateKind.ORACLE, 0, tag="missing"),
    ]
    indices = [d.index for d in validate(circuit, machine)]
    assert indices == [0, 1, 2, 3], f"{[str(d) for d in validate(circuit, machine)]}"


def test_validate_checks_machine_size(machine):
    diagnostics = validate(Circuit(6).add(GateKind.H, 5), machine)
    assert diagnostics and diagnostics[0].index is None


def test_validate_checks_xx_sign(machine):
    physical = Circuit(5, [xx(0, 2, pi / 4), xx(0, 1, pi / 4)], Level.PHYSICAL)
    diagnostics = validate(physical, machine)
    assert len(diagnostics) == 1
    assert "sign mismatch on ions (1,3)" in str(diagnostics[0])

    too_wide = Circuit(2, [xx(0, 1, 2.0)], Level.PHYSICAL)
    assert any("out of range" in d.message for d in validate(too_wide, machine))


def test_validate_rejects_logical_gate_in_physical_circuit(machine):
    physical = Circuit(2, [gate(GateKind.H, 0)], Level.PHYSICAL)
    assert "non-physical" in validate(physical, machine)[0].message


def test_circuit_unitary_of_swap_free_circuit_matches_manual():
    circuit = Circuit(2).add(GateKind.X, 0).add(GateKind.SWAP, 0, 1)
    expected = np.zeros(4)
    expected[1] = 1
    assert np.allclose(circuit_unitary(circuit)[:, 0], expected)


def test_default_machine_is_fresh():
    assert default_machine() is not default_machine()
