from math import pi

import numpy as np
import pytest

from ion_compiler.formats import (
    CircuitParseError,
    emit_report,
    emit_schedule,
    parse_circuit,
    parse_machine,
    parse_schedule,
    read_circuit,
    report_dict,
    schedule_ions,
)
from ion_compiler.ir import PACKAGE_ROOT
from ion_compiler.ir.gates import Circuit, GateKind, Level, r, xx
from ion_compiler.ir.models import ErrorModel, default_machine
from ion_compiler.linalg import circuit_unitary, equiv_global_phase


def test_parse_circuit():
    text = "# demo\nqubits 3\n\nh 0\ncnot 0 1  # entangle\nrz 2 -3pi/8\ncxp 1 2 1/2\ntoffoli 0 1 2\n"
    circuit = parse_circuit(text)
    assert circuit.n == 3
    assert circuit.level == Level.LOGICAL
    assert [g.kind for g in circuit.gates] == [GateKind.H, GateKind.CNOT, GateKind.RZ, GateKind.CXPOW, GateKind.TOFFOLI]
    assert np.isclose(circuit.gates[2].angle, -3 * pi / 8)
    assert circuit.gates[3].angle == 0.5


def test_parse_oracle_block():
    text = "qubits 3\nbegin f 2\ncz 0 1\nend\nh 2\noracle f 2 0\n"
    circuit = parse_circuit(text)
    assert circuit.oracles["f"].n == 2
    assert circuit.gates[1].kind == GateKind.ORACLE
    assert circuit.gates[1].qubits == (2, 0)


@pytest.mark.parametrize(
    "text, where, message",
    [
        ("qubits 2\nfoo 0\n", ":2:1:", "unknown gate `foo`"),
        ("qubits 2\ncnot 0\n", ":2:1:", "cnot takes 2 qubits"),
        ("qubits 2\nh 5\n", ":2:3:", "out of range"),
        ("qubits 2\nrx 0 quarter\n", ":2:6:", "cannot parse parameter"),
        ("h 0\n", ":1:1:", "qubits N"),
        ("qubits 2\nbegin f 1\nx 0\n", ":2:1:", "missing `end`"),
        ("qubits 2\noracle g 0\n", ":2:1:", "before its `begin`"),
        ("", ":1:1:", "missing `qubits N`"),
    ],
)
def test_parse_errors(text, where, message):
    with pytest.raises(CircuitParseError) as info:
        parse_circuit(text)
    assert where in str(info.value)
    assert message in str(info.value)
    assert str(info.value).startswith("<circuit>")


def test_parse_error_is_value_error():
    with pytest.raises(ValueError):
        parse_circuit("qubits 1\nswap 0\n", source="bad.qc")


def test_read_circuit_perm():
    circuit, perm = read_circuit("qubits 2\nx 0\nPERM 1 0\n")
    assert perm == (1, 0)
    assert len(circuit) == 1
    with pytest.raises(CircuitParseError):
        read_circuit("qubits 2\nPERM 1 1\n")


def test_bundled_circuits_parse():
    for path in sorted((PACKAGE_ROOT / "circuits").glob("*.qc")):
        circuit = parse_circuit(path.read_text(), str(path))
        assert circuit.gates, path.name


def test_default_machine_file_matches_defaults():
    machine = parse_machine((PACKAGE_ROOT / "machines" / "default.cfg").read_text())
    default = default_machine()
    assert machine.n == default.n
    assert machine.tau1q == default.tau1q
    assert machine.tau2q == default.tau2q
    assert machine.epsilon == default.epsilon
    assert machine.big_e == default.big_e
    assert machine.error_model == ErrorModel.E1
    assert all(machine.sign(i, j) == default.sign(i, j) for i, j in default.pairs)


@pytest.mark.parametrize(
    "text",
    [
        "tau1q_us = 20\n",
        "n = 3\nsign 1 2 +\nsign 1 3 -\n",
        "n = 2\nsign 1 2 ?\n",
        "n = 2\ncolour = blue\nsign 1 2 +\n",
        "n = 2\nsign 1 2 +\nerror_model = e3\n",
    ],
)
def test_parse_machine_errors(text):
    with pytest.raises(ValueError):
        parse_machine(text)


def _schedule_circuit() -> Circuit:
    return Circuit(3, [r(0, pi / 2, 0), xx(0, 2, -pi / 4), r(2, -3 * pi / 4, pi / 2), r(1, 0.3, 1.1)], Level.PHYSICAL)


def test_emit_schedule():
    text = emit_schedule(_schedule_circuit(), perm=(0, 2, 1), ions=(1, 3, 4))
    lines = text.splitlines()
    assert lines[0] == "# 3 R pulses, 1 XX gates"
    assert lines[1] == "# ions 2,4,5"
    assert lines[2] == "qubits 3"
    assert lines[3] == "R 0 pi/2 0"
    assert lines[4] == "XX 0 2 -pi/4"
    assert lines[5] == "R 2 -3pi/4 pi/2"
    assert lines[-1] == "PERM 0 2 1"
    assert schedule_ions(text) == (1, 3, 4)


def test_schedule_round_trip():
    physical = _schedule_circuit()
    parsed, perm = parse_schedule(emit_schedule(physical, perm=(1, 0, 2)))
    assert perm == (1, 0, 2)
    assert parsed.level == Level.PHYSICAL
    assert [g.kind for g in parsed.gates] == [g.kind for g in physical.gates]
    assert equiv_global_phase(circuit_unitary(parsed), circuit_unitary(physical))
    assert schedule_ions(emit_schedule(physical)) is None


def test_schedule_mnemonics_any_case():
    upper, _ = parse_schedule("qubits 2\nR 0 pi/2 0\nXX 0 1 pi/4\n")
    lower, _ = parse_schedule("qubits 2\nr 0 pi/2 0\nxx 0 1 pi/4\n")
    assert upper.gates == lower.gates
    assert [g.kind for g in upper.gates] == [GateKind.R, GateKind.XX]
    assert "R 0 pi/2 0" in emit_schedule(upper).splitlines()


def test_empty_schedule():
    text = emit_schedule(Circuit(2, [], Level.PHYSICAL))
    assert text == "# 0 R pulses, 0 XX gates\nqubits 2\nPERM 0 1\n"
    parsed, perm = parse_schedule(text)
    assert parsed.gates == []
    assert perm == (0, 1)


def test_emit_schedule_rejects_logical_gates():
    with pytest.raises(TypeError):
        emit_schedule(Circuit(1).add(GateKind.H, 0))


def test_parse_schedule_rejects_logical_gates():
    with pytest.raises(CircuitParseError):
        parse_schedule("qubits 1\nh 0\n")


def test_reports(compiler):
    _, report = compiler.compile(Circuit(3).add(GateKind.TOFFOLI, 0, 1, 2), [1, 3, 4], name="toffoli")
    text = emit_report(report)
    assert "1285 μs" in text
    assert "4 × 0.707107ε + 4 × ε + 3 × 0.707107E + 2 × E" in text
    assert "ions: 2,4,5" in text
    assert "verification: yes" in text

    structured = emit_report(report, "structured")
    assert "time_us = 1285" in structured.splitlines()
    assert "mapping.ions = 2,4,5" in structured.splitlines()
    assert report_dict(report)["pulses"] == {"1q": 10, "2q": 5}

    with pytest.raises(ValueError):
        emit_report(report, "yaml")
