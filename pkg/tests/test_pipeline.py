from itertools import combinations
from math import pi

import numpy as np
import pytest

from ion_compiler.bench import run_bench, run_row
from ion_compiler.benchmarks import (
    bitflip_oracle,
    build_benchmark,
    compiled_marked_probability,
    marked_items,
    marked_probability,
    phase_oracle,
    qft,
)
from ion_compiler.compiler import IonCompiler, Verdict, verify
from ion_compiler.ir.gates import Circuit, GateKind, Level, expand_oracles, gate
from ion_compiler.linalg import basis_state, circuit_unitary, equiv_global_phase, simulate
from ion_compiler.mapper import eliminate_swaps
from ion_compiler.optimizer import RxDirection, cancel_merge, commute_rx, decompose
from ion_compiler.optimizer.plan import RewritePlan
from ion_compiler.optimizer.signs import expand_composites

THREE_BIT = [format(x, "03b") for x in range(8)]


def _two_qubit_gates(circuit: Circuit) -> int:
    return expand_composites(expand_oracles(circuit)).two_qubit_count


def test_toffoli_time_objective(compiler, expected_values):
    expected = expected_values["compilations"]["toffoli"]
    circuit = build_benchmark("toffoli")
    physical, report = compiler.compile(circuit, [ion - 1 for ion in expected.mapping], name="toffoli")

    assert report.verification.verdict == Verdict.YES
    assert report.mapping.ions() == "2,4,5"
    assert report.pulses_2q == expected.xx
    assert report.pulses_1q == expected.pulses_1q
    assert report.cost.duration_us == expected.time_us
    assert report.cost.ledger_e1.render() == expected.e1
    assert report.cost.ledger_e2.render() == expected.e2
    assert report.lemma1_ok
    assert physical.level == Level.PHYSICAL


def test_toffoli_error_objective(machine):
    compiler = IonCompiler(machine, RewritePlan.from_objective("error"))
    _, report = compiler.compile(build_benchmark("toffoli"), [1, 3, 4], name="toffoli-error")

    assert report.verification.verdict == Verdict.YES
    assert report.pulses_2q == 5
    assert report.pulses_1q == 9
    assert report.cost.duration_us == 1295.0
    assert report.cost.ledger_e1.render() == "2 × 0.707107ε + 3 × 0.866025ε + 2 × ε + 3 × 0.707107E + 2 × E"
    assert report.lemma3_ok


def test_compile_cnot(compiler):
    physical, report = compiler.compile(Circuit(2).add(GateKind.CNOT, 0, 1), name="cnot")
    assert report.verification.verdict == Verdict.YES
    assert report.pulses_2q == 1
    assert report.mapping.permutation == (0, 1)
    assert report.pulses_1q == 4
    assert report.cost.duration_us == 275.0
    assert report.cost.ledger_e1.render() == "4 × ε + 1 × E"
    assert {g.kind for g in physical.gates} <= {GateKind.R, GateKind.XX}
    assert report.paths == [("segment 0", "generic")]


def test_compile_swap_becomes_relabeling(compiler):
    circuit = Circuit(2).add(GateKind.H, 0).add(GateKind.SWAP, 0, 1)
    physical, report = compiler.compile(circuit)
    assert physical.xx_count == 0
    assert report.output_perm == (1, 0, 2, 3, 4)
    assert report.verification.verdict == Verdict.YES


def test_compile_zcz_circuit(compiler):
    circuit = Circuit(3).add(GateKind.T, 0).add(GateKind.CZ, 0, 1).add(GateKind.S, 1).add(GateKind.CZ, 1, 2)
    _, report = compiler.compile(circuit)
    assert report.verification.verdict == Verdict.YES
    assert report.pulses_2q == 2
    assert report.paths[0][1] in ("z/cz", "generic")


def test_compile_rejects_invalid_circuit(compiler):
    circuit = Circuit(3)
    circuit.gates.append(gate(GateKind.CNOT, 1, 1))
    with pytest.raises(ValueError, match="invalid circuit"):
        compiler.compile(circuit)


def test_compile_with_verification_disabled(machine):
    _, report = IonCompiler(machine, verify=False).compile(Circuit(1).add(GateKind.H, 0))
    assert report.verification.verdict == Verdict.SKIPPED
    assert report.verification.reason == "disabled"


@pytest.mark.parametrize("name", ["grover-111", "grover-phase-011,101"])
def test_compiled_grover(compiler, expected_values, name):
    circuit = build_benchmark(name)
    physical, report = compiler.compile(circuit, name=name)
    assert report.verification.verdict == Verdict.YES
    assert report.pulses_2q == expected_values["xx_counts"][name]
    probability = compiled_marked_probability(
        physical, report.output_perm, report.mapping.permutation, marked_items(name)
    )
    assert np.isclose(probability, expected_values["probabilities"][name])


def test_logical_grover_probabilities(expected_values):
    for name, expected in expected_values["probabilities"].items():
        circuit = build_benchmark(name)
        marked = marked_items(name)
        state = simulate(expand_oracles(circuit), basis_state(0, circuit.n))
        probability = marked_probability(state, marked, range(len(marked[0])), circuit.n)
        assert np.isclose(probability, expected), f"{name}: {probability}"


def test_two_qubit_gate_counts(expected_values):
    for name, expected in expected_values["xx_counts"].items():
        assert _two_qubit_gates(build_benchmark(name)) == expected, name


def _bitflip_table_ok(marked) -> bool:
    body = bitflip_oracle(marked)
    for x in THREE_BIT:
        for y in "01":
            flipped = str(int(y) ^ int(x in marked))
            out = simulate(body, basis_state(x + y, 4))
            if not np.allclose(out, basis_state(x + flipped, 4)):
                return False
    return True


@pytest.mark.parametrize("marked", [[x] for x in THREE_BIT] + [list(pair) for pair in combinations(THREE_BIT, 2)])
def test_bitflip_oracle_truth_table(marked):
    assert _bitflip_table_ok(marked), f"{marked}"


@pytest.mark.parametrize("marked", [["101"], ["011", "101"], ["000", "111"], ["1110", "1111"], ["0001", "1000"]])
def test_phase_oracle_is_diagonal_sign(marked):
    k = len(marked[0])
    signs = [-1 if format(x, f"0{k}b") in marked else 1 for x in range(2**k)]
    assert equiv_global_phase(circuit_unitary(phase_oracle(marked)), np.diag(signs).astype(complex))


@pytest.mark.parametrize("marked", [[], ["01"], ["0101", "1100", "1111"], ["011", "011"], ["011", "01x"]])
def test_marked_items_validation(marked):
    with pytest.raises(ValueError):
        phase_oracle(marked)


def test_bitflip_oracle_needs_three_bits():
    with pytest.raises(ValueError):
        bitflip_oracle(["1111"])


@pytest.mark.parametrize("n", [1, 2, 3])
def test_qft_is_dft(n):
    size = 2**n
    omega = np.exp(2j * pi / size)
    dft = np.array([[omega ** (x * y) for x in range(size)] for y in range(size)]) / np.sqrt(size)
    assert np.allclose(circuit_unitary(qft(n)), dft)


def test_qft_shape():
    circuit = qft(4)
    assert circuit.count(GateKind.CZPOW) == 6
    assert circuit.count(GateKind.SWAP) == 2
    with pytest.raises(ValueError):
        qft(0)


def test_unknown_benchmark():
    with pytest.raises(ValueError):
        build_benchmark("shor-15")


def test_verify_verdicts():
    cnot = Circuit(2).add(GateKind.CNOT, 0, 1)
    assert verify(cnot, Circuit(2, [], Level.PHYSICAL)).verdict == Verdict.NO
    assert verify(cnot, cnot).verdict == Verdict.YES
    assert verify(Circuit(7), Circuit(7)).verdict == Verdict.SKIPPED
    with pytest.raises(ValueError):
        verify(cnot, Circuit(3))


def test_verify_with_mapping_and_perm():
    logical = Circuit(2).add(GateKind.X, 0).add(GateKind.SWAP, 0, 1)
    # the logical X lands on whichever ion holds qubit 0; the SWAP becomes the output relabeling
    on_ion_2 = Circuit(3).add(GateKind.X, 2)
    assert verify(logical, on_ion_2, perm=(0, 2, 1), mapping=(2, 1)).verdict == Verdict.YES
    assert verify(logical, on_ion_2, perm=(0, 2, 1), mapping=(1, 2)).verdict == Verdict.NO
    assert verify(logical, Circuit(3).add(GateKind.X, 1), perm=(0, 2, 1), mapping=(1, 2)).verdict == Verdict.YES


def test_run_bench_toffoli():
    table = run_bench(["toffoli"])
    assert list(table["name"]) == ["toffoli", "toffoli-error"]
    assert list(table["status"]) == ["PASS", "PASS"], f"{table['notes'].tolist()}"
    assert table["time"].iloc[0] == "1285"


def test_run_bench_unknown_name():
    with pytest.raises(ValueError):
        run_bench(["nonexistent"])


_RANDOM_SINGLE = [GateKind.H, GateKind.X, GateKind.Y, GateKind.S, GateKind.T, GateKind.V]
_RANDOM_ROTATIONS = [GateKind.RX, GateKind.RY, GateKind.RZ]
_RANDOM_PAIRS = [GateKind.CNOT, GateKind.CZ]
_RANDOM_POWERS = [GateKind.CXPOW, GateKind.CYPOW, GateKind.CZPOW]


def _random_logical(rng, n: int, length: int = 8) -> Circuit:
    circuit = Circuit(n)
    for _ in range(length):
        q = int(rng.integers(n))
        a, b = (int(i) for i in rng.choice(n, size=2, replace=False))
        family = int(rng.integers(5))
        if family == 0:
            circuit.add(_RANDOM_SINGLE[int(rng.integers(len(_RANDOM_SINGLE)))], q)
        elif family == 1:
            kind = _RANDOM_ROTATIONS[int(rng.integers(len(_RANDOM_ROTATIONS)))]
            circuit.add(kind, q, params=[float(rng.uniform(-pi, pi))])
        elif family == 2:
            circuit.add(GateKind.U2, q, params=[float(x) for x in rng.uniform(-pi, pi, size=4)])
        elif family == 3:
            circuit.add(_RANDOM_PAIRS[int(rng.integers(len(_RANDOM_PAIRS)))], a, b)
        else:
            kind = _RANDOM_POWERS[int(rng.integers(len(_RANDOM_POWERS)))]
            circuit.add(kind, a, b, params=[float(rng.uniform(-1, 1))])
    return circuit


@pytest.mark.parametrize("objective", ["time", "error", "balanced"])
def test_random_circuits_compile_within_bounds(machine, rng, objective):
    compiler = IonCompiler(machine, RewritePlan.from_objective(objective))
    for trial in range(6):
        circuit = _random_logical(rng, 2 + trial % 2)
        _, report = compiler.compile(circuit, name=f"random-{trial}")
        assert report.verification.verdict == Verdict.YES
        assert report.lemma1_ok, f"{report.pulses_1q} > {report.lemma1.gate_bound}: {circuit.gates}"


@pytest.mark.parametrize("objective", ["time", "error", "balanced"])
def test_z_rotation_runs_stay_within_bound(machine, objective):
    circuit = (
        Circuit(2)
        .add(GateKind.Y, 0)
        .add(GateKind.X, 1)
        .add(GateKind.U2, 1, params=[0.3, 0.8, -0.5, 1.1])
        .add(GateKind.Y, 0)
        .add(GateKind.CYPOW, 1, 0, params=[0.800055])
    )
    _, report = IonCompiler(machine, RewritePlan.from_objective(objective)).compile(circuit)
    assert report.verification.verdict == Verdict.YES
    assert report.pulses_2q == 1
    assert report.pulses_1q <= report.lemma1.gate_bound == 8


@pytest.mark.parametrize("name, xx", [("qft4", 6), ("qft5", 10), ("toffoli4", 13)])
def test_compile_larger_benchmarks(compiler, name, xx):
    circuit = build_benchmark(name)
    physical, report = compiler.compile(circuit, name=name)
    assert report.verification.verdict == Verdict.YES
    assert report.pulses_2q == xx
    assert report.lemma1_ok

    if name.startswith("qft"):
        ions, n = report.mapping.permutation, circuit.n
        # the SWAP layer survives only as the bit reversal of the output
        assert all(report.output_perm[ions[q]] == ions[n - 1 - q] for q in range(n))
        assert verify(circuit, physical, mapping=ions).verdict == Verdict.NO


@pytest.mark.parametrize("name", ["qft4", "qft5", "toffoli4"])
def test_rx_sweep_leaves_one_rx_per_wire(machine, name):
    circuit, _ = eliminate_swaps(build_benchmark(name))
    pulses = cancel_merge(decompose(circuit, machine))
    swept = commute_rx(pulses, RxDirection.LEFT)
    assert swept.count(GateKind.RX) <= circuit.n
    assert equiv_global_phase(circuit_unitary(pulses), circuit_unitary(swept), 1e-8)


def test_run_bench_is_deterministic():
    serial = run_bench(["toffoli", "qft4"])
    parallel = run_bench(["toffoli", "qft4"], jobs=2)
    assert serial.equals(parallel)
    assert serial.equals(run_bench(["toffoli", "qft4"]))


def test_verify_at_dense_limit():
    logical = Circuit(6).add(GateKind.H, 0).add(GateKind.CNOT, 0, 5).add(GateKind.CZPOW, 2, 4, params=[0.5])
    assert verify(logical, logical).verdict == Verdict.YES
    assert verify(logical, logical.with_gates(logical.gates[:-1])).verdict == Verdict.NO


def test_run_row_pulse_limit_is_hard():
    row = {"name": "toffoli", "objective": "time", "mapping": [2, 4, 5], "pulses_1q_max": 9, "time_us_max": 1300}
    result = run_row(row)
    assert result["status"] == "FAIL"
    assert result["notes"] == "10 pulses above 9"
    assert run_row({**row, "pulses_1q_max": 10})["status"] == "PASS"
