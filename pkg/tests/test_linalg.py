from math import pi

import numpy as np
import pytest

from ion_compiler.gatelib.matrices import H, SWAP, X, Z, controlled, rx_matrix
from ion_compiler.ir.gates import Circuit, GateKind
from ion_compiler.linalg import (
    basis_state,
    circuit_unitary,
    embed,
    equiv_global_phase,
    is_unitary,
    kron,
    marginal_probability,
    permutation_matrix,
    simulate,
)
from ion_compiler.utils import format_angle, is_zero_angle, normalize_angle, parse_angle, pi_fraction


def test_embed_puts_qubit_zero_first():
    assert np.allclose(embed(X, [0], 2), kron(X, np.eye(2)))
    assert np.allclose(embed(X, [1], 2), kron(np.eye(2), X))


def test_embed_respects_target_order():
    reversed_cnot = np.array(
        [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]],
        dtype=complex,
    )
    assert np.allclose(embed(controlled(X), [1, 0], 2), reversed_cnot)


def test_embed_rejects_bad_targets():
    with pytest.raises(ValueError):
        embed(X, [2], 2)
    with pytest.raises(ValueError):
        embed(controlled(X), [0, 0], 2)


def test_equiv_global_phase(rng):
    u = embed(rx_matrix(0.7), [1], 3)
    phase = np.exp(1j * rng.uniform(0, 2 * pi))
    assert equiv_global_phase(u, phase * u)
    assert not equiv_global_phase(u, embed(rx_matrix(0.7), [0], 3))
    with pytest.raises(ValueError):
        equiv_global_phase(u, np.eye(2))


def test_permutation_matrix_moves_qubit_content():
    assert np.allclose(permutation_matrix([1, 0]), SWAP)
    # content of qubit 0 moves to qubit 2
    state = permutation_matrix([2, 0, 1]) @ basis_state("100", 3)
    assert np.allclose(state, basis_state("001", 3))


def test_simulate_bell_state():
    circuit = Circuit(2).add(GateKind.H, 0).add(GateKind.CNOT, 0, 1)
    state = simulate(circuit, basis_state(0, 2))
    assert np.allclose(state, np.array([1, 0, 0, 1]) / np.sqrt(2))
    assert np.isclose(marginal_probability(state, 2, [0], ["1"]), 0.5)
    assert np.isclose(marginal_probability(state, 2, [1, 0], ["11", "00"]), 1.0)


def test_circuit_unitary_is_product_in_reverse_order():
    circuit = Circuit(1).add(GateKind.H, 0).add(GateKind.Z, 0)
    assert np.allclose(circuit_unitary(circuit), Z @ H)
    assert is_unitary(circuit_unitary(circuit))


def _random_unitary(rng, dim: int) -> np.ndarray:
    q, _ = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return q


def test_simulate_preserves_norm(rng):
    for _ in range(20):
        circuit = (
            Circuit(3)
            .add(GateKind.RX, 0, params=[float(rng.uniform(-pi, pi))])
            .add(GateKind.CZPOW, 2, 0, params=[float(rng.uniform(-1, 1))])
            .add(GateKind.U2, 1, params=[float(x) for x in rng.uniform(-pi, pi, size=4)])
            .add(GateKind.CYPOW, 1, 2, params=[float(rng.uniform(-1, 1))])
            .add(GateKind.TOFFOLI, 2, 1, 0)
        )
        state = rng.normal(size=8) + 1j * rng.normal(size=8)
        state /= np.linalg.norm(state)
        assert np.isclose(np.linalg.norm(simulate(circuit, state)), 1.0)


def test_embed_on_disjoint_qubits_commutes(rng):
    for _ in range(20):
        a = embed(_random_unitary(rng, 2), [0], 3)
        b = embed(_random_unitary(rng, 4), [2, 1], 3)
        assert np.allclose(a @ b, b @ a)
        assert is_unitary(a @ b)


def test_basis_state_checks_width():
    with pytest.raises(ValueError):
        basis_state("10", 3)


@pytest.mark.parametrize(
    "text, value",
    [
        ("pi/4", pi / 4),
        ("-3pi/8", -3 * pi / 8),
        ("0.25pi", pi / 4),
        ("pi", pi),
        ("0.3", 0.3),
        ("-1.5", -1.5),
    ],
)
def test_parse_angle(text, value):
    assert np.isclose(parse_angle(text), value), f"{text}: {parse_angle(text)} != {value}"


def test_parse_angle_rejects_garbage():
    with pytest.raises(ValueError):
        parse_angle("quarter")
    with pytest.raises(ValueError):
        parse_angle("pi/0")


@pytest.mark.parametrize(
    "angle, text",
    [
        (pi / 4, "pi/4"),
        (-3 * pi / 8, "-3pi/8"),
        (pi, "pi"),
        (2 * pi / 3, "2pi/3"),
        (3 * pi / 16, "3pi/16"),
        (0.0, "0"),
        (0.3, "0.3"),
    ],
)
def test_format_angle(angle, text):
    assert format_angle(angle) == text


def test_pi_fraction_limits_denominator():
    assert pi_fraction(pi / 64) is not None
    assert pi_fraction(pi / 128) is None


def test_normalize_angle():
    assert np.isclose(normalize_angle(3 * pi / 2), -pi / 2)
    assert np.isclose(normalize_angle(-pi), pi)
    assert is_zero_angle(2 * pi)
    assert not is_zero_angle(pi)
