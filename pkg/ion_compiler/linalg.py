"""
Dense complex linear algebra for building, composing and comparing gate unitaries
on up to MAX_DENSE_QUBITS qubits. Qubit 0 is the most significant bit.
"""
from __future__ import annotations
from typing import TYPE_CHECKING, Iterable, Sequence, Union

import numpy as np

from ion_compiler.constants import MAX_DENSE_QUBITS, TOL
from ion_compiler.gatelib.matrices import gate_matrix

if TYPE_CHECKING:
    from ion_compiler.ir.gates import Circuit


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def _check_targets(targets: Sequence[int], n: int) -> None:
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate targets {list(targets)}")
    if any(not 0 <= t < n for t in targets):
        raise ValueError(f"targets {list(targets)} out of range for {n} qubits")


def apply_unitary(tensor: np.ndarray, u: np.ndarray, targets: Sequence[int], n: int) -> np.ndarray:
    """
    applies `u` to the `targets` axes of an array whose leading dimension is 2**n
    (a state vector, or a matrix whose columns are states)
    """
    k = len(targets)
    if u.shape != (2**k, 2**k):
        raise ValueError(f"a {u.shape[0]}x{u.shape[1]} matrix cannot act on {k} qubits")
    trailing = tensor.shape[1:]
    shaped = tensor.reshape([2] * n + list(trailing))
    out = np.tensordot(u.reshape([2] * (2 * k)), shaped, axes=(list(range(k, 2 * k)), list(targets)))
    out = np.moveaxis(out, list(range(k)), list(targets))
    return out.reshape(tensor.shape)


def embed(u: np.ndarray, targets: Sequence[int], n: int) -> np.ndarray:
    """the 2**n matrix acting as `u` on `targets` (in that order) and as identity elsewhere"""
    _check_targets(targets, n)
    return apply_unitary(np.eye(2**n, dtype=complex), u, targets, n)


def global_phase(u: np.ndarray, v: np.ndarray) -> complex:
    """unit-modulus lambda aligning `v` to `u`, taken at v's largest-magnitude entry"""
    idx = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    ratio = u[idx] / v[idx]
    if abs(ratio) < 1e-15:
        return 1.0 + 0.0j
    return ratio / abs(ratio)


def equiv_global_phase(u: np.ndarray, v: np.ndarray, tol: float = TOL) -> bool:
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    phase = global_phase(u, v)
    return bool(np.max(np.abs(u - phase * v)) <= tol)


def is_unitary(u: np.ndarray, tol: float = TOL) -> bool:
    return bool(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))) <= tol)


def basis_state(bits: Union[str, int], n: int) -> np.ndarray:
    """|bits>, where `bits` is a bitstring (qubit 0 first) or an integer index"""
    index = int(bits, 2) if isinstance(bits, str) else bits
    if isinstance(bits, str) and len(bits) != n:
        raise ValueError(f"bitstring `{bits}` does not have {n} bits")
    state = np.zeros(2**n, dtype=complex)
    state[index] = 1.0
    return state


def simulate(circuit: Circuit, state: np.ndarray) -> np.ndarray:
    """applies the circuit's gates to `state` in circuit order"""
    if state.shape[0] != 2**circuit.n:
        raise ValueError(f"state has {state.shape[0]} amplitudes, circuit needs {2**circuit.n}")
    for g in circuit.gates:
        state = apply_unitary(state, gate_matrix(g), g.qubits, circuit.n)
    return state


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    if circuit.n > MAX_DENSE_QUBITS:
        raise ValueError(f"dense unitaries are limited to {MAX_DENSE_QUBITS} qubits, got {circuit.n}")
    return simulate(circuit, np.eye(2**circuit.n, dtype=complex))


def permutation_matrix(perm: Sequence[int]) -> np.ndarray:
    """unitary moving the content of qubit i onto qubit perm[i]"""
    n = len(perm)
    out = np.zeros((2**n, 2**n), dtype=complex)
    for index in range(2**n):
        bits = [(index >> (n - 1 - q)) & 1 for q in range(n)]
        moved = [0] * n
        for q, bit in enumerate(bits):
            moved[perm[q]] = bit
        out[int("".join(map(str, moved)), 2), index] = 1.0
    return out


def probabilities(state: np.ndarray) -> np.ndarray:
    return np.abs(state) ** 2


def marginal_probability(state: np.ndarray, n: int, qubits: Sequence[int], outcomes: Iterable[str]) -> float:
    """total probability of measuring any of `outcomes` on `qubits` (other qubits summed out)"""
    probs = probabilities(state).reshape([2] * n)
    others = tuple(q for q in range(n) if q not in qubits)
    marginal = probs.sum(axis=others) if others else probs
    # axes of `marginal` follow ascending qubit order
    order = sorted(qubits)
    total = 0.0
    for outcome in outcomes:
        bit_of = dict(zip(qubits, outcome))
        total += float(marginal[tuple(int(bit_of[q]) for q in order)])
    return total
