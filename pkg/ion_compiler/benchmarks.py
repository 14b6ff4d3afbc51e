"""
Benchmark circuits: Toffoli gates, quantum Fourier transforms and one-iteration
Grover searches over 3- and 4-bit strings.
"""
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ion_compiler.gatelib.decompositions import dec_toffoli
from ion_compiler.ir.gates import Circuit, GateKind
from ion_compiler.linalg import basis_state, marginal_probability, permutation_matrix, simulate

ORACLE_TAG = "f"

# ion placement (0-indexed) pinned per benchmark
PINNED_MAPPINGS: Dict[str, Tuple[int, ...]] = {"toffoli": (1, 3, 4)}


def qft(n: int) -> Circuit:
    """H and controlled-Z^(1/2^k) ladder followed by the bit-reversal SWAP layer"""
    if n < 1:
        raise ValueError(f"QFT needs at least one qubit, got {n}")
    circuit = Circuit(n)
    for j in range(n):
        circuit.add(GateKind.H, j)
        for k in range(j + 1, n):
            circuit.add(GateKind.CZPOW, k, j, params=[1 / 2 ** (k - j)])
    for i in range(n // 2):
        circuit.add(GateKind.SWAP, i, n - 1 - i)
    return circuit


def multi_controlled_z(circuit: Circuit, qubits: Sequence[int]) -> Circuit:
    """Z, CZ, CCZ or C3Z over `qubits`; the last qubit carries the H conjugation"""
    qubits = list(qubits)
    if len(qubits) == 1:
        return circuit.add(GateKind.Z, qubits[0])
    if len(qubits) == 2:
        return circuit.add(GateKind.CZ, *qubits)
    if len(qubits) in (3, 4):
        kind = GateKind.TOFFOLI if len(qubits) == 3 else GateKind.TOFFOLI4
        target = qubits[-1]
        return circuit.add(GateKind.H, target).add(kind, *qubits).add(GateKind.H, target)
    raise ValueError(f"no multi-controlled Z on {len(qubits)} qubits")


def _flip_zeros(circuit: Circuit, bits: str, qubits: Sequence[int]) -> Circuit:
    for bit, q in zip(bits, qubits):
        if bit == "0":
            circuit.add(GateKind.X, q)
    return circuit


def _check_marked(marked: Sequence[str]) -> int:
    if not 1 <= len(marked) <= 2:
        raise ValueError(f"one or two marked items are supported, got {len(marked)}")
    widths = {len(bits) for bits in marked}
    if len(widths) != 1 or any(set(bits) - {"0", "1"} for bits in marked):
        raise ValueError(f"marked items {list(marked)} must be bitstrings of one length")
    if len(set(marked)) != len(marked):
        raise ValueError(f"repeated marked item in {list(marked)}")
    k = widths.pop()
    if k not in (3, 4):
        raise ValueError(f"searches over {k}-bit strings are not supported")
    return k


def bitflip_oracle(marked: Sequence[str]) -> Circuit:
    """
    |x, y> -> |x, y xor f(x)> on k data qubits plus an ancilla (last qubit).
    Two marked items are handled by Hamming distance:
      1: Toffoli on the two agreeing bits,
      2: CNOT folds the differing bits into one parity, then a Toffoli,
      3: two CNOTs fold all three bits into two parities, then the Toffoli
         network without its final CNOT, whose output parity the undo step absorbs.
    """
    k = _check_marked(marked)
    if k != 3:
        raise ValueError("bit-flip oracles are built for 3-bit strings")
    anc = k
    body = Circuit(k + 1)
    if len(marked) == 1:
        _flip_zeros(body, marked[0], range(k))
        body.add(GateKind.TOFFOLI4, *range(k), anc)
        return _flip_zeros(body, marked[0], range(k))

    first, second = marked
    differ = [i for i in range(3) if first[i] != second[i]]
    agree = [i for i in range(3) if first[i] == second[i]]
    if len(differ) == 1:
        bits = "".join(first[i] for i in agree)
        _flip_zeros(body, bits, agree)
        body.add(GateKind.TOFFOLI, *agree, anc)
        _flip_zeros(body, bits, agree)
    elif len(differ) == 2:
        i, j = differ
        (m,) = agree
        bits = f"{int(first[i]) ^ int(first[j])}{first[m]}"
        body.add(GateKind.CNOT, i, j)
        _flip_zeros(body, bits, (j, m))
        body.add(GateKind.TOFFOLI, j, m, anc)
        _flip_zeros(body, bits, (j, m))
        body.add(GateKind.CNOT, i, j)
    else:
        flip0 = (int(first[0]) ^ int(first[1])) == 0
        flip2 = (int(first[2]) ^ int(first[1])) == 0
        body.add(GateKind.CNOT, 1, 0).add(GateKind.CNOT, 1, 2)
        if flip0:
            body.add(GateKind.X, 0)
        if flip2:
            body.add(GateKind.X, 2)
        for g in dec_toffoli().relabel([0, 2, anc]).gates[:-1]:
            body.gates.append(g)
        if flip0:
            body.add(GateKind.X, 0)
        if flip0 != flip2:
            body.add(GateKind.X, 2)
        body.add(GateKind.CNOT, 1, 0).add(GateKind.CNOT, 0, 2)
    return body


def _anf(marked: Sequence[str], k: int) -> List[int]:
    """monomial masks of f's algebraic normal form, bit k-1-q standing for qubit q"""
    table = np.zeros(2**k, dtype=int)
    for bits in marked:
        table[int(bits, 2)] ^= 1
    for i in range(k):
        for mask in range(2**k):
            if mask & (1 << i):
                table[mask] ^= table[mask ^ (1 << i)]
    return [mask for mask in range(1, 2**k) if table[mask]]


def phase_oracle(marked: Sequence[str]) -> Circuit:
    """|x> -> (-1)^f(x) |x> as Z / CZ / CCZ / C3Z terms of f's algebraic normal form"""
    k = _check_marked(marked)
    body = Circuit(k)
    if len(marked) == 1:
        _flip_zeros(body, marked[0], range(k))
        multi_controlled_z(body, range(k))
        return _flip_zeros(body, marked[0], range(k))
    masks = sorted(_anf(marked, k), key=lambda mask: (bin(mask).count("1"), -mask))
    for mask in masks:
        multi_controlled_z(body, [q for q in range(k) if mask & (1 << (k - 1 - q))])
    return body


def diffusion(circuit: Circuit, data: Sequence[int]) -> Circuit:
    for q in data:
        circuit.add(GateKind.H, q)
    for q in data:
        circuit.add(GateKind.X, q)
    multi_controlled_z(circuit, data)
    for q in data:
        circuit.add(GateKind.X, q)
    for q in data:
        circuit.add(GateKind.H, q)
    return circuit


def grover(marked: Sequence[str], phase: bool = False) -> Circuit:
    """one Grover iteration from |0...0>, with the oracle kept as a black box"""
    k = _check_marked(marked)
    data = list(range(k))
    if phase:
        body = phase_oracle(marked)
        circuit = Circuit(k, oracles={ORACLE_TAG: body})
        for q in data:
            circuit.add(GateKind.H, q)
        circuit.add(GateKind.ORACLE, *data, tag=ORACLE_TAG)
    else:
        body = bitflip_oracle(marked)
        anc = k
        circuit = Circuit(k + 1, oracles={ORACLE_TAG: body})
        circuit.add(GateKind.X, anc).add(GateKind.H, anc)
        for q in data:
            circuit.add(GateKind.H, q)
        circuit.add(GateKind.ORACLE, *data, anc, tag=ORACLE_TAG)
    return diffusion(circuit, data)


def _parse_grover(name: str) -> Tuple[List[str], bool]:
    phase = name.startswith("grover-phase-")
    items = name[len("grover-phase-") if phase else len("grover-"):]
    return items.split(","), phase


_FIXED: Dict[str, Callable[[], Circuit]] = {
    "toffoli": lambda: Circuit(3).add(GateKind.TOFFOLI, 0, 1, 2),
    "toffoli4": lambda: Circuit(4).add(GateKind.TOFFOLI4, 0, 1, 2, 3),
    "qft4": lambda: qft(4),
    "qft5": lambda: qft(5),
}


def build_benchmark(name: str) -> Circuit:
    """
    toffoli, toffoli4, qft<n>, grover-<bits>[,<bits>] (bit-flip oracle) or
    grover-phase-<bits>[,<bits>] (phase oracle)
    """
    key = name.strip().lower()
    if key in _FIXED:
        return _FIXED[key]()
    if key.startswith("qft") and key[3:].isdigit():
        return qft(int(key[3:]))
    if key.startswith("grover-"):
        marked, phase = _parse_grover(key)
        return grover(marked, phase)
    raise ValueError(f"unknown benchmark `{name}`")


def marked_items(name: str) -> Optional[List[str]]:
    if not name.startswith("grover-"):
        return None
    return _parse_grover(name)[0]


def marked_probability(
    state: np.ndarray,
    marked: Sequence[str],
    data_qubits: Sequence[int],
    n: int,
) -> float:
    """probability of reading one of the marked strings on the data qubits"""
    return marginal_probability(state, n, list(data_qubits), marked)


def compiled_marked_probability(
    physical: Circuit,
    output_perm: Sequence[int],
    ions: Sequence[int],
    marked: Sequence[str],
) -> float:
    """runs a compiled Grover schedule from |0...0> and reads the data register off its ions"""
    state = simulate(physical, basis_state(0, physical.n))
    state = permutation_matrix(output_perm) @ state
    return marked_probability(state, marked, ions[: len(marked[0])], physical.n)
