"""
Placement of logical qubits on ions and classical removal of SWAP gates.
"""
from dataclasses import dataclass
from itertools import permutations
from typing import List, Optional, Sequence, Tuple

from joblib import Parallel, delayed

from ion_compiler.constants import EXHAUSTIVE_MAPPING_LIMIT
from ion_compiler.ir.gates import Circuit, GateKind, expand_oracles
from ion_compiler.ir.models import MachineConfig
from ion_compiler.logger import logger
from ion_compiler.optimizer.signs import expand_composites, sign_plan

MappingScore = Tuple[float, int]

EXHAUSTIVE = "exhaustive"
GREEDY = "greedy"


@dataclass(frozen=True)
class Mapping:
    """
    Args:
        permutation (Tuple[int, ...]): Ion holding each logical qubit.
        score (MappingScore): (pair quality, predicted RY cancellations), higher is better.
    """

    permutation: Tuple[int, ...]
    score: MappingScore

    def ions(self) -> str:
        return ",".join(str(ion + 1) for ion in self.permutation)


def _prepare(circuit: Circuit) -> Circuit:
    return expand_composites(expand_oracles(circuit))


def _pair_quality(circuit: Circuit, permutation: Sequence[int], machine: MachineConfig) -> float:
    total = sum(
        machine.pair_error(permutation[g.qubits[0]], permutation[g.qubits[1]])
        for g in circuit.gates
        if len(g.qubits) == 2
    )
    return round(-total, 12)


def _score(prepared: Circuit, permutation: Sequence[int], machine: MachineConfig) -> MappingScore:
    placed = prepared.relabel(permutation, machine.n)
    return _pair_quality(prepared, permutation, machine), sign_plan(placed, machine).cancellations


def score_mapping(circuit: Circuit, permutation: Sequence[int], machine: MachineConfig) -> MappingScore:
    """
    (−Σ E over two-qubit gate uses, RY(±pi/2) cancellations the sign choice achieves
    once the circuit sits on these ions); compared lexicographically
    """
    _check_permutation(circuit, permutation, machine)
    return _score(_prepare(circuit), permutation, machine)


def _check_permutation(circuit: Circuit, permutation: Sequence[int], machine: MachineConfig) -> None:
    if len(permutation) != circuit.n:
        raise ValueError(f"mapping has {len(permutation)} entries for {circuit.n} qubits")
    if len(set(permutation)) != len(permutation) or any(not 0 <= p < machine.n for p in permutation):
        raise ValueError(f"mapping {list(permutation)} is not an injection into {machine.n} ions")


def find_mapping(
    circuit: Circuit,
    machine: MachineConfig,
    strategy: str = EXHAUSTIVE,
    n_jobs: int = 1,
) -> Mapping:
    """
    Best placement of the circuit's qubits on the machine's ions. Exhaustive search
    walks injections in lexicographic order, so the first best one wins ties.
    """
    if circuit.n > machine.n:
        raise ValueError(f"circuit needs {circuit.n} qubits, machine has {machine.n} ions")
    if strategy not in (EXHAUSTIVE, GREEDY):
        raise ValueError(f"unknown mapping strategy `{strategy}`")
    prepared = _prepare(circuit)
    if strategy == EXHAUSTIVE and circuit.n > EXHAUSTIVE_MAPPING_LIMIT:
        logger.warning(
            f"{circuit.n} qubits exceed the exhaustive mapping limit of {EXHAUSTIVE_MAPPING_LIMIT}, placing greedily"
        )
        strategy = GREEDY
    if strategy == GREEDY:
        permutation = _greedy(prepared, machine)
        return Mapping(permutation, _score(prepared, permutation, machine))

    candidates = list(permutations(range(machine.n), circuit.n))
    if n_jobs == 1:
        scores = [_score(prepared, p, machine) for p in candidates]
    else:
        scores = Parallel(n_jobs=n_jobs)(delayed(_score)(prepared, p, machine) for p in candidates)
    best = 0
    for i, score in enumerate(scores):
        if score > scores[best]:
            best = i
    mapping = Mapping(tuple(candidates[best]), scores[best])
    logger.info(f"mapped {circuit.n} qubits onto ions {mapping.ions()} with score {mapping.score}")
    return mapping


def _greedy(circuit: Circuit, machine: MachineConfig) -> Tuple[int, ...]:
    """busiest logical qubit first, each onto the free ion with the lowest E towards placed partners"""
    degree = [0] * circuit.n
    partners: List[List[int]] = [[] for _ in range(circuit.n)]
    for g in circuit.gates:
        if len(g.qubits) == 2:
            a, b = g.qubits
            degree[a] += 1
            degree[b] += 1
            partners[a].append(b)
            partners[b].append(a)
    placed: List[Optional[int]] = [None] * circuit.n
    free = list(range(machine.n))
    for q in sorted(range(circuit.n), key=lambda q: (-degree[q], q)):
        ion = min(
            free,
            key=lambda ion: (
                sum(machine.pair_error(ion, placed[p]) for p in partners[q] if placed[p] is not None),
                ion,
            ),
        )
        placed[q] = ion
        free.remove(ion)
    return tuple(placed)


def eliminate_swaps(circuit: Circuit) -> Tuple[Circuit, Tuple[int, ...]]:
    """
    Drops every SWAP and relabels the gates after it. The returned permutation
    moves the content of qubit i onto qubit perm[i]; applied after the SWAP-free
    circuit it restores the original output.
    """
    location = list(range(circuit.n))
    gates = []
    for g in circuit.gates:
        if g.kind == GateKind.SWAP:
            a, b = g.qubits
            location[a], location[b] = location[b], location[a]
            continue
        gates.append(g.relabel(location))
    permutation = [0] * circuit.n
    for wire, held in enumerate(location):
        permutation[held] = wire
    return circuit.with_gates(gates), tuple(permutation)
