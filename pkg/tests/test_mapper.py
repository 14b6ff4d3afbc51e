import numpy as np
import pytest

from ion_compiler.formats import parse_machine
from ion_compiler.ir import PACKAGE_ROOT
from ion_compiler.ir.gates import Circuit, GateKind
from ion_compiler.linalg import circuit_unitary, permutation_matrix
from ion_compiler.mapper import GREEDY, Mapping, eliminate_swaps, find_mapping, score_mapping


def _toffoli() -> Circuit:
    return Circuit(3).add(GateKind.TOFFOLI, 0, 1, 2)


def test_eliminate_swaps_keeps_unitary():
    circuit = (
        Circuit(3)
        .add(GateKind.H, 0)
        .add(GateKind.CNOT, 0, 1)
        .add(GateKind.SWAP, 1, 2)
        .add(GateKind.CZ, 2, 0)
        .add(GateKind.SWAP, 0, 1)
        .add(GateKind.X, 1)
        .add(GateKind.T, 2)
    )
    swap_free, perm = eliminate_swaps(circuit)
    assert swap_free.count(GateKind.SWAP) == 0
    assert len(swap_free) == 5
    assert sorted(perm) == [0, 1, 2]
    assert np.allclose(permutation_matrix(perm) @ circuit_unitary(swap_free), circuit_unitary(circuit))


def test_eliminate_swaps_without_swaps():
    circuit = Circuit(2).add(GateKind.CNOT, 0, 1)
    swap_free, perm = eliminate_swaps(circuit)
    assert swap_free.gates == circuit.gates
    assert perm == (0, 1)


def test_single_swap_permutation():
    _, perm = eliminate_swaps(Circuit(3).add(GateKind.SWAP, 0, 2))
    assert perm == (2, 1, 0)


def test_toffoli_placements_tie(machine):
    # every placement cancels the two RY pairs on the control wire, so the first one wins
    mapping = find_mapping(_toffoli(), machine)
    assert mapping.permutation == (0, 1, 2)
    assert mapping.score == (-0.2, 2)
    assert score_mapping(_toffoli(), (1, 3, 4), machine) == mapping.score


def test_find_mapping_prefers_low_error_pairs():
    text = (PACKAGE_ROOT / "machines" / "default.cfg").read_text() + "E 3 5 0.02\n"
    machine = parse_machine(text)
    mapping = find_mapping(Circuit(2).add(GateKind.CNOT, 0, 1), machine)
    assert mapping.permutation == (2, 4)
    assert mapping.ions() == "3,5"


def test_greedy_mapping(machine):
    mapping = find_mapping(_toffoli(), machine, strategy=GREEDY)
    # busiest qubit (the middle control) is placed first
    assert mapping.permutation == (1, 0, 2)
    assert mapping.score[1] == 2


def test_mapping_ions_are_one_based():
    assert Mapping((1, 3, 4), (0.0, 0)).ions() == "2,4,5"


def test_find_mapping_errors(machine):
    with pytest.raises(ValueError):
        find_mapping(Circuit(6).add(GateKind.H, 5), machine)
    with pytest.raises(ValueError):
        find_mapping(_toffoli(), machine, strategy="annealing")


@pytest.mark.parametrize("permutation", [(0, 0, 1), (0, 1), (0, 1, 5)])
def test_score_mapping_rejects_bad_permutation(machine, permutation):
    with pytest.raises(ValueError):
        score_mapping(_toffoli(), permutation, machine)
