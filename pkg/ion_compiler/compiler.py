from dataclasses import dataclass, field
from enum import Enum
from math import pi
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ion_compiler.constants import MAX_DENSE_QUBITS, TOL, VERIFY_TOL
from ion_compiler.cost.ledger import CostVector, Lemma1Bound, circuit_cost, lemma1_bound
from ion_compiler.gatelib.decompositions import compile_zcz
from ion_compiler.ir import PROJECT_ROOT
from ion_compiler.ir.gates import Circuit, GateKind, Level, Z_AXIS_KINDS, expand_oracles
from ion_compiler.ir.models import MachineConfig, default_machine
from ion_compiler.ir.validation import validate
from ion_compiler.linalg import circuit_unitary, equiv_global_phase, global_phase, permutation_matrix
from ion_compiler.logger import logger
from ion_compiler.mapper import EXHAUSTIVE, Mapping, _check_permutation, eliminate_swaps, find_mapping, score_mapping
from ion_compiler.optimizer.optimize import optimize
from ion_compiler.optimizer.plan import Objective, PassStats, RewritePlan
from ion_compiler.optimizer.signs import decompose


class VerificationError(RuntimeError):
    pass


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    SKIPPED = "skipped"


@dataclass(frozen=True)
class Verification:
    verdict: Verdict
    reason: str = ""

    def __str__(self) -> str:
        return f"{self.verdict.value} ({self.reason})" if self.reason else self.verdict.value


def verify(
    logical: Circuit,
    physical: Circuit,
    perm: Optional[Sequence[int]] = None,
    mapping: Optional[Sequence[int]] = None,
) -> Verification:
    """
    Compares the logical circuit, placed by `mapping` onto the physical register, with
    the physical circuit followed by the output relabeling `perm`, up to global phase.
    """
    if mapping is not None:
        logical = logical.relabel(mapping, physical.n)
    if logical.n != physical.n:
        raise ValueError(f"dimension mismatch: logical has {logical.n} qubits, physical {physical.n}")
    n = physical.n
    if n > MAX_DENSE_QUBITS:
        return Verification(Verdict.SKIPPED, f"{n} qubits exceed the dense simulation limit of {MAX_DENSE_QUBITS}")
    perm = list(perm) if perm is not None else list(range(n))
    expected = circuit_unitary(expand_oracles(logical))
    actual = permutation_matrix(perm) @ circuit_unitary(physical)
    if equiv_global_phase(expected, actual, VERIFY_TOL):
        return Verification(Verdict.YES)
    return Verification(Verdict.NO, f"max deviation {_deviation(expected, actual):.3g}")


def _deviation(u: np.ndarray, v: np.ndarray) -> float:
    return float(np.max(np.abs(u - global_phase(u, v) * v)))


@dataclass
class CompilationReport:
    """
    Everything a compilation produced besides the schedule itself.

    Args:
        name (str): Circuit name used in tables and file names.
        n_qubits (int): Logical qubit count.
        logical_counts (Dict[str, int]): Logical gates by mnemonic.
        mapping (Mapping): Ion chosen for each logical qubit.
        output_perm (Tuple[int, ...]): Relabeling of ions applied after the schedule.
        pulses_1q (int): Single-qubit R pulses.
        pulses_2q (int): XX gates.
        cost (CostVector): Duration and error ledgers.
        passes (List[Tuple[str, PassStats]]): Optimizer statistics per segment.
        verification (Verification): Unitary check outcome.
        lemma1 (Lemma1Bound): Pulse bounds for the circuit size.
        rx_pulses (int): Pulses about the x axis.
        objective (str): Objective label.
        paths (List[Tuple[str, str]]): Decomposition route taken per segment.
    """

    name: str
    n_qubits: int
    logical_counts: Dict[str, int]
    mapping: Mapping
    output_perm: Tuple[int, ...]
    pulses_1q: int
    pulses_2q: int
    cost: CostVector
    passes: List[Tuple[str, PassStats]]
    verification: Verification
    lemma1: Lemma1Bound
    rx_pulses: int
    objective: str
    paths: List[Tuple[str, str]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def lemma1_ok(self) -> bool:
        return self.pulses_1q <= self.lemma1.gate_bound

    @property
    def lemma3_ok(self) -> Optional[bool]:
        """RX-form pulses within n, checked for the error objective on oracle-free circuits"""
        if self.objective != Objective.ERROR.value or len(self.paths) != 1:
            return None
        return self.rx_pulses <= self.n_qubits


def _is_zcz(circuit: Circuit) -> bool:
    return bool(circuit.gates) and all(g.kind in Z_AXIS_KINDS or g.kind == GateKind.CZ for g in circuit.gates)


def _segments(circuit: Circuit) -> List[Tuple[str, Circuit]]:
    """splits at ORACLE gates; each oracle body becomes its own segment"""
    segments: List[Tuple[str, Circuit]] = []
    pending = []
    for g in circuit.gates:
        if g.kind != GateKind.ORACLE:
            pending.append(g)
            continue
        if pending:
            segments.append((f"segment {len(segments)}", Circuit(circuit.n, pending)))
            pending = []
        body = expand_oracles(Circuit(circuit.n, [g], oracles=circuit.oracles))
        segments.append((f"oracle {g.tag}", body))
    if pending or not segments:
        segments.append((f"segment {len(segments)}", Circuit(circuit.n, pending)))
    return segments


def _rx_form(g) -> bool:
    if g.kind != GateKind.R:
        return False
    offset = abs(g.params[1]) % pi
    return offset < TOL or pi - offset < TOL


class IonCompiler:
    """
    Orchestrates compilation of a logical circuit into an R/XX pulse schedule:
    SWAP elimination, ion placement, decomposition, optimization, verification
    and reporting.

    Args:
        machine (MachineConfig, optional): Target machine. Defaults to the bundled 5-ion machine.
        plan (RewritePlan, optional): Optimizer objective and passes. Defaults to the time objective.
        verify (bool, optional): Whether to check the result by simulation. Defaults to True.
        strategy (str, optional): Mapping search, exhaustive or greedy. Defaults to exhaustive.
        n_jobs (int, optional): joblib workers for the mapping search. Defaults to 1.
        output_dir (Path, optional): Where schedules and reports are written. Defaults to output/.
    """

    def __init__(
        self,
        machine: Optional[MachineConfig] = None,
        plan: Optional[RewritePlan] = None,
        verify: bool = True,
        strategy: str = EXHAUSTIVE,
        n_jobs: int = 1,
        output_dir: Optional[Path] = None,
    ):
        self.machine = machine or default_machine()
        self.plan = plan or RewritePlan()
        self.verify = verify
        self.strategy = strategy
        self.n_jobs = n_jobs
        self.output_dir = output_dir or PROJECT_ROOT / "output"

    def _compile_segment(self, placed: Circuit) -> Tuple[Circuit, List[PassStats], str]:
        generic, stats = optimize(decompose(placed, self.machine), self.plan, self.machine)
        if not _is_zcz(placed) or placed.n > MAX_DENSE_QUBITS:
            return generic, stats, "generic"
        zcz = compile_zcz(placed, machine=self.machine)
        fast, fast_stats = optimize(Circuit(placed.n, zcz.gates, Level.PULSE), self.plan, self.machine)
        if fast.single_qubit_count <= generic.single_qubit_count:
            return fast, fast_stats, "z/cz"
        return generic, stats, "generic"

    def compile(
        self,
        circuit: Circuit,
        mapping: Optional[Sequence[int]] = None,
        name: str = "circuit",
    ) -> Tuple[Circuit, CompilationReport]:
        """
        Compiles `circuit` for the machine.

        Args:
            circuit (Circuit): Logical circuit.
            mapping (Sequence[int], optional): Ion per logical qubit; searched for when omitted.
            name (str, optional): Label carried into the report.

        Returns:
            The physical circuit and its CompilationReport.

        Raises:
            ValueError: The circuit fails validation.
            VerificationError: The schedule does not implement the circuit.
        """
        machine = self.machine
        diagnostics = validate(circuit, machine)
        if diagnostics:
            raise ValueError("invalid circuit:\n" + "\n".join(str(d) for d in diagnostics))

        swap_free, output_perm = eliminate_swaps(circuit)
        if mapping is None:
            placement = find_mapping(swap_free, machine, self.strategy, self.n_jobs)
        else:
            _check_permutation(circuit, mapping, machine)
            placement = Mapping(tuple(mapping), score_mapping(swap_free, mapping, machine))
            logger.info(f"{name}: using ions {placement.ions()}")
        ions = placement.permutation

        gates, passes, paths = [], [], []
        for label, segment in _segments(swap_free):
            compiled, stats, path = self._compile_segment(segment.relabel(ions, machine.n))
            gates += compiled.gates
            passes += [(label, s) for s in stats]
            paths.append((label, path))
            for s in stats:
                logger.info(f"{name} {label}: {s.name} {s.gates_before} -> {s.gates_after} gates{' (reverted)' if s.reverted else ''}")
        physical = Circuit(machine.n, gates, Level.PHYSICAL)

        problems = validate(physical, machine)
        if problems:
            raise RuntimeError("compiled circuit is not physical:\n" + "\n".join(str(p) for p in problems))

        ion_perm = list(range(machine.n))
        for q in range(circuit.n):
            ion_perm[ions[q]] = ions[output_perm[q]]

        if self.verify:
            verification = verify(circuit, physical, ion_perm, mapping=ions)
        else:
            verification = Verification(Verdict.SKIPPED, "disabled")
        if verification.verdict == Verdict.SKIPPED:
            logger.warning(f"{name}: verification skipped, {verification.reason}")
        elif verification.verdict == Verdict.NO:
            raise VerificationError(f"{name}: compiled schedule is not equivalent to the circuit, {verification.reason}")
        else:
            logger.info(f"{name}: verified equivalent up to global phase")

        counts: Dict[str, int] = {}
        for g in circuit.gates:
            counts[g.kind.value] = counts.get(g.kind.value, 0) + 1
        report = CompilationReport(
            name=name,
            n_qubits=circuit.n,
            logical_counts=counts,
            mapping=placement,
            output_perm=tuple(ion_perm),
            pulses_1q=physical.single_qubit_count,
            pulses_2q=physical.xx_count,
            cost=circuit_cost(physical, machine),
            passes=passes,
            verification=verification,
            lemma1=lemma1_bound(circuit.n, physical.xx_count, machine.tau1q),
            rx_pulses=sum(1 for g in physical.gates if _rx_form(g)),
            objective=self.plan.label,
            paths=paths,
        )
        if not report.lemma1_ok:
            logger.warning(f"{name}: {report.pulses_1q} pulses exceed the bound {report.lemma1.gate_bound}")
        return physical, report

    def write_schedule(self, physical: Circuit, report: CompilationReport, path: Optional[Path] = None) -> Path:
        from ion_compiler.formats import emit_schedule

        path = Path(path) if path else self.output_dir / f"{report.name}.sched"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(emit_schedule(physical, report.output_perm, report.cost, report.mapping.permutation))
        return path

    def write_report(self, report: CompilationReport, path: Optional[Path] = None, fmt: str = "text") -> Path:
        from ion_compiler.formats import emit_report

        suffix = "txt" if fmt == "text" else "report"
        path = Path(path) if path else self.output_dir / f"{report.name}.{suffix}"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(emit_report(report, fmt))
        return path


def compile_circuit(
    circuit: Circuit,
    machine: Optional[MachineConfig] = None,
    plan: Optional[RewritePlan] = None,
    mapping: Optional[Sequence[int]] = None,
    verify: bool = True,
) -> Tuple[Circuit, CompilationReport]:
    return IonCompiler(machine, plan, verify).compile(circuit, mapping)
