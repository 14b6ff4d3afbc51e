import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
from dotenv import load_dotenv

from ion_compiler.bench import run_bench
from ion_compiler.compiler import IonCompiler, VerificationError, Verdict, verify
from ion_compiler.formats import emit_report, parse_machine, parse_schedule, read_circuit, schedule_ions
from ion_compiler.ir import PACKAGE_ROOT, PROJECT_ROOT
from ion_compiler.ir.gates import expand_oracles
from ion_compiler.ir.models import MachineConfig, default_machine
from ion_compiler.linalg import basis_state, permutation_matrix, probabilities, simulate
from ion_compiler.logger import logger
from ion_compiler.optimizer.plan import RewritePlan

DEFAULT_MACHINE = PACKAGE_ROOT / "machines" / "default.cfg"
OUTPUT_DIR = PROJECT_ROOT / "output"


parser = argparse.ArgumentParser(prog="ion-compile", description="Compile circuits into trapped-ion R/XX pulse schedules")
subparsers = parser.add_subparsers(dest="command", required=True)

compile_parser = subparsers.add_parser("compile", help="Compile a circuit into a pulse schedule")
compile_parser.add_argument("circuit", help="Circuit file", type=Path)
compile_parser.add_argument("--machine", help="Machine description", type=Path, required=False)
compile_parser.add_argument("--objective", help="time, error or balanced=<lambda>", type=str, default="time")
compile_parser.add_argument("--no-verify", help="Skip the unitary check", action="store_true")
compile_parser.add_argument("--schedule", help="Schedule output file", type=Path, required=False)
compile_parser.add_argument("--report", help="Report output file", type=Path, required=False)
compile_parser.add_argument("--format", help="Report format", choices=["text", "structured"], default="text")
compile_parser.add_argument("--mapping", help="Ions for the logical qubits, e.g. 2,4,5", type=str, required=False)
compile_parser.add_argument("--name", help="Name used in reports and output files", type=str, required=False)
compile_parser.add_argument("--strategy", help="Mapping search", choices=["exhaustive", "greedy"], default="exhaustive")
compile_parser.add_argument("--jobs", help="Workers for the mapping search", type=int, default=1)

verify_parser = subparsers.add_parser("verify", help="Check a schedule against its logical circuit")
verify_parser.add_argument("logical", help="Logical circuit file", type=Path)
verify_parser.add_argument("schedule", help="Schedule file", type=Path)
verify_parser.add_argument("--mapping", help="Ions for the logical qubits, overrides the schedule header", type=str, required=False)

simulate_parser = subparsers.add_parser("simulate", help="Run a circuit or schedule on a basis state")
simulate_parser.add_argument("circuit", help="Circuit or schedule file", type=Path)
simulate_parser.add_argument("--state", help="Input bitstring, qubit 0 first", type=str, required=False)
simulate_parser.add_argument("--probs", help="Print outcome probabilities instead of amplitudes", action="store_true")

bench_parser = subparsers.add_parser("bench", help="Compile the bundled benchmarks and check their expected values")
bench_parser.add_argument("names", help="Benchmark names, or all", nargs="*", default=["all"])
bench_parser.add_argument("--jobs", help="Parallel benchmark workers", type=int, default=1)
bench_parser.add_argument("--csv", help="CSV output file", type=Path, required=False)
bench_parser.add_argument("--machine", help="Machine description", type=Path, required=False)

bounds_parser = subparsers.add_parser("lemma-bounds", help="Pulse bounds for a circuit next to its compiled counts")
bounds_parser.add_argument("circuit", help="Circuit file", type=Path)
bounds_parser.add_argument("--machine", help="Machine description", type=Path, required=False)


def load_machine(path: Optional[Path]) -> MachineConfig:
    if path is None:
        return parse_machine(DEFAULT_MACHINE.read_text(), str(DEFAULT_MACHINE)) if DEFAULT_MACHINE.exists() else default_machine()
    return parse_machine(path.read_text(), str(path))


def parse_mapping(text: str) -> List[int]:
    try:
        return [int(ion) - 1 for ion in text.replace(" ", "").split(",")]
    except ValueError:
        raise ValueError(f"mapping `{text}` must be comma-separated ion numbers, e.g. 2,4,5") from None


def cmd_compile(args: argparse.Namespace) -> int:
    machine = load_machine(args.machine)
    circuit, _ = read_circuit(args.circuit.read_text(), str(args.circuit))
    mapping = parse_mapping(args.mapping) if args.mapping else None
    name = args.name or args.circuit.stem
    compiler = IonCompiler(
        machine,
        RewritePlan.from_objective(args.objective),
        verify=not args.no_verify,
        strategy=args.strategy,
        n_jobs=args.jobs,
        output_dir=OUTPUT_DIR,
    )
    physical, report = compiler.compile(circuit, mapping, name=name)
    schedule_path = compiler.write_schedule(physical, report, args.schedule)
    logger.info(f"schedule written to {schedule_path}")
    if args.report:
        compiler.write_report(report, args.report, args.format)
        logger.info(f"report written to {args.report}")
    print(emit_report(report, args.format), end="")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    logical, _ = read_circuit(args.logical.read_text(), str(args.logical))
    text = args.schedule.read_text()
    physical, perm = parse_schedule(text, str(args.schedule))
    mapping = parse_mapping(args.mapping) if args.mapping else schedule_ions(text)
    if mapping is None and logical.n != physical.n:
        raise ValueError(f"{args.schedule} records no ion placement; pass --mapping")
    verification = verify(logical, physical, perm, mapping)
    print(f"equivalent: {verification}")
    if verification.verdict == Verdict.NO:
        raise VerificationError(f"{args.schedule} does not implement {args.logical}")
    return 0


def _format_amplitude(value: complex) -> str:
    return f"{value.real:+.6f}{value.imag:+.6f}i"


def cmd_simulate(args: argparse.Namespace) -> int:
    circuit, perm = read_circuit(args.circuit.read_text(), str(args.circuit))
    state = basis_state(args.state if args.state else 0, circuit.n)
    state = simulate(expand_oracles(circuit), state)
    if perm is not None:
        state = permutation_matrix(perm) @ state
    values = probabilities(state) if args.probs else state
    for index in np.flatnonzero(np.abs(values) > 1e-12):
        bits = format(int(index), f"0{circuit.n}b")
        shown = f"{values[index]:.9f}" if args.probs else _format_amplitude(values[index])
        print(f"{bits} {shown}")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    names = None if args.names in ([], ["all"]) else args.names
    machine = load_machine(args.machine)
    table = run_bench(names, machine, jobs=args.jobs)
    csv_path = args.csv or OUTPUT_DIR / "bench.csv"
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(csv_path, index=False)
    print(table.to_string(index=False))
    failed = int((table["status"] == "FAIL").sum())
    if failed:
        logger.warning(f"{failed} of {len(table)} benchmarks failed")
        return 1
    return 0


def cmd_lemma_bounds(args: argparse.Namespace) -> int:
    machine = load_machine(args.machine)
    circuit, _ = read_circuit(args.circuit.read_text(), str(args.circuit))
    _, report = IonCompiler(machine, verify=False).compile(circuit, name=args.circuit.stem)
    bound = report.lemma1
    print(f"qubits: {bound.n}")
    print(f"XX gates: {bound.G}")
    print(f"wire pieces: {bound.pieces}")
    print(f"R pulses: {report.pulses_1q} <= {bound.gate_bound}")
    print(f"all pulses: {report.pulses_1q + report.pulses_2q} <= {bound.total_gate_bound}")
    print(f"R pulse time: <= {bound.time_bound:g} us")
    print(f"R pulse error: <= {bound.error_bound:g} eps")
    return 0 if report.lemma1_ok else 1


COMMANDS = {
    "compile": cmd_compile,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "bench": cmd_bench,
    "lemma-bounds": cmd_lemma_bounds,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    load_dotenv()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except VerificationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
