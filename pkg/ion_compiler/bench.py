import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from joblib import Parallel, delayed

from ion_compiler.benchmarks import PINNED_MAPPINGS, build_benchmark, compiled_marked_probability, marked_items
from ion_compiler.compiler import IonCompiler, VerificationError, Verdict
from ion_compiler.formats import _number
from ion_compiler.ir import PACKAGE_ROOT
from ion_compiler.ir.models import MachineConfig, default_machine
from ion_compiler.logger import logger
from ion_compiler.optimizer.plan import RewritePlan

BENCH_EXPECTED = PACKAGE_ROOT / "expected" / "bench.json"
COLUMNS = ["name", "#q", "1q", "2q", "time", "e1", "e2", "status", "notes"]


def load_expected(path: Path = BENCH_EXPECTED) -> List[Dict[str, Any]]:
    with open(path) as f:
        return json.load(f)


def _close(value: float, expected: float, tol: float = 1e-6) -> bool:
    return abs(value - expected) <= tol * max(1.0, abs(expected))


def run_row(row: Dict[str, Any], machine: Optional[MachineConfig] = None) -> Dict[str, Any]:
    """compiles one benchmark row and checks it against its hard criteria; targets only add notes"""
    machine = machine or default_machine()
    name = row["name"]
    label = row.get("label", name)
    plan = RewritePlan.from_objective(row.get("objective", "time"))
    circuit = build_benchmark(name)
    if "mapping" in row:
        mapping = [ion - 1 for ion in row["mapping"]]
    else:
        mapping = PINNED_MAPPINGS.get(name)

    failures: List[str] = []
    notes: List[str] = []
    try:
        physical, report = IonCompiler(machine, plan).compile(circuit, mapping, name=label)
    except VerificationError as e:
        return {**dict.fromkeys(COLUMNS, ""), "name": label, "#q": circuit.n, "status": "FAIL", "notes": str(e)}

    cost = report.cost
    if report.verification.verdict != Verdict.YES:
        failures.append(f"verification {report.verification}")
    if not report.lemma1_ok:
        failures.append(f"{report.pulses_1q} pulses exceed {report.lemma1.gate_bound}")
    if "xx" in row and report.pulses_2q != row["xx"]:
        failures.append(f"{report.pulses_2q} XX, expected {row['xx']}")
    if "xx_min" in row and report.pulses_2q < row["xx_min"]:
        failures.append(f"{report.pulses_2q} XX below {row['xx_min']}")
    if "xx_max" in row and report.pulses_2q > row["xx_max"]:
        failures.append(f"{report.pulses_2q} XX above {row['xx_max']}")
    if "pulses_1q" in row and report.pulses_1q != row["pulses_1q"]:
        failures.append(f"{report.pulses_1q} pulses, expected {row['pulses_1q']}")
    if "pulses_1q_max" in row and report.pulses_1q > row["pulses_1q_max"]:
        failures.append(f"{report.pulses_1q} pulses above {row['pulses_1q_max']}")
    if "time_us" in row and not _close(cost.duration_us, row["time_us"]):
        failures.append(f"{_number(cost.duration_us)} us, expected {row['time_us']}")
    if "time_us_max" in row and cost.duration_us > row["time_us_max"] + 1e-6:
        failures.append(f"{_number(cost.duration_us)} us above {row['time_us_max']}")
    if "e1" in row and cost.ledger_e1.render() != row["e1"]:
        failures.append(f"e1 {cost.ledger_e1.render()}, expected {row['e1']}")
    if "probability" in row:
        marked = marked_items(name)
        probability = compiled_marked_probability(physical, report.output_perm, report.mapping.permutation, marked)
        if not _close(probability, row["probability"], 1e-9):
            failures.append(f"marked probability {probability:.9f}, expected {row['probability']}")

    if "target_xx" in row and report.pulses_2q != row["target_xx"]:
        notes.append(f"XX target {row['target_xx']}")

    status = "FAIL" if failures else "PASS"
    result = {
        "name": label,
        "#q": circuit.n,
        "1q": report.pulses_1q,
        "2q": report.pulses_2q,
        "time": _number(cost.duration_us),
        "e1": cost.ledger_e1.render(),
        "e2": cost.ledger_e2.render(),
        "status": status,
        "notes": "; ".join(failures + notes),
    }
    logger.info(f"bench {label}: {status} {result['1q']}/{result['2q']} {result['time']} us")
    return result


def run_bench(
    names: Optional[Sequence[str]] = None,
    machine: Optional[MachineConfig] = None,
    jobs: int = 1,
    expected_path: Path = BENCH_EXPECTED,
) -> pd.DataFrame:
    """
    Compiles the bundled benchmark rows (all, or those whose name or label is in
    `names`) and returns one table row per benchmark, in bundled order.
    """
    rows = load_expected(expected_path)
    if names:
        wanted = set(names)
        rows = [row for row in rows if row["name"] in wanted or row.get("label") in wanted]
        if not rows:
            raise ValueError(f"no bundled benchmark named {sorted(wanted)}")
    if jobs == 1:
        results = [run_row(row, machine) for row in rows]
    else:
        results = Parallel(n_jobs=jobs)(delayed(run_row)(row, machine) for row in rows)
    return pd.DataFrame(results, columns=COLUMNS)
