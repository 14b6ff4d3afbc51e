"""
Text formats: circuit sources, machine descriptions, pulse schedules and reports.
Circuit and schedule files number qubits from 0; machine files number ions from 1.
"""
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from ion_compiler.constants import (
    DEFAULT_BIG_E,
    DEFAULT_EPSILON,
    DEFAULT_TAU_1Q_US,
    DEFAULT_TAU_2Q_US,
)
from ion_compiler.cost.ledger import CostVector
from ion_compiler.ir.gates import ARITY, N_PARAMS, PHYSICAL_KINDS, POWER_KINDS, Circuit, GateKind, Level, gate
from ion_compiler.ir.models import ErrorModel, MachineConfig, MachineConfigError
from ion_compiler.utils import format_angle, parse_angle

if TYPE_CHECKING:
    from ion_compiler.compiler import CompilationReport

_TOKEN = re.compile(r"\S+")
_MNEMONICS = {kind.value: kind for kind in GateKind}


class CircuitParseError(ValueError):
    def __init__(self, line: int, column: int, message: str, source: str = "<circuit>"):
        super().__init__(message)
        self.line = line
        self.column = column
        self.message = message
        self.source = source

    def __str__(self) -> str:
        return f"{self.source}:{self.line}:{self.column}: {self.message}"


@dataclass(frozen=True)
class _Token:
    text: str
    column: int


def _tokens(line: str) -> List[_Token]:
    code = line.split("#", 1)[0]
    return [_Token(m.group(0), m.start() + 1) for m in _TOKEN.finditer(code)]


def _parse_power(text: str) -> float:
    return float(Fraction(text))


class _CircuitReader:
    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source
        self.n: Optional[int] = None
        self.gates = []
        self.oracles: Dict[str, Circuit] = {}
        self.perm: Optional[Tuple[int, ...]] = None
        # open oracle body: (tag, qubit count, gates, line of `begin`)
        self.body: Optional[Tuple[str, int, list, int]] = None

    def error(self, line: int, token: Optional[_Token], message: str) -> CircuitParseError:
        return CircuitParseError(line, token.column if token else 1, message, self.source)

    def _int(self, line: int, token: _Token, what: str) -> int:
        try:
            return int(token.text)
        except ValueError:
            raise self.error(line, token, f"{what} must be an integer, got `{token.text}`") from None

    def read(self) -> Tuple[Circuit, Optional[Tuple[int, ...]]]:
        for number, line in enumerate(self.text.splitlines(), start=1):
            tokens = _tokens(line)
            if tokens:
                self._line(number, tokens)
        if self.body is not None:
            raise self.error(self.body[3], None, f"oracle `{self.body[0]}` is missing `end`")
        if self.n is None:
            raise CircuitParseError(1, 1, "missing `qubits N` header", self.source)
        return Circuit(self.n, self.gates, Level.LOGICAL, self.oracles), self.perm

    def _line(self, number: int, tokens: List[_Token]) -> None:
        head, *rest = tokens
        word = head.text.lower()
        if word == "qubits":
            if self.n is not None or len(rest) != 1:
                raise self.error(number, head, "`qubits N` must appear once, with one count")
            self.n = self._int(number, rest[0], "qubit count")
            if self.n < 1:
                raise self.error(number, rest[0], "qubit count must be positive")
            return
        if self.n is None:
            raise self.error(number, head, "expected `qubits N` before the first gate")
        if word == "begin":
            if self.body is not None:
                raise self.error(number, head, "oracle bodies cannot nest")
            if len(rest) != 2:
                raise self.error(number, head, "expected `begin <tag> <qubits>`")
            self.body = (rest[0].text, self._int(number, rest[1], "oracle width"), [], number)
            return
        if word == "end":
            if self.body is None:
                raise self.error(number, head, "`end` without `begin`")
            tag, width, gates, _ = self.body
            self.oracles[tag] = Circuit(width, gates)
            self.body = None
            return
        if word == "perm":
            self.perm = tuple(self._int(number, t, "permutation entry") for t in rest)
            if sorted(self.perm) != list(range(len(self.perm))):
                raise self.error(number, head, f"`{' '.join(t.text for t in rest)}` is not a permutation")
            return
        width = self.body[1] if self.body is not None else self.n
        target = self.body[2] if self.body is not None else self.gates
        target.append(self._gate(number, head, rest, width))

    def _gate(self, number: int, head: _Token, rest: List[_Token], width: int):
        kind = _MNEMONICS.get(head.text.lower())
        if kind is None:
            raise self.error(number, head, f"unknown gate `{head.text}`")
        tag = None
        if kind == GateKind.ORACLE:
            if not rest:
                raise self.error(number, head, "expected `oracle <tag> <qubits...>`")
            tag, rest = rest[0].text, rest[1:]
            if tag not in self.oracles:
                raise self.error(number, head, f"oracle `{tag}` is used before its `begin` block")
            arity = self.oracles[tag].n
        else:
            arity = ARITY[kind]
        n_params = N_PARAMS.get(kind, 0)
        if len(rest) != arity + n_params:
            raise self.error(
                number, head, f"{kind.value} takes {arity} qubits and {n_params} parameters, got {len(rest)} operands"
            )
        qubits = []
        for token in rest[:arity]:
            q = self._int(number, token, "qubit")
            if not 0 <= q < width:
                raise self.error(number, token, f"qubit {q} out of range for {width} qubits")
            qubits.append(q)
        params = []
        for token in rest[arity:]:
            try:
                params.append(_parse_power(token.text) if kind in POWER_KINDS else parse_angle(token.text))
            except (ValueError, ZeroDivisionError):
                raise self.error(number, token, f"cannot parse parameter `{token.text}`") from None
        return gate(kind, *qubits, params=params, tag=tag)


def read_circuit(text: str, source: str = "<circuit>") -> Tuple[Circuit, Optional[Tuple[int, ...]]]:
    """a circuit or schedule together with its PERM line, if it has one"""
    return _CircuitReader(text, source).read()


_IONS_COMMENT = re.compile(r"^#[ \t]*ions[ \t]+([\d, ]+?)[ \t]*$", re.MULTILINE)


def schedule_ions(text: str) -> Optional[Tuple[int, ...]]:
    """0-based ion placement recorded in a schedule header by emit_schedule"""
    match = _IONS_COMMENT.search(text)
    if match is None:
        return None
    return tuple(int(ion) - 1 for ion in match.group(1).replace(",", " ").split())


def parse_circuit(text: str, source: str = "<circuit>") -> Circuit:
    """
    Line grammar: `qubits N`, then one gate per line as `<mnemonic> <qubits...> [params]`.
    `begin <tag> <k>` ... `end` defines a k-qubit oracle body applied with
    `oracle <tag> <qubits...>`. Mnemonics are case-insensitive, so schedules with
    `R` / `XX` lines parse as well. `#` starts a comment.

    Raises:
        CircuitParseError: With the offending line and column.
    """
    circuit, _ = _CircuitReader(text, source).read()
    return circuit


def parse_schedule(text: str, source: str = "<schedule>") -> Tuple[Circuit, Tuple[int, ...]]:
    """a schedule written by emit_schedule, and its output permutation"""
    circuit, perm = _CircuitReader(text, source).read()
    if any(g.kind not in PHYSICAL_KINDS for g in circuit.gates):
        raise CircuitParseError(1, 1, "schedules may only hold R and XX pulses", source)
    if perm is not None and len(perm) != circuit.n:
        raise CircuitParseError(1, 1, f"PERM has {len(perm)} entries for {circuit.n} qubits", source)
    return circuit.with_gates(circuit.gates, Level.PHYSICAL), perm or tuple(range(circuit.n))


_MACHINE_KEYS = {"n", "tau1q_us", "tau2q_us", "epsilon", "e", "error_model"}


def parse_machine(text: str, source: str = "<machine>") -> MachineConfig:
    """
    `key = value` lines for n, tau1q_us, tau2q_us, epsilon, E and error_model,
    `sign i j +|-` for every ion pair (1-based) and optional `E i j <value>` overrides.
    """
    values: Dict[str, str] = {}
    signs: Dict[Tuple[int, int], int] = {}
    pair_e: Dict[Tuple[int, int], float] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        code = line.split("#", 1)[0].strip()
        if not code:
            continue
        where = f"{source}:{number}"
        if "=" in code:
            key, value = (part.strip() for part in code.split("=", 1))
            if key.lower() not in _MACHINE_KEYS:
                raise MachineConfigError(f"{where}: unknown key `{key}`")
            values[key.lower()] = value
            continue
        words = code.split()
        if len(words) != 4 or words[0] not in ("sign", "E") or (words[0] == "sign" and words[3] not in ("+", "-")):
            raise MachineConfigError(f"{where}: cannot read `{code}`")
        try:
            pair = (int(words[1]) - 1, int(words[2]) - 1)
            if words[0] == "sign":
                signs[pair] = 1 if words[3] == "+" else -1
            else:
                pair_e[pair] = float(words[3])
        except ValueError:
            raise MachineConfigError(f"{where}: cannot read `{code}`") from None

    if "n" not in values:
        raise MachineConfigError(f"{source}: missing `n = <ions>`")
    try:
        return MachineConfig(
            n=int(values["n"]),
            tau1q=float(values.get("tau1q_us", DEFAULT_TAU_1Q_US)),
            tau2q=float(values.get("tau2q_us", DEFAULT_TAU_2Q_US)),
            epsilon=float(values.get("epsilon", DEFAULT_EPSILON)),
            big_e=float(values.get("e", DEFAULT_BIG_E)),
            chi_sign=signs,
            pair_e=pair_e,
            error_model=ErrorModel(values.get("error_model", ErrorModel.E1.value).lower()),
        )
    except ValueError as e:
        raise MachineConfigError(f"{source}: {e}") from None


def _number(value: float) -> str:
    return f"{value:.6f}".rstrip("0").rstrip(".")


def emit_schedule(
    physical: Circuit,
    perm: Optional[Sequence[int]] = None,
    cost: Optional[CostVector] = None,
    ions: Optional[Sequence[int]] = None,
) -> str:
    """
    One pulse per line in execution order (`R q theta phi`, `XX a b chi`), a header
    comment with counts and duration, and a final PERM line. `ions` (0-based logical
    placement) is recorded as a `# ions` comment so the schedule can be verified later.
    """
    bad = [g.kind.value for g in physical.gates if g.kind not in PHYSICAL_KINDS]
    if bad:
        raise TypeError(f"schedules hold only R and XX pulses, found {sorted(set(bad))}")
    header = f"# {physical.single_qubit_count} R pulses, {physical.xx_count} XX gates"
    if cost is not None:
        header += f", {_number(cost.duration_us)} us"
    lines = [header]
    if ions is not None:
        lines.append("# ions " + ",".join(str(ion + 1) for ion in ions))
    lines.append(f"qubits {physical.n}")
    for g in physical.gates:
        operands = " ".join(str(q) for q in g.qubits)
        angles = " ".join(format_angle(p) for p in g.params)
        lines.append(f"{g.kind.value.upper()} {operands} {angles}")
    perm = list(perm) if perm is not None else list(range(physical.n))
    lines.append("PERM " + " ".join(str(p) for p in perm))
    return "\n".join(lines) + "\n"


def report_dict(report: "CompilationReport") -> Dict[str, Any]:
    cost = report.cost
    return {
        "name": report.name,
        "qubits": report.n_qubits,
        "objective": report.objective,
        "logical": dict(sorted(report.logical_counts.items())),
        "mapping": {
            "ions": report.mapping.ions(),
            "pair_quality": report.mapping.score[0],
            "cancellations": report.mapping.score[1],
        },
        "output_perm": " ".join(str(p) for p in report.output_perm),
        "pulses": {"1q": report.pulses_1q, "2q": report.pulses_2q},
        "time_us": _number(cost.duration_us),
        "e1": cost.ledger_e1.render(),
        "e2": cost.ledger_e2.render(),
        "fidelity": {"e1": cost.fidelity_e1, "e2": cost.fidelity_e2},
        "verification": str(report.verification),
        "lemma1": {
            "bound": report.lemma1.gate_bound,
            "ok": report.lemma1_ok,
        },
        "lemma3": "n/a" if report.lemma3_ok is None else report.lemma3_ok,
        "paths": {label: path for label, path in report.paths},
        "notes": list(report.notes),
    }


def _flatten(tree: Dict[str, Any], prefix: str = "") -> List[Tuple[str, Any]]:
    items = []
    for key, value in tree.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            items += _flatten(value, f"{name}.")
        elif isinstance(value, list):
            items += [(f"{name}.{i}", item) for i, item in enumerate(value)]
        else:
            items.append((name, value))
    return items


def passes_frame(report: "CompilationReport") -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "segment": label,
                "pass": stats.name,
                "before": stats.gates_before,
                "after": stats.gates_after,
                "rewrites": stats.rewrites,
                "time_delta_us": round(stats.duration_delta, 6),
                "reverted": stats.reverted,
                "note": stats.note,
            }
            for label, stats in report.passes
        ]
    )


def emit_report(report: "CompilationReport", fmt: str = "text") -> str:
    """Table-style text, or `structured`: sorted-by-section `key = value` lines"""
    tree = report_dict(report)
    if fmt == "structured":
        return "\n".join(f"{key} = {value}" for key, value in _flatten(tree)) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown report format `{fmt}`; use text or structured")
    row = pd.DataFrame(
        [
            {
                "name": report.name,
                "#q": report.n_qubits,
                "1q/2q": f"{report.pulses_1q}/{report.pulses_2q}",
                "time": f"{tree['time_us']} μs",
                "e1": tree["e1"],
                "e2": tree["e2"],
            }
        ]
    )
    lines = [
        row.to_string(index=False),
        "",
        f"objective: {report.objective}",
        f"ions: {tree['mapping']['ions']}",
        f"output permutation: {tree['output_perm']}",
        f"fidelity: e1 {_fidelity(report.cost.fidelity_e1)}, e2 {_fidelity(report.cost.fidelity_e2)}",
        f"verification: {tree['verification']}",
        f"pulse bound: {report.pulses_1q} <= {report.lemma1.gate_bound} ({'ok' if report.lemma1_ok else 'exceeded'})",
        f"rx pulses: {report.rx_pulses} ({tree['lemma3']})",
    ]
    lines += [f"note: {note}" for note in report.notes]
    if report.passes:
        lines += ["", passes_frame(report).to_string(index=False)]
    return "\n".join(lines) + "\n"


def _fidelity(value: float) -> str:
    return f"{value:.6f}"
