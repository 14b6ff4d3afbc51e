from dataclasses import dataclass
from math import pi
from typing import List, Optional

from ion_compiler.constants import TOL
from ion_compiler.ir.gates import ARITY, N_PARAMS, PHYSICAL_KINDS, POWER_KINDS, Circuit, GateKind, Level
from ion_compiler.ir.models import MachineConfig


@dataclass(frozen=True)
class Diagnostic:
    index: Optional[int]
    message: str

    def __str__(self) -> str:
        where = "circuit" if self.index is None else f"gate {self.index}"
        return f"{where}: {self.message}"


def validate(circuit: Circuit, machine: MachineConfig) -> List[Diagnostic]:
    """
    Checks arities, parameter ranges, qubit bounds and, for physical circuits,
    that every XX carries the machine's sign for its ion pair.
    Returns one diagnostic per violation; an empty list means the circuit is valid.
    """
    diagnostics: List[Diagnostic] = []
    if circuit.n > machine.n:
        diagnostics.append(
            Diagnostic(None, f"circuit needs {circuit.n} qubits, machine has {machine.n}")
        )

    for index, g in enumerate(circuit.gates):
        if g.kind == GateKind.ORACLE:
            body = circuit.oracles.get(g.tag)
            if body is None:
                diagnostics.append(Diagnostic(index, f"unknown oracle tag `{g.tag}`"))
            elif body.n != len(g.qubits):
                diagnostics.append(
                    Diagnostic(index, f"oracle `{g.tag}` expects {body.n} qubits, got {len(g.qubits)}")
                )
        elif len(g.qubits) != ARITY[g.kind]:
            diagnostics.append(
                Diagnostic(index, f"{g.kind.value} expects {ARITY[g.kind]} qubits, got {len(g.qubits)}")
            )
        if len(set(g.qubits)) != len(g.qubits):
            diagnostics.append(Diagnostic(index, f"repeated qubit in {g.kind.value} {list(g.qubits)}"))
        out_of_range = [q for q in g.qubits if not 0 <= q < circuit.n]
        if out_of_range:
            diagnostics.append(Diagnostic(index, f"qubit {out_of_range[0]} out of range for {circuit.n} qubits"))

        expected_params = N_PARAMS.get(g.kind, 0)
        if len(g.params) != expected_params:
            diagnostics.append(
                Diagnostic(index, f"{g.kind.value} expects {expected_params} parameters, got {len(g.params)}")
            )
            continue

        if g.kind in POWER_KINDS and not -1 - TOL <= g.angle <= 1 + TOL:
            diagnostics.append(Diagnostic(index, f"power {g.angle:g} outside [-1, 1]"))
        if g.kind == GateKind.XX and abs(g.angle) > pi / 2 + TOL:
            diagnostics.append(Diagnostic(index, f"χ out of range: |{g.angle:.6g}| > π/2"))

        if circuit.level == Level.PHYSICAL:
            if g.kind not in PHYSICAL_KINDS:
                diagnostics.append(Diagnostic(index, f"non-physical gate {g.kind.value} in physical circuit"))
            elif g.kind == GateKind.XX and len(set(g.qubits)) == 2 and not out_of_range and abs(g.angle) > TOL:
                a, b = g.qubits
                if a < machine.n and b < machine.n and (g.angle > 0) != (machine.sign(a, b) > 0):
                    diagnostics.append(
                        Diagnostic(index, f"χ sign mismatch on ions ({a + 1},{b + 1})")
                    )
    return diagnostics
