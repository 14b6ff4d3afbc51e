from typing import List, Optional, Tuple

from ion_compiler.cost.ledger import Unit, circuit_cost
from ion_compiler.ir.gates import Circuit
from ion_compiler.ir.models import MachineConfig, default_machine
from ion_compiler.logger import logger
from ion_compiler.optimizer.plan import PassStats, RewritePlan
from ion_compiler.optimizer.registry import passes
from ion_compiler.optimizer.score import compare_scores, objective_score


def optimize(
    circuit: Circuit,
    plan: Optional[RewritePlan] = None,
    machine: Optional[MachineConfig] = None,
) -> Tuple[Circuit, List[PassStats]]:
    """
    Runs the plan's passes in order. A scored pass whose output has a higher
    objective score than its input is undone, so the score never rises, except
    where bound_pulses has to trade score for staying within the pulse bound.

    Returns:
        The optimized circuit and one PassStats per pass.
    """
    plan = plan or RewritePlan()
    machine = machine or default_machine()
    unknown = [name for name in plan.pass_names if name not in passes]
    if unknown:
        raise ValueError(f"unknown optimizer passes {unknown}; known: {sorted(passes)}")

    current = circuit
    history: List[PassStats] = []
    for name in plan.pass_names:
        optimizer_pass = passes[name](plan, machine)
        stats = PassStats(name, len(current), len(current))
        before = circuit_cost(current, machine)
        out = optimizer_pass.run(current, stats)
        if optimizer_pass.scored:
            if compare_scores(objective_score(out, plan, machine), objective_score(current, plan, machine)) > 0:
                logger.warning(f"{name} raised the {plan.label} score, reverting it")
                out = current
                stats.reverted = True
        after = circuit_cost(out, machine)
        stats.gates_after = len(out)
        stats.duration_delta = after.duration - before.duration
        stats.error_delta = after.ledger_e1.total(Unit.EPSILON) - before.ledger_e1.total(Unit.EPSILON)
        history.append(stats)
        current = out
    return current, history
