from typing import Sequence, Tuple

from ion_compiler.constants import TOL
from ion_compiler.cost.ledger import Unit, circuit_cost
from ion_compiler.ir.gates import Circuit
from ion_compiler.ir.models import MachineConfig
from ion_compiler.optimizer.plan import Objective, RewritePlan

Score = Tuple[float, float]


def objective_score(circuit: Circuit, plan: RewritePlan, machine: MachineConfig) -> Score:
    """
    Lexicographic score, lower is better:
      time:     (duration, e1 eps coefficient sum)
      error:    (e1 error with the machine's eps/E bound, duration)
      balanced: (lam·duration/tau1q + (1 - lam)·e1 coefficient sum, duration)
    """
    cost = circuit_cost(circuit, machine)
    eps_sum = cost.ledger_e1.total(Unit.EPSILON)
    big_e_sum = cost.ledger_e1.total(Unit.BIG_E)
    if plan.objective == Objective.TIME:
        return cost.duration, eps_sum
    if plan.objective == Objective.ERROR:
        return eps_sum * machine.epsilon + big_e_sum * machine.big_e, cost.duration
    weighted = plan.lam * cost.duration / machine.tau1q + (1 - plan.lam) * (eps_sum + big_e_sum)
    return weighted, cost.duration


def compare_scores(new: Sequence[float], old: Sequence[float], tol: float = TOL) -> int:
    """-1, 0 or 1 as `new` is better than, level with or worse than `old`"""
    for x, y in zip(new, old):
        slack = tol * max(1.0, abs(y))
        if x < y - slack:
            return -1
        if x > y + slack:
            return 1
    return 0
