from abc import ABC, ABCMeta, abstractmethod
from typing import Dict, List, Type

from ion_compiler.ir.gates import Circuit, Gate
from ion_compiler.ir.models import MachineConfig
from ion_compiler.optimizer.passes import (
    FOLD_LEFT,
    FOLD_RIGHT,
    bound_pulses,
    cancel_merge,
    commute_rx,
    fold_triples,
    layer_pulses,
    lower_pulses,
    pair_sites,
    resynthesize_runs,
    rewrite_pair,
)
from ion_compiler.optimizer.plan import PassStats, RewritePlan
from ion_compiler.optimizer.score import compare_scores, objective_score

_MAX_GREEDY_STEPS = 64


class OptimizerPassMeta(ABCMeta):
    passes: Dict[str, Type["OptimizerPass"]] = {}

    def __new__(mcs, name, bases, attrs):
        cls = super().__new__(mcs, name, bases, attrs)
        if name != "OptimizerPass":
            pass_name = attrs.get("name")
            if pass_name:
                mcs.passes[pass_name] = cls
        return cls


class OptimizerPass(ABC, metaclass=OptimizerPassMeta):
    name: str = None
    # scored passes are reverted when they raise the objective score
    scored: bool = True

    def __init__(self, plan: RewritePlan, machine: MachineConfig):
        self.plan = plan
        self.machine = machine

    def score(self, circuit: Circuit):
        return objective_score(circuit, self.plan, self.machine)

    @abstractmethod
    def run(self, circuit: Circuit, stats: PassStats) -> Circuit:
        pass


class CancelMerge(OptimizerPass):
    name = "cancel_merge"

    def run(self, circuit: Circuit, stats: PassStats) -> Circuit:
        return cancel_merge(circuit, stats)


class FoldTriples(OptimizerPass):
    name = "fold_triples"

    def run(self, circuit: Circuit, stats: PassStats) -> Circuit:
        return fold_triples(circuit, stats)


class CommuteRx(OptimizerPass):
    name = "commute_rx"

    def run(self, circuit: Circuit, stats: PassStats) -> Circuit:
        return commute_rx(circuit, self.plan.rx_direction, stats)


class RewritePairs(OptimizerPass):
    """greedy single pair rewrites, each followed by cancel_merge, while the score drops"""

    name = "rewrite_pairs"

    def run(self, circuit: Circuit, stats: PassStats) -> Circuit:
        current, current_score = circuit, self.score(circuit)
        for _ in range(_MAX_GREEDY_STEPS):
            best = None
            for mode in (FOLD_LEFT, FOLD_RIGHT):
                for site in pair_sites(current, mode):
                    candidate = cancel_merge(rewrite_pair(current, mode, [site]))
                    score = self.score(candidate)
                    if compare_scores(score, best[1] if best else current_score) < 0:
                        best = (candidate, score)
            if best is None:
                break
            current, current_score = best
            stats.rewrites += 1
        return current


class ResynthesizeRuns(OptimizerPass):
    name = "resynthesize_runs"

    def _accept(self, old: List[Gate], new: List[Gate]) -> bool:
        n = old[0].qubits[0] + 1
        before = self.score(Circuit(n, list(old)))
        after = self.score(Circuit(n, list(new)))
        return len(new) < len(old) and compare_scores(after, before) <= 0

    def run(self, circuit: Circuit, stats: PassStats) -> Circuit:
        return resynthesize_runs(circuit, self._accept, stats)


class BoundPulses(OptimizerPass):
    """keeps every wire piece within two pulses when the score-gated resynthesis left more"""

    name = "bound_pulses"
    scored = False

    def run(self, circuit: Circuit, stats: PassStats) -> Circuit:
        return bound_pulses(circuit, stats)


class LowerPulses(OptimizerPass):
    name = "lower_pulses"
    scored = False

    def run(self, circuit: Circuit, stats: PassStats) -> Circuit:
        return lower_pulses(circuit)


class LayerPulses(OptimizerPass):
    name = "layer_pulses"
    scored = False

    def run(self, circuit: Circuit, stats: PassStats) -> Circuit:
        return layer_pulses(circuit, stats)


passes = OptimizerPassMeta.passes
