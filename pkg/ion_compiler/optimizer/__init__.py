from ion_compiler.optimizer.optimize import optimize
from ion_compiler.optimizer.passes import (
    FOLD_LEFT,
    FOLD_RIGHT,
    bound_pulses,
    cancel_merge,
    commute_rx,
    fold_triples,
    layer_pulses,
    lower_pulses,
    resynthesize_runs,
    rewrite_pair,
)
from ion_compiler.optimizer.plan import Objective, PassStats, RewritePlan, RxDirection
from ion_compiler.optimizer.signs import choose_signs, decompose, expand_composites, sign_plan
from ion_compiler.optimizer.templates import template_cd, template_is_degenerate
