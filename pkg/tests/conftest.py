import json
from dataclasses import dataclass
from typing import List

import numpy as np
import pytest

from ion_compiler.compiler import IonCompiler
from ion_compiler.ir.models import default_machine
from ion_compiler.optimizer.plan import RewritePlan


@dataclass
class ExpectedCompilation:
    mapping: List[int]
    xx: int
    pulses_1q: int
    time_us: float
    e1: str
    e2: str


@pytest.fixture
def machine():
    return default_machine()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def compiler(machine):
    return IonCompiler(machine, RewritePlan())


@pytest.fixture
def expected_values():
    with open("tests/expected_values.json") as f:
        data = json.load(f)
    return {
        "compilations": {name: ExpectedCompilation(**values) for name, values in data["compilations"].items()},
        "probabilities": data["probabilities"],
        "xx_counts": data["xx_counts"],
    }
