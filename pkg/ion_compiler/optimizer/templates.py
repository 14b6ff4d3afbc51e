from math import acos, atan2, cos, sin
from typing import Tuple

from ion_compiler.constants import TOL


def template_is_degenerate(a: float, b: float, tol: float = TOL) -> bool:
    """RX(a) RY(b) RX(a) is ±identity when cos a·cos(b/2) = ±1"""
    return abs(abs(cos(a) * cos(b / 2)) - 1.0) < tol


def template_cd(a: float, b: float) -> Tuple[float, float]:
    """
    (c, d) with R(c, d) = RX(a) RY(b) RX(a) exactly, no global phase.
    c = 2 arccos(cos a cos(b/2)) lies in [0, 2pi], so sin(c/2) >= 0 and
    d = atan2(sin(b/2), cos(b/2) sin a).
    """
    if template_is_degenerate(a, b):
        raise ValueError(f"RX({a}) RY({b}) RX({a}) is the identity up to phase; no pulse to fold into")
    k = max(-1.0, min(1.0, cos(a) * cos(b / 2)))
    return 2 * acos(k), atan2(sin(b / 2), cos(b / 2) * sin(a))
