import math
import re
from fractions import Fraction
from typing import Union

from ion_compiler.constants import PI_DENOMINATOR_LIMIT, TOL

TWO_PI = 2 * math.pi

_PI_ANGLE = re.compile(
    r"^(?P<sign>[+-]?)(?P<num>\d+(?:\.\d*)?)?\*?(?:pi|π)(?:/(?P<den>\d+))?$"
)


def parse_angle(text: str) -> float:
    """
    parse `pi/4`, `-3pi/8`, `0.25pi`, `pi` or a plain decimal (radians)
    """
    token = text.strip().lower()
    match = _PI_ANGLE.match(token)
    if match:
        num = float(match.group("num")) if match.group("num") else 1.0
        den = int(match.group("den")) if match.group("den") else 1
        if den == 0:
            raise ValueError(f"zero denominator in angle `{text}`")
        value = num * math.pi / den
        return -value if match.group("sign") == "-" else value
    try:
        return float(token)
    except ValueError:
        raise ValueError(f"cannot parse angle `{text}`") from None


def pi_fraction(angle: float, max_denominator: int = PI_DENOMINATOR_LIMIT) -> Union[Fraction, None]:
    """returns `angle / pi` as a fraction when it is one within 1e-12"""
    frac = Fraction(angle / math.pi).limit_denominator(max_denominator)
    if abs(float(frac) * math.pi - angle) < 1e-12:
        return frac
    return None


def format_angle(angle: float) -> str:
    frac = pi_fraction(angle)
    if frac is None:
        return f"{angle:.12g}"
    if frac == 0:
        return "0"
    sign = "-" if frac < 0 else ""
    num, den = abs(frac.numerator), frac.denominator
    head = "pi" if num == 1 else f"{num}pi"
    return f"{sign}{head}" if den == 1 else f"{sign}{head}/{den}"


def normalize_angle(angle: float) -> float:
    """maps an angle into (-pi, pi]"""
    wrapped = math.remainder(angle, TWO_PI)
    if wrapped <= -math.pi + 1e-12:
        wrapped += TWO_PI
    return wrapped


def is_zero_angle(angle: float, tol: float = TOL) -> bool:
    """true when `angle` is a multiple of 2pi"""
    return abs(normalize_angle(angle)) < tol


def sign(value: float) -> int:
    return -1 if value < 0 else 1
