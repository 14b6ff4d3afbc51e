"""
Unitaries for every gate kind. Qubit 0 of a multi-qubit matrix is the most significant bit.
"""
from math import cos, pi, sin, sqrt

import numpy as np

from ion_compiler.ir.gates import Gate, GateKind

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / sqrt(2)
S = np.diag([1, 1j]).astype(complex)
T = np.diag([1, np.exp(1j * pi / 4)]).astype(complex)
V = np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex) / 2
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def r_matrix(theta: float, phi: float) -> np.ndarray:
    c, s = cos(theta / 2), sin(theta / 2)
    return np.array(
        [
            [c, -1j * np.exp(-1j * phi) * s],
            [-1j * np.exp(1j * phi) * s, c],
        ],
        dtype=complex,
    )


def rx_matrix(theta: float) -> np.ndarray:
    return r_matrix(theta, 0.0)


def ry_matrix(theta: float) -> np.ndarray:
    return r_matrix(theta, pi / 2)


def rz_matrix(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def xx_matrix(chi: float) -> np.ndarray:
    if abs(chi) > pi / 2 + 1e-12:
        raise ValueError(f"XX angle {chi} outside [-pi/2, pi/2]")
    anti = np.fliplr(np.eye(4, dtype=complex))
    return cos(chi) * np.eye(4, dtype=complex) - 1j * sin(chi) * anti


def u2_matrix(a: float, b: float, c: float, d: float) -> np.ndarray:
    return np.exp(1j * d) * np.array(
        [
            [np.exp(1j * a) * cos(b), np.exp(1j * c) * sin(b)],
            [-np.exp(-1j * c) * sin(b), np.exp(-1j * a) * cos(b)],
        ],
        dtype=complex,
    )


def x_power(alpha: float) -> np.ndarray:
    """X^alpha = exp(i pi alpha (I - X) / 2)"""
    w = np.exp(1j * pi * alpha)
    return np.array([[1 + w, 1 - w], [1 - w, 1 + w]], dtype=complex) / 2


def y_power(alpha: float) -> np.ndarray:
    return S @ x_power(alpha) @ S.conj().T


def z_power(alpha: float) -> np.ndarray:
    return np.diag([1, np.exp(1j * pi * alpha)]).astype(complex)


def controlled(u: np.ndarray, n_controls: int = 1) -> np.ndarray:
    """applies `u` to the trailing qubits when every leading control is 1"""
    dim = u.shape[0] * 2**n_controls
    out = np.eye(dim, dtype=complex)
    out[dim - u.shape[0]:, dim - u.shape[0]:] = u
    return out


def gate_matrix(g: Gate) -> np.ndarray:
    kind = g.kind
    if kind in _FIXED:
        return _FIXED[kind]
    if kind == GateKind.RX:
        return rx_matrix(g.angle)
    if kind == GateKind.RY:
        return ry_matrix(g.angle)
    if kind == GateKind.RZ:
        return rz_matrix(g.angle)
    if kind == GateKind.R:
        return r_matrix(*g.params)
    if kind == GateKind.XX:
        return xx_matrix(g.angle)
    if kind == GateKind.U2:
        return u2_matrix(*g.params)
    if kind == GateKind.CXPOW:
        return controlled(x_power(g.angle))
    if kind == GateKind.CYPOW:
        return controlled(y_power(g.angle))
    if kind == GateKind.CZPOW:
        return controlled(z_power(g.angle))
    raise ValueError(f"{kind.value} gate has no matrix; expand oracles first")


_FIXED = {
    GateKind.H: H,
    GateKind.X: X,
    GateKind.Y: Y,
    GateKind.Z: Z,
    GateKind.S: S,
    GateKind.SDG: S.conj().T,
    GateKind.T: T,
    GateKind.TDG: T.conj().T,
    GateKind.V: V,
    GateKind.CNOT: controlled(X),
    GateKind.CZ: controlled(Z),
    GateKind.SWAP: SWAP,
    GateKind.TOFFOLI: controlled(X, 2),
    GateKind.TOFFOLI4: controlled(X, 3),
}
