"""
Circuit-to-circuit rewrite passes over RX/RY/R/XX circuits. Every pass preserves the
unitary up to global phase and leaves XX gates untouched.
"""
from math import pi, sin
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ion_compiler.constants import TOL
from ion_compiler.cost.ledger import lemma1_bound
from ion_compiler.gatelib.decompositions import dec_u2, single_pulse
from ion_compiler.gatelib.matrices import gate_matrix
from ion_compiler.ir.gates import Circuit, Gate, GateKind, Level, normalize_r, r, rx, ry
from ion_compiler.linalg import equiv_global_phase
from ion_compiler.optimizer.plan import PassStats, RxDirection
from ion_compiler.optimizer.templates import template_cd, template_is_degenerate
from ion_compiler.optimizer.wires import Marker, Token, WireChain, WireView
from ion_compiler.utils import is_zero_angle, normalize_angle

_MAX_SWEEPS = 100

FOLD_LEFT = "fold-left"
FOLD_RIGHT = "fold-right"

RunAcceptor = Callable[[List[Gate], List[Gate]], bool]


def _count(stats: Optional[PassStats], n: int = 1) -> None:
    if stats is not None:
        stats.rewrites += n


def _is_gate(token: Optional[Token], *kinds: GateKind) -> bool:
    return isinstance(token, Gate) and token.kind in kinds


def _axis(g: Gate) -> Optional[Tuple[float, float]]:
    """(phi, theta) of an equatorial rotation other than RX"""
    if g.kind == GateKind.RY:
        return pi / 2, g.angle
    if g.kind == GateKind.R:
        return g.params[1], g.params[0]
    return None


def _merge_anchors(a: Token, b: Token) -> Tuple[bool, Optional[Gate]]:
    """
    (merged, gate) for two rotations with nothing between them; gate is None when
    they cancel
    """
    if not (_is_gate(a, GateKind.RY, GateKind.R) and _is_gate(b, GateKind.RY, GateKind.R)):
        return False, None
    (phi_a, theta_a), (phi_b, theta_b) = _axis(a), _axis(b)
    offset = normalize_angle(phi_a - phi_b)
    if abs(offset) < TOL:
        theta = theta_a + theta_b
    elif abs(abs(offset) - pi) < TOL:
        theta = theta_a - theta_b
    else:
        return False, None
    if is_zero_angle(theta):
        return True, None
    q = a.qubits[0]
    if a.kind == GateKind.RY:
        return True, ry(q, normalize_angle(theta))
    return True, normalize_r(r(q, theta, phi_a))


def _cancel_merge_chain(chain: WireChain) -> None:
    for i, anchor in enumerate(chain.anchors):
        if _is_gate(anchor, GateKind.RY, GateKind.R) and is_zero_angle(anchor.params[0]):
            chain.anchors[i] = None
    chain.compact()
    i = 0
    while i < len(chain.anchors) - 1:
        merged, g = False, None
        if chain.spans[i + 1].is_empty:
            merged, g = _merge_anchors(chain.anchors[i], chain.anchors[i + 1])
        if not merged:
            i += 1
            continue
        chain.anchors[i], chain.anchors[i + 1] = g, None
        chain.compact()
        i = max(i - 1, 0)


def cancel_merge(circuit: Circuit, stats: Optional[PassStats] = None) -> Circuit:
    """
    Merges same-axis rotations, deletes rotations by multiples of 2pi and collects
    the RX angles of each XX-separated stretch of a wire into one RX, repeated to a
    fixpoint.
    """
    view = WireView.from_circuit(circuit)
    for q in range(view.n):
        tokens = view.wires[q]
        for _ in range(_MAX_SWEEPS):
            chain = view.chain(q)
            _cancel_merge_chain(chain)
            merged = chain.to_tokens()
            if merged == tokens:
                break
            _count(stats, max(len(tokens) - len(merged), 0))
            tokens = view.wires[q] = merged
    return view.to_circuit(circuit)


def _magnitude(theta: float) -> float:
    return abs(normalize_angle(theta))


def _fold_chain(chain: WireChain) -> int:
    folds = 0
    for k, anchor in enumerate(chain.anchors):
        if not _is_gate(anchor, GateKind.RY):
            continue
        left, right = chain.spans[k], chain.spans[k + 1]
        if not (left.has_rx and right.has_rx):
            continue
        b = anchor.angle
        old_duration = _magnitude(left.rx) + _magnitude(b) + _magnitude(right.rx)
        old_error = abs(sin(left.rx)) + abs(sin(b)) + abs(sin(right.rx))

        best = None
        # a = right angle leaves L - R on the left; a = left angle leaves R - L on the right
        for on_left, a in ((True, right.rx), (False, left.rx)):
            if template_is_degenerate(a, b):
                continue
            c, d = template_cd(a, b)
            leftover = (left.rx - a) if on_left else (right.rx - a)
            duration = _magnitude(c) + _magnitude(leftover)
            error = abs(sin(c)) + abs(sin(leftover))
            if duration > old_duration + TOL or error >= old_error - TOL:
                continue
            key = (round(error, 9), round(duration, 9))
            if best is None or key < best[0]:
                best = (key, on_left, a, c, d)
        if best is None:
            continue

        _, on_left, a, c, d = best
        chain.anchors[k] = normalize_r(r(chain.qubit, c, d))
        if on_left:
            left.rx -= a
            left.slot = len(left.markers)
            right.rx = 0.0
        else:
            right.rx -= a
            right.slot = 0
            left.rx = 0.0
        folds += 1
    return folds


def fold_triples(circuit: Circuit, stats: Optional[PassStats] = None) -> Circuit:
    """
    Folds RX(a) RY(b) RX(a) into R(c, d), where the two RX angles are the net RX
    reachable across XX gates on either side of the RY. Unequal angles fold on the
    shared part and keep the remainder as an RX on the outer side. A fold is taken
    only when it lowers the slope error without lengthening the window.
    """
    view = WireView.from_circuit(circuit)
    for q in range(view.n):
        chain = view.chain(q)
        _count(stats, _fold_chain(chain))
        view.wires[q] = chain.to_tokens()
    return view.to_circuit(circuit)


def _commute_chain(chain: WireChain, direction: RxDirection) -> int:
    spans, anchors, q = chain.spans, chain.anchors, chain.qubit
    moves = 0
    leftward = direction == RxDirection.LEFT
    order = range(len(anchors) - 1, -1, -1) if leftward else range(len(anchors))
    first = spans[-1] if leftward else spans[0]
    carried, first.rx = first.rx, 0.0
    for k in order:
        anchor = anchors[k]
        behind = spans[k + 1] if leftward else spans[k]
        ahead = spans[k] if leftward else spans[k + 1]
        if not is_zero_angle(carried):
            if _is_gate(anchor, GateKind.RY):
                b = anchor.angle
                if template_is_degenerate(carried, b):
                    anchors[k] = None
                else:
                    anchors[k] = normalize_r(r(q, *template_cd(carried, b)))
                carried = -carried
                moves += 1
            else:
                behind.rx = carried
                behind.slot = 0 if leftward else len(behind.markers)
                carried = 0.0
        carried += ahead.rx
        ahead.rx = 0.0
    last = spans[0] if leftward else spans[-1]
    last.rx = carried
    last.slot = 0 if leftward else len(last.markers)
    return moves


def commute_rx(circuit: Circuit, direction: RxDirection = RxDirection.LEFT, stats: Optional[PassStats] = None) -> Circuit:
    """
    Sweeps every RX on a wire to one end. RX passes XX freely; passing RY(b) with
    carried angle a turns the RY into R(template_cd(a, b)) and negates a. R pulses
    and non-XX multi-qubit gates stop the sweep, and the carried angle is left there.
    """
    direction = RxDirection(direction)
    view = WireView.from_circuit(circuit)
    for q in range(view.n):
        chain = view.chain(q)
        _count(stats, _commute_chain(chain, direction))
        view.wires[q] = chain.to_tokens()
    return view.to_circuit(circuit)


def pair_sites(circuit: Circuit, mode: str) -> List[Tuple[int, int]]:
    """(wire, token index) of every adjacent pair `rewrite_pair` would rewrite"""
    view = WireView.from_circuit(circuit)
    sites = []
    for q, tokens in enumerate(view.wires):
        for i in range(len(tokens) - 1):
            if _pair_angles(tokens[i], tokens[i + 1], mode) is not None:
                sites.append((q, i))
    return sites


def _pair_angles(first: Token, second: Token, mode: str) -> Optional[Tuple[float, float]]:
    if mode == FOLD_LEFT:
        x, y = first, second
    elif mode == FOLD_RIGHT:
        x, y = second, first
    else:
        raise ValueError(f"unknown rewrite mode `{mode}`; use {FOLD_LEFT} or {FOLD_RIGHT}")
    if _is_gate(x, GateKind.RX) and _is_gate(y, GateKind.RY) and not is_zero_angle(x.angle):
        return x.angle, y.angle
    return None


def rewrite_pair(
    circuit: Circuit,
    mode: str,
    sites: Optional[Sequence[Tuple[int, int]]] = None,
    stats: Optional[PassStats] = None,
) -> Circuit:
    """
    fold-left:  RX(a), RY(b)  ->  R(c, d), RX(-a)
    fold-right: RY(b), RX(a)  ->  RX(-a), R(c, d)
    with (c, d) = template_cd(a, b); applied at `sites`, or at every match
    """
    view = WireView.from_circuit(circuit)
    wanted = set(sites) if sites is not None else None
    for q, tokens in enumerate(view.wires):
        out: List[Token] = []
        i = 0
        while i < len(tokens):
            angles = _pair_angles(tokens[i], tokens[i + 1], mode) if i + 1 < len(tokens) else None
            if angles is None or (wanted is not None and (q, i) not in wanted):
                out.append(tokens[i])
                i += 1
                continue
            a, b = angles
            folded = [] if template_is_degenerate(a, b) else [normalize_r(r(q, *template_cd(a, b)))]
            out += folded + [rx(q, -a)] if mode == FOLD_LEFT else [rx(q, -a)] + folded
            _count(stats)
            i += 2
        view.wires[q] = out
    return view.to_circuit(circuit)


def _runs(tokens: Sequence[Token]) -> List[Tuple[int, int]]:
    """[start, stop) of maximal stretches of single-qubit gates"""
    runs, start = [], None
    for i, token in enumerate(list(tokens) + [Marker(-1)]):
        if isinstance(token, Gate):
            start = i if start is None else start
        elif start is not None:
            runs.append((start, i))
            start = None
    return runs


def resynthesize_run(run: Sequence[Gate]) -> List[Gate]:
    """at most two R pulses equal to the run's product up to phase"""
    q = run[0].qubits[0]
    u = np.eye(2, dtype=complex)
    for g in run:
        u = gate_matrix(g) @ u
    if equiv_global_phase(u, np.eye(2, dtype=complex), 1e-9):
        return []
    pulse = single_pulse(u)
    if pulse is not None:
        return [pulse.relabel([q])]
    return [p.relabel([q]) for p in dec_u2(u).gates]


def resynthesize_runs(
    circuit: Circuit,
    accept: Optional[RunAcceptor] = None,
    stats: Optional[PassStats] = None,
    min_length: int = 3,
) -> Circuit:
    """replaces every run of `min_length` or more pulses on one wire by its two-pulse form"""
    accept = accept or (lambda old, new: len(new) < len(old))
    view = WireView.from_circuit(circuit)
    for q, tokens in enumerate(view.wires):
        out: List[Token] = []
        last = 0
        for start, stop in _runs(tokens):
            out += tokens[last:start]
            run = list(tokens[start:stop])
            if len(run) >= min_length:
                replacement = resynthesize_run(run)
                if accept(run, replacement):
                    run = replacement
                    _count(stats)
            out += run
            last = stop
        out += tokens[last:]
        view.wires[q] = out
    return view.to_circuit(circuit)


def pulse_bound(circuit: Circuit) -> int:
    """two pulses per piece of wire, over the wires the circuit touches"""
    return lemma1_bound(len(circuit.active_qubits), circuit.two_qubit_count).gate_bound


def bound_pulses(circuit: Circuit, stats: Optional[PassStats] = None) -> Circuit:
    """
    Resynthesizes runs of three or more pulses, wire by wire, until the single-qubit
    count is within `pulse_bound`. Circuits already within the bound are returned as is.
    """
    excess = circuit.single_qubit_count - pulse_bound(circuit)
    if excess <= 0:
        return circuit

    def accept(old: List[Gate], new: List[Gate]) -> bool:
        nonlocal excess
        if excess <= 0 or len(new) >= len(old):
            return False
        excess -= len(old) - len(new)
        return True

    return resynthesize_runs(circuit, accept, stats)


def lower_gate_to_pulse(g: Gate) -> Gate:
    if g.kind == GateKind.RX:
        return normalize_r(r(g.qubits[0], g.angle, 0.0))
    if g.kind == GateKind.RY:
        return normalize_r(r(g.qubits[0], g.angle, pi / 2))
    if g.kind == GateKind.R:
        return normalize_r(g)
    if g.kind == GateKind.XX:
        return g
    raise TypeError(f"cannot lower {g.kind.value} to a physical pulse")


def lower_pulses(circuit: Circuit) -> Circuit:
    """RX(theta) -> R(theta, 0), RY(theta) -> R(theta, pi/2), theta kept in (-pi, pi]"""
    return circuit.with_gates([lower_gate_to_pulse(g) for g in circuit.gates], Level.PHYSICAL)


def _duration_key(g: Gate) -> float:
    return round(abs(g.params[0]), 9)


def _layer_block(block: List[Gate]) -> Tuple[List[Gate], int]:
    queues: Dict[int, List[Tuple[int, Gate]]] = {}
    for i, g in enumerate(block):
        queues.setdefault(g.qubits[0], []).append((i, g))
    out: List[Gate] = []
    layers = 0
    while any(queues.values()):
        heads = [queue[0] for queue in queues.values() if queue]
        _, lead = min(heads, key=lambda head: head[0])
        key = _duration_key(lead)
        for q, queue in queues.items():
            if queue and _duration_key(queue[0][1]) == key:
                out.append(queue.pop(0)[1])
        layers += 1
    return out, layers


def layer_pulses(circuit: Circuit, stats: Optional[PassStats] = None) -> Circuit:
    """
    Between consecutive two-qubit gates, orders the single-qubit pulses into layers of
    equal duration, one pulse per wire per layer. Pulses on different wires commute;
    each wire keeps its own order.
    """
    gates: List[Gate] = []
    block: List[Gate] = []
    layers = 0
    for g in circuit.gates + [None]:
        if g is not None and g.is_single_qubit:
            block.append(g)
            continue
        ordered, count = _layer_block(block)
        gates += ordered
        layers += count
        block = []
        if g is not None:
            gates.append(g)
    if stats is not None:
        stats.note = f"{layers} single-qubit layers"
    return circuit.with_gates(gates)
