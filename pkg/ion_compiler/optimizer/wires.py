"""
Per-wire views of a pulse-level circuit.

`WireView` keeps the multi-qubit gates in one global list and gives every wire a
token list of its single-qubit gates and `Marker`s pointing into that list. Passes
rewrite the token lists; `to_circuit` interleaves them back, so the relative order
of multi-qubit gates never changes.

`WireChain` groups one wire's tokens into spans separated by anchors. A span holds
XX markers and the net RX angle sitting among them (RX commutes with XX on either
qubit); anchors are everything RX cannot pass: RY, R and non-XX multi-qubit gates.
"""
from __future__ import annotations
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Union

from ion_compiler.ir.gates import Circuit, Gate, GateKind, rx
from ion_compiler.utils import is_zero_angle, normalize_angle


@dataclass(frozen=True)
class Marker:
    index: int


Token = Union[Gate, Marker]


@dataclass
class WireView:
    n: int
    multi: List[Gate]
    wires: List[List[Token]]

    @classmethod
    def from_circuit(cls, circuit: Circuit) -> WireView:
        multi: List[Gate] = []
        wires: List[List[Token]] = [[] for _ in range(circuit.n)]
        for g in circuit.gates:
            if g.is_multi_qubit:
                marker = Marker(len(multi))
                multi.append(g)
                for q in g.qubits:
                    wires[q].append(marker)
            else:
                wires[g.qubits[0]].append(g)
        return cls(circuit.n, multi, wires)

    def to_circuit(self, like: Circuit) -> Circuit:
        position = [0] * self.n
        gates: List[Gate] = []
        for index, g in enumerate(self.multi):
            for q in g.qubits:
                tokens = self.wires[q]
                while isinstance(tokens[position[q]], Gate):
                    gates.append(tokens[position[q]])
                    position[q] += 1
                if tokens[position[q]].index != index:
                    raise RuntimeError(f"wire {q} lost the order of its multi-qubit gates")
                position[q] += 1
            gates.append(g)
        for q in range(self.n):
            gates.extend(self.wires[q][position[q]:])
        return like.with_gates(gates)

    def crosses(self, token: Token) -> bool:
        """whether an RX on the wire commutes with `token`"""
        return isinstance(token, Marker) and self.multi[token.index].kind == GateKind.XX

    def chain(self, qubit: int) -> WireChain:
        return WireChain.from_tokens(qubit, self.wires[qubit], self.crosses)


@dataclass
class Span:
    markers: List[Marker] = field(default_factory=list)
    rx: float = 0.0
    # the RX sits after `slot` markers
    slot: int = 0

    @property
    def has_rx(self) -> bool:
        return not is_zero_angle(self.rx)

    @property
    def is_empty(self) -> bool:
        return not self.markers and not self.has_rx


@dataclass
class WireChain:
    """spans[0], anchors[0], spans[1], ...; len(spans) == len(anchors) + 1"""

    qubit: int
    spans: List[Span]
    anchors: List[Optional[Token]]

    @classmethod
    def from_tokens(cls, qubit: int, tokens: List[Token], crosses: Callable[[Token], bool]) -> WireChain:
        spans = [Span()]
        anchors: List[Optional[Token]] = []
        for token in tokens:
            span = spans[-1]
            if isinstance(token, Gate) and token.kind == GateKind.RX:
                span.rx += token.angle
                span.slot = len(span.markers)
            elif crosses(token):
                span.markers.append(token)
            else:
                anchors.append(token)
                spans.append(Span())
        return cls(qubit, spans, anchors)

    def compact(self) -> None:
        """drops anchors set to None, joining the spans on either side"""
        spans = [self.spans[0]]
        anchors: List[Optional[Token]] = []
        for anchor, span in zip(self.anchors, self.spans[1:]):
            if anchor is not None:
                anchors.append(anchor)
                spans.append(span)
                continue
            left = spans[-1]
            if span.has_rx:
                slot = len(left.markers) + span.slot
            elif left.has_rx:
                slot = left.slot
            else:
                slot = 0
            spans[-1] = Span(left.markers + span.markers, left.rx + span.rx, slot)
        self.spans, self.anchors = spans, anchors

    def to_tokens(self) -> List[Token]:
        self.compact()
        tokens: List[Token] = []
        for i, span in enumerate(self.spans):
            tokens.extend(span.markers[: span.slot])
            if span.has_rx:
                tokens.append(rx(self.qubit, normalize_angle(span.rx)))
            tokens.extend(span.markers[span.slot:])
            if i < len(self.anchors):
                tokens.append(self.anchors[i])
        return tokens
