"""Event wiring as a circuit graph.

Handler ordering and gating are laid out like an electrical schematic:
current enters at a source node, flows along directed wires, and drains at
ground. The metaphor maps to scheduling like this:

* series junction  -> strict sequencing: successor wires run one at a time
  in insertion order, each fully exhausted before the next;
* parallel junction -> priority fan-out: branches run in ascending order of
  total handler resistance along each branch's first segment (ties broken
  by wire insertion order), so lower resistance fires first;
* switch           -> runtime gate: an open switch blocks its whole subtree;
* ground           -> completion sink.

Cycles are allowed in the graph but neutralized at run time: a handler fires
at most once per injection (reaching an already-fired handler stops that
branch), and a wire back into the current traversal path is not followed.
Handlers may mutate the payload (visible to later handlers) and may toggle
switches, which affects branches not yet traversed in the same injection.
Injections never nest; a handler requesting one enqueues it to run after the
current trace completes.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Optional

from .chemical import ChemSystem


class NodeKind(Enum):
    SOURCE = "source"
    HANDLER = "handler"
    SWITCH = "switch"
    SERIES = "series"
    PARALLEL = "parallel"
    GROUND = "ground"


@dataclass
class CircuitNode:
    id: str
    kind: NodeKind
    event_name: Optional[str] = None      # SOURCE
    handler_id: Optional[int] = None      # HANDLER
    resistance: int = 0                   # HANDLER
    closed: bool = True                   # SWITCH

    def __post_init__(self):
        if self.kind is NodeKind.HANDLER and self.resistance < 0:
            raise CircuitError(f"handler {self.id}: negative resistance")
        if self.kind is not NodeKind.HANDLER and self.resistance:
            raise CircuitError(f"{self.id}: resistance only valid on handlers")


@dataclass(frozen=True)
class Wire:
    from_id: str
    to_id: str
    index: int  # insertion order


@dataclass(frozen=True)
class Defect:
    code: str
    subject: str


class CircuitError(ValueError):
    pass


class InvalidCircuitError(CircuitError):
    def __init__(self, defects: list[Defect]):
        super().__init__("; ".join(f"{d.code}({d.subject})" for d in defects))
        self.defects = defects


@dataclass
class TraceStep:
    kind: str                 # "fire" | "blocked"
    subject: str              # handler id (as str) or switch id
    payload_snapshot: str = ""


@dataclass
class CurrentTrace:
    event_name: str
    steps: list[TraceStep] = field(default_factory=list)
    followups: list["CurrentTrace"] = field(default_factory=list)

    @property
    def fired(self) -> list[int]:
        return [int(s.subject) for s in self.steps if s.kind == "fire"]

    @property
    def blocked_at(self) -> list[str]:
        return [s.subject for s in self.steps if s.kind == "blocked"]

    def dump(self) -> str:
        lines = [f"INJECT {self.event_name}"]
        for step in self.steps:
            if step.kind == "fire":
                lines.append(f"FIRE {step.subject}")
            else:
                lines.append(f"BLOCKED {step.subject}")
        lines.append(f"END {len(self.fired)}")
        for sub in self.followups:
            lines.append(sub.dump().rstrip("\n"))
        return "".join(line + "\n" for line in lines)


Executor = Callable[[int, ChemSystem, "InjectionControls"], None]


class InjectionControls:
    """What a firing handler may do to the circuit mid-injection."""

    def __init__(self, circuit: "Circuit"):
        self._circuit = circuit
        self.pending: list[tuple[str, ChemSystem]] = []

    def set_switch(self, switch_id: str, closed: bool) -> None:
        self._circuit.set_switch(switch_id, closed)

    def request_inject(self, event_name: str, payload: ChemSystem) -> None:
        """Runs after the current trace completes (injections never nest)."""
        self.pending.append((event_name, payload))


class Circuit:
    def __init__(self):
        self.nodes: dict[str, CircuitNode] = {}
        self.wires: list[Wire] = []
        self._injecting = False

    # -- construction --------------------------------------------------------

    def _add(self, node: CircuitNode) -> str:
        if node.id in self.nodes:
            raise CircuitError(f"duplicate node id {node.id!r}")
        self.nodes[node.id] = node
        return node.id

    def add_source(self, node_id: str, event_name: str) -> str:
        return self._add(CircuitNode(node_id, NodeKind.SOURCE, event_name=event_name))

    def add_handler(self, node_id: str, handler_id: int, resistance: int = 0) -> str:
        return self._add(CircuitNode(node_id, NodeKind.HANDLER,
                                     handler_id=handler_id, resistance=resistance))

    def add_switch(self, node_id: str, closed: bool = True) -> str:
        return self._add(CircuitNode(node_id, NodeKind.SWITCH, closed=closed))

    def add_series(self, node_id: str) -> str:
        return self._add(CircuitNode(node_id, NodeKind.SERIES))

    def add_parallel(self, node_id: str) -> str:
        return self._add(CircuitNode(node_id, NodeKind.PARALLEL))

    def add_ground(self, node_id: str) -> str:
        return self._add(CircuitNode(node_id, NodeKind.GROUND))

    def wire(self, from_id: str, to_id: str) -> None:
        for node_id in (from_id, to_id):
            if node_id not in self.nodes:
                raise CircuitError(f"wire references unknown node {node_id!r}")
        self.wires.append(Wire(from_id, to_id, len(self.wires)))

    def outgoing(self, node_id: str) -> list[Wire]:
        return [w for w in self.wires if w.from_id == node_id]

    def clone(self) -> "Circuit":
        out = Circuit()
        out.nodes = {nid: replace(node) for nid, node in self.nodes.items()}
        out.wires = list(self.wires)
        return out

    # -- validation ----------------------------------------------------------

    def validate(self) -> list[Defect]:
        defects = []
        for w in self.wires:
            for endpoint in (w.from_id, w.to_id):
                if endpoint not in self.nodes:
                    defects.append(Defect("dangling-wire", f"{w.from_id}->{w.to_id}"))
                    break
        for w in self.wires:
            dst = self.nodes.get(w.to_id)
            src = self.nodes.get(w.from_id)
            if dst is not None and dst.kind is NodeKind.SOURCE:
                defects.append(Defect("source-with-inputs", w.to_id))
            if src is not None and src.kind is NodeKind.GROUND:
                defects.append(Defect("ground-with-outputs", w.from_id))
        # every source must structurally reach ground (switch states ignored)
        for node in self.nodes.values():
            if node.kind is not NodeKind.SOURCE:
                continue
            seen = {node.id}
            frontier = [node.id]
            grounded = False
            while frontier:
                current = frontier.pop()
                target = self.nodes.get(current)
                if target is not None and target.kind is NodeKind.GROUND:
                    grounded = True
                    break
                for w in self.wires:
                    if w.from_id == current and w.to_id not in seen:
                        seen.add(w.to_id)
                        frontier.append(w.to_id)
            if not grounded:
                defects.append(Defect("unreachable-ground", node.id))
        return defects

    # -- runtime reconfiguration ----------------------------------------------

    def set_switch(self, switch_id: str, closed: bool) -> None:
        node = self.nodes.get(switch_id)
        if node is None:
            raise CircuitError(f"unknown switch {switch_id!r}")
        if node.kind is not NodeKind.SWITCH:
            raise CircuitError(f"{switch_id!r} is not a switch")
        node.closed = closed

    def rewire(self, edits: list[tuple]) -> "Circuit":
        """Apply structural edits to a copy; reject atomically if invalid."""
        out = self.clone()
        for edit in edits:
            op = edit[0]
            if op == "add_node":
                out._add(replace(edit[1]))
            elif op == "remove_node":
                if edit[1] not in out.nodes:
                    raise CircuitError(f"unknown node {edit[1]!r}")
                del out.nodes[edit[1]]
            elif op == "add_wire":
                out.wires.append(Wire(edit[1], edit[2], len(out.wires)))
            elif op == "remove_wire":
                match = next((w for w in out.wires
                              if (w.from_id, w.to_id) == (edit[1], edit[2])), None)
                if match is None:
                    raise CircuitError(f"no wire {edit[1]}->{edit[2]}")
                out.wires.remove(match)
            else:
                raise CircuitError(f"unknown edit {op!r}")
        defects = out.validate()
        if defects:
            raise InvalidCircuitError(defects)
        return out

    # -- injection -------------------------------------------------------------

    def _segment_resistance(self, start_id: str) -> int:
        """Handler resistance summed along the first linear segment."""
        total = 0
        seen = set()
        current = start_id
        while current not in seen:
            seen.add(current)
            node = self.nodes.get(current)
            if node is None:
                break
            if node.kind is NodeKind.HANDLER:
                total += node.resistance
            if node.kind in (NodeKind.SERIES, NodeKind.PARALLEL, NodeKind.GROUND):
                break
            out = self.outgoing(current)
            if len(out) != 1:
                break
            current = out[0].to_id
        return total

    def find_source(self, event_name: str) -> CircuitNode:
        matches = [n for n in self.nodes.values()
                   if n.kind is NodeKind.SOURCE and n.event_name == event_name]
        if not matches:
            raise CircuitError(f"no source for event {event_name!r}")
        if len(matches) > 1:
            raise CircuitError(f"event {event_name!r} matches {len(matches)} sources")
        return matches[0]

    def inject(self, event_name: str, payload: ChemSystem,
               executor: Executor) -> CurrentTrace:
        defects = self.validate()
        if defects:
            raise InvalidCircuitError(defects)
        source = self.find_source(event_name)
        if self._injecting:
            raise CircuitError("injections never nest; use controls.request_inject")

        trace = CurrentTrace(event_name)
        controls = InjectionControls(self)
        fired: set[str] = set()

        def visit(node_id: str, path: frozenset[str]) -> None:
            node = self.nodes[node_id]
            if node.kind is NodeKind.HANDLER:
                if node_id in fired:
                    return  # current already flowed through; stop this branch
                fired.add(node_id)
                executor(node.handler_id, payload, controls)
                trace.steps.append(TraceStep("fire", str(node.handler_id),
                                             payload.serialize()))
            elif node.kind is NodeKind.SWITCH and not node.closed:
                trace.steps.append(TraceStep("blocked", node_id))
                return
            elif node.kind is NodeKind.GROUND:
                return
            out = self.outgoing(node_id)
            if node.kind is NodeKind.PARALLEL:
                out = sorted(out, key=lambda w: (self._segment_resistance(w.to_id),
                                                 w.index))
            next_path = path | {node_id}
            for w in out:
                if w.to_id in next_path:
                    continue  # feedback wire into the active path
                visit(w.to_id, next_path)

        self._injecting = True
        try:
            visit(source.id, frozenset())
        finally:
            self._injecting = False

        while controls.pending:
            next_event, next_payload = controls.pending.pop(0)
            trace.followups.append(self.inject(next_event, next_payload, executor))
        return trace


# -- text format ---------------------------------------------------------------

def dump_circuit(circuit: Circuit) -> str:
    lines = []
    for node in circuit.nodes.values():
        if node.kind is NodeKind.SOURCE:
            lines.append(f"SOURCE {node.id} {node.event_name}")
        elif node.kind is NodeKind.HANDLER:
            lines.append(f"HANDLER {node.id} {node.handler_id} {node.resistance}")
        elif node.kind is NodeKind.SWITCH:
            lines.append(f"SWITCH {node.id} {'closed' if node.closed else 'open'}")
        else:
            lines.append(f"{node.kind.value.upper()} {node.id}")
    for w in circuit.wires:
        lines.append(f"WIRE {w.from_id} {w.to_id}")
    return "".join(line + "\n" for line in lines)


def parse_circuit(text: str) -> Circuit:
    circuit = Circuit()
    wires: list[tuple[int, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            keyword = parts[0]
            if keyword == "SOURCE":
                circuit.add_source(parts[1], parts[2])
            elif keyword == "HANDLER":
                circuit.add_handler(parts[1], int(parts[2]), int(parts[3]))
            elif keyword == "SWITCH":
                if parts[2] not in ("open", "closed"):
                    raise CircuitError(f"bad switch state {parts[2]!r}")
                circuit.add_switch(parts[1], closed=parts[2] == "closed")
            elif keyword == "SERIES":
                circuit.add_series(parts[1])
            elif keyword == "PARALLEL":
                circuit.add_parallel(parts[1])
            elif keyword == "GROUND":
                circuit.add_ground(parts[1])
            elif keyword == "WIRE":
                wires.append((lineno, parts[1], parts[2]))
            else:
                raise CircuitError(f"unknown record {keyword!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, CircuitError):
                raise CircuitError(f"line {lineno}: {exc}") from None
            raise CircuitError(f"line {lineno}: malformed record {line!r}") from None
    for lineno, from_id, to_id in wires:
        try:
            circuit.wire(from_id, to_id)
        except CircuitError as exc:
            raise CircuitError(f"line {lineno}: {exc}") from None
    return circuit
