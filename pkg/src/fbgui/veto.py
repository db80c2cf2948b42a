"""Priority-ordered message interception with power-gated vetoes.

Every message carries a strength (0-255) and every participant a veto power
(0-255, fixed at registration). Interceptors for a topic run in descending
subscription priority (ties in subscription order); each may pass, modify
the payload, or veto. A veto only takes effect when the interceptor's power
is at least the message strength; an under-powered veto is recorded in the
ruling log as an attempted veto and the message continues. Modifications
compose in interception order. If nothing effectively vetoes, the final
payload is handed to every subscriber that asked for delivery.

The same bus doubles as a server for other applications: serve_session()
speaks a line-oriented wire protocol over any duplex byte stream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .chemical import ChemParseError, ChemSystem, deserialize


class VetoError(ValueError):
    pass


@dataclass(frozen=True)
class Decision:
    kind: str  # "pass" | "modify" | "veto"
    payload: Optional[ChemSystem] = None


PASS = Decision("pass")
VETO = Decision("veto")


def modify(payload: ChemSystem) -> Decision:
    return Decision("modify", payload)


@dataclass
class Participant:
    id: int
    name: str
    power: int  # immutable after registration
    topics: set[str] = field(default_factory=set)


@dataclass
class Message:
    topic: str
    payload: ChemSystem
    strength: int
    sender: Optional[int] = None

    def __post_init__(self):
        if not self.topic or any(ch.isspace() for ch in self.topic):
            raise VetoError(f"bad topic {self.topic!r}")
        if not 0 <= self.strength <= 255:
            raise VetoError(f"strength {self.strength} out of range 0-255")


Interceptor = Callable[[Message], Optional[Decision]]
Deliver = Callable[[Message], None]


@dataclass
class Subscription:
    participant_id: int
    topic: str
    priority: int
    seq: int
    interceptor: Optional[Interceptor]
    deliver: Optional[Deliver]


@dataclass
class Ruling:
    outcome: str                      # "delivered" | "vetoed"
    payload: ChemSystem
    log: list[tuple[int, str]]        # (participant id, action) in interception order
    vetoed_by: Optional[int] = None
    vetoed_step: Optional[int] = None
    delivered_to: list[int] = field(default_factory=list)

    @property
    def delivered(self) -> bool:
        return self.outcome == "delivered"


class VetoBus:
    def __init__(self):
        self._participants: dict[int, Participant] = {}
        self._subs: list[Subscription] = []
        self._next_id = 1
        self._seq = 0

    def register(self, name: str, power: int) -> int:
        if not 0 <= power <= 255:
            raise VetoError(f"power {power} out of range 0-255")
        pid = self._next_id
        self._next_id += 1
        self._participants[pid] = Participant(pid, name, power)
        return pid

    def participant(self, pid: int) -> Participant:
        try:
            return self._participants[pid]
        except KeyError:
            raise VetoError(f"unknown participant {pid}") from None

    def subscribe(self, participant_id: int, topic: str, priority: int = 0,
                  interceptor: Optional[Interceptor] = None,
                  deliver: Optional[Deliver] = None) -> None:
        p = self.participant(participant_id)
        p.topics.add(topic)
        self._subs.append(Subscription(participant_id, topic, priority,
                                       self._seq, interceptor, deliver))
        self._seq += 1

    def unsubscribe(self, participant_id: int, topic: str) -> None:
        self._subs = [s for s in self._subs
                      if not (s.participant_id == participant_id and s.topic == topic)]
        self.participant(participant_id).topics.discard(topic)

    def interception_order(self, topic: str) -> list[Subscription]:
        subs = [s for s in self._subs if s.topic == topic]
        return sorted(subs, key=lambda s: (-s.priority, s.seq))

    def send(self, message: Message) -> Ruling:
        payload = message.payload
        log: list[tuple[int, str]] = []
        subs = self.interception_order(message.topic)
        for step, sub in enumerate(subs):
            decision = PASS
            if sub.interceptor is not None:
                current = Message(message.topic, payload, message.strength,
                                  message.sender)
                decision = sub.interceptor(current) or PASS
            if decision.kind == "veto":
                power = self.participant(sub.participant_id).power
                if power >= message.strength:
                    log.append((sub.participant_id, "veto"))
                    return Ruling("vetoed", payload, log,
                                  vetoed_by=sub.participant_id, vetoed_step=step)
                log.append((sub.participant_id, "attempted-veto"))
            elif decision.kind == "modify":
                payload = decision.payload
                log.append((sub.participant_id, "modify"))
            else:
                log.append((sub.participant_id, "pass"))
        final = Message(message.topic, payload, message.strength, message.sender)
        delivered_to = []
        for sub in subs:
            if sub.deliver is not None:
                sub.deliver(final)
                delivered_to.append(sub.participant_id)
        return Ruling("delivered", payload, log, delivered_to=delivered_to)


# -- wire protocol ----------------------------------------------------------
#
# Request:  SEND <topic> <strength>\n
#           <byte-count>:<serialized payload>\n
# Reply:    OK DELIVERED <n-delivered> <byte-count>:<final payload>\n
#           OK VETOED <participant-id> <step>\n
#           ERR <reason>\n

def format_ruling(ruling: Ruling) -> bytes:
    if ruling.delivered:
        body = ruling.payload.serialize().encode("utf-8")
        return (f"OK DELIVERED {len(ruling.delivered_to)} {len(body)}:".encode()
                + body + b"\n")
    return f"OK VETOED {ruling.vetoed_by} {ruling.vetoed_step}\n".encode()


def _read_prefixed(transport) -> Optional[bytes]:
    """Read `<digits>:<N bytes>\\n`; None on malformed framing."""
    digits = b""
    while True:
        ch = transport.read(1)
        if ch == b":":
            break
        if not ch.isdigit() or len(digits) > 9:
            return None
        digits += ch
    if not digits:
        return None
    n = int(digits)
    body = transport.read(n)
    if len(body) != n:
        return None
    if transport.read(1) not in (b"\n", b""):
        return None
    return body


def serve_session(bus: VetoBus, transport, sender: Optional[int] = None) -> int:
    """Serve one duplex byte stream until it closes; returns requests handled.

    The transport needs readline(), read(n), write(bytes) and flush().
    Malformed requests get an `ERR parse` reply and the session continues.
    """
    handled = 0
    while True:
        line = transport.readline()
        if not line:
            return handled
        parts = line.strip().split()
        if len(parts) != 3 or parts[0] != b"SEND":
            transport.write(b"ERR parse\n")
            transport.flush()
            continue
        try:
            strength = int(parts[2])
        except ValueError:
            transport.write(b"ERR parse\n")
            transport.flush()
            continue
        body = _read_prefixed(transport)
        if body is None:
            transport.write(b"ERR parse\n")
            transport.flush()
            continue
        try:
            payload = deserialize(body)
            message = Message(parts[1].decode("utf-8"), payload, strength, sender)
        except (ChemParseError, VetoError) as exc:
            transport.write(f"ERR {type(exc).__name__}\n".encode())
            transport.flush()
            continue
        ruling = bus.send(message)
        handled += 1
        transport.write(format_ruling(ruling))
        transport.flush()


def encode_request(topic: str, strength: int, payload: ChemSystem) -> bytes:
    body = payload.serialize().encode("utf-8")
    return f"SEND {topic} {strength}\n{len(body)}:".encode() + body + b"\n"
