"""Raw input events and the recorded-script format.

Scripts are plain text, one event per line, ticks non-decreasing:

    <tick> KEYDOWN <key> <mods>     mods: comma list of shift,ctrl,alt or "-"
    <tick> CHAR <ch>                ch: one printable char, or space as "SP"
    <tick> MOUSEMOVE <x> <y>
    <tick> MOUSEDOWN <btn> <x> <y>  btn: left | right
    <tick> MOUSEUP <btn> <x> <y>

KEYDOWN carries special keys (ENTER, TAB, arrows, ...); printable text is
typed with CHAR events.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

KEYDOWN = "keydown"
CHAR = "char"
MOUSEMOVE = "mousemove"
MOUSEDOWN = "mousedown"
MOUSEUP = "mouseup"

LEFT = "left"
RIGHT = "right"

# pseudo-key representing any CHAR event in a widget's accepted-keys set
CHAR_KEY = "CHAR"


@dataclass(frozen=True)
class RawInputEvent:
    tick: int
    kind: str
    key: Optional[str] = None
    char: Optional[str] = None
    button: Optional[str] = None
    x: int = 0
    y: int = 0
    mods: frozenset[str] = field(default_factory=frozenset)

    @property
    def is_mouse(self) -> bool:
        return self.kind in (MOUSEMOVE, MOUSEDOWN, MOUSEUP)

    @property
    def key_id(self) -> Optional[str]:
        """Key identity used against accepted-keys (CHAR is one pseudo-key)."""
        if self.kind == KEYDOWN:
            return self.key
        if self.kind == CHAR:
            return CHAR_KEY
        return None


def key_down(tick: int, key: str, mods=()) -> RawInputEvent:
    return RawInputEvent(tick, KEYDOWN, key=key.upper(), mods=frozenset(mods))


def key_char(tick: int, ch: str) -> RawInputEvent:
    return RawInputEvent(tick, CHAR, char=ch)


def mouse_move(tick: int, x: int, y: int) -> RawInputEvent:
    return RawInputEvent(tick, MOUSEMOVE, x=x, y=y)


def mouse_down(tick: int, button: str, x: int, y: int) -> RawInputEvent:
    return RawInputEvent(tick, MOUSEDOWN, button=button, x=x, y=y)


def mouse_up(tick: int, button: str, x: int, y: int) -> RawInputEvent:
    return RawInputEvent(tick, MOUSEUP, button=button, x=x, y=y)


class ScriptError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def parse_script(text: str) -> list[RawInputEvent]:
    events: list[RawInputEvent] = []
    last_tick = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            tick = int(parts[0])
        except ValueError:
            raise ScriptError(lineno, f"bad tick {parts[0]!r}") from None
        if tick < last_tick:
            raise ScriptError(lineno, f"tick {tick} decreases (last was {last_tick})")
        last_tick = tick
        kind = parts[1] if len(parts) > 1 else ""
        try:
            if kind == "KEYDOWN":
                mods = () if len(parts) < 4 or parts[3] == "-" else parts[3].split(",")
                events.append(key_down(tick, parts[2], mods))
            elif kind == "CHAR":
                ch = " " if parts[2] == "SP" else parts[2]
                if len(ch) != 1:
                    raise ScriptError(lineno, f"CHAR wants one char, got {parts[2]!r}")
                events.append(key_char(tick, ch))
            elif kind == "MOUSEMOVE":
                events.append(mouse_move(tick, int(parts[2]), int(parts[3])))
            elif kind in ("MOUSEDOWN", "MOUSEUP"):
                if parts[2] not in (LEFT, RIGHT):
                    raise ScriptError(lineno, f"bad button {parts[2]!r}")
                ctor = mouse_down if kind == "MOUSEDOWN" else mouse_up
                events.append(ctor(tick, parts[2], int(parts[3]), int(parts[4])))
            else:
                raise ScriptError(lineno, f"unknown event kind {kind!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, ScriptError):
                raise
            raise ScriptError(lineno, f"malformed event {line!r}") from None
    return events


def dump_script(events: list[RawInputEvent]) -> str:
    lines = []
    for e in events:
        if e.kind == KEYDOWN:
            mods = ",".join(sorted(e.mods)) if e.mods else "-"
            lines.append(f"{e.tick} KEYDOWN {e.key} {mods}")
        elif e.kind == CHAR:
            ch = "SP" if e.char == " " else e.char
            lines.append(f"{e.tick} CHAR {ch}")
        elif e.kind == MOUSEMOVE:
            lines.append(f"{e.tick} MOUSEMOVE {e.x} {e.y}")
        else:
            word = "MOUSEDOWN" if e.kind == MOUSEDOWN else "MOUSEUP"
            lines.append(f"{e.tick} {word} {e.button} {e.x} {e.y}")
    return "".join(line + "\n" for line in lines)
