"""Common widget base and its 20-way input classifier.

Every widget shares one classifier that turns a raw input event into the
ordered sequence of widget event codes it must fire. The full decision
table (the module's core contract):

Key events (only the focused widget sees them; CHAR events count as the
pseudo-key "CHAR"):
  * specific code: 2 SPECIFIC KEY PRESSED when the key is in accepted-keys,
    else 3 NOT REQUIRED KEY PRESSED;
  * 1 KEY PRESS precedes the specific code when the widget has a binding
    for code 1, otherwise the specific code fires alone.

Mouse events ("inside" means the point hit-tests to this widget; generic
codes 7/17/20 fire after their specific siblings):
  * move inside while a button pressed outside is held: 15/16 (+17), one
    specific per such button, left before right; this replaces plain move;
  * move inside otherwise: 14, preceded by 4 MOUSE IN REGION on the entry
    transition only (4 fires on moves, not on downs);
  * move outside while a press that began inside is unreleased: 14 (the
    widget keeps tracking its own drag); otherwise moves outside are
    irrelevant;
  * down inside: 5/6 (+7); down outside: 18/19 (+20);
  * up inside whose matching down was inside this widget: click 8/11 -
    or 9/12 when within the double-click window of the previous click,
    which the double click then consumes - followed by up 10/13;
  * up inside without a matching inside-down, or up outside after an
    inside-down (drag release): bare 10/13; any other up: irrelevant.

Classification is stateful: it advances the widget's press/hover tracking,
so feed every raw event exactly once. Dispatching a code routes the message
through the veto bus (topic "<widget-id>:<code>", strength 100) so
interceptors can veto it; on delivery the widget's built-in behavior runs
first, then bound handlers in binding order.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, Optional

from ..chemical import ChemSystem, pack
from ..events import CHAR, KEYDOWN, LEFT, MOUSEDOWN, MOUSEMOVE, MOUSEUP, RIGHT, RawInputEvent
from ..kernel import Rect
from ..veto import Message

DOUBLE_CLICK_TICKS = 8
DISPATCH_STRENGTH = 100


class EventCode(IntEnum):
    KEY_PRESS = 1
    SPECIFIC_KEY_PRESSED = 2
    NOT_REQUIRED_KEY_PRESSED = 3
    MOUSE_IN_REGION = 4
    LEFT_MOUSE_BUTTON_DOWN = 5
    RIGHT_MOUSE_BUTTON_DOWN = 6
    MOUSE_BUTTON_DOWN = 7
    LEFT_CLICKED = 8
    LEFT_DBCLICKED = 9
    LEFT_UP = 10
    RIGHT_CLICKED = 11
    RIGHT_DBCLICKED = 12
    RIGHT_UP = 13
    MOUSE_MOVE = 14
    MOVE_LEFT_CLICKED_OUT = 15
    MOVE_RIGHT_CLICKED_OUT = 16
    MOVE_BUTTON_CLICKED_OUT = 17
    LEFT_DOWN_OUT = 18
    RIGHT_DOWN_OUT = 19
    BUTTON_DOWN_OUT = 20


EVENT_NAMES = {
    EventCode.KEY_PRESS: "KEY PRESS",
    EventCode.SPECIFIC_KEY_PRESSED: "SPECIFIC KEY PRESSED",
    EventCode.NOT_REQUIRED_KEY_PRESSED: "NOT REQUIRED KEY PRESSED",
    EventCode.MOUSE_IN_REGION: "MOUSE IN REGION",
    EventCode.LEFT_MOUSE_BUTTON_DOWN: "LEFT MOUSE BUTTON DOWN",
    EventCode.RIGHT_MOUSE_BUTTON_DOWN: "RIGHT MOUSE BUTTON DOWN",
    EventCode.MOUSE_BUTTON_DOWN: "MOUSE BUTTON DOWN",
    EventCode.LEFT_CLICKED: "LEFT CLICKED",
    EventCode.LEFT_DBCLICKED: "LEFT DBCLICKED",
    EventCode.LEFT_UP: "LEFT UP",
    EventCode.RIGHT_CLICKED: "RIGHT CLICKED",
    EventCode.RIGHT_DBCLICKED: "RIGHT DBCLICKED",
    EventCode.RIGHT_UP: "RIGHT UP",
    EventCode.MOUSE_MOVE: "MOUSE MOVE",
    EventCode.MOVE_LEFT_CLICKED_OUT: "MOVE+LEFT CLICKED OUT",
    EventCode.MOVE_RIGHT_CLICKED_OUT: "MOVE+RIGHT CLICKED OUT",
    EventCode.MOVE_BUTTON_CLICKED_OUT: "MOVE+BUTTON CLICKED OUT",
    EventCode.LEFT_DOWN_OUT: "LEFT DOWN OUT",
    EventCode.RIGHT_DOWN_OUT: "RIGHT DOWN OUT",
    EventCode.BUTTON_DOWN_OUT: "BUTTON DOWN OUT",
}

GENERIC_CODES = frozenset({
    EventCode.KEY_PRESS,
    EventCode.MOUSE_BUTTON_DOWN,
    EventCode.MOVE_BUTTON_CLICKED_OUT,
    EventCode.BUTTON_DOWN_OUT,
})


@dataclass(frozen=True)
class ClassifyContext:
    focused: bool
    inside: bool
    now: int


class PropertyError(ValueError):
    pass


class CommonWidget:
    """Base of every control: geometry, state flags, classifier, bindings."""

    type_name = "widget"
    default_size = (80, 24)

    def __init__(self, region: Rect, *, focusable: bool = False,
                 visible: bool = True, enabled: bool = True,
                 accepted_keys=()):
        self.id: Optional[int] = None
        self.region = region
        self.visible = visible
        self.enabled = enabled
        self.focusable = focusable
        self.accepted_keys: set[str] = set(accepted_keys)
        self.double_click_ticks = DOUBLE_CLICK_TICKS
        self.parent: Optional[CommonWidget] = None
        self.children: list[CommonWidget] = []
        self.window = None  # set when the widget tree is attached
        # bindings live in a record store (registry role): event "<code>"
        self.bindings = ChemSystem()
        # press/hover tracking for click synthesis
        self._mouse_inside = False
        self._press_origin: dict[str, str] = {}
        self._last_click: dict[str, Optional[int]] = {}

    # -- tree ----------------------------------------------------------------

    def add_child(self, child: "CommonWidget") -> "CommonWidget":
        if not self.region.contains_rect(child.region):
            raise ValueError(
                f"{child.type_name} region {child.region} outside parent {self.region}")
        child.parent = self
        self.children.append(child)
        if self.window is not None:
            self.window.adopt(child)
        return child

    def walk(self) -> Iterator["CommonWidget"]:
        yield self
        for child in self.children:
            yield from child.walk()

    def effective_visible(self) -> bool:
        node = self
        while node is not None:
            if not node.visible:
                return False
            node = node.parent
        return True

    @property
    def host(self):
        return self.window.host if self.window is not None else None

    def damage(self) -> None:
        if self.window is not None:
            self.window.damage_widget(self)

    # -- classification --------------------------------------------------------

    def classify(self, raw: RawInputEvent, ctx: ClassifyContext) -> tuple[EventCode, ...]:
        """Ordered event codes for one raw event; advances press tracking."""
        if raw.kind in (KEYDOWN, CHAR):
            if not ctx.focused:
                return ()
            specific = (EventCode.SPECIFIC_KEY_PRESSED
                        if raw.key_id in self.accepted_keys
                        else EventCode.NOT_REQUIRED_KEY_PRESSED)
            if self.has_binding(EventCode.KEY_PRESS):
                return (EventCode.KEY_PRESS, specific)
            return (specific,)

        if raw.kind == MOUSEMOVE:
            entered = ctx.inside and not self._mouse_inside
            self._mouse_inside = ctx.inside
            if ctx.inside:
                out_drag = [b for b in (LEFT, RIGHT)
                            if self._press_origin.get(b) == "outside"]
                if out_drag:
                    seq = []
                    if entered:
                        seq.append(EventCode.MOUSE_IN_REGION)
                    if LEFT in out_drag:
                        seq.append(EventCode.MOVE_LEFT_CLICKED_OUT)
                    if RIGHT in out_drag:
                        seq.append(EventCode.MOVE_RIGHT_CLICKED_OUT)
                    seq.append(EventCode.MOVE_BUTTON_CLICKED_OUT)
                    return tuple(seq)
                if entered:
                    return (EventCode.MOUSE_IN_REGION, EventCode.MOUSE_MOVE)
                return (EventCode.MOUSE_MOVE,)
            if any(origin == "inside" for origin in self._press_origin.values()):
                return (EventCode.MOUSE_MOVE,)  # dragging out of the region
            return ()

        if raw.kind == MOUSEDOWN:
            self._mouse_inside = ctx.inside
            self._press_origin[raw.button] = "inside" if ctx.inside else "outside"
            if ctx.inside:
                specific = (EventCode.LEFT_MOUSE_BUTTON_DOWN if raw.button == LEFT
                            else EventCode.RIGHT_MOUSE_BUTTON_DOWN)
                return (specific, EventCode.MOUSE_BUTTON_DOWN)
            specific = (EventCode.LEFT_DOWN_OUT if raw.button == LEFT
                        else EventCode.RIGHT_DOWN_OUT)
            return (specific, EventCode.BUTTON_DOWN_OUT)

        if raw.kind == MOUSEUP:
            origin = self._press_origin.pop(raw.button, None)
            self._mouse_inside = ctx.inside
            up = EventCode.LEFT_UP if raw.button == LEFT else EventCode.RIGHT_UP
            if ctx.inside and origin == "inside":
                previous = self._last_click.get(raw.button)
                if previous is not None and ctx.now - previous <= self.double_click_ticks:
                    click = (EventCode.LEFT_DBCLICKED if raw.button == LEFT
                             else EventCode.RIGHT_DBCLICKED)
                    self._last_click[raw.button] = None
                else:
                    click = (EventCode.LEFT_CLICKED if raw.button == LEFT
                             else EventCode.RIGHT_CLICKED)
                    self._last_click[raw.button] = ctx.now
                return (click, up)
            if ctx.inside or origin == "inside":
                return (up,)
            return ()

        return ()

    def server_classify(self, raw: RawInputEvent,
                        ctx: ClassifyContext) -> Optional[EventCode]:
        """The primary (first specific) code for one raw event, or None."""
        for code in self.classify(raw, ctx):
            if code not in GENERIC_CODES:
                return code
        return None

    # -- bindings and dispatch ---------------------------------------------------

    def bind(self, code: EventCode, handler_id: int) -> None:
        self.bindings.bind_handler(str(int(code)), handler_id)

    def unbind(self, code: EventCode, handler_id: int) -> bool:
        return self.bindings.unbind_handler(str(int(code)), handler_id)

    def has_binding(self, code: EventCode) -> bool:
        return bool(self.bindings.handlers_for(str(int(code))))

    def handlers_for(self, code: EventCode) -> list[int]:
        return self.bindings.handlers_for(str(int(code)))

    def dispatch(self, code: EventCode, payload: Optional[ChemSystem] = None) -> bool:
        """Route one code through the veto bus; True when something handled it."""
        host = self.host
        payload = payload if payload is not None else pack()
        if host is not None and host.bus is not None:
            topic = f"{self.id}:{int(code)}"
            ruling = host.bus.send(Message(topic, payload, DISPATCH_STRENGTH))
            if not ruling.delivered:
                return False
            payload = ruling.payload
        handled = bool(self.on_event(code, payload))
        for handler_id in self.handlers_for(code):
            if host is not None:
                host.run_handler(handler_id, self, code, payload)
                handled = True
        return handled

    # -- behavior / painting hooks -------------------------------------------------

    def on_event(self, code: EventCode, payload: ChemSystem) -> bool:
        """Built-in reaction; subclasses override. True = acted on it."""
        return False

    def on_focus_gained(self) -> None:
        self.damage()

    def on_focus_lost(self) -> None:
        self.damage()

    def paint(self, ctx) -> None:
        pass

    # -- designer-facing property surface ---------------------------------------------

    def properties(self) -> dict:
        return {
            "x": self.region.x, "y": self.region.y,
            "w": self.region.w, "h": self.region.h,
            "visible": self.visible, "enabled": self.enabled,
        }

    def set_property(self, key: str, value) -> None:
        if key in ("x", "y", "w", "h"):
            try:
                n = int(value)
            except (TypeError, ValueError):
                raise PropertyError(f"{key} wants an integer, got {value!r}") from None
            if key in ("w", "h") and n <= 0:
                raise PropertyError(f"{key} must be positive")
            r = self.region
            geo = {"x": r.x, "y": r.y, "w": r.w, "h": r.h}
            geo[key] = n
            self.move_to(Rect(geo["x"], geo["y"], geo["w"], geo["h"]))
        elif key in ("visible", "enabled"):
            setattr(self, key, _as_bool(key, value))
            self.damage()
        else:
            raise PropertyError(f"{self.type_name} has no property {key!r}")

    def move_to(self, region: Rect) -> None:
        old = self.region
        self.region = region
        if self.window is not None:
            self.window.damage_widget_rect(old)
            self.window.damage_widget_rect(region)


def _as_bool(key: str, value) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.lower() in ("true", "false"):
        return value.lower() == "true"
    raise PropertyError(f"{key} wants true/false, got {value!r}")


def event_payload(widget: CommonWidget, code: EventCode,
                  raw: Optional[RawInputEvent] = None) -> ChemSystem:
    fields = {"widget": widget.id if widget.id is not None else 0,
              "code": int(code)}
    if raw is not None:
        fields.update(tick=raw.tick, kind=raw.kind, x=raw.x, y=raw.y)
        if raw.button:
            fields["button"] = raw.button
        if raw.key:
            fields["key"] = raw.key
        if raw.char:
            fields["char"] = raw.char
    return pack(**fields)
