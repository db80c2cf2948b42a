"""The deterministic event loop.

One pump cycle does, in fixed order: (1) route every raw input event that
was pending at cycle start - classification against the hit-tested widget,
then dispatch over the veto bus - with routing order itself expressed as an
event circuit; (2) step each runnable background task once, in creation
order; (3) recompose the screen at most once if anything was damaged;
(4) advance the virtual clock one tick.

Headless runs never look at a wall clock, so identical (scene, script,
tasks) always reproduce identical frame hashes. External producers (an
interactive backend, the message-bus server) hand events over through a
thread-safe handoff queue drained at pump start; everything else runs on
the one runtime thread.

The stock routing circuit is `input -> menus -> chrome -> widgets ->
focus-keys -> ground`, all in series; shells may rewire it or gate stages
with switches at run time.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from queue import Empty, SimpleQueue
from typing import Callable, Optional

from . import events as ev
from .chemical import ChemSystem, pack
from .circuit import Circuit
from .events import RawInputEvent, parse_script
from .focus import FocusSystem
from .kernel import FrameBuffer, Mode, Rect, make_format, snapshot_hash
from .veto import VetoBus
from .widgets.base import ClassifyContext, CommonWidget, event_payload
from .widgets.theme import Theme, builtin_theme
from .wm import WindowManager

TASK_DONE = "done"

_ARROWS = {"LEFT": "left", "RIGHT": "right", "UP": "up", "DOWN": "down"}


@dataclass
class Task:
    id: int
    step: Callable[["Runtime"], object]
    state: str = "runnable"           # runnable | sleeping | done
    wake_tick: int = 0


@dataclass(frozen=True)
class PumpReport:
    events: int
    tasks: int
    recomposed: bool


class Runtime:
    def __init__(self, width: int = 640, height: int = 480,
                 mode: Mode = Mode.HICOLOR, theme: Optional[Theme] = None,
                 show_cursor: bool = False):
        fmt = make_format(mode)
        self.mode = mode
        self.screen = FrameBuffer(width, height, fmt)
        self.theme = theme if theme is not None else builtin_theme("classic", mode)
        if self.theme.mode is not mode:
            raise ValueError("theme mode does not match screen mode")
        self.wm = WindowManager(width, height, host=self)
        self.wm.show_cursor = show_cursor
        self.bus = VetoBus()
        self.focus = FocusSystem(self.wm, self.bus)
        self.tick = 0
        self.tasks: list[Task] = []
        self._next_task_id = 1
        self.handlers: dict[int, Callable] = {}
        self._next_handler_id = 1000
        self._queue: deque[RawInputEvent] = deque()
        self._handoff: SimpleQueue = SimpleQueue()
        self.posted = 0
        self.processed = 0
        self.menu_router: Optional[Callable[[RawInputEvent], bool]] = None
        self._consumed = False
        self._current_raw: Optional[RawInputEvent] = None
        self.circuit = self._build_routing_circuit()

    # -- routing circuit -------------------------------------------------------

    _STAGES = ("menus", "chrome", "widgets", "focus-keys")

    def _build_routing_circuit(self) -> Circuit:
        c = Circuit()
        c.add_source("src", "input")
        prev = "src"
        stage_fns = {
            1: self._stage_menus,
            2: self._stage_chrome,
            3: self._stage_widgets,
            4: self._stage_focus_keys,
        }
        for hid, name in enumerate(self._STAGES, start=1):
            self.handlers[hid] = stage_fns[hid]
            c.add_handler(name, hid)
            c.wire(prev, name)
            prev = name
        c.add_ground("gnd")
        c.wire(prev, "gnd")
        return c

    def _exec_stage(self, handler_id: int, payload: ChemSystem, controls) -> None:
        fn = self.handlers.get(handler_id)
        if fn is not None:
            fn()

    # -- host surface used by widgets ---------------------------------------------

    @property
    def now(self) -> int:
        return self.tick

    def register_handler(self, fn: Callable) -> int:
        hid = self._next_handler_id
        self._next_handler_id += 1
        self.handlers[hid] = fn
        return hid

    def run_handler(self, handler_id: int, widget: CommonWidget, code,
                    payload: ChemSystem) -> None:
        fn = self.handlers.get(handler_id)
        if fn is not None:
            fn(widget, code, payload)

    def open_popup(self, surface) -> None:
        if surface not in self.wm.surfaces:
            self.wm.surfaces.append(surface)
            self.wm.damage_add(surface.rect)

    def close_popup(self, surface) -> None:
        if surface in self.wm.surfaces:
            self.wm.surfaces.remove(surface)
            self.wm.damage_add(surface.rect)

    def apply_theme(self, theme: Theme) -> None:
        if theme.mode is not self.mode:
            raise ValueError(
                f"theme is {theme.mode.value}, screen is {self.mode.value}")
        self.theme = theme
        self.wm.damage_all()

    # -- event intake ----------------------------------------------------------------

    def post_event(self, raw: RawInputEvent) -> None:
        self._queue.append(self._clamped(raw))
        self.posted += 1

    def post_external(self, raw: RawInputEvent) -> None:
        """Thread-safe intake; drained at the start of the next pump."""
        self._handoff.put(raw)

    def _clamped(self, raw: RawInputEvent) -> RawInputEvent:
        if not raw.is_mouse:
            return raw
        x = min(max(raw.x, 0), self.screen.width - 1)
        y = min(max(raw.y, 0), self.screen.height - 1)
        if (x, y) == (raw.x, raw.y):
            return raw
        return RawInputEvent(raw.tick, raw.kind, button=raw.button, x=x, y=y)

    # -- tasks ------------------------------------------------------------------------

    def spawn_task(self, step: Callable[["Runtime"], object]) -> int:
        task = Task(self._next_task_id, step)
        self._next_task_id += 1
        self.tasks.append(task)
        return task.id

    def _step_tasks(self) -> int:
        ran = 0
        for task in list(self.tasks):
            if task.state == "sleeping" and self.tick >= task.wake_tick:
                task.state = "runnable"
            if task.state != "runnable":
                continue
            result = task.step(self)
            ran += 1
            if result == TASK_DONE:
                task.state = "done"
            elif isinstance(result, int) and result > 0:
                task.state = "sleeping"
                task.wake_tick = self.tick + result
        return ran

    # -- the pump ----------------------------------------------------------------------

    def pump(self) -> PumpReport:
        while True:
            try:
                self._queue.append(self._clamped(self._handoff.get_nowait()))
                self.posted += 1
            except Empty:
                break
        pending = len(self._queue)
        for _ in range(pending):
            raw = self._queue.popleft()
            self._route(raw)
            self.processed += 1
        tasks_run = self._step_tasks()
        recomposed = self.wm.compose(self.screen, self.theme, self.focus.focus_id)
        self.tick += 1
        return PumpReport(pending, tasks_run, recomposed)

    def pending_events(self) -> int:
        return len(self._queue) + self._handoff.qsize()

    def _route(self, raw: RawInputEvent) -> None:
        if raw.is_mouse:
            if self.wm.show_cursor:
                ox, oy = self.wm.cursor_pos
                self.wm.damage_add(Rect(ox, oy, 8, 8))
                self.wm.damage_add(Rect(raw.x, raw.y, 8, 8))
            self.wm.cursor_pos = (raw.x, raw.y)
        self._current_raw = raw
        self._consumed = False
        payload = pack(kind=raw.kind, x=raw.x, y=raw.y, tick=raw.tick,
                       button=raw.button or "", key=raw.key or "",
                       char=raw.char or "")
        self.circuit.inject("input", payload, self._exec_stage)
        self._current_raw = None

    # -- routing stages -----------------------------------------------------------------

    def _stage_menus(self) -> None:
        if self._consumed or self.menu_router is None:
            return
        if self.menu_router(self._current_raw):
            self._consumed = True

    def _stage_chrome(self) -> None:
        if self._consumed:
            return
        raw = self._current_raw
        if not raw.is_mouse:
            return
        if self.wm.drag is not None:
            if raw.kind == ev.MOUSEMOVE:
                self.wm.drag_motion(raw.x, raw.y)
            elif raw.kind == ev.MOUSEUP and raw.button == ev.LEFT:
                self.wm.drag_commit()
            self._consumed = True
            return
        hit = self.wm.hit_test(raw.x, raw.y)
        if hit.kind == "surface":
            handler = getattr(hit.surface, "on_mouse", None)
            if handler is not None and handler(raw, self):
                self._consumed = True
            return
        if hit.kind != "window" or raw.kind != ev.MOUSEDOWN or raw.button != ev.LEFT:
            return
        part = hit.part or ""
        if part == "title":
            self.wm.raise_window(hit.window_id)
            self.wm.begin_drag(hit.window_id, part, raw.x, raw.y)
            self._consumed = True
        elif part.startswith("border-"):
            self.wm.raise_window(hit.window_id)
            self.wm.begin_drag(hit.window_id, part, raw.x, raw.y)
            self._consumed = True
        elif part == "btn-close":
            self.close_window(hit.window_id)
            self._consumed = True
        elif part == "btn-max":
            win = self.wm.window(hit.window_id)
            if win.state.value == "maximized":
                self.wm.restore(hit.window_id)
            else:
                self.wm.maximize(hit.window_id)
            self._consumed = True
        elif part == "btn-min":
            self.wm.minimize(hit.window_id)
            self._consumed = True

    def _stage_widgets(self) -> None:
        if self._consumed:
            return
        raw = self._current_raw
        hit = self.wm.hit_test(raw.x, raw.y) if raw.is_mouse else None
        if raw.kind == ev.MOUSEDOWN:
            self.focus.click_focus(raw.x, raw.y)
        hit_window = hit.window_id if hit is not None and hit.kind == "window" else None
        hit_path = set(hit.widget_path) if hit is not None else set()
        for win in sorted(self.wm.windows.values(), key=lambda w: -w.z):
            if win.state.value == "minimized":
                continue
            for widget in list(win.root.walk()):
                if widget is win.root:
                    continue
                inside = win.id == hit_window and widget.id in hit_path
                ctx = ClassifyContext(focused=self.focus.is_focused(widget),
                                      inside=inside, now=raw.tick)
                for code in widget.classify(raw, ctx):
                    widget.dispatch(code, event_payload(widget, code, raw))

    def _stage_focus_keys(self) -> None:
        if self._consumed:
            return
        raw = self._current_raw
        if raw.kind != ev.KEYDOWN:
            return
        focused = self.focus.focused
        if raw.key == "TAB":
            if "shift" in raw.mods:
                self.focus.prev()
            else:
                self.focus.next()
        elif raw.key in _ARROWS:
            if focused is None or raw.key not in focused.accepted_keys:
                self.focus.arrow_move(_ARROWS[raw.key])

    # -- conveniences ------------------------------------------------------------------------

    def close_window(self, win_id: int) -> None:
        focused = self.focus.focused
        if focused is not None and self.wm.widget_windows.get(focused.id) == win_id:
            self.focus.set_focus(None)
        self.wm.close(win_id)

    def frame_hash(self) -> str:
        return snapshot_hash(self.screen)

    def run_events(self, script: list[RawInputEvent],
                   on_frame: Optional[Callable[[int, FrameBuffer], None]] = None,
                   max_idle_pumps: int = 100000) -> list[str]:
        """Pump until the script is exhausted and the queue drained,
        collecting the frame hash after every recomposition."""
        hashes: list[str] = []
        i = 0
        idle = 0
        while i < len(script) or self.pending_events():
            while i < len(script) and script[i].tick <= self.tick:
                self.post_event(script[i])
                i += 1
            report = self.pump()
            if report.recomposed:
                if on_frame is not None:
                    on_frame(len(hashes), self.screen)
                hashes.append(self.frame_hash())
            idle = idle + 1 if report.events == 0 else 0
            if idle > max_idle_pumps:
                raise RuntimeError("script stalled: events never became due")
        return hashes

    def run_script(self, text: str,
                   on_frame: Optional[Callable[[int, FrameBuffer], None]] = None
                   ) -> list[str]:
        return self.run_events(parse_script(text), on_frame)
