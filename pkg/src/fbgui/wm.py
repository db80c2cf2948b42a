"""Window management: movable/sizable windows, z-order, layers, damage.

Composition is strictly layered: 0 desktop background, 1 windows ascending
z, 2 popups/taskbar surfaces, 3 drag overlay, 4 cursor. Repaints are driven
by a damage list; compose() repaints exactly the damaged screen rects and
must be pixel-identical to a from-scratch repaint (the redraw-soundness
oracle in the test suite holds it to that).

Window chrome is painted here, not by widgets: 2 px borders, a title bar
(font height + 4) with minimize/maximize/close glyph buttons, and SEAL-style
drag outlines on the overlay layer that commit on mouse-up.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional

from .kernel import (
    GLYPH_H,
    FrameBuffer,
    Rect,
    draw_text,
    fill_rect,
    frame_rect,
    text_width,
)
from .widgets.base import CommonWidget
from .widgets.theme import Theme

BORDER = 2
TITLE_H = GLYPH_H + 4
BTN = TITLE_H - 6
MIN_SIZE = TITLE_H + 2 * BORDER
CORNER = 12


class WindowState(Enum):
    NORMAL = "normal"
    MAXIMIZED = "maximized"
    MINIMIZED = "minimized"


class WMError(KeyError):
    pass


@dataclass
class PaintContext:
    fb: FrameBuffer
    origin: tuple[int, int]   # screen coords of the window client top-left
    theme: Theme
    clip: Rect
    focus_id: Optional[int] = None

    def to_screen(self, r: Rect) -> Rect:
        return r.translate(self.origin[0], self.origin[1])


@dataclass(frozen=True)
class HitResult:
    kind: str                      # "desktop" | "window" | "surface"
    window_id: Optional[int] = None
    part: Optional[str] = None     # title | btn-* | border-* | client
    widget_path: tuple[int, ...] = ()
    surface: Optional[object] = None

    @property
    def widget_id(self) -> Optional[int]:
        return self.widget_path[-1] if self.widget_path else None


class DamageList:
    """Screen-space dirty rects with containment pruning."""

    def __init__(self, bounds: Rect):
        self.bounds = bounds
        self.rects: list[Rect] = []

    def add(self, r: Rect) -> None:
        r = r.intersect(self.bounds)
        if r.empty:
            return
        for existing in self.rects:
            if existing.contains_rect(r):
                return
        self.rects = [e for e in self.rects if not r.contains_rect(e)]
        self.rects.append(r)

    def covers(self, x: int, y: int) -> bool:
        return any(r.contains(x, y) for r in self.rects)

    def clear(self) -> None:
        self.rects = []

    def __bool__(self) -> bool:
        return bool(self.rects)


class Window:
    def __init__(self, wm: "WindowManager", win_id: int, title: str, frame: Rect):
        self.wm = wm
        self.id = win_id
        self.title = title
        self.frame = frame
        self.state = WindowState.NORMAL
        self.saved_frame = frame
        self.z = 0
        self.dirty = True
        self.root = CommonWidget(Rect(0, 0, max(0, frame.w - 2 * BORDER),
                                      max(0, frame.h - 2 * BORDER - TITLE_H)))
        self.root.type_name = "root"
        self.adopt(self.root)

    @property
    def host(self):
        return self.wm.host

    def adopt(self, widget: CommonWidget) -> None:
        for w in widget.walk():
            if w.id is None:
                w.id = self.wm.alloc_widget_id()
            w.window = self
            self.wm.note_widget(w, self)

    def add(self, widget: CommonWidget) -> CommonWidget:
        return self.root.add_child(widget)

    def client_origin(self) -> tuple[int, int]:
        return (self.frame.x + BORDER, self.frame.y + BORDER + TITLE_H)

    def client_screen_rect(self) -> Rect:
        ox, oy = self.client_origin()
        return Rect(ox, oy, max(0, self.frame.w - 2 * BORDER),
                    max(0, self.frame.h - 2 * BORDER - TITLE_H))

    def title_rect(self) -> Rect:
        return Rect(self.frame.x + BORDER, self.frame.y + BORDER,
                    max(0, self.frame.w - 2 * BORDER), TITLE_H)

    def button_rects(self) -> dict[str, Rect]:
        t = self.title_rect()
        y = t.y + (TITLE_H - BTN) // 2
        close = Rect(t.right - BTN - 3, y, BTN, BTN)
        btn_max = Rect(close.x - BTN - 2, y, BTN, BTN)
        btn_min = Rect(btn_max.x - BTN - 2, y, BTN, BTN)
        return {"btn-min": btn_min, "btn-max": btn_max, "btn-close": close}

    def damage_widget(self, widget: CommonWidget) -> None:
        self.damage_widget_rect(widget.region)

    def damage_widget_rect(self, local: Rect) -> None:
        ox, oy = self.client_origin()
        self.wm.damage_add(local.translate(ox, oy).intersect(self.client_screen_rect()))

    def widget_at(self, lx: int, ly: int) -> tuple[int, ...]:
        """Deepest visible widget under a client-local point (later
        siblings are on top); path of widget ids from the root down."""
        path: list[int] = []
        node = self.root
        if not node.region.contains(lx, ly) or not node.visible:
            return ()
        while True:
            path.append(node.id)
            hit_child = None
            for child in reversed(node.children):
                if child.visible and child.region.contains(lx, ly):
                    hit_child = child
                    break
            if hit_child is None:
                return tuple(path)
            node = hit_child

    def find_widget(self, widget_id: int) -> Optional[CommonWidget]:
        for w in self.root.walk():
            if w.id == widget_id:
                return w
        return None


@dataclass
class DragState:
    window_id: int
    mode: str           # "move" | "resize"
    part: str           # border part for resize, "title" for move
    grab: tuple[int, int]
    start_frame: Rect
    outline: Rect


class WindowManager:
    def __init__(self, width: int, height: int, host=None):
        self.screen_rect = Rect(0, 0, width, height)
        self.host = host
        self.windows: dict[int, Window] = {}
        self.creation_order: list[int] = []
        self.damage = DamageList(self.screen_rect)
        self.work_area = self.screen_rect
        self.desktop_painter: Optional[Callable[[FrameBuffer, Rect, Theme], None]] = None
        self.surfaces: list[object] = []  # layer 2, painted in registration order
        self.drag: Optional[DragState] = None
        self.cursor_pos = (0, 0)
        self.show_cursor = False
        self._next_window_id = 1
        self._next_widget_id = 1
        self._z = 0
        self.widget_windows: dict[int, int] = {}
        self._last_active: Optional[int] = None
        self.damage.add(self.screen_rect)  # a fresh screen needs a first paint

    # -- allocation ----------------------------------------------------------

    def alloc_widget_id(self) -> int:
        wid = self._next_widget_id
        self._next_widget_id += 1
        return wid

    def note_widget(self, widget: CommonWidget, window: Window) -> None:
        self.widget_windows[widget.id] = window.id

    # -- window ops ------------------------------------------------------------

    def window(self, win_id: int) -> Window:
        try:
            return self.windows[win_id]
        except KeyError:
            raise WMError(f"unknown window {win_id}") from None

    def create_window(self, title: str, frame: Rect) -> int:
        frame = self._clamp_frame(frame)
        win_id = self._next_window_id
        self._next_window_id += 1
        win = Window(self, win_id, title, frame)
        self._z += 1
        win.z = self._z
        self.windows[win_id] = win
        self.creation_order.append(win_id)
        self.damage_add(frame)
        self._refresh_active()
        return win_id

    def _clamp_frame(self, frame: Rect) -> Rect:
        return Rect(frame.x, frame.y, max(MIN_SIZE, frame.w), max(MIN_SIZE, frame.h))

    def move(self, win_id: int, x: int, y: int) -> None:
        win = self.window(win_id)
        if win.state is not WindowState.NORMAL:
            return
        if (x, y) == (win.frame.x, win.frame.y):
            return
        old = win.frame
        win.frame = Rect(x, y, old.w, old.h)
        win.saved_frame = win.frame
        self.damage_add(old)
        self.damage_add(win.frame)

    def resize(self, win_id: int, w: int, h: int) -> None:
        win = self.window(win_id)
        if win.state is not WindowState.NORMAL:
            return
        w, h = max(MIN_SIZE, w), max(MIN_SIZE, h)
        if (w, h) == (win.frame.w, win.frame.h):
            return
        old = win.frame
        win.frame = Rect(old.x, old.y, w, h)
        win.saved_frame = win.frame
        win.root.region = Rect(0, 0, max(0, w - 2 * BORDER),
                               max(0, h - 2 * BORDER - TITLE_H))
        self.damage_add(old)
        self.damage_add(win.frame)

    def maximize(self, win_id: int) -> None:
        win = self.window(win_id)
        if win.state is WindowState.MAXIMIZED:
            return
        if win.state is WindowState.NORMAL:
            win.saved_frame = win.frame
        old = win.frame
        win.frame = self.work_area
        win.state = WindowState.MAXIMIZED
        win.root.region = Rect(0, 0, max(0, win.frame.w - 2 * BORDER),
                               max(0, win.frame.h - 2 * BORDER - TITLE_H))
        self.damage_add(old)
        self.damage_add(win.frame)
        self._refresh_active()

    def minimize(self, win_id: int) -> None:
        win = self.window(win_id)
        if win.state is WindowState.MINIMIZED:
            return
        if win.state is WindowState.NORMAL:
            win.saved_frame = win.frame
        win.state = WindowState.MINIMIZED
        self.damage_add(win.frame)
        self._refresh_active()

    def restore(self, win_id: int) -> None:
        win = self.window(win_id)
        if win.state is WindowState.NORMAL:
            return
        old = win.frame
        win.frame = win.saved_frame
        win.state = WindowState.NORMAL
        win.root.region = Rect(0, 0, max(0, win.frame.w - 2 * BORDER),
                               max(0, win.frame.h - 2 * BORDER - TITLE_H))
        self.damage_add(old)
        self.damage_add(win.frame)
        self._refresh_active()

    def close(self, win_id: int) -> None:
        win = self.window(win_id)
        for w in win.root.walk():
            self.widget_windows.pop(w.id, None)
        del self.windows[win_id]
        self.creation_order.remove(win_id)
        self.damage_add(win.frame)
        self._refresh_active()

    def raise_window(self, win_id: int) -> None:
        win = self.window(win_id)
        if win.z == self._z:
            return
        self._z += 1
        win.z = self._z
        self.damage_add(win.frame)
        self._refresh_active()

    def open_windows(self) -> list[int]:
        return list(self.creation_order)

    @property
    def active_id(self) -> Optional[int]:
        best = None
        for win in self.windows.values():
            if win.state is WindowState.MINIMIZED:
                continue
            if best is None or win.z > best.z:
                best = win
        return best.id if best else None

    def set_bottom_strut(self, height: int) -> None:
        s = self.screen_rect
        self.work_area = Rect(0, 0, s.w, max(0, s.h - height))

    def _refresh_active(self) -> None:
        # activation moved: both title bars repaint in the new state
        current = self.active_id
        if current == self._last_active:
            return
        for win_id in (self._last_active, current):
            if win_id in self.windows:
                self.damage_add(self.windows[win_id].title_rect())
        self._last_active = current

    # -- damage ------------------------------------------------------------------

    def damage_add(self, r: Rect) -> None:
        self.damage.add(r)

    def damage_all(self) -> None:
        self.damage.clear()
        self.damage.add(self.screen_rect)

    # -- hit testing ----------------------------------------------------------------

    def hit_test(self, x: int, y: int) -> HitResult:
        for surface in reversed(self.surfaces):
            if getattr(surface, "visible", True) and surface.hit(x, y):
                return HitResult("surface", surface=surface)
        for win in sorted(self.windows.values(), key=lambda w: -w.z):
            if win.state is WindowState.MINIMIZED or not win.frame.contains(x, y):
                continue
            return self._hit_window(win, x, y)
        return HitResult("desktop")

    def _hit_window(self, win: Window, x: int, y: int) -> HitResult:
        f = win.frame
        inner = f.inset(BORDER)
        if not inner.contains(x, y):
            ns = "n" if y < f.y + CORNER else ("s" if y >= f.bottom - CORNER else "")
            ew = "w" if x < f.x + CORNER else ("e" if x >= f.right - CORNER else "")
            edge = ns + ew
            if not edge:
                edge = "n" if y < f.y + f.h // 2 else "s"
                if abs(x - f.x) < abs(x - f.right):
                    edge = "w" if x < f.x + f.w // 2 else "e"
            return HitResult("window", win.id, part=f"border-{edge}")
        if y < f.y + BORDER + TITLE_H:
            for part, rect in win.button_rects().items():
                if rect.contains(x, y):
                    return HitResult("window", win.id, part=part)
            return HitResult("window", win.id, part="title")
        ox, oy = win.client_origin()
        path = win.widget_at(x - ox, y - oy)
        return HitResult("window", win.id, part="client", widget_path=path)

    # -- dragging (layer-3 outline, commit on release) --------------------------------

    def begin_drag(self, win_id: int, part: str, x: int, y: int) -> None:
        win = self.window(win_id)
        if win.state is not WindowState.NORMAL:
            return
        mode = "move" if part == "title" else "resize"
        self.drag = DragState(win_id, mode, part, (x - win.frame.x, y - win.frame.y),
                              win.frame, win.frame)
        self._damage_outline(win.frame)

    def drag_motion(self, x: int, y: int) -> None:
        if self.drag is None:
            return
        old = self.drag.outline
        new = self._drag_frame(x, y)
        if new == old:
            return
        self.drag.outline = new
        self._damage_outline(old)
        self._damage_outline(new)

    def _drag_frame(self, x: int, y: int) -> Rect:
        d = self.drag
        start = d.start_frame
        if d.mode == "move":
            return Rect(x - d.grab[0], y - d.grab[1], start.w, start.h)
        edge = d.part.removeprefix("border-")
        x0, y0, x1, y1 = start.x, start.y, start.right, start.bottom
        if "w" in edge:
            x0 = min(x, x1 - MIN_SIZE)
        if "e" in edge:
            x1 = max(x, x0 + MIN_SIZE)
        if "n" in edge:
            y0 = min(y, y1 - MIN_SIZE)
        if "s" in edge:
            y1 = max(y, y0 + MIN_SIZE)
        return Rect(x0, y0, x1 - x0, y1 - y0)

    def drag_commit(self) -> None:
        if self.drag is None:
            return
        d = self.drag
        self.drag = None
        self._damage_outline(d.outline)
        if d.window_id in self.windows:
            if d.mode == "move":
                self.move(d.window_id, d.outline.x, d.outline.y)
            else:
                self.move(d.window_id, d.outline.x, d.outline.y)
                self.resize(d.window_id, d.outline.w, d.outline.h)

    def drag_cancel(self) -> None:
        if self.drag is None:
            return
        self._damage_outline(self.drag.outline)
        self.drag = None

    def _damage_outline(self, r: Rect) -> None:
        self.damage_add(Rect(r.x, r.y, r.w, 1))
        self.damage_add(Rect(r.x, r.bottom - 1, r.w, 1))
        self.damage_add(Rect(r.x, r.y, 1, r.h))
        self.damage_add(Rect(r.right - 1, r.y, 1, r.h))

    # -- composition --------------------------------------------------------------------

    def compose(self, screen: FrameBuffer, theme: Theme,
                focus_id: Optional[int] = None) -> bool:
        """Repaint damaged rects, layers ascending. True when work happened."""
        if not self.damage:
            return False
        rects = list(self.damage.rects)
        self.damage.clear()
        for clip in rects:
            self._paint_all(screen, clip, theme, focus_id)
        return True

    def compose_full(self, screen: FrameBuffer, theme: Theme,
                     focus_id: Optional[int] = None) -> None:
        self.damage.clear()
        self._paint_all(screen, self.screen_rect, theme, focus_id)

    def _paint_all(self, screen: FrameBuffer, clip: Rect, theme: Theme,
                   focus_id: Optional[int]) -> None:
        # layer 0: desktop background
        if self.desktop_painter is not None:
            self.desktop_painter(screen, clip, theme)
        else:
            fill_rect(screen, self.screen_rect, theme.color("desktop"), clip)
        # layer 1: windows ascending z
        active = self.active_id
        for win in sorted(self.windows.values(), key=lambda w: w.z):
            if win.state is WindowState.MINIMIZED:
                continue
            if not win.frame.intersects(clip):
                continue
            self._paint_window(screen, win, clip, theme, focus_id,
                               active=win.id == active)
            win.dirty = False
        # layer 2: taskbar / menus / popups in registration order
        for surface in self.surfaces:
            if getattr(surface, "visible", True):
                surface.paint(screen, clip, theme)
        # layer 3: drag outline overlay
        if self.drag is not None:
            frame_rect(screen, self.drag.outline, theme.color("highlight"), clip)
        # layer 4: cursor
        if self.show_cursor:
            cx, cy = self.cursor_pos
            fill_rect(screen, Rect(cx, cy, 2, 8), theme.color("text"), clip)
            fill_rect(screen, Rect(cx, cy, 8, 2), theme.color("text"), clip)

    def _paint_window(self, screen: FrameBuffer, win: Window, clip: Rect,
                      theme: Theme, focus_id: Optional[int], active: bool) -> None:
        f = win.frame
        clip = f.intersect(clip)  # chrome never paints outside the frame
        light = theme.color("border-light")
        dark = theme.color("border-dark")
        # raised 2px border: light top/left, dark bottom/right
        fill_rect(screen, Rect(f.x, f.y, f.w, BORDER), light, clip)
        fill_rect(screen, Rect(f.x, f.y, BORDER, f.h), light, clip)
        fill_rect(screen, Rect(f.x, f.bottom - BORDER, f.w, BORDER), dark, clip)
        fill_rect(screen, Rect(f.right - BORDER, f.y, BORDER, f.h), dark, clip)
        # title bar
        t = win.title_rect()
        title_color = theme.color("title-active" if active else "title-inactive")
        fill_rect(screen, t, title_color, clip)
        buttons = win.button_rects()
        text_limit = min(b.x for b in buttons.values()) - t.x - 4
        caption = win.title[:max(0, text_limit // 8)]
        draw_text(screen, caption, (t.x + 4, t.y + 2), light,
                  clip=t.intersect(clip))
        for part, rect in buttons.items():
            fill_rect(screen, rect, theme.color("button-face"), clip)
            frame_rect(screen, rect, dark, clip)
            glyph = {"btn-min": "-", "btn-max": "+", "btn-close": "x"}[part]
            draw_text(screen, glyph, (rect.x + (BTN - 8) // 2, rect.y - 2),
                      theme.color("text"), clip=rect.inset(1).intersect(clip))
        # client area and widget tree
        client = win.client_screen_rect()
        fill_rect(screen, client, theme.color("window-face"), clip)
        ctx = PaintContext(screen, win.client_origin(), theme,
                           client.intersect(clip), focus_id)
        if not ctx.clip.empty:
            for widget in win.root.walk():
                if widget is win.root or not widget.effective_visible():
                    continue
                widget.paint(ctx)
