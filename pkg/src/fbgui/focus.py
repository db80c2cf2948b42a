"""Dual mouse/keyboard focus: clicks, Tab/Shift+Tab cycling, arrow jumps.

Keyboard traversal works on the focus ring of the active window: the
window's focusable widgets in creation order, filtered down to those
currently visible and enabled (stale entries are skipped, never removed).
Arrow navigation is spatial: it moves to the eligible widget whose center
lies strictly in the half-plane of the pressed direction, nearest by
(primary-axis distance, off-axis distance, creation order).

Every focus change is negotiated over the veto bus at strength 10: first a
"focus.lost" message for the old widget, then "focus.gained" for the new
one. Vetoing the lost message keeps focus where it was; vetoing the gained
message leaves focus empty (the old widget already let go).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .chemical import pack
from .veto import Message, VetoBus
from .widgets.base import CommonWidget
from .wm import WindowManager

FOCUS_STRENGTH = 10

_AXES = {
    "left": (-1, 0),
    "right": (1, 0),
    "up": (0, -1),
    "down": (0, 1),
}


@dataclass
class FocusRing:
    window_id: int
    order: list[int]        # focusable widget ids in creation order
    current: Optional[int]  # index into order, or None


def eligible(widget: CommonWidget) -> bool:
    return widget.focusable and widget.enabled and widget.effective_visible()


class FocusSystem:
    def __init__(self, wm: WindowManager, bus: VetoBus):
        self.wm = wm
        self.bus = bus
        self.participant = bus.register("focus-system", 0)
        self._focused: Optional[CommonWidget] = None

    # -- state ------------------------------------------------------------

    @property
    def focused(self) -> Optional[CommonWidget]:
        w = self._focused
        if w is None:
            return None
        if w.window is None or w.window.id not in self.wm.windows:
            self._focused = None  # window went away
            return None
        return w

    @property
    def focus_id(self) -> Optional[int]:
        w = self.focused
        return w.id if w is not None else None

    def is_focused(self, widget: CommonWidget) -> bool:
        return self.focused is widget

    def ring(self, window_id: Optional[int] = None) -> FocusRing:
        if window_id is None:
            window_id = self.wm.active_id
        order: list[int] = []
        current = None
        if window_id is not None:
            win = self.wm.window(window_id)
            for w in win.root.walk():
                if w.focusable:
                    order.append(w.id)
        focused = self.focused
        if focused is not None and focused.id in order:
            current = order.index(focused.id)
        return FocusRing(window_id, order, current)

    def _eligible_widgets(self, window_id: Optional[int]) -> list[CommonWidget]:
        if window_id is None:
            return []
        win = self.wm.windows.get(window_id)
        if win is None:
            return []
        return [w for w in win.root.walk() if eligible(w)]

    # -- transitions ----------------------------------------------------------

    def set_focus(self, target: Optional[CommonWidget]) -> bool:
        """Negotiate a focus move over the bus; False when vetoed/no-op."""
        current = self.focused
        if target is current:
            return False
        if target is not None and not eligible(target):
            return False
        if current is not None:
            ruling = self.bus.send(Message(
                "focus.lost",
                pack(widget=current.id, next=target.id if target else 0),
                FOCUS_STRENGTH, sender=self.participant))
            if not ruling.delivered:
                return False
            self._focused = None
            current.on_focus_lost()
        if target is not None:
            ruling = self.bus.send(Message(
                "focus.gained",
                pack(widget=target.id, prev=current.id if current else 0),
                FOCUS_STRENGTH, sender=self.participant))
            if not ruling.delivered:
                return False  # old widget already let go; focus stays empty
            self._focused = target
            target.on_focus_gained()
        return True

    # -- keyboard traversal -------------------------------------------------------

    def _cycle(self, step: int) -> Optional[int]:
        window_id = self.wm.active_id
        ring = [w for w in self._eligible_widgets(window_id)]
        if not ring:
            self.set_focus(None)
            return None
        current = self.focused
        ids = [w.id for w in ring]
        if current is not None and current.id in ids:
            idx = (ids.index(current.id) + step) % len(ring)
        else:
            idx = 0 if step >= 0 else len(ring) - 1
        self.set_focus(ring[idx])
        return ring[idx].id

    def next(self) -> Optional[int]:
        return self._cycle(1)

    def prev(self) -> Optional[int]:
        return self._cycle(-1)

    def arrow_move(self, direction: str) -> Optional[int]:
        current = self.focused
        if current is None or direction not in _AXES:
            return self.focus_id
        ax, ay = _AXES[direction]
        cx, cy = current.region.center()
        best = None
        best_key = None
        candidates = self._eligible_widgets(self.wm.widget_windows.get(current.id))
        for index, w in enumerate(candidates):
            if w is current:
                continue
            wx, wy = w.region.center()
            primary = (wx - cx) * ax + (wy - cy) * ay
            if primary <= 0:
                continue  # not strictly in the direction's half-plane
            secondary = abs((wx - cx) * ay) + abs((wy - cy) * ax)
            key = (primary, secondary, index)
            if best_key is None or key < best_key:
                best, best_key = w, key
        if best is not None:
            self.set_focus(best)
        return self.focus_id

    # -- mouse ------------------------------------------------------------------------

    def click_focus(self, x: int, y: int) -> Optional[int]:
        hit = self.wm.hit_test(x, y)
        if hit.kind == "desktop":
            self.set_focus(None)
            return None
        if hit.kind != "window":
            return self.focus_id
        self.wm.raise_window(hit.window_id)
        win = self.wm.window(hit.window_id)
        for widget_id in reversed(hit.widget_path):
            widget = win.find_widget(widget_id)
            if widget is not None and eligible(widget):
                self.set_focus(widget)
                return widget.id
        return self.focus_id
