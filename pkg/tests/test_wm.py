import random

import pytest

from fbgui.kernel import FrameBuffer, Mode, Rect, make_format, snapshot_hash
from fbgui.widgets.theme import builtin_theme
from fbgui.wm import BORDER, MIN_SIZE, TITLE_H, WindowManager, WindowState, WMError

THEME = builtin_theme("classic", Mode.HICOLOR)
FMT = make_format("hicolor")


def make_wm(w=320, h=240):
    return WindowManager(w, h)


class TestWindowOps:
    def test_maximize_then_restore_roundtrip(self):
        wm = make_wm()
        wid = wm.create_window("a", Rect(30, 40, 120, 90))
        wm.maximize(wid)
        assert wm.window(wid).frame == wm.work_area
        wm.restore(wid)
        assert wm.window(wid).frame == Rect(30, 40, 120, 90)

    def test_move_to_same_position_adds_no_damage(self):
        wm = make_wm()
        wid = wm.create_window("a", Rect(30, 40, 120, 90))
        wm.damage.clear()
        wm.move(wid, 30, 40)
        assert not wm.damage

    def test_resize_clamps_to_minimum(self):
        wm = make_wm()
        wid = wm.create_window("a", Rect(10, 10, 100, 100))
        wm.resize(wid, 1, 1)
        assert wm.window(wid).frame.w == MIN_SIZE
        assert wm.window(wid).frame.h == MIN_SIZE

    def test_close_removes_from_order(self):
        wm = make_wm()
        a = wm.create_window("a", Rect(0, 0, 50, 50))
        b = wm.create_window("b", Rect(60, 0, 50, 50))
        wm.close(a)
        assert wm.open_windows() == [b]
        with pytest.raises(WMError):
            wm.move(a, 1, 1)

    def test_raise_preserves_relative_order_of_others(self):
        wm = make_wm()
        ids = [wm.create_window(str(i), Rect(10 * i, 10 * i, 60, 60)) for i in range(4)]
        wm.raise_window(ids[1])
        by_z = [w.id for w in sorted(wm.windows.values(), key=lambda w: w.z)]
        assert by_z == [ids[0], ids[2], ids[3], ids[1]]

    def test_minimize_restore_keeps_saved_frame(self):
        wm = make_wm()
        wid = wm.create_window("a", Rect(15, 25, 80, 70))
        wm.minimize(wid)
        assert wm.window(wid).state is WindowState.MINIMIZED
        wm.restore(wid)
        assert wm.window(wid).frame == Rect(15, 25, 80, 70)
        assert wm.window(wid).state is WindowState.NORMAL


def apply_op(wm, op):
    kind = op[0]
    if kind == "create":
        return wm.create_window(op[1], op[2])
    getattr(wm, kind)(*op[1:])
    return None


class StateOracle:
    """Naive mirror of the window state rules for random-op sessions."""

    def __init__(self, work_area):
        self.work_area = work_area
        self.rows = {}  # id -> dict(frame, saved, state, z)
        self.zmax = 0
        self.next_id = 1

    def run(self, op):
        kind = op[0]
        if kind == "create":
            frame = op[2]
            frame = Rect(frame.x, frame.y, max(MIN_SIZE, frame.w), max(MIN_SIZE, frame.h))
            self.zmax += 1
            self.rows[self.next_id] = {"frame": frame, "saved": frame,
                                       "state": "normal", "z": self.zmax}
            self.next_id += 1
            return
        row = self.rows[op[1]]
        if kind == "move":
            if row["state"] == "normal":
                row["frame"] = Rect(op[2], op[3], row["frame"].w, row["frame"].h)
                row["saved"] = row["frame"]
        elif kind == "resize":
            if row["state"] == "normal":
                row["frame"] = Rect(row["frame"].x, row["frame"].y,
                                    max(MIN_SIZE, op[2]), max(MIN_SIZE, op[3]))
                row["saved"] = row["frame"]
        elif kind == "maximize":
            if row["state"] != "maximized":
                if row["state"] == "normal":
                    row["saved"] = row["frame"]
                row["frame"] = self.work_area
                row["state"] = "maximized"
        elif kind == "minimize":
            if row["state"] != "minimized":
                if row["state"] == "normal":
                    row["saved"] = row["frame"]
                row["state"] = "minimized"
        elif kind == "restore":
            if row["state"] != "normal":
                row["frame"] = row["saved"]
                row["state"] = "normal"
        elif kind == "raise_window":
            if row["z"] != self.zmax:
                self.zmax += 1
                row["z"] = self.zmax
        elif kind == "close":
            del self.rows[op[1]]


def random_op(rng, wm):
    alive = wm.open_windows()
    choices = ["create"] if len(alive) < 2 else []
    if len(alive) < 5:
        choices.append("create")
    if alive:
        choices += ["move", "resize", "maximize", "minimize", "restore",
                    "raise_window", "close"]
    kind = rng.choice(choices)
    if kind == "create":
        return ("create", f"w{rng.randrange(100)}",
                Rect(rng.randrange(0, 200), rng.randrange(0, 150),
                     rng.randrange(10, 150), rng.randrange(10, 130)))
    wid = rng.choice(alive)
    if kind == "move":
        return ("move", wid, rng.randrange(-30, 260), rng.randrange(-30, 200))
    if kind == "resize":
        return ("resize", wid, rng.randrange(5, 180), rng.randrange(5, 150))
    return (kind, wid)


class TestStateMachineOracle:
    def test_200_random_ops_match(self):
        rng = random.Random(4242)
        wm = make_wm()
        oracle = StateOracle(wm.work_area)
        for _ in range(200):
            op = random_op(rng, wm)
            apply_op(wm, op)
            oracle.run(op)
            assert set(wm.windows) == set(oracle.rows)
            for wid, row in oracle.rows.items():
                win = wm.window(wid)
                assert win.frame == row["frame"], f"{op} on {wid}"
                assert win.state.value == row["state"]
                assert win.saved_frame == row["saved"]
                assert win.z == row["z"]


class TestHitTest:
    def test_topmost_wins_in_overlap(self):
        wm = make_wm()
        a = wm.create_window("a", Rect(10, 10, 100, 100))
        b = wm.create_window("b", Rect(50, 50, 100, 100))
        hit = wm.hit_test(60, 60)
        assert hit.window_id == b
        wm.raise_window(a)
        assert wm.hit_test(60, 60).window_id == a

    def test_outside_all_is_desktop(self):
        wm = make_wm()
        wm.create_window("a", Rect(10, 10, 50, 50))
        assert wm.hit_test(300, 200).kind == "desktop"

    def test_minimized_skipped(self):
        wm = make_wm()
        a = wm.create_window("a", Rect(10, 10, 100, 100))
        wm.minimize(a)
        assert wm.hit_test(20, 20).kind == "desktop"

    def test_chrome_parts(self):
        wm = make_wm()
        a = wm.create_window("a", Rect(50, 50, 120, 100))
        win = wm.window(a)
        assert wm.hit_test(51, 51).part == "border-nw"
        assert wm.hit_test(110, 50).part == "border-n"
        assert wm.hit_test(80, 55).part == "title"
        for part, rect in win.button_rects().items():
            cx, cy = rect.center()
            assert wm.hit_test(cx, cy).part == part
        cx, cy = win.client_screen_rect().center()
        assert wm.hit_test(cx, cy).part == "client"

    def test_seeded_overlaps_match_z_scan_oracle(self):
        rng = random.Random(9000)
        for _ in range(30):
            wm = make_wm()
            frames = {}
            for i in range(rng.randrange(1, 6)):
                wid = wm.create_window(str(i), Rect(rng.randrange(0, 200),
                                                    rng.randrange(0, 150),
                                                    rng.randrange(30, 120),
                                                    rng.randrange(30, 100)))
                frames[wid] = wm.window(wid).frame
                if rng.random() < 0.3:
                    wm.minimize(wid)
                if rng.random() < 0.4:
                    wm.raise_window(rng.choice(list(frames)))
            for _ in range(40):
                x, y = rng.randrange(320), rng.randrange(240)
                # z-scan oracle: highest z among non-minimized frames containing p
                best = None
                for wid, frame in frames.items():
                    win = wm.window(wid)
                    if win.state is WindowState.MINIMIZED:
                        continue
                    if frame.contains(x, y) and (best is None or win.z > best[1]):
                        best = (wid, win.z)
                hit = wm.hit_test(x, y)
                if best is None:
                    assert hit.kind == "desktop"
                else:
                    assert hit.window_id == best[0]


class TwinScenes:
    """Drive two identical wms; one composes incrementally, one from scratch."""

    def __init__(self, w=320, h=240):
        self.live_wm = make_wm(w, h)
        self.twin_wm = make_wm(w, h)
        self.live = FrameBuffer(w, h, FMT)
        self.twin = FrameBuffer(w, h, FMT)
        self.live_wm.compose(self.live, THEME)

    def apply_and_compare(self, op):
        apply_op(self.live_wm, op)
        apply_op(self.twin_wm, op)
        self.live_wm.compose(self.live, THEME)
        self.twin_wm.compose_full(self.twin, THEME)
        return snapshot_hash(self.live) == snapshot_hash(self.twin)


class TestCompose:
    def test_empty_damage_unchanged(self):
        wm = make_wm()
        screen = FrameBuffer(320, 240, FMT)
        wm.create_window("a", Rect(10, 10, 100, 80))
        assert wm.compose(screen, THEME)
        before = snapshot_hash(screen)
        assert not wm.compose(screen, THEME)
        assert snapshot_hash(screen) == before

    def test_full_damage_equals_fresh_repaint(self):
        wm = make_wm()
        wm.create_window("a", Rect(10, 10, 100, 80))
        wm.create_window("b", Rect(60, 40, 120, 90))
        incremental = FrameBuffer(320, 240, FMT)
        wm.compose(incremental, THEME)
        fresh = FrameBuffer(320, 240, FMT)
        wm.compose_full(fresh, THEME)
        assert snapshot_hash(incremental) == snapshot_hash(fresh)

    def test_minimized_contributes_no_pixels(self):
        wm = make_wm()
        wid = wm.create_window("a", Rect(10, 10, 100, 80))
        screen = FrameBuffer(320, 240, FMT)
        wm.compose(screen, THEME)
        assert screen.get(50, 50) != THEME.color("desktop")
        wm.minimize(wid)
        wm.compose(screen, THEME)
        assert screen.get(50, 50) == THEME.color("desktop")

    def test_z_overlap_pixel_is_topmost(self):
        wm = make_wm()
        a = wm.create_window("a", Rect(10, 10, 100, 100))
        b = wm.create_window("b", Rect(40, 40, 100, 100))
        screen = FrameBuffer(320, 240, FMT)
        wm.compose(screen, THEME)
        bx, by = wm.window(b).client_screen_rect().center()
        assert screen.get(bx, by) == THEME.color("window-face")
        # raise a over b; same pixel now belongs to a's client
        wm.raise_window(a)
        wm.compose(screen, THEME)
        assert wm.window(a).client_screen_rect().contains(bx, by)
        assert screen.get(bx, by) == THEME.color("window-face")

    def test_twin_scene_oracle_random_session(self):
        rng = random.Random(31415)
        twins = TwinScenes()
        for step in range(150):
            op = random_op(rng, twins.live_wm)
            assert twins.apply_and_compare(op), f"divergence at step {step}: {op}"

    def test_twin_scene_with_drags(self):
        rng = random.Random(2718)
        twins = TwinScenes()
        ids = [apply_op(twins.live_wm, ("create", f"w{i}", Rect(20 * i, 15 * i, 90, 70)))
               for i in range(3)]
        for i in range(3):
            apply_op(twins.twin_wm, ("create", f"w{i}", Rect(20 * i, 15 * i, 90, 70)))
        twins.live_wm.compose(twins.live, THEME)
        twins.twin_wm.compose_full(twins.twin, THEME)
        for step in range(20):
            wid = rng.choice(ids)
            win = twins.live_wm.window(wid)
            part = rng.choice(["title", "border-se", "border-n", "border-w"])
            sx, sy = win.frame.center()
            for wm in (twins.live_wm, twins.twin_wm):
                wm.begin_drag(wid, part, sx, sy)
            for _ in range(rng.randrange(1, 4)):
                mx, my = rng.randrange(320), rng.randrange(240)
                for wm in (twins.live_wm, twins.twin_wm):
                    wm.drag_motion(mx, my)
                twins.live_wm.compose(twins.live, THEME)
                twins.twin_wm.compose_full(twins.twin, THEME)
                assert snapshot_hash(twins.live) == snapshot_hash(twins.twin)
            for wm in (twins.live_wm, twins.twin_wm):
                wm.drag_commit()
            twins.live_wm.compose(twins.live, THEME)
            twins.twin_wm.compose_full(twins.twin, THEME)
            assert snapshot_hash(twins.live) == snapshot_hash(twins.twin), f"step {step}"
