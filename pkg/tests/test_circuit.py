import random

import pytest

from fbgui.chemical import pack, pack_args
from fbgui.circuit import (
    Circuit,
    CircuitError,
    CircuitNode,
    InvalidCircuitError,
    NodeKind,
    dump_circuit,
    parse_circuit,
)


def token_executor(behaviors):
    """Executor appending tokens to the payload, optionally toggling switches."""
    def run(handler_id, payload, controls):
        b = behaviors[handler_id]
        args = pack_args(payload)
        args.set("tokens", list(args.value("tokens") or []) + [b["token"]])
        if b.get("toggle") is not None:
            controls.set_switch(b["toggle"], b["toggle_to"])
        if b.get("inject") is not None:
            controls.request_inject(b["inject"], pack(tokens=[]))
    return run


def simple_exec(order):
    def run(handler_id, payload, controls):
        order.append(handler_id)
    return run


def linear(*node_specs):
    """source -> ... -> ground chain helper; specs like ("h", id, res)."""
    c = Circuit()
    c.add_source("src", "go")
    prev = "src"
    for spec in node_specs:
        if spec[0] == "h":
            c.add_handler(f"h{spec[1]}", spec[1], spec[2] if len(spec) > 2 else 0)
            nid = f"h{spec[1]}"
        elif spec[0] == "sw":
            c.add_switch(spec[1], closed=spec[2])
            nid = spec[1]
        c.wire(prev, nid)
        prev = nid
    c.add_ground("gnd")
    c.wire(prev, "gnd")
    return c


class TestValidate:
    def test_minimal_ok(self):
        c = linear(("h", 1))
        assert c.validate() == []

    def test_source_without_path_is_defect(self):
        c = Circuit()
        c.add_source("src", "go")
        c.add_ground("gnd")
        codes = [d.code for d in c.validate()]
        assert "unreachable-ground" in codes

    def test_source_with_inputs_and_ground_with_outputs(self):
        c = linear(("h", 1))
        c.wire("h1", "src")
        c.wire("gnd", "h1")
        codes = {d.code for d in c.validate()}
        assert "source-with-inputs" in codes
        assert "ground-with-outputs" in codes

    def test_seeded_reachability_matches_bfs_oracle(self):
        rng = random.Random(11)
        for _ in range(50):
            c = Circuit()
            n = rng.randrange(2, 8)
            c.add_source("src", "go")
            c.add_ground("gnd")
            mids = []
            for i in range(n):
                c.add_series(f"m{i}")
                mids.append(f"m{i}")
            everything = ["src"] + mids + ["gnd"]
            for _ in range(rng.randrange(1, 12)):
                a = rng.choice(["src"] + mids)
                b = rng.choice(mids + ["gnd"])
                c.wire(a, b)
            # independent BFS over the wire list
            frontier, seen = ["src"], {"src"}
            while frontier:
                cur = frontier.pop(0)
                for w in c.wires:
                    if w.from_id == cur and w.to_id not in seen:
                        seen.add(w.to_id)
                        frontier.append(w.to_id)
            expect_defect = "gnd" not in seen
            got = any(d.code == "unreachable-ground" and d.subject == "src"
                      for d in c.validate())
            assert got == expect_defect


class TestInject:
    def test_single_handler(self):
        c = linear(("h", 1))
        order = []
        trace = c.inject("go", pack(tokens=[]), simple_exec(order))
        assert trace.fired == [1]
        assert order == [1]
        assert trace.blocked_at == []

    def test_parallel_ascending_resistance(self):
        c = Circuit()
        c.add_source("src", "go")
        c.add_parallel("p")
        c.add_handler("ha", 10, resistance=5)
        c.add_handler("hb", 20, resistance=2)
        c.add_ground("gnd")
        c.wire("src", "p")
        c.wire("p", "ha")
        c.wire("p", "hb")
        c.wire("ha", "gnd")
        c.wire("hb", "gnd")
        order = []
        trace = c.inject("go", pack(), simple_exec(order))
        assert trace.fired == [20, 10]

    def test_parallel_tie_breaks_by_wire_order(self):
        c = Circuit()
        c.add_source("src", "go")
        c.add_parallel("p")
        c.add_handler("ha", 1, resistance=3)
        c.add_handler("hb", 2, resistance=3)
        c.add_ground("gnd")
        c.wire("src", "p")
        c.wire("p", "hb")
        c.wire("p", "ha")
        c.wire("ha", "gnd")
        c.wire("hb", "gnd")
        trace = c.inject("go", pack(), simple_exec([]))
        assert trace.fired == [2, 1]

    def test_series_exhausts_branches_in_order(self):
        c = Circuit()
        c.add_source("src", "go")
        c.add_series("s")
        for hid in (1, 2, 3):
            c.add_handler(f"h{hid}", hid)
        c.add_handler("h9", 9)
        c.add_ground("gnd")
        c.wire("src", "s")
        c.wire("s", "h1")
        c.wire("s", "h3")
        c.wire("h1", "h2")
        c.wire("h2", "gnd")
        c.wire("h3", "h9")
        c.wire("h9", "gnd")
        trace = c.inject("go", pack(), simple_exec([]))
        assert trace.fired == [1, 2, 3, 9]  # first branch fully exhausted first

    def test_open_switch_blocks_and_close_restores(self):
        c = linear(("sw", "gate", True), ("h", 1))
        baseline = c.inject("go", pack(), simple_exec([])).dump()
        c.set_switch("gate", False)
        blocked = c.inject("go", pack(), simple_exec([]))
        assert blocked.fired == []
        assert blocked.blocked_at == ["gate"]
        c.set_switch("gate", True)
        assert c.inject("go", pack(), simple_exec([])).dump() == baseline

    def test_handler_fires_once_in_diamond(self):
        c = Circuit()
        c.add_source("src", "go")
        c.add_parallel("p")
        c.add_handler("ha", 1)
        c.add_handler("hb", 2)
        c.add_handler("hc", 3)
        c.add_ground("gnd")
        c.wire("src", "p")
        c.wire("p", "ha")
        c.wire("p", "hb")
        c.wire("ha", "hc")
        c.wire("hb", "hc")
        c.wire("hc", "gnd")
        trace = c.inject("go", pack(), simple_exec([]))
        assert trace.fired == [1, 3, 2]
        assert len(trace.fired) == len(set(trace.fired))

    def test_cycle_neutralized(self):
        c = linear(("h", 1), ("h", 2))
        c.wire("h2", "h1")  # feedback
        trace = c.inject("go", pack(), simple_exec([]))
        assert trace.fired == [1, 2]

    def test_handler_toggle_affects_untraversed_branch(self):
        c = Circuit()
        c.add_source("src", "go")
        c.add_series("s")
        c.add_handler("ha", 1)
        c.add_switch("gate", closed=True)
        c.add_handler("hb", 2)
        c.add_ground("gnd")
        c.wire("src", "s")
        c.wire("s", "ha")
        c.wire("s", "gate")
        c.wire("ha", "gnd")
        c.wire("gate", "hb")
        c.wire("hb", "gnd")
        behaviors = {
            1: {"token": "a", "toggle": "gate", "toggle_to": False},
            2: {"token": "b"},
        }
        trace = c.inject("go", pack(tokens=[]), token_executor(behaviors))
        assert trace.fired == [1]
        assert trace.blocked_at == ["gate"]

    def test_requested_injection_runs_after(self):
        c = Circuit()
        c.add_source("src", "go")
        c.add_source("src2", "later")
        c.add_handler("ha", 1)
        c.add_handler("hb", 2)
        c.add_ground("gnd")
        c.wire("src", "ha")
        c.wire("ha", "gnd")
        c.wire("src2", "hb")
        c.wire("hb", "gnd")
        behaviors = {1: {"token": "a", "inject": "later"}, 2: {"token": "b"}}
        trace = c.inject("go", pack(tokens=[]), token_executor(behaviors))
        assert trace.fired == [1]
        assert len(trace.followups) == 1
        assert trace.followups[0].event_name == "later"
        assert trace.followups[0].fired == [2]

    def test_unknown_event_and_invalid_circuit(self):
        c = linear(("h", 1))
        with pytest.raises(CircuitError):
            c.inject("nope", pack(), simple_exec([]))
        bad = Circuit()
        bad.add_source("src", "go")
        bad.add_ground("gnd")
        with pytest.raises(InvalidCircuitError):
            bad.inject("go", pack(), simple_exec([]))

    def test_payload_mutations_visible_downstream(self):
        c = linear(("h", 1), ("h", 2))
        behaviors = {1: {"token": "x"}, 2: {"token": "y"}}
        payload = pack(tokens=[])
        trace = c.inject("go", payload, token_executor(behaviors))
        assert pack_args(payload).value("tokens") == ["x", "y"]
        assert "tokens" in trace.steps[0].payload_snapshot


class TestRewire:
    def test_atomic_rejection(self):
        c = linear(("h", 1))
        before = dump_circuit(c)
        with pytest.raises(InvalidCircuitError):
            c.rewire([("remove_node", "gnd")])
        assert dump_circuit(c) == before

    def test_valid_edit_produces_new_circuit(self):
        c = linear(("h", 1))
        edited = c.rewire([
            ("add_node", CircuitNode("h2", NodeKind.HANDLER, handler_id=2)),
            ("remove_wire", "h1", "gnd"),
            ("add_wire", "h1", "h2"),
            ("add_wire", "h2", "gnd"),
        ])
        assert edited.inject("go", pack(), simple_exec([])).fired == [1, 2]
        assert c.inject("go", pack(), simple_exec([])).fired == [1]


# ---------------------------------------------------------------------------
# Independent reference interpreter, written straight from the traversal
# rules: series = insertion-order DFS fully exhausting each wire; parallel =
# ascending first-segment resistance (tie: wire order); open switch blocks;
# a handler fires once per injection and stops the branch when re-reached;
# wires back into the active path are not followed.
# ---------------------------------------------------------------------------

class RefInterp:
    def __init__(self, nodes, wires, behaviors):
        # nodes: id -> dict(kind=..., event=, handler=, resistance=, closed=)
        self.nodes = nodes
        self.wires = wires  # list of (from, to) in insertion order
        self.behaviors = behaviors
        self.switches = {i: n["closed"] for i, n in nodes.items() if n["kind"] == "switch"}

    def seg_resistance(self, start):
        total, cur, seen = 0, start, set()
        while cur not in seen:
            seen.add(cur)
            node = self.nodes[cur]
            if node["kind"] == "handler":
                total += node["resistance"]
            if node["kind"] in ("series", "parallel", "ground"):
                break
            succ = [t for f, t in self.wires if f == cur]
            if len(succ) != 1:
                break
            cur = succ[0]
        return total

    def run(self, event):
        fired_order, fired, blocked, tokens = [], set(), [], []
        source = next(i for i, n in self.nodes.items()
                      if n["kind"] == "source" and n["event"] == event)

        def successors(nid):
            out = [(idx, t) for idx, (f, t) in enumerate(self.wires) if f == nid]
            if self.nodes[nid]["kind"] == "parallel":
                out.sort(key=lambda pair: (self.seg_resistance(pair[1]), pair[0]))
            return [t for _, t in out]

        def walk(nid, path):
            node = self.nodes[nid]
            if node["kind"] == "handler":
                if nid in fired:
                    return
                fired.add(nid)
                fired_order.append(node["handler"])
                b = self.behaviors[node["handler"]]
                tokens.append(b["token"])
                if b.get("toggle") is not None:
                    self.switches[b["toggle"]] = b["toggle_to"]
            if node["kind"] == "switch" and not self.switches[nid]:
                blocked.append(nid)
                return
            if node["kind"] == "ground":
                return
            active = path + [nid]
            for target in successors(nid):
                if target in active:
                    continue
                walk(target, active)

        walk(source, [])
        return fired_order, blocked, tokens, dict(self.switches)


def random_circuit(rng):
    c = Circuit()
    nodes = {"src": {"kind": "source", "event": "go"},
             "gnd": {"kind": "ground"}}
    c.add_source("src", "go")
    c.add_ground("gnd")
    behaviors = {}
    mids = []
    switch_ids = []
    for i in range(rng.randrange(1, 10)):
        nid = f"n{i}"
        roll = rng.random()
        if roll < 0.55:
            hid = i + 1
            res = rng.randrange(10)
            c.add_handler(nid, hid, resistance=res)
            nodes[nid] = {"kind": "handler", "handler": hid, "resistance": res}
            behaviors[hid] = {"token": chr(ord("a") + i)}
        elif roll < 0.7:
            closed = rng.random() < 0.7
            c.add_switch(nid, closed=closed)
            nodes[nid] = {"kind": "switch", "closed": closed}
            switch_ids.append(nid)
        elif roll < 0.85:
            c.add_series(nid)
            nodes[nid] = {"kind": "series"}
        else:
            c.add_parallel(nid)
            nodes[nid] = {"kind": "parallel"}
        mids.append(nid)
    # some handlers toggle switches
    for hid, b in behaviors.items():
        if switch_ids and rng.random() < 0.25:
            b["toggle"] = rng.choice(switch_ids)
            b["toggle_to"] = rng.random() < 0.5
    wires = []
    spine = ["src"] + rng.sample(mids, rng.randrange(0, len(mids) + 1)) + ["gnd"]
    for a, b in zip(spine, spine[1:]):
        c.wire(a, b)
        wires.append((a, b))
    for _ in range(rng.randrange(0, 8)):
        a = rng.choice(["src"] + mids)
        b = rng.choice(mids + ["gnd"])
        c.wire(a, b)
        wires.append((a, b))
    for nid in mids:
        if not any(f == nid for f, _ in wires) and not any(t == nid for _, t in wires):
            c.wire(spine[0], nid)
            wires.append((spine[0], nid))
            c.wire(nid, "gnd")
            wires.append((nid, "gnd"))
    return c, nodes, wires, behaviors


class TestReferenceInterpreter:
    def test_seeded_circuits_match(self):
        rng = random.Random(20240)
        checked = 0
        while checked < 100:
            c, nodes, wires, behaviors = random_circuit(rng)
            if c.validate():
                continue
            checked += 1
            ref = RefInterp(nodes, wires, behaviors)
            expected_fired, expected_blocked, expected_tokens, expected_sw = ref.run("go")
            payload = pack(tokens=[])
            trace = c.inject("go", payload, token_executor(behaviors))
            assert trace.fired == expected_fired
            assert trace.blocked_at == expected_blocked
            assert (pack_args(payload).value("tokens") or []) == expected_tokens
            got_sw = {nid: n.closed for nid, n in c.nodes.items()
                      if n.kind is NodeKind.SWITCH}
            assert got_sw == expected_sw

    def test_determinism(self):
        rng = random.Random(5)
        for _ in range(10):
            c, nodes, wires, behaviors = random_circuit(rng)
            if c.validate():
                continue
            d1 = c.clone().inject("go", pack(tokens=[]), token_executor(behaviors)).dump()
            d2 = c.clone().inject("go", pack(tokens=[]), token_executor(behaviors)).dump()
            assert d1 == d2

    def test_monotone_gating(self):
        # closing a switch never removes handlers from the fired set
        # (handlers that toggle switches are excluded here by construction)
        rng = random.Random(99)
        checked = 0
        while checked < 30:
            c, nodes, wires, behaviors = random_circuit(rng)
            for b in behaviors.values():
                b.pop("toggle", None)
            switches = [nid for nid, n in c.nodes.items() if n.kind is NodeKind.SWITCH]
            if c.validate() or not switches:
                continue
            checked += 1
            target = rng.choice(switches)
            c.set_switch(target, False)
            open_fired = set(c.inject("go", pack(tokens=[]),
                                      token_executor(behaviors)).fired)
            c.set_switch(target, True)
            closed_fired = set(c.inject("go", pack(tokens=[]),
                                        token_executor(behaviors)).fired)
            assert open_fired <= closed_fired


class TestTextFormat:
    def test_roundtrip(self):
        c = Circuit()
        c.add_source("src", "go")
        c.add_parallel("p")
        c.add_handler("h1", 1, resistance=4)
        c.add_switch("sw", closed=False)
        c.add_series("s")
        c.add_ground("gnd")
        c.wire("src", "p")
        c.wire("p", "h1")
        c.wire("p", "sw")
        c.wire("sw", "s")
        c.wire("s", "gnd")
        c.wire("h1", "gnd")
        text = dump_circuit(c)
        assert dump_circuit(parse_circuit(text)) == text

    def test_parse_errors_mention_line(self):
        with pytest.raises(CircuitError) as exc:
            parse_circuit("SOURCE src go\nWAT x\n")
        assert "line 2" in str(exc.value)

    def test_comments_and_blanks_ignored(self):
        c = parse_circuit("# demo\n\nSOURCE src go\nHANDLER h 1 0\nGROUND g\nWIRE src h\nWIRE h g\n")
        assert c.validate() == []
