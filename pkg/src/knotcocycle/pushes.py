"""Generated move traces: monotone pushes, lifted isotopies, loops.

An isotopy trace is an initial diagram plus a list of steps, each either
a Reidemeister move event or a validated planar-isotopy rewrite of the
word (slice commutations, box re-rootings, id renumberings).  Pushing a
small tangle box through a diagram is generated as a deterministic
sequence of such steps: the transversal wire of each crossing sweeps
across the box, giving one RIII per box crossing and one RII per box
extremum, and the box flips upside down whenever the carrier strand
turns at an extremum of the ambient diagram.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import Diagram, InvalidDiagram
from .moves import MoveEvent, apply_event


class InvalidTrace(Exception):
    pass


def gauss_pattern(diagram):
    """Gauss word with ids renumbered by first visit; isotopy invariant."""
    seen = {}
    out = []
    for cid, ou, sg, comp in diagram.gauss_word():
        n = seen.setdefault(cid, len(seen))
        out.append((n, ou, sg, comp))
    return tuple(out)


@dataclass
class Trace:
    initial: Diagram
    steps: list = field(default_factory=list)   # ("move", e) | ("iso", diag, why)
    final: Diagram = None

    def replay(self):
        """Yield (pre, step, post), validating the whole chain."""
        cur = self.initial
        for step in self.steps:
            if step[0] == "move":
                post = apply_event(step[1], cur, check_ref=bool(step[1].pre_ref))
            elif step[0] == "iso":
                post = step[1]
                if gauss_pattern(post) != gauss_pattern(cur) or \
                        post.n_bottom != cur.n_bottom or post.labels != cur.labels:
                    raise InvalidTrace("isotopy step changes the diagram (%s)"
                                       % (step[2] if len(step) > 2 else "?",))
            else:
                raise InvalidTrace("unknown step %r" % (step[0],))
            yield cur, step, post
            cur = post
        if self.final is not None and cur != self.final and \
                (gauss_pattern(cur) != gauss_pattern(self.final)
                 or cur.labels != self.final.labels):
            raise InvalidTrace("trace does not reach its final diagram")

    def validate(self):
        for _ in self.replay():
            pass
        return self

    def states(self):
        out = [self.initial]
        for _, _, post in self.replay():
            out.append(post)
        return out

    def events(self):
        return [s[1] for s in self.steps if s[0] == "move"]

    def final_state(self):
        if self.final is not None:
            return self.final
        cur = self.initial
        for _, _, cur in self.replay():
            pass
        return cur

    def reversed(self):
        states = self.states()
        steps = []
        for i in range(len(self.steps) - 1, -1, -1):
            step = self.steps[i]
            if step[0] == "move":
                ev = step[1].reversed()
                fwd = step[1]
                pre = states[i]
                if fwd.kind == "RII-":
                    # recover the deleted pair's geometry for re-creation
                    if fwd.pattern == "pair":
                        s0 = pre.slices[fwd.index]
                        ev.col, ev.over = s0[1], s0[2]
                    elif fwd.pattern == "cup":
                        ev.over = pre.slices[fwd.index + 1][2]
                    else:
                        ev.over = pre.slices[fwd.index][2]
                steps.append(("move", ev))
            else:
                steps.append(("iso", states[i], "reverse"))
        return Trace(states[-1], steps, self.initial)

    def then(self, other, relabel=True):
        """Concatenate, inserting a renumbering isotopy at the junction."""
        a_final = self.final_state()
        steps = list(self.steps)
        if a_final != other.initial:
            if gauss_pattern(a_final) != gauss_pattern(other.initial):
                raise InvalidTrace("traces do not compose")
            steps.append(("iso", other.initial, "junction relabel"))
        return Trace(self.initial, steps + list(other.steps),
                     other.final_state())

    def to_json(self):
        out = []
        for step in self.steps:
            if step[0] == "move":
                out.append({"move": step[1].to_json()})
            else:
                out.append({"iso": step[1].to_json(),
                            "why": step[2] if len(step) > 2 else ""})
        return {"initial": self.initial.to_json(), "steps": out,
                "final": self.final_state().to_json()}


class TraceBuilder:
    def __init__(self, initial):
        self.initial = initial
        self.current = initial
        self.steps = []

    def move(self, event, tags=None):
        if tags:
            event.tags.update(tags)
        event.pre_ref = self.current.state_ref()
        post = apply_event(event, self.current)
        self.steps.append(("move", event))
        self.current = post
        return post

    def iso(self, new_slices, why=""):
        post = Diagram([tuple(s) for s in new_slices], self.current.n_bottom,
                       self.current.labels, self.current.parent_of)
        if gauss_pattern(post) != gauss_pattern(self.current):
            raise InvalidTrace("invalid isotopy step (%s)" % why)
        self.steps.append(("iso", post, why))
        self.current = post
        return post

    def relabel(self, start=1, why="renumber"):
        post = self.current.renumbered(start)
        self.steps.append(("iso", post, why))
        self.current = post
        return post

    def done(self):
        return Trace(self.initial, self.steps, self.current)


# -- slice word helpers ------------------------------------------------------

def _rebase(slices, delta):
    out = []
    for s in slices:
        if s[0] == "x":
            out.append(("x", s[1] + delta, s[2], s[3]))
        elif s[0] == "dp":
            out.append(("dp", s[1] + delta, s[2]))
        else:
            out.append((s[0], s[1] + delta))
    return out


def rotate180_slices(slices, n_bottom):
    """Slice word of the diagram rotated by half a turn."""
    widths = [n_bottom]
    w = n_bottom
    for s in slices:
        if s[0] == "cup":
            w += 2
        elif s[0] == "cap":
            w -= 2
        widths.append(w)
    out = []
    for i in range(len(slices) - 1, -1, -1):
        s = slices[i]
        if s[0] == "x":
            out.append(("x", widths[i] - s[1], s[2], s[3]))
        elif s[0] == "dp":
            out.append(("dp", widths[i] - s[1], s[2]))
        elif s[0] == "cup":
            out.append(("cap", widths[i + 1] - s[1]))
        else:
            out.append(("cup", widths[i] - s[1]))
    return out


def _box_widths(box_slices, cw):
    widths = [cw]
    w = cw
    for s in box_slices:
        if s[0] == "cup":
            w += 2
        elif s[0] == "cap":
            w -= 2
        widths.append(w)
    return widths


# -- the transversal sweep ---------------------------------------------------

def _unit_sweep(builder, b0, b1, beta, cw, tside, tags):
    """Sweep one transversal wire across the box at [b0, b1).

    The cw front slices (the transversal crossing every box boundary
    wire) must sit at [b1, b1+cw).  Returns (b0', b1', beta')."""
    word = list(builder.current.slices)
    box = word[b0:b1]
    m = len(box)
    front = [tuple(s) for s in word[b1:b1 + cw]]
    lower = word[:b0]
    upper = word[b1 + cw:]
    if tside == "R":
        exp = list(range(beta + cw - 1, beta - 1, -1))
    else:
        exp = list(range(beta - 1, beta + cw - 1))
    if [s[1] for s in front] != exp or any(s[0] != "x" for s in front):
        raise InvalidDiagram("front mismatch at sweep start")
    kind = front[0][2]
    processed = []

    def emit(box_part, mid, why):
        builder.iso(lower + list(box_part) + list(mid) + processed + upper, why)

    for j in range(m - 1, -1, -1):
        f = box[j]
        tag, c = f[0], f[1]
        if tag == "x":
            if tside == "R":
                hi = [s for s in front if s[1] >= c + 2]
                pair = [s for s in front if s[1] in (c + 1, c)]
                lo = [s for s in front if s[1] < c]
                arranged = hi + [f] + pair + lo
                idx = b0 + j + len(hi)
            else:
                lo = [s for s in front if s[1] <= c - 2]
                pair = [s for s in front if s[1] in (c - 1, c)]
                hi = [s for s in front if s[1] > c]
                arranged = lo + [f] + pair + hi
                idx = b0 + j + len(lo)
            if len(pair) != 2:
                raise InvalidDiagram("front does not cover box crossing")
            emit(box[:j], arranged, "sweep arrange")
            builder.move(MoveEvent("RIII", idx), tags=tags)
            word2 = list(builder.current.slices)
            new_pair = [tuple(word2[idx]), tuple(word2[idx + 1])]
            moved = tuple(word2[idx + 2])
            front = (hi + new_pair + lo) if tside == "R" else (lo + new_pair + hi)
            processed = [moved] + processed
            emit(box[:j], front, "sweep restore")
        elif tag == "cup":
            if tside == "R":
                hi = [("x", s[1] - 2, s[2], s[3]) for s in front if s[1] >= c + 2]
                pair = [s for s in front if s[1] in (c + 1, c)]
                lo = [s for s in front if s[1] < c]
                arranged = hi + [f] + pair + lo
                idx = b0 + j + len(hi)
                side = "R"
                newfront = hi + lo
            else:
                lo = [s for s in front if s[1] <= c - 2]
                pair = [s for s in front if s[1] in (c - 1, c)]
                hi = [s for s in front if s[1] > c]
                arranged = lo + [f] + pair + hi
                idx = b0 + j + len(lo)
                side = "L"
                newfront = lo + [("x", s[1] - 2, s[2], s[3]) for s in hi]
            if len(pair) != 2:
                raise InvalidDiagram("front does not cover box cup")
            emit(box[:j], arranged, "sweep arrange cup")
            builder.move(MoveEvent("RII-", idx, pattern="cup", side=side),
                         tags=tags)
            word2 = list(builder.current.slices)
            newcup = tuple(word2[idx])
            front = newfront
            processed = [newcup] + processed
            emit(box[:j], front, "sweep cup")
        elif tag == "cap":
            # the transversal must cross the nearer wires before it can
            # slide over the dying pair, so those front slices descend
            # past the cap first
            if tside == "R":
                hi = [("x", s[1] + 2, s[2], s[3]) for s in front if s[1] >= c]
                lo = [s for s in front if s[1] < c]
                arranged = hi + [f] + lo
                idx = b0 + j + len(hi)
                side = "R"
            else:
                lo = [s for s in front if s[1] <= c - 2]
                hi_raw = [s for s in front if s[1] >= c - 1]
                hi = [("x", s[1] + 2, s[2], s[3]) for s in hi_raw]
                arranged = lo + [f] + hi_raw
                idx = b0 + j + len(lo)
                side = "L"
            emit(box[:j], arranged, "sweep arrange cap")
            builder.move(MoveEvent("RII+", idx, pattern="cap", side=side,
                                   over=kind), tags=tags)
            word2 = list(builder.current.slices)
            new_pair = [tuple(word2[idx]), tuple(word2[idx + 1])]
            newcap = tuple(word2[idx + 2])
            if tside == "R":
                front = hi + new_pair + lo
            else:
                front = lo + new_pair + hi
            processed = [newcap] + processed
            emit(box[:j], front, "sweep cap")
        else:
            raise InvalidDiagram("cannot sweep a singular box")
    new_b0 = b0 + cw
    return new_b0, new_b0 + m, beta + (1 if tside == "R" else -1)


def _involves_up(s, lo, hi):
    tag, c = s[0], s[1]
    if tag in ("x", "dp", "cap"):
        return not (c + 1 < lo or c > hi)
    if lo < c <= hi:
        raise InvalidDiagram("cup born between carrier wires")
    return False


def _involves_down(s, lo, hi):
    tag, c = s[0], s[1]
    if tag in ("x", "dp", "cup"):
        return not (c + 1 < lo or c > hi)
    return False


def _flip_box(builder, b0, b1, beta, cw, vdir):
    """Carry the box around a turn of the carrier strand."""
    word = list(builder.current.slices)
    box = word[b0:b1]
    if vdir == "up":
        exts = word[b1:b1 + cw]
        if any(s[0] != "cap" for s in exts):
            raise InvalidDiagram("expected %d caps at the turn" % cw)
        if cw == 1:
            c0 = exts[0][1]
            if c0 == beta - 1:
                newbeta = beta - 1
            elif c0 == beta:
                newbeta = beta + 1
            else:
                raise InvalidDiagram("cap does not meet the carrier")
        else:
            if exts[0][1] == beta - 1 and exts[1][1] == beta - 2:
                newbeta = beta - 2
            elif exts[0][1] == beta + 1 and exts[1][1] == beta:
                newbeta = beta + 2
            else:
                raise InvalidDiagram("cap pair does not meet the carrier")
    else:
        exts = word[b0 - cw:b0]
        if any(s[0] != "cup" for s in exts):
            raise InvalidDiagram("expected %d cups at the turn" % cw)
        if cw == 1:
            c0 = exts[0][1]
            if c0 == beta - 1:
                newbeta = beta - 1
            elif c0 == beta:
                newbeta = beta + 1
            else:
                raise InvalidDiagram("cup does not meet the carrier")
        else:
            if exts[0][1] == beta - 2 and exts[1][1] == beta - 1:
                newbeta = beta - 2
            elif exts[0][1] == beta and exts[1][1] == beta + 1:
                newbeta = beta + 2
            else:
                raise InvalidDiagram("cup pair does not meet the carrier")
    flipped = rotate180_slices(_rebase(box, 1 - beta), cw)
    flipped = _rebase(flipped, newbeta - 1)
    builder.iso(word[:b0] + flipped + word[b1:], "box flip")
    return b0, b1, newbeta


def _mk_tags(diagram, obstacle, carrier_left, tag_prefix):
    cid = obstacle[3]
    parent = diagram.parent_of.get(cid, cid)
    over = (obstacle[2] == "L") == carrier_left
    return {"bundle": parent, "crossing": cid, "carrier_over": over,
            "prefix": tag_prefix}


def _replay_rotated(builder, sub):
    """Map the steps of a half-turn-rotated sub-builder onto the real word."""
    sub_states = [sub.initial]
    cur = sub.initial
    for step in sub.steps:
        if step[0] == "move":
            cur = apply_event(step[1], cur, check_ref=False)
        else:
            cur = step[1]
        sub_states.append(cur)
    for i, step in enumerate(sub.steps):
        n_pre = len(builder.current.slices)
        target = rotate180_slices(sub_states[i + 1].slices,
                                  sub_states[i + 1].n_bottom)
        if step[0] == "iso":
            builder.iso(target, "rotated iso")
            continue
        ev = step[1]
        cands = []
        if ev.kind == "RIII":
            cands.append(MoveEvent("RIII", n_pre - 3 - ev.index,
                                   tags=dict(ev.tags)))
        elif ev.pattern == "cap" and ev.kind == "RII+":
            for side in ("R", "L"):
                cands.append(MoveEvent("RII+", n_pre - 1 - ev.index,
                                       over=ev.over, pattern="cup", side=side,
                                       tags=dict(ev.tags)))
        elif ev.pattern == "cup" and ev.kind == "RII-":
            for side in ("R", "L"):
                cands.append(MoveEvent("RII-", n_pre - 3 - ev.index,
                                       pattern="cap", side=side,
                                       tags=dict(ev.tags)))
        else:
            raise InvalidTrace("unexpected rotated event %r" % (ev,))
        placed = False
        want = [tuple(s) for s in target]
        want_shape = [s[:3] if s[0] == "x" else s for s in want]
        for cand in cands:
            try:
                post = apply_event(cand, builder.current, check_ref=False)
            except Exception:
                continue
            got = list(post.slices)
            if got == want:
                builder.move(cand)
                placed = True
                break
            if [s[:3] if s[0] == "x" else s for s in got] == want_shape:
                builder.move(cand)
                builder.iso(want, "rotated id fix")
                placed = True
                break
        if not placed:
            raise InvalidTrace("could not map a rotated event back")


def _sweep_down(builder, b0, b1, beta, cw, ordered_fronts, tags):
    """Downward passages via the half-turn rotation of the whole word."""
    d = builder.current
    n = len(d.slices)
    widths = d.width_profile()
    rot = rotate180_slices(d.slices, d.n_bottom)
    rb0, rb1 = n - b1, n - b0
    rbeta = widths[b0] - (beta + cw - 1) + 1
    sub = TraceBuilder(Diagram(rot, d.n_bottom, tuple(reversed(d.labels))))
    nb0, nb1, nbeta = rb0, rb1, rbeta
    word = list(sub.current.slices)
    if cw == 1:
        obst = word[nb1]
        tside = "R" if obst[1] == nbeta else "L"
        nb0, nb1, nbeta = _unit_sweep(sub, nb0, nb1, nbeta, 1, tside, tags)
    else:
        bundle = word[nb1:nb1 + 4]
        tside = "R" if bundle[0][1] == nbeta + 1 else "L"
        nb0, nb1, nbeta = _cable_bundle_sweep(sub, nb0, nb1, nbeta, tside, tags)
    _replay_rotated(builder, sub)
    n2 = len(builder.current.slices)
    widths2 = builder.current.width_profile()
    b0n, b1n = n2 - nb1, n2 - nb0
    betan = widths2[b0n] - (nbeta + cw - 1) + 1
    return b0n, b1n, betan


def _cable_bundle_sweep(builder, b0, b1, beta, tside, tags):
    """Pass the 2-wide box across a canonical four-crossing cable bundle."""
    word = list(builder.current.slices)
    bundle = [tuple(s) for s in word[b1:b1 + 4]]
    if tside == "R":
        want = [beta + 1, beta + 2, beta, beta + 1]
    else:
        want = [beta - 1, beta, beta - 2, beta - 1]
    if [s[1] for s in bundle] != want or any(s[0] != "x" for s in bundle):
        raise InvalidDiagram("unexpected cable bundle %r" % (bundle,))
    if tside == "R":
        arranged = [bundle[0], bundle[2], bundle[1], bundle[3]]
        builder.iso(word[:b1] + arranged + word[b1 + 4:], "bundle arrange")
        b0, b1, beta = _unit_sweep(builder, b0, b1, beta, 2, "R", tags)
        b0, b1, beta = _unit_sweep(builder, b0, b1, beta, 2, "R", tags)
        word2 = list(builder.current.slices)
        landed = [tuple(s) for s in word2[b0 - 4:b0]]
        fixed = [landed[0], landed[2], landed[1], landed[3]]
        builder.iso(word2[:b0 - 4] + fixed + word2[b0:], "bundle restore")
    else:
        b0, b1, beta = _unit_sweep(builder, b0, b1, beta, 2, "L", tags)
        b0, b1, beta = _unit_sweep(builder, b0, b1, beta, 2, "L", tags)
    return b0, b1, beta


def push_box(box, host, carrier_width, tag_prefix=""):
    """Push the tangle `box` bottom-to-top through `host`.

    Both are (cw -> cw) words; the trace runs from concat(box, host) to
    concat(host, box)."""
    cw = carrier_width
    host2 = host.renumbered(box.max_id() + 1)
    initial = Diagram(box.slices + host2.slices, host.n_bottom, host.labels,
                      dict(host2.parent_of))
    builder = TraceBuilder(initial)
    b0, b1 = 0, len(box.slices)
    beta = 1
    orient = "up"
    guard = 0
    while True:
        guard += 1
        if guard > 20000:
            raise InvalidTrace("push did not terminate")
        word = list(builder.current.slices)
        hi_col = beta + cw - 1
        if orient == "up":
            j = b1
            mids = []
            newbeta = beta
            while j < len(word) and \
                    not _involves_up(word[j], newbeta, newbeta + cw - 1):
                s = word[j]
                mids.append(s)
                if s[0] == "cup" and s[1] <= newbeta:
                    newbeta += 2
                elif s[0] == "cap" and s[1] + 1 < newbeta:
                    newbeta -= 2
                j += 1
            if mids:
                boxpart = _rebase(word[b0:b1], newbeta - beta)
                builder.iso(word[:b0] + mids + boxpart + word[j:], "clear mids")
                b0 += len(mids)
                b1 += len(mids)
                beta = newbeta
                continue
            if j >= len(word):
                break
            obstacle = word[j]
            if obstacle[0] == "x":
                if cw == 1:
                    tside = "R" if obstacle[1] == beta else "L"
                    tags = _mk_tags(builder.current, obstacle, tside == "R",
                                    tag_prefix)
                    b0, b1, beta = _unit_sweep(builder, b0, b1, beta, 1,
                                               tside, tags)
                else:
                    tside = "R" if obstacle[1] == beta + 1 else "L"
                    tags = _mk_tags(builder.current, obstacle, tside == "R",
                                    tag_prefix)
                    b0, b1, beta = _cable_bundle_sweep(builder, b0, b1, beta,
                                                       tside, tags)
            elif obstacle[0] == "cap":
                b0, b1, beta = _flip_box(builder, b0, b1, beta, cw, "up")
                orient = "down"
            else:
                raise InvalidDiagram("carrier meets %r going up" % (obstacle,))
        else:
            j = b0 - 1
            mids = []
            newbeta = beta
            while j >= 0 and \
                    not _involves_down(word[j], newbeta, newbeta + cw - 1):
                s = word[j]
                mids.append(s)
                if s[0] == "cup" and s[1] + 1 < newbeta:
                    newbeta -= 2
                elif s[0] == "cap" and s[1] <= newbeta:
                    newbeta += 2
                j -= 1
            if mids:
                mids.reverse()
                boxpart = _rebase(word[b0:b1], newbeta - beta)
                builder.iso(word[:j + 1] + boxpart + mids + word[b1:],
                            "clear mids")
                b0 -= len(mids)
                b1 -= len(mids)
                beta = newbeta
                continue
            if j < 0:
                raise InvalidDiagram("carrier exits the bottom boundary")
            obstacle = word[j]
            if obstacle[0] == "x":
                if cw == 1:
                    tside_real = "R" if obstacle[1] == beta else "L"
                else:
                    tside_real = "R" if obstacle[1] == beta + 1 else "L"
                tags = _mk_tags(builder.current, obstacle, tside_real == "L",
                                tag_prefix)
                b0, b1, beta = _sweep_down(builder, b0, b1, beta, cw, None,
                                           tags)
            elif obstacle[0] == "cup":
                b0, b1, beta = _flip_box(builder, b0, b1, beta, cw, "down")
                orient = "up"
            else:
                raise InvalidDiagram("carrier meets %r going down" % (obstacle,))
    builder.relabel(why="canonical final")
    return builder.done()


# -- public constructions ----------------------------------------------------

def make_push(k, d):
    """Monotone push of the long knot k through the long knot d."""
    if k.n_bottom != 1 or d.n_bottom != 1:
        raise InvalidDiagram("make_push expects long knots")
    k.validate()
    d.validate()
    return push_box(k, d, 1, tag_prefix="push1")


def make_push2(k, d):
    """Push of the 2-cable of k through the 2-cable of d."""
    if k.n_bottom != 1 or d.n_bottom != 1:
        raise InvalidDiagram("make_push2 expects long knots")
    return push_box(k.cable2(), d.cable2(), 2, tag_prefix="push2")
