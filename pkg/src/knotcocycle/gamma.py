"""Lifting knot-level isotopies to their blackboard 2-cables.

A Reidemeister move on a long knot induces a move sequence on the
2-cable: an RII move becomes four nested RII moves, an RIII move becomes
eight RIII moves threaded by slice commutations (each strand copy of the
middle band crosses each crossing copy of the distinguished cluster).
The lift keeps the cable word in the canonical doubled form, so scripted
isotopies compose with pushes on either side of the cable.
"""

from __future__ import annotations

import random

from .diagram import Diagram, InvalidDiagram
from .moves import MoveEvent, apply_event
from .pushes import Trace, TraceBuilder, InvalidTrace


def doubled_offset(knot_slices, index):
    """Cable slice index of the double of knot slice `index`."""
    off = 0
    for s in knot_slices[:index]:
        off += 4 if s[0] == "x" else 2
    return off


# the eight-move choreography rewriting S1 S2 S1 -> S2 S1 S2 for band
# generators; p/q/r name the four crossing copies of the three knot
# crossings in doubled-word order, ("c", a, b) commutes the adjacent
# slices carrying a and b, ("r", a, b, c) is an RIII on those three
_SCRIPT_LR = [
    ("c", "q4", "r1"), ("c", "p4", "q1"), ("c", "p4", "q2"),
    ("r", "p4", "q3", "r1"), ("r", "p4", "q4", "r2"),
    ("c", "p2", "p3"), ("c", "q2", "r1"),
    ("r", "p2", "q1", "r1"),
    ("c", "q2", "q3"), ("c", "p2", "q3"),
    ("r", "p2", "q2", "r2"),
    ("c", "p4", "r3"), ("c", "q4", "r3"), ("c", "p2", "r3"),
    ("c", "q2", "r3"), ("c", "r2", "r3"),
    ("c", "p3", "r1"), ("c", "p3", "q1"),
    ("r", "p3", "q3", "r3"),
    ("c", "p1", "r1"),
    ("r", "p1", "q1", "r3"),
    ("c", "p4", "r4"),
    ("c", "p3", "r2"), ("c", "p3", "q2"), ("c", "p3", "p2"),
    ("r", "p3", "q4", "r4"),
    ("c", "p1", "q3"), ("c", "p1", "r2"), ("c", "p2", "r4"),
    ("r", "p1", "q2", "r4"),
    ("c", "q3", "r2"), ("c", "q1", "r2"), ("c", "r3", "r2"),
    ("c", "q3", "r4"), ("c", "q1", "r4"), ("c", "q3", "q2"),
    ("c", "p2", "q4"), ("c", "p1", "q4"),
]


def _names_for_window(window, rotated):
    """Assign p1..p4, q1..q4, r1..r4 to the window's crossing ids."""
    ids = [s[3] for s in window]
    if rotated:
        ids = ids[::-1]
    names = {}
    for ci, prefix in enumerate(("p", "q", "r")):
        for j in range(4):
            names["%s%d" % (prefix, j + 1)] = ids[4 * ci + j]
    return names


def lift_riii(builder, w0, rotated):
    """Run the cabled RIII choreography on the window at [w0, w0+12)."""
    window = list(builder.current.slices[w0:w0 + 12])
    names = _names_for_window(window, rotated)
    work = list(builder.current.slices)
    dirty = False

    def find(cid):
        for i in range(w0, w0 + 12):
            s = work[i]
            if s[0] == "x" and s[3] == cid:
                return i
        raise InvalidTrace("lost crossing %r in the lift window" % cid)

    def flush():
        nonlocal dirty
        if dirty:
            builder.iso(work, "lift commute")
            dirty = False

    for op in _SCRIPT_LR:
        if op[0] == "c":
            a, b = find(names[op[1]]), find(names[op[2]])
            if abs(a - b) != 1:
                raise InvalidTrace("lift commute of non-adjacent slices")
            work[a], work[b] = work[b], work[a]
            dirty = True
        else:
            flush()
            idxs = sorted(find(names[x]) for x in op[1:])
            if idxs != [idxs[0], idxs[0] + 1, idxs[0] + 2]:
                raise InvalidTrace("lift RIII slices not contiguous")
            builder.move(MoveEvent("RIII", idxs[0]))
            work[:] = list(builder.current.slices)
    flush()


def lift_trace(knot_trace, box=None, box_side=None):
    """Cable a knot-level move trace, optionally beside a parked 2-cable.

    box_side "left" glues `box` below (at the infinity end), "right"
    glues it above; the lifted trace then acts on the cable of the
    evolving knot while the box is carried along untouched.
    """
    cable0 = knot_trace.initial.cable2()
    if box is None:
        initial = cable0
        shift = 0
    elif box_side == "left":
        initial = Diagram(box.slices + cable0.renumbered(box.max_id() + 1).slices,
                          2, ("red", "black"))
        shift = len(box.slices)
    else:
        b2 = box.renumbered(cable0.max_id() + 1)
        initial = Diagram(cable0.slices + b2.slices, 2, ("red", "black"))
        shift = 0
    builder = TraceBuilder(initial)
    knot_state = knot_trace.initial
    for pre, step, post in knot_trace.replay():
        if step[0] != "move":
            knot_state = post
            continue
        ev = step[1]
        if ev.kind == "RII+":
            if ev.pattern != "pair":
                raise InvalidTrace("only pair RII moves lift")
            p = shift + doubled_offset(pre.slices, ev.index)
            c = ev.col
            k = ev.over
            for rel, col in ((0, 2 * c), (1, 2 * c + 1), (2, 2 * c - 1),
                             (3, 2 * c)):
                builder.move(MoveEvent("RII+", p + rel, col=col, over=k,
                                       tags={"lift": ev.to_json()}))
            sl = list(builder.current.slices)
            sl[p + 5], sl[p + 6] = sl[p + 6], sl[p + 5]
            builder.iso(sl, "lift RII order")
        elif ev.kind == "RII-":
            p = shift + doubled_offset(pre.slices, ev.index)
            sl = list(builder.current.slices)
            sl[p + 5], sl[p + 6] = sl[p + 6], sl[p + 5]
            builder.iso(sl, "lift RII order")
            for rel in (3, 2, 1, 0):
                builder.move(MoveEvent("RII-", p + rel,
                                       tags={"lift": ev.to_json()}))
        elif ev.kind == "RIII":
            p = shift + doubled_offset(pre.slices, ev.index)
            tri = pre.slices[ev.index:ev.index + 3]
            rotated = tri[0][1] > tri[1][1]
            lift_riii(builder, p, rotated)
        else:
            raise InvalidTrace("cannot lift %r" % (ev.kind,))
        knot_state = post
        # the lifted word must remain the canonical double
        want = knot_state.cable2()
        got = builder.current
        cmp_got = got.slices[shift:shift + len(want.slices)] if box_side == "left" \
            else got.slices[:len(want.slices)] if box is not None else got.slices
        if [s[:3] if s[0] == "x" else s for s in cmp_got] != \
                [s[:3] if s[0] == "x" else s for s in want.slices]:
            raise InvalidTrace("lift left the canonical doubled form")
    return builder.done()


# -- random knot-level scripts ------------------------------------------------

def random_gamma(diagram, n_moves, seed):
    """A random script of RII/RIII moves on a long knot diagram."""
    rng = random.Random(seed)
    builder = TraceBuilder(diagram)
    for _ in range(n_moves):
        word = builder.current.slices
        widths = builder.current.width_profile()
        options = []
        for i in range(len(word) + 1):
            w = widths[i]
            for c in range(1, w):
                options.append(MoveEvent("RII+", i, col=c,
                                         over=rng.choice("RL")))
        for i in range(len(word) - 1):
            a, b = word[i], word[i + 1]
            if a[0] == "x" and b[0] == "x" and a[1] == b[1] and a[2] != b[2]:
                options.append(MoveEvent("RII-", i))
        for i in range(len(word) - 2):
            t = word[i:i + 3]
            if all(s[0] == "x" for s in t) and t[0][1] == t[2][1] \
                    and abs(t[0][1] - t[1][1]) == 1:
                ev = MoveEvent("RIII", i)
                try:
                    from .moves import classify
                    classify(ev, builder.current)
                    options.append(ev)
                except Exception:
                    pass
        if not options:
            break
        weights = [3 if o.kind != "RII+" else 1 for o in options]
        builder.move(rng.choices(options, weights)[0])
    return builder.done()


def four_arc_loop(k, d, gamma, tag=""):
    """push(2K,2D) (gamma 2K) -push(2K,2D') (-2K gamma), a contractible loop."""
    from .pushes import make_push2
    if gamma.initial != d:
        raise InvalidTrace("gamma must start at d")
    d2 = gamma.final_state()
    a = make_push2(k, d)
    b = lift_trace(gamma, box=k.cable2(), box_side="right")
    c = make_push2(k, d2).reversed()
    e = lift_trace(gamma, box=k.cable2(), box_side="left").reversed()
    return a.then(b).then(c).then(e)
