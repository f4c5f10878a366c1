"""Long-knot and 2-cable diagrams as slice words.

A diagram is a word of elementary slices read bottom to top, on columns
numbered left to right from 1.  Slices:

    ("x",  col, kind, cid)  crossing of the wires at (col, col+1); kind "R"
                            means the strand entering from col+1 passes over,
                            "L" means the strand entering from col passes
                            over; cid is a stable integer crossing id
    ("cup", col)            two new wires born at (col, col+1), joined below
    ("cap", col)            the wires at (col, col+1) die, joined above
    ("dp", col, cid)        a transverse double point (singular diagrams)

Every slice word is a valid planar diagram, so there is no realizability
bookkeeping.  A long knot enters at bottom column 1 and exits at the top;
a 2-cable enters with the red strand at column 1 and its black parallel
longitude at column 2.  The marked point at infinity is the bottom end of
the first strand, and the glued-circle traversal used for all global
classifications runs through the open strands in bottom-column order.

Crossing signs follow the convention that two upward strands crossing
with the right strand on top form a positive crossing.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field


class InvalidDiagram(Exception):
    pass


class GaussCodeError(Exception):
    pass


UP = (0, 1)
DOWN = (0, -1)


def _tangent(side, direction):
    # side "left": wire runs (col, below) -> (col+1, above); "right" the mirror
    if side == "left":
        return (1, 1) if direction == "up" else (-1, -1)
    return (-1, 1) if direction == "up" else (1, -1)


def crossing_sign(kind, left_dir, right_dir):
    """Sign of a crossing from its geometry and strand directions."""
    tl = _tangent("left", left_dir)
    tr = _tangent("right", right_dir)
    over, under = (tl, tr) if kind == "L" else (tr, tl)
    det = under[0] * over[1] - under[1] * over[0]
    return 1 if det > 0 else -1


@dataclass
class CrossingInfo:
    cid: int
    slice_index: int
    col: int
    kind: str
    left_dir: str = ""
    right_dir: str = ""
    left_comp: str = ""
    right_comp: str = ""
    on_open: bool = True

    @property
    def sign(self):
        return crossing_sign(self.kind, self.left_dir, self.right_dir)

    @property
    def over_side(self):
        return "left" if self.kind == "L" else "right"

    @property
    def over_comp(self):
        return self.left_comp if self.kind == "L" else self.right_comp

    @property
    def under_comp(self):
        return self.right_comp if self.kind == "L" else self.left_comp

    @property
    def component_pair(self):
        """(over component, under component) tag."""
        return (self.over_comp, self.under_comp)


@dataclass
class DoublePointInfo:
    cid: int
    slice_index: int
    col: int
    first_comp: str = ""
    second_comp: str = ""
    first_tangent: tuple = ()
    second_tangent: tuple = ()

    @property
    def orientation(self):
        v1, v2 = self.first_tangent, self.second_tangent
        det = v1[0] * v2[1] - v1[1] * v2[0]
        return 1 if det > 0 else -1


class Traversal:
    """Glued-circle traversal data for a diagram."""

    def __init__(self):
        self.ends = []            # (cid, "O"|"U") in traversal order
        self.pos = {}             # (cid, "O"|"U") -> position index
        self.crossings = {}       # cid -> CrossingInfo
        self.double_points = {}   # cid -> DoublePointInfo
        self.open_walks = []      # list of walk descriptors
        self.closed_count = 0
        self.turns = []           # per open walk: half-turn sum (x2)

    def type01(self, cid):
        """0 iff the over end is met before the under end from infinity."""
        po = self.pos.get((cid, "O"))
        pu = self.pos.get((cid, "U"))
        if po is None or pu is None:
            raise InvalidDiagram("crossing %r not on the open circle" % cid)
        return 0 if po < pu else 1

    def sign(self, cid):
        return self.crossings[cid].sign


class Diagram:
    """Immutable slice-word diagram."""

    def __init__(self, slices, n_bottom=1, labels=("main",), parent_of=None):
        self.slices = tuple(tuple(s) for s in slices)
        self.n_bottom = n_bottom
        self.labels = tuple(labels)
        self.parent_of = dict(parent_of or {})
        self._cache = {}

    # -- basic structure ------------------------------------------------

    def width_profile(self):
        widths = [self.n_bottom]
        w = self.n_bottom
        for s in self.slices:
            tag = s[0]
            if tag == "cup":
                w += 2
            elif tag == "cap":
                w -= 2
            widths.append(w)
        return widths

    @property
    def n_top(self):
        return self.width_profile()[-1]

    def validate(self):
        w = self.n_bottom
        if w < 0 or len(self.labels) != self.n_bottom:
            raise InvalidDiagram("bad boundary")
        for i, s in enumerate(self.slices):
            tag, col = s[0], s[1]
            if tag in ("x", "dp"):
                if not (1 <= col <= w - 1):
                    raise InvalidDiagram("slice %d out of range" % i)
            elif tag == "cup":
                if not (1 <= col <= w + 1):
                    raise InvalidDiagram("cup %d out of range" % i)
                w += 2
            elif tag == "cap":
                if not (1 <= col <= w - 1):
                    raise InvalidDiagram("cap %d out of range" % i)
                w -= 2
            else:
                raise InvalidDiagram("unknown slice %r" % (s,))
        if w != self.n_bottom:
            raise InvalidDiagram("boundary width mismatch")
        t = self.traversal()
        if len(t.open_walks) != self.n_bottom:
            raise InvalidDiagram("open strand count %d != %d"
                                 % (len(t.open_walks), self.n_bottom))
        return self

    def crossing_ids(self):
        return [s[3] for s in self.slices if s[0] == "x"]

    def max_id(self):
        ids = [s[3] for s in self.slices if s[0] == "x"]
        ids += [s[2] for s in self.slices if s[0] == "dp"]
        return max(ids) if ids else 0

    def renumbered(self, start):
        """Copy with crossing ids renumbered start, start+1, ... in word order."""
        out = []
        mapping = {}
        nxt = start
        for s in self.slices:
            if s[0] == "x":
                mapping[s[3]] = nxt
                out.append(("x", s[1], s[2], nxt))
                nxt += 1
            elif s[0] == "dp":
                mapping[s[2]] = nxt
                out.append(("dp", s[1], nxt))
                nxt += 1
            else:
                out.append(s)
        parent = {mapping[k]: v for k, v in self.parent_of.items() if k in mapping}
        return Diagram(out, self.n_bottom, self.labels, parent)

    # -- traversal ------------------------------------------------------

    def _step_up(self, level, col):
        """Cross slice[level] moving up; returns (level, col, dir)."""
        s = self.slices[level]
        tag, cc = s[0], s[1]
        if tag in ("x", "dp"):
            if col == cc:
                return level + 1, cc + 1, "up"
            if col == cc + 1:
                return level + 1, cc, "up"
            return level + 1, col, "up"
        if tag == "cup":
            return level + 1, col + 2 if col >= cc else col, "up"
        # cap
        if col == cc:
            return level, cc + 1, "down"
        if col == cc + 1:
            return level, cc, "down"
        return level + 1, col - 2 if col > cc + 1 else col, "up"

    def _step_down(self, level, col):
        s = self.slices[level - 1]
        tag, cc = s[0], s[1]
        if tag in ("x", "dp"):
            if col == cc:
                return level - 1, cc + 1, "down"
            if col == cc + 1:
                return level - 1, cc, "down"
            return level - 1, col, "down"
        if tag == "cap":
            return level - 1, col + 2 if col >= cc else col, "down"
        # cup
        if col == cc:
            return level, cc + 1, "up"
        if col == cc + 1:
            return level, cc, "up"
        return level - 1, col - 2 if col > cc + 1 else col, "down"

    def _walk(self, start, visited, trav, comp, record_pos):
        """Walk one strand from (level, col, dir); returns end descriptor."""
        level, col, direction = start
        nslices = len(self.slices)
        turns = 0
        while True:
            visited.add((level, col))
            if direction == "up":
                if level == nslices:
                    return ("top", col, turns)
                s = self.slices[level]
                tag, cc = s[0], s[1]
                if tag in ("x", "dp"):
                    if col in (cc, cc + 1):
                        side = "left" if col == cc else "right"
                        self._record(trav, s, level, side, "up", comp, record_pos)
                elif tag == "cap" and col in (cc, cc + 1):
                    turns += -1 if col == cc else 1
                level, col, direction = self._step_up(level, col)
            else:
                if level == 0:
                    return ("bottom", col, turns)
                s = self.slices[level - 1]
                tag, cc = s[0], s[1]
                if tag in ("x", "dp"):
                    if col in (cc, cc + 1):
                        # above col cc continues the right strand, col cc+1 the left
                        side = "right" if col == cc else "left"
                        self._record(trav, s, level - 1, side, "down", comp, record_pos)
                elif tag == "cup" and col in (cc, cc + 1):
                    turns += 1 if col == cc else -1
                level, col, direction = self._step_down(level, col)
            if (level, col, direction) == start:
                return ("closed", None, turns)

    def _record(self, trav, s, level, side, direction, comp, record_pos):
        tag = s[0]
        if tag == "x":
            cid = s[3]
            info = trav.crossings.setdefault(
                cid, CrossingInfo(cid, level, s[1], s[2]))
            if side == "left":
                info.left_dir, info.left_comp = direction, comp
            else:
                info.right_dir, info.right_comp = direction, comp
            if record_pos:
                over = (info.over_side == side)
                end = (cid, "O" if over else "U")
                trav.pos[end] = len(trav.ends)
                trav.ends.append(end)
            else:
                info.on_open = False
        else:
            cid = s[2]
            info = trav.double_points.setdefault(
                cid, DoublePointInfo(cid, level, s[1]))
            tg = _tangent(side, direction)
            if not info.first_comp:
                info.first_comp, info.first_tangent = comp, tg
            else:
                info.second_comp, info.second_tangent = comp, tg

    def traversal(self):
        if "trav" in self._cache:
            return self._cache["trav"]
        trav = Traversal()
        visited = set()
        for i in range(self.n_bottom):
            comp = self.labels[i]
            end = self._walk((0, i + 1, "up"), visited, trav, comp, True)
            if end[0] != "top":
                raise InvalidDiagram("open strand %d does not exit the top" % i)
            trav.open_walks.append({"label": comp, "start_col": i + 1,
                                    "end_col": end[1]})
            trav.turns.append(end[2])
        # closed components: anything not yet visited
        widths = self.width_profile()
        for level in range(len(widths)):
            for col in range(1, widths[level] + 1):
                if (level, col) not in visited:
                    end = self._walk((level, col, "up"), visited, trav,
                                     "closed", False)
                    trav.closed_count += 1
        self._cache["trav"] = trav
        return trav

    # -- invariants -----------------------------------------------------

    def gauss_word(self):
        """Sequence of (cid, 'O'|'U', sign, component) along the traversal."""
        t = self.traversal()
        out = []
        for cid, ou in t.ends:
            info = t.crossings[cid]
            comp = info.over_comp if ou == "O" else info.under_comp
            out.append((cid, ou, info.sign, comp))
        return out

    def global_01_type(self, cid):
        return self.traversal().type01(cid)

    def writhe_invariants(self):
        """(w, w1, whitney) of the diagram."""
        t = self.traversal()
        w = sum(c.sign for c in t.crossings.values())
        w1 = sum(c.sign for c in t.crossings.values()
                 if c.on_open and t.type01(c.cid) == 1)
        whitney = 1 + (t.turns[0] // 2 if t.turns else 0)
        return w, w1, whitney

    def crossing_count(self):
        return sum(1 for s in self.slices if s[0] == "x")

    def double_point_count(self):
        return sum(1 for s in self.slices if s[0] == "dp")

    def closed_component_count(self):
        return self.traversal().closed_count

    # -- constructions --------------------------------------------------

    def concat(self, other):
        """Glue other on top of self (self holds the infinity end)."""
        if self.n_bottom != other.n_bottom or self.labels != other.labels:
            raise InvalidDiagram("concat boundary mismatch")
        if self.n_top != other.n_bottom:
            raise InvalidDiagram("concat width mismatch")
        other2 = other.renumbered(self.max_id() + 1)
        parent = dict(self.parent_of)
        parent.update(other2.parent_of)
        return Diagram(self.slices + other2.slices, self.n_bottom,
                       self.labels, parent)

    def cable2(self):
        """Blackboard-framed double: red knot plus black parallel longitude."""
        if self.n_bottom != 1:
            raise InvalidDiagram("cable2 expects a long knot")
        out = []
        parent = {}
        nxt = 1
        for s in self.slices:
            tag, c = s[0], s[1]
            if tag == "x":
                for col in (2 * c, 2 * c + 1, 2 * c - 1, 2 * c):
                    out.append(("x", col, s[2], nxt))
                    parent[nxt] = s[3]
                    nxt += 1
            elif tag == "cup":
                out.append(("cup", 2 * c - 1))
                out.append(("cup", 2 * c))
            elif tag == "cap":
                out.append(("cap", 2 * c))
                out.append(("cap", 2 * c - 1))
            else:
                raise InvalidDiagram("cannot cable a singular diagram")
        return Diagram(out, 2, ("red", "black"), parent)

    # -- identity -------------------------------------------------------

    def state_key(self):
        return (self.slices, self.n_bottom, self.labels)

    def state_ref(self):
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha1(blob).hexdigest()[:16]

    def __eq__(self, other):
        return isinstance(other, Diagram) and self.state_key() == other.state_key()

    def __hash__(self):
        return hash(self.state_key())

    def __repr__(self):
        return "Diagram(%d slices, %d strands)" % (len(self.slices), self.n_bottom)

    # -- serialization --------------------------------------------------

    def to_json(self):
        return {"n_bottom": self.n_bottom, "labels": list(self.labels),
                "slices": [list(s) for s in self.slices]}

    @classmethod
    def from_json(cls, data):
        return cls([tuple(s) for s in data["slices"]], data["n_bottom"],
                   tuple(data["labels"]))


# -- small standard diagrams ---------------------------------------------

def unknot():
    """The 0-crossing long unknot."""
    return Diagram([])


def kink(sign):
    """One-crossing curl; w = sign, and the crossing is a 1-crossing."""
    kind = "R" if sign > 0 else "L"
    return Diagram([("cup", 2), ("x", 1, kind, 1), ("cap", 2)])


def kink0(sign):
    """One-crossing curl whose crossing is a 0-crossing; w = sign."""
    kind = "R" if sign > 0 else "L"
    return Diagram([("cup", 1), ("x", 2, kind, 1), ("cap", 1)])


def trefoil():
    """Long positive trefoil with Gauss word O1+ U2+ O3+ U1+ O2+ U3+."""
    return Diagram([("cup", 1), ("x", 2, "R", 1), ("x", 2, "R", 2),
                    ("x", 2, "R", 3), ("cap", 1)])


def trefoil_rev():
    """Long positive trefoil seen from the other end (w1 = 2)."""
    return Diagram([("cup", 2), ("x", 1, "R", 1), ("x", 1, "R", 2),
                    ("x", 1, "R", 3), ("cap", 2)])


def twist_knot(n, kind="R"):
    """n half-twists between the strand and a parked loop."""
    slices = [("cup", 1)] + [("x", 2, kind, i + 1) for i in range(n)] + [("cap", 1)]
    return Diagram(slices)


# -- Gauss code text ------------------------------------------------------

def parse_gauss_symbols(text):
    out = []
    for tok in text.replace(",", " ").split():
        ou = tok[0].upper()
        if ou not in ("O", "U") or len(tok) < 3:
            raise GaussCodeError("bad token %r" % tok)
        sign = tok[-1]
        if sign not in "+-":
            raise GaussCodeError("token %r missing sign" % tok)
        name = tok[1:-1]
        out.append((name, ou, 1 if sign == "+" else -1))
    names = [n for n, _, _ in out]
    for n in set(names):
        if names.count(n) != 2:
            raise GaussCodeError("crossing %r not visited twice" % n)
    return out


class _Stub:
    __slots__ = ("strand", "flow")

    def __init__(self, strand, flow):
        self.strand = strand   # _Parked
        self.flow = flow       # "in" (descending) | "out" (ascending)


class _Parked:
    __slots__ = ("queue",)

    def __init__(self):
        self.queue = []        # crossing names pending their second visit


def from_gauss_code(text):
    """Greedy planar reconstruction of an extended Gauss code.

    Builds the curve with a bounce-plat strategy: the head either crosses
    an adjacent open wire or opens a fresh loop next to itself, and closes
    loops only against adjacent ends.  Codes outside this family are
    rejected.  The result is validated by re-deriving its Gauss word.
    """
    syms = parse_gauss_symbols(text)
    word = []
    wires = ["H"]              # list of "H" or _Stub
    known = {}                 # name -> (cid, head_was_over, sign)
    cid_of = {}
    nxt = 1
    consuming = None           # (_Parked, out_stub_index placeholder)

    def hcol():
        return wires.index("H") + 1

    def solve_partner_dir(h_side, h_over, sign):
        # h_side: side of the head at the crossing; returns partner direction
        for pdir in ("up", "down"):
            ld, rd = (pdir, "up") if h_side == "right" else ("up", pdir)
            kind = ("L" if h_side == "left" else "R") if h_over else \
                   ("R" if h_side == "left" else "L")
            if crossing_sign(kind, ld, rd) == sign:
                return pdir, kind
        return None, None

    i = 0
    while i < len(syms):
        name, ou, sign = syms[i]
        if consuming is not None:
            parked = consuming
            if not parked.queue:
                raise GaussCodeError("internal: empty queue")
            want = parked.queue.pop(0)
            cid, head_over, csign = known[want]
            if name != want or sign != csign or (ou == "O") != (not head_over):
                raise GaussCodeError("code not realizable by the greedy builder")
            if not parked.queue:
                consuming = None
                idxs = [j for j, w in enumerate(wires)
                        if isinstance(w, _Stub) and w.strand is parked]
                if len(idxs) != 1:
                    raise GaussCodeError("greedy builder lost a strand end")
                wires[idxs[0]] = "H"
            i += 1
            continue
        if name not in known:
            h = hcol() - 1
            h_over = (ou == "O")
            # bounce against an adjacent stub, ascending wires first
            candidates = []
            for flow_pref in ("out", "in"):
                for j in (h - 1, h + 1):
                    if 0 <= j < len(wires) and isinstance(wires[j], _Stub) \
                            and wires[j].flow == flow_pref:
                        candidates.append(j)
            placed = False
            for j in candidates:
                stub = wires[j]
                pdir = "down" if stub.flow == "in" else "up"
                h_side = "right" if j < h else "left"
                kind = ("L" if h_side == "left" else "R") if h_over else \
                       ("R" if h_side == "left" else "L")
                ld = "up" if h_side == "left" else pdir
                rd = pdir if h_side == "left" else "up"
                if crossing_sign(kind, ld, rd) == sign:
                    word.append(("x", min(h, j) + 1, kind, nxt))
                    wires[h], wires[j] = wires[j], wires[h]
                    if stub.flow == "in":
                        stub.strand.queue.insert(0, name)
                    else:
                        stub.strand.queue.append(name)
                    known[name] = (nxt, h_over, sign)
                    cid_of[name] = nxt
                    nxt += 1
                    placed = True
                    break
            if not placed:
                # fresh loop beside the head; try the left side then the right
                for gadget_side in ("left", "right"):
                    h_side = "right" if gadget_side == "left" else "left"
                    pdir, kind = solve_partner_dir(h_side, h_over, sign)
                    if pdir is None:
                        continue
                    parked = _Parked()
                    parked.queue.append(name)
                    # ascending partner: flow enters down the far wire
                    far = _Stub(parked, "in" if pdir == "up" else "out")
                    near = _Stub(parked, "out" if pdir == "up" else "in")
                    h = hcol()
                    if gadget_side == "left":
                        word.append(("cup", h))
                        wires[h - 1:h - 1] = [far, near]
                        word.append(("x", h + 1, kind, nxt))
                        j = wires.index("H")
                        wires[j - 1], wires[j] = wires[j], wires[j - 1]
                    else:
                        word.append(("cup", h + 1))
                        wires[h:h] = [near, far]
                        word.append(("x", h, kind, nxt))
                        j = wires.index("H")
                        wires[j], wires[j + 1] = wires[j + 1], wires[j]
                    known[name] = (nxt, h_over, sign)
                    cid_of[name] = nxt
                    nxt += 1
                    placed = True
                    break
                if not placed:
                    raise GaussCodeError("no consistent loop orientation")
        else:
            # second visit: cap the head into the matching adjacent in-stub
            h = hcol() - 1
            done = False
            for j in (h - 1, h + 1):
                if 0 <= j < len(wires) and isinstance(wires[j], _Stub):
                    stub = wires[j]
                    if stub.flow == "in" and stub.strand.queue and \
                            stub.strand.queue[0] == name:
                        word.append(("cap", min(h, j) + 1))
                        parked = stub.strand
                        del wires[max(h, j)]
                        del wires[min(h, j)]
                        consuming = parked
                        done = True
                        break
            if not done:
                raise GaussCodeError("code not realizable by the greedy builder")
            continue
        i += 1

    if consuming is not None or any(isinstance(w, _Stub) for w in wires):
        raise GaussCodeError("unclosed loops remain")
    diagram = Diagram(word).validate()
    built = [(cid, ou, sg) for cid, ou, sg, _ in diagram.gauss_word()]
    wanted = [(cid_of[n], ou, sg) for n, ou, sg in syms]
    if built != wanted:
        raise GaussCodeError("greedy reconstruction does not reproduce the code")
    return diagram


def to_gauss_code(diagram):
    return " ".join("%s%s%s" % (ou, cid, "+" if sg > 0 else "-")
                    for cid, ou, sg, _ in diagram.gauss_word())


# -- PD code JSON ----------------------------------------------------------

def from_pd_json(data):
    """Accept the PD-code JSON format by tracing it to a Gauss code first.

    The rotation data is used to trace components; the planar embedding is
    then rebuilt with the same greedy used for Gauss codes.
    """
    crossings = data["crossings"]
    inf_edge = data["infinityEdge"]
    # edges: each crossing lists [e_under_in, e_over_in, e_under_out, e_over_out]
    # we accept the simpler convention: edges in cyclic order starting from
    # the incoming under edge, as in standard PD codes
    succ = {}
    over_at = {}
    sign_of = {}
    for c in crossings:
        a, b, cc, d = c["edges"]
        succ[a] = cc
        succ[b] = d
        over_at[b] = (c["id"], True)
        over_at[a] = (c["id"], False)
        sign_of[c["id"]] = c["sign"]
    seq = []
    e = inf_edge
    for _ in range(2 * len(crossings)):
        if e not in succ:
            raise GaussCodeError("edge %r leaves no crossing" % e)
        cid, over = over_at[e]
        seq.append(("%s" % cid, "O" if over else "U",
                    1 if sign_of[cid] > 0 else -1))
        e = succ[e]
    text = " ".join("%s%s%s" % (ou, n, "+" if s > 0 else "-")
                    for n, ou, s in seq)
    return from_gauss_code(text)
