"""Reidemeister-II/III move events: application, classification, weights.

A move event addresses contiguous slices of a diagram word.  An RIII
site is three consecutive crossing slices [x(a), x(a+-1), x(a)]; the
rewrite exchanges the first and third crossings (ids travel with their
strand pairs, kinds are preserved).  RII creation inserts a parallel
pair [x(c,k), x(c,~k)], deletion removes one.

Classification fills the analytical fields used by the cocycle:

* roles d / ml / hm from the over/under relations of the three strands,
* the local type 1..8 from the sign pattern (w(d), w(ml), w(hm)),
* the global type from the traversal order of the three passages,
* the side of the discriminant from the quadrant of the triangle at the
  d crossing (the middle branch sits behind the under-branch direction
  and ahead of the over-branch direction exactly on the negative side),
* linear weights as sums of signs of f-crossings, where the ends of the
  move's own crossings are collapsed passage-wise, so an end sitting at
  the boundary passage of the arc from infinity never counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import Diagram, InvalidDiagram, crossing_sign


class NotAMove(Exception):
    pass


class StaleEvent(Exception):
    pass


class InvalidSite(Exception):
    pass


class RoleNotEligible(Exception):
    pass


LOCAL_TYPE = {
    (1, 1, 1): 1, (1, -1, -1): 2, (-1, -1, 1): 3, (-1, 1, -1): 4,
    (1, -1, 1): 5, (-1, 1, 1): 6, (1, 1, -1): 7, (-1, -1, -1): 8,
}
STAR_TYPES = (2, 6)

GLOBAL_TYPE = {
    ("M", "H", "L"): "r_a", ("H", "L", "M"): "r_b", ("L", "M", "H"): "r_c",
    ("L", "H", "M"): "l_a", ("H", "M", "L"): "l_b", ("M", "L", "H"): "l_c",
}

D_CONTRIBUTES = ("r_a", "r_b", "l_b")    # global types where d is a 0-crossing
ML_CONTRIBUTES = ("r_a", "l_c")          # where ml is singularized


@dataclass
class MoveEvent:
    """One Reidemeister move addressed by slice position.

    RII events carry a pattern: "pair" inserts/deletes two same-column
    crossings; "cap" creates/removes the two crossings of a strand that
    slides over a cap; "cup" the same around a cup.  `side` says whether
    the sliding strand sits to the right or left of the extremum.
    """
    kind: str                  # "RII+" | "RII-" | "RIII"
    index: int                 # slice index of the site
    col: int = 0               # RII pair: column of the pair
    over: str = "L"            # RII: kind of the first created slice
    pattern: str = "pair"      # RII: "pair" | "cap" | "cup"
    side: str = "R"            # RII cap/cup: side of the sliding strand
    pre_ref: str = ""
    tags: dict = field(default_factory=dict)

    def reversed(self):
        k = {"RII+": "RII-", "RII-": "RII+", "RIII": "RIII"}[self.kind]
        return MoveEvent(k, self.index, self.col, self.over, self.pattern,
                         self.side, tags=dict(self.tags))

    def to_json(self):
        return {"kind": self.kind, "index": self.index, "col": self.col,
                "over": self.over, "pattern": self.pattern, "side": self.side,
                "preStateRef": self.pre_ref, "tags": self.tags}


def _expect(cond, msg):
    if not cond:
        raise InvalidSite(msg)


def apply_event(event, diagram, check_ref=True):
    """Apply a move event, returning the new diagram."""
    if check_ref and event.pre_ref and event.pre_ref != diagram.state_ref():
        raise StaleEvent("event pre-state does not match the diagram")
    sl = list(diagram.slices)
    p = event.index
    nid = diagram.max_id() + 1
    k = event.over
    k2 = "L" if k == "R" else "R"
    if event.kind == "RII+":
        if event.pattern == "pair":
            _expect(0 <= p <= len(sl), "insertion point out of range")
            sl[p:p] = [("x", event.col, k, nid), ("x", event.col, k2, nid + 1)]
        elif event.pattern == "cap":
            _expect(p < len(sl) and sl[p][0] == "cap", "no cap at index")
            c = sl[p][1]
            if event.side == "R":
                sl[p:p + 1] = [("x", c + 1, k, nid), ("x", c, k, nid + 1),
                               ("cap", c + 1)]
            else:
                sl[p:p + 1] = [("x", c - 1, k, nid), ("x", c, k, nid + 1),
                               ("cap", c - 1)]
        else:  # cup
            _expect(p < len(sl) and sl[p][0] == "cup", "no cup at index")
            c = sl[p][1]
            if event.side == "R":
                sl[p:p + 1] = [("cup", c - 1), ("x", c, k, nid),
                               ("x", c - 1, k, nid + 1)]
            else:
                sl[p:p + 1] = [("cup", c + 1), ("x", c, k, nid),
                               ("x", c + 1, k, nid + 1)]
    elif event.kind == "RII-":
        if event.pattern == "pair":
            pair = sl[p:p + 2]
            _expect(len(pair) == 2 and all(s[0] == "x" for s in pair)
                    and pair[0][1] == pair[1][1] and pair[0][2] != pair[1][2],
                    "no RII pair at index %d" % p)
            del sl[p:p + 2]
        elif event.pattern == "cap":
            w = sl[p:p + 3]
            _expect(len(w) == 3 and w[0][0] == "x" and w[1][0] == "x"
                    and w[2][0] == "cap", "no cap slide at index %d" % p)
            c2 = w[2][1]
            if event.side == "R":
                _expect(w[0][1] == c2 and w[1][1] == c2 - 1, "bad cap slide")
                sl[p:p + 3] = [("cap", c2 - 1)]
            else:
                _expect(w[0][1] == c2 and w[1][1] == c2 + 1, "bad cap slide")
                sl[p:p + 3] = [("cap", c2 + 1)]
        else:  # cup
            w = sl[p:p + 3]
            _expect(len(w) == 3 and w[0][0] == "cup" and w[1][0] == "x"
                    and w[2][0] == "x", "no cup slide at index %d" % p)
            c = w[0][1]
            if event.side == "R":
                _expect(w[1][1] == c + 1 and w[2][1] == c, "bad cup slide")
                sl[p:p + 3] = [("cup", c + 1)]
            else:
                _expect(w[1][1] == c - 1 and w[2][1] == c, "bad cup slide")
                sl[p:p + 3] = [("cup", c - 1)]
    elif event.kind == "RIII":
        tri = sl[p:p + 3]
        _expect(len(tri) == 3 and all(s[0] == "x" for s in tri),
                "no RIII triple at index %d" % p)
        (_, a, k1, i1), (_, b, km, i2), (_, a2, k3, i3) = tri
        _expect(a == a2 and abs(a - b) == 1,
                "slices at %d do not form a triangle" % p)
        sl[p:p + 3] = [("x", b, k3, i3), ("x", a, km, i2), ("x", b, k1, i1)]
    else:
        raise NotAMove(event.kind)
    return Diagram(sl, diagram.n_bottom, diagram.labels, diagram.parent_of)


def rii_pair_location(event, diagram):
    """(state with the pair, slice indices of the two pair crossings)."""
    creating = event.kind == "RII+"
    state = apply_event(event, diagram, check_ref=False) if creating else diagram
    p = event.index
    if event.pattern == "pair":
        return state, (p, p + 1)
    if event.pattern == "cap":
        return state, (p, p + 1)
    return state, (p + 1, p + 2)


# -- site analysis ---------------------------------------------------------

def _site_strands(slices, p):
    """Strand tracking through an RIII window.

    Returns (base_col, per-slice (left_strand, right_strand, over_strand),
    perm_before list); strands are named 0,1,2 by entry offset.
    """
    tri = slices[p:p + 3]
    cols = [s[1] for s in tri]
    base = min(cols)
    perm = [0, 1, 2]
    out = []
    perms = []
    for s in tri:
        off = s[1] - base
        if off not in (0, 1):
            raise InvalidSite("triangle columns not contiguous")
        perms.append(list(perm))
        sa, sb = perm[off], perm[off + 1]
        over = sb if s[2] == "R" else sa
        out.append((sa, sb, over))
        perm[off], perm[off + 1] = perm[off + 1], perm[off]
    return base, out, perms


@dataclass
class ClassifiedRIII:
    kind: str = "RIII"
    sign: int = 0
    local_type: int = 0
    global_type: str = ""
    d: int = 0
    ml: int = 0
    hm: int = 0
    w_d: int = 0
    w_ml: int = 0
    w_hm: int = 0
    W1_d: int | None = None
    W1_ml: int | None = None
    f_d: frozenset = frozenset()
    f_ml: frozenset = frozenset()
    d_pair_comp: tuple = ()
    ml_pair_comp: tuple = ()

    @property
    def roles(self):
        return {"d": self.d, "ml": self.ml, "hm": self.hm}


@dataclass
class ClassifiedRII:
    kind: str = "RII"
    sign: int = 0
    pos_cid: int = 0
    neg_cid: int = 0
    d_type: int = 0
    W1_d: int | None = None
    f_d: frozenset = frozenset()
    d_pair_comp: tuple = ()
    state: object = None


def _f_set(trav, threshold, exclude):
    """1-crossings whose under end lies strictly before threshold."""
    out = set()
    for cid, info in trav.crossings.items():
        if cid in exclude or not info.on_open:
            continue
        if trav.type01(cid) == 1 and trav.pos[(cid, "U")] < threshold:
            out.add(cid)
    return frozenset(out)


def classify(event, diagram):
    """Classify an RII/RIII event against its pre-state diagram."""
    if event.kind == "RIII":
        return _classify_riii(event, diagram)
    return _classify_rii(event, diagram)


def _classify_riii(event, diagram):
    p = event.index
    tri = diagram.slices[p:p + 3]
    if len(tri) != 3 or any(s[0] != "x" for s in tri):
        raise InvalidSite("no RIII triple at index %d" % p)
    base, per_slice, perms = _site_strands(diagram.slices, p)
    trav = diagram.traversal()
    cids = [s[3] for s in tri]
    infos = [trav.crossings[c] for c in cids]

    over_of = {}
    for (sa, sb, over), cid in zip(per_slice, cids):
        over_of[frozenset((sa, sb))] = over
    counts = {s: 0 for s in (0, 1, 2)}
    for pair, over in over_of.items():
        counts[over] += 1
    high = max(counts, key=lambda s: counts[s])
    low = min(counts, key=lambda s: counts[s])
    if counts[high] != 2 or counts[low] != 0:
        raise InvalidSite("strand heights are not totally ordered")
    mid = 3 - high - low

    def slice_of(pair):
        for i, (sa, sb, _o) in enumerate(per_slice):
            if frozenset((sa, sb)) == pair:
                return i
    i_d = slice_of(frozenset((low, high)))
    i_ml = slice_of(frozenset((low, mid)))
    i_hm = slice_of(frozenset((mid, high)))
    ev = ClassifiedRIII()
    ev.d, ev.ml, ev.hm = cids[i_d], cids[i_ml], cids[i_hm]
    ev.w_d = infos[i_d].sign
    ev.w_ml = infos[i_ml].sign
    ev.w_hm = infos[i_hm].sign
    ev.local_type = LOCAL_TYPE[(ev.w_d, ev.w_ml, ev.w_hm)]
    ev.d_pair_comp = infos[i_d].component_pair
    ev.ml_pair_comp = infos[i_ml].component_pair

    # passage position of each strand: first site end on it
    ppos = {}
    for s in (0, 1, 2):
        ends = []
        for i, (sa, sb, over) in enumerate(per_slice):
            if s in (sa, sb):
                ends.append(trav.pos[(cids[i], "O" if over == s else "U")])
        ppos[s] = min(ends)
    order = sorted((0, 1, 2), key=lambda s: ppos[s])
    names = {low: "L", mid: "M", high: "H"}
    ev.global_type = GLOBAL_TYPE[tuple(names[s] for s in order)]

    # Side of the discriminant: the triangle corner at the d crossing,
    # measured as (direction toward ml along the under-branch, direction
    # toward hm along the over-branch).  On the negative side this corner
    # is (-w(d)w(ml), +w(d)w(hm)); the move flips it to the opposite.
    d_info = infos[i_d]
    under_side = "left" if d_info.kind == "R" else "right"
    under_dir = d_info.left_dir if under_side == "left" else d_info.right_dir
    over_dir = d_info.right_dir if under_side == "left" else d_info.left_dir
    eps_u = 1 if ((i_ml > i_d) == (under_dir == "up")) else -1
    eps_o = 1 if ((i_hm > i_d) == (over_dir == "up")) else -1
    neg_corner = (-ev.w_d * ev.w_ml, ev.w_d * ev.w_hm)
    if (eps_u, eps_o) == neg_corner:
        ev.sign = 1        # pre-state on the negative side
    elif (eps_u, eps_o) == (-neg_corner[0], -neg_corner[1]):
        ev.sign = -1
    else:
        raise InvalidSite("crossings do not bound a move triangle")

    # weights, with the move's own ends collapsed per passage
    if ev.global_type in D_CONTRIBUTES:
        thr = min(trav.pos[(ev.d, "O")], trav.pos[(ev.hm, "O")])
        ev.f_d = _f_set(trav, thr, {ev.d})
        ev.W1_d = sum(trav.crossings[c].sign for c in ev.f_d)
    if ev.global_type in ML_CONTRIBUTES:
        thr = min(trav.pos[(ev.ml, "O")], trav.pos[(ev.hm, "U")])
        ev.f_ml = _f_set(trav, thr, {ev.ml})
        ev.W1_ml = sum(trav.crossings[c].sign for c in ev.f_ml)
    return ev


def _classify_rii(event, diagram):
    """RII events are classified on the state where the pair exists."""
    state, (pa, pb) = rii_pair_location(event, diagram)
    sign = 1 if event.kind == "RII+" else -1
    s1, s2 = state.slices[pa], state.slices[pb]
    if s1[0] != "x" or s2[0] != "x":
        raise InvalidSite("no RII pair at index %d" % event.index)
    trav = state.traversal()
    c1, c2 = s1[3], s2[3]
    i1, i2 = trav.crossings[c1], trav.crossings[c2]
    if i1.sign == i2.sign:
        raise InvalidSite("RII pair with equal signs")
    # the two crossings must bound an empty bigon
    if abs(trav.pos[(c1, "O")] - trav.pos[(c2, "O")]) != 1 or \
            abs(trav.pos[(c1, "U")] - trav.pos[(c2, "U")]) != 1:
        raise InvalidSite("crossings at %d do not bound a bigon" % event.index)
    ev = ClassifiedRII(sign=sign)
    ev.pos_cid, ev.neg_cid = (c1, c2) if i1.sign > 0 else (c2, c1)
    ev.d_pair_comp = i1.component_pair
    ev.state = state
    t1, t2 = trav.type01(c1), trav.type01(c2)
    if t1 != t2:
        import logging
        logging.getLogger(__name__).warning(
            "RII pair %s/%s with distinct 0/1 types", c1, c2)
    ev.d_type = t1
    if t1 == 0:
        thr = min(trav.pos[(c1, "O")], trav.pos[(c2, "O")])
        ev.f_d = _f_set(trav, thr, {c1, c2})
        ev.W1_d = sum(trav.crossings[c].sign for c in ev.f_d)
    return ev


def f_crossings(diagram, event, role):
    """The f-crossing set for role 'd' or 'ml' of a classified move."""
    ev = classify(event, diagram)
    if role == "d":
        if getattr(ev, "W1_d", None) is None:
            raise RoleNotEligible("d is a 1-crossing here")
        return ev.f_d
    if role == "ml":
        if not isinstance(ev, ClassifiedRIII) or ev.W1_ml is None:
            raise RoleNotEligible("ml does not contribute here")
        return ev.f_ml
    raise ValueError(role)


def weights(event, diagram):
    """WeightReport fields (W1_d, W1_ml, f-sets) of the event."""
    ev = classify(event, diagram)
    return {"W1_d": getattr(ev, "W1_d", None),
            "W1_ml": getattr(ev, "W1_ml", None),
            "f_d": set(getattr(ev, "f_d", frozenset())),
            "f_ml": set(getattr(ev, "f_ml", frozenset()))}


# -- singularization -------------------------------------------------------

@dataclass
class SingTerm:
    slices: tuple
    n_bottom: int
    labels: tuple
    dp_cid: int
    dp_sign: int
    role: str              # "d" | "ml" | "rii+" | "rii-"
    sided_sign: int        # +1 / -1 for the two sides; +1 for ml
    component_pair: tuple

    def diagram(self):
        return Diagram(self.slices, self.n_bottom, self.labels)


def _singularize_slices(diagram, cid):
    sl = []
    for s in diagram.slices:
        if s[0] == "x" and s[3] == cid:
            sl.append(("dp", s[1], cid))
        else:
            sl.append(s)
    return tuple(sl)


def _variant_ok(variant, comp_pair):
    if variant == "n1":
        return comp_pair == ("main", "main")
    if variant == "red":
        return comp_pair == ("red", "red")
    if variant == "blackred":
        return comp_pair == ("red", "black")
    raise ValueError("unknown variant %r" % variant)


def singularization_terms(event, diagram, variant):
    """Signed singular terms of one move (ambient diagrams with one dp).

    RIII d-terms come in a (positive side, negative side) pair with
    sided signs +1/-1; the ml term is single; RII terms are the pair's
    positive and negative crossings singularized in the state where the
    pair exists.
    """
    ev = classify(event, diagram)
    out = []
    if event.kind == "RIII":
        post = apply_event(event, diagram, check_ref=False)
        pos_state, neg_state = (post, diagram) if ev.sign > 0 else (diagram, post)
        if ev.global_type in D_CONTRIBUTES and _variant_ok(variant, ev.d_pair_comp):
            for state, side in ((pos_state, 1), (neg_state, -1)):
                out.append(SingTerm(_singularize_slices(state, ev.d),
                                    state.n_bottom, state.labels, ev.d,
                                    ev.w_d, "d", side, ev.d_pair_comp))
        if ev.global_type in ML_CONTRIBUTES and _variant_ok(variant, ev.ml_pair_comp):
            out.append(SingTerm(_singularize_slices(diagram, ev.ml),
                                diagram.n_bottom, diagram.labels, ev.ml,
                                ev.w_ml, "ml", 1, ev.ml_pair_comp))
    else:
        if ev.d_type == 0 and _variant_ok(variant, ev.d_pair_comp):
            state = ev.state
            out.append(SingTerm(_singularize_slices(state, ev.pos_cid),
                                state.n_bottom, state.labels, ev.pos_cid,
                                1, "rii+", 1, ev.d_pair_comp))
            out.append(SingTerm(_singularize_slices(state, ev.neg_cid),
                                state.n_bottom, state.labels, ev.neg_cid,
                                -1, "rii-", -1, ev.d_pair_comp))
    return out


# -- local braid words ------------------------------------------------------

def local_word(diagram, lo, hi, dp_sign=None):
    """Render slices lo..hi as a braid word when all strands run upward.

    Crossings print as s<i> / s<i>- and a double point as t<i>+ / t<i>-;
    returns None if a strand in the window is not upward oriented.
    """
    trav = diagram.traversal()
    window = diagram.slices[lo:hi]
    if not window:
        return ""
    cols = []
    for s in window:
        if s[0] not in ("x", "dp"):
            return None
        cols.append(s[1])
    base = min(cols)
    out = []
    for s in window:
        idx = s[1] - base + 1
        if s[0] == "x":
            info = trav.crossings[s[3]]
            if info.left_dir != "up" or info.right_dir != "up":
                return None
            out.append("s%d" % idx if info.sign > 0 else "s%d-" % idx)
        else:
            info = trav.double_points[s[2]]
            if info.first_tangent[1] <= 0 or info.second_tangent[1] <= 0:
                return None
            sign = "+" if (dp_sign is None or dp_sign >= 0) else "-"
            out.append("t%d%s" % (idx, sign))
    return " ".join(out)


def local_d_words(event, diagram):
    """(positive side, negative side) d-singularized local words of an RIII."""
    ev = classify(event, diagram)
    if ev.global_type not in D_CONTRIBUTES:
        return None
    post = apply_event(event, diagram, check_ref=False)
    pos_state, neg_state = (post, diagram) if ev.sign > 0 else (diagram, post)
    words = []
    for state in (pos_state, neg_state):
        idxs = [i for i, s in enumerate(state.slices)
                if s[0] == "x" and s[3] in (ev.d, ev.ml, ev.hm)]
        sing = Diagram(_singularize_slices_window(state, ev.d),
                       state.n_bottom, state.labels)
        words.append(local_word(sing, min(idxs), max(idxs) + 1,
                                dp_sign=ev.w_d))
    return tuple(words)


def local_ml_word(event, diagram):
    """ml-singularized local word of an RIII, on the pre-move state."""
    ev = classify(event, diagram)
    if ev.global_type not in ML_CONTRIBUTES:
        return None
    idxs = [i for i, s in enumerate(diagram.slices)
            if s[0] == "x" and s[3] in (ev.d, ev.ml, ev.hm)]
    sing = Diagram(_singularize_slices_window(diagram, ev.ml),
                   diagram.n_bottom, diagram.labels)
    return local_word(sing, min(idxs), max(idxs) + 1, dp_sign=ev.w_ml)


def local_rii_words(event, diagram):
    """(t+ word, t- word) for an RII pair, on the state with the pair."""
    ev = classify(event, diagram)
    state, (pa, pb) = rii_pair_location(event, diagram)
    words = []
    for cid, sgn in ((ev.pos_cid, 1), (ev.neg_cid, -1)):
        sing = Diagram(_singularize_slices_window(state, cid),
                       state.n_bottom, state.labels)
        words.append(local_word(sing, pa, pb + 1, dp_sign=sgn))
    return tuple(words)


def _singularize_slices_window(state, cid):
    return tuple(("dp", s[1], s[3]) if s[0] == "x" and s[3] == cid else s
                 for s in state.slices)
