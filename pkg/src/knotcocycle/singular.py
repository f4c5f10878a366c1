"""Singular tangles (one double point), os/cc morphisms, class keys.

A class key is a deterministic fingerprint of the vertex-rigid regular
isotopy class of a singular tangle.  Every field is invariant under RII
and RIII moves away from the double point and under strands sliding
entirely over or under it, so regularly isotopic tangles always merge;
distinct keys certify distinct classes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bracket import BudgetExceeded, normalized_bracket
from .diagram import Diagram, InvalidDiagram, crossing_sign

DEFAULT_BUDGET = 24


class IneligibleCrossing(Exception):
    pass


@dataclass(frozen=True)
class ClassKey:
    dp_sign: int
    component_pair: tuple
    w: int
    w1: int
    strand_count: int
    closed_components: int
    vertex_orient: int
    bracket_os: tuple
    bracket_cc: tuple

    def to_json(self):
        return {"dpSign": self.dp_sign, "componentPair": list(self.component_pair),
                "w": self.w, "w1": self.w1, "strands": self.strand_count,
                "closed": self.closed_components, "vertexOrient": self.vertex_orient,
                "bracketOs": [list(p) for p in self.bracket_os],
                "bracketCc": [list(p) for p in self.bracket_cc]}

    def sort_token(self):
        return (self.dp_sign, self.component_pair, self.w, self.w1,
                self.strand_count, self.closed_components, self.vertex_orient,
                self.bracket_os, self.bracket_cc)


class SingularTangle:
    """A diagram with exactly one transverse double point."""

    def __init__(self, diagram, dp_sign, component_pair):
        self.diagram = diagram
        self.dp_sign = dp_sign
        self.component_pair = component_pair
        dps = [s for s in diagram.slices if s[0] == "dp"]
        if len(dps) != 1:
            raise InvalidDiagram("expected exactly one double point")
        self.dp_col = dps[0][1]
        self.dp_cid = dps[0][2]

    def _dp_info(self):
        return self.diagram.traversal().double_points[self.dp_cid]

    def _dp_dirs(self):
        """(left_dir, right_dir) of the double point slice."""
        info = self._dp_info()
        # first branch tangent identifies its side by x-sign vs direction
        dirs = {}
        for tan in (info.first_tangent, info.second_tangent):
            side = "left" if tan[0] == tan[1] else "right"
            dirs[side] = "up" if tan[1] > 0 else "down"
        return dirs["left"], dirs["right"]


def singularize(diagram, cid, variant=None):
    """Replace an eligible 0-crossing by a double point."""
    trav = diagram.traversal()
    if cid not in trav.crossings:
        raise IneligibleCrossing("no crossing %r" % cid)
    info = trav.crossings[cid]
    pair = info.component_pair
    allowed = {("main", "main"), ("red", "red"), ("red", "black")}
    if variant is not None:
        allowed = {{"n1": ("main", "main"), "red": ("red", "red"),
                    "blackred": ("red", "black")}[variant]}
    if pair not in allowed:
        raise IneligibleCrossing("component pair %r not singularizable" % (pair,))
    if trav.type01(cid) != 0:
        raise IneligibleCrossing("crossing %r is a 1-crossing" % cid)
    sl = tuple(("dp", s[1], s[3]) if s[0] == "x" and s[3] == cid else s
               for s in diagram.slices)
    sing = Diagram(sl, diagram.n_bottom, diagram.labels)
    return SingularTangle(sing, info.sign, pair)


def os(tangle):
    """Orientation-preserving smoothing of the double point."""
    d = tangle.diagram
    ld, rd = tangle._dp_dirs()
    sl = []
    for s in d.slices:
        if s[0] == "dp" and s[2] == tangle.dp_cid:
            if ld == rd:
                continue                      # parallel: plain identity
            sl.append(("cap", s[1]))
            sl.append(("cup", s[1]))
        else:
            sl.append(s)
    return Diagram(sl, d.n_bottom, d.labels)


def cc(tangle):
    """Replace the double point by the crossing of the opposite sign."""
    d = tangle.diagram
    ld, rd = tangle._dp_dirs()
    want = -tangle.dp_sign
    kind = None
    for k in ("L", "R"):
        if crossing_sign(k, ld, rd) == want:
            kind = k
            break
    sl = []
    for s in d.slices:
        if s[0] == "dp" and s[2] == tangle.dp_cid:
            sl.append(("x", s[1], kind, s[2]))
        else:
            sl.append(s)
    return Diagram(sl, d.n_bottom, d.labels)


def fingerprint(tangle, budget=DEFAULT_BUDGET):
    """ClassKey of the tangle; raises BudgetExceeded beyond the budget."""
    d = tangle.diagram
    trav = d.traversal()
    w = sum(c.sign for c in trav.crossings.values())
    w1 = sum(c.sign for c in trav.crossings.values()
             if c.on_open and trav.type01(c.cid) == 1)
    info = tangle._dp_info()
    v1, v2 = info.first_tangent, info.second_tangent
    det = v1[0] * v2[1] - v1[1] * v2[0]
    os_d = os(tangle)
    cc_d = cc(tangle)
    b_os = normalized_bracket(os_d, budget)
    b_cc = normalized_bracket(cc_d, budget)
    return ClassKey(
        dp_sign=tangle.dp_sign,
        component_pair=tangle.component_pair,
        w=w, w1=w1,
        strand_count=d.n_bottom,
        closed_components=os_d.closed_component_count(),
        vertex_orient=1 if det > 0 else -1,
        bracket_os=tuple(sorted(b_os.terms.items())),
        bracket_cc=tuple(sorted(b_cc.terms.items())),
    )


# -- singular braid words ---------------------------------------------------

class SBraidWord:
    """Word over braid letters s<i>(-) and one double point t<i>(+/-)."""

    def __init__(self, strands, letters):
        self.strands = strands
        self.letters = tuple(letters)   # ("s", i, +-1) | ("t", i, +-1)

    @classmethod
    def parse(cls, strands, text):
        letters = []
        for tok in text.split():
            kind = tok[0]
            if kind not in ("s", "t"):
                raise ValueError("bad letter %r" % tok)
            if kind == "t":
                sign = 1 if tok.endswith("+") else -1
                idx = int(tok[1:-1])
            else:
                sign = -1 if tok.endswith("-") else 1
                idx = int(tok.rstrip("-")[1:])
            letters.append((kind, idx, sign))
        return cls(strands, letters)

    def __str__(self):
        out = []
        for kind, i, sg in self.letters:
            if kind == "t":
                out.append("t%d%s" % (i, "+" if sg > 0 else "-"))
            else:
                out.append("s%d%s" % (i, "" if sg > 0 else "-"))
        return " ".join(out)

    def to_diagram(self):
        sl = []
        nxt = 1
        for kind, i, sg in self.letters:
            if kind == "t":
                sl.append(("dp", i, nxt))
            else:
                sl.append(("x", i, "R" if sg > 0 else "L", nxt))
            nxt += 1
        labels = tuple("w%d" % i for i in range(1, self.strands + 1))
        return Diagram(sl, self.strands, labels)


def _heights_consistent(trip):
    """Transitive over/under relations for a 3-letter braid window."""
    # letters on indices (i, j, i); track positions of 3 strands
    (k1, i1, g1), (k2, i2, g2), (k3, i3, g3) = trip
    base = min(i1, i2)
    perm = [0, 1, 2]
    over_pairs = {}
    for kind, idx, sg in trip:
        off = idx - base
        sa, sb = perm[off], perm[off + 1]
        if kind == "s":
            over_pairs[frozenset((sa, sb))] = sb if sg > 0 else sa
        else:
            over_pairs[frozenset((sa, sb))] = None
        perm[off], perm[off + 1] = perm[off + 1], perm[off]
    wins = {0: 0, 1: 0, 2: 0}
    known = [v for v in over_pairs.values() if v is not None]
    for v in known:
        wins[v] += 1
    if len(known) == 3:
        return sorted(wins.values()) == [0, 1, 2]
    # with a double point the third strand must be clear of it
    third = [s for s in (0, 1, 2)
             if all(s not in p for p, v in over_pairs.items() if v is None)]
    if not third:
        return False
    t = third[0]
    rels = [v == t for p, v in over_pairs.items() if v is not None and t in p]
    return len(rels) == 2 and rels[0] == rels[1]


def _neighbors(word):
    n = len(word)
    out = []
    for i in range(n - 1):
        a, b = word[i], word[i + 1]
        # commutation
        if abs(a[1] - b[1]) >= 2 or (a[1] == b[1] and (a[0] == "t" or b[0] == "t")):
            out.append(word[:i] + (b, a) + word[i + 2:])
        # free reduction
        if a[0] == "s" and b[0] == "s" and a[1] == b[1] and a[2] == -b[2]:
            out.append(word[:i] + word[i + 2:])
    for i in range(n - 2):
        trip = word[i:i + 3]
        (k1, i1, g1), (k2, i2, g2), (k3, i3, g3) = trip
        if i1 == i3 and abs(i1 - i2) == 1 and sum(k == "t" for k, _, _ in trip) <= 1:
            if _heights_consistent(trip):
                new = ((k3, i2, g3), (k2, i1, g2), (k1, i2, g1))
                out.append(word[:i] + new + word[i + 3:])
    return out


def sbraid_equivalent(a, b, budget=100000):
    """Bounded search for equality in the singular braid monoid.

    Returns "yes" on a meet, "no" when the closure fingerprints differ,
    else "unknown".  Free sigma pairs may be inserted up to a small
    length margin.
    """
    if a.strands != b.strands:
        return "no"
    ta = sorted((i, s) for k, i, s in a.letters if k == "t")
    tb = sorted((i, s) for k, i, s in b.letters if k == "t")
    if [s for _, s in ta] != [s for _, s in tb]:
        return "no"
    if _closure_key(a) != _closure_key(b):
        return "no"
    if a.letters == b.letters:
        return "yes"
    maxlen = max(len(a.letters), len(b.letters)) + 4
    seen_a, seen_b = {a.letters}, {b.letters}
    frontier_a, frontier_b = [a.letters], [b.letters]
    steps = 0
    while frontier_a and frontier_b and steps < budget:
        nxt = []
        for w in frontier_a:
            for nb in _neighbors(w) + _insertions(w, maxlen, a.strands):
                if nb in seen_b:
                    return "yes"
                if nb not in seen_a:
                    seen_a.add(nb)
                    nxt.append(nb)
                    steps += 1
        frontier_a = nxt
        seen_a, seen_b = seen_b, seen_a
        frontier_a, frontier_b = frontier_b, frontier_a
    return "unknown"


def _insertions(word, maxlen, strands):
    if len(word) + 2 > maxlen:
        return []
    out = []
    for i in range(len(word) + 1):
        for idx in range(1, strands):
            for sg in (1, -1):
                out.append(word[:i] + (("s", idx, sg), ("s", idx, -sg))
                           + word[i:])
    return out


def _closure_key(word):
    d = word.to_diagram()
    dps = [s for s in d.slices if s[0] == "dp"]
    trav = d.traversal()
    w = sum(c.sign for c in trav.crossings.values())
    if not dps:
        from .bracket import raw_bracket
        return ("plain", w, tuple(sorted(raw_bracket(d).terms.items())))
    info = trav.double_points[dps[0][2]]
    tangle = SingularTangle.__new__(SingularTangle)
    tangle.diagram = d
    tangle.dp_sign = 0
    tangle.component_pair = ()
    tangle.dp_col = dps[0][1]
    tangle.dp_cid = dps[0][2]
    from .bracket import raw_bracket
    b_os = raw_bracket(os(tangle))
    b_cc_plus = raw_bracket(_replace_dp(d, dps[0], "R"))
    b_cc_minus = raw_bracket(_replace_dp(d, dps[0], "L"))
    return ("sing", w, tuple(sorted(b_os.terms.items())),
            tuple(sorted(b_cc_plus.terms.items())),
            tuple(sorted(b_cc_minus.terms.items())))


def _replace_dp(d, dp_slice, kind):
    sl = [("x", s[1], kind, s[2]) if s is dp_slice else s for s in d.slices]
    return Diagram(sl, d.n_bottom, d.labels)
