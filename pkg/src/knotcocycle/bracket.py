"""Kauffman bracket state sum over slice words.

The word is processed bottom to top as a transfer matrix acting on
noncrossing matchings of (bottom boundary points + current frontier),
so the cost is linear in slices and bounded by a Catalan number in the
width, not exponential in the crossing count.  Open strands are closed
by the standard nested closure pairing bottom i with top i around the
side, and the result is normalized by (-A^3)^(-w).

The bracket variable A lives in the same exact Laurent ring as the
cocycle coefficients.
"""

from __future__ import annotations

from .laurent import LaurentPoly


class BudgetExceeded(Exception):
    def __init__(self, crossings, budget):
        super().__init__("state sum over %d crossings exceeds budget %d"
                         % (crossings, budget))
        self.crossings = crossings
        self.budget = budget


_DELTA = LaurentPoly({2: -1, -2: -1})
_A = LaurentPoly({1: 1})
_Ainv = LaurentPoly({-1: 1})


def _pair(state, i, j):
    """Join points i, j of a matching; returns (new_state, loop_closed)."""
    pi, pj = state[i], state[j]
    if pi == j:
        return state, True
    s = list(state)
    s[pi], s[pj] = pj, pi
    s[i] = s[j] = -1
    return tuple(s), False


def _drop(state, kill):
    """Remove the killed indices (already unpaired) and reindex."""
    alive = [i for i in range(len(state)) if i not in kill]
    remap = {old: new for new, old in enumerate(alive)}
    return tuple(remap[state[old]] for old in alive)


def _insert(state, at, count=2):
    """Insert `count` new points at index `at`, paired with each other."""
    def shift(p):
        return p + count if p >= at else p
    s = [shift(p) for p in state]
    s[at:at] = [at + 1, at]
    return tuple(s)


def raw_bracket(diagram, budget=None):
    """Unnormalized bracket; a single unknot evaluates to delta."""
    n = diagram.crossing_count()
    if budget is not None and n > budget:
        raise BudgetExceeded(n, budget)
    nb = diagram.n_bottom
    # points: bottom 0..nb-1 then frontier nb..nb+k-1
    state = tuple([nb + i for i in range(nb)] + list(range(nb)))
    states = {state: LaurentPoly.one()}
    for s in diagram.slices:
        tag, col = s[0], s[1]
        if tag == "dp":
            raise ValueError("bracket of a singular diagram")
        i = nb + col - 1
        if tag == "cup":
            states = {_insert(st, i): c for st, c in states.items()}
        elif tag == "cap":
            nxt = {}
            for st, c in states.items():
                st2, loop = _pair(st, i, i + 1)
                if loop:
                    c = c * _DELTA
                st2 = _drop(st2, (i, i + 1))
                nxt[st2] = nxt.get(st2, LaurentPoly.zero()) + c
            states = {k: v for k, v in nxt.items() if v}
        else:
            kind = s[2]
            # L: over strand runs lower-left to upper-right
            a_is_capcup = (kind == "L")
            nxt = {}
            for st, c in states.items():
                # identity resolution
                w = c * (_Ainv if a_is_capcup else _A)
                nxt[st] = nxt.get(st, LaurentPoly.zero()) + w
                # cap-cup resolution
                st2, loop = _pair(st, i, i + 1)
                w = c * (_A if a_is_capcup else _Ainv)
                if loop:
                    w = w * _DELTA
                st2 = _insert(_drop(st2, (i, i + 1)), i)
                nxt[st2] = nxt.get(st2, LaurentPoly.zero()) + w
            states = {k: v for k, v in nxt.items() if v}
    # close top i with bottom i, innermost first; after each drop the
    # surviving i+1 bottoms sit at 0..i and the frontier at i+1..2i+1
    nt = diagram.n_top
    total = LaurentPoly.zero()
    for st, c in states.items():
        for i in range(nt - 1, -1, -1):
            st, loop = _pair(st, i, 2 * i + 1)
            if loop:
                c = c * _DELTA
            st = _drop(st, (i, 2 * i + 1))
        total = total + c
    return total


def normalized_bracket(diagram, budget=None):
    """(-A^3)^(-w) times the raw bracket; an RII/RIII/RI invariant."""
    t = diagram.traversal()
    w = sum(ci.sign for ci in t.crossings.values())
    raw = raw_bracket(diagram, budget)
    return raw.mul_monomial(-3 * w, (-1) ** (abs(w) % 2))
