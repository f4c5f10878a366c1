"""Closing a braid block into a long knot with a prescribed visit order.

Several verification constructions need a small n-strand block embedded
in a long knot so that the traversal from infinity meets the strands in
a chosen order.  The closure routes helper wires down the right side of
the block; every routing crossing passes under the wires it crosses, so
the block's own crossings keep their intended heights.
"""

from __future__ import annotations

from .diagram import Diagram, InvalidDiagram


class _Router:
    def __init__(self):
        self.wires = []
        self.slices = []
        self.next_id = 10**6   # routing ids sit far above block ids

    def col(self, label):
        return self.wires.index(label) + 1

    def cup(self, at, left_label, right_label):
        self.slices.append(("cup", at))
        self.wires[at - 1:at - 1] = [left_label, right_label]

    def cap(self, label_a, label_b):
        ca, cb = self.col(label_a), self.col(label_b)
        if abs(ca - cb) != 1:
            raise InvalidDiagram("cap of non-adjacent wires")
        c = min(ca, cb)
        self.slices.append(("cap", c))
        del self.wires[c - 1:c + 1]

    def move_under(self, label, target_col):
        """Slide a wire to target_col, passing under everything en route."""
        while self.col(label) != target_col:
            c = self.col(label)
            step = -1 if target_col < c else 1
            lo = c - 1 if step < 0 else c
            # the moving wire passes under: over is the static wire
            moving_right_of_pair = (step < 0)
            kind = "L" if moving_right_of_pair else "R"
            self.slices.append(("x", lo, kind, self.next_id))
            self.next_id += 1
            self.wires[lo - 1], self.wires[lo] = self.wires[lo], self.wires[lo - 1]


def close_block(block, n, order, labels=("main",)):
    """Embed an n-strand block in a long knot visiting strands in `order`.

    block: slices on columns 1..n (crossings only), read bottom to top.
    order: entry columns in the order the traversal should meet them.
    Returns (diagram, block_start) with block slices at
    diagram.slices[block_start : block_start + len(block)].
    """
    if sorted(order) != list(range(1, n + 1)):
        raise ValueError("order must be a permutation of 1..%d" % n)
    perm = list(range(1, n + 1))
    for s in block:
        if s[0] != "x":
            raise ValueError("block must consist of crossings")
        c = s[1]
        perm[c - 1], perm[c] = perm[c], perm[c - 1]
    exit_col = {}
    for col_top, entry in enumerate(perm, start=1):
        exit_col[entry] = col_top

    r = _Router()
    first = order[0]
    r.wires = ["e%d" % first]
    # create the other entries with their descending helpers
    for j in range(n, 0, -1):
        if j == first:
            continue
        at = len(r.wires) + 1
        r.cup(at, "e%d" % j, "h%d" % j)
        target = sum(1 for k in range(1, j) if "e%d" % k in r.wires) + 1
        r.move_under("e%d" % j, target)
    r.move_under("e%d" % first,
                 sum(1 for k in range(1, first) if "e%d" % k in r.wires) + 1)
    if [w for w in r.wires if w.startswith("e")] != ["e%d" % k for k in range(1, n + 1)]:
        raise InvalidDiagram("entry routing failed")

    block_start = len(r.slices)
    for s in block:
        r.slices.append(s)
    # relabel through the block permutation
    ents = r.wires[:n]
    r.wires[:n] = ["x%d" % e for e in perm]

    # connect exit of order[k] to helper of order[k+1]
    for k in range(len(order) - 1):
        out_wire = "x%d" % order[k]
        helper = "h%d" % order[k + 1]
        r.move_under(out_wire, r.col(helper) - 1)
        r.cap(out_wire, helper)
    if len(r.wires) != 1 or r.wires[0] != "x%d" % order[-1]:
        raise InvalidDiagram("closure routing failed")
    d = Diagram(r.slices, 1, labels)
    d.validate()
    return d, block_start


def close_block_visit_check(diagram, block_ids, expected_order_positions):
    trav = diagram.traversal()
    firsts = {}
    for cid in block_ids:
        firsts[cid] = min(trav.pos[(cid, "O")], trav.pos[(cid, "U")])
    return firsts
