"""Evaluation of the Laurent-polynomial 1-cochain over move traces.

Every RIII event of global type r_a or l_c contributes its ml
singularization with coefficient

    sign(p) * (x^(W1(ml)+(w(hm)-1)/2+1) - x^(W1(ml)+(w(hm)-1)/2)),

every RIII event of type r_a, r_b or l_b contributes its two d-sided
singularizations with coefficient sign(p)*w(d)*x^(W1(d)) and opposite
side signs, and every RII event with a 0-type pair contributes the
positive minus the negative partial singularization times
sign(p)*x^(W1(d)).  Terms are keyed by the fingerprint of the singular
tangle and merged immediately.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .laurent import LaurentPoly
from .moves import classify, singularization_terms
from .singular import DEFAULT_BUDGET, SingularTangle, fingerprint


@dataclass
class CocycleValue:
    variant: str
    plus: dict = field(default_factory=dict)    # ClassKey -> LaurentPoly
    minus: dict = field(default_factory=dict)

    def _bucket(self, dp_sign):
        return self.plus if dp_sign > 0 else self.minus

    def accumulate(self, key, poly):
        bucket = self._bucket(key.dp_sign)
        cur = bucket.get(key, LaurentPoly.zero()) + poly
        if cur:
            bucket[key] = cur
        else:
            bucket.pop(key, None)

    def __add__(self, other):
        out = CocycleValue(self.variant, dict(self.plus), dict(self.minus))
        for side in ("plus", "minus"):
            for k, p in getattr(other, side).items():
                out.accumulate(k, p)
        return out

    def __neg__(self):
        out = CocycleValue(self.variant)
        for side in ("plus", "minus"):
            for k, p in getattr(self, side).items():
                getattr(out, side)[k] = -p
        return out

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self):
        return not self.plus and not self.minus

    def __eq__(self, other):
        return (isinstance(other, CocycleValue) and self.plus == other.plus
                and self.minus == other.minus)

    def terms(self):
        for k, p in self.plus.items():
            yield k, p
        for k, p in self.minus.items():
            yield k, p

    def derivative_at_one(self):
        out = {}
        for k, p in self.terms():
            v = p.derivative_at_one()
            if v:
                out[k] = v
        return out

    def to_json(self):
        def side(bucket):
            return [{"classKey": k.to_json(), "poly": p.as_pairs()}
                    for k, p in sorted(bucket.items(),
                                       key=lambda kv: kv[0].sort_token())]
        return {"variant": self.variant, "plus": side(self.plus),
                "minus": side(self.minus)}

    def table(self):
        lines = []
        for name, bucket in (("+", self.plus), ("-", self.minus)):
            for k, p in sorted(bucket.items(), key=lambda kv: kv[0].sort_token()):
                lines.append("%s %-24s %s"
                             % (name, str(k.component_pair) + " w=%d w1=%d" % (k.w, k.w1), p))
        return "\n".join(lines) if lines else "0"


def event_contributions(event, diagram, variant, budget=DEFAULT_BUDGET):
    """[(ClassKey, LaurentPoly, info)] for a single classified event."""
    ev = classify(event, diagram)
    out = []
    terms = singularization_terms(event, diagram, variant)
    for t in terms:
        if t.role == "ml":
            corr = (ev.w_hm - 1) // 2
            if ev.w_hm not in (1, -1):
                raise ValueError("hm sign must be +-1")
            e0 = ev.W1_ml + corr
            poly = LaurentPoly.x_power_diff(e0 + 1, e0).mul_monomial(0, ev.sign)
        elif t.role == "d":
            poly = LaurentPoly.monomial(ev.W1_d, ev.sign * ev.w_d * t.sided_sign)
        else:  # rii
            poly = LaurentPoly.monomial(ev.W1_d, ev.sign * t.sided_sign)
        tangle = SingularTangle(t.diagram(), t.dp_sign, t.component_pair)
        key = fingerprint(tangle, budget)
        out.append((key, poly, {"role": t.role, "event": ev, "tags": event.tags}))
    return out


def evaluate(trace, variant, budget=DEFAULT_BUDGET, collector=None):
    """Evaluate the cocycle over an isotopy trace."""
    value = CocycleValue(variant)
    for step_index, (pre, step, post) in enumerate(trace.replay()):
        if step[0] != "move":
            continue
        event = step[1]
        for key, poly, info in event_contributions(event, pre, variant, budget):
            value.accumulate(key, poly)
            if collector is not None:
                collector.append({"step": step_index, "key": key, "poly": poly,
                                  **info})
    return value


def derivative_at_one(value):
    return value.derivative_at_one()
