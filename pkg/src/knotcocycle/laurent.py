"""Exact integer Laurent polynomials in one variable x.

This is the coefficient ring of every cocycle value and every tangle
equation.  Polynomials are stored as a map exponent -> coefficient with
zero coefficients dropped eagerly, so structural equality is semantic
equality.  Coefficients are Python ints, hence arbitrary precision.
"""

from __future__ import annotations


class Infeasible(Exception):
    """Division by (x^s - 1) left a nonzero remainder."""


class LaurentPoly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for e, c in (terms.items() if isinstance(terms, dict) else terms):
                c = t.get(e, 0) + c
                if c:
                    t[e] = c
                else:
                    t.pop(e, None)
        self.terms = t

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: 1})

    @classmethod
    def monomial(cls, exponent, coeff=1):
        return cls({exponent: coeff})

    @classmethod
    def x_power_diff(cls, a, b):
        """x^a - x^b (zero when a == b)."""
        return cls({a: 1}) + cls({b: -1})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, LaurentPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __add__(self, other):
        t = dict(self.terms)
        for e, c in other.terms.items():
            c = t.get(e, 0) + c
            if c:
                t[e] = c
            else:
                t.pop(e, None)
        p = LaurentPoly.__new__(LaurentPoly)
        p.terms = t
        return p

    def __neg__(self):
        p = LaurentPoly.__new__(LaurentPoly)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.mul_monomial(0, other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                c = t.get(e, 0) + c1 * c2
                if c:
                    t[e] = c
                else:
                    t.pop(e, None)
        p = LaurentPoly.__new__(LaurentPoly)
        p.terms = t
        return p

    __rmul__ = __mul__

    def mul_monomial(self, k, c=1):
        """Multiply by c * x^k: shift every exponent by k, scale by c."""
        if c == 0:
            return LaurentPoly()
        p = LaurentPoly.__new__(LaurentPoly)
        p.terms = {e + k: cc * c for e, cc in self.terms.items()}
        return p

    def evaluate(self, x):
        return sum(c * x ** e for e, c in self.terms.items())

    def derivative_at_one(self):
        """d/dx at x=1, i.e. sum of e*coeff(e)."""
        return sum(e * c for e, c in self.terms.items())

    def min_exp(self):
        return min(self.terms) if self.terms else None

    def max_exp(self):
        return max(self.terms) if self.terms else None

    def divide_by_cyclotomic_shift(self, s):
        """Exact quotient q with self == (x^s - 1) * q, else Infeasible.

        For s == 0 the divisor is 0, so the division succeeds only for
        the zero polynomial (with quotient 0).
        """
        if s < 0:
            raise ValueError("shift must be >= 0")
        if s == 0:
            if self.is_zero():
                return LaurentPoly()
            raise Infeasible("nonzero polynomial, zero shift")
        rem = dict(self.terms)
        q = {}
        hi = max(rem) if rem else 0
        while rem:
            a = min(rem)
            if a > hi:
                raise Infeasible("remainder after division by x^%d - 1" % s)
            c = rem[a]
            # (x^s - 1) * (-c x^a) = -c x^(a+s) + c x^a  kills the low term
            q[a] = q.get(a, 0) - c
            del rem[a]
            e = a + s
            cc = rem.get(e, 0) - c
            if cc:
                rem[e] = cc
            else:
                rem.pop(e, None)
        return LaurentPoly(q)

    def as_pairs(self):
        """Sorted [exponent, coefficient] pairs (ascending exponent)."""
        return [[e, self.terms[e]] for e in sorted(self.terms)]

    def __repr__(self):
        return "LaurentPoly(%r)" % (dict(sorted(self.terms.items())),)

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                xs = "x" if e == 1 else "x^%d" % e
                body = xs if mag == 1 else "%d*%s" % (mag, xs)
            out.append((sign, body))
        first_sign, first_body = out[0]
        s = ("-" if first_sign == "-" else "") + first_body
        for sign, body in out[1:]:
            s += " %s %s" % (sign, body)
        return s


def add(p, q):
    return p + q


def mul_monomial(p, k, c):
    return p.mul_monomial(k, c)


def derivative_at_one(p):
    return p.derivative_at_one()


def divide_by_cyclotomic_shift(p, s):
    return p.divide_by_cyclotomic_shift(s)
