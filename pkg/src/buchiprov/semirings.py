"""Absorptive, fully-continuous semirings used as evaluation targets.

Every semiring object exposes ``zero``, ``one``, ``add``, ``mul``,
``inf_power``, ``power``, ``leq`` and ``format``.  The fixpoint engine and
polynomial evaluation only rely on this surface.
"""

import math

from .poly import INF, ONE, ZERO, AbsorptivePoly, poly_inf_power, poly_leq, poly_power


class Semiring:
    name = "semiring"
    #: True when Kleene descent from 1 terminates without acceleration.
    finite = False
    #: False for float-valued targets, which are only reached by evaluation.
    exact = True

    zero = None
    one = None

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inf_power(self, a):
        raise NotImplementedError

    def power(self, a, n):
        if n == INF:
            return self.inf_power(a)
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, a)
            n >>= 1
            if n:
                a = self.mul(a, a)
        return result

    def leq(self, a, b):
        return self.add(a, b) == b

    def is_zero(self, a):
        return a == self.zero

    def is_one(self, a):
        return a == self.one

    def saturate(self, a, bound):
        return a

    def sum(self, values):
        total = self.zero
        for v in values:
            total = self.add(total, v)
        return total

    def prod(self, values):
        total = self.one
        for v in values:
            total = self.mul(total, v)
        return total

    def parse_value(self, text):
        raise NotImplementedError

    def format(self, a):
        return str(a)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class BooleanSemiring(Semiring):
    """({0, 1}, or, and, 0, 1); values are the ints 0 and 1."""

    name = "boolean"
    finite = True
    zero = 0
    one = 1

    def add(self, a, b):
        return a | b

    def mul(self, a, b):
        return a & b

    def inf_power(self, a):
        return a

    def power(self, a, n):
        return self.one if n == 0 else a

    def parse_value(self, text):
        text = text.strip().lower()
        if text in ("1", "true"):
            return 1
        if text in ("0", "false"):
            return 0
        raise ValueError(f"not a Boolean value: {text!r}")


class ViterbiSemiring(Semiring):
    """([0, 1], max, ·, 0, 1) for confidence scores."""

    name = "viterbi"
    exact = False
    zero = 0.0
    one = 1.0

    def add(self, a, b):
        return max(a, b)

    def mul(self, a, b):
        return a * b

    def inf_power(self, a):
        return 1.0 if a == 1.0 else 0.0

    def power(self, a, n):
        if n == INF:
            return self.inf_power(a)
        return a**n

    def parse_value(self, text):
        v = float(text)
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"Viterbi value must lie in [0, 1], got {text!r}")
        return v

    def format(self, a):
        return repr(float(a))


class TropicalSemiring(Semiring):
    """(ℝ₊ ∪ {∞}, min, +, ∞, 0) for costs.  Natural order is reversed numeric order."""

    name = "tropical"
    exact = False
    zero = math.inf
    one = 0.0

    def add(self, a, b):
        return min(a, b)

    def mul(self, a, b):
        return a + b

    def inf_power(self, a):
        return 0.0 if a == 0 else math.inf

    def power(self, a, n):
        if n == INF:
            return self.inf_power(a)
        return a * n if n else 0.0

    def parse_value(self, text):
        text = text.strip()
        v = math.inf if text in ("inf", "∞") else float(text)
        if v < 0:
            raise ValueError(f"tropical value must be non-negative, got {text!r}")
        return v

    def format(self, a):
        if a == math.inf:
            return "inf"
        if float(a).is_integer():
            return str(int(a))
        return repr(float(a))


class MinMaxSemiring(Semiring):
    """(A, max, min, bottom, top) over a finite totally ordered set of levels."""

    name = "minmax"
    finite = True

    def __init__(self, levels):
        levels = tuple(levels)
        if not levels:
            raise ValueError("min-max semiring needs at least one level")
        if len(set(levels)) != len(levels):
            raise ValueError(f"duplicate levels in {levels!r}")
        self.levels = levels
        self._rank = {lv: i for i, lv in enumerate(levels)}
        self.zero = levels[0]
        self.one = levels[-1]

    @classmethod
    def from_spec(cls, text):
        """Build from ``low<mid<high``."""
        return cls([part.strip() for part in text.split("<") if part.strip()])

    def rank(self, a):
        return self._rank[a]

    def add(self, a, b):
        return a if self._rank[a] >= self._rank[b] else b

    def mul(self, a, b):
        return a if self._rank[a] <= self._rank[b] else b

    def inf_power(self, a):
        return a

    def power(self, a, n):
        return self.one if n == 0 else a

    def leq(self, a, b):
        return self._rank[a] <= self._rank[b]

    def parse_value(self, text):
        text = text.strip()
        if text not in self._rank:
            raise ValueError(f"unknown level {text!r}; levels are {'<'.join(self.levels)}")
        return text

    def __eq__(self, other):
        return isinstance(other, MinMaxSemiring) and other.levels == self.levels

    def __hash__(self):
        return hash(self.levels)


class PolySemiring(Semiring):
    """S∞[X] itself, so polynomials can be evaluated into polynomials."""

    name = "poly"
    zero = ZERO
    one = ONE

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def inf_power(self, a):
        return poly_inf_power(a)

    def power(self, a, n):
        if n == INF:
            return poly_inf_power(a)
        return poly_power(a, n)

    def leq(self, a, b):
        return poly_leq(a, b)

    def saturate(self, a, bound):
        return a.saturate(bound)

    def parse_value(self, text):
        return AbsorptivePoly.parse(text)


BOOLEAN = BooleanSemiring()
VITERBI = ViterbiSemiring()
TROPICAL = TropicalSemiring()
SINF = PolySemiring()


def builtin_targets(levels=None):
    """The application semirings shipped with the package, keyed by name.

    ``levels`` (an ordered sequence) adds the min-max semiring over it.
    """
    targets = {"boolean": BOOLEAN, "viterbi": VITERBI, "tropical": TROPICAL}
    if levels is not None:
        targets["minmax"] = MinMaxSemiring(levels)
    return targets
