"""Dual-indeterminate polynomials S∞[X, X̄].

Each tracked variable ``x`` may have a dual ``x~``.  The quotient by
``x * x~ = 0`` is realised eagerly: a product that mentions both members of
a pair is dropped on the spot, which is complete because the congruence is
generated by monomial-local relations.
"""

from dataclasses import dataclass

from .errors import DualityError
from .poly import INF, AbsorptivePoly, poly_eval
from .semirings import Semiring

DUAL_SUFFIX = "~"


def dual_name(var):
    """``a`` <-> ``a~``."""
    if var.endswith(DUAL_SUFFIX):
        return var[: -len(DUAL_SUFFIX)]
    return var + DUAL_SUFFIX


class DualityRelation:
    """Symmetric pairing of variables with their duals."""

    __slots__ = ("_pairs", "_base")

    def __init__(self, base_vars=()):
        pairs = {}
        for x in base_vars:
            if x.endswith(DUAL_SUFFIX):
                raise ValueError(f"base variable {x!r} may not carry the dual suffix")
            xd = dual_name(x)
            pairs[x] = xd
            pairs[xd] = x
        self._pairs = pairs
        self._base = frozenset(base_vars)

    @property
    def base(self):
        return self._base

    def dual(self, var):
        return self._pairs.get(var)

    def pairs(self):
        return sorted((x, self._pairs[x]) for x in self._base)

    def contradicts(self, m):
        exps = m.support()
        for x in exps:
            d = self._pairs.get(x)
            if d is not None and d in exps:
                return True
        return False

    def __contains__(self, var):
        return var in self._pairs

    def __eq__(self, other):
        return isinstance(other, DualityRelation) and other._base == self._base

    def __hash__(self):
        return hash(self._base)

    def __repr__(self):
        return f"DualityRelation({sorted(self._base)!r})"


def _consistent(poly, duality):
    if not any(duality.contradicts(m) for m in poly.monomials):
        return poly
    return AbsorptivePoly(
        frozenset(m for m in poly.monomials if not duality.contradicts(m)), _trusted=True
    )


@dataclass(frozen=True)
class DualPoly:
    poly: AbsorptivePoly
    duality: DualityRelation

    def __post_init__(self):
        object.__setattr__(self, "poly", _consistent(self.poly, self.duality))

    @classmethod
    def var(cls, name, duality):
        return cls(AbsorptivePoly.var(name), duality)

    @classmethod
    def const(cls, poly, duality):
        return cls(poly, duality)

    def is_zero(self):
        return self.poly.is_zero()

    def __add__(self, other):
        return dual_add(self, other)

    def __mul__(self, other):
        return dual_mul(self, other)

    def inf_power(self):
        return DualPoly(self.poly.inf_power(), self.duality)

    def __str__(self):
        return str(self.poly)

    def to_json(self):
        return self.poly.to_json()


def _same_duality(p, q):
    if p.duality != q.duality:
        raise DualityError(f"mismatched duality relations: {p.duality!r} vs {q.duality!r}")


def dual_add(p, q):
    _same_duality(p, q)
    # a sum never creates a complementary pair
    return DualPoly(p.poly + q.poly, p.duality)


def dual_mul(p, q):
    _same_duality(p, q)
    if p.poly.is_zero() or q.poly.is_zero():
        return DualPoly(p.poly.zero(), p.duality)
    duality = p.duality
    monos = []
    for m1 in p.poly.monomials:
        for m2 in q.poly.monomials:
            m = m1 * m2
            if not duality.contradicts(m):
                monos.append(m)
    return DualPoly(AbsorptivePoly(monos), duality)


def drop_exponents(p):
    """Project to PosBool[X, X̄]: every positive exponent (finite or ∞) becomes 1."""
    return DualPoly(p.poly.flatten(), p.duality)


def check_assignment(assignment, duality, target):
    for x, xd in duality.pairs():
        if x in assignment and xd in assignment:
            if not target.is_zero(target.mul(assignment[x], assignment[xd])):
                raise DualityError(
                    f"assignment violates duality for pair ({x}, {xd}): "
                    f"h({x}) * h({xd}) != 0"
                )


def dual_eval(p, assignment, target):
    check_assignment(assignment, p.duality, target)
    return poly_eval(p.poly, assignment, target)


class DualSemiring(Semiring):
    """S∞[X, X̄] over a fixed duality relation, optionally in PosBool mode."""

    name = "dual"

    def __init__(self, duality, posbool=False):
        self.duality = duality
        self.posbool = posbool
        self.finite = posbool
        self.zero = DualPoly(AbsorptivePoly.zero(), duality)
        self.one = DualPoly(AbsorptivePoly.one(), duality)
        if posbool:
            self.name = "posbool"

    def _norm(self, p):
        return drop_exponents(p) if self.posbool else p

    def add(self, a, b):
        return dual_add(a, b)

    def mul(self, a, b):
        return self._norm(dual_mul(a, b))

    def inf_power(self, a):
        return self._norm(a.inf_power())

    def power(self, a, n):
        if n == 0:
            return self.one
        if n == INF:
            return self.inf_power(a)
        if self.posbool:
            return a
        return super().power(a, n)

    def saturate(self, a, bound):
        return DualPoly(a.poly.saturate(bound), self.duality)

    def var(self, name):
        return self._norm(DualPoly.var(name, self.duality))

    def format(self, a):
        return str(a.poly)
