"""Generalized absorptive polynomials S∞[X].

A polynomial is a set of coefficient-free monomials with exponents in
ℕ ∪ {∞} in which no monomial absorbs another.  ``m1`` absorbs ``m2`` when
every exponent of ``m1`` is at most the matching exponent of ``m2``; after
every sum or product only the absorbing (maximal) monomials are kept.

Variables are plain strings.  Their string order is the canonical order used
for rendering and comparison.
"""

import math
import re

from .errors import ParseError, SizeLimitError, UnassignedVariableError

INF = math.inf
MAX_FINITE_EXPONENT = 2**63 - 1

#: Polynomials with more monomials than this abort with SizeLimitError.
DEFAULT_SIZE_LIMIT = 10**6

_size_limit = DEFAULT_SIZE_LIMIT


def set_size_limit(limit):
    """Set the antichain size guard; returns the previous value."""
    global _size_limit
    previous, _size_limit = _size_limit, int(limit)
    return previous


def add_exponents(x, y):
    s = x + y
    if s != INF and s > MAX_FINITE_EXPONENT:
        raise OverflowError(f"exponent overflow: {x} + {y}")
    return s


def _check_exponent(e):
    if e == INF:
        return INF
    if isinstance(e, bool) or not isinstance(e, int):
        raise TypeError(f"exponent must be a natural number or INF, got {e!r}")
    if e < 0 or e > MAX_FINITE_EXPONENT:
        raise ValueError(f"exponent out of range: {e}")
    return e


def format_exponent(e):
    return "inf" if e == INF else str(e)


class Monomial:
    """An exponent vector, stored sparsely (only positive exponents)."""

    __slots__ = ("_items", "_exps", "_hash")

    def __init__(self, exponents=()):
        if isinstance(exponents, dict):
            exponents = exponents.items()
        exps = {}
        for var, e in exponents:
            e = _check_exponent(e)
            if e:
                exps[var] = e
        self._exps = exps
        self._items = tuple(sorted(exps.items()))
        self._hash = hash(self._items)

    @classmethod
    def _raw(cls, exps):
        # exps already validated and free of zero entries
        m = object.__new__(cls)
        m._exps = exps
        m._items = tuple(sorted(exps.items()))
        m._hash = hash(m._items)
        return m

    @classmethod
    def var(cls, name, exponent=1):
        return cls({name: exponent})

    def __getitem__(self, var):
        return self._exps.get(var, 0)

    def __iter__(self):
        return iter(self._items)

    def __len__(self):
        return len(self._items)

    def items(self):
        return self._items

    def support(self):
        return frozenset(self._exps)

    def is_one(self):
        return not self._items

    def __eq__(self, other):
        if not isinstance(other, Monomial):
            return NotImplemented
        return self._items == other._items

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return self._items

    def __lt__(self, other):
        return self._items < other._items

    def absorbs(self, other):
        """True iff ``self ⪰ other``, i.e. self(x) <= other(x) for every x."""
        oexps = other._exps
        if len(self._exps) > len(oexps):
            return False
        for var, e in self._items:
            if oexps.get(var, 0) < e:
                return False
        return True

    def __mul__(self, other):
        if not other._exps:
            return self
        if not self._exps:
            return other
        exps = dict(self._exps)
        for var, e in other._items:
            if var in exps:
                exps[var] = add_exponents(exps[var], e)
            else:
                exps[var] = e
        return Monomial._raw(exps)

    def inf_power(self):
        return Monomial._raw({var: INF for var in self._exps})

    def flatten(self):
        """Every positive exponent becomes 1."""
        return Monomial._raw({var: 1 for var in self._exps})

    def saturate(self, bound):
        if all(e <= bound for e in self._exps.values()):
            return self
        return Monomial._raw({v: (INF if e > bound else e) for v, e in self._exps.items()})

    def degree_key(self):
        # linear extension of absorption: an absorber never sorts after its absorbee
        infs = 0
        finite = 0
        for e in self._exps.values():
            if e == INF:
                infs += 1
            else:
                finite += e
        return infs, finite

    def to_json(self):
        return {var: (format_exponent(e) if e == INF else e) for var, e in self._items}

    def __str__(self):
        if not self._items:
            return "1"
        parts = []
        for var, e in self._items:
            parts.append(var if e == 1 else f"{var}^{format_exponent(e)}")
        return "*".join(parts)

    def __repr__(self):
        return f"Monomial({str(self)!r})"


ONE_MONOMIAL = Monomial()


def mono_absorbs(m1, m2):
    return m1.absorbs(m2)


def mono_mul(m1, m2):
    return m1 * m2


def maximal_monomials(monomials):
    """Reduce an iterable of monomials to its antichain of absorbing elements."""
    candidates = sorted(set(monomials), key=Monomial.degree_key)
    kept = []
    for m in candidates:
        for k in kept:
            if k.absorbs(m):
                break
        else:
            kept.append(m)
            if len(kept) > _size_limit:
                raise SizeLimitError(
                    f"polynomial exceeds {_size_limit} monomials; "
                    "track fewer edges or raise the size limit"
                )
    return frozenset(kept)


class AbsorptivePoly:
    """An element of S∞[X]: an antichain of monomials under absorption."""

    __slots__ = ("monomials", "_hash")

    def __init__(self, monomials=(), _trusted=False):
        if _trusted:
            self.monomials = monomials
        else:
            self.monomials = maximal_monomials(monomials)
        self._hash = hash(self.monomials)

    @classmethod
    def zero(cls):
        return ZERO

    @classmethod
    def one(cls):
        return ONE

    @classmethod
    def var(cls, name, exponent=1):
        return cls([Monomial.var(name, exponent)], _trusted=False)

    @classmethod
    def parse(cls, text):
        return parse_poly(text)

    def is_zero(self):
        return not self.monomials

    def is_one(self):
        return len(self.monomials) == 1 and next(iter(self.monomials)).is_one()

    def variables(self):
        out = set()
        for m in self.monomials:
            out.update(m.support())
        return frozenset(out)

    def sorted_monomials(self):
        return sorted(self.monomials, key=Monomial.sort_key)

    def __iter__(self):
        return iter(self.sorted_monomials())

    def __len__(self):
        return len(self.monomials)

    def __eq__(self, other):
        if not isinstance(other, AbsorptivePoly):
            return NotImplemented
        return self.monomials == other.monomials

    def __hash__(self):
        return self._hash

    def __add__(self, other):
        return poly_add(self, other)

    def __mul__(self, other):
        return poly_mul(self, other)

    def __le__(self, other):
        return poly_leq(self, other)

    def inf_power(self):
        return poly_inf_power(self)

    def __pow__(self, n):
        if n == INF:
            return poly_inf_power(self)
        return poly_power(self, n)

    def flatten(self):
        return AbsorptivePoly(m.flatten() for m in self.monomials)

    def saturate(self, bound):
        if all(m.saturate(bound) is m for m in self.monomials):
            return self
        return AbsorptivePoly(m.saturate(bound) for m in self.monomials)

    def to_json(self):
        return [m.to_json() for m in self.sorted_monomials()]

    @classmethod
    def from_json(cls, data):
        monos = []
        for entry in data:
            monos.append(Monomial({v: (INF if e == "inf" else int(e)) for v, e in entry.items()}))
        return cls(monos)

    def __str__(self):
        if not self.monomials:
            return "0"
        return " + ".join(str(m) for m in self.sorted_monomials())

    def __repr__(self):
        return f"AbsorptivePoly({str(self)!r})"


ZERO = AbsorptivePoly(frozenset(), _trusted=True)
ONE = AbsorptivePoly(frozenset([ONE_MONOMIAL]), _trusted=True)


def poly_add(p, q):
    if not p.monomials:
        return q
    if not q.monomials:
        return p
    return AbsorptivePoly(p.monomials | q.monomials)


def poly_mul(p, q):
    if not p.monomials or not q.monomials:
        return ZERO
    if p.is_one():
        return q
    if q.is_one():
        return p
    return AbsorptivePoly(m1 * m2 for m1 in p.monomials for m2 in q.monomials)


def poly_power(p, n):
    if n < 0:
        raise ValueError("negative power")
    result = ONE
    base = p
    while n:
        if n & 1:
            result = poly_mul(result, base)
        n >>= 1
        if n:
            base = poly_mul(base, base)
    return result


def poly_inf_power(p):
    # (a + b)^∞ = a^∞ + b^∞, and a monomial's infimum of powers sends
    # every positive exponent to ∞
    return AbsorptivePoly(m.inf_power() for m in p.monomials)


def poly_leq(p, q):
    """Natural order: p <= q iff p + q = q."""
    return all(any(n.absorbs(m) for n in q.monomials) for m in p.monomials)


def poly_eval(p, assignment, target):
    """Evaluate ``p`` in ``target`` under ``assignment`` (variable -> value).

    This is the unique fully-continuous homomorphism extending the
    assignment; ∞ exponents go through ``target.inf_power``.
    """
    total = target.zero
    for m in p.sorted_monomials():
        term = target.one
        for var, e in m.items():
            try:
                value = assignment[var]
            except KeyError:
                raise UnassignedVariableError(var) from None
            term = target.mul(term, target.inf_power(value) if e == INF else target.power(value, e))
        total = target.add(total, term)
    return total


_VAR_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*~?\Z")


def parse_poly(text):
    """Parse the canonical text form, e.g. ``a^2*b + b*c^inf``, ``0`` or ``1``."""
    text = text.strip()
    if not text:
        raise ParseError("empty polynomial", 1, 1)
    monos = []
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            raise ParseError(f"dangling '+' in {text!r}")
        if chunk == "0":
            continue
        exps = {}
        for factor in chunk.split("*"):
            factor = factor.strip()
            if factor == "1":
                continue
            name, caret, exp = factor.partition("^")
            name = name.strip()
            if not _VAR_RE.match(name) or name == "inf":
                raise ParseError(f"bad factor {factor!r}")
            exp = exp.strip()
            if not caret:
                e = 1
            elif exp == "inf":
                e = INF
            elif exp.isdigit():
                e = int(exp)
            else:
                raise ParseError(f"bad exponent {exp!r}")
            exps[name] = add_exponents(exps.get(name, 0), e)
        monos.append(Monomial(exps))
    return AbsorptivePoly(monos)


def is_variable_name(name):
    return bool(_VAR_RE.match(name)) and not name.endswith("~") and name != "inf"
