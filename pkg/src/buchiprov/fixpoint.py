"""Nested fixed points for the Büchi winning formula.

For every position v the inner system reads

    v in F,  v in V0:   Z_v = sum_w  E(vw) * Y_w
    v in F,  v in V1:   Z_v = prod_w E(vw) * Y_w
    v not F, v in V0:   Z_v = sum_w  E(vw) * Z_w
    v not F, v in V1:   Z_v = prod_w E(vw) * Z_w

(the V1 factors become ``¬E(vw) + E(vw) * _`` for interpretations that are
not edge tracking).  ``Z*(Y)`` is the least solution for fixed ``Y`` and the
winning value is the greatest ``Y`` with ``Y = Z*(Y)``.
"""

from dataclasses import dataclass

from .errors import BudgetExceededError, ConvergenceError
from .poly import INF, AbsorptivePoly

GFP_MODES = ("accelerated", "saturating")
DEFAULT_SATURATION_BOUND = 64
SATURATION_BOUND_CAP = 1024
HARD_STEP_CAP = 10**4

CASES = ("F∩V0", "F∩V1", "F̄∩V0", "F̄∩V1")


@dataclass(frozen=True)
class Term:
    """One summand (V0) or factor (V1): ``neg + pos * X[successor]``."""

    pos: object
    neg: object
    successor: str


@dataclass(frozen=True)
class Equation:
    position: str
    case: str
    terms: tuple

    @property
    def uses_y(self):
        return self.case.startswith("F∩")

    @property
    def existential(self):
        return self.case.endswith("V0")


@dataclass(frozen=True)
class EquationSystem:
    game: object
    semiring: object
    equations: tuple
    simplified: bool

    def __getitem__(self, v):
        return self.equations[self.game.index(v)]

    def describe(self):
        """Human-readable rendering of the equations."""
        sr = self.semiring
        lines = []
        for eq in self.equations:
            var = "Y" if eq.uses_y else "Z"
            parts = []
            for t in eq.terms:
                prod = f"{_fmt(sr, t.pos)}*{var}_{t.successor}"
                if not sr.is_zero(t.neg):
                    prod = f"({_fmt(sr, t.neg)} + {prod})"
                parts.append(prod)
            if not parts:
                rhs = "0" if eq.existential else "1"
            else:
                rhs = (" + " if eq.existential else " * ").join(parts)
            lines.append(f"Z_{eq.position} = {rhs}    [{eq.case}]")
        return "\n".join(lines)


def _fmt(sr, value):
    return sr.format(value)


def build_equations(game, interp):
    """Instantiate the inner equation system for ``interp`` on ``game``."""
    sr = interp.semiring
    simplified = interp.edge_tracking
    equations = []
    for v in game.positions:
        in_f = v in game.target
        player0 = game.owner[v] == 0
        case = ("F∩" if in_f else "F̄∩") + ("V0" if player0 else "V1")
        terms = []
        if simplified:
            for e in game.out_edges(v):
                terms.append(Term(interp.edge_value(v, e.target), sr.zero, e.target))
        else:
            for w in game.positions:
                p = interp.edge_value(v, w)
                n = interp.neg_edge_value(v, w)
                if player0:
                    if not sr.is_zero(p):
                        terms.append(Term(p, sr.zero, w))
                elif not (sr.is_zero(p) and sr.is_one(n)):
                    terms.append(Term(p, n, w))
        equations.append(Equation(v, case, tuple(terms)))
    return EquationSystem(game, sr, tuple(equations), simplified)


def _rhs(sr, eq, Y, Z):
    values = Y if eq.uses_y else Z
    if eq.existential:
        total = sr.zero
        for t in eq.terms:
            total = sr.add(total, sr.mul(t.pos, values[t.successor]))
        return total
    total = sr.one
    for t in eq.terms:
        factor = sr.mul(t.pos, values[t.successor])
        if not sr.is_zero(t.neg):
            factor = sr.add(t.neg, factor)
        total = sr.mul(total, factor)
        if sr.is_zero(total):
            break
    return total


class Trace:
    """Collects iterates as text, one vector per line."""

    def __init__(self, enabled=True, inner=True):
        self.enabled = enabled
        self.inner = inner
        self.lines = []
        self.stats = {}
        self.outer_iterates = []
        self.inner_runs = []

    def vector(self, sr, positions, values):
        return "(" + ", ".join(sr.format(values[v]) for v in positions) + ")"

    def emit(self, line):
        if self.enabled:
            self.lines.append(line)

    def __str__(self):
        return "\n".join(self.lines)


def _size(value):
    if isinstance(value, AbsorptivePoly):
        return len(value)
    poly = getattr(value, "poly", None)
    if isinstance(poly, AbsorptivePoly):
        return len(poly)
    return 1


def _max_finite_exponent(value):
    poly = value if isinstance(value, AbsorptivePoly) else getattr(value, "poly", None)
    if not isinstance(poly, AbsorptivePoly):
        return 0
    best = 0
    for m in poly.monomials:
        for _, e in m.items():
            if e != INF and e > best:
                best = e
    return best


def lfp_inner(sys, Y, max_steps=None, trace=None, schedule="jacobi"):
    """Least solution of the Z-equations for fixed ``Y`` by ascending Kleene iteration.

    Iterates from the all-zero vector until two consecutive iterates agree.
    """
    sr = sys.semiring
    positions = sys.game.positions
    n = len(positions)
    cap = HARD_STEP_CAP if max_steps is None else max_steps
    Z = {v: sr.zero for v in positions}
    largest = 1
    run = [dict(Z)]
    if trace is not None and trace.inner:
        trace.emit(f"  Z0 = {trace.vector(sr, positions, Z)}")
    step = 0
    while True:
        step += 1
        if schedule == "jacobi":
            nxt = {eq.position: _rhs(sr, eq, Y, Z) for eq in sys.equations}
        elif schedule == "gauss-seidel":
            nxt = dict(Z)
            for eq in sys.equations:
                nxt[eq.position] = _rhs(sr, eq, Y, nxt)
        else:
            raise ValueError(f"unknown schedule {schedule!r}")
        if nxt == Z:
            break
        Z = nxt
        run.append(dict(Z))
        largest = max(largest, max(_size(z) for z in Z.values()))
        if trace is not None and trace.inner:
            trace.emit(f"  Z{step} = {trace.vector(sr, positions, Z)}")
        if step >= min(cap, n * (1 + largest)):
            raise BudgetExceededError(
                f"inner least fixed point did not stabilise within {step} steps"
            )
    if trace is not None:
        trace.inner_runs.append(run)
    return Z


def apply_operator(sys, Y, max_steps=None, schedule="jacobi"):
    """One application of Y -> Z*(Y)."""
    return lfp_inner(sys, Y, max_steps=max_steps, schedule=schedule)


def gfp_outer(
    sys,
    mode="accelerated",
    saturation_bound=DEFAULT_SATURATION_BOUND,
    max_steps=None,
    trace=None,
    schedule="jacobi",
):
    """Greatest solution of ``Y = Z*(Y)``.

    ``accelerated``: Kleene descent from the all-one vector for at most |V|
    rounds; if it has not repeated by then, take the infinitary power of the
    iterate and apply the operator |V| more times.  The result must be an
    exact fixed point, otherwise ConvergenceError.

    ``saturating``: Kleene descent where finite exponents above the bound
    become ∞.  A run is accepted once an iterate repeats, is an exact fixed
    point of the unsaturated operator and no exponent sits at the bound;
    otherwise the bound doubles up to SATURATION_BOUND_CAP.
    """
    if mode not in GFP_MODES:
        raise ValueError(f"unknown gfp mode {mode!r}; expected one of {', '.join(GFP_MODES)}")
    if mode == "accelerated":
        return _gfp_accelerated(sys, max_steps, trace, schedule)
    return _gfp_saturating(sys, saturation_bound, max_steps, trace, schedule)


def _emit_outer(trace, sys, label, Y):
    if trace is not None:
        trace.outer_iterates.append(dict(Y))
        trace.emit(f"{label} = {trace.vector(sys.semiring, sys.game.positions, Y)}")


def _gfp_accelerated(sys, max_steps, trace, schedule):
    sr = sys.semiring
    positions = sys.game.positions
    n = len(positions)
    Y = {v: sr.one for v in positions}
    _emit_outer(trace, sys, "Y0", Y)
    for k in range(1, n + 1):
        nxt = lfp_inner(sys, Y, max_steps, trace, schedule)
        if nxt == Y:
            if trace is not None:
                trace.stats.update(mode="accelerated", outer_steps=k, accelerated=False)
            return Y
        Y = nxt
        _emit_outer(trace, sys, f"Y{k}", Y)
    Y = {v: sr.inf_power(Y[v]) for v in positions}
    _emit_outer(trace, sys, f"Y{n}^inf", Y)
    for k in range(1, n + 1):
        nxt = lfp_inner(sys, Y, max_steps, trace, schedule)
        if nxt == Y:
            break
        Y = nxt
        _emit_outer(trace, sys, f"Y{n}^inf+{k}", Y)
    check = lfp_inner(sys, Y, max_steps, None, schedule)
    if check != Y:
        raise ConvergenceError(
            "accelerated greatest fixed point could not be certified: "
            "the accelerated iterate is not a fixed point"
        )
    if trace is not None:
        trace.stats.update(mode="accelerated", outer_steps=2 * n, accelerated=True)
    return Y


def _gfp_saturating(sys, bound, max_steps, trace, schedule):
    sr = sys.semiring
    positions = sys.game.positions
    cap = HARD_STEP_CAP if max_steps is None else max_steps
    bound = int(bound)
    if bound < 1:
        raise ValueError("saturation bound must be positive")
    while True:
        Y = {v: sr.one for v in positions}
        if trace is not None:
            trace.emit(f"# saturating descent, bound {bound}")
        _emit_outer(trace, sys, "Y0", Y)
        step = 0
        while True:
            step += 1
            if step > cap:
                raise BudgetExceededError(
                    f"saturating descent did not repeat within {cap} outer steps (bound {bound})"
                )
            raw = lfp_inner(sys, Y, max_steps, trace, schedule)
            nxt = {v: sr.saturate(raw[v], bound) for v in positions}
            if nxt == Y:
                break
            Y = nxt
            _emit_outer(trace, sys, f"Y{step}", Y)
        exact = raw == Y
        at_bound = any(_max_finite_exponent(Y[v]) >= bound for v in positions)
        if exact and not at_bound:
            if trace is not None:
                trace.stats.update(mode="saturating", outer_steps=step, bound=bound)
            return Y
        if trace is not None:
            trace.emit(f"# bound {bound} is binding; retrying with {2 * bound}")
        if 2 * bound > SATURATION_BOUND_CAP:
            raise ConvergenceError(
                f"saturating descent is bound-sensitive up to the cap {SATURATION_BOUND_CAP}"
            )
        bound *= 2


def solve_win0(game, interp, mode="accelerated", saturation_bound=DEFAULT_SATURATION_BOUND,
               max_steps=None, trace=None, schedule="jacobi"):
    """Value of the winning formula at every position under ``interp``."""
    sr = interp.semiring
    if not getattr(sr, "exact", True):
        raise ValueError(
            f"direct solving over {sr.name} is not supported; solve over S∞[X] "
            "and evaluate the polynomial instead"
        )
    sys = build_equations(game, interp)
    return gfp_outer(sys, mode=mode, saturation_bound=saturation_bound,
                     max_steps=max_steps, trace=trace, schedule=schedule)
