"""Semiring interpretations of the game signature {E, F, V0, V1} with equality.

Only edge literals ever carry non-Boolean values.  An interpretation stores
overrides for ``E uw`` and ``¬E uw``; every other literal, and every pair
without an override, gets 0 or 1 according to the game.
"""

from .dual import DualityRelation, DualPoly, DualSemiring, check_assignment, dual_name
from .errors import RepairError
from .game import added_edge_label
from .poly import AbsorptivePoly, poly_eval
from .semirings import SINF


class Interpretation:
    def __init__(self, game, semiring, pos=None, neg=None, model_defining=True, kind="custom"):
        self.game = game
        self.semiring = semiring
        self._pos = dict(pos or {})
        self._neg = dict(neg or {})
        self.model_defining = model_defining
        self.kind = kind
        self._check()

    def _check(self):
        sr = self.semiring
        for v in self.game.positions:
            for w in self.game.positions:
                p = self.edge_value(v, w)
                n = self.neg_edge_value(v, w)
                if not sr.is_zero(sr.mul(p, n)):
                    raise ValueError(f"literals E{v}{w} and ¬E{v}{w} do not multiply to 0")

    # literal lookups

    def edge_value(self, u, w):
        if (u, w) in self._pos:
            return self._pos[(u, w)]
        return self.semiring.one if self.game.has_edge(u, w) else self.semiring.zero

    def neg_edge_value(self, u, w):
        if (u, w) in self._neg:
            return self._neg[(u, w)]
        # materialized lazily: absent pairs without override are simply true
        return self.semiring.zero if self.game.has_edge(u, w) else self.semiring.one

    def label_value(self, label):
        e = self.game.edge(label)
        return self.edge_value(e.source, e.target)

    def literal(self, pred, *args, negated=False):
        """Value of an instantiated literal, e.g. ``literal("F", "v")`` or ``literal("eq", "v", "w")``."""
        sr = self.semiring
        if pred == "E":
            return self.neg_edge_value(*args) if negated else self.edge_value(*args)
        if pred == "F":
            truth = args[0] in self.game.target
        elif pred == "V0":
            truth = self.game.owner[args[0]] == 0
        elif pred == "V1":
            truth = self.game.owner[args[0]] == 1
        elif pred == "eq":
            truth = args[0] == args[1]
        else:
            raise ValueError(f"unknown predicate {pred!r}")
        if negated:
            truth = not truth
        return sr.one if truth else sr.zero

    @property
    def edge_tracking(self):
        """Only positive literals of existing edges deviate from the game's 0/1 values."""
        return not self._neg and all(self.game.has_edge(u, w) for u, w in self._pos)

    def overridden_pairs(self):
        return sorted(set(self._pos) | set(self._neg))

    def is_model_defining_at(self, u, w):
        sr = self.semiring
        p = self.edge_value(u, w)
        n = self.neg_edge_value(u, w)
        return sr.is_zero(p) != sr.is_zero(n)

    def variables(self):
        out = set()
        for val in list(self._pos.values()) + list(self._neg.values()):
            if isinstance(val, DualPoly):
                out |= val.poly.variables()
            elif isinstance(val, AbsorptivePoly):
                out |= val.variables()
        return frozenset(out)

    def __repr__(self):
        return f"<Interpretation {self.kind} over {self.semiring.name}>"


def make_pi_strat(game, tracked=None):
    """Track the edges in ``tracked`` (all edges by default) by their labels.

    Untracked edges map to 1, so an empty tracking set gives a Boolean-valued
    interpretation.
    """
    labels = game.labels() if tracked is None else tuple(tracked)
    unknown = [lb for lb in labels if not game.has_label(lb)]
    if unknown:
        raise KeyError(f"tracking references unknown edge label(s): {', '.join(unknown)}")
    pos = {}
    for label in labels:
        e = game.edge(label)
        pos[e.pair] = AbsorptivePoly.var(label)
    return Interpretation(game, SINF, pos=pos, kind="strat")


def repair_variables(game, spec):
    """Map each pair in E± to the variable naming it."""
    out = {}
    for label in spec.removable:
        out[game.edge(label).pair] = label
    for u, w in spec.addable:
        out[(u, w)] = added_edge_label(u, w)
    return out


def make_pi_rep(game, spec, posbool=True):
    """Dual-indeterminate repair interpretation over S∞[X, X̄] (PosBool by default)."""
    problems = spec.violations(game)
    if problems:
        raise RepairError("; ".join(problems))
    names = repair_variables(game, spec)
    duality = DualityRelation(names.values())
    sr = DualSemiring(duality, posbool=posbool)
    pos = {pair: sr.var(x) for pair, x in names.items()}
    neg = {pair: sr.var(dual_name(x)) for pair, x in names.items()}
    interp = Interpretation(game, sr, pos=pos, neg=neg, model_defining=False, kind="rep")
    interp.spec = spec
    interp.duality = duality
    return interp


def compose_with_target(interp, assignment, target):
    """Push every literal value through the homomorphism induced by ``assignment``."""
    if isinstance(interp.semiring, DualSemiring):
        check_assignment(assignment, interp.semiring.duality, target)

    def image(val):
        if isinstance(val, DualPoly):
            val = val.poly
        if isinstance(val, AbsorptivePoly):
            return poly_eval(val, assignment, target)
        raise TypeError(f"cannot evaluate literal value {val!r}")

    pos = {pair: image(v) for pair, v in interp._pos.items()}
    neg = {pair: image(v) for pair, v in interp._neg.items()}
    return Interpretation(
        interp.game,
        target,
        pos=pos,
        neg=neg,
        model_defining=interp.model_defining,
        kind=f"{interp.kind}->{target.name}",
    )


def interpretation_of_game(game, semiring):
    """The plain Boolean-valued interpretation of ``game`` in ``semiring``."""
    return Interpretation(game, semiring, kind="model")
