"""Queries answered from solved polynomials: reports, edge subsets, finite use, repairs."""

import itertools
from dataclasses import dataclass, field

import networkx as nx

from .dual import dual_name
from .errors import PreconditionViolated, RepairError
from .fixpoint import DEFAULT_SATURATION_BOUND, solve_win0
from .game import added_edge_label, repair_from_labels, solve_boolean
from .interpretation import make_pi_rep, make_pi_strat
from .poly import INF
from .strategies import EdgeProfile, classify

BOUNDED = "bounded-per-play"
INFINITE = "infinite-play-exists"


@dataclass(frozen=True)
class MonomialReport:
    monomial: object
    profile: EdgeProfile
    positional: bool

    def to_json(self):
        return {
            "monomial": str(self.monomial),
            "profile": self.profile.to_json(),
            "positional": self.positional,
        }


@dataclass(frozen=True)
class Repair:
    edges: frozenset
    minimal: bool
    verified: bool

    def sorted_edges(self):
        return sorted(self.edges)

    def to_json(self):
        return {"edges": self.sorted_edges(), "minimal": self.minimal, "verified": self.verified}


@dataclass
class RepairResult:
    position: str
    winner: bool
    polynomial: object
    repairs: list = field(default_factory=list)

    def minimal(self):
        return [r for r in self.repairs if r.minimal]

    def to_json(self):
        return {
            "position": self.position,
            "winner": self.winner,
            "polynomial": str(self.polynomial),
            "repairs": [r.to_json() for r in self.repairs],
        }


@dataclass
class AnalysisReport:
    position: str
    winner: bool
    polynomial: object
    monomials: list = field(default_factory=list)
    repairs: list = field(default_factory=list)

    @property
    def counts(self):
        positional = sum(1 for m in self.monomials if m.positional)
        return {
            "monomials": len(self.monomials),
            "positional": positional,
            "nonpositional": len(self.monomials) - positional,
        }

    def to_json(self):
        return {
            "position": self.position,
            "winner": self.winner,
            "polynomial": str(self.polynomial),
            "monomials": [m.to_json() for m in self.monomials],
            "counts": self.counts,
            "repairs": [r.to_json() for r in self.repairs],
        }


def report(poly, game, v):
    """Decode each monomial of ``poly`` (the value at ``v``) into a profile."""
    monos = []
    for m in poly.sorted_monomials():
        prof = EdgeProfile.from_monomial(m)
        monos.append(MonomialReport(m, prof, classify(prof, game) == "positional"))
    return AnalysisReport(position=v, winner=not poly.is_zero(), polynomial=poly, monomials=monos)


def wins_with_subset(poly, allowed):
    """Some absorption-dominant strategy uses only edges from ``allowed``."""
    allowed = frozenset(allowed)
    return any(m.support() <= allowed for m in poly.monomials)


def solve_all(game, tracked=None, **opts):
    return solve_win0(game, make_pi_strat(game, tracked), **opts)


def finite_use_check(all_polys, s_profile, label, game):
    """Can a play consistent with the strategy use edge ``label`` infinitely often?

    ``s_profile`` must be an absorption-dominant winning profile with an
    infinite count for ``label``.  The positional monomial at the edge's
    target that absorbs the strategy value decides the answer.
    """
    if s_profile[label] != INF:
        raise PreconditionViolated(f"edge {label} occurs only finitely often in {s_profile}")
    w = game.edge(label).target
    value = s_profile.to_monomial()
    matches = [
        m
        for m in all_polys[w].sorted_monomials()
        if m.absorbs(value) and classify(EdgeProfile.from_monomial(m), game) == "positional"
    ]
    if len(matches) != 1:
        raise PreconditionViolated(
            f"finite-use precondition violated: {len(matches)} positional monomials at {w} "
            f"absorb {value} (expected exactly one)"
        )
    return INFINITE if label in matches[0].support() else BOUNDED


def lasso_finite_use(automaton, label):
    """Direct answer from a strategy automaton: does an ``label`` transition lie on a reachable cycle?"""
    g = automaton.graph()
    live = automaton.reachable()
    for t in automaton.transitions:
        if t.label != label or t.source not in live:
            continue
        if t.source == t.target or nx.has_path(g, t.target, t.source):
            return INFINITE
    return BOUNDED


# --- repairs -----------------------------------------------------------------


def repair_candidates(poly, game, spec):
    """Edge sets read off each monomial: added edges via X_e, removed edges via X̄_e."""
    added = {added_edge_label(u, w) for u, w in spec.addable}
    removed_duals = {dual_name(lb): lb for lb in spec.removable}
    out = []
    for m in poly.sorted_monomials():
        edges = set()
        for var in m.support():
            if var in added:
                edges.add(var)
            elif var in removed_duals:
                edges.add(removed_duals[var])
        out.append(frozenset(edges))
    return out


def _repair_order(edges):
    return (len(edges), sorted(edges))


def is_repair(game, spec, edges, v):
    repaired = repair_from_labels(game, edges, spec)
    return solve_boolean(repaired)[v] == 0


def compute_repairs(game, spec, v, posbool=True, mode="accelerated",
                    saturation_bound=DEFAULT_SATURATION_BOUND, max_steps=None):
    """Repairs of ``game`` within ``spec`` that let Player 0 win from ``v``.

    ``winner`` in the result refers to the unrepaired game.  Every extracted
    set is checked with the Boolean solver; a failed check is raised, never
    reported.
    """
    interp = make_pi_rep(game, spec, posbool=posbool)
    values = solve_win0(game, interp, mode=mode, saturation_bound=saturation_bound,
                        max_steps=max_steps)
    poly = values[v].poly
    sets = sorted(set(repair_candidates(poly, game, spec)), key=_repair_order)
    repairs = []
    for edges in sets:
        if not is_repair(game, spec, edges, v):
            raise RepairError(
                f"extracted set {{{', '.join(sorted(edges))}}} does not repair the game"
            )
        minimal = not any(other < edges for other in sets)
        repairs.append(Repair(edges, minimal, True))
    winner = solve_boolean(game)[v] == 0
    return RepairResult(position=v, winner=winner, polynomial=poly, repairs=repairs)


def brute_force_repairs(game, spec, v):
    """Inclusion-minimal repairs by trying every subset of E± (exponential)."""
    universe = sorted(spec.labels())
    winning = []
    for k in range(len(universe) + 1):
        for combo in itertools.combinations(universe, k):
            edges = frozenset(combo)
            if any(w <= edges for w in winning):
                continue
            if is_repair(game, spec, edges, v):
                winning.append(edges)
    return sorted(winning, key=_repair_order)
