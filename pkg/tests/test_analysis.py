import itertools

import pytest

from buchiprov.analysis import (
    BOUNDED,
    INFINITE,
    brute_force_repairs,
    compute_repairs,
    finite_use_check,
    lasso_finite_use,
    report,
    solve_all,
    wins_with_subset,
)
from buchiprov.errors import PreconditionViolated, RepairError
from buchiprov.game import BuchiGame, RepairSpec, apply_repair, solve_boolean
from buchiprov.poly import INF
from buchiprov.strategies import (
    EdgeProfile,
    dominant_profiles,
    is_winning,
    positional_automaton,
)

import games


def test_report_loop_or_leave():
    g = games.loop_or_leave()
    rep = report(solve_all(g)["v"], g, "v")
    assert rep.winner
    assert [str(m.monomial) for m in rep.monomials] == ["b*c^inf"]
    assert rep.counts == {"monomials": 1, "positional": 1, "nonpositional": 0}


def test_report_losing_position():
    g = BuchiGame.build([("v", 0, False), ("w", 0, True)], [("a", "v", "v"), ("c", "w", "w")])
    rep = report(solve_all(g)["v"], g, "v")
    assert not rep.winner
    assert rep.monomials == [] and rep.repairs == []
    assert rep.counts["monomials"] == 0


def test_report_four_classes_three_positional():
    g = games.two_paths_with_shortcut()
    rep = report(solve_all(g)["s"], g, "s")
    assert rep.counts == {"monomials": 4, "positional": 3, "nonpositional": 1}
    data = rep.to_json()
    assert set(data) == {"position", "winner", "polynomial", "monomials", "counts", "repairs"}
    assert all(set(m) >= {"profile", "positional"} for m in data["monomials"])


def test_reported_positional_strategies_are_winning():
    for g in games.random_games(41, 100):
        polys = solve_all(g)
        for v in g.positions:
            for m in report(polys[v], g, v).monomials:
                if not m.positional:
                    continue
                choice = {g.edge(lb).source: lb for lb in m.profile.support()
                          if g.owner[g.edge(lb).source] == 0}
                s = positional_automaton(g, v, choice)
                assert s is not None and is_winning(s)


def test_wins_with_subset_loop_or_leave():
    g = games.loop_or_leave()
    p = solve_all(g)["v"]
    assert wins_with_subset(p, {"b", "c"})
    assert not wins_with_subset(p, {"a", "c"})
    assert wins_with_subset(p, set(g.labels())) == (not p.is_zero())


def restricted_game(g, allowed):
    """Strategies may only use ``allowed``: Player 0 loses its other moves, and a
    Player-1 position with a forbidden move is abandoned to a losing sink."""
    edges = [("sink_loop", "sink", "sink")]
    for v in g.positions:
        out = g.out_edges(v)
        if g.owner[v] == 0:
            keep = [e for e in out if e.label in allowed]
        else:
            keep = out if all(e.label in allowed for e in out) else []
        edges += [(e.label, e.source, e.target) for e in keep]
        if not keep:
            edges.append((f"{v}__sink", v, "sink"))
    positions = [(v, g.owner[v], v in g.target) for v in g.positions] + [("sink", 0, False)]
    return BuchiGame.build(positions, edges)


def test_wins_with_subset_matches_restricted_game():
    for g in games.random_games(42, 40, max_positions=3, max_edges=6):
        polys = solve_all(g)
        labels = g.labels()
        for k in range(len(labels) + 1):
            for allowed in itertools.combinations(labels, k):
                win = solve_boolean(restricted_game(g, set(allowed)))
                for v in g.positions:
                    assert wins_with_subset(polys[v], allowed) == (win[v] == 0)


def test_finite_use_branch_then_stay():
    g = games.branch_then_stay()
    polys = solve_all(g)
    s = EdgeProfile({"g": INF, "k": INF, "m": INF})
    assert finite_use_check(polys, s, "k", g) == BOUNDED
    assert finite_use_check(polys, s, "m", g) == INFINITE
    assert finite_use_check(polys, s, "g", g) == INFINITE


def test_finite_use_single_loop():
    g = BuchiGame.build([("v", 0, True)], [("a", "v", "v")])
    assert finite_use_check(solve_all(g), EdgeProfile({"a": INF}), "a", g) == INFINITE


def test_finite_use_preconditions():
    g = games.branch_then_stay()
    polys = solve_all(g)
    with pytest.raises(PreconditionViolated):
        finite_use_check(polys, EdgeProfile({"k": 1, "m": INF}), "k", g)
    # a profile no positional strategy at w absorbs
    g2 = games.loop_or_leave()
    with pytest.raises(PreconditionViolated):
        finite_use_check(solve_all(g2), EdgeProfile({"a": INF, "b": INF}), "a", g2)


def test_finite_use_agrees_with_lasso_analysis():
    checked = 0
    for g in games.random_games(43, 150):
        polys = solve_all(g)
        for v in g.positions:
            for e in dominant_profiles(g, v):
                for lb in sorted(e.profile.infinite_labels()):
                    got = finite_use_check(polys, e.profile, lb, g)
                    assert got == lasso_finite_use(e.representative, lb)
                    checked += 1
    assert checked > 100


def test_repair_demo():
    g = games.repair_demo()
    result = compute_repairs(g, RepairSpec(frozenset(), {"a"}), "v")
    assert not result.winner
    assert [(sorted(r.edges), r.minimal, r.verified) for r in result.repairs] == [(["a"], True, True)]
    assert brute_force_repairs(g, RepairSpec(frozenset(), {"a"}), "v") == [frozenset({"a"})]


def test_no_repair_possible():
    g = games.repair_demo()
    result = compute_repairs(g, RepairSpec(), "v")
    assert result.repairs == []


def test_non_minimal_repair_alongside_minimal():
    g = games.repair_two_monomials()
    spec = RepairSpec({("v", "w")}, {"a", "b"})
    result = compute_repairs(g, spec, "v")
    got = [(sorted(r.edges), r.minimal) for r in result.repairs]
    assert got == [(["a"], True), (["a", "v__w"], False)]
    assert brute_force_repairs(g, spec, "v") == [frozenset({"a"})]


def test_winning_position_needs_no_repair():
    g = games.loop_or_leave()
    result = compute_repairs(g, RepairSpec(frozenset(), {"a"}), "v")
    assert result.winner
    assert [sorted(r.edges) for r in result.repairs if r.minimal] == [[]]


def test_repair_spec_errors():
    g = games.repair_demo()
    with pytest.raises(RepairError):
        compute_repairs(g, RepairSpec({("v", "w")}, frozenset()), "v")


@pytest.mark.parametrize("posbool", [True, False])
def test_repairs_sound_and_complete_small(posbool):
    for g in games.random_games(44, 60, max_positions=4, max_edges=7):
        labels = sorted(g.labels())
        absent = [(u, w) for u in g.positions for w in g.positions if not g.has_edge(u, w)]
        spec = RepairSpec(frozenset(absent[:2]), frozenset(labels[:1]))
        if spec.violations(g):
            continue
        v = g.positions[0]
        result = compute_repairs(g, spec, v, posbool=posbool)
        for r in result.repairs:
            repaired = apply_repair(
                g,
                add=[spec.pair_for_label(x) for x in r.edges if x not in spec.removable],
                remove=[x for x in r.edges if x in spec.removable],
            )
            assert solve_boolean(repaired)[v] == 0
        assert sorted(r.edges for r in result.repairs if r.minimal) == sorted(
            brute_force_repairs(g, spec, v)
        )
