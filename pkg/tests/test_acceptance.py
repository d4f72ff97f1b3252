"""Acceptance criteria, one test each.  The terminal summary prints a PASS/FAIL line per criterion."""

import io
import random
import time

import pytest

from buchiprov.analysis import (
    brute_force_repairs,
    compute_repairs,
    finite_use_check,
    lasso_finite_use,
    solve_all,
)
from buchiprov.cli import run
from buchiprov.fixpoint import solve_win0
from buchiprov.game import RepairSpec, repair_from_labels, solve_boolean
from buchiprov.interpretation import compose_with_target, make_pi_strat
from buchiprov.poly import INF, AbsorptivePoly, Monomial, poly_eval
from buchiprov.semirings import BOOLEAN, MinMaxSemiring
from buchiprov.strategies import (
    Absorption,
    EdgeProfile,
    absorbs,
    classify,
    dominant_profiles,
    dominant_sum,
    enumerate_winning,
    unfold_profile,
)

import games
from test_strategies import loop_then_leave

LOOP_GAME = str(games.DATA / "loop_or_leave.game")


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def oracle_corpus():
    """Criterion-3 corpus: 600 random games with |V| <= 4 and |E| <= 8."""
    return games.random_games(2024, 600, max_positions=4, max_edges=8)


@pytest.mark.criterion(1, "three-edge loop-or-leave game: golden polynomials, byte-exact, < 1 s")
def test_c1_loop_or_leave_golden():
    start = time.perf_counter()
    g = games.loop_or_leave()
    values = solve_win0(g, make_pi_strat(g))
    assert str(values["v"]) == "b*c^inf"
    assert str(values["w"]) == "c^inf"
    assert cli("solve", LOOP_GAME, "-p", "v") == (0, "b*c^inf\n", "")
    assert cli("solve", LOOP_GAME, "-p", "w")[1] == "c^inf\n"
    assert time.perf_counter() - start < 1.0


@pytest.mark.criterion(2, "three-edge loop-or-leave game: iteration trace vectors")
def test_c2_loop_or_leave_trace():
    _, _, err = cli("solve", LOOP_GAME, "-p", "v", "--trace")
    lines = err.splitlines()
    # first inner run, under Y = (1, 1)
    assert lines[0] == "Y0 = (1, 1)"
    assert lines[1:4] == ["  Z0 = (0, 0)", "  Z1 = (0, c)", "  Z2 = (b*c, c)"]
    outer = [ln for ln in lines if not ln.startswith(" ")]
    assert outer[:3] == ["Y0 = (1, 1)", "Y1 = (b*c, c)", "Y2 = (b*c^2, c^2)"]


@pytest.mark.criterion(3, "Sum-of-Strategies oracle equals the fixed point on 600 random games")
def test_c3_sum_of_strategies(oracle_corpus):
    start = time.perf_counter()
    checked = 0
    for g in oracle_corpus:
        pi = make_pi_strat(g)
        values = solve_win0(g, pi)
        for v in g.positions:
            assert dominant_sum(g, pi, v) == values[v], g.to_text()
            checked += 1
    assert len(oracle_corpus) >= 500 and checked >= 500
    assert time.perf_counter() - start < 300


@pytest.mark.criterion(4, "Boolean specialisation equals the attractor solver on 1000 games")
def test_c4_boolean_consistency():
    start = time.perf_counter()
    corpus = games.random_games(4, 1000, max_positions=6, max_edges=16)
    for g in corpus:
        values = solve_win0(g, make_pi_strat(g, []))
        win = solve_boolean(g)
        for v in g.positions:
            assert values[v].is_one() == (win[v] == 0)
            assert values[v].is_one() or values[v].is_zero()
    assert time.perf_counter() - start < 60


def _random_poly(rng):
    monos = []
    for _ in range(rng.randint(0, 4)):
        exps = {x: rng.choice([0, 1, 2, 3, INF]) for x in "abcde"}
        monos.append(Monomial(exps))
    return AbsorptivePoly(monos)


@pytest.mark.criterion(5, "10^4 randomized semiring-law checks, zero failures")
def test_c5_semiring_laws():
    rng = random.Random(5)
    laws = [
        ("commutative +", lambda p, q, r: p + q == q + p),
        ("commutative *", lambda p, q, r: p * q == q * p),
        ("associative +", lambda p, q, r: (p + q) + r == p + (q + r)),
        ("associative *", lambda p, q, r: (p * q) * r == p * (q * r)),
        ("distributive", lambda p, q, r: p * (q + r) == p * q + p * r),
        ("idempotent +", lambda p, q, r: p + p == p),
        ("absorption", lambda p, q, r: p + p * q == p),
        ("decreasing *", lambda p, q, r: (p * q) <= p),
        ("a * a^inf = a^inf", lambda p, q, r: p * p.inf_power() == p.inf_power()),
        ("(a+b)^inf", lambda p, q, r: (p + q).inf_power() == p.inf_power() + q.inf_power()),
        ("(a^inf)^inf", lambda p, q, r: p.inf_power().inf_power() == p.inf_power()),
    ]
    checks = 0
    failures = []
    while checks < 10_000:
        p, q, r = (_random_poly(rng) for _ in range(3))
        for name, law in laws:
            checks += 1
            if not law(p, q, r):
                failures.append((name, str(p), str(q), str(r)))
    assert failures == []


@pytest.mark.criterion(6, "evaluating the S∞[X] answer commutes with direct solving (0/1 and min-max)")
def test_c6_homomorphism_commutation():
    rng = random.Random(6)
    mm = MinMaxSemiring(["low", "mid", "high"])
    corpus = games.random_games(66, 200, max_positions=4, max_edges=8)
    for g in corpus:
        pi = make_pi_strat(g)
        symbolic = solve_win0(g, pi)
        for target, values in ((BOOLEAN, [0, 1]), (mm, list(mm.levels))):
            h = {lb: rng.choice(values) for lb in g.labels()}
            direct = solve_win0(g, compose_with_target(pi, h, target))
            for v in g.positions:
                assert poly_eval(symbolic[v], h, target) == direct[v], (g.to_text(), h)


@pytest.mark.criterion(7, "hierarchy witnesses: loop counts, dominated persistent, nonpositional dominant")
def test_c7_hierarchy_witnesses():
    # loop n times before leaving: n = 0 strictly absorbs every n >= 1
    best = EdgeProfile({"a": 0, "b": 1, "c": INF})
    for n in range(1, 50):
        assert absorbs(best, EdgeProfile({"a": n, "b": 1, "c": INF})) is Absorption.STRICT
        assert absorbs(best, unfold_profile(loop_then_leave(n))) is Absorption.STRICT
    # persistent S3 (a on one branch, loop b on the other) is absorbed by positional S2
    g = games.dominated_persistent()
    s2 = EdgeProfile({"p": 1, "q": 1, "r": 1, "b": INF})
    s3 = EdgeProfile({"p": 1, "q": 1, "r": 1, "a": 1, "b": INF, "d": INF})
    assert s3 in {e.profile for e in enumerate_winning(g, "v")}
    assert absorbs(s3, s2) is Absorption.ABSORBED
    assert classify(s2, g) == "positional"
    # two paths into the Player-0 choice: a nonpositional profile is dominant
    g = games.two_paths()
    dom = dominant_profiles(g, "r")
    mixed = [e.profile for e in dom if classify(e.profile, g) == "nonpositional"]
    assert mixed == [EdgeProfile({"b": 1, "c": 1, "g": 1, "e": 1, "f": 1, "h": 1, "m": INF})]


def _random_spec(rng, g):
    absent = [(u, w) for u in g.positions for w in g.positions if not g.has_edge(u, w)]
    labels = list(g.labels())
    for _ in range(20):
        k = rng.randint(1, 4)
        pool = [("+", p) for p in absent] + [("-", lb) for lb in labels]
        picks = rng.sample(pool, min(k, len(pool)))
        spec = RepairSpec(
            frozenset(p for s, p in picks if s == "+"), frozenset(p for s, p in picks if s == "-")
        )
        if not spec.violations(g):
            return spec
    return RepairSpec()


@pytest.mark.criterion(8, "repair extraction is sound and complete against brute force on 200 games")
def test_c8_repairs():
    start = time.perf_counter()
    rng = random.Random(8)
    corpus = games.random_games(88, 200, max_positions=5, max_edges=10)
    for g in corpus:
        spec = _random_spec(rng, g)
        v = rng.choice(g.positions)
        result = compute_repairs(g, spec, v)
        for r in result.repairs:
            assert solve_boolean(repair_from_labels(g, r.edges, spec))[v] == 0
        extracted = sorted((r.edges for r in result.repairs if r.minimal), key=sorted)
        assert extracted == sorted(brute_force_repairs(g, spec, v), key=sorted), g.to_text()
    assert time.perf_counter() - start < 300


@pytest.mark.criterion(9, "finite-use check agrees with lasso analysis on the criterion-3 corpus")
def test_c9_finite_use(oracle_corpus):
    checked = 0
    for g in oracle_corpus:
        polys = solve_all(g)
        for v in g.positions:
            for e in dominant_profiles(g, v):
                for lb in sorted(e.profile.infinite_labels()):
                    assert finite_use_check(polys, e.profile, lb, g) == lasso_finite_use(
                        e.representative, lb
                    )
                    checked += 1
    assert checked > 0
