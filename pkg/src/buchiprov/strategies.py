"""Finite strategy representations, edge profiles and the Sum-of-Strategies oracle.

A strategy automaton is a finite graph whose unfolding from the root is the
strategy tree.  Enumerated automata are trees of height at most |V| in which
every leaf repeats the position of an ancestor and loops back to it, so the
strategy replays the ancestor's subtree from then on.
"""

import itertools
from dataclasses import dataclass
from enum import Enum

import networkx as nx

from .errors import BudgetExceededError
from .poly import INF, AbsorptivePoly, Monomial, format_exponent

DEFAULT_NODE_BUDGET = 10**5


class EdgeProfile:
    """Occurrence count #e(S) in ℕ ∪ {∞} for each edge label; absent labels count 0."""

    __slots__ = ("_counts", "_key")

    def __init__(self, counts=()):
        if isinstance(counts, dict):
            counts = counts.items()
        self._counts = {lb: c for lb, c in counts if c}
        self._key = tuple(sorted(self._counts.items()))

    @classmethod
    def from_monomial(cls, m):
        return cls(m.items())

    def __getitem__(self, label):
        return self._counts.get(label, 0)

    def items(self):
        return self._key

    def support(self):
        return frozenset(self._counts)

    def infinite_labels(self):
        return frozenset(lb for lb, c in self._counts.items() if c == INF)

    def to_monomial(self):
        return Monomial(self._key)

    def __eq__(self, other):
        return isinstance(other, EdgeProfile) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def to_json(self):
        return {lb: (format_exponent(c) if c == INF else c) for lb, c in self._key}

    def __str__(self):
        return "(" + ", ".join(f"{lb}:{format_exponent(c)}" for lb, c in self._key) + ")"

    def __repr__(self):
        return f"EdgeProfile{self}"


class Absorption(str, Enum):
    STRICT = "strict"
    EQUIVALENT = "equivalent"
    INCOMPARABLE = "incomparable"
    ABSORBED = "absorbed"


def absorbs(p1, p2):
    """Compare two profiles under absorption: does ``p1`` absorb ``p2``?"""
    labels = p1.support() | p2.support()
    le = all(p1[lb] <= p2[lb] for lb in labels)
    ge = all(p1[lb] >= p2[lb] for lb in labels)
    if le and ge:
        return Absorption.EQUIVALENT
    if le:
        return Absorption.STRICT
    if ge:
        return Absorption.ABSORBED
    return Absorption.INCOMPARABLE


@dataclass(frozen=True)
class Transition:
    source: int
    label: str
    target: int
    back: bool = False


@dataclass(frozen=True)
class StrategyAutomaton:
    """Nodes are numbered; ``positions[i]`` is the game position of node i; node 0 is the root."""

    game: object
    positions: tuple
    transitions: tuple

    @property
    def root(self):
        return 0

    def out(self, node):
        return [t for t in self.transitions if t.source == node]

    def graph(self):
        g = nx.MultiDiGraph()
        g.add_nodes_from(range(len(self.positions)))
        for t in self.transitions:
            g.add_edge(t.source, t.target, label=t.label)
        return g

    def reachable(self):
        return nx.descendants(self.graph(), 0) | {0}

    def tree_violations(self):
        """Check the tree-with-back-edges shape and the strategy conditions."""
        game = self.game
        out = []
        parent = {}
        for t in self.transitions:
            e = game.edge(t.label) if game.has_label(t.label) else None
            if e is None or e.source != self.positions[t.source] or e.target != self.positions[t.target]:
                out.append(f"transition {t} does not follow a game edge")
            if not t.back:
                if t.target in parent:
                    out.append(f"node {t.target} has two tree parents")
                parent[t.target] = t.source
        for t in self.transitions:
            if t.back:
                anc = t.source
                ok = False
                while anc in parent or anc == 0:
                    if anc == t.target:
                        ok = True
                        break
                    if anc == 0:
                        break
                    anc = parent[anc]
                if not ok:
                    out.append(f"back-edge {t} does not point to an ancestor")
        depth = {0: 0}
        for node in sorted(parent):
            d, cur = 0, node
            while cur != 0:
                cur = parent[cur]
                d += 1
            depth[node] = d
        if depth and max(depth.values()) + 1 > len(game.positions):
            out.append("tree height exceeds |V|")
        for node, pos in enumerate(self.positions):
            moves = {t.label for t in self.out(node)}
            if game.owner[pos] == 0 and len(moves) != 1:
                out.append(f"node {node} ({pos}) of Player 0 does not make a unique choice")
            if game.owner[pos] == 1 and moves != {e.label for e in game.out_edges(pos)}:
                out.append(f"node {node} ({pos}) of Player 1 does not allow every move")
        return out

    def to_dot(self, name="strategy"):
        lines = [f"digraph {name} {{"]
        for i, pos in enumerate(self.positions):
            shape = "doublecircle" if pos in self.game.target else "circle"
            lines.append(f'  n{i} [label="{pos}", shape={shape}];')
        for t in self.transitions:
            style = ", style=dashed" if t.back else ""
            lines.append(f'  n{t.source} -> n{t.target} [label="{t.label}"{style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _cyclic_nodes(g):
    out = set()
    for comp in nx.strongly_connected_components(g):
        if len(comp) > 1:
            out |= comp
        else:
            (n,) = comp
            if g.has_edge(n, n):
                out.add(n)
    return out


def unfold_profile(s):
    """Edge occurrence counts of the infinite tree unfolded from ``s``."""
    g = s.graph()
    live = s.reachable()
    g = g.subgraph(live)
    infinite = set()
    for n in _cyclic_nodes(g):
        infinite |= nx.descendants(g, n) | {n}
    # finite part is a DAG: count root paths by topological order
    paths = {}
    finite = g.subgraph(live - infinite)
    for node in nx.topological_sort(finite):
        if node == 0:
            paths[node] = 1
        else:
            paths[node] = sum(paths[u] for u, _ in finite.in_edges(node) if u in paths)
    counts = {}
    for t in s.transitions:
        if t.source not in live:
            continue
        c = INF if t.source in infinite else paths.get(t.source, 0)
        counts[t.label] = counts.get(t.label, 0) + c
    return EdgeProfile(counts)


def is_winning(s):
    """Every reachable cycle of the automaton passes through a target position."""
    g = s.graph().subgraph(s.reachable())
    avoid = [n for n in g.nodes if s.positions[n] not in s.game.target]
    return nx.is_directed_acyclic_graph(g.subgraph(avoid))


def classify(profile, game):
    """``positional`` iff each Player-0 source in the support uses exactly one edge."""
    chosen = {}
    for label in profile.support():
        e = game.edge(label)
        if game.owner[e.source] == 0:
            chosen.setdefault(e.source, set()).add(label)
    if all(len(v) == 1 for v in chosen.values()):
        return "positional"
    return "nonpositional"


def is_persistent(s):
    """Along every root-to-leaf path each Player-0 position makes a single choice."""
    game = s.game
    children = {}
    for t in s.transitions:
        if not t.back:
            children.setdefault(t.source, []).append(t)
    choice_of = {}
    for t in s.transitions:
        choice_of.setdefault(t.source, set()).add(t.label)

    def walk(node, seen):
        pos = s.positions[node]
        if game.owner[pos] == 0:
            picks = choice_of.get(node, set())
            if len(picks) != 1:
                return False
            (pick,) = picks
            if seen.get(pos, pick) != pick:
                return False
            seen = dict(seen)
            seen[pos] = pick
        return all(walk(t.target, seen) for t in children.get(node, ()))

    return walk(0, {})


# --- enumeration -------------------------------------------------------------


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def spend(self, n=1):
        self.used += n
        if self.used > self.limit:
            raise BudgetExceededError(
                f"strategy enumeration exceeded its budget of {self.limit} nodes; "
                "use the fixpoint solver for larger games"
            )


def _subtrees(game, pos, path, budget):
    """All persistence-closed subtrees rooted at ``pos`` below ancestors ``path``.

    A subtree is (position, [(label, child)]) where child is a subtree or an
    int naming the depth of the ancestor a back-edge returns to.
    """
    budget.spend()
    if pos in path:
        return [path.index(pos)]
    path = path + (pos,)
    edges = game.out_edges(pos)
    if game.owner[pos] == 0:
        out = []
        for e in sorted(edges, key=lambda e: e.label):
            for child in _subtrees(game, e.target, path, budget):
                out.append((pos, ((e.label, child),)))
        return out
    options = [
        [(e.label, child) for child in _subtrees(game, e.target, path, budget)]
        for e in sorted(edges, key=lambda e: e.label)
    ]
    out = []
    for combo in itertools.product(*options):
        budget.spend()
        out.append((pos, tuple(combo)))
    return out


def _to_automaton(game, tree):
    positions = []
    transitions = []

    def build(sub, ancestors):
        node = len(positions)
        positions.append(sub[0])
        ancestors = ancestors + (node,)
        for label, child in sub[1]:
            if isinstance(child, int):
                transitions.append(Transition(node, label, ancestors[child], back=True))
            else:
                c = build(child, ancestors)
                transitions.append(Transition(node, label, c))
        return node

    build(tree, ())
    return StrategyAutomaton(game, tuple(positions), tuple(transitions))


def enumerate_strategies(game, v, budget=DEFAULT_NODE_BUDGET):
    """Every persistence-closed strategy automaton from ``v`` (winning or not)."""
    b = _Budget(budget)
    for tree in _subtrees(game, v, (), b):
        yield _to_automaton(game, tree)


@dataclass(frozen=True)
class EnumeratedProfile:
    profile: EdgeProfile
    representative: StrategyAutomaton
    multiplicity: int


def enumerate_winning(game, v, budget=DEFAULT_NODE_BUDGET):
    """Winning strategy automata from ``v`` grouped by edge profile.

    Groups come out in canonical monomial order of their profiles; the
    representative is the first automaton met in depth-first order.
    """
    groups = {}
    for s in enumerate_strategies(game, v, budget):
        if not is_winning(s):
            continue
        prof = unfold_profile(s)
        if prof in groups:
            first, count = groups[prof]
            groups[prof] = (first, count + 1)
        else:
            groups[prof] = (s, 1)
    ordered = sorted(groups.items(), key=lambda kv: kv[0].to_monomial().sort_key())
    return [EnumeratedProfile(p, s, n) for p, (s, n) in ordered]


def strategy_value(profile, interp):
    """Product of the edge values raised to their occurrence counts."""
    sr = interp.semiring
    value = sr.one
    for label, count in profile.items():
        value = sr.mul(value, sr.power(interp.label_value(label), count))
    return value


def dominant_sum(game, interp, v, budget=DEFAULT_NODE_BUDGET):
    """Semiring sum of the values of all enumerated winning strategies from ``v``.

    Absorption removes the dominated values, so this is the Sum-of-Strategies
    side of the fixpoint computation.
    """
    sr = interp.semiring
    total = sr.zero
    for entry in enumerate_winning(game, v, budget):
        total = sr.add(total, strategy_value(entry.profile, interp))
    return total


def dominant_profiles(game, v, budget=DEFAULT_NODE_BUDGET):
    """Enumerated winning profiles that no other winning profile strictly absorbs."""
    entries = enumerate_winning(game, v, budget)
    out = []
    for e in entries:
        if not any(absorbs(o.profile, e.profile) is Absorption.STRICT for o in entries):
            out.append(e)
    return out


def positional_automaton(game, v, choice):
    """Automaton of the positional strategy ``choice`` (Player-0 position -> label) from ``v``.

    Returns None if the strategy leaves the domain of ``choice``.
    """
    positions = []
    index = {}
    transitions = []
    stack = [v]
    index[v] = 0
    positions.append(v)
    while stack:
        pos = stack.pop()
        if game.owner[pos] == 0:
            if pos not in choice:
                return None
            edges = [game.edge(choice[pos])]
        else:
            edges = list(game.out_edges(pos))
        for e in edges:
            if e.target not in index:
                index[e.target] = len(positions)
                positions.append(e.target)
                stack.append(e.target)
            transitions.append(Transition(index[pos], e.label, index[e.target]))
    return StrategyAutomaton(game, tuple(positions), tuple(transitions))


def profile_to_poly(profile):
    return AbsorptivePoly([profile.to_monomial()])
