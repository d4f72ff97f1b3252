"""Büchi games: model, text/JSON formats, validation, repairs and a classical solver.

Text format, one directive per line, ``#`` starts a comment::

    position v 0
    position w 0 target
    edge a v v
    edge b v w
    edge c w w
"""

import json
import re
from dataclasses import dataclass, field

from .errors import InvalidGameError, ParseError, RepairError

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def added_edge_label(u, w):
    return f"{u}__{w}"


@dataclass(frozen=True)
class Edge:
    label: str
    source: str
    target: str

    @property
    def pair(self):
        return (self.source, self.target)


@dataclass(frozen=True)
class Violation:
    kind: str
    subject: str
    detail: str = ""

    def __str__(self):
        text = f"{self.kind}: {self.subject}"
        return f"{text} ({self.detail})" if self.detail else text


@dataclass(frozen=True, eq=False)
class BuchiGame:
    """G = (V, V0, V1, E, F) with uniquely labelled edges.

    ``positions`` keeps declaration order, which is also the order used for
    vectors in traces and reports.
    """

    positions: tuple
    owner: dict
    target: frozenset
    edges: tuple
    _by_label: dict = field(init=False, repr=False)
    _succ: dict = field(init=False, repr=False)
    _pairs: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "positions", tuple(self.positions))
        object.__setattr__(self, "owner", dict(self.owner))
        object.__setattr__(self, "target", frozenset(self.target))
        object.__setattr__(self, "edges", tuple(self.edges))
        by_label = {}
        succ = {v: [] for v in self.positions}
        pairs = {}
        for e in self.edges:
            by_label.setdefault(e.label, e)
            if e.source in succ:
                succ[e.source].append(e)
            pairs.setdefault(e.pair, e)
        object.__setattr__(self, "_by_label", by_label)
        object.__setattr__(self, "_succ", {v: tuple(es) for v, es in succ.items()})
        object.__setattr__(self, "_pairs", pairs)

    @classmethod
    def build(cls, positions, edges, validate=True):
        """``positions``: iterable of (name, owner, is_target); ``edges``: (label, from, to)."""
        positions = list(positions)
        game = cls(
            positions=[p[0] for p in positions],
            owner={p[0]: p[1] for p in positions},
            target=[p[0] for p in positions if p[2]],
            edges=[Edge(*e) for e in edges],
        )
        if validate:
            game.check()
        return game

    # structural queries

    def edge(self, label):
        return self._by_label[label]

    def has_label(self, label):
        return label in self._by_label

    def edge_between(self, u, w):
        return self._pairs.get((u, w))

    def has_edge(self, u, w):
        return (u, w) in self._pairs

    def out_edges(self, v):
        return self._succ.get(v, ())

    def successors(self, v):
        return tuple(e.target for e in self._succ.get(v, ()))

    def labels(self):
        return tuple(e.label for e in self.edges)

    def is_player0(self, v):
        return self.owner[v] == 0

    def player_positions(self, player):
        return frozenset(v for v in self.positions if self.owner[v] == player)

    def index(self, v):
        return self.positions.index(v)

    def __contains__(self, v):
        return v in self.owner

    def __eq__(self, other):
        if not isinstance(other, BuchiGame):
            return NotImplemented
        return (
            self.positions == other.positions
            and self.owner == other.owner
            and self.target == other.target
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.positions, self.target, self.edges))

    def same_structure(self, other):
        """Equality up to declaration order."""
        return (
            set(self.positions) == set(other.positions)
            and self.owner == other.owner
            and self.target == other.target
            and set(self.edges) == set(other.edges)
        )

    def validate(self):
        return validate(self)

    def check(self):
        violations = validate(self)
        if violations:
            raise InvalidGameError(violations)
        return self

    def with_edges(self, edges):
        return BuchiGame(self.positions, self.owner, self.target, tuple(edges))

    def to_text(self):
        return serialize_game(self)

    def to_json(self):
        return {
            "positions": [
                {"name": v, "owner": self.owner[v], "target": v in self.target}
                for v in self.positions
            ],
            "edges": [{"label": e.label, "from": e.source, "to": e.target} for e in self.edges],
        }

    @classmethod
    def from_json(cls, data, validate=True):
        return cls.build(
            [(p["name"], p["owner"], bool(p.get("target", False))) for p in data["positions"]],
            [(e["label"], e["from"], e["to"]) for e in data["edges"]],
            validate=validate,
        )


def validate(game):
    """Return the list of model violations (empty when the game is valid)."""
    out = []
    seen = set()
    for v in game.positions:
        if v in seen:
            out.append(Violation("duplicate position", v))
        seen.add(v)
        owner = game.owner.get(v)
        if owner is None:
            out.append(Violation("owner missing", v))
        elif owner not in (0, 1):
            out.append(Violation("owner missing", v, f"owner {owner!r} is not 0 or 1"))
    for v in game.owner:
        if v not in seen:
            out.append(Violation("unknown position", v, "owner given for undeclared position"))
    for v in game.target:
        if v not in seen:
            out.append(Violation("unknown position", v, "target position is not declared"))
    labels = set()
    pairs = set()
    for e in game.edges:
        if e.label in labels:
            out.append(Violation("duplicate label", e.label))
        labels.add(e.label)
        for end in (e.source, e.target):
            if end not in seen:
                out.append(Violation("unknown position", end, f"edge {e.label}"))
        if e.pair in pairs:
            out.append(Violation("multi-edge", e.label, f"second edge {e.source}->{e.target}"))
        pairs.add(e.pair)
    for v in game.positions:
        if not game.out_edges(v):
            out.append(Violation("vE empty", v, "position has no outgoing edge"))
    return out


def parse_game(text, validate_game=True):
    """Parse the line-oriented game format.  Errors carry line and column."""
    positions = []
    declared = {}
    edges = []
    labels = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        tokens = []
        for m in re.finditer(r"\S+", line):
            tokens.append((m.group(), m.start() + 1))
        kind, col = tokens[0]
        if kind == "position":
            if len(tokens) not in (3, 4):
                raise ParseError("expected 'position <name> <0|1> [target]'", lineno, col)
            name, ncol = tokens[1]
            if not _NAME_RE.match(name):
                raise ParseError(f"bad position name {name!r}", lineno, ncol)
            if name in declared:
                raise ParseError(f"duplicate position {name!r}", lineno, ncol)
            owner, ocol = tokens[2]
            if owner not in ("0", "1"):
                raise ParseError(f"owner must be 0 or 1, got {owner!r}", lineno, ocol)
            is_target = False
            if len(tokens) == 4:
                flag, fcol = tokens[3]
                if flag != "target":
                    raise ParseError(f"expected 'target', got {flag!r}", lineno, fcol)
                is_target = True
            declared[name] = lineno
            positions.append((name, int(owner), is_target))
        elif kind == "edge":
            if len(tokens) != 4:
                raise ParseError("expected 'edge <label> <from> <to>'", lineno, col)
            (label, lcol), (src, scol), (dst, dcol) = tokens[1:]
            if not _NAME_RE.match(label):
                raise ParseError(f"bad edge label {label!r}", lineno, lcol)
            if label in labels:
                raise ParseError(
                    f"duplicate label {label!r} (first used on line {labels[label]})", lineno, lcol
                )
            labels[label] = lineno
            edges.append((label, src, dst, lineno, scol, dcol))
        else:
            raise ParseError(f"unknown directive {kind!r}", lineno, col)
    if not positions:
        raise ParseError("no positions")
    for label, src, dst, lineno, scol, dcol in edges:
        if src not in declared:
            raise ParseError(f"unknown position {src!r} in edge {label}", lineno, scol)
        if dst not in declared:
            raise ParseError(f"unknown position {dst!r} in edge {label}", lineno, dcol)
    return BuchiGame.build(positions, [e[:3] for e in edges], validate=validate_game)


def serialize_game(game):
    lines = []
    for v in game.positions:
        suffix = " target" if v in game.target else ""
        lines.append(f"position {v} {game.owner[v]}{suffix}")
    for e in game.edges:
        lines.append(f"edge {e.label} {e.source} {e.target}")
    return "\n".join(lines) + "\n"


def load_game(path):
    """Read a game from a ``.json`` file or the text format."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if str(path).endswith(".json"):
        return BuchiGame.from_json(json.loads(text))
    return parse_game(text)


# --- classical solving -------------------------------------------------------


def attractor(game, target, player, arena=None):
    """Positions of ``arena`` from which ``player`` can force a visit to ``target``.

    A position whose owner has no move inside the arena counts as a loss for
    that owner (the vacuous case of the universal condition).
    """
    arena = set(game.positions) if arena is None else set(arena)
    attr = set(target) & arena
    preds = {v: [] for v in arena}
    remaining = {}
    for v in arena:
        succ = [w for w in game.successors(v) if w in arena]
        remaining[v] = len(succ)
        for w in succ:
            preds[w].append(v)
    queue = list(attr)
    for v in arena:
        if v not in attr and remaining[v] == 0 and game.owner[v] != player:
            attr.add(v)
            queue.append(v)
    while queue:
        w = queue.pop()
        for u in preds[w]:
            if u in attr:
                continue
            if game.owner[u] == player:
                attr.add(u)
                queue.append(u)
            else:
                remaining[u] -= 1
                if remaining[u] == 0:
                    attr.add(u)
                    queue.append(u)
    return attr


def solve_boolean(game):
    """Winning regions for the Büchi objective F, by repeated attractors.

    Returns a dict position -> winner (0 or 1).
    """
    arena = set(game.positions)
    lost = set()
    while True:
        reach = attractor(game, game.target & arena, 0, arena)
        avoid = arena - reach
        if not avoid:
            break
        trap = attractor(game, avoid, 1, arena)
        lost |= trap
        arena -= trap
    return {v: (1 if v in lost else 0) for v in game.positions}


def winning_region(game, player=0):
    sol = solve_boolean(game)
    return frozenset(v for v, p in sol.items() if p == player)


# --- repairs -------------------------------------------------------------


@dataclass(frozen=True)
class RepairSpec:
    """E+ (absent position pairs that may be added) and E- (labels that may be removed)."""

    addable: frozenset = frozenset()
    removable: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "addable", frozenset(tuple(p) for p in self.addable))
        object.__setattr__(self, "removable", frozenset(self.removable))

    def violations(self, game):
        out = []
        for u, w in sorted(self.addable):
            if u not in game or w not in game:
                out.append(f"addable pair {u}:{w} mentions an unknown position")
            elif game.has_edge(u, w):
                out.append(f"addable pair {u}:{w} is already an edge")
            elif game.has_label(added_edge_label(u, w)):
                out.append(f"label {added_edge_label(u, w)} for added pair {u}:{w} is taken")
        for label in sorted(self.removable):
            if not game.has_label(label):
                out.append(f"removable label {label!r} is not an edge")
        for v in game.positions:
            out_labels = {e.label for e in game.out_edges(v)}
            if out_labels and out_labels <= self.removable:
                out.append(f"removing every edge of {v} would leave it without moves")
        return out

    def check(self, game):
        problems = self.violations(game)
        if problems:
            raise RepairError("; ".join(problems))
        return self

    def labels(self):
        """Labels of every edge in E±, added pairs under their synthesized names."""
        return frozenset(self.removable) | {added_edge_label(u, w) for u, w in self.addable}

    def pair_for_label(self, label):
        for u, w in self.addable:
            if added_edge_label(u, w) == label:
                return (u, w)
        return None


def apply_repair(game, add=(), remove=(), spec=None):
    """Return ``game`` with ``add`` pairs inserted and ``remove`` labels deleted."""
    add = {tuple(p) for p in add}
    remove = set(remove)
    if spec is not None:
        outside = sorted(f"{u}:{w}" for u, w in add - spec.addable)
        outside += sorted(remove - spec.removable)
        if outside:
            raise RepairError("repair outside spec: " + ", ".join(outside))
    for u, w in sorted(add):
        if u not in game or w not in game:
            raise RepairError(f"cannot add {u}:{w}: unknown position")
        if game.has_edge(u, w):
            raise RepairError(f"cannot add {u}:{w}: edge already present")
    for label in sorted(remove):
        if not game.has_label(label):
            raise RepairError(f"cannot remove {label!r}: no such edge")
    edges = [e for e in game.edges if e.label not in remove]
    taken = {e.label for e in edges}
    for u, w in sorted(add):
        label = added_edge_label(u, w)
        if label in taken:
            raise RepairError(f"synthesized label {label!r} collides with an existing edge")
        edges.append(Edge(label, u, w))
    repaired = game.with_edges(edges)
    empty = [v for v in repaired.positions if not repaired.out_edges(v)]
    if empty:
        raise RepairError("repair leaves positions without moves: " + ", ".join(empty))
    return repaired


def repair_from_labels(game, labels, spec):
    """Apply a repair given as a set of E± labels."""
    add = []
    remove = []
    for label in labels:
        if label in spec.removable:
            remove.append(label)
        else:
            pair = spec.pair_for_label(label)
            if pair is None:
                raise RepairError(f"{label!r} is not in E+ or E-")
            add.append(pair)
    return apply_repair(game, add, remove, spec)


# --- DOT export ------------------------------------------------------------


def game_to_dot(game, name="game"):
    lines = [f"digraph {name} {{"]
    for v in game.positions:
        shape = "circle" if game.owner[v] == 0 else "box"
        extra = ", peripheries=2" if v in game.target else ""
        lines.append(f'  "{v}" [shape={shape}{extra}];')
    for e in game.edges:
        lines.append(f'  "{e.source}" -> "{e.target}" [label="{e.label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
