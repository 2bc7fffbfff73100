"""Referee for the ordered-hypergraph building game.

The referee owns the ordered vertex sequence and the colored edge set, keeps
for every edge the length of the longest monochromatic shifted path ending at
it, and detects wins.  It is variant-agnostic: any increasing k-set is a legal
edge; strategy-side disciplines (basic sets, fixed arenas) live with the
strategies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

MODES = ("free", "append", "fixed")


class GameError(Exception):
    pass


class ParamError(GameError, ValueError):
    pass


class RuleError(GameError):
    """A move that the current mode or state forbids."""


@dataclass(frozen=True)
class GameParams:
    """k-uniformity, shift, colors, forbidden lengths, and the vertex regime.

    The shift ell is the number of fresh vertices each path edge introduces:
    ell=1 is the tight path, ell=k an ordered matching.  m[i] is the number of
    edges of the forbidden monochromatic path in color i+1.
    """

    k: int
    ell: int
    t: int
    m: tuple[int, ...]
    mode: str = "free"
    n_fixed: int | None = None
    vertex_budget: int = 10_000

    def __post_init__(self):
        if self.k < 2:
            raise ParamError("uniformity k must be >= 2")
        if not 1 <= self.ell <= self.k:
            raise ParamError("shift must satisfy 1 <= ell <= k")
        if self.t < 2:
            raise ParamError("need t >= 2 colors")
        m = tuple(int(x) for x in self.m)
        if len(m) != self.t:
            raise ParamError("need one forbidden length per color")
        if any(x < 1 for x in m):
            raise ParamError("forbidden lengths must be >= 1")
        object.__setattr__(self, "m", m)
        if self.mode not in MODES:
            raise ParamError(f"unknown mode {self.mode!r}")
        if self.mode == "fixed":
            if self.n_fixed is None or self.n_fixed < self.k:
                raise ParamError("fixed mode needs n_fixed >= k")
        elif self.n_fixed is not None:
            raise ParamError("n_fixed only applies to fixed mode")

    @classmethod
    def diagonal(cls, k, ell, m, t, **kw) -> "GameParams":
        return cls(k=k, ell=ell, t=t, m=(m,) * t, **kw)

    @property
    def h(self) -> int:
        return -(-self.k // self.ell)

    @property
    def s(self) -> int:
        return self.k - (self.h - 1) * self.ell

    @property
    def r_values(self) -> tuple[int, ...]:
        return tuple(self.k + self.ell * (mi - 1) for mi in self.m)

    @property
    def diagonal_m(self) -> int | None:
        return self.m[0] if len(set(self.m)) == 1 else None


@dataclass
class EdgeRec:
    vids: tuple[int, ...]
    color: int | None = None
    path_len: int = 0


class GameState:
    """Ordered vertices plus colored edges with longest-path bookkeeping.

    path_len of a colored edge always equals the length of the longest
    monochromatic shifted monotone path ending at that edge in the *current*
    hypergraph; coloring an edge relaxes its same-color successors, since an
    edge played left of existing ones can extend paths through them.
    """

    def __init__(self, params: GameParams):
        self.params = params
        self._order: list[int] = []
        self._pos: dict[int, int] = {}
        self._next_id = 1
        self.edges: list[EdgeRec] = []
        self._by_verts: dict[frozenset, int] = {}
        self._pending: int | None = None
        self.round = 0
        if params.mode == "fixed":
            for _ in range(params.n_fixed):
                self._add_vertex(len(self._order))

    # -- vertices --------------------------------------------------------------

    def _add_vertex(self, index: int) -> int:
        vid = self._next_id
        self._next_id += 1
        self._order.insert(index, vid)
        self._pos = {v: i for i, v in enumerate(self._order)}
        return vid

    def insert_vertex(self, position: int | None = None) -> int:
        """New vertex at the given order index (default: the right end)."""
        if self.params.mode == "fixed":
            raise RuleError("fixed mode pre-places all vertices")
        index = len(self._order) if position is None else position
        if not 0 <= index <= len(self._order):
            raise RuleError(f"position {position} out of range")
        if self.params.mode == "append" and index != len(self._order):
            raise RuleError("append mode only extends on the right")
        if len(self._order) >= self.params.vertex_budget:
            raise RuleError(f"vertex budget {self.params.vertex_budget} exhausted")
        return self._add_vertex(index)

    def vertices(self) -> tuple[int, ...]:
        return tuple(self._order)

    def num_vertices(self) -> int:
        return len(self._order)

    def position(self, vid: int) -> int:
        """1-based order position of a vertex."""
        return self._pos[vid] + 1

    def vertex_at(self, position: int) -> int:
        """Vertex id at a 1-based order position."""
        return self._order[position - 1]

    def sort_verts(self, vids) -> tuple[int, ...]:
        return tuple(sorted(vids, key=lambda v: self._pos[v]))

    # -- edges -----------------------------------------------------------------

    def play_edge(self, vids) -> int:
        """Record a pending move; returns the handle awaiting a color."""
        if self._pending is not None:
            raise RuleError("previous move still awaits a color")
        vids = tuple(vids)
        if len(vids) != self.params.k:
            raise RuleError(f"edge needs exactly k={self.params.k} vertices")
        if len(set(vids)) != len(vids):
            raise RuleError("edge vertices must be distinct")
        for v in vids:
            if v not in self._pos:
                raise RuleError(f"unknown vertex {v}")
        vids = self.sort_verts(vids)
        key = frozenset(vids)
        if key in self._by_verts:
            raise RuleError("edge already played")
        rec = EdgeRec(vids)
        self.edges.append(rec)
        self._by_verts[key] = len(self.edges) - 1
        self._pending = len(self.edges) - 1
        return self._pending

    def pending(self) -> tuple[int, ...] | None:
        if self._pending is None:
            return None
        return self.edges[self._pending].vids

    def has_edge(self, vids) -> bool:
        idx = self._by_verts.get(frozenset(vids))
        return idx is not None and self.edges[idx].color is not None

    def edge_color(self, vids) -> int | None:
        idx = self._by_verts.get(frozenset(vids))
        if idx is None:
            return None
        return self.edges[idx].color

    def precedes(self, e1: EdgeRec, e2: EdgeRec) -> bool:
        """Can e2 directly extend a shifted path ending at e1?"""
        k, ell = self.params.k, self.params.ell
        if ell < k:
            return e1.vids[ell:] == e2.vids[: k - ell]
        return self._pos[e1.vids[-1]] < self._pos[e2.vids[0]]

    def path_len_if(self, vids, color: int) -> int:
        """Path length a (pending or hypothetical) edge would get in this color."""
        probe = EdgeRec(self.sort_verts(vids), color)
        return 1 + max(
            (e.path_len for e in self.edges
             if e.color == color and self.precedes(e, probe)),
            default=0,
        )

    def assign_color(self, handle: int, color: int) -> None:
        if handle != self._pending:
            raise RuleError("handle is not the pending move")
        if not 1 <= color <= self.params.t:
            raise RuleError(f"color {color} out of range 1..{self.params.t}")
        rec = self.edges[handle]
        rec.color = color
        rec.path_len = 1 + max(
            (e.path_len for e in self.edges
             if e.color == color and e is not rec and self.precedes(e, rec)),
            default=0,
        )
        self._pending = None
        self.round += 1
        # relax successors: the new edge may sit left of existing ones
        work = [handle]
        while work:
            i = work.pop()
            ei = self.edges[i]
            for j, ej in enumerate(self.edges):
                if ej.color != ei.color or j == i:
                    continue
                if self.precedes(ei, ej) and ei.path_len + 1 > ej.path_len:
                    ej.path_len = ei.path_len + 1
                    work.append(j)

    # -- wins --------------------------------------------------------------------

    def check_win(self):
        """(color, witness edge tuples) when some color completes its path."""
        m = self.params.m
        best = None
        for idx, e in enumerate(self.edges):
            if e.color is None:
                continue
            if e.path_len >= m[e.color - 1]:
                if best is None or e.path_len > self.edges[best].path_len:
                    best = idx
        if best is None:
            return None
        e = self.edges[best]
        color = e.color
        chain = [e]
        while chain[0].path_len > 1:
            head = chain[0]
            preds = [
                p for p in self.edges
                if p.color == color
                and p.path_len == head.path_len - 1
                and self.precedes(p, head)
            ]
            chain.insert(0, min(preds, key=lambda p: p.vids))
        need = m[color - 1]
        return color, tuple(p.vids for p in chain[-need:])

    # -- copies ---------------------------------------------------------------------

    def copy(self) -> "GameState":
        dup = object.__new__(GameState)
        dup.params = self.params
        dup._order = list(self._order)
        dup._pos = dict(self._pos)
        dup._next_id = self._next_id
        dup.edges = [EdgeRec(e.vids, e.color, e.path_len) for e in self.edges]
        dup._by_verts = dict(self._by_verts)
        dup._pending = self._pending
        dup.round = self.round
        return dup


# -- transcripts -------------------------------------------------------------------


@dataclass
class Transcript:
    """Append-only move log; replaying reproduces the final state bit for bit."""

    params: GameParams
    events: list[dict] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add_insert(self, vid: int, position: int) -> None:
        self.events.append({"insert": [vid, position]})

    def add_move(self, rnd: int, vids, color: int, path_len: int) -> None:
        self.events.append(
            {"round": rnd, "edge": list(vids), "color": color, "path_len": path_len}
        )

    def header(self) -> dict:
        p = self.params
        head = {"k": p.k, "l": p.ell, "t": p.t, "m": list(p.m), "mode": p.mode}
        if p.n_fixed is not None:
            head["n"] = p.n_fixed
        if self.meta:
            head["meta"] = self.meta
        return head

    def dumps(self) -> str:
        lines = [json.dumps(self.header())]
        lines.extend(json.dumps(ev) for ev in self.events)
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "Transcript":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise GameError("empty transcript")
        head = json.loads(lines[0])
        params = GameParams(
            k=head["k"],
            ell=head["l"],
            t=head["t"],
            m=tuple(head["m"]),
            mode=head["mode"],
            n_fixed=head.get("n"),
        )
        tr = cls(params, meta=head.get("meta", {}))
        tr.events = [json.loads(ln) for ln in lines[1:]]
        return tr

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path) -> "Transcript":
        with open(path) as fh:
            return cls.loads(fh.read())

    def replay(self, verify: bool = True, on_move=None) -> GameState:
        state = GameState(self.params)
        for ev in self.events:
            if "insert" in ev:
                vid, position = ev["insert"]
                got = state.insert_vertex(position)
                if verify and got != vid:
                    raise GameError(f"replay diverged: vertex {got} != {vid}")
                continue
            handle = state.play_edge(ev["edge"])
            state.assign_color(handle, ev["color"])
            if verify:
                rec = state.edges[handle]
                if state.round != ev["round"] or rec.path_len != ev["path_len"]:
                    raise GameError(
                        f"replay diverged at round {ev['round']}: "
                        f"path_len {rec.path_len} != {ev['path_len']}"
                    )
            if on_move is not None:
                on_move(state)
        return state


# -- match driver --------------------------------------------------------------------


@dataclass
class MatchResult:
    transcript: Transcript
    winner: str | None
    rounds: int
    win_color: int | None
    witness: tuple | None
    stop_reason: str

    @property
    def builder_won(self) -> bool:
        return self.winner == "builder"


def run_match(params, builder, painter, max_rounds, on_move=None) -> MatchResult:
    """Alternate builder moves and painter colors until a win or the budget.

    Vertex insertions do not consume rounds; rounds count colored edges.
    `on_move(state)` fires after every colored move (used by audits).
    """
    state = GameState(params)
    tr = Transcript(params)
    builder.start(state)
    painter.start(state)
    stop = "budget"
    while True:
        win = state.check_win()
        if win:
            stop = "win"
            break
        if state.round >= max_rounds:
            break
        move = builder.next_move(state)
        if move is None:
            stop = "builder-stopped"
            break
        kind, payload = move
        if kind == "insert":
            vid = state.insert_vertex(payload)
            tr.add_insert(vid, payload if payload is not None else state.position(vid) - 1)
            continue
        if kind != "edge":
            raise GameError(f"unknown move kind {kind!r}")
        handle = state.play_edge(payload)
        color = painter.color(state, state.pending())
        state.assign_color(handle, color)
        rec = state.edges[handle]
        tr.add_move(state.round, rec.vids, rec.color, rec.path_len)
        if on_move is not None:
            on_move(state)
    win = state.check_win()
    delegated = getattr(painter, "delegated_round", None)
    if delegated is not None:
        tr.meta["painter_delegated_round"] = delegated
    return MatchResult(
        transcript=tr,
        winner="builder" if win else None,
        rounds=state.round,
        win_color=win[0] if win else None,
        witness=win[1] if win else None,
        stop_reason=stop,
    )
