"""Painter strategies.

The survival strategies name vertices with pairwise-incomparable hierarchy
elements and derive a label for every relevant vertex set so that along any
monochromatic shifted path the chain height of the edge labels strictly
increases; the color of an edge is simply the chain of its label.

Free-insertion play draws names from a maximum antichain of Q_h.  When the
vertex order is known in advance (fixed arenas, append-only play, and the
off-line witness coloring) all of Q_h serves, consumed in linear-extension
order with each element reused on ell consecutive vertices and the first
s - 1 vertices left unnamed.

On name exhaustion a strategy reports the round and hands coloring over to
the greedy baseline so harnesses can keep playing past the guarantee.
"""

from __future__ import annotations

import itertools
import random

from .bounds import middle_level_vectors
from .game import GameParams, GameState
from .posets import DEFAULT_BUDGET, max_antichain
from .builders import StrategyError, hierarchy_for


class SupplyError(StrategyError):
    """A naming supply was asked for more elements than it has."""


# -- baselines ------------------------------------------------------------------


class PainterRandom:
    """Uniform colors from a seeded generator."""

    def __init__(self, seed: int):
        self.seed = seed
        self.rng = None

    def start(self, state: GameState) -> None:
        self.rng = random.Random(self.seed)

    def color(self, state: GameState, vids) -> int:
        return self.rng.randint(1, state.params.t)


class PainterGreedy:
    """Color minimizing the new edge's path length; ties to the lowest color."""

    def start(self, state: GameState) -> None:
        pass

    def color(self, state: GameState, vids) -> int:
        t = state.params.t
        return min(range(1, t + 1), key=lambda c: (state.path_len_if(vids, c), c))


class PainterSpite:
    """One-ply lookahead: maximize the margin to the forbidden length."""

    def start(self, state: GameState) -> None:
        pass

    def color(self, state: GameState, vids) -> int:
        p = state.params
        return max(
            range(1, p.t + 1),
            key=lambda c: (p.m[c - 1] - state.path_len_if(vids, c), -c),
        )


# -- k = 2 middle-level painter -----------------------------------------------------


class Painter2:
    """Distinct middle-level vectors as vertex labels; color where the later
    endpoint exceeds the earlier one."""

    def __init__(self, check_invariants: bool = False):
        self.check_invariants = check_invariants
        self.supply = None
        self.names: dict[int, tuple] = {}
        self.delegated_round = None
        self._fallback = PainterGreedy()

    def start(self, state: GameState) -> None:
        if state.params.k != 2:
            raise StrategyError("middle-level painter needs k = 2")
        self.supply = list(middle_level_vectors(state.params.m))
        self.names = {}
        self.delegated_round = None

    @property
    def supply_size(self) -> int:
        return len(self.supply) + len(self.names)

    def _name(self, state: GameState, v: int):
        if v in self.names:
            return self.names[v]
        if not self.supply:
            raise SupplyError("middle level exhausted")
        self.names[v] = self.supply.pop(0)
        return self.names[v]

    def color(self, state: GameState, vids) -> int:
        if self.delegated_round is not None:
            return self._fallback.color(state, vids)
        u, v = state.sort_verts(vids)
        try:
            au, av = self._name(state, u), self._name(state, v)
        except SupplyError:
            self.delegated_round = state.round + 1
            return self._fallback.color(state, vids)
        for i in range(state.params.t):
            if av[i] > au[i]:
                return i + 1
        raise StrategyError("equal-sum distinct labels must differ somewhere")


# -- general hierarchy painter --------------------------------------------------------


class PainterGeneral:
    """Hierarchy-label painter for any uniformity and shift.

    naming="antichain" survives arbitrary vertex insertion; naming="linext"
    assumes positions are final when vertices are named (fixed or append-only
    play) and stretches the supply to ell * |Q_h| + s - 1 vertices.
    """

    def __init__(self, naming: str = "antichain", check_invariants: bool = False,
                 budget: int = DEFAULT_BUDGET):
        if naming not in ("antichain", "linext"):
            raise StrategyError(f"unknown naming mode {naming!r}")
        self.naming = naming
        self.check_invariants = check_invariants
        self.budget = budget
        self.q = None
        self.supply = None
        self.names: dict[int, int] = {}
        self.flabels: dict[tuple, int] = {}
        self.delegated_round = None
        self._fallback = PainterGreedy()
        self.violations: list = []

    def start(self, state: GameState) -> None:
        p = state.params
        self.q = hierarchy_for(p, self.budget)
        q_h = self.q[p.h - 1]
        if self.naming == "antichain":
            self.supply = list(max_antichain(q_h))
        else:
            if p.mode == "free":
                raise StrategyError("linear-extension naming needs fixed or append play")
            self.supply = list(q_h.linear_extension())
        self.names = {}
        self.flabels = {}
        self.delegated_round = None
        self.violations = []

    @property
    def supply_size(self) -> int:
        return len(self.supply) + (len(self.names) if self.naming == "antichain" else 0)

    # -- naming -------------------------------------------------------------------

    def _name(self, state: GameState, v: int) -> int:
        got = self.names.get(v)
        if got is not None:
            return got
        p = state.params
        if self.naming == "antichain":
            if not self.supply:
                raise SupplyError("antichain names exhausted")
            self.names[v] = self.supply.pop(0)
        else:
            idx = (state.position(v) - p.s) // p.ell
            if idx < 0:
                raise StrategyError("the first s-1 vertices never need names")
            if idx >= len(self.supply):
                raise SupplyError("linear-extension names exhausted")
            self.names[v] = self.supply[idx]
        return self.names[v]

    # -- labels --------------------------------------------------------------------

    def _level_of(self, params: GameParams, size: int) -> int:
        k, ell, h = params.k, params.ell, params.h
        if (k - size) % ell or not params.s <= size <= k:
            raise StrategyError(f"{size} is not a labeled set size")
        return h - (k - size) // ell

    def f_label(self, state: GameState, y) -> int:
        """Label of a vertex set, fixed once computed; lives in Q_{h-j+1}."""
        y = tuple(state.sort_verts(y))
        if self.naming == "antichain":
            for v in y:  # introduce left to right before any lookups
                self._name(state, v)
        got = self.flabels.get(y)
        if got is not None:
            return got
        p = state.params
        j = self._level_of(p, len(y))
        if j == 1:
            lab = self._name(state, y[-1])
        else:
            ell = p.ell
            plus = self.f_label(state, y[ell:])
            minus = self.f_label(state, y[: len(y) - ell])
            level = self.q[p.h - j + 1]  # labels of the (j-1)-level sets
            pool = sorted(level.members[plus] - level.members[minus])
            if not pool:
                raise StrategyError("label choice set empty; incomparability broke")
            lab = pool[0]
        self.flabels[y] = lab
        if self.check_invariants:
            self._audit(state, y, len(y))
        return lab

    def color_of_set(self, state: GameState, vids) -> int:
        """Chain of the top-level label; usable without playing the edge."""
        lab = self.f_label(state, vids)
        chain, _ = self.q[0].chain_meta[lab]
        return chain + 1

    def color(self, state: GameState, vids) -> int:
        if self.delegated_round is not None:
            return self._fallback.color(state, vids)
        try:
            return self.color_of_set(state, vids)
        except SupplyError:
            self.delegated_round = state.round + 1
            return self._fallback.color(state, vids)

    # -- invariant audit ----------------------------------------------------------------

    def _bridgeable(self, state: GameState, y1, y2) -> bool:
        ell = state.params.ell
        if len(y1) > ell:
            return y1[ell:] == y2[: len(y2) - ell]
        lo, hi = state.position(y1[-1]), state.position(y2[0])
        return hi > lo and (hi - lo - 1) >= ell - len(y1)

    def _audit(self, state: GameState, fresh, size) -> None:
        p = state.params
        j = self._level_of(p, size)
        level = self.q[p.h - j]
        same = [y for y in self.flabels if len(y) == size]
        for other in same:
            if other == fresh:
                continue
            for y1, y2 in ((other, fresh), (fresh, other)):
                if self._bridgeable(state, y1, y2):
                    if level.leq(self.flabels[y2], self.flabels[y1]):
                        self.violations.append((y1, y2))


# -- off-line witness colorings ----------------------------------------------------------


def witness_capacity(params: GameParams, budget: int = DEFAULT_BUDGET) -> int:
    """Largest vertex count the witness coloring is guaranteed on."""
    q = hierarchy_for(params, budget)
    return params.ell * q[params.h - 1].size + params.s - 1


def painter_offline_witness(params: GameParams, n: int, budget: int = DEFAULT_BUDGET) -> dict:
    """A t-coloring of all increasing k-sets of [n] with no monochromatic
    shifted path of the forbidden length."""
    cap_params = GameParams(
        k=params.k, ell=params.ell, t=params.t, m=params.m, mode="fixed", n_fixed=max(n, params.k)
    )
    cap = witness_capacity(params, budget)
    if n > cap:
        raise SupplyError(f"witness guaranteed only up to {cap} vertices, asked {n}")
    state = GameState(cap_params)
    painter = PainterGeneral(naming="linext", budget=budget)
    painter.start(state)
    coloring = {}
    for vids in itertools.combinations(range(1, n + 1), params.k):
        coloring[vids] = painter.color_of_set(state, vids)
    return coloring
