"""Builder strategies.

Three constructions:

* ``Builder2`` — the k=2 vector-label strategy on a fixed arena of
  prod(m_i)+1 vertices: force two equal-labeled vertices, join them, repeat.
* ``BuilderGeneral`` — the general strategy (any k, any shift): maintain
  down-set labels for basic vertex sets, pick two equal-labeled restricted
  sets, and play the missing edges that make the right one *follow* the left
  one, which forces its label strictly up the hierarchy.
* interval play for shift = k, where the target is an ordered matching.

The label atlas, the recursive ``follows`` relation, and the instance-tree
expansion that yields the missing edges all live here; painters keep their
own (dual) labels in :mod:`pathramsey.painters`.

One sharpening over the bare recursive definition of ``follows``: at the level
just above the edges, the bridging set Y1 (union) Y2-tail must itself be a
played edge, even when the label of Y1 is empty.  Without it the relation is
vacuously true on fresh boards, equal labels would not imply "does not
follow", and the augmentation step could stall on bottom-chain labels.  With
it, the missing-edge expansion emits exactly the rescue window those labels
need.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

from .game import GameParams, GameState, Transcript
from .posets import DEFAULT_BUDGET, ChainSpec, q1_element, q_hierarchy


class StrategyError(Exception):
    pass


def hierarchy_for(params: GameParams, budget: int = DEFAULT_BUDGET):
    spec = ChainSpec.from_m(params.m)
    return q_hierarchy(spec, params.h, budget=budget)


def arena_size(params: GameParams, hierarchy) -> int:
    """Vertices the general builder needs: ell * |Q_h| + s."""
    return params.ell * hierarchy[params.h - 1].size + params.s


class GLabelAtlas:
    """Builder-side label maps from vertex tuples to hierarchy elements.

    Level-j sets (size k - (h-j)*ell) take labels in Q_{h-j+1}; edges (level
    h) are labeled by their (color, longest-path-length) chain element.  Only
    sets reachable from played edges by repeated front-deletion are
    materialized; everything else is answered from the closed-form initial
    labels, which depend only on how much room a set has on its left.
    """

    def __init__(self, params: GameParams, hierarchy=None, budget: int = DEFAULT_BUDGET):
        self.params = params
        self.h = params.h
        self.q = hierarchy if hierarchy is not None else hierarchy_for(params, budget)
        if len(self.q) < self.h:
            raise StrategyError("hierarchy too shallow for this shift")
        self.tracked: list[dict] = [{} for _ in range(self.h + 1)]
        self._token = None
        self._follow_cache: dict = {}

    # -- level bookkeeping ---------------------------------------------------

    def q_at(self, i: int):
        return self.q[i - 1]

    def size_of_level(self, j: int) -> int:
        return self.params.k - (self.h - j) * self.params.ell

    def level_of_size(self, size: int) -> int:
        k, ell, h = self.params.k, self.params.ell, self.h
        j = h - (k - size) // ell if (k - size) % ell == 0 else None
        if j is None or not 1 <= j <= h or self.size_of_level(j) != size:
            raise StrategyError(f"{size} is not a labeled set size")
        return j

    # -- refresh ----------------------------------------------------------------

    def refresh(self, state: GameState) -> None:
        """Rebuild the tracked labels from the colored edges of the state."""
        params = self.params
        ell, h = params.ell, self.h
        q1 = self.q_at(1)
        top: dict = {}
        for e in state.edges:
            if e.color is None:
                continue
            if e.path_len >= params.m[e.color - 1]:
                raise StrategyError("labels are undefined once the target exists")
            top[e.vids] = q1_element(q1, e.color - 1, e.path_len)
        self.tracked[h] = top
        for j in range(h - 1, 0, -1):
            groups: dict = {}
            for z, lab in self.tracked[j + 1].items():
                groups.setdefault(z[ell:], []).append(lab)
            down = self.q_at(h - j)
            up = self.q_at(h - j + 1)
            out = {}
            for y, gens in groups.items():
                if j + 1 < h:
                    # untracked precursors carry initial labels; the rightmost
                    # one dominates and tracked labels dominate their own
                    gens = gens + [self.default_label(j + 1, state.position(y[0]) - ell)]
                out[y] = up.index_of_downset(down.downset_closure_mask(gens))
            self.tracked[j] = out
        self._token = (id(state), state.round, len(state.edges))
        self._follow_cache.clear()

    def _check_fresh(self, state: GameState) -> None:
        if self._token != (id(state), state.round, len(state.edges)):
            raise StrategyError("atlas is stale; call refresh(state) first")

    # -- labels -----------------------------------------------------------------

    def default_label(self, j: int, min_pos: int) -> int:
        """Initial label of a level-j set whose first vertex sits at min_pos."""
        rank = min((min_pos - 1) // self.params.ell, self.h - j - 1)
        return self.q_at(self.h - j + 1).bottom_chain(rank)

    def label(self, state: GameState, j: int, y) -> int:
        """Label of the level-j set y (j < h always; j = h only for edges)."""
        y = tuple(y)
        if j == self.h:
            lab = self.tracked[self.h].get(y)
            if lab is None:
                raise StrategyError("only played edges carry a top-level label")
            return lab
        got = self.tracked[j].get(y)
        if got is not None:
            return got
        return self.default_label(j, state.position(y[0]))

    def edge_label(self, y) -> int | None:
        return self.tracked[self.h].get(tuple(y))

    def vertex_labels(self, state: GameState) -> dict:
        """Level-1 labels of every basic s-set, keyed by the set."""
        out = {}
        for y in basic_sets(state, self.params.s, self.params):
            out[y] = self.label(state, 1, y)
        return out

    # -- precursors ----------------------------------------------------------------

    def precursors(self, state: GameState, y):
        """Supersets obtained by adding ell vertices left of min(y), lex order."""
        ell = self.params.ell
        y = tuple(y)
        first = state.position(y[0])
        left = [state.vertex_at(p) for p in range(1, first)]
        for extra in itertools.combinations(left, ell):
            yield extra + y

    # -- follows ---------------------------------------------------------------------

    def follows(self, state: GameState, y1, y2) -> bool:
        """Does y2 follow y1 (so that equal labels are impossible)?"""
        self._check_fresh(state)
        y1, y2 = tuple(y1), tuple(y2)
        if len(y1) != len(y2):
            raise StrategyError("follows compares same-size sets")
        self.level_of_size(len(y1))
        return self._follows(state, y1, y2)

    def _bridges(self, state: GameState, y1, y2):
        """Candidate sets z with z minus-last-ell = y1 and z minus-first-ell = y2."""
        ell = self.params.ell
        if len(y1) > ell:
            if y1[ell:] == y2[: len(y2) - ell]:
                yield y1 + y2[-ell:]
            return
        gap_lo = state.position(y1[-1])
        gap_hi = state.position(y2[0])
        if gap_hi <= gap_lo:
            return
        fill = ell - len(y1)
        between = [state.vertex_at(p) for p in range(gap_lo + 1, gap_hi)]
        for extra in itertools.combinations(between, fill):
            yield y1 + extra + y2

    def _follows(self, state: GameState, y1, y2) -> bool:
        key = (y1, y2)
        hit = self._follow_cache.get(key)
        if hit is not None:
            return hit
        h = self.h
        j = self.level_of_size(len(y1))
        if j == h:
            ok = (
                self.edge_label(y1) is not None
                and self.edge_label(y2) is not None
                and state.precedes(state.edges[state._by_verts[frozenset(y1)]],
                                   state.edges[state._by_verts[frozenset(y2)]])
            )
            self._follow_cache[key] = ok
            return ok
        lab = self.label(state, j, y1)
        maxelems = self.q_at(h - j).maximal_of(self.q_at(h - j + 1).members[lab])
        ok = False
        for z in self._bridges(state, y1, y2):
            if j == h - 1 and self.edge_label(z) is None:
                continue  # the bridge itself must be a played edge
            good = True
            for w in maxelems:
                if not any(
                    self._level_label(state, j + 1, z1) == w and self._follows(state, z1, z)
                    for z1 in self.precursors(state, y1)
                ):
                    good = False
                    break
            if good:
                ok = True
                break
        self._follow_cache[key] = ok
        return ok

    def _level_label(self, state, j, y):
        if j == self.h:
            return self.edge_label(y)
        return self.label(state, j, y)

    # -- instance trees and missing edges -----------------------------------------------

    def instance_and_missing(self, state: GameState, x, y):
        """Deterministic instance of the tree under x, plus the edges needed
        so that y follows x.

        Returns (root InstanceNode, sorted tuple of missing edges).  Live
        branches end at leaf edges W and require W minus-first-ell plus the
        bridge tail; branches dying at an empty label one poset level above
        the ground require the bridging edge itself; deeper empty labels
        require nothing.
        """
        self._check_fresh(state)
        x, y = tuple(x), tuple(y)
        if self.level_of_size(len(x)) != 1 or len(x) != len(y):
            raise StrategyError("augmentation pairs are level-1 sets")
        tail = self._least_tail(state, x, y)
        required: set = set()
        root = self._build_node(state, self.h, self.label(state, 1, x), x, tail, required)
        missing = tuple(sorted(e for e in required if self.edge_label(e) is None))
        return root, missing

    def _least_tail(self, state, x, y):
        ell, s = self.params.ell, self.params.s
        fill = ell - s
        if fill == 0:
            return y
        lo, hi = state.position(x[-1]), state.position(y[0])
        if hi - lo - 1 < fill:
            raise StrategyError("no room for the bridge tail between the pair")
        extra = tuple(state.vertex_at(p) for p in range(lo + 1, lo + 1 + fill))
        return extra + y

    def _build_node(self, state, i, lab, assoc, tail, required):
        node = InstanceNode(poset_level=i, label=lab, vertex_set=assoc)
        ell = self.params.ell
        if i == 1:
            required.add(assoc[ell:] + tail)
            return node
        members = self.q_at(i).members[lab]
        if not members:
            if i == 2:
                required.add(assoc + tail)
            return node
        j_child = self.h - i + 2  # set level of the children
        for w in self.q_at(i - 1).maximal_of(members):
            chosen = None
            for z in self.precursors(state, assoc):
                if self._level_label(state, j_child, z) == w:
                    chosen = z
                    break
            if chosen is None:
                raise StrategyError("no precursor realizes a maximal label")
            node.children.append(
                self._build_node(state, i - 1, w, chosen, tail, required)
            )
        return node

    # -- winning move -----------------------------------------------------------------

    def win_descent(self, state: GameState, x, last_vertices) -> tuple:
        """From a top-labeled level-1 set, the edge that wins outright."""
        self._check_fresh(state)
        cur = tuple(x)
        for i in range(self.h, 2, -1):
            want = self.q_at(i - 1).top()
            j_child = self.h - i + 2
            nxt = None
            for z in self.precursors(state, cur):
                if self._level_label(state, j_child, z) == want:
                    nxt = z
                    break
            if nxt is None:
                raise StrategyError("top label without a top-labeled precursor")
            cur = nxt
        return cur + tuple(last_vertices)


@dataclass
class InstanceNode:
    """Node of an instance tree: a hierarchy element with its chosen vertex set."""

    poset_level: int
    label: int
    vertex_set: tuple
    children: list = field(default_factory=list)

    def leaves(self):
        if not self.children:
            return [self]
        out = []
        for c in self.children:
            out.extend(c.leaves())
        return out


def basic_sets(state: GameState, size: int, params: GameParams):
    """All size-sets whose last s vertices are consecutive in the order.

    For shift 1 (s = 1) every set qualifies, and for level-1 sets (size = s)
    these are exactly the intervals of s consecutive positions.
    """
    n = state.num_vertices()
    s = params.s
    if size < s:
        raise StrategyError("no labeled sets below size s")
    verts = state.vertices()
    for last_start in range(size - s, n - s + 1):
        tail = verts[last_start : last_start + s]
        head_pool = verts[: last_start]
        for head in itertools.combinations(head_pool, size - s):
            yield head + tail


def restricted_sets(state: GameState, params: GameParams, q_h_size: int):
    """The pigeonhole family: s-intervals at positions i*ell+1 for
    h-2 <= i <= |Q_h| - 1."""
    ell, s, h = params.ell, params.s, params.h
    out = []
    for i in range(max(h - 2, 0), q_h_size):
        start = i * ell + 1
        out.append(tuple(state.vertex_at(p) for p in range(start, start + s)))
    return out


# -- k = 2 vector strategy ---------------------------------------------------------------


def vector_labels(state: GameState) -> dict:
    """Per-vertex label: coordinate i is the longest color-(i+1) path ending there."""
    t = state.params.t
    labels = {v: [0] * t for v in state.vertices()}
    for e in state.edges:
        if e.color is None:
            continue
        last = e.vids[-1]
        idx = e.color - 1
        if e.path_len > labels[last][idx]:
            labels[last][idx] = e.path_len
    return {v: tuple(a) for v, a in labels.items()}


class Builder2:
    """Equal-label pairing on a fixed arena of prod(m_i) + 1 vertices."""

    def __init__(self):
        self.arena = None

    def start(self, state: GameState) -> None:
        p = state.params
        if p.k != 2 or p.ell != 1:
            raise StrategyError("this strategy needs k = 2 tight paths")
        self.arena = math.prod(p.m) + 1
        if p.mode != "fixed" or p.n_fixed < self.arena:
            raise StrategyError(f"needs a fixed arena of >= {self.arena} vertices")

    def next_move(self, state: GameState):
        top = tuple(mi - 1 for mi in state.params.m)
        labels = vector_labels(state)
        firsts = [state.vertex_at(i) for i in range(1, self.arena)]
        last = state.vertex_at(self.arena)
        for v in firsts:
            if labels[v] == top:
                return ("edge", (v, last))
        for u, v in itertools.combinations(firsts, 2):
            if labels[u] == labels[v] and not state.has_edge((u, v)):
                return ("edge", (u, v))
        raise StrategyError("no equal-label pair; should be unreachable before a win")


def builder2_move_bound(m_values) -> int:
    """Pigeonhole bound on the number of rounds the k=2 strategy needs."""
    return math.prod(m_values) * (sum(mi - 1 for mi in m_values) - 1) + 1


def builder_general_move_bound(params: GameParams, hierarchy) -> int:
    """1 + [(q_h - h + 1)(q_{h-1} - h) + 1] * prod(a_i) for shift < k."""
    h = params.h
    if h == 1:
        return hierarchy[0].size + 1
    q_h = hierarchy[h - 1].size
    q_hm1 = hierarchy[h - 2].size
    prod_a = math.prod(hierarchy[i].width() for i in range(h - 1))
    return 1 + ((q_h - h + 1) * (q_hm1 - h) + 1) * prod_a


# -- general strategy ---------------------------------------------------------------------


class BuilderGeneral:
    """Down-set-label strategy for any uniformity and shift.

    Plays on the first ell*|Q_h| + s vertices of a fixed arena.  Each round:
    win immediately if some eligible level-1 set carries the top label; else
    take the leftmost equal-labeled pair of restricted sets and play the
    first missing edge of the augmentation that makes the right one follow
    the left one.  For shift = k the whole game is interval play.
    """

    def __init__(self, budget: int = DEFAULT_BUDGET):
        self.budget = budget
        self.atlas = None
        self.n_arena = None

    def start(self, state: GameState) -> None:
        p = state.params
        if p.mode != "fixed":
            raise StrategyError("needs a fixed arena")
        hierarchy = hierarchy_for(p, self.budget)
        self.n_arena = arena_size(p, hierarchy)
        if p.n_fixed < self.n_arena:
            raise StrategyError(f"needs a fixed arena of >= {self.n_arena} vertices")
        self.atlas = GLabelAtlas(p, hierarchy, budget=self.budget)

    def _intervals(self, state: GameState):
        p = state.params
        q1 = self.atlas.q_at(1)
        for i in range(q1.size + 1):
            vids = tuple(state.vertex_at(p2) for p2 in range(i * p.k + 1, (i + 1) * p.k + 1))
            if not state.has_edge(vids):
                return ("edge", vids)
        raise StrategyError("all intervals played without a win")

    def next_move(self, state: GameState):
        p = state.params
        atlas = self.atlas
        atlas.refresh(state)
        if p.h == 1:
            return self._intervals(state)
        q_h = atlas.q_at(p.h)
        top = q_h.top()
        tail = tuple(
            state.vertex_at(pos) for pos in range(self.n_arena - p.ell + 1, self.n_arena + 1)
        )
        # winning branch: a top-labeled level-1 set ending before the tail
        for y in basic_sets(state, p.s, p):
            if state.position(y[-1]) > self.n_arena - p.ell:
                continue
            if atlas.label(state, 1, y) == top:
                return ("edge", atlas.win_descent(state, y, tail))
        # pigeonhole pair among restricted sets, leftmost first
        sets = restricted_sets(state, p, q_h.size)
        labels = [atlas.label(state, 1, y) for y in sets]
        for a in range(len(sets)):
            for b in range(a + 1, len(sets)):
                if labels[a] != labels[b]:
                    continue
                _, missing = atlas.instance_and_missing(state, sets[a], sets[b])
                if not missing:
                    raise StrategyError("equal labels but nothing to play")
                return ("edge", missing[0])
        raise StrategyError("no equal-label pair; should be unreachable before a win")


# -- scripted and randomized builders ---------------------------------------------------------


class BuilderScript:
    """Replays the builder side of a recorded transcript."""

    def __init__(self, transcript: Transcript):
        self.transcript = transcript
        self._queue = None

    def start(self, state: GameState) -> None:
        self._queue = list(self.transcript.events)

    def next_move(self, state: GameState):
        if not self._queue:
            return None
        ev = self._queue.pop(0)
        if "insert" in ev:
            return ("insert", ev["insert"][1])
        return ("edge", tuple(ev["edge"]))


class BuilderRandom:
    """Random legal increasing k-sets, with occasional mid-order insertions."""

    def __init__(self, seed: int, insert_prob: float = 0.2, max_vertices: int | None = None):
        self.seed = seed
        self.insert_prob = insert_prob
        self.max_vertices = max_vertices
        self.rng = None

    def start(self, state: GameState) -> None:
        self.rng = random.Random(self.seed)

    def _may_insert(self, state: GameState) -> bool:
        if state.params.mode == "fixed":
            return False
        cap = self.max_vertices or state.params.vertex_budget
        return state.num_vertices() < cap

    def _insert_move(self, state: GameState):
        if state.params.mode == "append":
            return ("insert", None)
        return ("insert", self.rng.randint(0, state.num_vertices()))

    def next_move(self, state: GameState):
        k = state.params.k
        if state.num_vertices() < k or (
            self._may_insert(state) and self.rng.random() < self.insert_prob
        ):
            if not self._may_insert(state):
                return None
            return self._insert_move(state)
        verts = state.vertices()
        options = [
            c for c in itertools.combinations(verts, k) if not state.has_edge(c)
        ]
        if not options:
            if self._may_insert(state):
                return self._insert_move(state)
            return None
        return ("edge", self.rng.choice(options))
