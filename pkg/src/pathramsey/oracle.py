"""Ground truth at desk scale.

Three tools: an exact minimax solver for the on-line game on a bounded
vertex budget, an exhaustive forcing check over all colorings of the
complete ordered hypergraph, and a coloring verifier.  All three are
independent of the strategy modules so they can certify them.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .game import GameParams
from .painters import painter_offline_witness, witness_capacity

INF = 10 ** 9


class OracleError(Exception):
    pass


class SearchBudgetError(OracleError):
    """The search ran out of nodes; the result is indeterminate."""


# -- shared path DP ------------------------------------------------------------------


def _pred_key(vids, params):
    return vids[: params.k - params.ell]


def _succ_key(vids, params):
    return vids[params.ell :]


def longest_paths(colored_edges, params: GameParams) -> dict:
    """Longest monochromatic shifted path ending at each edge.

    colored_edges: iterable of (increasing vertex tuple, color).  Works for
    any play order; edges are processed by last vertex so every predecessor
    is settled first.
    """
    edges = sorted(colored_edges, key=lambda ec: tuple(reversed(ec[0])))
    ell, k = params.ell, params.k
    out = {}
    if ell < k:
        best: dict = {}
        for vids, c in edges:
            p = 1 + best.get((_pred_key(vids, params), c), 0)
            out[(vids, c)] = p
            key = (_succ_key(vids, params), c)
            if p > best.get(key, 0):
                best[key] = p
    else:
        done: list = []
        for vids, c in edges:
            p = 1 + max((q for (w, cc), q in done if cc == c and w[-1] < vids[0]), default=0)
            out[(vids, c)] = p
            done.append(((vids, c), p))
    return out


def verify_witness(coloring: dict, params: GameParams) -> bool:
    """True iff the coloring of all increasing k-sets avoids every forbidden
    monochromatic shifted path."""
    if not coloring:
        raise OracleError("empty coloring")
    verts = sorted({v for vids in coloring for v in vids})
    n = verts[-1]
    if verts != list(range(1, n + 1)):
        raise OracleError("coloring must live on vertices 1..n")
    expect = set(itertools.combinations(range(1, n + 1), params.k))
    if set(coloring) != expect:
        raise OracleError("coloring must assign every increasing k-set")
    for c in coloring.values():
        if not 1 <= c <= params.t:
            raise OracleError(f"color {c} out of range")
    lens = longest_paths(coloring.items(), params)
    return all(p < params.m[c - 1] for (_, c), p in lens.items())


# -- exhaustive off-line forcing ---------------------------------------------------------


@dataclass
class ForceResult:
    forced: bool | None
    nodes: int
    reason: str

    def __bool__(self):
        if self.forced is None:
            raise OracleError(f"indeterminate forcing check: {self.reason}")
        return self.forced


def offline_force_check(params: GameParams, n: int, node_budget: int = 4_000_000,
                        use_witness: bool = True) -> ForceResult:
    """Does every t-coloring of the complete ordered hypergraph on [n]
    contain a forbidden monochromatic shifted path?

    Colorings extend edge by edge in colex order; branches die as soon as a
    path completes, and futures are memoized on the per-(suffix, color)
    longest-path profile, which is all later edges can see.
    """
    if n < params.k:
        return ForceResult(False, 0, "fewer vertices than the uniformity")
    if use_witness and n <= witness_capacity(params):
        coloring = painter_offline_witness(params, n)
        if not verify_witness(coloring, params):
            raise OracleError("witness construction failed verification")
        return ForceResult(False, 0, "witness coloring")
    edges = sorted(itertools.combinations(range(1, n + 1), params.k),
                   key=lambda e: tuple(reversed(e)))
    m = params.m
    t = params.t
    ell, k = params.ell, params.k
    diagonal = len(set(m)) == 1
    positional = ell == k
    memo: dict = {}
    nodes = 0

    def dfs(i, prof):
        nonlocal nodes
        if i == len(edges):
            return False
        nodes += 1
        if nodes > node_budget:
            raise SearchBudgetError(f"node budget {node_budget} exhausted")
        key = (i, tuple(sorted(prof.items())))
        hit = memo.get(key)
        if hit is not None:
            return hit
        e = edges[i]
        colors = range(1, 2 if (diagonal and i == 0) else t + 1)
        forced = True
        for c in colors:
            if positional:
                p = 1 + max((v for (last, cc), v in prof.items()
                             if cc == c and last < e[0]), default=0)
            else:
                p = 1 + prof.get((e[:k - ell], c), 0)
            if p >= m[c - 1]:
                continue  # this branch already contains the target
            key2 = (e[-1] if positional else _succ_key(e, params), c)
            old = prof.get(key2, 0)
            if p > old:
                prof[key2] = p
                sub = dfs(i + 1, prof)
                prof[key2] = old
                if old == 0:
                    del prof[key2]
            else:
                sub = dfs(i + 1, prof)
            if not sub:
                forced = False
                break
        memo[key] = forced
        return forced

    try:
        forced = dfs(0, {})
    except SearchBudgetError as exc:
        return ForceResult(None, nodes, str(exc))
    return ForceResult(forced, nodes, "exhaustive search")


# -- exact on-line minimax ------------------------------------------------------------------


def _canonical(edge_list, n, color_perms):
    """Order-isomorphism key: per-gap bare counts plus edges on used ranks."""
    used = sorted({v for vids, _ in edge_list for v in vids})
    rank = {v: i + 1 for i, v in enumerate(used)}
    gaps = []
    prev = 0
    for v in used:
        gaps.append(v - prev - 1)
        prev = v
    gaps.append(n - prev)
    best = None
    for perm in color_perms:
        eds = tuple(sorted((tuple(rank[v] for v in vids), perm[c - 1])
                           for vids, c in edge_list))
        if best is None or eds < best:
            best = eds
    return tuple(gaps), best


@dataclass
class OnlineValue:
    """Exact game values per vertex budget; None means above the move budget."""

    k: int
    ell: int
    t: int
    m: tuple[int, ...]
    move_budget: int
    values: dict
    nodes: int

    @property
    def stabilized(self) -> bool:
        ns = sorted(self.values)
        return len(ns) >= 2 and self.values[ns[-1]] == self.values[ns[-2]]

    def best(self):
        return self.values[max(self.values)]


def _solve_budgeted(params: GameParams, n: int, move_budget: int,
                    use_memo: bool = True) -> tuple:
    k, t, m = params.k, params.t, params.m
    all_edges = list(itertools.combinations(range(1, n + 1), k))
    diagonal = len(set(m)) == 1
    color_perms = (
        list(itertools.permutations(range(1, t + 1))) if diagonal else [tuple(range(1, t + 1))]
    )
    memo: dict = {}
    nodes = 0

    def search(edge_list, budget):
        """Min further edges the builder needs; INF when above budget."""
        nonlocal nodes
        if budget <= 0:
            return INF
        key = _canonical(edge_list, n, color_perms)
        hit = memo.get(key) if use_memo else None
        if hit is not None:
            val, exact = hit
            if exact:
                return val if val <= budget else INF
            if val > budget:
                return INF
        nodes += 1
        played = {vids for vids, _ in edge_list}
        used = {v for vids in played for v in vids}
        options = [e for e in all_edges if e not in played]
        options.sort(key=lambda e: (-sum(v in used for v in e), e))
        best = INF
        for e in options:
            worst = 0
            for c in range(1, t + 1):
                nxt = edge_list + ((e, c),)
                if _completes(nxt, e, c):
                    sub = 1
                else:
                    sub = search(nxt, min(budget, best) - 1)
                    sub = INF if sub >= INF else 1 + sub
                if sub > worst:
                    worst = sub
                if worst >= best:
                    break
            if worst < best:
                best = worst
            if best == 1:
                break
        if best >= INF:
            prev = memo.get(key)
            bound = budget + 1
            if prev is not None and not prev[1]:
                bound = max(bound, prev[0])
            memo[key] = (bound, False)
            return INF
        memo[key] = (best, True)
        return best

    def _completes(edge_list, e, c):
        lens = longest_paths(edge_list, params)
        return lens[(e, c)] >= m[c - 1]

    value = search(tuple(), move_budget)
    return (None if value >= INF else value), nodes


def exact_online_value(params: GameParams, n_budget: int, move_budget: int | None = None,
                       cache_path=None, use_memo: bool = True) -> OnlineValue:
    """Minimax number of edges the builder needs on each vertex budget up to
    n_budget, with per-budget values so stabilization is visible."""
    if move_budget is None:
        move_budget = _default_move_budget(params)
    cache = {}
    if cache_path is not None:
        try:
            with open(cache_path) as fh:
                cache = json.load(fh)
        except FileNotFoundError:
            cache = {}
    values = {}
    total_nodes = 0
    for n in range(params.k, n_budget + 1):
        key = f"k={params.k};l={params.ell};t={params.t};m={','.join(map(str, params.m))};n={n};budget={move_budget}"
        if key in cache:
            values[n] = cache[key]
            continue
        val, nodes = _solve_budgeted(params, n, move_budget, use_memo=use_memo)
        total_nodes += nodes
        values[n] = val
        cache[key] = val
    if cache_path is not None:
        with open(cache_path, "w") as fh:
            json.dump(cache, fh, indent=0, sort_keys=True)
    return OnlineValue(
        k=params.k, ell=params.ell, t=params.t, m=params.m,
        move_budget=move_budget, values=values, nodes=total_nodes,
    )


def _default_move_budget(params: GameParams) -> int:
    import math

    if params.k == 2 and params.ell == 1:
        return math.prod(params.m) * (sum(mi - 1 for mi in params.m) - 1) + 1
    from .builders import hierarchy_for

    hier = hierarchy_for(params)
    h = params.h
    if h == 1:
        return hier[0].size + 1
    prod_a = math.prod(hier[i].width() for i in range(h - 1))
    return hier[h - 1].size * hier[h - 2].size * prod_a


def builder_best_response(params: GameParams, n: int, painter_factory,
                          move_budget: int) -> int | None:
    """Min edges the builder needs against one fixed painter policy.

    Painters are stateful (naming order matters), so each branch carries its
    own deep copy; intended for tiny envelopes only (n <= 6, short budgets).
    """
    import copy

    from .game import GameState

    def search(state, painter, budget):
        if state.check_win():
            return 0
        if budget == 0:
            return INF
        best = INF
        options = [
            e
            for e in itertools.combinations(range(1, n + 1), params.k)
            if not state.has_edge(e)
        ]
        for e in options:
            child = state.copy()
            p2 = copy.deepcopy(painter)
            h = child.play_edge(e)
            c = p2.color(child, child.pending())
            child.assign_color(h, c)
            sub = search(child, p2, min(budget, best) - 1)
            if sub < INF:
                best = min(best, 1 + sub)
            if best == 1:
                break
        return best

    state = GameState(GameParams(k=params.k, ell=params.ell, t=params.t, m=params.m,
                                 mode="fixed", n_fixed=n))
    painter = painter_factory()
    painter.start(state)
    val = search(state, painter, move_budget)
    return None if val >= INF else val
