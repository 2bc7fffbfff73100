"""Off-line lower bound for directed paths on general digraph hosts.

A host with fewer than C(|B|+1, 2) edges is (|B|-1)-degenerate, so its
vertices can be properly labeled with the middle-level vectors B; coloring
every arc by a coordinate that increases along it then caps every
monochromatic directed path below m edges.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .bounds import TOL, middle_level_vectors, midlevel_size


class DigraphError(ValueError):
    pass


@dataclass(frozen=True)
class Digraph:
    """Directed graph on vertices 1..n; 2-cycles allowed, loops and duplicate
    arcs rejected."""

    n: int
    arcs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        seen = set()
        for u, v in self.arcs:
            if u == v:
                raise DigraphError(f"loop at {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise DigraphError(f"arc ({u},{v}) outside 1..{self.n}")
            if (u, v) in seen:
                raise DigraphError(f"duplicate arc ({u},{v})")
            seen.add((u, v))

    def underlying_edges(self) -> set[frozenset]:
        return {frozenset(a) for a in self.arcs}

    def underlying_adj(self) -> dict:
        adj = {v: set() for v in range(1, self.n + 1)}
        for u, v in self.arcs:
            adj[u].add(v)
            adj[v].add(u)
        return adj


def degeneracy_order(g: Digraph) -> list[int]:
    """Repeatedly remove a minimum-degree vertex of the underlying graph,
    lowest id first on ties."""
    adj = g.underlying_adj()
    alive = set(adj)
    order = []
    while alive:
        v = min(alive, key=lambda x: (len(adj[x] & alive), x))
        order.append(v)
        alive.remove(v)
    return order


def degeneracy_label(g: Digraph, labels) -> dict:
    """Proper vertex labeling from the given label list via the degeneracy
    ordering and greedy choice (smallest available index)."""
    labels = list(labels)
    bound = math.comb(len(labels) + 1, 2)
    if len(g.underlying_edges()) >= bound:
        raise DigraphError(
            f"host has {len(g.underlying_edges())} underlying edges; "
            f"the labeling is only guaranteed below {bound}"
        )
    adj = g.underlying_adj()
    order = degeneracy_order(g)
    assignment: dict = {}
    for v in reversed(order):
        used = {tuple(assignment[w]) for w in adj[v] if w in assignment}
        pick = next((lab for lab in labels if tuple(lab) not in used), None)
        if pick is None:
            raise DigraphError("greedy coloring ran out of labels")
        assignment[v] = pick
    return assignment


def paint_and_verify(g: Digraph, labelmap: dict, m: int, t: int):
    """Color every arc by the least coordinate that increases along it, then
    verify each color class is graded by that coordinate with all directed
    paths shorter than m edges.

    Returns (arc -> color dict, verification flag).
    """
    coloring = {}
    for u, v in g.arcs:
        au, av = labelmap[u], labelmap[v]
        color = next((i + 1 for i in range(t) if av[i] > au[i]), None)
        if color is None:
            raise DigraphError(
                "no increasing coordinate; the labeling was not proper/equal-sum"
            )
        coloring[(u, v)] = color
    ok = True
    for c in range(1, t + 1):
        arcs = [a for a, cc in coloring.items() if cc == c]
        if any(labelmap[v][c - 1] <= labelmap[u][c - 1] for u, v in arcs):
            ok = False
            break
        # graded: process vertices by the coordinate value
        longest = {v: 0 for v in range(1, g.n + 1)}
        for u, v in sorted(arcs, key=lambda a: labelmap[a[0]][c - 1]):
            longest[v] = max(longest[v], longest[u] + 1)
        if max(longest.values(), default=0) >= m:
            ok = False
            break
    return coloring, ok


def random_host(n_edges: int, rng: random.Random, extra_vertices: int = 2) -> Digraph:
    """Random digraph with exactly n_edges underlying edges; arcs get a random
    orientation and occasionally both directions."""
    n = 2
    while math.comb(n, 2) < n_edges:
        n += 1
    n += extra_vertices
    pool = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    pairs = rng.sample(pool, n_edges)
    arcs = []
    for u, v in pairs:
        roll = rng.random()
        if roll < 0.4:
            arcs.append((u, v))
        elif roll < 0.8:
            arcs.append((v, u))
        else:
            arcs.append((u, v))
            arcs.append((v, u))
    return Digraph(n=n, arcs=tuple(arcs))


def sdir_sandwich(m: int, t: int) -> tuple[float, float, int]:
    """(published lower, published upper, our lower C(|B|+1, 2)) for the
    directed-path size Ramsey number; raises if ours fails to dominate."""
    if m < 2 or t < 2:
        raise DigraphError("need m, t >= 2")
    lower = ((m + 1) / (3.0 * t - 3.0)) ** (2 * t - 2)
    upper = 4.0 * (m + 1) ** (2 * t - 2)
    b = midlevel_size((m,) * t)[0]
    ours = math.comb(b + 1, 2)
    if ours + TOL < lower:
        raise DigraphError(f"our bound {ours} fails to dominate {lower}")
    return lower, upper, ours


def boundary_host(m: int, t: int, rng: random.Random) -> Digraph:
    """Random host at the edge-count boundary C(|B|+1, 2) - 1."""
    b = midlevel_size((m,) * t)[0]
    return random_host(math.comb(b + 1, 2) - 1, rng)


def labeled_boundary_run(m: int, t: int, seed: int):
    """One full randomized certification: host, labeling, coloring, verdict."""
    rng = random.Random(seed)
    g = boundary_host(m, t, rng)
    labels = middle_level_vectors((m,) * t)
    assignment = degeneracy_label(g, labels)
    coloring, ok = paint_and_verify(g, assignment, m, t)
    return g, assignment, coloring, ok
