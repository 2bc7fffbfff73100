"""Shared brute-force oracles and state generators for the test suite.

Everything here is an independent re-implementation of some package
operation (exhaustive where the package is incremental, enumerating where
the package is greedy) so the two sides can certify each other.
"""

import itertools

from pathramsey.game import GameParams, GameState


def safe_colors(state, vids):
    """Colors that keep the game alive, accounting for propagation."""
    out = []
    for c in range(1, state.params.t + 1):
        probe = state.copy()
        h = probe.play_edge(vids)
        probe.assign_color(h, c)
        if probe.check_win() is None:
            out.append(c)
    return out


def random_state(rng, k, ell, n, max_edges, t=2, m=4):
    """A random live (not yet won) position on a fixed arena."""
    params = GameParams.diagonal(k=k, ell=ell, m=m, t=t, mode="fixed", n_fixed=n)
    state = GameState(params)
    pool = list(itertools.combinations(range(1, n + 1), k))
    rng.shuffle(pool)
    for vids in pool[: rng.randint(0, max_edges)]:
        colors = safe_colors(state, vids)
        if not colors:
            continue
        h = state.play_edge(vids)
        state.assign_color(h, rng.choice(colors))
    return params, state


def brute_label(state, atlas, j, y):
    """Level-j label straight from the recursive definition, no tracking."""
    h = atlas.h
    if j == h:
        return atlas.edge_label(y)
    gens = []
    for z in atlas.precursors(state, y):
        lab = brute_label(state, atlas, j + 1, z)
        if lab is not None:
            gens.append(lab)
    down = atlas.q_at(h - j)
    return atlas.q_at(h - j + 1).index_of_downset(down.downset_closure_mask(gens))


def instance_follows(state, atlas, y1, y2):
    """Follows via explicit instance search: some bridge tail and some choice
    of labeled precursors whose every terminal requirement is a played edge."""
    j = atlas.level_of_size(len(y1))
    h = atlas.h
    if j == h:
        if atlas.edge_label(y1) is None or atlas.edge_label(y2) is None:
            return False
        i1 = state._by_verts[frozenset(y1)]
        i2 = state._by_verts[frozenset(y2)]
        return state.precedes(state.edges[i1], state.edges[i2])

    def ok_node(i, lab, assoc, tail):
        ell = atlas.params.ell
        if i == 1:
            return atlas.edge_label(assoc[ell:] + tail) is not None
        members = atlas.q_at(i).members[lab]
        if not members:
            return i != 2 or atlas.edge_label(assoc + tail) is not None
        j_child = h - i + 2
        for w in atlas.q_at(i - 1).maximal_of(members):
            if not any(
                atlas._level_label(state, j_child, z) == w and ok_node(i - 1, w, z, tail)
                for z in atlas.precursors(state, assoc)
            ):
                return False
        return True

    root_lab = atlas.label(state, j, y1)
    for bridge in atlas._bridges(state, y1, y2):
        tail = bridge[len(y1):]
        if ok_node(h - j + 1, root_lab, y1, tail):
            return True
    return False
