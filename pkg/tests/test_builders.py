import itertools
import random

import pytest

from pathramsey.builders import (
    Builder2,
    BuilderGeneral,
    BuilderRandom,
    GLabelAtlas,
    StrategyError,
    arena_size,
    builder2_move_bound,
    hierarchy_for,
    restricted_sets,
    vector_labels,
)
from pathramsey.game import GameParams, GameState, run_match
from pathramsey.painters import Painter2, PainterGeneral, PainterGreedy, PainterRandom, PainterSpite


from support import brute_label, instance_follows, random_state


def fresh_atlas(params, state):
    atlas = GLabelAtlas(params)
    atlas.refresh(state)
    return atlas


# -- label atlas ----------------------------------------------------------------------


def test_initial_vertex_labels_k3():
    params = GameParams.diagonal(k=3, ell=1, m=2, t=2, mode="fixed", n_fixed=7)
    state = GameState(params)
    atlas = fresh_atlas(params, state)
    q3 = atlas.q_at(3)
    assert atlas.label(state, 1, (1,)) == q3.bottom_chain(0)
    assert atlas.label(state, 1, (2,)) == q3.bottom_chain(1)
    for v in range(3, 8):
        assert atlas.label(state, 1, (v,)) == q3.bottom_chain(1)


def test_initial_pair_labels_are_bottom():
    params = GameParams.diagonal(k=3, ell=1, m=2, t=2, mode="fixed", n_fixed=7)
    state = GameState(params)
    atlas = fresh_atlas(params, state)
    q2 = atlas.q_at(2)
    for pair in itertools.combinations(range(1, 8), 2):
        assert atlas.label(state, 2, pair) == q2.bottom()


def test_k2_label_after_one_red_edge():
    params = GameParams.diagonal(k=2, ell=1, m=3, t=2, mode="fixed", n_fixed=10)
    state = GameState(params)
    h = state.play_edge((1, 2))
    state.assign_color(h, 1)
    atlas = fresh_atlas(params, state)
    q1, q2 = atlas.q_at(1), atlas.q_at(2)
    lab = atlas.label(state, 1, (2,))
    assert q2.members[lab] == frozenset({0})  # height 1 on the first chain


def test_loose_initial_labels():
    # shift 2, k 3: level-1 sets are single vertices, rank floor((pos-1)/2)
    params = GameParams.diagonal(k=3, ell=2, m=2, t=2, mode="fixed", n_fixed=9)
    state = GameState(params)
    atlas = fresh_atlas(params, state)
    q2 = atlas.q_at(2)
    assert atlas.label(state, 1, (1,)) == q2.bottom_chain(0)
    assert atlas.label(state, 1, (2,)) == q2.bottom_chain(0)
    assert atlas.label(state, 1, (3,)) == q2.bottom_chain(0)


@pytest.mark.parametrize("k,ell,n", [(2, 1, 6), (3, 1, 6), (3, 2, 7), (4, 2, 8)])
def test_atlas_matches_recursive_definition(k, ell, n):
    rng = random.Random(10 * k + ell)
    for _ in range(25):
        params, state = random_state(rng, k, ell, n, max_edges=8)
        atlas = fresh_atlas(params, state)
        for j in range(1, atlas.h):
            size = atlas.size_of_level(j)
            for y in itertools.combinations(range(1, n + 1), size):
                assert atlas.label(state, j, y) == brute_label(state, atlas, j, y), (
                    j,
                    y,
                    [(e.vids, e.color) for e in state.edges],
                )


def test_atlas_refuses_finished_games():
    params = GameParams.diagonal(k=2, ell=1, m=2, t=2, mode="fixed", n_fixed=4)
    state = GameState(params)
    for vids, c in [((1, 2), 1), ((2, 3), 1)]:
        h = state.play_edge(vids)
        state.assign_color(h, c)
    with pytest.raises(StrategyError):
        GLabelAtlas(params).refresh(state)


# -- follows ------------------------------------------------------------------------------


def test_follows_requires_alignment():
    params = GameParams.diagonal(k=3, ell=1, m=3, t=2, mode="fixed", n_fixed=6)
    state = GameState(params)
    atlas = fresh_atlas(params, state)
    assert not atlas.follows(state, (1, 3), (2, 4))  # (A) fails


def test_follows_true_when_label_empty_below_the_top_levels():
    # k=4: pair labels of sets with first vertex 1 are empty; the bridge is a
    # 3-set, still above the edge level, so alignment alone suffices
    params = GameParams.diagonal(k=4, ell=1, m=2, t=2, mode="fixed", n_fixed=9)
    state = GameState(params)
    atlas = fresh_atlas(params, state)
    assert atlas.follows(state, (1, 2), (2, 3))


def test_equal_labels_never_follow():
    rng = random.Random(33)
    for k, ell, n in [(2, 1, 6), (3, 1, 6), (3, 2, 7)]:
        for _ in range(30):
            params, state = random_state(rng, k, ell, n, max_edges=7)
            atlas = fresh_atlas(params, state)
            for j in range(1, atlas.h + 1):
                size = atlas.size_of_level(j)
                for y1, y2 in itertools.permutations(
                    itertools.combinations(range(1, n + 1), size), 2
                ):
                    if atlas._level_label(state, j, y1) is None:
                        continue
                    if atlas._level_label(state, j, y2) is None:
                        continue
                    if atlas.follows(state, y1, y2):
                        q = atlas.q_at(atlas.h - j + 1)
                        assert not q.leq(
                            atlas._level_label(state, j, y2),
                            atlas._level_label(state, j, y1),
                        ), (j, y1, y2)


@pytest.mark.parametrize("k,ell,n", [(2, 1, 6), (3, 1, 6), (3, 2, 7)])
def test_follows_equals_instance_search(k, ell, n):
    rng = random.Random(77 * k + ell)
    for _ in range(25):
        params, state = random_state(rng, k, ell, n, max_edges=9)
        atlas = fresh_atlas(params, state)
        for j in range(1, atlas.h + 1):
            size = atlas.size_of_level(j)
            for y1, y2 in itertools.permutations(
                itertools.combinations(range(1, n + 1), size), 2
            ):
                assert atlas.follows(state, y1, y2) == instance_follows(
                    state, atlas, y1, y2
                ), (j, y1, y2, [(e.vids, e.color) for e in state.edges])


# -- instances and missing edges -------------------------------------------------------------


def test_missing_edges_for_fresh_pair_is_the_window():
    params = GameParams.diagonal(k=3, ell=1, m=2, t=2, mode="fixed", n_fixed=7)
    state = GameState(params)
    atlas = fresh_atlas(params, state)
    tree, missing = atlas.instance_and_missing(state, (2,), (3,))
    assert missing == ((1, 2, 3),)


def test_missing_edges_bounded_by_antichain_product():
    rng = random.Random(4)
    params0 = GameParams.diagonal(k=3, ell=1, m=2, t=2)
    hier = hierarchy_for(params0)
    cap = hier[0].width() * hier[1].width()
    for _ in range(40):
        params, state = random_state(rng, 3, 1, 7, max_edges=8, m=2)
        atlas = fresh_atlas(params, state)
        sets = restricted_sets(state, params, hier[2].size)
        labels = [atlas.label(state, 1, y) for y in sets]
        for a in range(len(sets)):
            for b in range(a + 1, len(sets)):
                if labels[a] == labels[b] and labels[a] != atlas.q_at(3).top():
                    _, missing = atlas.instance_and_missing(state, sets[a], sets[b])
                    assert len(missing) <= cap


def test_playing_missing_edges_makes_follow_and_raises_label():
    rng = random.Random(11)
    raised = 0
    for _ in range(60):
        params, state = random_state(rng, 3, 1, 7, max_edges=6, m=3)
        atlas = fresh_atlas(params, state)
        sets = [(v,) for v in range(2, 7)]
        labels = [atlas.label(state, 1, y) for y in sets]
        pair = next(
            (
                (sets[a], sets[b])
                for a in range(len(sets))
                for b in range(a + 1, len(sets))
                if labels[a] == labels[b] and labels[a] != atlas.q_at(3).top()
            ),
            None,
        )
        if pair is None:
            continue
        x, y = pair
        before = atlas.label(state, 1, y)
        _, missing = atlas.instance_and_missing(state, x, y)
        over = False
        for vids in missing:
            if state.path_len_if(vids, 1) >= 3 and state.path_len_if(vids, 2) >= 3:
                over = True
                break
            h = state.play_edge(vids)
            colors = [c for c in (1, 2) if state.path_len_if(vids, c) < 3]
            state.assign_color(h, rng.choice(colors))
        if over:
            continue
        atlas.refresh(state)
        assert atlas.follows(state, x, y)
        after = atlas.label(state, 1, y)
        q3 = atlas.q_at(3)
        assert q3.leq(before, after) and before != after
        raised += 1
    assert raised >= 10


def test_label_monotone_under_any_play():
    rng = random.Random(21)
    for k, ell, n in [(2, 1, 6), (3, 1, 7), (3, 2, 7)]:
        params = GameParams.diagonal(k=k, ell=ell, m=4, t=2, mode="fixed", n_fixed=n)
        state = GameState(params)
        atlas = GLabelAtlas(params)
        atlas.refresh(state)
        prev = atlas.vertex_labels(state)
        pool = list(itertools.combinations(range(1, n + 1), k))
        rng.shuffle(pool)
        for vids in pool[:10]:
            colors = [c for c in (1, 2) if state.path_len_if(vids, c) < 4]
            if not colors:
                continue
            h = state.play_edge(vids)
            state.assign_color(h, rng.choice(colors))
            atlas.refresh(state)
            cur = atlas.vertex_labels(state)
            q = atlas.q_at(atlas.h)
            for y, lab in prev.items():
                assert q.leq(lab, cur[y]), (y, lab, cur[y])
            prev = cur


# -- k = 2 strategy -----------------------------------------------------------------------


def test_vector_labels_track_paths():
    params = GameParams.diagonal(k=2, ell=1, m=3, t=2, mode="fixed", n_fixed=5)
    state = GameState(params)
    for vids, c in [((1, 2), 1), ((2, 3), 1), ((3, 4), 2)]:
        h = state.play_edge(vids)
        state.assign_color(h, c)
    labels = vector_labels(state)
    assert labels[2] == (1, 0)
    assert labels[3] == (2, 0)
    assert labels[4] == (0, 1)


def test_builder2_first_move_is_leftmost_pair():
    params = GameParams.diagonal(k=2, ell=1, m=2, t=2, mode="fixed", n_fixed=5)
    state = GameState(params)
    b = Builder2()
    b.start(state)
    assert b.next_move(state) == ("edge", (1, 2))


def test_builder2_wins_with_top_label():
    params = GameParams.diagonal(k=2, ell=1, m=2, t=2, mode="fixed", n_fixed=5)
    state = GameState(params)
    b = Builder2()
    b.start(state)
    for vids, c in [((1, 3), 1), ((2, 3), 2)]:
        h = state.play_edge(vids)
        state.assign_color(h, c)
    # vertex 3 has label (1,1) = top; expect the winning edge to the last vertex
    kind, vids = b.next_move(state)
    assert vids == (3, 5)


def test_builder2_arena_requirement():
    params = GameParams.diagonal(k=2, ell=1, m=3, t=2, mode="fixed", n_fixed=5)
    b = Builder2()
    with pytest.raises(StrategyError):
        b.start(GameState(params))


def test_builder_general_needs_fixed_mode():
    params = GameParams.diagonal(k=3, ell=1, m=2, t=2)
    with pytest.raises(StrategyError):
        BuilderGeneral().start(GameState(params))


# -- full games ----------------------------------------------------------------------------


def painter_suite(k, seeds=range(6)):
    out = [PainterGreedy(), PainterSpite(), PainterGeneral()]
    if k == 2:
        out.append(Painter2())
    out.extend(PainterRandom(s) for s in seeds)
    return out


@pytest.mark.parametrize("m,t", [(2, 2), (3, 2), (2, 3)])
def test_builder2_beats_suite_within_bound(m, t):
    bound = builder2_move_bound((m,) * t)
    params = GameParams.diagonal(
        k=2, ell=1, m=m, t=t, mode="fixed", n_fixed=m ** t + 1
    )
    for painter in painter_suite(2):
        res = run_match(params, Builder2(), painter, max_rounds=bound + 5)
        assert res.builder_won and res.rounds <= bound


@pytest.mark.parametrize("k,ell,m,t", [(3, 1, 2, 2), (4, 1, 2, 2), (3, 2, 2, 2), (2, 2, 2, 2), (3, 3, 2, 2)])
def test_builder_general_beats_suite(k, ell, m, t):
    params0 = GameParams.diagonal(k=k, ell=ell, m=m, t=t)
    hier = hierarchy_for(params0)
    n = arena_size(params0, hier)
    params = GameParams.diagonal(k=k, ell=ell, m=m, t=t, mode="fixed", n_fixed=n)
    q_h = hier[params0.h - 1].size
    loose_upper = (
        q_h + 1
        if params0.h == 1
        else q_h * hier[params0.h - 2].size
        * max(1, __import__("math").prod(h.width() for h in hier[: params0.h - 1]))
    )
    for painter in painter_suite(k):
        res = run_match(params, BuilderGeneral(), painter, max_rounds=loose_upper + 5)
        assert res.builder_won, (k, ell, type(painter).__name__, res.stop_reason)
        assert res.rounds <= loose_upper


def test_loose_witness_paths_are_spread_out():
    # every witness pair of consecutive edges ends at least ell apart
    params0 = GameParams.diagonal(k=3, ell=2, m=2, t=2)
    hier = hierarchy_for(params0)
    n = arena_size(params0, hier)
    params = GameParams.diagonal(k=3, ell=2, m=2, t=2, mode="fixed", n_fixed=n)
    for painter in painter_suite(3):
        res = run_match(params, BuilderGeneral(), painter, max_rounds=60)
        assert res.builder_won
        last = [w[-1] for w in res.witness]
        assert all(b - a >= 2 for a, b in zip(last, last[1:]))


def test_random_builder_stays_legal():
    params = GameParams.diagonal(k=3, ell=1, m=3, t=2, vertex_budget=20)
    res = run_match(params, BuilderRandom(5, insert_prob=0.4), PainterRandom(1), max_rounds=25)
    state = res.transcript.replay()
    assert state.round == res.rounds


def test_interval_play_for_matchings():
    params = GameParams.diagonal(k=2, ell=2, m=2, t=2, mode="fixed", n_fixed=6)
    b = BuilderGeneral()
    state = GameState(params)
    b.start(state)
    assert b.next_move(state) == ("edge", (1, 2))
    h = state.play_edge((1, 2))
    state.assign_color(h, 1)
    assert b.next_move(state) == ("edge", (3, 4))


def test_first_vertices_never_change_labels():
    rng = random.Random(6)
    for _ in range(20):
        params, state = random_state(rng, 3, 1, 7, max_edges=8, m=4)
        atlas = fresh_atlas(params, state)
        q3 = atlas.q_at(3)
        # no edge can end at the first k-1 vertices, so their labels stay put
        assert atlas.label(state, 1, (1,)) == q3.bottom_chain(0)
        assert atlas.label(state, 1, (2,)) == q3.bottom_chain(1)
