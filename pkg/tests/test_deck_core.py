"""Deck representation, weight specs, and the elementary random-to-top step."""

import numpy as np
import pytest

from shufflemix import (
    Deck,
    RngStream,
    ShuffleSpec,
    apply_move_to_top,
    bottom_to_top_spec,
    make_deck,
    sample_step,
    two_point_spec,
    uniform_weights,
)


def test_make_deck_identity():
    assert list(make_deck(3, "identity").by_position) == [1, 2, 3]


def test_make_deck_reversed():
    assert list(make_deck(3, "reversed").by_position) == [3, 2, 1]


def test_make_deck_single_card_reversed():
    assert list(make_deck(1, "reversed").by_position) == [1]


def test_make_deck_rejects_zero():
    with pytest.raises(ValueError):
        make_deck(0)


def test_make_deck_rejects_unknown_order():
    with pytest.raises(ValueError):
        make_deck(3, "sorted")


def test_move_to_top_full_rotation():
    assert list(apply_move_to_top(make_deck(3), 3).by_position) == [3, 1, 2]


def test_move_to_top_identity_when_top_chosen():
    assert list(apply_move_to_top(make_deck(3), 1).by_position) == [1, 2, 3]


def test_move_to_top_middle():
    deck = Deck(np.array([3, 1, 2]))
    assert list(apply_move_to_top(deck, 2).by_position) == [1, 3, 2]


def test_move_to_top_rejects_out_of_range():
    with pytest.raises(ValueError):
        apply_move_to_top(make_deck(3), 4)
    with pytest.raises(ValueError):
        apply_move_to_top(make_deck(3), 0)


def test_index_maps_stay_inverse():
    gen = RngStream(5).generator()
    deck = make_deck(9)
    for _ in range(500):
        deck.move_position_to_top(int(gen.integers(1, 10)))
        bp, bc = deck.by_position, deck.by_card
        assert sorted(bp) == list(range(1, 10))
        assert all(bc[bp[j] - 1] == j + 1 for j in range(9))


def test_circular_buffer_matches_naive_list():
    # long run so the internal top pointer wraps many times
    gen = RngStream(123).generator()
    deck = make_deck(12)
    ref = list(range(1, 13))
    for _ in range(2000):
        q = int(gen.integers(1, 13))
        deck.move_position_to_top(q)
        ref.insert(0, ref.pop(q - 1))
        assert list(deck.by_position) == ref


def test_move_card_to_top_matches_naive_list():
    gen = RngStream(124).generator()
    deck = make_deck(7)
    ref = list(range(1, 8))
    for _ in range(800):
        c = int(gen.integers(1, 8))
        deck.move_card_to_top(c)
        ref.insert(0, ref.pop(ref.index(c)))
        assert list(deck.by_position) == ref


def test_position_and_card_lookup():
    deck = Deck(np.array([3, 1, 2]))
    assert deck.position_of(3) == 1
    assert deck.card_at(2) == 1


def test_spec_prefix_suffix_partition():
    w = np.array([0.5, 0.3, 0.2])
    spec = ShuffleSpec.move_to_front(w)
    for k in range(3):
        before = w[:k].sum()
        after = w[k + 1 :].sum()
        assert abs(before + w[k] + after - 1.0) < 1e-12
        assert abs(spec.prefix_sums[k] - before) < 1e-12
        assert abs(spec.suffix_sums[k] - after) < 1e-12


def test_spec_third_rule_flag():
    assert ShuffleSpec.move_to_front(uniform_weights(4)).mtf_third_rule
    assert not ShuffleSpec.move_to_front([0.5, 0.3, 0.2]).mtf_third_rule


def test_mtf_requires_positive_weights():
    with pytest.raises(ValueError):
        ShuffleSpec.move_to_front([0.0, 0.5, 0.5])


def test_position_weighted_allows_zero_weights():
    spec = ShuffleSpec.position_weighted([0.0, 0.5, 0.5])
    assert spec.n == 3


def test_weights_must_sum_to_one():
    with pytest.raises(ValueError):
        ShuffleSpec.move_to_front([0.5, 0.4])


def test_sample_branch_is_zero_based_and_skips_zero_weights():
    spec = ShuffleSpec.position_weighted([0.0, 0.5, 0.5])
    branches = {spec.sample_branch(u) for u in np.linspace(0.0, 0.999, 400)}
    assert branches == {1, 2}


def test_sample_step_two_cards_symmetric():
    spec = ShuffleSpec.move_to_front(uniform_weights(2))
    gen = RngStream(8).generator()
    seen = {(1, 2): 0, (2, 1): 0}
    for _ in range(4000):
        deck, _, _ = sample_step(spec, make_deck(2), gen)
        seen[tuple(deck.by_position)] += 1
    # 4 sigma band around 2000 for a fair coin
    assert abs(seen[(1, 2)] - 2000) < 4 * np.sqrt(1000)


def test_sample_step_point_mass_at_bottom_is_deterministic():
    spec = ShuffleSpec.position_weighted([0.0, 0.0, 1.0])
    gen = RngStream(9).generator()
    for _ in range(20):
        deck, pos, card = sample_step(spec, make_deck(3), gen)
        assert list(deck.by_position) == [3, 1, 2]
        assert pos == 3 and card == 3


def test_sample_step_two_bottom_positions_split_evenly():
    spec = ShuffleSpec.position_weighted([0.0, 0.5, 0.5])
    gen = RngStream(10).generator()
    seen = {(2, 1, 3): 0, (3, 1, 2): 0}
    for _ in range(4000):
        deck, _, _ = sample_step(spec, make_deck(3), gen)
        seen[tuple(deck.by_position)] += 1
    assert set(seen) == {(2, 1, 3), (3, 1, 2)}
    assert abs(seen[(2, 1, 3)] - 2000) < 4 * np.sqrt(1000)


@pytest.mark.parametrize(
    "spec,deck",
    [
        (ShuffleSpec.move_to_front([0.5, 0.3, 0.2]), Deck(np.array([3, 1, 2]))),
        (ShuffleSpec.position_weighted([0.1, 0.2, 0.3, 0.4]), Deck(np.array([2, 4, 1, 3]))),
    ],
)
def test_one_step_law_matches_enumeration(spec, deck):
    # exact one-step distribution by enumerating the n branches
    exact = {}
    for b in range(spec.n):
        w = float(spec.weights[b])
        if w == 0.0:
            continue
        nxt = deck.copy()
        if spec.mode.value == "move_to_front":
            nxt.move_card_to_top(b + 1)
        else:
            nxt.move_position_to_top(b + 1)
        key = nxt.as_tuple()
        exact[key] = exact.get(key, 0.0) + w
    draws = 100_000
    gen = RngStream(11).generator()
    counts = dict.fromkeys(exact, 0)
    for _ in range(draws):
        out, _, _ = sample_step(spec, deck.copy(), gen)
        counts[out.as_tuple()] += 1
    for key, p in exact.items():
        sigma = np.sqrt(draws * p * (1.0 - p))
        assert abs(counts[key] - draws * p) <= 4.0 * sigma


def test_trajectories_reproducible_per_stream():
    spec = ShuffleSpec.move_to_front(uniform_weights(6))

    def run():
        gen = RngStream(99, 3).generator()
        deck = make_deck(6)
        path = []
        for _ in range(50):
            sample_step(spec, deck, gen)
            path.append(deck.as_tuple())
        return path

    assert run() == run()


def test_distinct_streams_differ():
    spec = ShuffleSpec.move_to_front(uniform_weights(6))

    def run(idx):
        gen = RngStream(99, idx).generator()
        deck = make_deck(6)
        for _ in range(30):
            sample_step(spec, deck, gen)
        return deck.as_tuple()

    assert any(run(0) != run(i) for i in range(1, 4))


def test_bottom_to_top_spec_layout():
    spec = bottom_to_top_spec(6, 2)
    assert list(spec.weights) == [0.0, 0.0, 0.0, 0.0, 0.5, 0.5]
    with pytest.raises(ValueError):
        bottom_to_top_spec(4, 5)


def test_two_point_spec_layout():
    spec = two_point_spec(8, 3)
    w = np.zeros(8)
    w[4] = 0.5
    w[7] = 0.5
    assert np.array_equal(spec.weights, w)
    with pytest.raises(ValueError):
        two_point_spec(4, 4)


def test_sample_step_rejects_size_mismatch():
    spec = ShuffleSpec.move_to_front(uniform_weights(3))
    with pytest.raises(ValueError):
        sample_step(spec, make_deck(4), RngStream(1).generator())
