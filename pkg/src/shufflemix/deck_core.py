"""Deck state and the elementary random-to-top move.

Both shuffle families studied by this package move exactly one card to the
top of the deck per step; they differ only in how that card is chosen.  A
move-to-front step draws a card identity from a fixed weight vector, a
position-weighted step draws a deck position instead.  ``ShuffleSpec``
captures the weights and the choice of family; ``Deck`` holds the
arrangement with O(1) lookups in both directions.

Cards and positions are 1-indexed.  Position 1 is the top of the deck.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .rng import RngStream

__all__ = [
    "Deck",
    "ShuffleMode",
    "ShuffleSpec",
    "make_deck",
    "apply_move_to_top",
    "sample_step",
    "uniform_weights",
    "bottom_to_top_spec",
    "two_point_spec",
]


class ShuffleMode(enum.Enum):
    """How the moved card is selected: by card identity or by position."""

    MOVE_TO_FRONT = "move_to_front"
    POSITION_WEIGHTED = "position_weighted"


class Deck:
    """A permutation of the cards 1..n with O(1) card/position lookups.

    Storage is a circular buffer with a moving top pointer: moving the card
    at position q to the top costs O(min(q-1, n-q)) writes rather than O(n).
    Long simulations push ~1e8 moves through decks of several hundred cards,
    so the cheap path for bottom-of-the-deck moves matters.
    """

    __slots__ = ("n", "_buf", "_top", "_slot")

    def __init__(self, cards):
        cards = np.asarray(cards, dtype=np.int64)
        n = int(cards.size)
        if n == 0:
            raise ValueError("a deck needs at least one card")
        if not np.array_equal(np.sort(cards), np.arange(1, n + 1)):
            raise ValueError("cards must be a permutation of 1..n")
        self.n = n
        self._buf = cards.copy()
        self._top = 0
        self._slot = np.empty(n + 1, dtype=np.int64)
        self._slot[0] = -1  # index 0 unused; cards are 1-based
        self._slot[cards] = np.arange(n)

    @property
    def by_position(self) -> np.ndarray:
        """Cards from top to bottom: entry j is the card at position j+1."""
        return np.roll(self._buf, -self._top)

    @property
    def by_card(self) -> np.ndarray:
        """Positions by card: entry c-1 is the position of card c."""
        n = self.n
        return (self._slot[1:] - self._top) % n + 1

    def position_of(self, card: int) -> int:
        return int((self._slot[card] - self._top) % self.n + 1)

    def card_at(self, pos: int) -> int:
        if not 1 <= pos <= self.n:
            raise ValueError(f"position {pos} out of range 1..{self.n}")
        return int(self._buf[(self._top + pos - 1) % self.n])

    def move_position_to_top(self, pos: int) -> int:
        """Move the card at ``pos`` to position 1; returns the moved card.

        Cards formerly at positions 1..pos-1 shift down one place; positions
        below ``pos`` are untouched.  Internally the cheaper of two shifts is
        used: rotate the prefix forward, or rotate the suffix back and move
        the top pointer.
        """
        n = self.n
        if not 1 <= pos <= n:
            raise ValueError(f"position {pos} out of range 1..{n}")
        top = self._top
        card = int(self._buf[(top + pos - 1) % n])
        if pos == 1:
            return card
        if pos - 1 <= n - pos:
            # shift positions 1..pos-1 down into 2..pos, reuse the top slot
            src = (top + np.arange(pos - 1)) % n
            dst = (top + np.arange(1, pos)) % n
            self._buf[dst] = self._buf[src]
            self._slot[self._buf[dst]] = dst
            self._buf[top] = card
            self._slot[card] = top
        else:
            # shift positions pos+1..n back one slot and retreat the pointer
            src = (top + np.arange(pos, n)) % n
            dst = (top + np.arange(pos - 1, n - 1)) % n
            self._buf[dst] = self._buf[src]
            self._slot[self._buf[dst]] = dst
            new_top = (top - 1) % n
            self._buf[new_top] = card
            self._slot[card] = new_top
            self._top = new_top
        return card

    def move_card_to_top(self, card: int) -> int:
        """Move ``card`` to the top; returns the position it was moved from."""
        if not 1 <= card <= self.n:
            raise ValueError(f"card {card} out of range 1..{self.n}")
        pos = self.position_of(card)
        self.move_position_to_top(pos)
        return pos

    def copy(self) -> "Deck":
        return Deck(self.by_position)

    def as_tuple(self) -> tuple:
        return tuple(int(c) for c in self.by_position)

    def __eq__(self, other):
        if not isinstance(other, Deck):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.by_position, other.by_position)

    def __repr__(self):
        return f"Deck({list(self.by_position)})"


def make_deck(n: int, order: str = "identity") -> Deck:
    """Build a deck of n cards in a named arrangement.

    Args:
        n: card count, at least 1.
        order: "identity" puts card j at position j; "reversed" puts card
            n+1-j at position j (the worst-case start for the lower-bound
            experiments).
    """
    if n < 1:
        raise ValueError("deck size must be at least 1")
    if order == "identity":
        return Deck(np.arange(1, n + 1))
    if order == "reversed":
        return Deck(np.arange(n, 0, -1))
    raise ValueError(f"unknown order {order!r}; expected 'identity' or 'reversed'")


def apply_move_to_top(deck: Deck, pos: int) -> Deck:
    """Move the card at ``pos`` to the top of ``deck`` (in place) and return it."""
    deck.move_position_to_top(pos)
    return deck


@dataclass(frozen=True, eq=False)
class ShuffleSpec:
    """Weight vector plus the family tag, with derived lookup tables.

    ``prefix_sums[q-1]`` is the weight mass strictly before index q and
    ``suffix_sums[q-1]`` the mass strictly after, so for every q
    prefix + weight + suffix = 1 up to rounding.  ``cumulative`` backs the
    O(log n) branch sampler.  ``mtf_third_rule`` records whether every
    weight is at most 1/3, the hypothesis under which the coupon-collector
    sandwich is guaranteed.
    """

    n: int
    weights: np.ndarray
    mode: ShuffleMode
    prefix_sums: np.ndarray
    suffix_sums: np.ndarray
    cumulative: np.ndarray
    mtf_third_rule: bool

    @classmethod
    def move_to_front(cls, weights) -> "ShuffleSpec":
        return _build_spec(weights, ShuffleMode.MOVE_TO_FRONT)

    @classmethod
    def position_weighted(cls, weights) -> "ShuffleSpec":
        return _build_spec(weights, ShuffleMode.POSITION_WEIGHTED)

    def sample_branch(self, u: float) -> int:
        """Map a uniform draw in [0, 1) to a 0-based branch index.

        Branches with zero weight are never returned.
        """
        idx = int(np.searchsorted(self.cumulative, u, side="right"))
        if idx >= self.n:
            idx = self.n - 1
        return int(self._snap()[idx])

    def _snap(self) -> np.ndarray:
        # lazily built map: index -> nearest positive-weight index at or below
        snap = getattr(self, "_snap_cache", None)
        if snap is None:
            snap = np.empty(self.n, dtype=np.int64)
            last = int(np.nonzero(self.weights > 0)[0][0])
            for i in range(self.n):
                if self.weights[i] > 0:
                    last = i
                snap[i] = last
            snap.setflags(write=False)
            object.__setattr__(self, "_snap_cache", snap)
        return snap


def _build_spec(weights, mode: ShuffleMode) -> ShuffleSpec:
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weights must be a nonempty 1-d sequence")
    n = int(w.size)
    if mode is ShuffleMode.MOVE_TO_FRONT:
        if np.any(w <= 0.0):
            raise ValueError("move-to-front weights must all be positive")
    elif np.any(w < 0.0):
        raise ValueError("weights must be nonnegative")
    # accumulate in extended precision so the three-way split m + p + M = 1
    # survives n ~ 1e6 without drifting past 1e-12
    acc = np.cumsum(w.astype(np.longdouble))
    total = float(acc[-1])
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"weights must sum to 1 within 1e-12 (got {total!r})")
    prefix = np.empty(n)
    prefix[0] = 0.0
    prefix[1:] = acc[:-1].astype(np.float64)
    suffix = (acc[-1] - acc).astype(np.float64)
    split_err = np.max(np.abs(prefix + w + suffix - 1.0))
    if split_err > 1e-12:
        raise ValueError(f"prefix/suffix split drifted by {split_err:g}")
    cum = np.minimum(acc.astype(np.float64), 1.0)
    cum[-1] = 1.0  # guard the u -> 1 edge of the sampler
    third = bool(np.max(w) <= 1.0 / 3.0 + 1e-12)
    for arr in (w, prefix, suffix, cum):
        arr.setflags(write=False)
    return ShuffleSpec(
        n=n,
        weights=w,
        mode=mode,
        prefix_sums=prefix,
        suffix_sums=suffix,
        cumulative=cum,
        mtf_third_rule=third,
    )


def sample_step(spec: ShuffleSpec, deck: Deck, rng) -> tuple:
    """One random-to-top step; returns (deck, chosen_position, chosen_card).

    ``rng`` may be an ``RngStream`` (a fresh generator is built, so pass a
    ``numpy.random.Generator`` directly when stepping a trajectory) or any
    numpy Generator.
    """
    if spec.n != deck.n:
        raise ValueError(f"spec has n={spec.n} but deck has n={deck.n}")
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    branch = spec.sample_branch(gen.random())
    if spec.mode is ShuffleMode.MOVE_TO_FRONT:
        card = branch + 1
        pos = deck.position_of(card)
        deck.move_position_to_top(pos)
    else:
        pos = branch + 1
        card = deck.move_position_to_top(pos)
    return deck, pos, card


def uniform_weights(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be at least 1")
    return np.full(n, 1.0 / n)


def bottom_to_top_spec(n: int, k: int) -> ShuffleSpec:
    """Position-weighted spec with weight 1/k on each of the bottom k positions."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n (got k={k}, n={n})")
    w = np.zeros(n)
    w[n - k :] = 1.0 / k
    return ShuffleSpec.position_weighted(w)


def two_point_spec(n: int, k: int) -> ShuffleSpec:
    """Position-weighted spec with weight 1/2 at positions n-k and n."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1 (got k={k}, n={n})")
    w = np.zeros(n)
    w[n - k - 1] = 0.5
    w[n - 1] = 0.5
    return ShuffleSpec.position_weighted(w)
