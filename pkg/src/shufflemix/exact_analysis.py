"""Exact distributional analysis for small decks.

Distributions over all n! arrangements are stored as dense vectors indexed
by the lexicographic rank of the permutation (factorial number system), so
everything here is exact up to float rounding.  The one-step operator is
applied sparsely: each state has only n successors, one per branch, and the
update is a weighted scatter-add.  Deck sizes are capped at 8 (40320
states).

The module also builds the n x n transition matrix of a single tracked
card's position under a position-weighted shuffle, whose spectrum drives
the lower-bound machinery in :mod:`shufflemix.spectral`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .deck_core import Deck, ShuffleMode, ShuffleSpec
from .errors import CapExceededError, CapacityError, NoConvergenceError

__all__ = [
    "MAX_EXACT_N",
    "PermDistribution",
    "SingleCardMatrix",
    "perm_rank",
    "perm_unrank",
    "state_permutations",
    "mtf_stationary_prob",
    "mtf_stationary_distribution",
    "gr_stationary_distribution",
    "stationary_distribution",
    "evolve_distribution",
    "tv_distance",
    "exact_mixing_time",
    "single_card_matrix",
    "matrix_spectrum",
]

MAX_EXACT_N = 8
_FACT = [1, 1, 2, 6, 24, 120, 720, 5040, 40320]


def perm_rank(perm) -> int:
    """Lexicographic rank of a permutation of 1..n, in 0..n!-1."""
    p = [int(c) for c in perm]
    n = len(p)
    if sorted(p) != list(range(1, n + 1)):
        raise ValueError("input is not a permutation of 1..n")
    rank = 0
    for i in range(n):
        smaller = sum(1 for j in range(i + 1, n) if p[j] < p[i])
        rank += smaller * _FACT[n - 1 - i]
    return rank


def perm_unrank(n: int, rank: int) -> tuple:
    """Inverse of :func:`perm_rank`."""
    if not 0 <= rank < _FACT[n]:
        raise ValueError(f"rank {rank} out of range for n={n}")
    avail = list(range(1, n + 1))
    out = []
    for i in range(n):
        idx, rank = divmod(rank, _FACT[n - 1 - i])
        out.append(avail.pop(idx))
    return tuple(out)


@lru_cache(maxsize=None)
def state_permutations(n: int) -> tuple:
    """All permutations of 1..n in rank order (cached)."""
    _check_exact_n(n)
    return tuple(itertools.permutations(range(1, n + 1)))


def _check_exact_n(n: int):
    if n < 1:
        raise ValueError("n must be at least 1")
    if n > MAX_EXACT_N:
        raise CapacityError(
            f"exact analysis is capped at n={MAX_EXACT_N} ({_FACT[MAX_EXACT_N]} states); got n={n}"
        )


@dataclass(frozen=True, eq=False)
class PermDistribution:
    """Probability vector over all arrangements of an n-card deck.

    Entry r is the probability of the permutation with rank r.
    """

    n: int
    probs: np.ndarray

    def __post_init__(self):
        _check_exact_n(self.n)
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.shape != (_FACT[self.n],):
            raise ValueError(f"need {_FACT[self.n]} entries for n={self.n}")
        if np.any(probs < -1e-15):
            raise ValueError("probabilities must be nonnegative")
        if abs(float(probs.sum()) - 1.0) > 1e-10:
            raise ValueError("probabilities must sum to 1 within 1e-10")
        object.__setattr__(self, "probs", probs)

    @classmethod
    def point_mass(cls, state) -> "PermDistribution":
        """Point mass at a deck arrangement (a Deck or a card sequence)."""
        order = state.as_tuple() if isinstance(state, Deck) else tuple(int(c) for c in state)
        n = len(order)
        probs = np.zeros(_FACT[n])
        probs[perm_rank(order)] = 1.0
        return cls(n, probs)

    @classmethod
    def uniform(cls, n: int) -> "PermDistribution":
        _check_exact_n(n)
        return cls(n, np.full(_FACT[n], 1.0 / _FACT[n]))

    def expectation(self, func) -> float:
        """Mean of ``func(perm_tuple)`` under this distribution."""
        states = state_permutations(self.n)
        return float(sum(p * func(s) for p, s in zip(self.probs, states) if p != 0.0))


@lru_cache(maxsize=None)
def _successor_table(mode_value: str, n: int) -> np.ndarray:
    """table[r, b] = rank of the state reached from rank r via branch b.

    Branch b moves card b+1 (move-to-front) or the card at position b+1
    (position-weighted) to the top.  The table is weight-independent, so it
    is shared across all specs of a given family and size.
    """
    perms = state_permutations(n)
    index = {p: r for r, p in enumerate(perms)}
    table = np.empty((len(perms), n), dtype=np.int64)
    for r, p in enumerate(perms):
        for b in range(n):
            q = p.index(b + 1) if mode_value == "move_to_front" else b
            succ = (p[q],) + p[:q] + p[q + 1 :]
            table[r, b] = index[succ]
    return table


def _apply_operator(spec: ShuffleSpec, probs: np.ndarray) -> np.ndarray:
    table = _successor_table(spec.mode.value, spec.n)
    out = np.zeros_like(probs)
    for b in range(spec.n):
        w = spec.weights[b]
        if w == 0.0:
            continue
        out += w * np.bincount(table[:, b], weights=probs, minlength=probs.size)
    return out


def evolve_distribution(spec: ShuffleSpec, dist: PermDistribution, t: int) -> PermDistribution:
    """Apply the exact one-step operator ``t`` times."""
    if spec.n != dist.n:
        raise ValueError(f"spec has n={spec.n} but distribution has n={dist.n}")
    if t < 0:
        raise ValueError("step count must be nonnegative")
    probs = dist.probs
    for _ in range(t):
        probs = _apply_operator(spec, probs)
    return PermDistribution(dist.n, probs)


def tv_distance(mu, nu) -> float:
    """Total variation distance: half the l1 distance between the vectors.

    Accepts :class:`PermDistribution` objects or plain probability vectors.
    """
    a = mu.probs if isinstance(mu, PermDistribution) else np.asarray(mu, dtype=np.float64)
    b = nu.probs if isinstance(nu, PermDistribution) else np.asarray(nu, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"size mismatch: {a.shape} vs {b.shape}")
    return 0.5 * float(np.abs(a - b).sum())


def mtf_stationary_prob(spec: ShuffleSpec, order) -> float:
    """Stationary probability of one arrangement under a move-to-front spec.

    The arrangement (c1, ..., cn) has stationary probability
    prod_j p_{c_j} / (1 - sum_{i<j} p_{c_i}).  Each denominator is computed
    as the weight mass not yet placed, so the final factor is exactly 1.
    """
    if spec.mode is not ShuffleMode.MOVE_TO_FRONT:
        raise ValueError("stationary product formula applies to move-to-front specs only")
    order = np.asarray([int(c) for c in order])
    if not np.array_equal(np.sort(order), np.arange(1, spec.n + 1)):
        raise ValueError("order is not a permutation of 1..n")
    w = spec.weights[order - 1].astype(np.longdouble)
    tail = np.cumsum(w[::-1])[::-1]  # mass still unplaced at each slot
    return float(np.prod(w / tail))


def mtf_stationary_distribution(spec: ShuffleSpec) -> PermDistribution:
    """Full stationary vector from the product formula (n <= 8)."""
    _check_exact_n(spec.n)
    perms = np.array(state_permutations(spec.n), dtype=np.int64)
    w = spec.weights[perms - 1].astype(np.longdouble)
    tail = np.cumsum(w[:, ::-1], axis=1)[:, ::-1]
    probs = np.prod(w / tail, axis=1).astype(np.float64)
    return PermDistribution(spec.n, probs)


def gr_stationary_distribution(
    spec: ShuffleSpec, tol: float = 1e-13, max_sweeps: int = 10**6
) -> PermDistribution:
    """Stationary vector of a position-weighted spec by fixed-point iteration.

    Every position-weighted branch is a bijection on arrangements, so the
    chain is doubly stochastic and the uniform vector is the natural initial
    guess; the iteration then verifies the fixed point to ``tol`` (and would
    converge from here even for periodic weight choices).
    """
    if spec.mode is not ShuffleMode.POSITION_WEIGHTED:
        raise ValueError("fixed-point stationary solve applies to position-weighted specs")
    _check_exact_n(spec.n)
    probs = np.full(_FACT[spec.n], 1.0 / _FACT[spec.n])
    residual = np.inf
    for _ in range(max_sweeps):
        nxt = _apply_operator(spec, probs)
        residual = float(np.abs(nxt - probs).sum())
        probs = nxt
        if residual <= tol:
            return PermDistribution(spec.n, probs)
    raise NoConvergenceError(
        f"stationary iteration did not reach {tol:g} in {max_sweeps} sweeps",
        iterations=max_sweeps,
        residual=residual,
    )


def stationary_distribution(spec: ShuffleSpec) -> PermDistribution:
    """Stationary law by the method appropriate to the family."""
    if spec.mode is ShuffleMode.MOVE_TO_FRONT:
        return mtf_stationary_distribution(spec)
    return gr_stationary_distribution(spec)


def exact_mixing_time(
    spec: ShuffleSpec, s0, threshold: float = 0.25, step_cap: int = 100_000
) -> int:
    """Smallest t with TV(law of X_t, stationary) <= threshold, from start s0.

    The scan is a plain forward iteration; TV is not assumed monotone in t.
    Raises :class:`CapExceededError` carrying the last TV value if the
    threshold is never reached within ``step_cap`` steps (e.g. for periodic
    weight choices that never mix).
    """
    pi = stationary_distribution(spec)
    dist = PermDistribution.point_mass(s0)
    if spec.n != dist.n:
        raise ValueError("start state size does not match spec")
    tv = tv_distance(dist, pi)
    if tv <= threshold:
        return 0
    for t in range(1, step_cap + 1):
        dist = evolve_distribution(spec, dist, 1)
        tv = tv_distance(dist, pi)
        if tv <= threshold:
            return t
    raise CapExceededError(
        f"TV still {tv:.6f} > {threshold} after {step_cap} steps",
        steps=step_cap,
        last_value=tv,
    )


@dataclass(frozen=True, eq=False)
class SingleCardMatrix:
    """Row-stochastic transition matrix of one card's position.

    Row q has mass only at columns 1, q and q+1: the tracked card jumps to
    the top when its own position is drawn, keeps its position when a
    position above it is drawn, and moves down one step when a position
    below it is drawn.
    """

    n: int
    entries: np.ndarray

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=np.float64)
        if entries.shape != (self.n, self.n):
            raise ValueError("entries must be an n x n matrix")
        rowsum_err = np.max(np.abs(entries.sum(axis=1) - 1.0))
        if rowsum_err > 1e-12:
            raise ValueError(f"rows must sum to 1 (max error {rowsum_err:g})")
        object.__setattr__(self, "entries", entries)


def single_card_matrix(spec: ShuffleSpec) -> SingleCardMatrix:
    """Single-card position chain of a position-weighted spec."""
    if spec.mode is not ShuffleMode.POSITION_WEIGHTED:
        raise ValueError("the single-card position chain is defined for position weights")
    n = spec.n
    a = np.zeros((n, n))
    idx = np.arange(n)
    a[:, 0] += spec.weights           # own position drawn: jump to top
    a[idx, idx] += spec.prefix_sums   # a position above drawn: stay put
    a[idx[:-1], idx[:-1] + 1] += spec.suffix_sums[:-1]  # below drawn: move down
    return SingleCardMatrix(n, a)


def matrix_spectrum(m: SingleCardMatrix, max_n: int = 512) -> np.ndarray:
    """All eigenvalues of the single-card chain (dense solve, n <= 512)."""
    if m.n > max_n:
        raise CapacityError(f"dense spectrum capped at n={max_n}; got n={m.n}")
    return np.linalg.eigvals(m.entries)
