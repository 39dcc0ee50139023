"""Coupling simulations for move-to-front and bottom-k shuffles.

The bottom-k machinery works in a rotating frame: position y = (x - t)
mod n, so the deterministic downward drift of untouched cards is frozen
out and only pick events move anything.  Both chains in a coupled pair
share the slot draw when the first deck's pick is visible in the second
deck's window, and otherwise the second deck picks uniformly among its
window cards that the first window does not hold.  Pairedness (a card
sitting in both windows) is absorbing until the joint pick sends the
card to the same frame position in both decks, which is what makes the
matched set grow to everything.

Randomness is a counter RNG (see rng / _kernels), one fixed counter
index per logical decision, so the compiled kernels and the interpreted
twins here produce bit-identical runs from the same seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .coupon_bounds import tau_u
from .deck_core import Deck, ShuffleSpec, make_deck
from .errors import CapExceededError, ShufflemixError
from .rng import RngStream, counter_uniform


def _require_stream(rng) -> RngStream:
    if not isinstance(rng, RngStream):
        raise TypeError("counter-seeded simulation needs an RngStream")
    return rng


def _as_generator(rng):
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError("rng must be an RngStream or numpy Generator")


def _seed_pair(rng):
    if isinstance(rng, RngStream):
        return (rng.master_seed, rng.stream_index)
    return None


# ---------------------------------------------------------------------------
# rotating frame


def shift_frame(deck: Deck, t: int) -> Deck:
    """Relabel positions by y = (x - t) mod n (0-based positions)."""
    n = deck.n
    return Deck(np.roll(deck.by_position, -(t % n)))


class FrameChain:
    """Bottom-k dynamics in the frame where untouched cards stand still.

    Slot s of the pick window (s = 0 topmost, k-1 the deck bottom) sits
    at frame position (base + s) mod n with base = (n - k - t) mod n.
    A step picks one slot, slides the slots above it down one frame
    position, and parks the picked card at (base + k - 1) mod n, which
    is the deck top in cyclic frame order.
    """

    __slots__ = ("n", "k", "t", "yof", "cardat")

    def __init__(self, deck: Deck, k: int, t: int = 0):
        n = deck.n
        if not 1 <= k <= n:
            raise ValueError("need 1 <= k <= n")
        self.n = n
        self.k = k
        self.t = int(t)
        self.yof = np.asarray(deck.by_card, dtype=np.int64) - 1
        self.cardat = np.empty(n, dtype=np.int64)
        self.cardat[self.yof] = np.arange(n, dtype=np.int64)

    @property
    def window_base(self) -> int:
        return (self.n - self.k - self.t) % self.n

    def window_cards(self) -> list[int]:
        """1-based cards in slots 0..k-1 (top of the block downward)."""
        b = self.window_base
        return [int(self.cardat[(b + s) % self.n]) + 1 for s in range(self.k)]

    def step(self, slot: int) -> int:
        """Pick the given window slot; returns the 1-based picked card."""
        n, k = self.n, self.k
        if not 0 <= slot < k:
            raise ValueError("slot out of range")
        b = self.window_base
        picked = int(self.cardat[(b + slot) % n])
        for s in range(slot + 1, k):
            y = (b + s) % n
            c = self.cardat[y]
            ynew = (y - 1) % n
            self.yof[c] = ynew
            self.cardat[ynew] = c
        yexit = (b + k - 1) % n
        self.yof[picked] = yexit
        self.cardat[yexit] = picked
        self.t += 1
        return picked + 1

    def to_deck(self) -> Deck:
        arr = np.empty(self.n, dtype=np.int64)
        arr[(self.yof + self.t) % self.n] = np.arange(1, self.n + 1)
        return Deck(arr)


# ---------------------------------------------------------------------------
# coupled bottom-k chains


@dataclass
class B2TTrace:
    """Step log of a coupled bottom-k run (0-based cards and slots)."""

    n: int
    k: int
    seed: int
    yof1_0: np.ndarray
    yof2_0: np.ndarray
    steps: list = field(default_factory=list)  # (t, i1, c1, i2, c2)


@dataclass
class CouplingSample:
    """One coupled run: coalescence time plus structural verdicts."""

    T: int
    seeds: tuple | None
    touched_all_but_one_time: int | None
    matched_history_ok: bool
    trace: B2TTrace | None = None


def _b2t_default_cap(n: int, k: int) -> int:
    upper = 4.0 * n**3 * math.log(max(n, 2)) / (math.pi**2 * k * (k - 1))
    return max(int(100 * upper), 1000)


def _couple_bottom_k_py(yof1, yof2, n, k, seed, cap, post_steps, trace=None):
    """Interpreted twin of _kernels.couple_bottom_k (same draws, same order)."""
    cardat1 = np.empty(n, np.int64)
    cardat2 = np.empty(n, np.int64)
    cardat1[yof1] = np.arange(n)
    cardat2[yof2] = np.arange(n)
    paired = np.zeros(n, bool)
    matched = int(np.count_nonzero(yof1 == yof2))
    ok = True
    T = -1
    t = 0

    def draw_slot(index, size):
        i = int(counter_uniform(seed, index) * size)
        return size - 1 if i >= size else i

    def move(yof_a, yof_b, cardat, b, slot, picked):
        nonlocal matched
        for s in range(slot + 1, k):
            y = (b + s) % n
            c = cardat[y]
            ynew = (y - 1) % n
            if yof_a[c] == yof_b[c]:
                matched -= 1
            yof_a[c] = ynew
            cardat[ynew] = c
            if yof_a[c] == yof_b[c]:
                matched += 1
        yexit = (b + k - 1) % n
        if yof_a[picked] == yof_b[picked]:
            matched -= 1
        yof_a[picked] = yexit
        cardat[yexit] = picked
        if yof_a[picked] == yof_b[picked]:
            matched += 1

    while t < cap:
        if matched == n:
            T = t
            break
        b = (n - k - t) % n
        for s in range(k):
            y = (b + s) % n
            ca = cardat1[y]
            if (yof2[ca] - b) % n < k:
                paired[ca] = True
            elif paired[ca]:
                ok = False
            cb = cardat2[y]
            if paired[cb] and (yof1[cb] - b) % n >= k:
                ok = False

        i1 = draw_slot(2 * t, k)
        c1 = int(cardat1[(b + i1) % n])
        s2 = (int(yof2[c1]) - b) % n
        if s2 < k:
            c2, i2 = c1, s2
        else:
            candidates = []
            for s in range(k):
                cb = int(cardat2[(b + s) % n])
                if (int(yof1[cb]) - b) % n >= k:
                    candidates.append((s, cb))
            j = draw_slot(2 * t + 1, len(candidates))
            i2, c2 = candidates[j]
            if paired[c1] or paired[c2]:
                ok = False

        if trace is not None:
            trace.steps.append((t, i1, c1, i2, c2))
        move(yof1, yof2, cardat1, b, i1, c1)
        move(yof2, yof1, cardat2, b, i2, c2)
        if c1 == c2 and yof1[c1] != yof2[c1]:
            ok = False
        t += 1

    if T >= 0:
        for extra in range(post_steps):
            tt = T + extra
            if matched != n:
                ok = False
                break
            b = (n - k - tt) % n
            i1 = draw_slot(2 * tt, k)
            c1 = int(cardat1[(b + i1) % n])
            if trace is not None:
                trace.steps.append((tt, i1, c1, i1, c1))
            move(yof1, yof2, cardat1, b, i1, c1)
            move(yof2, yof1, cardat2, b, i1, c1)
            if matched != n:
                ok = False
    return T, ok


def couple_b2t(
    n: int,
    k: int,
    rng,
    x0: Deck | None = None,
    cap: int | None = None,
    record_trace: bool = False,
    post_check_steps: int = 100,
    engine: str = "compiled",
) -> CouplingSample:
    """Run one coupled pair of bottom-k chains to coalescence.

    The first deck starts at x0 (identity by default), the second at an
    independent uniform permutation drawn from the stream's generator;
    step randomness then comes from the stream's counter seed.  T is the
    first step at which every card sits at equal frame positions, which
    in the original coordinates means equal decks up to the shared
    rotation.  Raises CapExceededError when the cap is hit first.
    """
    if k < 2 or k > n:
        raise ValueError("need 2 <= k <= n for a coalescing coupling")
    stream = _require_stream(rng)
    if x0 is None:
        x0 = make_deck(n)
    elif x0.n != n:
        raise ValueError("x0 size does not match n")
    if cap is None:
        cap = _b2t_default_cap(n, k)
    gen = stream.generator()
    yof1 = np.asarray(x0.by_card, dtype=np.int64) - 1
    yof2 = gen.permutation(n).astype(np.int64)
    seed = stream.kernel_seed()
    trace = None
    if record_trace:
        engine = "python"
        trace = B2TTrace(n, k, int(seed), yof1.copy(), yof2.copy())
    if engine == "python":
        T, ok = _couple_bottom_k_py(
            yof1, yof2, n, k, seed, cap, post_check_steps, trace
        )
    elif engine == "compiled":
        T, ok = _kernels.couple_bottom_k(
            yof1, yof2, n, k, np.uint64(seed), cap, post_check_steps
        )
        T = int(T)
    else:
        raise ValueError("engine must be 'compiled' or 'python'")
    if T < 0:
        raise CapExceededError(
            f"no coalescence within {cap} steps", steps=cap
        )
    return CouplingSample(int(T), _seed_pair(stream), None, bool(ok), trace)


def check_b2t_trace(trace: B2TTrace) -> bool:
    """Replay a recorded coupled run against the raw (unrotated) chains.

    Verifies three things per step: the logged picks are what the frame
    state dictates, the divergent-pick rule was respected (shared card
    when visible, otherwise a window-2 card outside window 1), and both
    frame states continue to match raw decks through the rotation map.
    """
    n, k = trace.n, trace.k
    f1 = FrameChain(Deck(np.argsort(trace.yof1_0) + 1), k)
    f2 = FrameChain(Deck(np.argsort(trace.yof2_0) + 1), k)
    # FrameChain stores y via by_card at t=0, so yof must round-trip
    if not (np.array_equal(f1.yof, trace.yof1_0) and np.array_equal(f2.yof, trace.yof2_0)):
        return False
    raw1, raw2 = f1.to_deck(), f2.to_deck()
    spec = ShuffleSpec.position_weighted(
        np.concatenate([np.zeros(n - k), np.full(k, 1.0 / k)])
    )
    for t, i1, c1, i2, c2 in trace.steps:
        if t != f1.t:
            return False
        u = counter_uniform(trace.seed, 2 * t)
        slot = min(int(u * k), k - 1)
        if slot != i1:
            return False
        w1 = [c - 1 for c in f1.window_cards()]
        w2 = [c - 1 for c in f2.window_cards()]
        if w1[i1] != c1 or w2[i2] != c2:
            return False
        if c1 in w2:
            if c2 != c1:
                return False
        elif c2 in w1 or c2 not in w2:
            return False
        p1 = f1.step(i1) - 1
        p2 = f2.step(i2) - 1
        if p1 != c1 or p2 != c2:
            return False
        # the same slot in raw coordinates is position n-k+i (0-based)
        moved1 = raw1.move_position_to_top(n - k + i1 + 1)
        moved2 = raw2.move_position_to_top(n - k + i2 + 1)
        if moved1 != c1 + 1 or moved2 != c2 + 1:
            return False
        if raw1 != f1.to_deck() or raw2 != f2.to_deck():
            return False
        # the frame view of the raw deck is exactly the cardat table
        if not np.array_equal(shift_frame(raw1, f1.t).by_position, f1.cardat + 1):
            return False
        if not np.array_equal(shift_frame(raw2, f2.t).by_position, f2.cardat + 1):
            return False
        if spec.sample_branch(u) != n - k + i1:
            return False
    return True


# ---------------------------------------------------------------------------
# move-to-front coupling


def stationary_mtf_deck(spec_or_weights, gen) -> Deck:
    """Draw a deck from the move-to-front stationary law.

    Sequential construction: the top card is drawn with the card weights,
    the next with the weights renormalized over what remains, and so on.
    The resulting order has probability prod_j w(c_j) / tail_mass(c_j..),
    which is exactly the chain's stationary product form.
    """
    if isinstance(spec_or_weights, ShuffleSpec):
        w = np.asarray(spec_or_weights.weights, dtype=float)
    else:
        w = np.asarray(spec_or_weights, dtype=float)
    gen = _as_generator(gen)
    n = w.size
    remaining = list(range(n))
    weights = w.copy()
    order = np.empty(n, dtype=np.int64)
    for j in range(n):
        total = weights[remaining].sum()
        u = gen.random() * total
        acc = 0.0
        pick = remaining[-1]
        for idx in remaining:
            acc += weights[idx]
            if u < acc:
                pick = idx
                break
        order[j] = pick + 1
        remaining.remove(pick)
    return Deck(order)


def couple_mtf(
    weights_or_spec,
    rng,
    x0: Deck | None = None,
    y0: Deck | None = None,
    cap: int | None = None,
    post_check_steps: int = 0,
) -> CouplingSample:
    """Coupled move-to-front chains driven by one shared card draw per step.

    The second deck starts stationary (drawn here unless y0 is given), so
    P(T > t) bounds the first chain's distance from stationarity.  Both
    decks move the same card each step; cards touched so far occupy the
    top block in the same order in both decks, and the run also records
    the first time all but one card have been touched, which dominates T.
    """
    if isinstance(weights_or_spec, ShuffleSpec):
        spec = weights_or_spec
    else:
        spec = ShuffleSpec.move_to_front(weights_or_spec)
    n = spec.n
    gen = _as_generator(rng)
    if x0 is None:
        x0 = make_deck(n)
    elif x0.n != n:
        raise ValueError("x0 size does not match the weights")
    if y0 is None:
        y0 = stationary_mtf_deck(spec, gen)
    elif y0.n != n:
        raise ValueError("y0 size does not match the weights")
    if cap is None:
        cap = 100 * max(tau_u(spec.weights), n, 1)
    x = x0.copy()
    y = y0.copy()
    touched = np.zeros(n + 1, dtype=bool)
    n_touched = 0
    ok = True
    T = 0 if x == y else None
    tabo = 0 if n <= 1 else None
    t = 0
    while T is None or tabo is None or t < T + post_check_steps:
        if t >= cap:
            raise CapExceededError(
                f"no coalescence within {cap} steps", steps=cap,
                last_value=n_touched,
            )
        u = gen.random()
        card = spec.sample_branch(u) + 1
        x.move_card_to_top(card)
        y.move_card_to_top(card)
        t += 1
        if not touched[card]:
            touched[card] = True
            n_touched += 1
        if not np.array_equal(
            x.by_card[touched[1:]], y.by_card[touched[1:]]
        ):
            ok = False
        if tabo is None and n_touched >= n - 1:
            tabo = t
        if T is None and x == y:
            T = t
        elif T is not None and x != y:
            ok = False
    if tabo is not None and T > tabo:
        ok = False
    return CouplingSample(T, _seed_pair(rng), tabo, ok)


# ---------------------------------------------------------------------------
# single-card cycle statistics


@dataclass(frozen=True)
class CycleStats:
    """Exit-to-exit statistics of one tracked card under bottom-k moves."""

    n: int
    k: int
    cycles: int
    displacement_mean: float
    displacement_var: float
    duration_mean: float
    duration_var: float
    max_displacement: int
    min_duration: int


def cycle_stats(n: int, k: int, cycles: int, rng) -> CycleStats:
    """Simulate window visits of one card; moments of drift and timing.

    Each cycle drifts n - k steps outside the window, then runs a slot
    walk of geometric-like length G: displacement k - G (at most k - 1)
    and duration n - k + G (at least n - k + 1, mean n, variance
    k(k-1)).  k = 1 is the deterministic rotation: no displacement.
    """
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    if cycles < 2:
        raise ValueError("need at least 2 cycles for a variance")
    stream = _require_stream(rng)
    disp, dur, ok = _kernels.bottom_k_cycles(
        n, k, cycles, np.uint64(stream.kernel_seed())
    )
    if not ok:
        raise ShufflemixError("cycle bookkeeping mismatch (internal)")
    return CycleStats(
        n=n,
        k=k,
        cycles=cycles,
        displacement_mean=float(disp.mean()),
        displacement_var=float(disp.var(ddof=1)),
        duration_mean=float(dur.mean()),
        duration_var=float(dur.var(ddof=1)),
        max_displacement=int(disp.max()),
        min_duration=int(dur.min()),
    )


# ---------------------------------------------------------------------------
# tracked-position martingale for the half-deck two-point shuffle


_U_CONVENTION = (
    "positions 0-indexed; picks at k-1 and n-1 with k = n/2; "
    "U adds the centered mod-k change of z + max(z - k, 0) per step"
)


@dataclass(frozen=True)
class UStatTrace:
    """Position trace with mean-zero increments (len(u) = len(z) = t+1)."""

    n: int
    k: int
    z: np.ndarray
    u: np.ndarray
    v: np.ndarray
    convention: str = _U_CONVENTION


def _check_ustat_n(n: int) -> int:
    if n < 4 or n % 2:
        raise ValueError("the half-deck statistic needs even n >= 4")
    return n // 2


def u_stat_branch_table(n: int) -> list[list[tuple[float, int, int]]]:
    """Per-position branches as (probability, next position, increment).

    Positions below k-1 shift down deterministically with no increment;
    elsewhere a fair coin picks position k-1 or n-1 and the increment is
    the centered representative of the change mod k, which is 0 or +-1.
    """
    k = _check_ustat_n(n)
    table = []
    for z in range(n):
        if z < k - 1:
            table.append([(1.0, z + 1, 0)])
        elif z == k - 1:
            table.append([(0.5, 0, 0), (0.5, k, 0)])
        elif z < n - 1:
            table.append([(0.5, z, -1), (0.5, z + 1, 1)])
        else:
            table.append([(0.5, z, -1), (0.5, 0, 1)])
    return table


def ustat_conditional_means(n: int) -> np.ndarray:
    """E[increment | position] for every position (exactly zero)."""
    table = u_stat_branch_table(n)
    return np.array(
        [math.fsum(p * v for p, _, v in branches) for branches in table]
    )


def u_statistic_trace(n: int, card: int, t_max: int, rng) -> UStatTrace:
    """Follow one card for t_max steps, recording the increment sums.

    Starts from the identity deck, so the 0-based start position is
    card - 1.  Coin t lives at counter index t whether or not the step
    needs it, matching the batch kernel's addressing exactly.
    """
    k = _check_ustat_n(n)
    if not 1 <= card <= n:
        raise ValueError("card out of range")
    stream = _require_stream(rng)
    seed = stream.kernel_seed()
    z = np.empty(t_max + 1, dtype=np.int64)
    u = np.empty(t_max + 1, dtype=np.int64)
    v = np.empty(t_max, dtype=np.int64)
    z[0] = card - 1
    u[0] = 0
    for t in range(t_max):
        coin = bool(counter_uniform(seed, t) < 0.5)
        zt, vt = _kernels.ustat_step(int(z[t]), n, k, coin)
        z[t + 1] = zt
        v[t] = vt
        u[t + 1] = u[t] + vt
    return UStatTrace(n=n, k=k, z=z, u=u, v=v)


def u_stat_final_values(
    n: int, card: int, t_max: int, n_traces: int, rng
) -> np.ndarray:
    """Final increment sums of n_traces independent runs (batch kernel)."""
    _check_ustat_n(n)
    if not 1 <= card <= n:
        raise ValueError("card out of range")
    stream = _require_stream(rng)
    seeds = np.array(
        [stream.stream(j).kernel_seed() for j in range(n_traces)],
        dtype=np.uint64,
    )
    return _kernels.ustat_batch(n, card - 1, t_max, seeds)


# ---------------------------------------------------------------------------
# aggregation


@dataclass(frozen=True)
class CouplingSummary:
    """Location summaries plus a survival table (t, frac > t, half-width)."""

    count: int
    mean: float
    median: float
    q95: float
    survival: np.ndarray


def coupling_quantiles(samples, grid_points: int = 50) -> CouplingSummary:
    """Summarize coalescence times from samples or raw integer times.

    The survival table holds fractions P(T > t) on an evenly spaced time
    grid with normal-approximation 95% half-widths; the median uses the
    usual mid-rank convention.
    """
    times = np.array(
        [s.T if isinstance(s, CouplingSample) else int(s) for s in samples],
        dtype=np.int64,
    )
    if times.size == 0:
        raise ValueError("no samples to summarize")
    grid = np.unique(
        np.linspace(0, times.max(), num=max(grid_points, 2)).astype(np.int64)
    )
    frac = (times[None, :] > grid[:, None]).mean(axis=1)
    half = 1.96 * np.sqrt(frac * (1.0 - frac) / times.size)
    return CouplingSummary(
        count=int(times.size),
        mean=float(times.mean()),
        median=float(np.median(times)),
        q95=float(np.quantile(times, 0.95)),
        survival=np.column_stack([grid.astype(float), frac, half]),
    )
