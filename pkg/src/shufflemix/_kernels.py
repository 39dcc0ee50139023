"""Compiled inner loops for the Monte Carlo simulations.

All randomness comes from a counter RNG (splitmix64 finalizer over a
seeded counter), so draw i of a run is a pure function of (seed, i).
Each logical decision owns a fixed counter index whether or not the draw
is consumed; the interpreted twins in coupling_sim use the same
addressing, which makes compiled and pure-python runs bit-identical.
"""

from __future__ import annotations

import numba
import numpy as np

U64 = np.uint64
_GOLDEN = U64(0x9E3779B97F4A7C15)
_MIX1 = U64(0xBF58476D1CE4E5B9)
_MIX2 = U64(0x94D049BB133111EB)
_INV53 = 2.0**-53


@numba.njit(cache=True, inline="always")
def _mix64(x):
    x ^= x >> U64(30)
    x *= _MIX1
    x ^= x >> U64(27)
    x *= _MIX2
    x ^= x >> U64(31)
    return x


@numba.njit(cache=True, inline="always")
def _uniform(seed, index):
    # uniform in [0, 1) from the top 53 bits of the mixed counter
    return float(_mix64(seed + (U64(index) + U64(1)) * _GOLDEN) >> U64(11)) * _INV53


@numba.njit(cache=True, inline="always")
def _draw_slot(seed, index, k):
    i = int(_uniform(seed, index) * k)
    return k - 1 if i >= k else i


@numba.njit(cache=True)
def couple_bottom_k(yof1, yof2, n, k, seed, cap, post_steps):
    """Coupled bottom-k chains in the rotating frame; returns (T, ok).

    yof arrays map 0-based card -> frame position and are consumed in
    place.  Step t draws its slot at counter index 2t and its divergent
    candidate at 2t+1 (reserved even when unused).  ok certifies the
    structural claims along the trace: a card seen in both pick windows
    stays in both until the joint pick, leaves to equal positions, and
    matched positions persist for post_steps extra steps after T.
    T = -1 means the cap was hit first.
    """
    cardat1 = np.empty(n, np.int64)
    cardat2 = np.empty(n, np.int64)
    matched = 0
    for c in range(n):
        cardat1[yof1[c]] = c
        cardat2[yof2[c]] = c
        if yof1[c] == yof2[c]:
            matched += 1
    paired = np.zeros(n, np.bool_)
    ok = True
    T = np.int64(-1)
    t = np.int64(0)
    while t < cap:
        if matched == n:
            T = t
            break
        b = (n - k - t) % n

        # pairing scans: any window card already seen in both windows must
        # still be in both (pairedness is absorbing until the joint pick)
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

        i1 = _draw_slot(seed, 2 * t, k)
        c1 = cardat1[(b + i1) % n]
        s2 = (yof2[c1] - b) % n
        if s2 < k:
            c2 = c1
            i2 = s2
        else:
            count = 0
            for s in range(k):
                cb = cardat2[(b + s) % n]
                if (yof1[cb] - b) % n >= k:
                    count += 1
            j = int(_uniform(seed, 2 * t + 1) * count)
            if j >= count:
                j = count - 1
            c2 = -1
            i2 = -1
            idx = 0
            for s in range(k):
                cb = cardat2[(b + s) % n]
                if (yof1[cb] - b) % n >= k:
                    if idx == j:
                        c2 = cb
                        i2 = s
                        break
                    idx += 1
            if paired[c1] or paired[c2]:
                ok = False

        yexit = (b + k - 1) % n

        # deck 1 move: slots above the pick slide down one frame position
        for s in range(i1 + 1, k):
            y = (b + s) % n
            c = cardat1[y]
            ynew = (y - 1) % n
            if yof1[c] == yof2[c]:
                matched -= 1
            yof1[c] = ynew
            cardat1[ynew] = c
            if yof1[c] == yof2[c]:
                matched += 1
        if yof1[c1] == yof2[c1]:
            matched -= 1
        yof1[c1] = yexit
        cardat1[yexit] = c1
        if yof1[c1] == yof2[c1]:
            matched += 1

        # deck 2 move
        for s in range(i2 + 1, k):
            y = (b + s) % n
            c = cardat2[y]
            ynew = (y - 1) % n
            if yof2[c] == yof1[c]:
                matched -= 1
            yof2[c] = ynew
            cardat2[ynew] = c
            if yof2[c] == yof1[c]:
                matched += 1
        if yof2[c2] == yof1[c2]:
            matched -= 1
        yof2[c2] = yexit
        cardat2[yexit] = c2
        if yof2[c2] == yof1[c2]:
            matched += 1

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
            i1 = _draw_slot(seed, 2 * tt, k)
            c1 = cardat1[(b + i1) % n]
            yexit = (b + k - 1) % n
            for s in range(i1 + 1, k):
                y = (b + s) % n
                c = cardat1[y]
                ynew = (y - 1) % n
                yof1[c] = ynew
                cardat1[ynew] = c
                yof2[c] = ynew
                cardat2[ynew] = c
            yof1[c1] = yexit
            cardat1[yexit] = c1
            yof2[c1] = yexit
            cardat2[yexit] = c1
            for c in range(n):
                if yof1[c] != yof2[c]:
                    matched = n - 1
                    break
    return T, ok


@numba.njit(cache=True)
def bottom_k_cycles(n, k, cycles, seed):
    """Track one card through window visits; returns per-cycle arrays.

    The card is dropped at the window's entry slot at t = 0; the first
    (partial) visit is discarded, then `cycles` full exit-to-exit cycles
    are recorded.  Returns (displacement, duration, ok): displacement is
    the frame-position change k - G per cycle, duration the step count
    n - k + G, and ok asserts the two bookkeeping routes agree mod n.
    Draws use counter index t (the global step), so the deterministic
    drift phases consume no randomness.
    """
    disp = np.empty(cycles, np.int64)
    dur = np.empty(cycles, np.int64)
    ok = True
    t = np.int64(0)
    # partial first visit: card sits at slot 0 of the window at t = 0
    s = 0
    while True:
        i = _draw_slot(seed, t, k)
        t += 1
        if i == s:
            break
        if s < i:
            s += 1
    y_prev = (n - k - (t - 1)) % n + (k - 1)
    y_prev %= n
    for cyc in range(cycles):
        t += n - k  # deterministic drift back to the window entry slot
        s = 0
        g = 0
        while True:
            i = _draw_slot(seed, t, k)
            t += 1
            g += 1
            if i == s:
                break
            if s < i:
                s += 1
        y_new = ((n - k - (t - 1)) % n + (k - 1)) % n
        if (y_prev + (k - g) - y_new) % n != 0:
            ok = False
        disp[cyc] = k - g
        dur[cyc] = n - k + g
        y_prev = y_new
    return disp, dur, ok


@numba.njit(cache=True, inline="always")
def ustat_step(z, n, k, coin):
    """One tracked-position step of the half-deck two-point shuffle.

    coin True means the pick hit position k-1, False position n-1
    (0-indexed).  Returns (new position, martingale increment).
    """
    if z < k - 1:
        return z + 1, 0
    if z == k - 1:
        if coin:
            return 0, 0
        return k, 0
    if z < n - 1:
        if coin:
            return z, -1
        return z + 1, 1
    if coin:
        return z, -1
    return 0, 1


@numba.njit(cache=True)
def ustat_final(n, z0, t_max, seed):
    """Sum of increments after t_max steps, jumping deterministic runs."""
    k = n // 2
    z = z0
    u = np.int64(0)
    t = np.int64(0)
    while t < t_max:
        if z < k - 1:
            jump = k - 1 - z
            if t + jump > t_max:
                z += t_max - t
                break
            z = k - 1
            t += jump
            continue
        coin = _uniform(seed, t) < 0.5
        z, v = ustat_step(z, n, k, coin)
        u += v
        t += 1
    return u, z


@numba.njit(cache=True)
def ustat_batch(n, z0, t_max, seeds):
    """Final increment sums for many traces (one counter seed each)."""
    out = np.empty(seeds.size, np.int64)
    for j in range(seeds.size):
        u, _ = ustat_final(n, z0, t_max, seeds[j])
        out[j] = u
    return out
