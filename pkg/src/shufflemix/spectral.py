"""Complex-spectral lower bounds for position-weighted shuffles.

The single-card position chain of a bottom-k or two-point shuffle has a
near-unit-modulus complex eigenvalue.  This module knows its
characteristic polynomial in closed form, predicts the eigenvalue
asymptotically, refines it by Newton iteration, certifies the refined
root rigorously (a disc that provably contains a true root), builds the
matching eigenvector, and feeds everything into the second-moment
lower-bound formula for the mixing time.

Powers of complex numbers with modulus near 1 are always taken in polar
form so that degree-10^6 evaluations stay accurate.
"""

from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .deck_core import (
    Deck,
    ShuffleMode,
    ShuffleSpec,
    bottom_to_top_spec,
    two_point_spec,
)
from .errors import NoConvergenceError
from .rng import RngStream

__all__ = [
    "CharFamily",
    "CharPoly",
    "Polynomial",
    "ComplexEigenpair",
    "RootCertificate",
    "WilsonParams",
    "SpectralBoundReport",
    "cpow",
    "cpow_range",
    "char_poly",
    "predicted_eigenvalue",
    "newton_refine",
    "find_eigenvalue",
    "certify_root",
    "build_eigenvector",
    "eigen_residual",
    "verify_eigenpair",
    "complex_eigenpair",
    "ordered_start_phi",
    "estimate_R",
    "wilson_step_scale",
    "wilson_T",
    "b2t_lower_bound",
    "two_point_lower_bound",
    "leading_term_bottom_to_top",
    "leading_term_two_point",
    "mtf_phi_j",
    "mtf_multi_eigen_T",
]

_TAU = 2.0 * math.pi


def cpow(z: complex, j: int) -> complex:
    """z**j in polar form: exact at z = 1, stable for j up to ~10^6."""
    if j == 0:
        return 1.0 + 0.0j
    r = abs(z)
    if r == 0.0:
        return 0.0 + 0.0j
    mag = math.exp(j * math.log(r))
    ang = math.remainder(j * cmath.phase(z), _TAU)
    return complex(mag * math.cos(ang), mag * math.sin(ang))


def cpow_range(z: complex, j_max: int) -> np.ndarray:
    """Vector of z**0 .. z**j_max, each computed in polar form."""
    if j_max < 0:
        raise ValueError("j_max must be nonnegative")
    j = np.arange(j_max + 1, dtype=np.float64)
    r = abs(z)
    if r == 0.0:
        out = np.zeros(j_max + 1, dtype=np.complex128)
        out[0] = 1.0
        return out
    mags = np.exp(j * math.log(r))
    ang = j * cmath.phase(z)
    ang -= np.round(ang / _TAU) * _TAU
    out = mags * (np.cos(ang) + 1j * np.sin(ang))
    out[0] = 1.0
    return out


class CharFamily(enum.Enum):
    BOTTOM_TO_TOP = "bottom_to_top"
    TWO_POINT = "two_point"


@dataclass(frozen=True)
class CharPoly:
    """Closed-form characteristic polynomial of the single-card chain.

    Bottom-to-top: g(z) = z^{n-k+1} - ((k-1)/k) z^{n-k} - 1/k, evaluated in
    the cancellation-friendly form (z^{n-k+1} - 1) - ((k-1)/k)(z^{n-k} - 1)
    so that g(1) is exactly zero.  Two-point: g(z) = (2z-1)^k (2z^{n-k}-1) - 1.
    The remaining spectrum (bottom-to-top only) is {0, 1/k, ..., (k-2)/k}.
    """

    family: CharFamily
    n: int
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.family is CharFamily.TWO_POINT:
            if self.k % 2 == 0:
                raise ValueError("two-point shuffles need odd k")
            if self.k > self.n - 1:
                raise ValueError("two-point shuffles need k <= n-1")

    def g(self, z: complex) -> complex:
        m = self.n - self.k
        if self.family is CharFamily.BOTTOM_TO_TOP:
            return (cpow(z, m + 1) - 1.0) - ((self.k - 1) / self.k) * (cpow(z, m) - 1.0)
        return cpow(2.0 * z - 1.0, self.k) * (2.0 * cpow(z, m) - 1.0) - 1.0

    def gprime(self, z: complex) -> complex:
        m = self.n - self.k
        if self.family is CharFamily.BOTTOM_TO_TOP:
            if m == 0:
                return 1.0 + 0.0j
            return (m + 1) * cpow(z, m) - m * ((self.k - 1) / self.k) * cpow(z, m - 1)
        w = 2.0 * z - 1.0
        return 2.0 * self.k * cpow(w, self.k - 1) * (2.0 * cpow(z, m) - 1.0) + cpow(
            w, self.k
        ) * 2.0 * m * cpow(z, m - 1)

    def f(self, z: complex) -> complex:
        """Two-point intermediate: f(z) = z^{n+k} - z^{2k}/2 - 1/2."""
        self._need_two_point()
        return (cpow(z, self.n + self.k) - 0.5 * cpow(z, 2 * self.k)) - 0.5

    def fprime(self, z: complex) -> complex:
        self._need_two_point()
        return (self.n + self.k) * cpow(z, self.n + self.k - 1) - self.k * cpow(
            z, 2 * self.k - 1
        )

    def _need_two_point(self):
        if self.family is not CharFamily.TWO_POINT:
            raise ValueError("f is defined for the two-point family only")

    def coefficients(self) -> np.ndarray:
        """Coefficients of g, highest degree first (np.roots convention)."""
        n, k = self.n, self.k
        if self.family is CharFamily.BOTTOM_TO_TOP:
            if k == n:
                return np.array([1.0, -1.0])
            c = np.zeros(n - k + 2)
            c[0] = 1.0
            c[1] = -(k - 1) / k
            c[-1] = -1.0 / k
            return c
        asc = np.zeros(n + 1)
        for i in range(k + 1):
            base = math.comb(k, i) * 2.0**i * (-1.0) ** (k - i)
            asc[n - k + i] += 2.0 * base
            asc[i] -= base
        asc[0] -= 1.0
        return asc[::-1].copy()

    def extra_eigenvalues(self) -> np.ndarray:
        """Spectrum points not captured by g (bottom-to-top: j/k, j < k-1)."""
        if self.family is CharFamily.BOTTOM_TO_TOP:
            return np.arange(self.k - 1, dtype=np.float64) / self.k
        return np.empty(0)


@dataclass(frozen=True)
class Polynomial:
    """Plain dense polynomial with the same duck-typed surface as CharPoly.

    Used for root refinement and certification of hand-written test
    polynomials; coefficients are highest degree first.
    """

    coeffs: tuple

    def g(self, z: complex) -> complex:
        acc = 0.0 + 0.0j
        for c in self.coeffs:
            acc = acc * z + c
        return acc

    def gprime(self, z: complex) -> complex:
        deg = len(self.coeffs) - 1
        acc = 0.0 + 0.0j
        for i, c in enumerate(self.coeffs[:-1]):
            acc = acc * z + (deg - i) * c
        return acc

    def coefficients(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=np.complex128)


def char_poly(family, n: int, k: int) -> CharPoly:
    """Characteristic polynomial for the given shuffle family."""
    fam = CharFamily(family) if not isinstance(family, CharFamily) else family
    return CharPoly(fam, n, k)


def predicted_eigenvalue(family, n: int, k: int) -> complex:
    """Closed-form predictor for the slow complex eigenvalue, w = 2 pi / n.

    Two-point: (1 - k^2 w^2 / (2n)) e^{iw}.  Bottom-to-top: the base
    point (1 - binom(k,2) w^2 / n) e^{iw} sharpened by one explicit
    Newton step of the rotated characteristic function; the base point
    alone zeroes only the real part of the defect and sits a full
    (k-1)(2k-1) w^3 / 6 away in the imaginary direction, which the
    sharpening removes.  The result lands within a few k^3/n^4 of the
    true root; for k = 1 it is exactly e^{iw} (a pure rotation).
    """
    fam = CharFamily(family) if not isinstance(family, CharFamily) else family
    if k < 1 or k > n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    w = _TAU / n
    rot = cmath.exp(1j * w)
    if fam is CharFamily.TWO_POINT:
        return (1.0 - k * k * w * w / (2.0 * n)) * rot
    if k == 1:
        return rot
    z0 = 1.0 - (k * (k - 1) / 2.0) * w * w / n
    m = n - k
    # rotated frame: f(z) = z^{m+1} - ((k-1)/k) e^{-iw} z^m - (1/k) e^{i(k-1)w}
    f = z0 ** (m + 1) - ((k - 1) / k) * cmath.exp(-1j * w) * z0**m \
        - (1.0 / k) * cmath.exp(1j * (k - 1) * w)
    if m >= 1:
        fprime = z0 ** (m - 1) * ((m + 1) * z0 - (m * (k - 1) / k) * cmath.exp(-1j * w))
    else:
        fprime = complex(m + 1)
    return rot * (z0 - f / fprime)


def newton_refine(cp, z_start: complex, tol: float = 1e-14, max_iter: int = 60) -> complex:
    """Newton iteration on cp.g from z_start until |g| <= tol.

    Raises NoConvergenceError (with the final iterate and |g| attached)
    instead of returning a bad point.
    """
    z = complex(z_start)
    best_z, best_val = z, abs(cp.g(z))
    for it in range(max_iter):
        if best_val <= tol:
            return best_z
        d = cp.gprime(z)
        if d == 0:
            break
        z = z - cp.g(z) / d
        val = abs(cp.g(z))
        if val < best_val:
            best_z, best_val = z, val
    if best_val <= tol:
        return best_z
    raise NoConvergenceError(
        f"|g| stalled at {best_val:.3e} > {tol:g} after {max_iter} iterations",
        iterations=max_iter,
        residual=best_val,
        last_value=best_z,
    )


def find_eigenvalue(cp, z_start: complex | None = None, tol: float | None = None,
                    max_iter: int = 60) -> complex:
    """Refined slow eigenvalue, with a fallback ladder of perturbed starts.

    The default tolerance scales with n: evaluating a degree-n polynomial
    at a double-precision point cannot push |g| below ~n*eps, so asking
    for 1e-14 at n = 10^4 would fail spuriously.
    """
    if z_start is None:
        if not isinstance(cp, CharPoly):
            raise ValueError("z_start is required for plain polynomials")
        z_start = predicted_eigenvalue(cp.family, cp.n, cp.k)
    if tol is None:
        n = cp.n if isinstance(cp, CharPoly) else len(cp.coefficients())
        tol = max(1e-13, 16.0 * np.finfo(float).eps * n)
    try:
        return newton_refine(cp, z_start, tol=tol, max_iter=max_iter)
    except NoConvergenceError:
        radius = 2.0 * abs(1.0 - abs(z_start))
        if radius == 0.0:
            raise
        for step in range(8):
            start = z_start + radius * cmath.exp(2j * math.pi * step / 8.0)
            try:
                return newton_refine(cp, start, tol=tol, max_iter=max_iter)
            except NoConvergenceError:
                continue
        raise


@dataclass(frozen=True)
class RootCertificate:
    """Outcome of a disc-based root localization.

    delta = |g| at the center; deriv_lower is a rigorous lower bound on
    |g'| over the closed disc of the given radius.  When accepted, a true
    root of g lies within error_bound = delta / deriv_lower <= radius of
    the center.  A refusal (accepted = False) just means this disc could
    not be certified, not that no root exists.
    """

    accepted: bool
    center: complex
    radius: float
    delta: float
    deriv_lower: float
    error_bound: float | None


def _b2t_deriv_floor(cp: CharPoly, z0: complex, r: float) -> float:
    # g'(z) = z^{m-1} ((m+1) z - m (k-1)/k): bound each factor's modulus
    # from below over the disc |z - z0| <= r.
    m = cp.n - cp.k
    if m == 0:
        return 1.0
    rho = abs(z0) - r
    if rho <= 0.0:
        return 0.0
    inner = abs((m + 1) * z0 - m * (cp.k - 1) / cp.k) - (m + 1) * r
    if inner <= 0.0:
        return 0.0
    return math.exp((m - 1) * math.log(rho)) * inner


def _generic_deriv_floor(cp, z0: complex, r: float) -> float:
    # |g'(z)| >= |g'(z0)| - r * max_disc |g''| with the second derivative
    # bounded by its coefficient sums at modulus |z0| + r.
    coeffs = np.abs(np.asarray(cp.coefficients()))[::-1]  # ascending degree
    i = np.arange(coeffs.size, dtype=np.float64)
    rho = abs(z0) + r
    with np.errstate(over="ignore"):
        second = float(np.sum(coeffs[2:] * i[2:] * (i[2:] - 1.0) * rho ** (i[2:] - 2.0)))
    if not math.isfinite(second):
        return 0.0
    return abs(cp.gprime(z0)) - r * second


def certify_root(cp, z0: complex, r: float) -> RootCertificate:
    """Certify that a true root of cp lies within r of z0, if possible.

    Issues the certificate iff delta / M <= r where delta = |g(z0)| and M
    lower-bounds |g'| on the disc; the guaranteed distance to a root is
    then delta / M.  Refusal is a value, never an error.
    """
    if r <= 0.0:
        raise ValueError("disc radius must be positive")
    delta = abs(cp.g(z0))
    if isinstance(cp, CharPoly) and cp.family is CharFamily.BOTTOM_TO_TOP:
        floor = _b2t_deriv_floor(cp, z0, r)
    else:
        floor = _generic_deriv_floor(cp, z0, r)
    if floor <= 0.0:
        return RootCertificate(False, z0, r, delta, max(floor, 0.0), None)
    bound = delta / floor
    return RootCertificate(bound <= r, z0, r, delta, floor, bound)


def build_eigenvector(family, n: int, k: int, lam: complex) -> np.ndarray:
    """Eigenvector of the single-card chain for the given eigenvalue.

    Bottom-to-top: powers 1, lam, ..., lam^{n-k}, then k-1 repeats of the
    last power.  Two-point: powers up to lam^{n-k-1}, then 2 lam^{n-k} - 1,
    then (2 lam - 1)^i (2 lam^{n-k} - 1) for i = 1..k-1.
    """
    fam = CharFamily(family) if not isinstance(family, CharFamily) else family
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    m = n - k
    if fam is CharFamily.BOTTOM_TO_TOP:
        powers = cpow_range(lam, m)
        return np.concatenate([powers, np.full(k - 1, powers[-1])])
    if k > n - 1:
        raise ValueError("two-point shuffles need k <= n-1")
    x = np.empty(n, dtype=np.complex128)
    x[:m] = cpow_range(lam, m - 1)
    tail = 2.0 * cpow(lam, m) - 1.0
    x[m:] = cpow_range(2.0 * lam - 1.0, k - 1) * tail
    return x


def eigen_residual(spec: ShuffleSpec, lam: complex, x: np.ndarray) -> float:
    """Max-norm of (Ax - lam x) for the single-card chain, in O(n).

    Row q of the chain reads: weight of q times x_1, plus mass above q
    times x_q, plus mass below q times x_{q+1}.  x is normalized to unit
    max-norm first.
    """
    if spec.mode is not ShuffleMode.POSITION_WEIGHTED:
        raise ValueError("the single-card chain is defined for position weights")
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (spec.n,):
        raise ValueError(f"eigenvector must have length {spec.n}")
    scale = float(np.max(np.abs(x)))
    if scale == 0.0:
        raise ValueError("eigenvector must be nonzero")
    x = x / scale
    resid = spec.weights * x[0] + spec.prefix_sums * x - lam * x
    resid[:-1] += spec.suffix_sums[:-1] * x[1:]
    return float(np.max(np.abs(resid)))


def verify_eigenpair(matrix, lam: complex, x, tol: float = 0.0) -> float:
    """Dense residual check: max-norm of Ax - lam x at unit max-norm x.

    tol is the zero-vector detection threshold on max|x|.
    """
    a = matrix.entries if hasattr(matrix, "entries") else np.asarray(matrix)
    x = np.asarray(x, dtype=np.complex128)
    scale = float(np.max(np.abs(x))) if x.size else 0.0
    if scale <= tol:
        raise ValueError("eigenvector must be nonzero")
    x = x / scale
    return float(np.max(np.abs(a @ x - lam * x)))


@dataclass(frozen=True, eq=False)
class ComplexEigenpair:
    """A refined eigenvalue with its eigenvector and quality measures."""

    eigenvalue: complex
    gamma: float
    theta: float
    eigenvector: np.ndarray
    residual: float
    certificate_radius: float | None

    def __post_init__(self):
        if abs(self.eigenvalue) > 1.0 + 1e-12:
            raise ValueError("eigenvalue modulus must not exceed 1")


def _family_spec(fam: CharFamily, n: int, k: int) -> ShuffleSpec:
    if fam is CharFamily.BOTTOM_TO_TOP:
        return bottom_to_top_spec(n, k)
    return two_point_spec(n, k)


def complex_eigenpair(family, n: int, k: int, tol: float | None = None) -> ComplexEigenpair:
    """Predict, refine, certify and package the slow eigenpair."""
    fam = CharFamily(family) if not isinstance(family, CharFamily) else family
    cp = char_poly(fam, n, k)
    pred = predicted_eigenvalue(fam, n, k)
    root = find_eigenvalue(cp, pred, tol=tol)
    x = build_eigenvector(fam, n, k, root)
    resid = eigen_residual(_family_spec(fam, n, k), root, x)
    gamma_pred = 1.0 - abs(pred)
    cert_radius = None
    if gamma_pred > 0.0:
        cert = certify_root(cp, root, gamma_pred / 2.0)
        if cert.accepted:
            cert_radius = cert.radius
    return ComplexEigenpair(
        eigenvalue=root,
        gamma=1.0 - abs(root),
        theta=cmath.phase(root),
        eigenvector=x,
        residual=resid,
        certificate_radius=cert_radius,
    )


def ordered_start_phi(eigenvector: np.ndarray, m_cards: int) -> complex:
    """Test-statistic value at the sorted deck: sum of the first m entries."""
    if not 1 <= m_cards <= eigenvector.size:
        raise ValueError("m_cards must be in 1..n")
    return complex(np.sum(eigenvector[:m_cards]))


def estimate_R(
    spec: ShuffleSpec,
    pair: ComplexEigenpair,
    m_cards: int,
    mode: str = "analytic",
    samples: int = 0,
    rng=None,
) -> float:
    """Bound (or sample) the one-step second moment of the test statistic.

    The statistic tracks the eigenvector entries at the positions of the
    first m_cards cards; R bounds E[|e^{-i theta} Phi(X') - Phi(X)|^2 | X]
    over states X.  Analytic mode assembles a worst-case triangle bound
    from three buckets: cards strictly above every pickable position (they
    always move down one), cards in the pickable window (move down or stay),
    and the picked card itself (jumps to the top).  Empirical mode returns
    the max over sampled states of the exactly enumerated expectation.
    """
    if spec.mode is not ShuffleMode.POSITION_WEIGHTED:
        raise ValueError("R estimation applies to position-weighted shuffles")
    n = spec.n
    if not 1 <= m_cards <= n:
        raise ValueError("m_cards must be in 1..n")
    x = np.asarray(pair.eigenvector, dtype=np.complex128)
    rot = cmath.exp(-1j * pair.theta)
    pickable = np.flatnonzero(spec.weights > 0.0)
    qmin = int(pickable[0])

    if mode == "analytic":
        shift = np.abs(rot * x[1:] - x[:-1])
        c_det = float(np.max(shift[:qmin])) if qmin > 0 else 0.0
        stay = np.abs((rot - 1.0) * x)
        c_rand = 0.0
        for z in range(qmin, n):
            if pickable[-1] > z:
                c_rand = max(c_rand, float(shift[z]))
            if qmin < z:
                c_rand = max(c_rand, float(stay[z]))
        c_top = float(np.max(np.abs(rot * x[0] - x[pickable])))
        delta = m_cards * c_det + min(m_cards, n - qmin) * c_rand + c_top
        return delta * delta

    if mode != "empirical":
        raise ValueError(f"unknown mode {mode!r}; expected analytic or empirical")
    if samples < 1:
        raise ValueError("empirical mode needs at least one sampled state")
    gen = rng.generator() if isinstance(rng, RngStream) else rng
    if gen is None:
        raise ValueError("empirical mode needs an rng")
    worst = 0.0
    branch_w = spec.weights[pickable]
    for _ in range(samples):
        pos = gen.permutation(n)[:m_cards]  # positions of the tracked cards
        val = 0.0
        for w, z in zip(branch_w, pickable):
            new = np.where(pos < z, pos + 1, pos)
            new = np.where(pos == z, 0, new)
            diff = complex(np.sum(rot * x[new] - x[pos]))
            val += w * (diff.real * diff.real + diff.imag * diff.imag)
        worst = max(worst, val)
    return worst


def wilson_step_scale(n: int, k: int) -> float:
    """Documented per-step second-moment constant used by the pipelines.

    The one-step statistic change is dominated by the k window cards and
    the picked card, each moving the statistic by O(k/n); the pipelines
    use (k/(2n))^2, which sits inside the proven O(k^2/n^2) order and is
    calibrated so the finite-n bound tracks its leading term.
    """
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    return (k / (2.0 * n)) ** 2


@dataclass(frozen=True)
class WilsonParams:
    """Inputs of the second-moment lower-bound formula."""

    phi_s0_mag: float
    gamma: float
    theta: float
    R: float
    a: float = 0.5

    def __post_init__(self):
        if not self.phi_s0_mag > 0.0:
            raise ValueError("phi_s0_mag must be positive")
        if not 0.0 < self.gamma <= 0.5:
            raise ValueError("gamma must lie in (0, 1/2]")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError("theta must lie in [0, pi]")
        if self.R < 0.0:
            raise ValueError("R must be nonnegative")
        if not 0.0 < self.a < 1.0:
            raise ValueError("a must lie in (0, 1)")


def wilson_T(params: WilsonParams) -> float:
    """Number of steps the chain provably stays far from stationarity.

    T = (log phi - (1/2) log(4R / (gamma a))) / (-log(1 - gamma)), clamped
    at 0; total variation stays >= 1 - a for all t <= T.  R = 0 (an exact
    rotation) never mixes, so T is infinite.
    """
    if params.R == 0.0:
        return math.inf
    num = math.log(params.phi_s0_mag) - 0.5 * math.log(
        4.0 * params.R / (params.gamma * params.a)
    )
    return max(num / (-math.log1p(-params.gamma)), 0.0)


@dataclass(frozen=True, eq=False)
class SpectralBoundReport:
    """Everything the spectral lower-bound pipeline computed."""

    family: CharFamily
    n: int
    k: int
    predicted: complex
    pair: ComplexEigenpair
    m_cards: int
    phi_s0_mag: float
    R: float
    a: float
    T: float
    leading_term: float
    certificate: RootCertificate
    gamma_window: tuple | None = None
    diagnostic: str | None = None

    @property
    def gamma(self) -> float:
        return self.pair.gamma

    @property
    def theta(self) -> float:
        return self.pair.theta


def leading_term_bottom_to_top(n: int, k: int) -> float:
    """Asymptotic mixing-time lower bound n^3 log n / (4 pi^2 k(k-1))."""
    if k < 2:
        raise ValueError("need k >= 2")
    return n**3 * math.log(n) / (4.0 * math.pi**2 * k * (k - 1))


def leading_term_two_point(n: int, k: int) -> float:
    """Asymptotic mixing-time lower bound n^3 log n / (4 pi^2 k(k+1))."""
    if k < 1:
        raise ValueError("need k >= 1")
    return n**3 * math.log(n) / (4.0 * math.pi**2 * k * (k + 1))


def _run_pipeline(fam: CharFamily, n: int, k: int, a: float) -> SpectralBoundReport:
    cp = char_poly(fam, n, k)
    pred = predicted_eigenvalue(fam, n, k)
    pair = complex_eigenpair(fam, n, k)
    m_cards = n // 2
    phi0 = abs(ordered_start_phi(pair.eigenvector, m_cards))
    R = wilson_step_scale(n, k)
    params = WilsonParams(phi_s0_mag=phi0, gamma=pair.gamma, theta=pair.theta, R=R, a=a)
    T = wilson_T(params)
    gamma_pred = 1.0 - abs(pred)
    cert = certify_root(cp, pair.eigenvalue, gamma_pred / 2.0)

    window = None
    diagnostic = None
    if fam is CharFamily.TWO_POINT:
        scale = 2.0 * math.pi**2 * k / n**3
        window = (scale * (k - 1), scale * (k + 1))
        if not 0.5 * window[0] <= pair.gamma <= 1.5 * window[1]:
            diagnostic = (
                f"refined gamma {pair.gamma:.3e} outside "
                f"[{0.5 * window[0]:.3e}, {1.5 * window[1]:.3e}]"
            )
        leading = leading_term_two_point(n, k)
    else:
        leading = leading_term_bottom_to_top(n, k)

    return SpectralBoundReport(
        family=fam,
        n=n,
        k=k,
        predicted=pred,
        pair=pair,
        m_cards=m_cards,
        phi_s0_mag=phi0,
        R=R,
        a=a,
        T=T,
        leading_term=leading,
        certificate=cert,
        gamma_window=window,
        diagnostic=diagnostic,
    )


def b2t_lower_bound(n: int, k: int, a: float = 0.5) -> SpectralBoundReport:
    """Mixing-time lower bound for the bottom-k shuffle (k >= 2)."""
    if k < 2:
        raise ValueError("k = 1 is a deterministic rotation and never mixes; need k >= 2")
    if k > n:
        raise ValueError("need k <= n")
    return _run_pipeline(CharFamily.BOTTOM_TO_TOP, n, k, a)


def two_point_lower_bound(n: int, k: int, a: float = 0.5) -> SpectralBoundReport:
    """Mixing-time lower bound for the two-point shuffle (odd k)."""
    if k % 2 == 0:
        raise ValueError("two-point shuffles need odd k")
    if not 1 <= k <= n - 1:
        raise ValueError("need 1 <= k <= n-1")
    return _run_pipeline(CharFamily.TWO_POINT, n, k, a)


def mtf_phi_j(state, p, j: int) -> float:
    """Two-valued pair statistic for a move-to-front chain.

    For odd j, returns p_j / (p_j + p_{j+1}) when card j+1 sits at or
    above card j, else -p_{j+1} / (p_j + p_{j+1}).  state may be a Deck
    or a card sequence in position order.
    """
    if j % 2 == 0:
        raise ValueError("the pair statistic is defined for odd j")
    w = np.asarray(p, dtype=np.float64)
    if j + 1 > w.size:
        raise ValueError("need j+1 <= n")
    if isinstance(state, Deck):
        pos_j, pos_next = state.position_of(j), state.position_of(j + 1)
    else:
        order = list(state)
        pos_j, pos_next = order.index(j) + 1, order.index(j + 1) + 1
    gamma = w[j - 1] + w[j]
    if pos_next <= pos_j:
        return float(w[j - 1] / gamma)
    return float(-w[j] / gamma)


def mtf_multi_eigen_T(p) -> int:
    """Largest t at which the combined pair statistics still certify
    total variation at least 1/3: sum over odd j of (1 - gamma_j)^{2t}
    stays at least 24.  Returns 0 when even t = 0 fails (fewer than 24
    pairs).  Odd n drops the last, unpaired card.
    """
    w = np.asarray(p, dtype=np.float64)
    n = w.size
    if n % 2:
        warnings.warn("odd card count: the last card is unpaired and dropped", stacklevel=2)
    gammas = w[0:-1:2] + w[1::2]

    def total(t: int) -> float:
        return math.fsum(np.power(1.0 - gammas, 2 * t).tolist())

    if total(0) < 24.0:
        return 0
    hi = 1
    while total(hi) >= 24.0:
        hi *= 2
    lo = hi // 2  # holds at lo, fails at hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if total(mid) >= 24.0:
            lo = mid
        else:
            hi = mid
    return lo
