"""Concentrated Whittle objective, spectral-index estimator, normalizations.

The concentrated objective over a band [l_lo, l_hi] is

    R(alpha) = log Ghat(alpha) - alpha * wbar,

where Ghat_k(alpha) = sum_w (log l)^k * Chat_l * l^alpha / W, W = sum (2l+1)
and wbar = sum (2l+1) log l / W (natural logs, l = 1 included, weights over
the band only).  Its minimizer alpha_hat estimates the spectral index and
g_hat = Ghat(alpha_hat) the amplitude.

Normalization factors scale (alpha_hat - alpha0) so the limit law is N(0,1):
full band sqrt(2) L / (4 c), narrow band L sqrt(g^3 / 12), and the
noise-debiased regimes of NoiseSub.  The Rate scheme, L/(4 c_L), targets the
first-order bias under a kappa perturbation instead of the CLT.  At desk
scales the empirical bias sign under kappa > 0 is positive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import (
    BandTooNarrow,
    DegenerateBand,
    NonPositiveAmplitude,
    NonPositiveValue,
    UnsupportedRegime,
)
from .sampling import EmpiricalSpectrum

__all__ = [
    "Band",
    "SearchBox",
    "EstimateResult",
    "FullBand",
    "NarrowBand",
    "NoiseSub",
    "Rate",
    "NormalizationScheme",
    "full_band",
    "narrow_band",
    "g_hat_k",
    "objective",
    "joint_objective",
    "score",
    "curvature",
    "estimate",
    "correction_factor",
    "normalization_factor",
    "noise_h",
    "noise_variance_constant",
    "noise_scheme_from_estimate",
    "debiased_variance_ratio",
]

_GOLD = 0.5 * (3.0 - math.sqrt(5.0))
_MAX_EVALS = 200


@dataclass(frozen=True)
class Band:
    """Inclusive multipole range [l_lo, l_hi]; l_lo = 1 is the full band."""

    l_lo: int
    l_hi: int

    def __post_init__(self) -> None:
        if not 1 <= int(self.l_lo) <= int(self.l_hi):
            raise ValueError("band must satisfy 1 <= l_lo <= l_hi")

    @property
    def width(self) -> int:
        return self.l_hi - self.l_lo + 1


@dataclass(frozen=True)
class SearchBox:
    """Compact search interval [alpha_min, alpha_max] with tolerance on alpha.

    alpha_min > 2 matches the theory's parameter space; values in (0, 2] are
    accepted so designs at the regularity threshold alpha0 = 2 stay
    searchable.
    """

    alpha_min: float = 2.01
    alpha_max: float = 10.0
    tol: float = 1e-6

    def __post_init__(self) -> None:
        if not (self.alpha_min > 0):
            raise ValueError("alpha_min must be positive")
        if not (self.alpha_max > self.alpha_min):
            raise ValueError("alpha_max must exceed alpha_min")
        if not (self.tol > 0):
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class EstimateResult:
    """Minimizer output; g_hat is recomputed from the data at alpha_hat."""

    alpha_hat: float
    g_hat: float
    objective: float
    band: Band
    evaluations: int
    converged: bool
    boundary_hit: bool


def full_band(l_max: int) -> Band:
    """The band [1, l_max]."""
    return Band(1, l_max)


def narrow_band(l_max: int, c_g: float = 1.0) -> Band:
    """High-multipole band with shrinking fraction g = c_g / ln(l_max).

    Returns [max(1, ceil(l_max (1-g))), l_max]; raises BandTooNarrow below
    3 multipoles.
    """
    if l_max < 3:
        raise ValueError("l_max must be >= 3")
    if not 0 < c_g <= 1:
        raise ValueError("c_g must lie in (0, 1]")
    g = c_g / math.log(l_max)
    if g >= 1:
        raise ValueError("band fraction g must be < 1")
    l_lo = max(1, math.ceil(l_max * (1.0 - g)))
    if l_max - l_lo + 1 < 3:
        raise BandTooNarrow(f"band [{l_lo}, {l_max}] has fewer than 3 multipoles")
    return Band(l_lo, l_max)


class _BandData:
    """Per-(spectrum, band) precomputation shared by all evaluations."""

    def __init__(self, spectrum: EmpiricalSpectrum, band: Band) -> None:
        if band.l_hi > spectrum.l_max:
            raise ValueError(
                f"band [{band.l_lo}, {band.l_hi}] exceeds spectrum l_max={spectrum.l_max}"
            )
        l = np.arange(band.l_lo, band.l_hi + 1, dtype=float)
        w = 2.0 * l + 1.0
        self.log_l = np.log(l)
        self.w_sum = float(w.sum())
        self.wbar = float((w * self.log_l).sum() / self.w_sum)
        self.wc = w * spectrum.values[band.l_lo - 1 : band.l_hi]

    def ghat(self, alpha: float) -> float:
        return float(np.dot(self.wc, np.exp(alpha * self.log_l))) / self.w_sum

    def ghat_moments(self, alpha: float) -> tuple[float, float, float]:
        tilt = self.wc * np.exp(alpha * self.log_l)
        g0 = float(tilt.sum())
        g1 = float(np.dot(tilt, self.log_l))
        g2 = float(np.dot(tilt, self.log_l**2))
        return g0 / self.w_sum, g1 / self.w_sum, g2 / self.w_sum


def _band_or_full(spectrum: EmpiricalSpectrum, band: Band | None) -> Band:
    return band if band is not None else full_band(spectrum.l_max)


def g_hat_k(
    spectrum: EmpiricalSpectrum, alpha: float, k: int = 0, band: Band | None = None
) -> float:
    """Weighted amplitude moment Ghat_k(alpha) over the band.

    May legitimately return <= 0 for debiased spectra.
    """
    if k not in (0, 1, 2):
        raise ValueError("k must be 0, 1, or 2")
    data = _BandData(spectrum, _band_or_full(spectrum, band))
    return data.ghat_moments(alpha)[k]


def objective(
    spectrum: EmpiricalSpectrum, alpha: float, band: Band | None = None
) -> float:
    """Concentrated objective R(alpha) = log Ghat(alpha) - alpha * wbar."""
    data = _BandData(spectrum, _band_or_full(spectrum, band))
    g = data.ghat(alpha)
    if g <= 0:
        raise NonPositiveAmplitude(f"Ghat({alpha}) = {g} <= 0")
    return math.log(g) - alpha * data.wbar


def joint_objective(
    spectrum: EmpiricalSpectrum, alpha: float, g: float, band: Band | None = None
) -> float:
    """Un-concentrated Whittle sum over (alpha, g); used to verify concentration."""
    if not g > 0:
        raise ValueError("g must be positive")
    band = _band_or_full(spectrum, band)
    values = spectrum.values[band.l_lo - 1 : band.l_hi]
    if not (values > 0).all():
        raise NonPositiveValue("joint objective needs positive spectrum values in band")
    l = np.arange(band.l_lo, band.l_hi + 1, dtype=float)
    w = 2.0 * l + 1.0
    ratio = values * np.exp(alpha * np.log(l)) / g
    return float(np.dot(w, ratio - np.log(ratio)))


def score(spectrum: EmpiricalSpectrum, alpha: float, band: Band | None = None) -> float:
    """Exact derivative of the objective: Ghat_1/Ghat - wbar."""
    data = _BandData(spectrum, _band_or_full(spectrum, band))
    g0, g1, _ = data.ghat_moments(alpha)
    if g0 <= 0:
        raise NonPositiveAmplitude(f"Ghat({alpha}) = {g0} <= 0")
    return g1 / g0 - data.wbar


def curvature(
    spectrum: EmpiricalSpectrum, alpha: float, band: Band | None = None
) -> float:
    """Second derivative of the objective: (Ghat_2 Ghat - Ghat_1^2) / Ghat^2."""
    data = _BandData(spectrum, _band_or_full(spectrum, band))
    g0, g1, g2 = data.ghat_moments(alpha)
    if g0 <= 0:
        raise NonPositiveAmplitude(f"Ghat({alpha}) = {g0} <= 0")
    return (g2 * g0 - g1 * g1) / (g0 * g0)


def _brent(f, a: float, b: float, tol: float, budget) -> tuple[float, float, bool]:
    """Bounded golden-section search with parabolic acceleration.

    Returns (x, f(x), converged); never evaluates outside [a, b].
    """
    x = w = v = a + _GOLD * (b - a)
    fx = fw = fv = f(x)
    d = e = 0.0
    while budget():
        m = 0.5 * (a + b)
        if abs(x - m) <= 2.0 * tol - 0.5 * (b - a):
            return x, fx, True
        golden = True
        if abs(e) > tol:
            # parabola through (v, fv), (w, fw), (x, fx)
            r = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            p = (x - v) * q - (x - w) * r
            q = 2.0 * (q - r)
            if q > 0.0:
                p = -p
            q = abs(q)
            e_prev, e = e, d
            if not (abs(p) >= abs(0.5 * q * e_prev) or p <= q * (a - x) or p >= q * (b - x)):
                d = p / q
                u = x + d
                if (u - a) < 2.0 * tol or (b - u) < 2.0 * tol:
                    d = tol if x < m else -tol
                golden = False
        if golden:
            e = (b - x) if x < m else (a - x)
            d = _GOLD * e
        u = x + d if abs(d) >= tol else x + (tol if d > 0 else -tol)
        fu = f(u)
        if fu <= fx:
            if u < x:
                b = x
            else:
                a = x
            v, fv, w, fw = w, fw, x, fx
            x, fx = u, fu
        else:
            if u < x:
                a = u
            else:
                b = u
            if fu <= fw or w == x:
                v, fv, w, fw = w, fw, u, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu
    return x, fx, False


def estimate(
    spectrum: EmpiricalSpectrum, band: Band | None = None, box: SearchBox | None = None
) -> EstimateResult:
    """Minimize the concentrated objective over the box.

    Golden-section with parabolic acceleration localizes the minimum to tol;
    away from the boundary, up to two Newton steps on the score then refine
    the minimizer below the function-comparison roundoff floor (short bands
    need this to certify tight tolerances on alpha_hat and g_hat).
    Boundary minima are snapped to the box edge and flagged.

    Raises NonPositiveAmplitude the first time any probed alpha gives
    Ghat(alpha) <= 0 (endpoints and midpoint probed first), and
    DegenerateBand for bands of fewer than 2 multipoles.
    """
    band = _band_or_full(spectrum, band)
    if box is None:
        box = SearchBox()
    if band.width < 2:
        raise DegenerateBand(f"band [{band.l_lo}, {band.l_hi}] cannot identify alpha")
    data = _BandData(spectrum, band)
    a1, a2, tol = box.alpha_min, box.alpha_max, box.tol

    evals = 0

    def budget() -> bool:
        # reserve 3 evaluations for the boundary snap and score polish
        return evals < _MAX_EVALS - 3

    def f(alpha: float) -> float:
        nonlocal evals
        evals += 1
        g = data.ghat(alpha)
        if g <= 0:
            raise NonPositiveAmplitude(f"Ghat({alpha}) = {g} <= 0")
        return math.log(g) - alpha * data.wbar

    # amplitude precheck at the endpoints and midpoint; the search itself
    # re-raises lazily on any later probe
    f(a1)
    f(0.5 * (a1 + a2))
    f(a2)
    x, fx, converged = _brent(f, a1, a2, tol, budget)

    # the closed box may have its minimum at an edge Brent cannot reach
    for edge in (a1, a2):
        if abs(x - edge) < 5.0 * tol:
            f_edge = f(edge)
            if f_edge <= fx:
                x, fx = edge, f_edge
            break

    boundary_hit = (x - a1) < tol or (a2 - x) < tol
    if not boundary_hit:
        for _ in range(2):
            if not budget():
                break
            evals += 1
            g0, g1, g2 = data.ghat_moments(x)
            if g0 <= 0:
                raise NonPositiveAmplitude(f"Ghat({x}) = {g0} <= 0")
            s = g1 / g0 - data.wbar
            q = (g2 * g0 - g1 * g1) / (g0 * g0)
            if q <= 0:
                break
            step = s / q
            x = min(max(x - step, a1), a2)
        boundary_hit = (x - a1) < tol or (a2 - x) < tol

    g_hat = data.ghat(x)
    if g_hat <= 0:
        raise NonPositiveAmplitude(f"Ghat({x}) = {g_hat} <= 0")
    return EstimateResult(
        alpha_hat=float(x),
        g_hat=float(g_hat),
        objective=float(math.log(g_hat) - x * data.wbar),
        band=band,
        evaluations=evals,
        converged=converged,
        boundary_hit=bool(boundary_hit),
    )


def correction_factor(l_max: int) -> float:
    """Finite-sample factor c_L = (1/L) sum_{l<=L} log l / log L, in (0, 1)."""
    if l_max < 2:
        raise ValueError("l_max must be >= 2")
    logs = np.log(np.arange(1, l_max + 1, dtype=float))
    return float(logs.sum() / (l_max * math.log(l_max)))


@dataclass(frozen=True)
class FullBand:
    """CLT factor sqrt(2) L / (4 c); c = c_L when corrected else 1."""

    l_max: int
    corrected: bool = False


@dataclass(frozen=True)
class NarrowBand:
    """CLT factor L sqrt(g^3 / 12) for band fraction g in (0, 1)."""

    l_max: int
    g: float

    def __post_init__(self) -> None:
        if not 0 < self.g < 1:
            raise ValueError("g must lie in (0, 1)")


@dataclass(frozen=True)
class NoiseSub:
    """Noise-debiased CLT factor; regime selected by u = alpha0 - gamma."""

    l_max: int
    alpha0: float
    gamma: float
    g0: float
    g_n: float

    def __post_init__(self) -> None:
        if not (self.g0 > 0 and self.g_n > 0):
            raise ValueError("g0 and g_n must be positive")


@dataclass(frozen=True)
class Rate:
    """Bias-rate factor L / (4 c_L) for the kappa-perturbation check."""

    l_max: int


NormalizationScheme = Union[FullBand, NarrowBand, NoiseSub, Rate]


def noise_h(u: float) -> float:
    """Reference inflation constant H(u) = (7 + 4u + u^2) / (4 (1+u)^3).

    Kept for comparison; the NoiseSub normalization uses
    noise_variance_constant, which matches the exact score variance (see
    tests for the summation oracle).
    """
    if not u > -1:
        raise ValueError("u must exceed -1")
    return (7.0 + 4.0 * u + u * u) / (4.0 * (1.0 + u) ** 3)


def noise_variance_constant(u: float) -> float:
    """Variance constant V(u) = (1 + u^2) / (1 + u)^3 for 0 < u < 1.

    In the intermediate noise regime Var(alpha_hat - alpha0) ~
    8 V(u) (g_n/g0)^2 L^{2(u-1)}, so dividing by sqrt(V) in the NoiseSub
    factor yields unit asymptotic variance.
    """
    if not u > -1:
        raise ValueError("u must exceed -1")
    return (1.0 + u * u) / (1.0 + u) ** 3


def normalization_factor(scheme: NormalizationScheme) -> float:
    """The scalar multiplying (alpha_hat - alpha0) for a N(0,1) limit.

    NoiseSub selects among three regimes by u = alpha0 - gamma: u < 0 reduces
    to the noiseless factor, u = 0 carries (1 + g_n/g0)^2, and 0 < u < 1
    slows the rate to L^(1-u); u >= 1 is outside the theory and raises
    UnsupportedRegime.
    """
    if isinstance(scheme, FullBand):
        c = correction_factor(scheme.l_max) if scheme.corrected else 1.0
        return math.sqrt(2.0) * scheme.l_max / (4.0 * c)
    if isinstance(scheme, NarrowBand):
        return scheme.l_max * math.sqrt(scheme.g**3 / 12.0)
    if isinstance(scheme, NoiseSub):
        u = scheme.alpha0 - scheme.gamma
        if u < 0:
            return math.sqrt(2.0) * scheme.l_max / 4.0
        if u == 0:
            return (
                math.sqrt(2.0)
                * scheme.l_max
                / 4.0
                * (1.0 + scheme.g_n / scheme.g0) ** 2
            )
        if u < 1:
            return (
                scheme.l_max ** (1.0 - u)
                * math.sqrt(2.0)
                / (4.0 * math.sqrt(noise_variance_constant(u)))
                * (scheme.g0 / scheme.g_n)
            )
        raise UnsupportedRegime(
            f"alpha0 - gamma = {u} >= 1: estimator diverges, no normalization"
        )
    if isinstance(scheme, Rate):
        return scheme.l_max / (4.0 * correction_factor(scheme.l_max))
    raise TypeError(f"not a normalization scheme: {scheme!r}")


def noise_scheme_from_estimate(
    result: EstimateResult, gamma: float, g_n: float, l_max: int
) -> NoiseSub:
    """Plug-in NoiseSub built from estimated (alpha_hat, g_hat)."""
    return NoiseSub(
        l_max=l_max, alpha0=result.alpha_hat, gamma=gamma, g0=result.g_hat, g_n=g_n
    )


def debiased_variance_ratio(l: int, c_t: float, c_n: float = 0.0) -> float:
    """Var(debiased C-tilde_l / C_T,l) = (2/(2l+1)) (1 + c_n/c_t)^2."""
    if l < 1:
        raise ValueError("l must be >= 1")
    if not c_t > 0:
        raise ValueError("c_t must be positive")
    if c_n < 0:
        raise ValueError("c_n must be nonnegative")
    return 2.0 / (2.0 * l + 1.0) * (1.0 + c_n / c_t) ** 2
