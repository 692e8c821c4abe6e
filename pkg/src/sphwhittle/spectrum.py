"""Angular power spectrum models and their large-l parameters.

A model assigns a positive value C_l to every multipole l >= 1.  The
semiparametric family behaves like g0 * l**(-alpha0) at high l, with the
first-order perturbation measured by kappa: C_l ~ g0 * (1 + kappa/l + o(1/l))
* l**(-alpha0).  An index alpha0 > 2 additionally makes sum (2l+1) C_l finite
(a well-defined mean-square continuous field); values in (0, 2] are accepted
because sampling and estimation stay valid there and simulation designs use
alpha0 = 2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ConfigError, OutOfRange, Unsupported

__all__ = [
    "ExactPowerLaw",
    "KappaPerturbed",
    "Rational",
    "Tabulated",
    "SpectrumModel",
    "NoiseModel",
    "AsymptoticParams",
    "spectrum_value",
    "spectrum_values",
    "noise_value",
    "noise_values",
    "asymptotic_params",
    "model_from_dict",
    "model_to_dict",
    "noise_from_dict",
    "noise_to_dict",
]

# construction-time positivity horizon for Rational; evaluators re-check
# every requested range, so this only needs to catch obvious sign changes
_RATIONAL_CHECK_LMAX = 4096


def _powers(l: np.ndarray, s: float) -> np.ndarray:
    # l**s defined as exp(s ln l) throughout
    return np.exp(s * np.log(l))


@dataclass(frozen=True)
class ExactPowerLaw:
    """C_l = g0 * l**(-alpha0)."""

    g0: float
    alpha0: float

    def __post_init__(self) -> None:
        if not (self.g0 > 0):
            raise ValueError("g0 must be positive")
        if not (self.alpha0 > 0):
            raise ValueError("alpha0 must be positive")


@dataclass(frozen=True)
class KappaPerturbed:
    """C_l = g0 * (1 + kappa/l) * l**(-alpha0); kappa > -1 keeps C_l > 0."""

    g0: float
    alpha0: float
    kappa: float

    def __post_init__(self) -> None:
        if not (self.g0 > 0):
            raise ValueError("g0 must be positive")
        if not (self.alpha0 > 0):
            raise ValueError("alpha0 must be positive")
        if not (self.kappa > -1):
            raise ValueError("kappa must exceed -1")


@dataclass(frozen=True)
class Rational:
    """C_l = (P(l) / Q(l)) * l**(-alpha0) with P, Q polynomials of equal degree.

    Coefficients are highest-order first, as accepted by numpy.polyval.
    Positive leading coefficients give the large-l amplitude g0 = p[0]/q[0]
    and kappa = p[1]/p[0] - q[1]/q[0].
    """

    p: tuple[float, ...]
    q: tuple[float, ...]
    alpha0: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", tuple(float(c) for c in self.p))
        object.__setattr__(self, "q", tuple(float(c) for c in self.q))
        if len(self.p) == 0 or len(self.p) != len(self.q):
            raise ValueError("p and q need equal, nonzero length")
        if not (self.p[0] > 0 and self.q[0] > 0):
            raise ValueError("leading coefficients must be positive")
        if not (self.alpha0 > 0):
            raise ValueError("alpha0 must be positive")
        l = np.arange(1, _RATIONAL_CHECK_LMAX + 1, dtype=float)
        if not (np.polyval(self.p, l) > 0).all() or not (np.polyval(self.q, l) > 0).all():
            raise ValueError("P and Q must be positive for all l >= 1")


@dataclass(frozen=True)
class Tabulated:
    """Explicit positive values for l = 1..len(values); no tail model."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.values) == 0:
            raise ValueError("values must be nonempty")
        if not all(v > 0 for v in self.values):
            raise ValueError("tabulated spectrum values must be positive")

    @property
    def l_max(self) -> int:
        return len(self.values)


SpectrumModel = Union[ExactPowerLaw, KappaPerturbed, Rational, Tabulated]


@dataclass(frozen=True)
class NoiseModel:
    """Noise spectrum C_N,l = g_n * l**(-gamma).

    gamma > 2 would make the noise field mean-square continuous; smaller
    exponents are accepted because the divergence regime gamma <= alpha0 - 1
    is itself a simulation target.
    """

    g_n: float
    gamma: float

    def __post_init__(self) -> None:
        if not (self.g_n > 0):
            raise ValueError("g_n must be positive")
        if not (self.gamma > 0):
            raise ValueError("gamma must be positive")


@dataclass(frozen=True)
class AsymptoticParams:
    """Large-l description (g0, alpha0, kappa) of a spectrum model."""

    g0: float
    alpha0: float
    kappa: float


def spectrum_values(model: SpectrumModel, l_max: int) -> np.ndarray:
    """Return C_l for l = 1..l_max as a float array.

    Raises OutOfRange if a Tabulated model is shorter than l_max.
    """
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    if isinstance(model, Tabulated):
        if l_max > model.l_max:
            raise OutOfRange(f"tabulated model has l_max={model.l_max} < {l_max}")
        return np.array(model.values[:l_max], dtype=float)
    l = np.arange(1, l_max + 1, dtype=float)
    if isinstance(model, ExactPowerLaw):
        return model.g0 * _powers(l, -model.alpha0)
    if isinstance(model, KappaPerturbed):
        return model.g0 * (1.0 + model.kappa / l) * _powers(l, -model.alpha0)
    if isinstance(model, Rational):
        num = np.polyval(model.p, l)
        den = np.polyval(model.q, l)
        # construction checks a fixed horizon; re-check the requested range
        if not (num > 0).all() or not (den > 0).all():
            raise ValueError("P and Q must be positive for all l >= 1")
        return (num / den) * _powers(l, -model.alpha0)
    raise TypeError(f"not a spectrum model: {model!r}")


def spectrum_value(model: SpectrumModel, l: int) -> float:
    """Return C_l for a single multipole l >= 1."""
    if l < 1:
        raise OutOfRange(f"multipole must be >= 1, got {l}")
    if isinstance(model, Tabulated):
        if l > model.l_max:
            raise OutOfRange(f"tabulated model has l_max={model.l_max} < {l}")
        return model.values[l - 1]
    lf = float(l)
    if isinstance(model, ExactPowerLaw):
        return model.g0 * lf ** -model.alpha0
    if isinstance(model, KappaPerturbed):
        return model.g0 * (1.0 + model.kappa / lf) * lf ** -model.alpha0
    if isinstance(model, Rational):
        num = float(np.polyval(model.p, lf))
        den = float(np.polyval(model.q, lf))
        if num <= 0 or den <= 0:
            raise ValueError("P and Q must be positive for all l >= 1")
        return (num / den) * lf ** -model.alpha0
    raise TypeError(f"not a spectrum model: {model!r}")


def noise_values(noise: NoiseModel, l_max: int) -> np.ndarray:
    """Return C_N,l for l = 1..l_max."""
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    l = np.arange(1, l_max + 1, dtype=float)
    return noise.g_n * _powers(l, -noise.gamma)


def noise_value(noise: NoiseModel, l: int) -> float:
    """Return C_N,l for a single multipole."""
    if l < 1:
        raise OutOfRange(f"multipole must be >= 1, got {l}")
    return noise.g_n * float(l) ** -noise.gamma


def asymptotic_params(model: SpectrumModel) -> AsymptoticParams:
    """Return (g0, alpha0, kappa) describing the large-l behaviour.

    Tabulated models carry no tail model and raise Unsupported.
    """
    if isinstance(model, ExactPowerLaw):
        return AsymptoticParams(model.g0, model.alpha0, 0.0)
    if isinstance(model, KappaPerturbed):
        return AsymptoticParams(model.g0, model.alpha0, model.kappa)
    if isinstance(model, Rational):
        g0 = model.p[0] / model.q[0]
        if len(model.p) == 1:
            kappa = 0.0
        else:
            kappa = model.p[1] / model.p[0] - model.q[1] / model.q[0]
        return AsymptoticParams(g0, model.alpha0, kappa)
    if isinstance(model, Tabulated):
        raise Unsupported("tabulated models have no asymptotic parameters")
    raise TypeError(f"not a spectrum model: {model!r}")


def model_from_dict(d: dict) -> SpectrumModel:
    """Build a spectrum model from its JSON form (see README for the schema)."""
    try:
        kind = d["type"]
        if kind == "power_law":
            return ExactPowerLaw(g0=float(d["g0"]), alpha0=float(d["alpha0"]))
        if kind == "kappa":
            return KappaPerturbed(
                g0=float(d["g0"]), alpha0=float(d["alpha0"]), kappa=float(d["kappa"])
            )
        if kind == "rational":
            return Rational(p=tuple(d["p"]), q=tuple(d["q"]), alpha0=float(d["alpha0"]))
        if kind == "table":
            return Tabulated(values=tuple(d["values"]))
    except KeyError as exc:
        raise ConfigError(f"model config missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad model config: {exc}") from exc
    raise ConfigError(f"unknown model type {d.get('type')!r}")


def model_to_dict(model: SpectrumModel) -> dict:
    """Inverse of model_from_dict."""
    if isinstance(model, ExactPowerLaw):
        return {"type": "power_law", "g0": model.g0, "alpha0": model.alpha0}
    if isinstance(model, KappaPerturbed):
        return {
            "type": "kappa",
            "g0": model.g0,
            "alpha0": model.alpha0,
            "kappa": model.kappa,
        }
    if isinstance(model, Rational):
        return {
            "type": "rational",
            "p": list(model.p),
            "q": list(model.q),
            "alpha0": model.alpha0,
        }
    if isinstance(model, Tabulated):
        return {"type": "table", "values": list(model.values)}
    raise TypeError(f"not a spectrum model: {model!r}")


def noise_from_dict(d: dict) -> NoiseModel:
    """Build a noise model from its JSON form."""
    try:
        return NoiseModel(g_n=float(d["g_n"]), gamma=float(d["gamma"]))
    except KeyError as exc:
        raise ConfigError(f"noise config missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad noise config: {exc}") from exc


def noise_to_dict(noise: NoiseModel) -> dict:
    """Inverse of noise_from_dict."""
    return {"g_n": noise.g_n, "gamma": noise.gamma}
