"""Sampling of empirical angular power spectra and harmonic coefficients.

For a Gaussian isotropic field the empirical spectrum at multipole l is
C_hat_l = C_l * X_l / (2l+1) with X_l ~ chi-square(2l+1), independent over l:
the (2l+1) real harmonic coefficients at level l are independent normals with
Var(a_l0) = C_l and Var(Re a_lm) = Var(Im a_lm) = C_l / 2 for m >= 1.

Every draw is keyed by a SeedSpec (master seed, stream index), one
independent stream per replication, so parallel experiments are bit-for-bit
reproducible regardless of scheduling.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import OutOfRange
from .spectrum import NoiseModel, SpectrumModel, noise_values, spectrum_values

__all__ = [
    "EmpiricalSpectrum",
    "HarmonicCoefficients",
    "SeedSpec",
    "generator",
    "sample_empirical",
    "sample_alm",
    "empirical_from_alm",
    "sample_observed_debiased",
    "write_spectrum_csv",
    "read_spectrum_csv",
]


@dataclass(frozen=True)
class EmpiricalSpectrum:
    """Observed spectrum values for l = 1..l_max.

    Non-debiased spectra are quadratic forms and must be strictly positive.
    Debiased spectra (noise subtracted) may carry negative values; those are
    kept as-is so downstream amplitude checks can detect the failure regime.
    """

    values: np.ndarray
    debiased: bool = False

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("values must be a nonempty 1-D array")
        if not np.isfinite(values).all():
            raise ValueError("values must be finite")
        if not self.debiased and not (values > 0).all():
            raise ValueError("non-debiased spectrum values must be positive")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def l_max(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class HarmonicCoefficients:
    """Flat real coefficient layout for l = 1..l_max.

    Level l occupies data[l*l - 1 : l*l + 2*l] as
    [a_l0, Re a_l1, Im a_l1, ..., Re a_ll, Im a_ll] (2l+1 reals), so the
    total length is l_max * (l_max + 2).
    """

    data: np.ndarray
    l_max: int

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=float)
        if self.l_max < 1:
            raise ValueError("l_max must be >= 1")
        expected = self.l_max * (self.l_max + 2)
        if data.ndim != 1 or data.size != expected:
            raise ValueError(f"data must have length {expected}, got {data.size}")
        data = data.copy()
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    def level(self, l: int) -> np.ndarray:
        """Return the 2l+1 coefficients of level l."""
        if not 1 <= l <= self.l_max:
            raise OutOfRange(f"level must be in [1, {self.l_max}], got {l}")
        return self.data[l * l - 1 : l * l + 2 * l]


@dataclass(frozen=True)
class SeedSpec:
    """Replication seed: a 64-bit master seed plus a stream index."""

    master_seed: int
    stream_index: int = 0

    def __post_init__(self) -> None:
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        if int(self.stream_index) < 0:
            raise ValueError("stream_index must be nonnegative")


def generator(seed: SeedSpec) -> np.random.Generator:
    """Return the generator for one replication stream.

    Streams for distinct (master_seed, stream_index) pairs are independent;
    the mapping is stable across processes and worker counts.
    """
    return np.random.default_rng(
        np.random.SeedSequence((int(seed.master_seed), int(seed.stream_index)))
    )


def _chisq_ratios(l_max: int, rng: np.random.Generator) -> np.ndarray:
    # X_l / (2l+1) with X_l ~ chi2(2l+1), one draw per multipole
    df = 2.0 * np.arange(1, l_max + 1, dtype=float) + 1.0
    return rng.chisquare(df) / df


def sample_empirical(model: SpectrumModel, l_max: int, seed: SeedSpec) -> EmpiricalSpectrum:
    """Draw C_hat_l = C_l * chi2(2l+1)/(2l+1) for l = 1..l_max."""
    c = spectrum_values(model, l_max)
    return EmpiricalSpectrum(values=c * _chisq_ratios(l_max, generator(seed)))


def sample_alm(model: SpectrumModel, l_max: int, seed: SeedSpec) -> HarmonicCoefficients:
    """Draw the flat harmonic coefficient vector for l = 1..l_max."""
    c = spectrum_values(model, l_max)
    l = np.arange(1, l_max + 1)
    counts = 2 * l + 1
    # per-entry standard deviations: sqrt(C_l) at m=0, sqrt(C_l/2) otherwise
    sd = np.repeat(np.sqrt(c / 2.0), counts)
    sd[l * l - 1] = np.sqrt(c)
    z = generator(seed).standard_normal(sd.size)
    return HarmonicCoefficients(data=sd * z, l_max=l_max)


def empirical_from_alm(coeffs: HarmonicCoefficients) -> EmpiricalSpectrum:
    """Compute C_hat_l = (a_l0^2 + 2 sum_m (Re^2 + Im^2)) / (2l+1)."""
    l = np.arange(1, coeffs.l_max + 1)
    weights = np.full(coeffs.data.size, 2.0)
    weights[l * l - 1] = 1.0
    sums = np.add.reduceat(weights * coeffs.data**2, l * l - 1)
    return EmpiricalSpectrum(values=sums / (2 * l + 1))


def sample_observed_debiased(
    model: SpectrumModel, noise: NoiseModel, l_max: int, seed: SeedSpec
) -> EmpiricalSpectrum:
    """Draw the noise-debiased spectrum (C_T + C_N) chi2/(2l+1) - C_N.

    Negative values are retained: they signal multipoles where the noise
    dominates and are meaningful to the estimator's failure diagnostics.
    """
    c_t = spectrum_values(model, l_max)
    c_n = noise_values(noise, l_max)
    ratios = _chisq_ratios(l_max, generator(seed))
    return EmpiricalSpectrum(values=(c_t + c_n) * ratios - c_n, debiased=True)


def write_spectrum_csv(spectrum: EmpiricalSpectrum, path: str | Path) -> None:
    """Write `l,c_hat` rows with shortest round-trip float formatting."""
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["l", "c_hat"])
        for l, v in enumerate(spectrum.values, start=1):
            writer.writerow([l, repr(float(v))])


def read_spectrum_csv(path: str | Path, debiased: bool | None = None) -> EmpiricalSpectrum:
    """Read a `l,c_hat` file; rows must cover l = 1..L in order.

    When debiased is None the flag is inferred: any value <= 0 marks the
    spectrum as debiased (a non-debiased spectrum is positive by construction).
    """
    values = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["l", "c_hat"]:
            raise ValueError(f"expected header 'l,c_hat' in {path}")
        for i, row in enumerate(reader, start=1):
            if len(row) != 2:
                raise ValueError(f"row {i}: expected 2 fields, got {len(row)}")
            if int(row[0]) != i:
                raise ValueError(f"row {i}: multipoles must run 1..L in order")
            values.append(float(row[1]))
    arr = np.array(values, dtype=float)
    if debiased is None:
        debiased = bool((arr <= 0).any())
    return EmpiricalSpectrum(values=arr, debiased=debiased)
