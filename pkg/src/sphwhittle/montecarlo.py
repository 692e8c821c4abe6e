"""Seeded, parallel replication engine for the estimator's sampling laws.

Each replication i of an experiment draws a spectrum with SeedSpec
(master_seed, i), estimates the index over the configured band, and
normalizes the error with the configured scheme.  Replications that error
with a non-positive amplitude or stop on the search boundary are counted in
boundary_hits and excluded from moment statistics (a diverging design would
otherwise destroy every statistic); all replications appear in the
per-replication table with a status column.

Reports are pure functions of the config, independent of worker count.
"""
from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import stats as _scipy_stats

from .errors import (
    AllReplicationsFailed,
    ConfigError,
    DegenerateSample,
    EmptySample,
    NonPositiveAmplitude,
    SampleSizeOutOfRange,
)
from .sampling import SeedSpec, sample_empirical, sample_observed_debiased
from .spectrum import (
    NoiseModel,
    SpectrumModel,
    asymptotic_params,
    model_from_dict,
    model_to_dict,
    noise_from_dict,
    noise_to_dict,
)
from .whittle import (
    Band,
    FullBand,
    NarrowBand,
    NoiseSub,
    NormalizationScheme,
    Rate,
    SearchBox,
    estimate,
    full_band,
    narrow_band,
    normalization_factor,
)

__all__ = [
    "ExperimentConfig",
    "MonteCarloReport",
    "QuantileRow",
    "Summary",
    "run_experiment",
    "quantile_frequencies",
    "shapiro_wilk",
    "summarize",
    "experiment_from_dict",
    "experiment_to_dict",
    "band_from_dict",
    "box_from_dict",
    "report_to_dict",
    "write_report_files",
    "DEFAULT_CUTPOINTS",
]

# the reference tables report frequencies at these standard-normal cutpoints
DEFAULT_CUTPOINTS = (-1.96, -1.0, -0.68, 0.0, 0.68, 1.0, 1.96)

_SW_MAX_N = 5000


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved experiment: model, band, scheme, box, and seeding."""

    model: SpectrumModel
    noise: NoiseModel | None
    l_max: int
    band: Band
    scheme: NormalizationScheme
    box: SearchBox
    replications: int
    master_seed: int

    def __post_init__(self) -> None:
        if self.l_max < 1:
            raise ValueError("l_max must be >= 1")
        if self.replications < 2:
            raise ValueError("replications must be >= 2")
        if self.band.l_hi > self.l_max:
            raise ValueError("band exceeds l_max")
        if isinstance(self.scheme, NoiseSub) and self.noise is None:
            raise ValueError("NoiseSub scheme requires a noise model")
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class QuantileRow:
    """Cutpoint frequencies, in percent.

    `percent` follows the reference tail convention (below for cutpoints
    <= 0, above for positive ones); `percent_below`/`percent_above` are the
    unambiguous one-sided readings.
    """

    cutpoint: float
    percent: float
    percent_below: float
    percent_above: float


@dataclass(frozen=True)
class Summary:
    """Raw-error moments (Table-5 semantics) plus the normalized errors."""

    bias: float
    variance: float
    mse: float
    normalized: np.ndarray


@dataclass(frozen=True)
class MonteCarloReport:
    """Experiment outcome.

    mean/variance describe the normalized interior errors; bias,
    variance_raw and mse describe the raw interior errors alpha_hat - alpha0
    and satisfy mse = variance_raw (n-1)/n + bias^2 exactly.  Failed or
    boundary replications are excluded from all moments and counted in
    boundary_hits; per-replication rows keep every replication with its
    status ("ok", "boundary", or "error").
    """

    replications: int
    boundary_hits: int
    mean: float
    variance: float
    bias: float
    variance_raw: float
    mse: float
    sw_w: float
    sw_p: float
    quantile_freqs: tuple[QuantileRow, ...]
    normalized_errors: np.ndarray
    raw_alpha_hats: np.ndarray
    statuses: tuple[str, ...]
    all_alpha_hats: np.ndarray
    all_normalized: np.ndarray


def quantile_frequencies(
    samples, cutpoints=DEFAULT_CUTPOINTS
) -> tuple[QuantileRow, ...]:
    """Sample frequencies at the given sorted cutpoints, in percent."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise EmptySample("no samples for quantile frequencies")
    cutpoints = [float(c) for c in cutpoints]
    if sorted(cutpoints) != cutpoints:
        raise ValueError("cutpoints must be sorted")
    rows = []
    for c in cutpoints:
        below = float((samples < c).mean() * 100.0)
        above = float((samples > c).mean() * 100.0)
        rows.append(
            QuantileRow(
                cutpoint=c,
                percent=below if c <= 0 else above,
                percent_below=below,
                percent_above=above,
            )
        )
    return tuple(rows)


def shapiro_wilk(samples) -> tuple[float, float]:
    """Shapiro-Wilk W and p-value (Royston's 1995 approximation).

    Valid for 3 <= n <= 5000 non-degenerate samples.
    """
    samples = np.asarray(samples, dtype=float)
    if not 3 <= samples.size <= _SW_MAX_N:
        raise SampleSizeOutOfRange(f"need 3 <= n <= {_SW_MAX_N}, got {samples.size}")
    if np.ptp(samples) == 0:
        raise DegenerateSample("all sample values are equal")
    res = _scipy_stats.shapiro(samples)
    return float(res.statistic), float(res.pvalue)


def summarize(alpha_hats, alpha0: float, scheme: NormalizationScheme) -> Summary:
    """Raw bias/variance/MSE of alpha_hat - alpha0 plus the normalized list.

    Variance is the unbiased (n-1) estimator; MSE is the mean of squared raw
    errors, so mse = variance (n-1)/n + bias^2 exactly.
    """
    alpha_hats = np.asarray(alpha_hats, dtype=float)
    if alpha_hats.size == 0:
        raise EmptySample("no estimates to summarize")
    errors = alpha_hats - alpha0
    n = errors.size
    bias = float(errors.mean())
    variance = float(errors.var(ddof=1)) if n > 1 else 0.0
    mse = float((errors**2).mean())
    return Summary(
        bias=bias,
        variance=variance,
        mse=mse,
        normalized=normalization_factor(scheme) * errors,
    )


def _replicate(cfg: ExperimentConfig, index: int) -> tuple[float, str]:
    seed = SeedSpec(cfg.master_seed, index)
    if cfg.noise is not None:
        spectrum = sample_observed_debiased(cfg.model, cfg.noise, cfg.l_max, seed)
    else:
        spectrum = sample_empirical(cfg.model, cfg.l_max, seed)
    try:
        result = estimate(spectrum, cfg.band, cfg.box)
    except NonPositiveAmplitude:
        return float("nan"), "error"
    if result.boundary_hit:
        return result.alpha_hat, "boundary"
    return result.alpha_hat, "ok"


def run_experiment(cfg: ExperimentConfig, threads: int | None = None) -> MonteCarloReport:
    """Run all replications and assemble the report.

    threads > 1 distributes replications over a thread pool; results are
    collected by replication index, so the report is identical for any
    thread count.
    """
    indices = range(cfg.replications)
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(lambda i: _replicate(cfg, i), indices))
    else:
        outcomes = [_replicate(cfg, i) for i in indices]

    alpha0 = asymptotic_params(cfg.model).alpha0
    factor = normalization_factor(cfg.scheme)
    all_alpha = np.array([a for a, _ in outcomes])
    statuses = tuple(s for _, s in outcomes)
    ok = np.array([s == "ok" for s in statuses])
    boundary_hits = int(cfg.replications - ok.sum())
    if not ok.any():
        raise AllReplicationsFailed(
            f"0 of {cfg.replications} replications produced an interior estimate"
        )

    raw = all_alpha[ok]
    summary = summarize(raw, alpha0, cfg.scheme)
    normalized = summary.normalized
    all_normalized = factor * (all_alpha - alpha0)

    sw_sample = normalized[:_SW_MAX_N]
    if sw_sample.size >= 3 and np.ptp(sw_sample) > 0:
        sw_w, sw_p = shapiro_wilk(sw_sample)
    else:
        sw_w, sw_p = float("nan"), float("nan")

    return MonteCarloReport(
        replications=cfg.replications,
        boundary_hits=boundary_hits,
        mean=float(normalized.mean()),
        variance=float(normalized.var(ddof=1)) if normalized.size > 1 else 0.0,
        bias=summary.bias,
        variance_raw=summary.variance,
        mse=summary.mse,
        sw_w=sw_w,
        sw_p=sw_p,
        quantile_freqs=quantile_frequencies(normalized),
        normalized_errors=normalized,
        raw_alpha_hats=raw,
        statuses=statuses,
        all_alpha_hats=all_alpha,
        all_normalized=all_normalized,
    )


def band_from_dict(d: dict, l_max: int) -> tuple[Band, float | None, dict]:
    """Band rule -> (band, band fraction g or None for full, resolved form)."""
    kind = d.get("type")
    if kind == "full":
        return full_band(l_max), None, {"type": "full"}
    if kind == "narrow":
        if "L1" in d:
            l1 = int(d["L1"])
            if not 1 <= l1 <= l_max:
                raise ConfigError(f"narrow band L1={l1} outside [1, {l_max}]")
            return Band(l1, l_max), 1.0 - l1 / l_max, {"type": "narrow", "L1": l1}
        if "c_g" in d:
            c_g = float(d["c_g"])
            band = narrow_band(l_max, c_g)
            return band, c_g / math.log(l_max), {"type": "narrow", "c_g": c_g}
        raise ConfigError("narrow band needs 'L1' or 'c_g'")
    raise ConfigError(f"unknown band type {kind!r}")


def box_from_dict(d: dict) -> SearchBox:
    """Search-box rule with defaults expanded."""
    try:
        return SearchBox(
            alpha_min=float(d.get("alpha_min", 2.01)),
            alpha_max=float(d.get("alpha_max", 10.0)),
            tol=float(d.get("tol", 1e-6)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad search box: {exc}") from exc


def _scheme_from_dict(
    d: dict,
    l_max: int,
    band_g: float | None,
    model: SpectrumModel,
    noise: NoiseModel | None,
) -> NormalizationScheme:
    kind = d.get("type")
    if kind == "fullband":
        return FullBand(l_max=l_max, corrected=bool(d.get("corrected", False)))
    if kind == "narrowband":
        if band_g is None:
            raise ConfigError("narrowband scheme requires a narrow band rule")
        return NarrowBand(l_max=l_max, g=band_g)
    if kind == "noise":
        if noise is None:
            raise ConfigError("noise scheme requires a noise model")
        params = asymptotic_params(model)
        return NoiseSub(
            l_max=l_max,
            alpha0=params.alpha0,
            gamma=noise.gamma,
            g0=params.g0,
            g_n=noise.g_n,
        )
    if kind == "rate":
        return Rate(l_max=l_max)
    raise ConfigError(f"unknown scheme type {kind!r}")


def experiment_from_dict(d: dict) -> tuple[ExperimentConfig, dict]:
    """Build an ExperimentConfig from its JSON form.

    Returns the config plus the fully resolved dict (defaults expanded) that
    reports embed so runs are self-describing.
    """
    try:
        model = model_from_dict(d["model"])
        noise = noise_from_dict(d["noise"]) if d.get("noise") else None
        l_max = int(d["L"])
        band, band_g, band_resolved = band_from_dict(
            d.get("band", {"type": "full"}), l_max
        )
        box = box_from_dict(d.get("box", {}))
        scheme = _scheme_from_dict(
            d.get("scheme", {"type": "fullband", "corrected": False}),
            l_max,
            band_g,
            model,
            noise,
        )
        replications = int(d["replications"])
        master_seed = int(d["seed"])
        cfg = ExperimentConfig(
            model=model,
            noise=noise,
            l_max=l_max,
            band=band,
            scheme=scheme,
            box=box,
            replications=replications,
            master_seed=master_seed,
        )
    except ConfigError:
        raise
    except KeyError as exc:
        raise ConfigError(f"experiment config missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad experiment config: {exc}") from exc
    return cfg, experiment_to_dict(cfg, band_resolved)


def _scheme_to_dict(scheme: NormalizationScheme) -> dict:
    if isinstance(scheme, FullBand):
        return {"type": "fullband", "corrected": scheme.corrected}
    if isinstance(scheme, NarrowBand):
        return {"type": "narrowband"}
    if isinstance(scheme, NoiseSub):
        return {"type": "noise"}
    if isinstance(scheme, Rate):
        return {"type": "rate"}
    raise TypeError(f"not a normalization scheme: {scheme!r}")


def experiment_to_dict(cfg: ExperimentConfig, band_resolved: dict | None = None) -> dict:
    """JSON form of a config with all defaults expanded."""
    if band_resolved is None:
        if cfg.band.l_lo == 1:
            band_resolved = {"type": "full"}
        else:
            band_resolved = {"type": "narrow", "L1": cfg.band.l_lo}
    return {
        "model": model_to_dict(cfg.model),
        "noise": noise_to_dict(cfg.noise) if cfg.noise else None,
        "L": cfg.l_max,
        "band": band_resolved,
        "box": {
            "alpha_min": cfg.box.alpha_min,
            "alpha_max": cfg.box.alpha_max,
            "tol": cfg.box.tol,
        },
        "scheme": _scheme_to_dict(cfg.scheme),
        "replications": cfg.replications,
        "seed": cfg.master_seed,
    }


def report_to_dict(report: MonteCarloReport, resolved_config: dict) -> dict:
    """JSON form of a report with the resolved config embedded."""
    return {
        "config": resolved_config,
        "replications": report.replications,
        "boundary_hits": report.boundary_hits,
        "mean": report.mean,
        "variance": report.variance,
        "bias": report.bias,
        "variance_raw": report.variance_raw,
        "mse": report.mse,
        "sw_w": report.sw_w,
        "sw_p": report.sw_p,
        "quantile_freqs": [
            {
                "cutpoint": row.cutpoint,
                "percent": row.percent,
                "percent_below": row.percent_below,
                "percent_above": row.percent_above,
            }
            for row in report.quantile_freqs
        ],
        "normalized_errors": [float(v) for v in report.normalized_errors],
        "raw_alpha_hats": [float(v) for v in report.raw_alpha_hats],
    }


def write_report_files(
    report: MonteCarloReport, resolved_config: dict, out_dir: str | Path
) -> tuple[Path, Path]:
    """Write report.json and samples.csv; returns their paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report_path = out / "report.json"
    with open(report_path, "w", newline="\n") as fh:
        json.dump(report_to_dict(report, resolved_config), fh, indent=2)
        fh.write("\n")
    samples_path = out / "samples.csv"
    with open(samples_path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["rep", "alpha_hat", "normalized", "status"])
        for i, (a, z, status) in enumerate(
            zip(report.all_alpha_hats, report.all_normalized, report.statuses)
        ):
            writer.writerow([i, repr(float(a)), repr(float(z)), status])
    return report_path, samples_path
