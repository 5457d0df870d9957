"""Survival-data simulation.

A baseline failure CDF is built as a monotone step function on an integer
time grid, individual durations are drawn under proportional hazards by
inverting each subject's survivor curve, and a covariate-independent
right-censoring mechanism is applied on top.  Exact per-event partial
log-likelihoods of the generating model are available for later
comparison with fitted risk scores.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .data import CovariateTable
from .errors import NumericError, ShapeError
from .riskset import risk_set_logsumexp
from .seeds import derive_seed


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class StepBaseline:
    """Ground-truth baseline on the grid t = 1..t_max.

    failure_cdf holds F(t), survivor S(t) = 1 - F(t), and hazard the
    discrete per-step rate h(t) = (F(t) - F(t-1)) / S(t-1), with h = 0
    wherever S(t-1) = 0.
    """

    t_max: int
    failure_cdf: np.ndarray
    survivor: np.ndarray
    hazard: np.ndarray

    def __post_init__(self):
        F = np.asarray(self.failure_cdf, dtype=float)
        S = np.asarray(self.survivor, dtype=float)
        h = np.asarray(self.hazard, dtype=float)
        if not (len(F) == len(S) == len(h) == self.t_max >= 1):
            raise ValueError("F, S, h must all have length t_max >= 1")
        if F[0] < 0 or F[-1] > 1 or np.any(np.diff(F) < 0):
            raise ValueError("failure CDF must be nondecreasing within [0, 1]")
        if np.max(np.abs(S - (1.0 - F))) > 1e-12:
            raise ValueError("survivor must equal 1 - F")
        S_prev = np.concatenate(([1.0], S[:-1]))
        dF = np.diff(F, prepend=0.0)
        if np.any(h < 0) or np.max(np.abs(h * S_prev - dF)) > 1e-12:
            raise ValueError("hazard inconsistent with F: need h(t)*S(t-1) = dF(t)")
        for name, arr in (("failure_cdf", F), ("survivor", S), ("hazard", h)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_cdf(cls, failure_cdf) -> "StepBaseline":
        """Derive survivor and hazard steps from a failure CDF."""
        F = np.asarray(failure_cdf, dtype=float)
        S = 1.0 - F
        S_prev = np.concatenate(([1.0], S[:-1]))
        dF = np.diff(F, prepend=0.0)
        h = np.divide(dF, S_prev, out=np.zeros_like(dF), where=S_prev > 0)
        return cls(len(F), F, S, h)


@dataclass(frozen=True)
class SurvivalRecord:
    """One observation: integer time, event indicator, covariate vector."""

    time: int
    event: bool
    covariates: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "time", int(self.time))
        object.__setattr__(self, "event", bool(self.event))
        cov = np.asarray(self.covariates, dtype=float).reshape(-1)
        cov.setflags(write=False)
        object.__setattr__(self, "covariates", cov)
        if self.time < 1:
            raise ValueError(f"time must be >= 1, got {self.time}")


@dataclass(frozen=True)
class SimulatedDataset:
    records: list
    baseline: StepBaseline
    beta: np.ndarray
    seed: int


def records_to_arrays(records):
    """Unpack SurvivalRecord lists into (times, events, covariate matrix)."""
    n = len(records)
    times = np.fromiter((r.time for r in records), dtype=np.int64, count=n)
    events = np.fromiter((r.event for r in records), dtype=bool, count=n)
    if n and records[0].covariates.size:
        X = np.stack([r.covariates for r in records])
    else:
        X = np.empty((n, 0))
    return times, events, X


def arrays_to_records(times, events, covariates=None):
    n = len(times)
    if covariates is None:
        covariates = np.empty((n, 0))
    X = covariates.rows if isinstance(covariates, CovariateTable) else np.asarray(covariates, dtype=float)
    return [SurvivalRecord(int(t), bool(e), X[i]) for i, (t, e) in enumerate(zip(times, events))]


def generate_baseline(
    t_max: int, num_knots: int = 8, f_max: float = 0.95, seed: int = 0
) -> StepBaseline:
    """Draw a random step-function baseline on the grid 1..t_max.

    num_knots uniform knot times on [1, t_max) and num_knots uniform
    failure probabilities on [0, f_max] are sorted and joined by monotone
    piecewise-linear interpolation, anchored at F(0) = 0 and
    F(t_max) = max drawn probability.  Each seed yields its own baseline.
    """
    if not 0.0 < f_max <= 1.0:
        raise ValueError(f"f_max must be in (0, 1], got {f_max}")
    if num_knots < 2:
        raise ValueError("num_knots must be >= 2")
    if t_max < num_knots:
        raise ValueError("t_max must be >= num_knots")
    rng = np.random.default_rng(seed)
    knot_t = np.sort(rng.uniform(1.0, float(t_max), size=num_knots))
    knot_f = np.sort(rng.uniform(0.0, f_max, size=num_knots))
    xp = np.concatenate(([0.0], knot_t, [float(t_max)]))
    fp = np.concatenate(([0.0], knot_f, [knot_f[-1]]))
    grid = np.arange(1, t_max + 1, dtype=float)
    return StepBaseline.from_cdf(np.interp(grid, xp, fp))


def invert_durations(baseline: StepBaseline, rel_risk, u):
    """Map uniform draws to grid times via each subject's survivor curve.

    Subject i survives step t with probability S0(t)**rel_risk[i]; the
    drawn time is the smallest t with that survivor value <= u[i].  When
    no grid time qualifies the subject is administratively censored at
    t_max (latent_event False).
    """
    rel = np.atleast_1d(np.asarray(rel_risk, dtype=float))
    u = np.atleast_1d(np.asarray(u, dtype=float))
    S_i = np.power(baseline.survivor[None, :], rel[:, None])
    hit = S_i <= u[:, None]
    has_event = hit.any(axis=1)
    times = np.where(has_event, hit.argmax(axis=1) + 1, baseline.t_max)
    return times.astype(np.int64), has_event


def simulate_durations(baseline: StepBaseline, covariates, beta, seed: int = 0):
    """Draw a (time, latent_event) pair per covariate row under
    proportional hazards with relative risk exp(x . beta)."""
    X = covariates.rows if isinstance(covariates, CovariateTable) else np.asarray(covariates, dtype=float)
    beta = np.asarray(beta, dtype=float).reshape(-1)
    if X.shape[1] != beta.shape[0]:
        raise ShapeError(
            f"covariate width {X.shape[1]} does not match beta length {beta.shape[0]}"
        )
    with np.errstate(over="ignore"):
        rel = np.exp(X @ beta)
    bad = np.nonzero(~np.isfinite(rel))[0]
    if bad.size:
        raise NumericError(f"exp(x . beta) overflowed at row {bad[0]}")
    rng = np.random.default_rng(seed)
    u = rng.random(X.shape[0])
    times, latent = invert_durations(baseline, rel, u)
    return list(zip(times.tolist(), latent.tolist()))


def apply_censoring(times_events, fraction: float, seed: int = 0, covariates=None):
    """Right-censor a fixed fraction of records, independent of covariates.

    round(fraction * n) records (half-up) are chosen uniformly without
    replacement; each gets event = 0 and a censoring time redrawn
    uniformly on the integers [1, original time].  All other records keep
    their drawn time with event = latent_event.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"fraction must be in [0, 1], got {fraction}")
    n = len(times_events)
    times = np.fromiter((t for t, _ in times_events), dtype=np.int64, count=n)
    events = np.fromiter((e for _, e in times_events), dtype=bool, count=n)
    rng = np.random.default_rng(seed)
    k = _round_half_up(fraction * n)
    chosen = rng.choice(n, size=k, replace=False)
    out_times = times.copy()
    out_events = events.copy()
    if k:
        out_events[chosen] = False
        out_times[chosen] = rng.integers(1, times[chosen] + 1)
    return arrays_to_records(out_times, out_events, covariates)


def simulate_dataset(
    covariates,
    beta,
    t_max: int = 100,
    num_knots: int = 8,
    f_max: float = 0.95,
    censor_fraction: float = 0.15,
    seed: int = 0,
) -> SimulatedDataset:
    """Generate a full dataset: baseline, durations, then censoring."""
    baseline = generate_baseline(t_max, num_knots, f_max, derive_seed(seed, "baseline"))
    pairs = simulate_durations(baseline, covariates, beta, derive_seed(seed, "durations"))
    records = apply_censoring(
        pairs, censor_fraction, derive_seed(seed, "censoring"), covariates=covariates
    )
    return SimulatedDataset(records, baseline, np.asarray(beta, dtype=float), seed)


def partial_loglik_from_scores(times, events, scores) -> np.ndarray:
    """Per-event values l_i = s_i - log sum_{j: t_j >= t_i} exp(s_j),
    returned in record order over the events."""
    times = np.asarray(times)
    events = np.asarray(events, dtype=bool)
    scores = np.asarray(scores, dtype=float)
    logdenom = risk_set_logsumexp(scores, times)
    return (scores - logdenom)[events]


def true_partial_loglik(records, beta) -> np.ndarray:
    """Per-event partial log-likelihood of the generating linear model."""
    times, events, X = records_to_arrays(records)
    if not events.any():
        warnings.warn("no events in records; returning empty result")
        return np.empty(0)
    beta = np.asarray(beta, dtype=float).reshape(-1)
    return partial_loglik_from_scores(times, events, X @ beta)


def write_dataset(path, records, column_names) -> None:
    """Serialize records as delimited text: time, event, covariates."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "event", *column_names])
        for r in records:
            writer.writerow(
                [r.time, int(r.event), *(format(v, ".17g") for v in r.covariates)]
            )


def read_dataset(path):
    """Load records written by write_dataset; returns (records, names)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        names = tuple(header[2:])
        records = [
            SurvivalRecord(int(row[0]), bool(int(row[1])), [float(v) for v in row[2:]])
            for row in reader
        ]
    return records, names


def write_baseline(path, baseline: StepBaseline) -> None:
    """Serialize a baseline as delimited text: t, F, S, h."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "F", "S", "h"])
        for t in range(baseline.t_max):
            writer.writerow(
                [
                    t + 1,
                    format(baseline.failure_cdf[t], ".17g"),
                    format(baseline.survivor[t], ".17g"),
                    format(baseline.hazard[t], ".17g"),
                ]
            )
