"""Numerically stable risk-set accumulations.

The quantity log sum_{j: t_j >= t_i} exp(s_j) appears in the training
loss, its gradient, the cumulative-baseline-hazard estimator, and
per-event partial log-likelihoods.  It is computed here once, with a
cumulative pairwise log-sum-exp over records sorted by decreasing time.
Tied times share the full risk set.
"""

from __future__ import annotations

import numpy as np


def decreasing_time_runs(times: np.ndarray):
    """Sort positions by decreasing time and mark runs of tied times.

    Returns (order, run_first, run_last) where ``order`` indexes the
    original array and run_first/run_last give, for each sorted position,
    the first and last sorted position sharing its time.
    """
    times = np.asarray(times)
    n = times.shape[0]
    order = np.argsort(-times, kind="stable")
    ts = times[order]
    new_run = np.empty(n, dtype=bool)
    new_run[0] = True
    new_run[1:] = ts[1:] != ts[:-1]
    run_id = np.cumsum(new_run) - 1
    starts = np.nonzero(new_run)[0]
    ends = np.append(starts[1:] - 1, n - 1)
    return order, starts[run_id], ends[run_id]


def risk_set_logsumexp(scores: np.ndarray, times: np.ndarray) -> np.ndarray:
    """Per-record log sum of exp(scores[j]) over {j : times[j] >= times[i]}.

    Accumulated pairwise with np.logaddexp, so no global exponentiation
    can overflow.
    """
    scores = np.asarray(scores, dtype=float)
    times = np.asarray(times)
    if scores.shape != times.shape:
        raise ValueError("scores and times must have identical shape")
    n = scores.shape[0]
    if n == 0:
        return np.empty(0)
    order, _, run_last = decreasing_time_runs(times)
    cumulative = np.logaddexp.accumulate(scores[order])
    out = np.empty(n)
    out[order] = cumulative[run_last]
    return out
