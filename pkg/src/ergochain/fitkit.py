"""Shared-parameter fits of block energy series against their asymptotics.

The three half-chain series measured on a chain of size N are tied to one
four-parameter family:

    deltaE(N) = a1 - a2/N
    W(N)      = a1 - a2/N - a3 * log^2(a4 N)/N
    Q(N)      =             a3 * log^2(a4 N)/N

:func:`shared_fit` fits all three simultaneously (one residual vector) with
damped least squares; a3 and a4 are kept positive through an exponential
reparametrization, and a small grid of a4 starts guards against the local
minima the log^2 term creates.  :func:`fit_log_gamma` extracts the
non-universal scale directly from the Q series via the exact linearization
sqrt(6 pi N Q) = log(N) + log(gamma).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .errors import FitError, InputError

SERIES_LABELS = ("deltaE", "W", "Q")
A4_STARTS = (0.5, 1.0, 2.0, 5.0, 10.0)


@dataclass(frozen=True)
class Series:
    """One measured quantity on a grid of chain sizes."""

    label: str
    ns: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        ns = np.asarray(self.ns, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "ns", ns)
        object.__setattr__(self, "values", values)
        if ns.ndim != 1 or ns.shape != values.shape:
            raise InputError("series sizes and values must be 1D and aligned")
        if ns.size < 2:
            raise InputError(f"series needs at least 2 points, got {ns.size}")
        if np.any(np.diff(ns) <= 0) or ns[0] < 2:
            raise InputError("chain sizes must be strictly increasing and >= 2")
        if not np.all(np.isfinite(values)):
            raise InputError("series values must be finite")


@dataclass(frozen=True)
class FitParams:
    """Result of :func:`shared_fit`: parameters, stacked residual norm, and
    coefficient of determination per series label."""

    alpha1: float
    alpha2: float
    alpha3: float
    alpha4: float
    residual: float
    r_squared: dict[str, float]


def linear_fit(xs: np.ndarray, ys: np.ndarray) -> tuple[float, float, float]:
    """Ordinary least squares y = slope*x + intercept; returns
    (slope, intercept, r_squared)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
        raise InputError("linear fit needs two aligned 1D arrays of >= 2 points")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        raise InputError("linear fit inputs must be finite")
    if np.ptp(xs) == 0:
        raise InputError("linear fit needs at least two distinct x values")
    slope, intercept = np.polyfit(xs, ys, 1)
    return float(slope), float(intercept), _r_squared(ys, slope * xs + intercept)


def _r_squared(ys: np.ndarray, fitted: np.ndarray) -> float:
    ss_res = float(np.sum((ys - fitted) ** 2))
    ss_tot = float(np.sum((ys - np.mean(ys)) ** 2))
    if ss_tot == 0.0:
        return 1.0 if ss_res == 0.0 else 0.0
    return 1.0 - ss_res / ss_tot


def _family(ns: np.ndarray, a1: float, a2: float, a3: float, a4: float):
    """Model values for (deltaE, W, Q) on the common grid."""
    smooth = a1 - a2 / ns
    anomalous = a3 * np.log(a4 * ns) ** 2 / ns
    return smooth, smooth - anomalous, anomalous


def shared_fit(series: list[Series], a4_starts=A4_STARTS) -> FitParams:
    """Joint damped least-squares fit of the deltaE/W/Q family.

    Requires exactly the three labels on one common size grid.  a1, a2 are
    seeded from an OLS fit of deltaE against 1/N; each a4 start seeds a3
    by moment matching on Q.  The best converged start by residual norm
    wins, ties going to the smallest a4 start.  Raises FitError if every
    start fails.
    """
    by_label = {s.label: s for s in series}
    if sorted(by_label) != sorted(SERIES_LABELS) or len(series) != 3:
        raise InputError(f"shared fit needs exactly the series {SERIES_LABELS}")
    ns = by_label["deltaE"].ns
    for s in series:
        if not np.array_equal(s.ns, ns):
            raise InputError("all series must share one chain-size grid")
    ys = np.concatenate([by_label[lab].values for lab in SERIES_LABELS])

    def residual(theta):
        a1, a2, u3, u4 = theta
        de, w, q = _family(ns, a1, a2, math.exp(u3), math.exp(u4))
        return np.concatenate([de, w, q]) - ys

    slope, intercept, _ = linear_fit(1.0 / ns, by_label["deltaE"].values)
    a1_0, a2_0 = intercept, -slope

    best = None
    best_cost = np.inf
    failures = []
    for a4_0 in sorted(a4_starts):
        logs = np.log(a4_0 * ns) ** 2
        a3_0 = float(np.mean(by_label["Q"].values * ns / logs))
        if not np.isfinite(a3_0) or a3_0 <= 0:
            a3_0 = 1e-3
        theta0 = [a1_0, a2_0, math.log(a3_0), math.log(a4_0)]
        try:
            res = scipy.optimize.least_squares(
                residual, theta0, method="lm", xtol=1e-12, ftol=1e-12,
                gtol=1e-12, max_nfev=5000)
        except Exception as exc:  # singular Jacobian, overflow in exp, ...
            failures.append(f"a4={a4_0}: {exc}")
            continue
        if res.status <= 0 or not np.all(np.isfinite(res.x)):
            failures.append(f"a4={a4_0}: status {res.status} ({res.message})")
            continue
        if res.cost < best_cost:
            best, best_cost = res, res.cost
    if best is None:
        raise FitError("no optimizer start converged: " + "; ".join(failures))

    a1, a2 = float(best.x[0]), float(best.x[1])
    a3, a4 = float(math.exp(best.x[2])), float(math.exp(best.x[3]))
    de, w, q = _family(ns, a1, a2, a3, a4)
    fitted = {"deltaE": de, "W": w, "Q": q}
    r2 = {lab: _r_squared(by_label[lab].values, fitted[lab])
          for lab in SERIES_LABELS}
    return FitParams(alpha1=a1, alpha2=a2, alpha3=a3, alpha4=a4,
                     residual=float(np.linalg.norm(best.fun)), r_squared=r2)


def fit_log_gamma(q_series: Series) -> tuple[float, float]:
    """Non-universal scale log(gamma) from a bound-energy series.

    Uses sqrt(6 pi N Q(N)) = log(N) + log(gamma) exactly, so the estimate
    is a plain mean of per-point values; returns (log_gamma, residual norm
    of the linearized relation).  Requires >= 3 points and positive Q.
    """
    if q_series.ns.size < 3:
        raise InputError("log-gamma fit needs at least 3 points")
    if np.any(q_series.values <= 0):
        raise InputError("log-gamma fit needs strictly positive bound energies")
    y = np.sqrt(6.0 * math.pi * q_series.ns * q_series.values)
    log_gamma = float(np.mean(y - np.log(q_series.ns)))
    if log_gamma + math.log(q_series.ns[0]) <= 0:
        raise FitError(
            f"positive-branch linearization inconsistent (log gamma {log_gamma:.6g})")
    residual = float(np.linalg.norm(y - (np.log(q_series.ns) + log_gamma)))
    return log_gamma, residual
