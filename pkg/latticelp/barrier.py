"""Separable power programs solved on a log-barrier path.

    minimize  Σ_j w_j c_j^p   subject to  M c >= r,  c >= 0

with M >= 0 entrywise and p > 1. Every returned upper bound is the cost of a
strictly feasible point; every lower bound is the value of the Lagrange dual
at the barrier multipliers, so the optimum lies in [lower, upper].
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from latticelp.config import settings
from latticelp.metrics import BARRIER_NEWTON_STEPS

logger = logging.getLogger(__name__)

_MU = 8.0
_MAX_OUTER = 200
_MAX_NEWTON = 100


@dataclass(frozen=True)
class PowerProgramResult:
    upper: float
    lower: float
    c: np.ndarray

    @property
    def gap(self) -> float:
        return self.upper - self.lower


def minimize_power_sum(
    weights: np.ndarray,
    matrix: np.ndarray,
    rhs: np.ndarray,
    p: float,
    tolerance: Optional[float] = None,
) -> Optional[PowerProgramResult]:
    """Solve the program to relative gap ``tolerance``; None when infeasible."""
    tolerance = settings.barrier_tolerance if tolerance is None else tolerance
    w = np.asarray(weights, dtype=float)
    M = np.asarray(matrix, dtype=float).reshape(-1, w.size)
    r = np.asarray(rhs, dtype=float)
    k = w.size
    c_full = np.zeros(k)

    active = r > 0
    M, r = M[active], r[active]

    # Zero-weight variables are free: any row they touch can be met at no cost
    free = w == 0
    if free.any() and M.size:
        covered = (M[:, free] > 0).any(axis=1)
        if covered.any():
            reach = M[covered][:, free].sum(axis=1)
            c_full[free] = float(np.max(r[covered] / reach))
        M, r = M[~covered], r[~covered]
    paid = ~free
    M = M[:, paid]
    w_paid = w[paid]

    if r.size == 0:
        return PowerProgramResult(0.0, 0.0, c_full)
    if (M.sum(axis=1) <= 0).any():
        return None

    scale = float(r.max())
    result = _barrier(w_paid, M, r / scale, p, tolerance)
    c_full[paid] = result.c * scale
    factor = scale**p
    return PowerProgramResult(result.upper * factor, result.lower * factor, c_full)


def _barrier(w: np.ndarray, M: np.ndarray, r: np.ndarray, p: float, tolerance: float) -> PowerProgramResult:
    m, k = M.shape
    start = 2.0 * float(np.max(r / M.sum(axis=1))) + 1.0
    c = np.full(k, start)

    def cost(x: np.ndarray) -> float:
        return float(np.dot(w, x**p))

    def dual(y: np.ndarray) -> float:
        sigma = M.T @ y
        positive = sigma > 0
        conj = np.zeros(k)
        with np.errstate(over="ignore"):
            conj[positive] = (p - 1) * w[positive] * (sigma[positive] / (p * w[positive])) ** (p / (p - 1))
        value = float(np.dot(r, y) - conj.sum())
        return value if np.isfinite(value) else 0.0

    t = (m + k) / max(cost(c), 1e-12)
    upper, lower = cost(c), 0.0
    for outer in range(_MAX_OUTER):
        c = _center(w, M, r, p, t, c)
        slack = M @ c - r
        upper = cost(c)
        lower = max(lower, dual(1.0 / (t * slack)))
        if upper - lower <= tolerance * max(upper, 1e-300):
            logger.debug("Barrier converged after %d outer steps, gap %.3e", outer + 1, upper - lower)
            break
        t *= _MU
    else:
        logger.warning("Barrier stopped at relative gap %.3e", (upper - lower) / max(upper, 1e-300))
    return PowerProgramResult(upper, max(lower, 0.0), c)


def _center(w, M, r, p, t, c):
    def objective(x: np.ndarray) -> float:
        return t * float(np.dot(w, x**p)) - float(np.log(M @ x - r).sum()) - float(np.log(x).sum())

    value = objective(c)
    for _ in range(_MAX_NEWTON):
        slack = M @ c - r
        inv_slack = 1.0 / slack
        grad = t * p * w * c ** (p - 1) - M.T @ inv_slack - 1.0 / c
        hess = (M.T * inv_slack**2) @ M
        hess[np.diag_indices_from(hess)] += t * p * (p - 1) * w * c ** (p - 2) + 1.0 / c**2
        step = np.linalg.solve(hess, -grad)
        decrement = float(-grad @ step)
        BARRIER_NEWTON_STEPS.inc()
        if decrement / 2.0 <= 1e-12:
            break
        alpha = 1.0
        while alpha > 1e-18:
            trial = c + alpha * step
            if (trial > 0).all() and (M @ trial - r > 0).all():
                trial_value = objective(trial)
                if trial_value <= value - 0.25 * alpha * decrement:
                    break
            alpha *= 0.5
        else:
            break
        c, value = trial, trial_value
    return c
