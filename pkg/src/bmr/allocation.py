"""Water-filling of the excitation budget across modes.

The per-mode rate is concave in its budget over the regimes traversed here, so
the optimum equalizes the marginal rates: every active mode sits at the common
level mu, modes whose marginal at zero already falls below mu stay empty.  The
marginal is a finite difference of the rate and its inversion is a bisection,
which keeps this module free of assumptions beyond monotonicity; an exhaustive
grid search doubles as the guard for the concavity assumption in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rates import _rate

__all__ = ["MAX_ITERATIONS", "AllocationProblem", "marginal_rate", "optimize", "waterfill", "brute_force"]

MAX_ITERATIONS = 1000


@dataclass(frozen=True)
class AllocationProblem:
    """Budget split: per-mode effective noise, total budget, budget tolerance.

    ``budget`` is the total number of excitations to distribute (n times the
    per-use allowance).  ``tol`` bounds how far the returned allocation's sum
    may sit from the budget; it defaults to 1e-9 * max(1, budget).
    """

    t: np.ndarray
    budget: float
    tol: float | None = None

    def __post_init__(self):
        t = np.atleast_1d(np.asarray(self.t, dtype=float))
        if t.ndim != 1 or t.size == 0:
            raise ValueError("noise vector must be a non-empty 1-d array")
        if not np.all(np.isfinite(t)) or np.any(t <= 0.0):
            raise ValueError("noise entries must be positive and finite")
        t.setflags(write=False)
        object.__setattr__(self, "t", t)
        budget = float(self.budget)
        if not (math.isfinite(budget) and budget >= 0.0):
            raise ValueError(f"budget must be a non-negative finite number, got {budget}")
        object.__setattr__(self, "budget", budget)
        tol = 1e-9 * max(1.0, budget) if self.tol is None else float(self.tol)
        if not tol > 0.0:
            raise ValueError("tolerance must be positive")
        object.__setattr__(self, "tol", tol)


def _marginal(t, n_k):
    h = np.maximum(1e-6, 1e-6 * n_k)
    return (_rate(t, n_k + h) - _rate(t, n_k - h)) / (2.0 * h)


def marginal_rate(t, n_k):
    """Derivative of the per-mode rate in the budget, by central differences.

    Step max(1e-6, 1e-6 * n_k); the rate formula is analytic around zero, so
    the stencil may dip slightly below zero budget.  Accepts scalars or arrays.
    """
    scalar = np.ndim(t) == 0 and np.ndim(n_k) == 0
    t = np.asarray(t, dtype=float)
    n_k = np.asarray(n_k, dtype=float)
    if not np.all(np.isfinite(t)) or np.any(t <= 0.0):
        raise ValueError("effective noise must be positive and finite")
    if not np.all(np.isfinite(n_k)) or np.any(n_k < 0.0):
        raise ValueError("mode budgets must be non-negative and finite")
    out = _marginal(t, n_k)
    return float(out) if scalar else out


def _budgets_at_level(t, mu, cap, tol_n):
    """Invert the marginal at level mu for every mode, elementwise bisection.

    The marginal decreases in the budget, so modes with marginal(0) <= mu
    collapse to zero and modes with marginal(cap) >= mu saturate at the cap
    without special-casing.
    """
    lo = np.zeros_like(t)
    hi = np.broadcast_to(cap, t.shape).copy()
    for _ in range(MAX_ITERATIONS):
        mid = 0.5 * (lo + hi)
        above = _marginal(t, mid) > mu
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
        if np.all(hi - lo <= tol_n):
            break
    return 0.5 * (lo + hi)


def _waterfill_positive(t, budgets, tols):
    m, n = t.shape
    cap = budgets[:, None]
    half_tol = 0.5 * tols[:, None]
    tol_n = (tols / (4.0 * n))[:, None]
    mu_hi = _marginal(t, np.zeros_like(t)).max(axis=1, keepdims=True)
    mu_lo = np.minimum(_marginal(t, np.broadcast_to(cap, t.shape)).min(axis=1, keepdims=True), mu_hi)
    mu_lo = np.maximum(mu_lo, 1e-320)
    # last sample whose sum reached the budget (the caps trivially do); when a
    # problem's level interval collapses onto a flat marginal plateau (huge
    # noise, near-linear objective) this is what gets rescaled to the budget
    best = np.broadcast_to(cap, t.shape).copy()
    done = np.zeros((m, 1), dtype=bool)
    for _ in range(MAX_ITERATIONS):
        # geometric midpoint: the level spans many orders of magnitude
        mu = np.sqrt(mu_lo) * np.sqrt(mu_hi)
        allocation = _budgets_at_level(t, mu, cap, tol_n)
        totals = allocation.sum(axis=1, keepdims=True)
        within = np.abs(totals - cap) <= half_tol
        short = totals < cap
        best = np.where(~done & (within | ~short), allocation, best)
        done = done | within | (mu_hi - mu_lo <= 4.0 * np.spacing(mu_hi))
        if np.all(done):
            break
        mu_hi = np.where(~done & short, mu, mu_hi)
        mu_lo = np.where(~done & ~short, mu, mu_lo)
    else:
        raise RuntimeError("water-filling did not converge; malformed problem")
    # the objective increases in every budget, so the constraint binds:
    # rescale the kept sample exactly onto the budget
    return best * (cap / best.sum(axis=1, keepdims=True))


def waterfill(t, budget, tol=None):
    """Allocate budgets over modes by equalizing marginal rates.

    ``t`` is one problem (shape (n,)) or a stack of problems (m, n); ``budget``
    and ``tol`` broadcast over the stack.  Stacked problems are bisected in
    lockstep, which is what makes large parameter sweeps cheap.
    """
    t = np.asarray(t, dtype=float)
    single = t.ndim == 1
    t2 = np.atleast_2d(t)
    if t2.ndim != 2 or t2.size == 0:
        raise ValueError("noise must be a vector or a stack of vectors")
    if not np.all(np.isfinite(t2)) or np.any(t2 <= 0.0):
        raise ValueError("noise entries must be positive and finite")
    m = t2.shape[0]
    budgets = np.broadcast_to(np.asarray(budget, dtype=float), (m,)).copy()
    if not np.all(np.isfinite(budgets)) or np.any(budgets < 0.0):
        raise ValueError("budgets must be non-negative and finite")
    if tol is None:
        tols = 1e-9 * np.maximum(1.0, budgets)
    else:
        tols = np.broadcast_to(np.asarray(tol, dtype=float), (m,)).copy()
        if np.any(tols <= 0.0):
            raise ValueError("tolerances must be positive")
    out = np.zeros_like(t2)
    active = budgets > 0.0
    if np.any(active):
        out[active] = _waterfill_positive(t2[active], budgets[active], tols[active])
    return out[0] if single else out


def optimize(problem: AllocationProblem) -> np.ndarray:
    """Optimal allocation for one problem; the budget constraint binds.

    Equal-noise modes receive equal budgets (the bisections are deterministic
    and elementwise identical), and permuting the noise permutes the result.
    """
    return waterfill(problem.t, problem.budget, problem.tol)


def brute_force(problem: AllocationProblem, step) -> np.ndarray:
    """Exhaustive simplex grid search; the oracle the optimizer is tested against.

    ``step`` is the grid resolution as a fraction of the budget, e.g. 0.01
    walks the allocation simplex in percent steps.  Guarded to n <= 4 modes.
    """
    t = problem.t
    n = t.size
    if n > 4:
        raise ValueError("brute force is limited to 4 modes")
    step = float(step)
    if not 0.0 < step <= 1.0:
        raise ValueError(f"step must lie in (0, 1], got {step}")
    m = max(1, int(round(1.0 / step)))
    if n == 1:
        fractions = np.array([[float(m)]])
    else:
        axes = np.indices((m + 1,) * (n - 1)).reshape(n - 1, -1)
        head = axes[:, axes.sum(axis=0) <= m]
        fractions = np.concatenate([head, (m - head.sum(axis=0))[None, :]], axis=0).T.astype(float)
    allocations = fractions * (problem.budget / m)
    objective = _rate(t[None, :], allocations).sum(axis=1)
    return allocations[int(np.argmax(objective))]
