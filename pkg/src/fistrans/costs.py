"""Adjustment-cost and allocation-cost evaluators with analytic gradients.

The per-category adjustment cost is quadratic-cubic,

    phi_k(d) = gamma_k/2 * d^2 + eta_k/3 * |d|^3,

so marginal costs rise sharply for large reallocations. The asymmetric
variant splits the quadratic curvature into gamma_up (increases) and
gamma_down (reductions). The allocation cost is quadratic in deviations
from a target composition plus an optional quadratic penalty on total
spending. Both families are convex and continuously differentiable,
including at zero change: d|d| has derivative 2|d|, so the cubic term is
smooth there with zero slope.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .types import (
    DeltaVector,
    ExpenditureVector,
    FiscalCostSpec,
    ModeMismatchError,
    RigidityParams,
)

__all__ = [
    "CostEval",
    "phi",
    "phi_asymmetric",
    "adjustment_cost",
    "stage_cost",
    "gradient_check",
    "quad_cubic_value",
    "quad_cubic_marginal",
    "quad_cubic_curvature",
    "asym_quad_cubic_value",
    "asym_quad_cubic_marginal",
    "asym_quad_cubic_curvature",
]


@dataclass(frozen=True, eq=False)
class CostEval:
    """A cost value together with its analytic gradient (one entry per category)."""

    value: float
    gradient: np.ndarray

    def __post_init__(self) -> None:
        grad = np.array(self.gradient, dtype=float)
        grad.flags.writeable = False
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "gradient", grad)


def quad_cubic_value(d, gamma, eta):
    """Elementwise gamma/2 * d^2 + eta/3 * |d|^3."""
    d = np.asarray(d, dtype=float)
    return 0.5 * gamma * d * d + (np.asarray(eta) / 3.0) * np.abs(d) ** 3


def quad_cubic_marginal(d, gamma, eta):
    """Elementwise derivative gamma * d + eta * d * |d|."""
    d = np.asarray(d, dtype=float)
    return gamma * d + eta * d * np.abs(d)


def quad_cubic_curvature(d, gamma, eta):
    """Elementwise second derivative gamma + 2 * eta * |d| (continuous at 0)."""
    d = np.asarray(d, dtype=float)
    return gamma + 2.0 * eta * np.abs(d)


def asym_quad_cubic_value(d, gamma_up, gamma_down, eta):
    """Asymmetric value: gamma_up/2 * max(d,0)^2 + gamma_down/2 * max(-d,0)^2 + eta/3 * |d|^3."""
    d = np.asarray(d, dtype=float)
    up = np.maximum(d, 0.0)
    dn = np.maximum(-d, 0.0)
    return 0.5 * gamma_up * up * up + 0.5 * gamma_down * dn * dn + (np.asarray(eta) / 3.0) * np.abs(d) ** 3


def asym_quad_cubic_marginal(d, gamma_up, gamma_down, eta):
    """Asymmetric derivative: gamma_up * d for d > 0, gamma_down * d for d < 0, plus eta * d * |d|."""
    d = np.asarray(d, dtype=float)
    quad = np.where(d > 0.0, gamma_up * d, gamma_down * d)
    return quad + eta * d * np.abs(d)


def asym_quad_cubic_curvature(d, gamma_up, gamma_down, eta):
    """Asymmetric second derivative; the quadratic kink at 0 takes the mean curvature."""
    d = np.asarray(d, dtype=float)
    quad = np.where(d > 0.0, gamma_up, np.where(d < 0.0, gamma_down, 0.5 * (np.asarray(gamma_up) + np.asarray(gamma_down))))
    return quad + 2.0 * eta * np.abs(d)


def phi(d: DeltaVector, p: RigidityParams) -> CostEval:
    """Symmetric adjustment cost of a change vector, with its gradient.

    Raises ModeMismatchError for asymmetric parameter sets; calibration
    mistakes must surface rather than be coerced.
    """
    if p.is_asymmetric:
        raise ModeMismatchError("phi requires symmetric rigidity; use phi_asymmetric")
    dv = d.as_array()
    gamma = p.gamma_array()
    eta = p.eta_array()
    value = float(np.sum(quad_cubic_value(dv, gamma, eta)))
    grad = quad_cubic_marginal(dv, gamma, eta)
    return CostEval(value, grad)


def phi_asymmetric(d: DeltaVector, p: RigidityParams) -> CostEval:
    """Asymmetric adjustment cost of a change vector, with its gradient."""
    if not p.is_asymmetric:
        raise ModeMismatchError("phi_asymmetric requires asymmetric rigidity; use phi")
    dv = d.as_array()
    g_up = p.gamma_up_array()
    g_dn = p.gamma_down_array()
    eta = p.eta_array()
    value = float(np.sum(asym_quad_cubic_value(dv, g_up, g_dn, eta)))
    grad = asym_quad_cubic_marginal(dv, g_up, g_dn, eta)
    return CostEval(value, grad)


def adjustment_cost(d: DeltaVector, p: RigidityParams) -> CostEval:
    """Dispatch to the evaluator matching the parameter mode."""
    return phi_asymmetric(d, p) if p.is_asymmetric else phi(d, p)


def stage_cost(x: ExpenditureVector, spec: FiscalCostSpec) -> CostEval:
    """Per-period allocation cost and gradient.

    value = 1/2 sum_k w_k (x_k - target_k)^2
          + 1/2 w_total (total(x) - total_reference)^2
    """
    xv = x.as_array()
    w = spec.weights_array()
    gap = xv - spec.target.as_array()
    total_gap = float(xv.sum()) - spec.total_reference
    value = 0.5 * float(np.sum(w * gap * gap)) + 0.5 * spec.total_weight * total_gap * total_gap
    grad = w * gap + spec.total_weight * total_gap
    return CostEval(value, grad)


def gradient_check(
    f: Callable[[np.ndarray], CostEval],
    point: np.ndarray,
    h: float = 1e-6,
) -> float:
    """Worst relative error of the analytic gradient against central differences.

    The evaluator maps a length-4 array to a CostEval. Each coordinate is
    perturbed by +/- h and the centered difference is compared against the
    analytic entry, scaled by max(1, |analytic|).
    """
    if h <= 0.0:
        raise ValueError(f"step size must be positive, got {h}")
    point = np.asarray(point, dtype=float)
    analytic = f(point).gradient
    worst = 0.0
    for k in range(point.size):
        bump = np.zeros_like(point)
        bump[k] = h
        fd = (f(point + bump).value - f(point - bump).value) / (2.0 * h)
        err = abs(fd - analytic[k]) / max(1.0, abs(analytic[k]))
        worst = max(worst, err)
    return worst
