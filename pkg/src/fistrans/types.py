"""Domain types for the fiscal expenditure transition model.

Expenditure allocations are four-category vectors (transfers, wages,
investment, operating) in budget-share index units. A simulation run fixes
the normalization; the shipped calibration uses total = 100 at t = 0.
All quantities are 64-bit floats and all types are immutable value objects,
safe to share across threads and processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

__all__ = [
    "ValidationError",
    "ModeMismatchError",
    "Category",
    "CATEGORIES",
    "N_CATEGORIES",
    "ExpenditureVector",
    "DeltaVector",
    "RigidityParams",
    "FiscalCostSpec",
    "Trajectory",
    "BreakEvenSpec",
    "Scenario",
    "total",
    "delta",
]


class ValidationError(ValueError):
    """An input violates a documented invariant."""


class ModeMismatchError(ValidationError):
    """Symmetric parameters fed to the asymmetric evaluator, or vice versa."""


class Category(Enum):
    """The four expenditure categories in their fixed serialization order."""

    TRANSFERS = "T"
    WAGES = "W"
    INVESTMENT = "I"
    OPERATING = "F"

    @property
    def key(self) -> str:
        """Lowercase field name used in scenario files and dataclasses."""
        return self.name.lower()


CATEGORIES: Tuple[Category, ...] = tuple(Category)
N_CATEGORIES = len(CATEGORIES)

# Values this close below zero are treated as numerical zeros when a solver
# result is packed into value objects that require nonnegativity.
_NEG_TOL = 1e-9


def _float4(values: Sequence[float], what: str, nonneg: bool = False) -> Tuple[float, float, float, float]:
    vals = tuple(float(v) for v in values)
    if len(vals) != N_CATEGORIES:
        raise ValidationError(f"{what} must have exactly {N_CATEGORIES} entries, got {len(vals)}")
    for cat, v in zip(CATEGORIES, vals):
        if not np.isfinite(v):
            raise ValidationError(f"{what}[{cat.key}] must be finite, got {v}")
        if nonneg and v < 0.0:
            raise ValidationError(f"{what}[{cat.key}] must be nonnegative, got {v}")
    return vals  # type: ignore[return-value]


@dataclass(frozen=True)
class ExpenditureVector:
    """A four-category expenditure allocation, componentwise nonnegative."""

    transfers: float
    wages: float
    investment: float
    operating: float

    def __post_init__(self) -> None:
        vals = _float4(self.as_tuple(), "expenditure", nonneg=True)
        for cat, v in zip(CATEGORIES, vals):
            object.__setattr__(self, cat.key, v)

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "ExpenditureVector":
        vals = tuple(float(v) for v in np.asarray(values, dtype=float).ravel())
        if len(vals) != N_CATEGORIES:
            raise ValidationError(f"expenditure vector needs {N_CATEGORIES} entries, got {len(vals)}")
        return cls(*vals)

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.transfers, self.wages, self.investment, self.operating)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple(), dtype=float)

    def get(self, category: Category) -> float:
        return getattr(self, category.key)

    @property
    def total(self) -> float:
        return self.transfers + self.wages + self.investment + self.operating


@dataclass(frozen=True)
class DeltaVector:
    """A signed one-period change in each expenditure category."""

    transfers: float
    wages: float
    investment: float
    operating: float

    def __post_init__(self) -> None:
        vals = _float4(self.as_tuple(), "delta")
        for cat, v in zip(CATEGORIES, vals):
            object.__setattr__(self, cat.key, v)

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "DeltaVector":
        vals = tuple(float(v) for v in np.asarray(values, dtype=float).ravel())
        if len(vals) != N_CATEGORIES:
            raise ValidationError(f"delta vector needs {N_CATEGORIES} entries, got {len(vals)}")
        return cls(*vals)

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.transfers, self.wages, self.investment, self.operating)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple(), dtype=float)

    def get(self, category: Category) -> float:
        return getattr(self, category.key)


def total(x: ExpenditureVector) -> float:
    """Total expenditure: the sum of the four category components."""
    return x.total


def delta(x_curr: ExpenditureVector, x_prev: ExpenditureVector) -> DeltaVector:
    """Componentwise one-period change x_curr - x_prev."""
    return DeltaVector(
        x_curr.transfers - x_prev.transfers,
        x_curr.wages - x_prev.wages,
        x_curr.investment - x_prev.investment,
        x_curr.operating - x_prev.operating,
    )


@dataclass(frozen=True)
class RigidityParams:
    """Curvature parameters of the per-category adjustment-cost function.

    Symmetric mode supplies ``gamma`` (quadratic curvature) and ``eta``
    (cubic curvature) per category. Asymmetric mode replaces ``gamma`` by
    the pair (``gamma_up``, ``gamma_down``) so that reductions can be
    costlier than increases; the mode is all-or-nothing across categories.
    """

    gamma: Optional[Tuple[float, float, float, float]] = None
    eta: Tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    gamma_up: Optional[Tuple[float, float, float, float]] = None
    gamma_down: Optional[Tuple[float, float, float, float]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "eta", _float4(self.eta, "eta", nonneg=True))
        has_sym = self.gamma is not None
        has_up = self.gamma_up is not None
        has_dn = self.gamma_down is not None
        if has_up != has_dn:
            raise ValidationError("asymmetric rigidity requires both gamma_up and gamma_down")
        if has_sym == has_up:
            raise ValidationError("rigidity must be either symmetric (gamma) or asymmetric (gamma_up/gamma_down)")
        if has_sym:
            object.__setattr__(self, "gamma", _float4(self.gamma, "gamma", nonneg=True))
        else:
            object.__setattr__(self, "gamma_up", _float4(self.gamma_up, "gamma_up", nonneg=True))
            object.__setattr__(self, "gamma_down", _float4(self.gamma_down, "gamma_down", nonneg=True))

    @property
    def is_asymmetric(self) -> bool:
        return self.gamma is None

    def gamma_array(self) -> np.ndarray:
        if self.is_asymmetric:
            raise ModeMismatchError("asymmetric rigidity has no single gamma; use gamma_up/gamma_down")
        return np.array(self.gamma, dtype=float)

    def eta_array(self) -> np.ndarray:
        return np.array(self.eta, dtype=float)

    def gamma_up_array(self) -> np.ndarray:
        if not self.is_asymmetric:
            raise ModeMismatchError("symmetric rigidity has no gamma_up; use gamma")
        return np.array(self.gamma_up, dtype=float)

    def gamma_down_array(self) -> np.ndarray:
        if not self.is_asymmetric:
            raise ModeMismatchError("symmetric rigidity has no gamma_down; use gamma")
        return np.array(self.gamma_down, dtype=float)


@dataclass(frozen=True)
class FiscalCostSpec:
    """Parameters of the per-period allocation cost.

    The cost penalizes squared deviations from the target allocation,
    weighted per category, plus an optional squared penalty on total
    spending relative to ``total_reference`` (defaults to the target's
    own total).
    """

    target: ExpenditureVector
    weights: Tuple[float, float, float, float] = (1.0, 1.0, 1.0, 1.0)
    total_weight: float = 0.0
    total_reference: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", _float4(self.weights, "weights", nonneg=True))
        tw = float(self.total_weight)
        if not np.isfinite(tw) or tw < 0.0:
            raise ValidationError(f"total_weight must be finite and nonnegative, got {tw}")
        object.__setattr__(self, "total_weight", tw)
        if max(self.weights) == 0.0 and tw == 0.0:
            raise ValidationError("cost spec needs at least one strictly positive weight")
        ref = self.target.total if self.total_reference is None else float(self.total_reference)
        if not np.isfinite(ref):
            raise ValidationError(f"total_reference must be finite, got {ref}")
        object.__setattr__(self, "total_reference", ref)

    def weights_array(self) -> np.ndarray:
        return np.array(self.weights, dtype=float)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """A time-indexed sequence of allocations x_0 ... x_T.

    The year-0 change is zero by convention (no pre-sample history), so all
    derived series start from an adjustment-free initial year. Components
    within 1e-9 below zero are treated as numerical zeros.
    """

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != N_CATEGORIES:
            raise ValidationError(f"trajectory must have shape (years+1, {N_CATEGORIES}), got {arr.shape}")
        if arr.shape[0] < 2:
            raise ValidationError("trajectory needs at least two rows (one year)")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("trajectory contains non-finite values")
        if np.min(arr) < -_NEG_TOL:
            raise ValidationError(f"trajectory has negative components below -{_NEG_TOL}")
        arr = np.maximum(arr, 0.0)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def horizon(self) -> int:
        """Number of years T (the sequence has T + 1 rows)."""
        return self.values.shape[0] - 1

    def at(self, t: int) -> ExpenditureVector:
        return ExpenditureVector.from_array(self.values[t])

    def deltas(self) -> np.ndarray:
        """Per-year changes with the year-0 row fixed at zero."""
        out = np.zeros_like(self.values)
        out[1:] = np.diff(self.values, axis=0)
        return out

    def totals(self) -> np.ndarray:
        return self.values.sum(axis=1)


@dataclass(frozen=True)
class BreakEvenSpec:
    """Inputs of the administrative-savings timing computation.

    ``adjustable_base`` is the year-0 level of the discretionary operating
    slice that the reform can reduce; ``core_floor`` is the non-reducible
    remainder, carried as metadata. The reform cuts the adjustable slice by
    ``reduction_fraction`` over ``target_years`` years; savings are reported
    over ``window`` years. The rigidity block is either symmetric
    (``gamma``, ``eta``) or asymmetric (``gamma_up``, ``gamma_down``, ``eta``).
    """

    reduction_fraction: float
    target_years: int
    adjustable_base: float = 100.0
    core_floor: float = 0.0
    window: int = 5
    gamma: Optional[float] = None
    eta: float = 0.0
    gamma_up: Optional[float] = None
    gamma_down: Optional[float] = None

    def __post_init__(self) -> None:
        rho = float(self.reduction_fraction)
        if not (0.0 < rho < 1.0):
            raise ValidationError(f"reduction fraction out of range (0, 1): {rho}")
        object.__setattr__(self, "reduction_fraction", rho)
        h = int(self.target_years)
        if h < 1:
            raise ValidationError(f"target_years must be >= 1, got {h}")
        object.__setattr__(self, "target_years", h)
        base = float(self.adjustable_base)
        if not np.isfinite(base) or base <= 0.0:
            raise ValidationError(f"adjustable_base must be positive, got {base}")
        object.__setattr__(self, "adjustable_base", base)
        floor = float(self.core_floor)
        if not np.isfinite(floor) or floor < 0.0:
            raise ValidationError(f"core_floor must be nonnegative, got {floor}")
        object.__setattr__(self, "core_floor", floor)
        win = int(self.window)
        if win < 1:
            raise ValidationError(f"window must be >= 1, got {win}")
        object.__setattr__(self, "window", win)

        eta = float(self.eta)
        if not np.isfinite(eta) or eta < 0.0:
            raise ValidationError(f"eta must be nonnegative, got {eta}")
        object.__setattr__(self, "eta", eta)
        has_sym = self.gamma is not None
        has_up = self.gamma_up is not None
        has_dn = self.gamma_down is not None
        if has_up != has_dn:
            raise ValidationError("asymmetric rigidity requires both gamma_up and gamma_down")
        if has_sym == has_up:
            raise ValidationError("rigidity must be either symmetric (gamma) or asymmetric (gamma_up/gamma_down)")
        for name in ("gamma", "gamma_up", "gamma_down"):
            v = getattr(self, name)
            if v is not None:
                v = float(v)
                if not np.isfinite(v) or v < 0.0:
                    raise ValidationError(f"{name} must be nonnegative, got {v}")
                object.__setattr__(self, name, v)

    @property
    def is_asymmetric(self) -> bool:
        return self.gamma is None


@dataclass(frozen=True)
class Scenario:
    """A named simulation bundle: baseline, costs, rigidity, and run controls.

    ``delta_bounds``, when present, gives per-category (min, max) limits on
    the one-period change; the limits must admit zero change so that holding
    the baseline is always feasible.
    """

    name: str
    baseline: ExpenditureVector
    cost: FiscalCostSpec
    rigidity: RigidityParams
    beta: float
    horizon: int
    delta_bounds: Optional[Tuple[Tuple[float, float], ...]] = None
    breakeven: Optional[BreakEvenSpec] = None

    def __post_init__(self) -> None:
        beta = float(self.beta)
        if not (0.0 < beta < 1.0):
            raise ValidationError(f"discount factor out of range (0, 1): {beta}")
        object.__setattr__(self, "beta", beta)
        horizon = int(self.horizon)
        if horizon < 1:
            raise ValidationError(f"horizon must be >= 1, got {horizon}")
        object.__setattr__(self, "horizon", horizon)
        if self.delta_bounds is not None:
            if len(self.delta_bounds) != N_CATEGORIES:
                raise ValidationError(f"delta_bounds needs {N_CATEGORIES} (min, max) pairs")
            norm = []
            for cat, (lo, hi) in zip(CATEGORIES, self.delta_bounds):
                lo, hi = float(lo), float(hi)
                if np.isnan(lo) or np.isnan(hi):
                    raise ValidationError(f"delta_bounds[{cat.key}] contains NaN")
                if lo > 0.0 or hi < 0.0:
                    raise ValidationError(f"delta_bounds[{cat.key}] must admit zero change, got ({lo}, {hi})")
                norm.append((lo, hi))
            if all(lo == -np.inf and hi == np.inf for lo, hi in norm):
                object.__setattr__(self, "delta_bounds", None)
            else:
                object.__setattr__(self, "delta_bounds", tuple(norm))

    def bounds_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """Lower/upper per-category change bounds (infinite when unbounded)."""
        if self.delta_bounds is None:
            lo = np.full(N_CATEGORIES, -np.inf)
            hi = np.full(N_CATEGORIES, np.inf)
        else:
            lo = np.array([b[0] for b in self.delta_bounds], dtype=float)
            hi = np.array([b[1] for b in self.delta_bounds], dtype=float)
        return lo, hi
