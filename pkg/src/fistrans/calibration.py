"""Named calibration presets and the rigidity-score mapping.

The shipped "paper-default" preset carries the baseline composition of
public expenditure (shares of total, normalized to 100), the internal
composition of each category, flexibility scores, the curvature parameters
of the adjustment-cost function, illustrative long-run reform targets, and
a catalog of administrative-savings scenarios spanning low/medium/high
rigidity regimes.

Flexibility scores map to curvature parameters by piecewise-linear
interpolation through the four published (score, gamma, eta) anchor pairs,
clamped outside the anchored range. The anchors are not collinear, so a
lookup with interpolation is the least-assumption monotone mapping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .types import (
    BreakEvenSpec,
    Category,
    ExpenditureVector,
    FiscalCostSpec,
    RigidityParams,
    Scenario,
    ValidationError,
)

__all__ = [
    "BreakEvenScenario",
    "ReformScenario",
    "CalibrationPreset",
    "load_default_preset",
    "rigidity_to_params",
    "asymmetric_variant",
    "DEFAULT_PRESET_NAME",
]

DEFAULT_PRESET_NAME = "paper-default"

# (flexibility score, gamma, eta) anchors, ascending in score.
_SCORE_ANCHORS = (0.3, 0.5, 0.8, 0.9)
_GAMMA_ANCHORS = (1.0, 1.5, 3.5, 4.0)
_ETA_ANCHORS = (0.4, 0.6, 1.5, 1.8)

# Non-published convention for asymmetric variants: reductions carry 1.5x
# the quadratic curvature of increases.
ASYMMETRIC_DOWN_FACTOR = 1.5


@dataclass(frozen=True)
class BreakEvenScenario:
    """One row of the administrative-savings scenario catalog."""

    name: str
    regime: str
    reduction_fraction: float
    target_years: int
    gamma: float
    eta: float

    def spec(self, adjustable_base: float = 100.0, window: int = 5) -> BreakEvenSpec:
        return BreakEvenSpec(
            reduction_fraction=self.reduction_fraction,
            target_years=self.target_years,
            adjustable_base=adjustable_base,
            window=window,
            gamma=self.gamma,
            eta=self.eta,
        )


@dataclass(frozen=True)
class ReformScenario:
    """A qualitative reform strategy and the category it targets."""

    name: str
    instrument: str
    category: Category


@dataclass(frozen=True)
class CalibrationPreset:
    """An immutable bundle of calibrated inputs and scenario catalogs.

    ``gdp_shares`` and ``internal_composition`` are annotations only; the
    dynamics run on the four-category share vector.
    """

    name: str
    baseline: ExpenditureVector
    targets: ExpenditureVector
    flexibility: Tuple[float, float, float, float]
    rigidity: RigidityParams
    cost: FiscalCostSpec
    beta: float
    horizon: int
    gdp_shares: Tuple[float, float, float, float]
    internal_composition: Dict[Category, Tuple[Tuple[str, float], ...]]
    breakeven_catalog: Tuple[BreakEvenScenario, ...]
    reform_catalog: Tuple[ReformScenario, ...]

    def __post_init__(self) -> None:
        if abs(self.baseline.total - 100.0) > 1e-9:
            raise ValidationError(f"baseline shares must sum to 100, got {self.baseline.total}")
        if abs(self.targets.total - 100.0) > 1e-9:
            raise ValidationError(f"target shares must sum to 100, got {self.targets.total}")
        for cat, parts in self.internal_composition.items():
            s = sum(share for _, share in parts)
            if abs(s - 100.0) > 1e-9:
                raise ValidationError(f"internal composition of {cat.key} must sum to 100, got {s}")

    def scenario(self, name: Optional[str] = None, breakeven: Optional[BreakEvenSpec] = None) -> Scenario:
        """The preset's reform transition as a runnable scenario."""
        return Scenario(
            name=name if name is not None else self.name,
            baseline=self.baseline,
            cost=self.cost,
            rigidity=self.rigidity,
            beta=self.beta,
            horizon=self.horizon,
            breakeven=breakeven,
        )

    def breakeven_row(self, name: str) -> BreakEvenScenario:
        for row in self.breakeven_catalog:
            if row.name == name:
                return row
        raise ValidationError(f"unknown break-even scenario {name!r}")


def load_default_preset() -> CalibrationPreset:
    """The shipped calibration: baseline shares, rigidity, targets, catalogs.

    The allocation-cost weights are a deliberate convention: equal category
    weights with a total-spending penalty anchored below the baseline total,
    sized so that the solved reform path shows an early effective-expenditure
    hump (the first-year adjustment outlay exceeds the long-run cost gain)
    before settling below its starting level.
    """
    baseline = ExpenditureVector(46.0, 21.0, 12.0, 21.0)
    targets = ExpenditureVector(40.0, 18.0, 18.0, 24.0)
    rigidity = RigidityParams(gamma=(4.0, 3.5, 1.5, 1.0), eta=(1.8, 1.5, 0.6, 0.4))
    cost = FiscalCostSpec(
        target=targets,
        weights=(0.25, 0.25, 0.25, 0.25),
        total_weight=0.25,
        total_reference=97.0,
    )
    internal = {
        Category.TRANSFERS: (
            ("pensions", 72.0),
            ("social assistance programs", 18.0),
            ("other transfers", 10.0),
        ),
        Category.WAGES: (
            ("education sector wages", 38.0),
            ("health sector wages", 26.0),
            ("central administration wages", 36.0),
        ),
        Category.INVESTMENT: (
            ("infrastructure investment", 61.0),
            ("public housing", 17.0),
            ("other capital projects", 22.0),
        ),
    }
    breakeven_catalog = (
        BreakEvenScenario("A", "low", 0.10, 3, 0.8, 0.05),
        BreakEvenScenario("B", "medium", 0.10, 3, 2.0, 0.15),
        BreakEvenScenario("C", "high", 0.10, 3, 4.0, 0.30),
        BreakEvenScenario("D", "low", 0.20, 5, 0.8, 0.05),
        BreakEvenScenario("E", "medium", 0.20, 5, 2.0, 0.15),
        BreakEvenScenario("F", "high", 0.20, 5, 4.0, 0.30),
    )
    reform_catalog = (
        ReformScenario("administrative-restructuring", "efficiency improvements", Category.OPERATING),
        ReformScenario("pension-reform", "institutional reform", Category.TRANSFERS),
        ReformScenario("human-capital-reallocation", "investment expansion", Category.INVESTMENT),
    )
    return CalibrationPreset(
        name=DEFAULT_PRESET_NAME,
        baseline=baseline,
        targets=targets,
        flexibility=(0.9, 0.8, 0.5, 0.3),
        rigidity=rigidity,
        cost=cost,
        beta=0.96,
        horizon=50,
        gdp_shares=(13.2, 6.0, 3.4, 6.1),
        internal_composition=internal,
        breakeven_catalog=breakeven_catalog,
        reform_catalog=reform_catalog,
    )


def rigidity_to_params(flexibility_score: float) -> Tuple[float, float]:
    """Map a flexibility score in [0, 1] to (gamma, eta) curvature parameters.

    Piecewise-linear through the four published anchors, clamped outside
    their score range, hence monotone nondecreasing in the score.
    """
    score = float(flexibility_score)
    if not math.isfinite(score) or not (0.0 <= score <= 1.0):
        raise ValidationError(f"flexibility score out of range [0, 1]: {score}")
    gamma = float(np.interp(score, _SCORE_ANCHORS, _GAMMA_ANCHORS))
    eta = float(np.interp(score, _SCORE_ANCHORS, _ETA_ANCHORS))
    return gamma, eta


def asymmetric_variant(rigidity: RigidityParams, down_factor: float = ASYMMETRIC_DOWN_FACTOR) -> RigidityParams:
    """Asymmetric rigidity derived from a symmetric set.

    Increases keep the symmetric quadratic curvature; reductions are scaled
    up by ``down_factor``. The factor is a convention of this package, not a
    published number, and reports flag it as such.
    """
    if rigidity.is_asymmetric:
        raise ValidationError("rigidity is already asymmetric")
    if down_factor < 1.0:
        raise ValidationError(f"down_factor must be >= 1, got {down_factor}")
    gamma = rigidity.gamma_array()
    return RigidityParams(
        eta=rigidity.eta,
        gamma_up=tuple(gamma),
        gamma_down=tuple(gamma * down_factor),
    )
