"""Tail-probability estimates with exact binomial confidence bounds."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats as _sps

from .errors import ParameterError

__all__ = ["clopper_pearson", "clopper_pearson_upper", "ConcentrationResult", "classify_regime"]

CI_LEVEL = 0.99

REGIME_ASSERTED = "non-vacuous"
REGIME_VACUOUS = "vacuous: informational only"
REGIME_TRIVIAL = "trivially satisfied"


def clopper_pearson(k: int, n: int, level: float = CI_LEVEL) -> tuple[float, float]:
    """Two-sided exact binomial interval for ``k`` successes out of ``n``.

    Each tail carries ``(1 - level) / 2``; the endpoints are the usual beta quantiles,
    pinned to 0 and 1 when ``k = 0`` or ``k = n``.
    """
    if n < 1 or not 0 <= k <= n:
        raise ParameterError(f"need 0 <= k <= n and n >= 1, got k={k!r}, n={n!r}")
    if not 0 < level < 1:
        raise ParameterError(f"level must lie in (0, 1), got {level!r}")
    a = 0.5 * (1.0 - level)
    lo = 0.0 if k == 0 else float(_sps.beta.ppf(a, k, n - k + 1))
    hi = 1.0 if k == n else float(_sps.beta.ppf(1.0 - a, k + 1, n - k))
    return lo, hi


def clopper_pearson_upper(k: int, n: int, level: float = CI_LEVEL) -> float:
    return clopper_pearson(k, n, level)[1]


def classify_regime(delta: float, threshold: float, max_statistic: float) -> str:
    """Label a tail comparison.

    A bound with ``delta >= 1`` says nothing, and a threshold at or above the
    largest attainable statistic is met by every sample; neither is asserted.
    """
    if delta >= 1.0:
        return REGIME_VACUOUS
    if threshold >= max_statistic:
        return REGIME_TRIVIAL
    return REGIME_ASSERTED


@dataclass(frozen=True)
class ConcentrationResult:
    """Outcome of one Monte Carlo tail experiment.

    ``bound_satisfied`` compares ``ci99_upper`` with ``theoretical_delta``; it is
    reported for every regime but only meaningful when ``regime`` is
    ``"non-vacuous"``.
    """

    config: dict
    statistic: str
    samples: int
    n_exceed: int
    empirical_tail: float
    ci99_upper: float
    theoretical_delta: float
    threshold_used: float
    mean_statistic: float
    max_statistic: float
    regime: str
    bound_satisfied: bool
    seed: int
    version: str
    runtime_seconds: float
    cross_checks: int = 0
    cross_check_max_error: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def asserted(self) -> bool:
        return self.regime == REGIME_ASSERTED

    def to_dict(self) -> dict:
        return asdict(self)


def tail_summary(values: np.ndarray, threshold: float) -> tuple[int, float, float]:
    """``(n_exceed, empirical_tail, ci99_upper)`` for the event ``value >= threshold``."""
    values = np.asarray(values, dtype=float)
    n = values.size
    k = int(np.count_nonzero(values >= threshold))
    return k, k / n, clopper_pearson_upper(k, n)
