"""Seeded Monte Carlo concentration experiments and dimension sweeps.

Each experiment draws ``samples`` states, evaluates one statistic per state and
compares the fraction at or above a threshold with the theoretical failure
probability ``delta``, using an exact binomial 99% upper confidence bound.

Sample ``i`` of an experiment uses the random stream ``(seed, stream..., i)``, so
results do not depend on worker count or scheduling.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Union

import numpy as np

from ._version import __version__
from .bounds import CONVENTIONS, VARIANTS, bounds_report, format_bounds_table, lemma1_params, main_result_params
from .errors import ConfigError, LazyRatesError, NumericalConsistencyError
from .linop import BipartiteSpace, partial_trace, projector, trace_distance_to_mixed
from .rates import (
    worst_case_entropy_rate,
    worst_case_entropy_rate_pure,
    worst_case_purity_rate,
    worst_case_purity_rate_pure,
)
from .sampler import SeededRng, Spectrum, haar_isometry, haar_pure_state
from .stats import ConcentrationResult, classify_regime, tail_summary

__all__ = [
    "ThresholdSpec",
    "ExperimentConfig",
    "ConcentrationResult",
    "SweepFailure",
    "run_concentration",
    "sweep",
    "flat_row",
    "bounds_report",
    "format_bounds_table",
    "STATISTICS",
]

STATISTICS = ("trace_distance", "worst_case_entropy_rate", "worst_case_purity_rate")
DENSE_LIMIT = 4096
FAST_LIMIT = 2**20
CROSS_CHECK_RATE = 0.01
CROSS_CHECK_LIMIT = 512
CROSS_CHECK_TOL = 1e-8


@dataclass(frozen=True)
class ThresholdSpec:
    """Where the tail threshold and its ``delta`` come from.

    ``kind`` is ``"lemma1"`` (threshold ``chi``), ``"main_result"`` (threshold
    ``epsilon`` per unit interaction strength) or ``"explicit"``. An explicit
    threshold carries its own ``delta``, 1 (no claim) by default.
    """

    kind: str
    variant: str = "set1"
    convention: str = "paper_literal"
    value: float | None = None
    delta: float = 1.0

    @classmethod
    def lemma1(cls, variant="set1", convention="paper_literal"):
        return cls("lemma1", variant, convention)

    @classmethod
    def main_result(cls, variant="set1", convention="paper_literal"):
        return cls("main_result", variant, convention)

    @classmethod
    def explicit(cls, value: float, delta: float = 1.0):
        return cls("explicit", value=float(value), delta=float(delta))

    def validate(self):
        if self.kind == "explicit":
            if self.value is None or not math.isfinite(self.value):
                raise ConfigError(f"explicit threshold must be finite, got {self.value!r}")
            if not 0 <= self.delta:
                raise ConfigError(f"delta must be nonnegative, got {self.delta!r}")
            return
        if self.kind not in ("lemma1", "main_result"):
            raise ConfigError(f"unknown threshold kind {self.kind!r}")
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.convention not in CONVENTIONS:
            raise ConfigError(f"convention must be one of {CONVENTIONS}, got {self.convention!r}")

    def resolve(self, d_S: int, d_E: int) -> tuple[float, float]:
        """``(threshold, delta)`` for the given dimensions."""
        if self.kind == "explicit":
            return float(self.value), float(self.delta)
        if self.kind == "lemma1":
            p = lemma1_params(d_S, d_E, self.variant, self.convention)
            return p.chi, p.delta
        p = main_result_params(d_S, d_E, self.variant, self.convention)
        return p.epsilon, p.delta

    def to_dict(self) -> dict:
        if self.kind == "explicit":
            return {"kind": self.kind, "value": self.value, "delta": self.delta}
        return {"kind": self.kind, "variant": self.variant, "convention": self.convention}


Ensemble = Union[str, Spectrum]


@dataclass(frozen=True)
class ExperimentConfig:
    """A concentration experiment.

    ``ensemble`` is ``"haar_pure"`` or a :class:`Spectrum` (shorter spectra are
    padded with zeros). ``workers > 1`` evaluates samples on a thread pool; the
    output is identical for any worker count.
    """

    d_S: int
    d_E: int
    samples: int
    seed: int
    statistic: str = "trace_distance"
    threshold: ThresholdSpec = field(default_factory=ThresholdSpec.lemma1)
    ensemble: Ensemble = "haar_pure"
    stream: Union[int, tuple] = 0
    workers: int = 1

    @property
    def space(self) -> BipartiteSpace:
        return BipartiteSpace(self.d_S, self.d_E)

    @property
    def spectrum(self) -> np.ndarray | None:
        """Padded eigenvalues for a fixed-spectrum ensemble, ``None`` for Haar pure."""
        if isinstance(self.ensemble, Spectrum):
            p = np.zeros(self.d_S * self.d_E)
            p[: len(self.ensemble)] = self.ensemble.array
            return p
        return None

    @property
    def pure(self) -> bool:
        return self.ensemble == "haar_pure" or (
            isinstance(self.ensemble, Spectrum) and self.ensemble.rank == 1
        )

    @property
    def path(self) -> str:
        return "fast" if self.pure or self.statistic == "trace_distance" else "dense"

    def validate(self) -> None:
        """Raise :class:`ConfigError` if the experiment cannot run as configured."""
        for name in ("d_S", "d_E", "samples", "workers"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise ConfigError(f"{name} must be an integer, got {v!r}")
        if self.d_S < 2 or self.d_E < 2:
            raise ConfigError(f"dimensions must be at least 2, got ({self.d_S}, {self.d_E})")
        if self.samples < 1:
            raise ConfigError(f"samples must be positive, got {self.samples}")
        if self.workers < 1:
            raise ConfigError(f"workers must be positive, got {self.workers}")
        if self.statistic not in STATISTICS:
            raise ConfigError(f"statistic must be one of {STATISTICS}, got {self.statistic!r}")
        if not (self.ensemble == "haar_pure" or isinstance(self.ensemble, Spectrum)):
            raise ConfigError(f"ensemble must be 'haar_pure' or a Spectrum, got {self.ensemble!r}")
        self.threshold.validate()
        n = self.d_S * self.d_E
        if isinstance(self.ensemble, Spectrum) and len(self.ensemble) > n:
            raise ConfigError(f"spectrum has {len(self.ensemble)} entries, joint dimension is {n}")
        if self.path == "fast":
            rank = 1 if self.pure else self.ensemble.rank
            if n * rank > FAST_LIMIT:
                raise ConfigError(
                    f"joint dimension {n} times rank {rank} exceeds the fast-path limit {FAST_LIMIT}"
                )
        elif n > DENSE_LIMIT:
            raise ConfigError(
                f"joint dimension {n} exceeds the dense limit {DENSE_LIMIT} for statistic "
                f"{self.statistic!r} on a mixed ensemble"
            )

    def to_dict(self) -> dict:
        ens = "haar_pure" if self.ensemble == "haar_pure" else {"spectrum": list(self.ensemble.probabilities)}
        stream = list(self.stream) if isinstance(self.stream, tuple) else self.stream
        return {
            "d_S": self.d_S,
            "d_E": self.d_E,
            "samples": self.samples,
            "seed": self.seed,
            "stream": stream,
            "ensemble": ens,
            "statistic": self.statistic,
            "threshold": self.threshold.to_dict(),
            "path": self.path,
        }


def _max_statistic(statistic: str, d_S: int) -> float:
    """Largest value the statistic can take (per unit interaction strength)."""
    if statistic == "trace_distance":
        return 2.0 * (1.0 - 1.0 / d_S)
    if statistic == "worst_case_entropy_rate":
        return 4.0 * math.log2(d_S)
    # ||[rho_S (x) I, rho]||_1 <= 2 ||rho_S||_inf
    return 2.0


def _pure_statistic(statistic: str, psi: np.ndarray, space: BipartiteSpace) -> float:
    if statistic == "trace_distance":
        M = psi.reshape(space.d_S, space.d_E)
        return trace_distance_to_mixed(M @ M.conj().T)
    if statistic == "worst_case_entropy_rate":
        return worst_case_entropy_rate_pure(psi, space)
    return worst_case_purity_rate_pure(psi, space)


def _dense_statistic(statistic: str, rho: np.ndarray, space: BipartiteSpace) -> float:
    if statistic == "trace_distance":
        return trace_distance_to_mixed(partial_trace(rho, space, "E"))
    if statistic == "worst_case_entropy_rate":
        return worst_case_entropy_rate(rho, space)
    return worst_case_purity_rate(rho, space)


def _sample(cfg: ExperimentConfig, root: SeededRng, i: int) -> tuple[float, float | None]:
    """Statistic of sample ``i`` and, when cross-checked, the fast/dense discrepancy."""
    space = cfg.space
    n = space.dim
    rng = root.child(i)
    if cfg.ensemble == "haar_pure":
        psi = haar_pure_state(n, rng)
    elif cfg.pure:
        psi = haar_isometry(n, 1, rng)[:, 0]
    else:
        p = cfg.spectrum
        k = cfg.ensemble.rank
        W = haar_isometry(n, k, rng) * np.sqrt(p[:k])
        if cfg.statistic == "trace_distance":
            W3 = W.reshape(space.d_S, space.d_E, k)
            rho_S = np.einsum("iek,jek->ij", W3, W3.conj())
            return trace_distance_to_mixed(0.5 * (rho_S + rho_S.conj().T)), None
        rho = W @ W.conj().T
        return _dense_statistic(cfg.statistic, 0.5 * (rho + rho.conj().T), space), None
    value = _pure_statistic(cfg.statistic, psi, space)
    if n <= CROSS_CHECK_LIMIT and rng.generator.random() < CROSS_CHECK_RATE:
        return value, abs(_dense_statistic(cfg.statistic, projector(psi), space) - value)
    return value, None


def run_concentration(cfg: ExperimentConfig) -> ConcentrationResult:
    """Run one experiment; raises :class:`ConfigError` before sampling if ``cfg`` is invalid."""
    cfg.validate()
    t0 = time.perf_counter()
    threshold, delta = cfg.threshold.resolve(cfg.d_S, cfg.d_E)
    root = SeededRng(cfg.seed, cfg.stream)

    def one(i):
        return _sample(cfg, root, i)

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            out = list(pool.map(one, range(cfg.samples)))
    else:
        out = [one(i) for i in range(cfg.samples)]

    values = np.array([v for v, _ in out])
    checks = [e for _, e in out if e is not None]
    worst = max(checks, default=0.0)
    if worst > CROSS_CHECK_TOL:
        raise NumericalConsistencyError(
            f"fast-path statistic disagrees with the dense computation by {worst:.3e}"
        )
    k, tail, upper = tail_summary(values, threshold)
    max_stat = _max_statistic(cfg.statistic, cfg.d_S)
    return ConcentrationResult(
        config=cfg.to_dict(),
        statistic=cfg.statistic,
        samples=cfg.samples,
        n_exceed=k,
        empirical_tail=tail,
        ci99_upper=upper,
        theoretical_delta=float(delta),
        threshold_used=float(threshold),
        mean_statistic=float(values.mean()),
        max_statistic=float(values.max()),
        regime=classify_regime(delta, threshold, max_stat),
        bound_satisfied=bool(upper <= delta),
        seed=root.seed,
        version=__version__,
        runtime_seconds=time.perf_counter() - t0,
        cross_checks=len(checks),
        cross_check_max_error=float(worst),
    )


@dataclass(frozen=True)
class SweepFailure:
    """A sweep entry whose configuration failed; the sweep carries on past it."""

    d_E: int
    error_type: str
    message: str

    def to_dict(self) -> dict:
        return {"d_E": self.d_E, "error": self.error_type, "message": self.message}


def sweep(base: ExperimentConfig, d_E_values) -> list:
    """One experiment per ``d_E``; entry ``j`` uses stream ``(base.stream, j)``.

    Failures of individual configurations are returned as :class:`SweepFailure`.
    """
    base_stream = base.stream if isinstance(base.stream, tuple) else (base.stream,)
    results = []
    for j, d_E in enumerate(d_E_values):
        cfg = replace(base, d_E=d_E, stream=base_stream + (j,))
        try:
            results.append(run_concentration(cfg))
        except LazyRatesError as exc:
            results.append(SweepFailure(d_E, type(exc).__name__, str(exc)))
    return results


CSV_FIELDS = (
    "d_S", "d_E", "samples", "seed", "statistic", "threshold_used", "theoretical_delta",
    "n_exceed", "empirical_tail", "ci99_upper", "mean_statistic", "max_statistic",
    "regime", "bound_satisfied", "version", "error",
)


def flat_row(result) -> dict:
    """One CSV row for a result or a sweep failure."""
    if isinstance(result, SweepFailure):
        row = dict.fromkeys(CSV_FIELDS, "")
        row.update(d_E=result.d_E, error=f"{result.error_type}: {result.message}", version=__version__)
        return row
    c = result.config
    return {
        "d_S": c.get("d_S", c.get("d_A", "")),
        "d_E": c.get("d_E", c.get("d_B", "")),
        "samples": result.samples,
        "seed": result.seed,
        "statistic": result.statistic,
        "threshold_used": result.threshold_used,
        "theoretical_delta": result.theoretical_delta,
        "n_exceed": result.n_exceed,
        "empirical_tail": result.empirical_tail,
        "ci99_upper": result.ci99_upper,
        "mean_statistic": result.mean_statistic,
        "max_statistic": result.max_statistic,
        "regime": result.regime,
        "bound_satisfied": result.bound_satisfied,
        "version": result.version,
        "error": "",
    }
