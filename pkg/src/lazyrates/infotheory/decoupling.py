"""Monte Carlo check of the decoupling tail bound.

For a channel ``T`` with Choi state ``tau_{A'B}`` and a Haar unitary ``U`` on ``A``,

    Pr[ ||T(U sigma U^dag) - tau_B||_1 >= 2^{-H_min(A'|B)_tau / 2} + r ] <= 2 exp(-d_A r^2 / 16)

The experiment samples ``U``, evaluates the trace distance and compares the
empirical tail (with an exact 99% upper confidence bound) against the right-hand side.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .._version import __version__
from ..errors import ConfigError, NumericalConsistencyError, StructuralError
from ..linop import (
    BipartiteSpace,
    check_density,
    check_ket,
    ket_marginal,
    partial_trace,
    projector,
    trace_norm,
)
from ..sampler import SeededRng, haar_pure_state, haar_unitary
from ..stats import ConcentrationResult, classify_regime, tail_summary
from .channels import KrausChannel, PartialTraceChannel, apply_channel, choi_factor
from .minentropy import cond_hmin_factor

__all__ = ["DecouplingConfig", "decoupling_experiment", "decoupling_threshold", "choi_cond_hmin"]

DENSE_INPUT_LIMIT = 64
FAST_INPUT_LIMIT = 2**15
CROSS_CHECK_RATE = 0.01
CROSS_CHECK_LIMIT = 512
CROSS_CHECK_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class DecouplingConfig:
    """One decoupling experiment.

    ``sigma`` may be a density matrix or a ket on the channel input. ``choi_hmin``
    skips the SDP when the conditional min-entropy of the Choi state is already known.
    """

    channel: KrausChannel
    sigma: np.ndarray
    samples: int
    r: float
    seed: int
    stream: int = 0
    choi_hmin: float | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        _check_channel(self.channel)
        if isinstance(self.samples, bool) or int(self.samples) != self.samples or self.samples < 1:
            raise ConfigError(f"samples must be a positive integer, got {self.samples!r}")
        if not (isinstance(self.r, (int, float)) and math.isfinite(self.r) and self.r > 0):
            raise ConfigError(f"r must be a positive finite number, got {self.r!r}")
        s = np.asarray(self.sigma)
        if s.shape[0] != self.channel.d_in:
            raise ConfigError(f"sigma has dimension {s.shape[0]}, channel input is {self.channel.d_in}")


def choi_cond_hmin(ch: KrausChannel, rel_gap: float = 1e-9) -> float:
    """``H_min(A'|B)`` of the Choi state, from its low-rank factor."""
    V = choi_factor(ch)
    return cond_hmin_factor(V, BipartiteSpace(ch.d_in, ch.d_out), rel_gap=rel_gap)


def decoupling_threshold(h_min: float, r: float) -> float:
    return 2.0 ** (-0.5 * h_min) + r


def _pure_ket(sigma: np.ndarray) -> np.ndarray | None:
    """The ket of ``sigma`` if it is (numerically) pure, else ``None``."""
    if sigma.ndim == 1:
        return check_ket(sigma)
    w, U = np.linalg.eigh(check_density(sigma))
    if w[-1] < 1 - 1e-12:
        return None
    return U[:, -1]


def decoupling_experiment(cfg: DecouplingConfig) -> ConcentrationResult:
    """Run the experiment of ``cfg``.

    Dense path: ``d_A <= 64``, any channel and input. Fast path: partial-trace
    channel with pure input, where ``U sigma U^dag`` is itself a Haar-random pure
    state and only its marginal is formed.
    """
    t0 = time.perf_counter()
    ch = cfg.channel
    sigma = np.asarray(cfg.sigma, dtype=np.complex128)
    ket = _pure_ket(sigma)
    fast = isinstance(ch, PartialTraceChannel) and ket is not None
    d_A = ch.d_in
    if not fast and d_A > DENSE_INPUT_LIMIT:
        raise ConfigError(
            f"input dimension {d_A} exceeds the dense limit {DENSE_INPUT_LIMIT}; "
            "only the partial-trace channel with a pure input has a fast path"
        )
    if fast and d_A > FAST_INPUT_LIMIT:
        raise ConfigError(f"input dimension {d_A} exceeds the fast-path limit {FAST_INPUT_LIMIT}")
    if sigma.ndim == 2:
        sigma = check_density(sigma)

    h = cfg.choi_hmin if cfg.choi_hmin is not None else choi_cond_hmin(ch)
    threshold = float(decoupling_threshold(h, cfg.r))
    delta = 2.0 * math.exp(-d_A * cfg.r**2 / 16.0)
    tau_B = apply_channel(ch, np.eye(d_A, dtype=np.complex128) / d_A)

    root = SeededRng(cfg.seed, cfg.stream)
    values = np.empty(cfg.samples)
    n_checks, worst = 0, 0.0
    for i in range(cfg.samples):
        rng = root.child(i)
        if fast:
            phi = haar_pure_state(d_A, rng)
            out = ket_marginal(phi, ch.space, ch.traced)
            values[i] = trace_norm(out - tau_B)
            if d_A <= CROSS_CHECK_LIMIT and rng.generator.random() < CROSS_CHECK_RATE:
                dense = trace_norm(partial_trace(projector(phi), ch.space, ch.traced) - tau_B)
                err = abs(dense - values[i])
                n_checks += 1
                worst = max(worst, err)
                if err > CROSS_CHECK_TOL:
                    raise NumericalConsistencyError(
                        f"fast and dense decoupling statistics differ by {err:.3e} at sample {i}"
                    )
        else:
            U = haar_unitary(d_A, rng)
            rho = U @ sigma @ U.conj().T if sigma.ndim == 2 else projector(U @ sigma)
            values[i] = trace_norm(apply_channel(ch, rho) - tau_B)

    k, tail, upper = tail_summary(values, threshold)
    regime = classify_regime(delta, threshold, 2.0)
    config = {
        "experiment": "decoupling",
        "channel": repr(ch),
        "d_A": d_A,
        "d_B": ch.d_out,
        "input_pure": ket is not None,
        "path": "fast" if fast else "dense",
        "samples": int(cfg.samples),
        "r": float(cfg.r),
        "seed": int(root.seed),
        "stream": int(cfg.stream),
        **cfg.extra,
    }
    return ConcentrationResult(
        config=config,
        statistic="decoupling_trace_distance",
        samples=int(cfg.samples),
        n_exceed=k,
        empirical_tail=tail,
        ci99_upper=upper,
        theoretical_delta=delta,
        threshold_used=threshold,
        mean_statistic=float(values.mean()),
        max_statistic=float(values.max()),
        regime=regime,
        bound_satisfied=bool(upper <= delta),
        seed=int(root.seed),
        version=__version__,
        runtime_seconds=time.perf_counter() - t0,
        cross_checks=n_checks,
        cross_check_max_error=float(worst),
        extra={"choi_cond_hmin": float(h)},
    )


def _check_channel(ch) -> None:
    if not isinstance(ch, KrausChannel):
        raise StructuralError(f"expected a KrausChannel, got {type(ch).__name__}")
