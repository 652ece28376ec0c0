"""Exact entropy and purity rates of a subsystem under joint unitary dynamics.

For a joint state ``rho`` and interaction ``H_int`` the instantaneous rates at t=0 are

    dH(S)/dt        = -i tr(H_int [log rho_S (x) I, rho])
    d tr(rho_S^2)/dt = 2i tr(H_int [rho_S (x) I, rho])

Local terms of the Hamiltonian drop out of both. The worst case over all
Hermitian ``H_int`` with ``||H_int||_inf <= 1`` is the trace norm of the
commutator (Hoelder's inequality is tight), which is what the ``worst_case_*``
functions return. For the purity the returned score is the commutator norm
itself, i.e. the supremum of ``|d tr(rho_S^2)/dt| / 2``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Literal

import numpy as np

from .errors import NumericalConsistencyError, ParameterError
from .hamiltonian import canonical_decompose, delta_strength, interaction_strength
from .linop import (
    DEFAULT_LOG_FLOOR,
    BipartiteSpace,
    check_density,
    check_hermitian,
    check_ket,
    evolve,
    ket_marginal,
    matrix_log_density,
    partial_trace,
    purity,
    von_neumann_entropy,
)

__all__ = [
    "RateReport",
    "log_commutator",
    "purity_commutator",
    "entropy_rate",
    "purity_rate",
    "is_lazy",
    "lazy_residual",
    "worst_case_entropy_rate",
    "worst_case_purity_rate",
    "worst_case_entropy_rate_pure",
    "worst_case_purity_rate_pure",
    "finite_difference_rate",
    "rate_report",
]

IMAG_TOL = 1e-8


def _lift(A: np.ndarray, d_E: int) -> np.ndarray:
    return np.kron(A, np.eye(d_E))


def log_commutator(rho, space: BipartiteSpace, floor: float = DEFAULT_LOG_FLOOR,
                   base: float = 2) -> np.ndarray:
    """``[log(rho_S) (x) I_E, rho]``."""
    R = check_density(rho)
    space.require(R, "state")
    L = _lift(matrix_log_density(partial_trace(R, space, "E"), floor, base), space.d_E)
    return L @ R - R @ L


def purity_commutator(rho, space: BipartiteSpace) -> np.ndarray:
    """``[rho_S (x) I_E, rho]``."""
    R = check_density(rho)
    space.require(R, "state")
    P = _lift(partial_trace(R, space, "E"), space.d_E)
    return P @ R - R @ P


def _real_trace(H: np.ndarray, K: np.ndarray, factor: complex, imag_tol: float) -> float:
    z = factor * np.sum(H * K.T)
    scale = max(1.0, abs(z.real))
    if abs(z.imag) > imag_tol * scale:
        raise NumericalConsistencyError(
            f"rate has imaginary residue {z.imag:.3e}; input is not Hermitian enough"
        )
    return float(z.real)


def entropy_rate(rho, H_int, space: BipartiteSpace, floor: float = DEFAULT_LOG_FLOOR,
                 base: float = 2, imag_tol: float = IMAG_TOL) -> float:
    """Instantaneous rate of the von Neumann entropy of S (bits per unit time)."""
    H = check_hermitian(H_int)
    space.require(H, "interaction")
    return _real_trace(H, log_commutator(rho, space, floor, base), -1j, imag_tol)


def purity_rate(rho, H_int, space: BipartiteSpace, imag_tol: float = IMAG_TOL) -> float:
    """Instantaneous rate of ``tr(rho_S^2)``."""
    H = check_hermitian(H_int)
    space.require(H, "interaction")
    return _real_trace(H, purity_commutator(rho, space), 2j, imag_tol)


def _anti_hermitian_trace_norm(K: np.ndarray) -> float:
    iK = 1j * K
    return float(np.abs(np.linalg.eigvalsh(0.5 * (iK + iK.conj().T))).sum())


def lazy_residual(rho, space: BipartiteSpace) -> float:
    """``||[rho, rho_S (x) I]||_1``; zero exactly for lazy states."""
    return _anti_hermitian_trace_norm(purity_commutator(rho, space))


def is_lazy(rho, space: BipartiteSpace, tol: float = 1e-8) -> bool:
    """Whether ``[rho, rho_S (x) I_E]`` vanishes relative to ``||rho||_1 = 1``."""
    return lazy_residual(rho, space) <= tol


def worst_case_entropy_rate(rho, space: BipartiteSpace, floor: float = DEFAULT_LOG_FLOOR,
                            base: float = 2) -> float:
    """``sup |dH(S)/dt|`` over Hermitian ``H_int`` with unit operator norm."""
    return _anti_hermitian_trace_norm(log_commutator(rho, space, floor, base))


def worst_case_purity_rate(rho, space: BipartiteSpace) -> float:
    """``||[rho_S (x) I, rho]||_1`` (half the supremum of the purity derivative)."""
    return _anti_hermitian_trace_norm(purity_commutator(rho, space))


def _pure_marginal_spectrum(psi, space: BipartiteSpace) -> np.ndarray:
    v = check_ket(psi)
    # rho_S = M M^dag; the eigenvalues are the squared singular values of M
    s = np.linalg.svd(v.reshape(space.d_S, space.d_E), compute_uv=False)
    p = np.zeros(space.d_S)
    p[: s.size] = s**2
    return p


def _spread(p: np.ndarray, f: np.ndarray) -> float:
    # 2 sqrt(<f^2> - <f>^2) under the weights p, evaluated in centred form
    mean = float(np.dot(p, f))
    return 2.0 * float(np.sqrt(max(np.dot(p, (f - mean) ** 2), 0.0)))


def worst_case_entropy_rate_pure(psi, space: BipartiteSpace, floor: float = DEFAULT_LOG_FLOOR,
                                 base: float = 2) -> float:
    """Same as :func:`worst_case_entropy_rate` for ``|psi><psi|`` using only ``rho_S``.

    For a pure state the commutator ``[L (x) I, |psi><psi|]`` has rank two and
    trace norm ``2 sqrt(tr(rho_S L^2) - tr(rho_S L)^2)``.
    """
    p = _pure_marginal_spectrum(psi, space)
    logs = np.log2(np.maximum(p, floor)) if base == 2 else np.log(np.maximum(p, floor)) / np.log(base)
    return _spread(p, logs)


def worst_case_purity_rate_pure(psi, space: BipartiteSpace) -> float:
    """Pure-state form of :func:`worst_case_purity_rate`."""
    p = _pure_marginal_spectrum(psi, space)
    return _spread(p, p)


def finite_difference_rate(rho, H_SE, space: BipartiteSpace, dt: float,
                           which: Literal["entropy", "purity"] = "entropy",
                           base: float = 2, tol: float = 1e-6) -> float:
    """Central difference ``[f(dt) - f(-dt)] / (2 dt)`` of a functional of ``rho_S(t)``.

    Takes the full Hamiltonian, local terms included.

    Raises
    ------
    NumericalConsistencyError
        If the estimated cancellation error ``~ eps |f| / dt`` exceeds ``tol``.
    """
    if not dt > 0:
        raise ParameterError(f"dt must be positive, got {dt!r}")
    if which == "entropy":
        def f(state):
            return von_neumann_entropy(partial_trace(state, space, "E"), base)
    elif which == "purity":
        def f(state):
            return purity(partial_trace(state, space, "E"))
    else:
        raise ParameterError(f"which must be 'entropy' or 'purity', got {which!r}")
    R = check_density(rho)
    space.require(R, "state")
    f_plus = f(evolve(R, H_SE, dt))
    f_minus = f(evolve(R, H_SE, -dt))
    roundoff = 64 * np.finfo(float).eps * max(abs(f_plus), abs(f_minus), 1.0) / dt
    if roundoff > tol:
        raise NumericalConsistencyError(
            f"dt={dt:g} is too small: cancellation error ~{roundoff:.1e} exceeds {tol:g}"
        )
    return (f_plus - f_minus) / (2.0 * dt)


@dataclass(frozen=True)
class RateReport:
    d_S: int
    d_E: int
    entropy_rate: float
    purity_rate: float
    interaction_strength_used: float
    strength_measure: str
    worst_case_entropy_rate: float
    worst_case_purity_rate: float
    universal_bound: float
    universal_bound_ok: bool
    lazy: bool
    lazy_residual: float
    lazy_tol: float
    rank_deficient_marginal: bool
    min_marginal_eigenvalue: float

    def to_dict(self) -> dict:
        return asdict(self)


def rate_report(rho, H_SE, space: BipartiteSpace, strength: Literal["op", "delta"] = "op",
                lazy_tol: float = 1e-8, floor: float = DEFAULT_LOG_FLOOR,
                report_tol: float = 1e-9) -> RateReport:
    """Rates of ``rho`` under the interaction part of ``H_SE`` plus consistency flags.

    ``strength="delta"`` uses ``Delta(H_int)/2`` in place of ``||H_int||_inf``.
    """
    R = check_density(rho)
    H_int = canonical_decompose(H_SE, space).H_int
    if strength == "op":
        s = interaction_strength(H_int)
    elif strength == "delta":
        s = 0.5 * delta_strength(H_int)
    else:
        raise ParameterError(f"strength must be 'op' or 'delta', got {strength!r}")
    h_rate = entropy_rate(R, H_int, space, floor)
    p_rate = purity_rate(R, H_int, space)
    ub = 4.0 * s * np.log2(space.d_S)
    residual = lazy_residual(R, space)
    p_min = float(np.linalg.eigvalsh(partial_trace(R, space, "E"))[0])
    return RateReport(
        d_S=space.d_S,
        d_E=space.d_E,
        entropy_rate=h_rate,
        purity_rate=p_rate,
        interaction_strength_used=s,
        strength_measure=strength,
        worst_case_entropy_rate=worst_case_entropy_rate(R, space, floor),
        worst_case_purity_rate=worst_case_purity_rate(R, space),
        universal_bound=ub,
        universal_bound_ok=bool(abs(h_rate) <= ub + report_tol),
        lazy=bool(residual <= lazy_tol),
        lazy_residual=residual,
        lazy_tol=lazy_tol,
        rank_deficient_marginal=bool(p_min <= floor),
        min_marginal_eigenvalue=p_min,
    )
