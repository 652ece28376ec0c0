"""Canonical splitting of a coupling Hamiltonian and interaction-strength measures.

Any ``H_SE`` decomposes uniquely as ``c I + H_S (x) I + I (x) H_E + H_int`` once
``H_S``, ``H_E`` are traceless and ``H_int`` has vanishing partial traces on both
factors. Two strengths are offered: the operator norm of ``H_int`` and the
shift-invariant spread ``lambda_max - lambda_min``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linop import BipartiteSpace, check_hermitian, partial_trace, tensor

__all__ = [
    "HamiltonianDecomposition",
    "canonical_decompose",
    "interaction_strength",
    "delta_strength",
    "delta_sdp_check",
]


@dataclass(frozen=True)
class HamiltonianDecomposition:
    c: float
    H_S: np.ndarray
    H_E: np.ndarray
    H_int: np.ndarray
    space: BipartiteSpace

    def reconstruct(self) -> np.ndarray:
        sp = self.space
        return (self.c * np.eye(sp.dim)
                + tensor(self.H_S, np.eye(sp.d_E))
                + tensor(np.eye(sp.d_S), self.H_E)
                + self.H_int)

    @property
    def local_part(self) -> np.ndarray:
        """``H_S (x) I + I (x) H_E``."""
        sp = self.space
        return tensor(self.H_S, np.eye(sp.d_E)) + tensor(np.eye(sp.d_S), self.H_E)


def canonical_decompose(H, space: BipartiteSpace) -> HamiltonianDecomposition:
    """Split ``H`` into identity, traceless local and interaction parts.

    ``c = tr H / (d_S d_E)``, ``H_S = tr_E H / d_E - c I``, ``H_E = tr_S H / d_S - c I``
    and ``H_int`` is what remains.
    """
    H = check_hermitian(H)
    space.require(H, "Hamiltonian")
    d_S, d_E = space.d_S, space.d_E
    c = float(np.trace(H).real / space.dim)
    H_S = partial_trace(H, space, "E") / d_E - c * np.eye(d_S)
    H_E = partial_trace(H, space, "S") / d_S - c * np.eye(d_E)
    H_int = H - c * np.eye(space.dim) - tensor(H_S, np.eye(d_E)) - tensor(np.eye(d_S), H_E)
    H_int = 0.5 * (H_int + H_int.conj().T)
    return HamiltonianDecomposition(c, H_S, H_E, H_int, space)


def interaction_strength(H_int) -> float:
    """``||H_int||_inf``, the largest absolute eigenvalue."""
    w = np.linalg.eigvalsh(check_hermitian(H_int))
    return float(max(abs(w[0]), abs(w[-1]))) if w.size else 0.0


def delta_strength(H_int) -> float:
    """``2 min_lam ||H_int - lam I||_inf``, which equals ``lambda_max - lambda_min``."""
    w = np.linalg.eigvalsh(check_hermitian(H_int))
    return float(w[-1] - w[0]) if w.size else 0.0


_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


def delta_sdp_check(H_int, tol: float = 1e-13, return_shift: bool = False):
    """Solve ``min gamma  s.t.  gamma I >= H_int - lam I >= -gamma I`` over ``(gamma, lam)``.

    For fixed ``lam`` the smallest feasible ``gamma`` is ``||H_int - lam I||_inf``,
    which is convex in ``lam``; the outer problem is solved by golden-section
    search. Returns ``2 gamma*`` (and ``lam*`` if ``return_shift``).

    This deliberately does not use the closed form of :func:`delta_strength`;
    it exists to check one against the other.
    """
    H = check_hermitian(H_int)
    n = H.shape[0]
    eye = np.eye(n)

    def gamma(lam):
        return np.abs(np.linalg.eigvalsh(H - lam * eye)).max(initial=0.0)

    # any feasible lam lies within the Gershgorin-type range [-||H||, ||H||]
    r = float(np.abs(H).sum(axis=1).max(initial=0.0))
    a, b = -r, r
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = gamma(x1), gamma(x2)
    while b - a > tol * max(1.0, r):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _INVPHI * (b - a)
            f1 = gamma(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _INVPHI * (b - a)
            f2 = gamma(x2)
    lam = 0.5 * (a + b)
    value = 2.0 * gamma(lam)
    if return_shift:
        return value, lam
    return value
