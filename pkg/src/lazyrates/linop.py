"""Dense complex linear algebra for bipartite systems.

Operators are plain ``numpy`` arrays of dtype ``complex128``; kets are 1-D arrays.
Tensor products use the S-major convention: the joint row index of
``|i_S> (x) |i_E>`` is ``i_S * d_E + i_E``. Every partial trace, commutator and
test in the package relies on that ordering.

Logarithms default to base 2 (entropies in bits). Pass ``base=np.e`` for nats.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ParameterError, StructuralError

HERMITICITY_TOL = 1e-10
DENSITY_TOL = 1e-10
KET_TOL = 1e-10
DEFAULT_LOG_FLOOR = 1e-14

__all__ = [
    "BipartiteSpace",
    "as_matrix",
    "check_hermitian",
    "check_density",
    "check_ket",
    "eigh",
    "tensor",
    "partial_trace",
    "ket_marginal",
    "matrix_log_density",
    "evolve",
    "trace_norm",
    "op_norm",
    "commutator",
    "von_neumann_entropy",
    "purity",
    "trace_distance_to_mixed",
    "purify",
    "max_entangled",
    "projector",
]


@dataclass(frozen=True)
class BipartiteSpace:
    """Dimensions of a system S and an environment E."""

    d_S: int
    d_E: int

    def __post_init__(self):
        for name in ("d_S", "d_E"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise StructuralError(f"{name} must be a positive integer, got {value!r}")
            object.__setattr__(self, name, int(value))

    @property
    def dim(self) -> int:
        return self.d_S * self.d_E

    def require(self, M: np.ndarray, what: str = "operator") -> None:
        """Raise :class:`StructuralError` unless ``M`` acts on the joint space."""
        if M.shape[0] != self.dim:
            raise StructuralError(
                f"{what} has dimension {M.shape[0]}, expected d_S*d_E = {self.dim}"
            )


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a square complex128 array with finite entries."""
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise StructuralError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise StructuralError("matrix has non-finite entries")
    return A


def check_hermitian(M, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate Hermiticity relative to the operator norm and return the matrix."""
    A = as_matrix(M)
    scale = max(np.abs(A).max(initial=0.0), 1.0)
    if np.abs(A - A.conj().T).max(initial=0.0) > tol * scale:
        raise StructuralError("matrix is not Hermitian within tolerance")
    return A


def check_density(rho, tol: float = DENSITY_TOL) -> np.ndarray:
    """Validate that ``rho`` is PSD with unit trace and return it."""
    A = check_hermitian(rho, tol)
    tr = np.trace(A).real
    if abs(tr - 1.0) > tol:
        raise StructuralError(f"density operator has trace {tr!r}, expected 1")
    if np.linalg.eigvalsh(A)[0] < -tol:
        raise StructuralError("density operator has a negative eigenvalue")
    return A


def check_ket(psi, tol: float = KET_TOL) -> np.ndarray:
    v = np.asarray(psi, dtype=np.complex128)
    if v.ndim != 1:
        raise StructuralError(f"ket must be one-dimensional, got shape {v.shape}")
    if abs(np.linalg.norm(v) - 1.0) > tol:
        raise StructuralError("ket is not normalized")
    return v


def eigh(M) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    The matrix is symmetrized before the LAPACK call so that the
    reconstruction ``V @ diag(w) @ V^dag`` matches ``M`` to rounding error.
    """
    A = check_hermitian(M)
    w, V = np.linalg.eigh(0.5 * (A + A.conj().T))
    return w, V


def tensor(A, B) -> np.ndarray:
    """Kronecker product, S-factor major."""
    return np.kron(np.asarray(A, dtype=np.complex128), np.asarray(B, dtype=np.complex128))


def partial_trace(M, space: BipartiteSpace, which: Literal["S", "E"]) -> np.ndarray:
    """Trace out subsystem ``which``.

    ``which="E"`` returns ``tr_E(M)`` on S, ``which="S"`` returns ``tr_S(M)`` on E.
    """
    A = as_matrix(M)
    space.require(A)
    T = A.reshape(space.d_S, space.d_E, space.d_S, space.d_E)
    if which == "E":
        return np.einsum("iaja->ij", T)
    if which == "S":
        return np.einsum("aiaj->ij", T)
    raise ParameterError(f"which must be 'S' or 'E', got {which!r}")


def ket_marginal(psi, space: BipartiteSpace, which: Literal["S", "E"] = "E") -> np.ndarray:
    """Reduced state of a pure joint state without forming the joint projector.

    ``which`` is the traced-out factor, as in :func:`partial_trace`.
    """
    v = np.asarray(psi, dtype=np.complex128)
    if v.shape != (space.dim,):
        raise StructuralError(f"ket has shape {v.shape}, expected ({space.dim},)")
    M = v.reshape(space.d_S, space.d_E)
    if which == "E":
        return M @ M.conj().T
    if which == "S":
        return M.T @ M.conj()
    raise ParameterError(f"which must be 'S' or 'E', got {which!r}")


def _log(x: np.ndarray, base: float) -> np.ndarray:
    if base == 2:
        return np.log2(x)
    return np.log(x) / np.log(base)


def matrix_log_density(rho, floor: float = DEFAULT_LOG_FLOOR, base: float = 2) -> np.ndarray:
    """``log(rho)`` with eigenvalues clamped from below at ``floor``."""
    if not floor > 0:
        raise ParameterError(f"floor must be positive, got {floor!r}")
    w, V = eigh(rho)
    logs = _log(np.maximum(w, floor), base)
    return (V * logs) @ V.conj().T


def evolve(rho, H, t: float) -> np.ndarray:
    """``exp(-iHt) rho exp(iHt)`` through the eigendecomposition of ``H``."""
    R = as_matrix(rho)
    w, V = eigh(H)
    if R.shape != V.shape:
        raise StructuralError(f"state shape {R.shape} does not match Hamiltonian shape {V.shape}")
    U = (V * np.exp(-1j * w * t)) @ V.conj().T
    out = U @ R @ U.conj().T
    return 0.5 * (out + out.conj().T)


def trace_norm(M) -> float:
    """Schatten-1 norm (sum of singular values)."""
    A = as_matrix(M)
    if np.allclose(A, A.conj().T, rtol=0, atol=1e-13 * max(np.abs(A).max(initial=0.0), 1.0)):
        return float(np.abs(np.linalg.eigvalsh(0.5 * (A + A.conj().T))).sum())
    return float(np.linalg.svd(A, compute_uv=False).sum())


def op_norm(M) -> float:
    """Schatten-infinity norm (largest singular value)."""
    A = as_matrix(M)
    if A.shape[0] == 0:
        return 0.0
    return float(np.linalg.svd(A, compute_uv=False)[0])


def commutator(A, B) -> np.ndarray:
    A = as_matrix(A)
    B = as_matrix(B)
    if A.shape != B.shape:
        raise StructuralError(f"commutator of shapes {A.shape} and {B.shape}")
    return A @ B - B @ A


def _spectrum(rho) -> np.ndarray:
    return np.clip(np.linalg.eigvalsh(check_density(rho)), 0.0, None)


def von_neumann_entropy(rho, base: float = 2) -> float:
    p = _spectrum(rho)
    p = p[p > 0]
    return float(max(-(p * _log(p, base)).sum(), 0.0))


def purity(rho) -> float:
    A = check_density(rho)
    return float(np.vdot(A, A).real)


def trace_distance_to_mixed(rho_S) -> float:
    """``|| rho_S - I/d ||_1`` from the spectrum of ``rho_S``."""
    A = check_density(rho_S)
    p = np.linalg.eigvalsh(A)
    return float(np.abs(p - 1.0 / A.shape[0]).sum())


def purify(rho) -> np.ndarray:
    """Purification ``sum_i sqrt(p_i) |v_i> (x) |i>`` on ``d*d`` dimensions.

    The original system is the first tensor factor, the purifying copy the second.
    """
    A = check_density(rho)
    w, V = np.linalg.eigh(A)
    # rounding-level eigenvalues would otherwise leave ~1e-8 amplitudes behind
    w = np.where(w > 16 * A.shape[0] * np.finfo(float).eps, w, 0.0)
    amps = np.sqrt(w)
    # column i of V scaled by sqrt(p_i) becomes the block coefficient of |i> on the purifier
    return (V * amps).reshape(-1)


def max_entangled(d: int) -> np.ndarray:
    """``(1/sqrt d) sum_i |i>|i>``."""
    if int(d) != d or d < 1:
        raise ParameterError(f"d must be a positive integer, got {d!r}")
    d = int(d)
    return np.eye(d, dtype=np.complex128).reshape(-1) / np.sqrt(d)


def projector(psi) -> np.ndarray:
    v = np.asarray(psi, dtype=np.complex128).reshape(-1)
    return np.outer(v, v.conj())
