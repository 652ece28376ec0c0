r"""Min-entropy and conditional min-entropy.

``H_min(A|B)_rho = -log2 min { tr sigma_B : sigma_B >= 0, I_A (x) sigma_B >= rho_AB }``.

The semidefinite program is solved by a primal log-barrier path-following method in
the ``d_B^2`` real parameters of ``sigma_B``. The large matrix inequality is never
formed: with ``rho = V V^dag`` (``V`` is ``n x r``, ``r = rank rho``) and
``D = I_A (x) sigma`` the Schur complement gives

    -log det(D - V V^dag) = -d_A log det(sigma) - log det(I_r - V^dag D^{-1} V)

so every Newton step costs ``O(d_A d_B^2 r^2)`` instead of ``O((d_A d_B)^3)``.
Newton directions are expressed as ``sigma^{1/2} X sigma^{1/2}``, which keeps the
Hessian well conditioned when the optimal ``sigma`` is singular.

Each outer iteration produces a feasible primal point and a feasible dual point
``X >= 0, tr_A X <= I_B`` (a rescaled inverse slack), so the returned value comes
with a verified bracket.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from ..errors import SolverError, StructuralError
from ..linop import BipartiteSpace, check_density

__all__ = [
    "MinEntropyResult",
    "hmin",
    "cond_hmin",
    "cond_hmin_factor",
    "hermitian_basis",
]

DENSE_CHECK_LIMIT = 2048


def hmin(rho, base: float = 2) -> float:
    """``-log lambda_max(rho)``."""
    lam = np.linalg.eigvalsh(check_density(rho))[-1]
    return float(-np.log(lam) / np.log(base))


@dataclass(frozen=True)
class MinEntropyResult:
    value: float
    """``-log2`` of the primal objective (a lower bound on the exact value up to rounding)."""
    upper: float
    """``-log2`` of the dual objective."""
    sigma_B: np.ndarray
    primal: float
    dual: float
    feasibility_residual: float
    outer_iterations: int
    newton_steps: int

    @property
    def gap(self) -> float:
        return self.primal - self.dual


def hermitian_basis(d: int) -> np.ndarray:
    """Orthonormal (Hilbert-Schmidt) basis of ``d x d`` Hermitian matrices, shape ``(d*d, d, d)``."""
    basis = []
    for i in range(d):
        E = np.zeros((d, d), dtype=np.complex128)
        E[i, i] = 1.0
        basis.append(E)
    s = 1.0 / np.sqrt(2.0)
    for i in range(d):
        for j in range(i + 1, d):
            E = np.zeros((d, d), dtype=np.complex128)
            E[i, j] = E[j, i] = s
            basis.append(E)
            F = np.zeros((d, d), dtype=np.complex128)
            F[i, j] = -1j * s
            F[j, i] = 1j * s
            basis.append(F)
    return np.array(basis)


def _chol(M: np.ndarray):
    try:
        return np.linalg.cholesky(0.5 * (M + M.conj().T))
    except np.linalg.LinAlgError:
        return None


class _Barrier:
    """Barrier state for ``sigma`` given the normalized factor ``V`` of shape ``(d_A, d_B, r)``."""

    def __init__(self, V3: np.ndarray):
        self.V3 = V3
        self.d_A, self.d_B, self.r = V3.shape
        # (d_B, d_A * r) layout so one triangular solve handles every block
        self.Vflat = V3.transpose(1, 0, 2).reshape(self.d_B, self.d_A * self.r)

    def evaluate(self, sigma: np.ndarray):
        """Return cached pieces at ``sigma`` or ``None`` outside the domain."""
        L = _chol(sigma)
        if L is None:
            return None
        Y = solve_triangular(L, self.Vflat, lower=True)
        Y3 = Y.reshape(self.d_B, self.d_A, self.r).transpose(1, 0, 2)  # (a, i, s)
        G = np.einsum("ais,ait->st", Y3.conj(), Y3)
        S = np.eye(self.r) - G
        LS = _chol(S)
        if LS is None:
            return None
        return L, Y3, G, S, LS

    def phi(self, L, LS) -> float:
        return float(-2.0 * self.d_A * np.log(np.diag(L).real).sum()
                     - 2.0 * np.log(np.diag(LS).real).sum())


def _newton_system(bar: _Barrier, t: float, sigma, pieces, basis, basis_T):
    L, Y3, G, S, LS = pieces
    d_A, d_B, r = bar.d_A, bar.d_B, bar.r
    m = basis.shape[0]
    # P~_a = Y_a LS^{-dag}:  P~_a P~_a^dag = Y_a S^{-1} Y_a^dag
    P = solve_triangular(LS.conj(), Y3.reshape(d_A * d_B, r).T, lower=True).T.reshape(d_A, d_B, r)
    Qt = np.einsum("ais,ajs->ij", P, P.conj())
    # gradient of t tr(sigma) + phi in the scaled coordinates
    grad = t * (L.conj().T @ L) - d_A * np.eye(d_B) - Qt
    g = np.einsum("ij,mji->m", grad, basis).real

    H = d_A * np.eye(m)
    X = basis @ Qt
    H += 2.0 * (X.reshape(m, -1) @ basis_T.reshape(m, -1).T).real
    P2 = P.reshape(d_A, d_B * r)
    T = (P2.conj().T @ P2).reshape(d_B, r, d_B, r).transpose(0, 2, 1, 3).reshape(d_B * d_B, r * r)
    Rm = basis.reshape(m, d_B * d_B) @ T
    RmT = Rm.reshape(m, r, r).transpose(0, 2, 1).reshape(m, r * r)
    H += (Rm @ RmT.T).real
    H = 0.5 * (H + H.T)
    return g, H, Qt


def _dual_bound(bar: _Barrier, t: float, pieces, Qt) -> float:
    """Objective of a dual-feasible point built from the inverse slack ``M^{-1}``.

    With ``X = M^{-1}/t`` and ``C = (tr_A X)^{-1/2}`` the congruence
    ``X' = (I (x) C) X (I (x) C)`` is PSD with ``tr_A X' = I`` exactly, so
    ``tr(rho X')`` lower-bounds the primal optimum. Rescaling by a congruence
    rather than by ``lambda_max(tr_A X)`` tolerates uneven centering errors.
    """
    L, Y3, G, S, LS = pieces
    d_B = bar.d_B
    Linv = solve_triangular(L, np.eye(d_B), lower=True)
    trA = Linv.conj().T @ (bar.d_A * np.eye(d_B) + Qt) @ Linv / t
    w, U = np.linalg.eigh(0.5 * (trA + trA.conj().T))
    if w[0] <= 0:
        return 0.0
    C = (U / np.sqrt(w)) @ U.conj().T
    # tr(rho X') = tr(V'^dag M^{-1} V') / t with V'_a = C V_a, and
    # M^{-1} = D^{-1} + D^{-1} V S^{-1} V^dag D^{-1}
    Yc = np.einsum("ij,ajs->ais", Linv @ C, bar.V3)          # L^{-1} C V_a
    first = np.vdot(Yc, Yc).real                               # tr V'^dag D^{-1} V'
    cross = np.einsum("ais,ait->st", Y3.conj(), Yc)            # V^dag D^{-1} V'
    Z = solve_triangular(LS, cross, lower=True)
    return float((first + np.vdot(Z, Z).real) / t)


def cond_hmin_factor(V, space: BipartiteSpace, rel_gap: float = 1e-9,
                     max_newton: int = 1000, return_result: bool = False):
    """Conditional min-entropy of ``rho = V V^dag`` on ``A (x) B``.

    ``space.d_S`` is read as ``d_A`` (the conditioned system) and ``space.d_E`` as
    ``d_B``. ``V`` has shape ``(d_A d_B, r)``; columns need not be orthogonal.
    """
    V = np.asarray(V, dtype=np.complex128)
    if V.ndim == 1:
        V = V[:, None]
    d_A, d_B = space.d_S, space.d_E
    if V.shape[0] != d_A * d_B:
        raise StructuralError(f"factor has {V.shape[0]} rows, expected {d_A * d_B}")
    scale = float(np.linalg.eigvalsh(V.conj().T @ V)[-1])
    if not scale > 0:
        raise StructuralError("state is zero")
    bar = _Barrier(V.reshape(d_A, d_B, -1) / np.sqrt(scale))
    n = d_A * d_B
    basis = hermitian_basis(d_B)
    basis_T = basis.transpose(0, 2, 1)

    sigma = 2.0 * np.eye(d_B, dtype=np.complex128)
    pieces = bar.evaluate(sigma)
    # sigma = 2I is close to the central point for t = d_A / 2 since ||rho|| <= 1
    t = 0.5 * d_A
    steps = 0
    outer = 0
    primal = dual = np.nan
    while True:
        outer += 1
        # centering by damped Newton
        inner = 0
        prev_dec2 = np.inf
        while True:
            inner += 1
            if steps >= max_newton:
                raise SolverError("conditional min-entropy solver did not converge",
                                  {"primal": primal * scale, "dual": dual * scale, "t": t,
                                   "newton_steps": steps})
            g, H, Qt = _newton_system(bar, t, sigma, pieces, basis, basis_T)
            try:
                x = np.linalg.solve(H, -g)
            except np.linalg.LinAlgError:
                x = np.linalg.lstsq(H, -g, rcond=None)[0]
            dec2 = float(-g @ x)
            steps += 1
            L = pieces[0]
            step = L @ np.einsum("m,mij->ij", x, basis) @ L.conj().T
            alpha = 1.0 if dec2 < 0.0625 else 1.0 / (1.0 + np.sqrt(max(dec2, 0.0)))
            while True:
                trial = sigma + alpha * step
                new = bar.evaluate(trial)
                if new is not None:
                    break
                alpha *= 0.5
                if alpha < 1e-12:
                    raise SolverError("line search left the feasible region",
                                      {"t": t, "newton_steps": steps})
            sigma = 0.5 * (trial + trial.conj().T)
            pieces = new
            # decrement stalls near 1e-12 from rounding; the dual bound stays valid regardless
            if dec2 < 1e-10 or (dec2 < 1e-6 and (inner >= 25 or dec2 >= prev_dec2)):
                break
            prev_dec2 = dec2
        _, _, Qt = _newton_system(bar, t, sigma, pieces, basis, basis_T)
        primal = float(np.trace(sigma).real)
        dual = _dual_bound(bar, t, pieces, Qt)
        if primal - dual <= rel_gap * primal:
            break
        # past t ~ 1e12 the centering is limited by rounding, not by t
        if t > 1e12 and primal - dual <= 1e3 * rel_gap * primal:
            break
        t *= 8.0 if primal - dual > 1e3 * rel_gap * primal else 4.0

    sigma_B = scale * sigma
    residual = _feasibility_residual(V, sigma_B, d_A, d_B, pieces)
    result = MinEntropyResult(
        value=float(-np.log2(scale * primal)),
        upper=float(-np.log2(scale * dual)),
        sigma_B=sigma_B,
        primal=scale * primal,
        dual=scale * dual,
        feasibility_residual=residual,
        outer_iterations=outer,
        newton_steps=steps,
    )
    return result if return_result else result.value


def _feasibility_residual(V, sigma_B, d_A, d_B, pieces) -> float:
    """``max(0, -lambda_min(I_A (x) sigma_B - rho))``.

    Computed densely for small problems. Otherwise the bound
    ``lambda_min >= lambda_min(sigma) * min(1, lambda_min(S))`` is used, which is
    rigorous because the Cholesky factors of ``sigma`` and ``S`` exist.
    """
    n = d_A * d_B
    if n <= DENSE_CHECK_LIMIT:
        M = np.kron(np.eye(d_A), sigma_B) - V @ V.conj().T
        return float(max(0.0, -np.linalg.eigvalsh(0.5 * (M + M.conj().T))[0]))
    S = pieces[3]
    lo = np.linalg.eigvalsh(sigma_B)[0] * min(1.0, np.linalg.eigvalsh(S)[0])
    return float(max(0.0, -lo))


def cond_hmin(rho_AB, dims: BipartiteSpace, rel_gap: float = 1e-9,
              return_result: bool = False, rank_tol: float = 1e-14):
    """``H_min(A|B)`` in bits for a density operator on ``A (x) B``.

    ``dims.d_S`` is ``d_A`` and ``dims.d_E`` is ``d_B``. Eigenvalues below
    ``rank_tol * lambda_max`` are dropped from the factor; this perturbs
    feasibility by at most that amount.
    """
    R = check_density(rho_AB)
    dims.require(R, "state")
    w, U = np.linalg.eigh(R)
    keep = w > rank_tol * w[-1]
    V = U[:, keep] * np.sqrt(w[keep])
    return cond_hmin_factor(V, dims, rel_gap=rel_gap, return_result=return_result)
