"""Quantum channels in Kraus form and their Choi states.

The Choi state follows ``tau_{A'B} = (id_{A'} (x) T)(|psi><psi|_{A'A})`` with
``|psi> = d_A^{-1/2} sum_i |i>|i>``: the reference copy ``A'`` is the first
tensor factor, the channel output ``B`` the second.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from ..errors import StructuralError
from ..linop import BipartiteSpace, as_matrix, partial_trace

__all__ = [
    "KrausChannel",
    "PartialTraceChannel",
    "identity_channel",
    "partial_trace_channel",
    "completely_depolarizing_channel",
    "apply_channel",
    "choi_factor",
    "choi_state",
]

TP_TOL = 1e-9


class KrausChannel:
    """CPTP map ``rho -> sum_k K_k rho K_k^dag`` from ``d_in`` to ``d_out`` dimensions."""

    def __init__(self, kraus, tol: float = TP_TOL):
        ops = np.asarray(kraus, dtype=np.complex128)
        if ops.ndim == 2:
            ops = ops[None]
        if ops.ndim != 3 or ops.shape[0] == 0:
            raise StructuralError(f"Kraus operators must stack to (k, d_out, d_in), got {ops.shape}")
        self._ops = ops
        self.d_out, self.d_in = ops.shape[1], ops.shape[2]
        gram = np.einsum("kji,kjl->il", ops.conj(), ops)
        if np.abs(gram - np.eye(self.d_in)).max() > tol:
            raise StructuralError("Kraus operators are not trace preserving")

    @property
    def kraus(self) -> np.ndarray:
        """Stacked Kraus operators, shape ``(k, d_out, d_in)``."""
        return self._ops

    def __call__(self, rho) -> np.ndarray:
        return apply_channel(self, rho)

    def __repr__(self):
        return f"{type(self).__name__}(d_in={self.d_in}, d_out={self.d_out}, n_kraus={len(self.kraus)})"


class PartialTraceChannel(KrausChannel):
    """``tr_E`` (or ``tr_S``) on ``S (x) E`` with Kraus operators built lazily.

    The Kraus set for ``tr_E`` is ``{I_S (x) <j|_E}``; large environments never
    need it because :func:`apply_channel` and :func:`choi_factor` use the structure.
    """

    def __init__(self, space: BipartiteSpace, traced: str = "E"):
        if traced not in ("S", "E"):
            raise StructuralError(f"traced must be 'S' or 'E', got {traced!r}")
        self.space = space
        self.traced = traced
        self.d_in = space.dim
        self.d_out = space.d_S if traced == "E" else space.d_E

    def __repr__(self):
        return f"PartialTraceChannel(d_S={self.space.d_S}, d_E={self.space.d_E}, traced={self.traced!r})"

    @cached_property
    def _ops(self) -> np.ndarray:
        d_S, d_E = self.space.d_S, self.space.d_E
        if self.traced == "E":
            # K_j[s, (s', e)] = delta_{s s'} delta_{e j}
            ops = np.zeros((d_E, d_S, d_S, d_E), dtype=np.complex128)
            for j in range(d_E):
                ops[j, :, :, j] = np.eye(d_S)
            return ops.reshape(d_E, d_S, d_S * d_E)
        ops = np.zeros((d_S, d_E, d_S, d_E), dtype=np.complex128)
        for j in range(d_S):
            ops[j, :, j, :] = np.eye(d_E)
        return ops.reshape(d_S, d_E, d_S * d_E)


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel(np.eye(d)[None])


def partial_trace_channel(space: BipartiteSpace, traced: str = "E") -> PartialTraceChannel:
    return PartialTraceChannel(space, traced)


def completely_depolarizing_channel(d_in: int, d_out: int | None = None) -> KrausChannel:
    """``rho -> tr(rho) I/d_out`` with Kraus operators ``|j><i| / sqrt(d_out)``."""
    d_out = d_in if d_out is None else d_out
    ops = np.zeros((d_in * d_out, d_out, d_in), dtype=np.complex128)
    for i in range(d_in):
        for j in range(d_out):
            ops[i * d_out + j, j, i] = 1.0 / np.sqrt(d_out)
    return KrausChannel(ops)


def apply_channel(ch: KrausChannel, rho) -> np.ndarray:
    R = as_matrix(rho)
    if R.shape[0] != ch.d_in:
        raise StructuralError(f"channel expects dimension {ch.d_in}, got {R.shape[0]}")
    if isinstance(ch, PartialTraceChannel):
        return partial_trace(R, ch.space, ch.traced)
    K = ch.kraus
    return np.einsum("kab,bc,kdc->ad", K, R, K.conj())


def choi_factor(ch: KrausChannel) -> np.ndarray:
    """Matrix ``V`` with ``choi_state(ch) = V V^dag``, one column per Kraus operator.

    Column ``k`` is ``(I (x) K_k)|psi>``, whose amplitude on ``|i>_{A'} |b>_B`` is
    ``K_k[b, i] / sqrt(d_in)``.
    """
    if isinstance(ch, PartialTraceChannel) and ch.traced == "E":
        d_S, d_E = ch.space.d_S, ch.space.d_E
        # A' = (s', e'), B = s; column j carries delta_{s s'} delta_{e' j}
        V = np.zeros((d_S, d_E, d_S, d_E), dtype=np.complex128)
        for j in range(d_E):
            V[:, j, :, j] = np.eye(d_S)
        return V.reshape(d_S * d_E * d_S, d_E) / np.sqrt(ch.d_in)
    K = ch.kraus
    return np.transpose(K, (2, 1, 0)).reshape(ch.d_in * ch.d_out, len(K)) / np.sqrt(ch.d_in)


def choi_state(ch: KrausChannel) -> np.ndarray:
    V = choi_factor(ch)
    tau = V @ V.conj().T
    return 0.5 * (tau + tau.conj().T)
