"""Seeded samplers: Haar unitaries and kets, fixed-spectrum mixed states, GUE Hamiltonians.

Reproducibility rests on :class:`SeededRng`: a Philox counter-based generator keyed by
``(seed, stream)`` through :class:`numpy.random.SeedSequence`. Child streams are derived
by appending to the spawn key, so per-sample streams in a Monte Carlo loop do not
depend on scheduling order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DegenerateInputError, ParameterError
from .linop import BipartiteSpace

__all__ = [
    "SeededRng",
    "Spectrum",
    "complex_ginibre",
    "haar_unitary",
    "haar_isometry",
    "haar_pure_state",
    "random_density_fixed_spectrum",
    "random_spectrum",
    "gue_hamiltonian",
    "random_interaction",
]

_MASK64 = (1 << 64) - 1


class SeededRng:
    """A reproducible random stream identified by a 64-bit seed and a stream path.

    Parameters
    ----------
    seed : int
        Root seed, reduced modulo 2**64.
    stream : int or tuple of int
        Stream identifier. Tuples address nested sub-streams, e.g. ``(run, sample)``.
    """

    def __init__(self, seed: int, stream: Union[int, tuple] = 0):
        self.seed = int(seed) & _MASK64
        parts = stream if isinstance(stream, (tuple, list)) else (stream,)
        self.stream = tuple(int(s) & _MASK64 for s in parts)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.stream)
        self.generator = np.random.Generator(np.random.Philox(ss))

    def child(self, *index: int) -> "SeededRng":
        """Independent sub-stream ``stream + index``."""
        return SeededRng(self.seed, self.stream + tuple(int(i) for i in index))

    def __repr__(self):
        return f"SeededRng(seed={self.seed}, stream={self.stream})"


RngLike = Union[SeededRng, np.random.Generator, int, None]


def _gen(rng: RngLike) -> np.random.Generator:
    if isinstance(rng, SeededRng):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    return SeededRng(0 if rng is None else rng).generator


def _check_dim(d) -> int:
    if isinstance(d, bool) or int(d) != d or d < 1:
        raise ParameterError(f"dimension must be a positive integer, got {d!r}")
    return int(d)


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a density operator, stored nonincreasing."""

    probabilities: tuple = field()

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float).reshape(-1)
        if p.size == 0:
            raise ParameterError("spectrum is empty")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise ParameterError("spectrum entries must be finite and nonnegative")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ParameterError(f"spectrum sums to {p.sum()!r}, expected 1")
        object.__setattr__(self, "probabilities", tuple(np.sort(p)[::-1].tolist()))

    def __len__(self):
        return len(self.probabilities)

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.array))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.probabilities)

    @classmethod
    def pure(cls, d: int) -> "Spectrum":
        p = np.zeros(_check_dim(d))
        p[0] = 1.0
        return cls(tuple(p))

    @classmethod
    def uniform(cls, d: int) -> "Spectrum":
        d = _check_dim(d)
        return cls((1.0 / d,) * d)


def complex_ginibre(shape, rng: RngLike) -> np.ndarray:
    """I.i.d. complex Gaussians with ``E|z|^2 = 1``."""
    g = _gen(rng)
    return (g.standard_normal(shape) + 1j * g.standard_normal(shape)) / np.sqrt(2.0)


def _phase_fixed_qr(Z: np.ndarray) -> np.ndarray:
    Q, R = np.linalg.qr(Z)
    diag = np.diagonal(R, axis1=-2, axis2=-1)
    mod = np.abs(diag)
    phases = np.where(mod > 0, diag / np.where(mod > 0, mod, 1.0), 1.0)
    return Q * phases[..., None, :]


def haar_unitary(d: int, rng: RngLike, size: int | None = None) -> np.ndarray:
    """Haar-distributed ``d x d`` unitary (Ginibre + QR with the phases of ``diag(R)`` removed).

    With ``size`` a stacked array of shape ``(size, d, d)`` is returned.
    """
    d = _check_dim(d)
    shape = (d, d) if size is None else (int(size), d, d)
    return _phase_fixed_qr(complex_ginibre(shape, rng))


def haar_isometry(d: int, k: int, rng: RngLike) -> np.ndarray:
    """First ``k`` columns of a Haar unitary on ``d`` dimensions."""
    d = _check_dim(d)
    k = _check_dim(k)
    if k > d:
        raise ParameterError(f"isometry needs k <= d, got k={k}, d={d}")
    return _phase_fixed_qr(complex_ginibre((d, k), rng))


def haar_pure_state(d: int, rng: RngLike) -> np.ndarray:
    """Uniformly random unit vector in ``C^d``."""
    v = complex_ginibre(_check_dim(d), rng)
    return v / np.linalg.norm(v)


def random_density_fixed_spectrum(spectrum: Spectrum | np.ndarray, rng: RngLike) -> np.ndarray:
    """``U diag(spectrum) U^dag`` with ``U`` Haar.

    Only the columns of ``U`` that meet a nonzero eigenvalue are sampled.
    """
    if not isinstance(spectrum, Spectrum):
        spectrum = Spectrum(tuple(np.asarray(spectrum, dtype=float).reshape(-1)))
    p = spectrum.array
    d = len(p)
    k = spectrum.rank
    V = haar_isometry(d, k, rng)
    rho = (V * p[:k]) @ V.conj().T
    return 0.5 * (rho + rho.conj().T)


def random_spectrum(d: int, rng: RngLike, rank: int | None = None) -> Spectrum:
    """Flat-Dirichlet spectrum with ``rank`` nonzero entries (default full rank)."""
    d = _check_dim(d)
    k = d if rank is None else _check_dim(rank)
    if k > d:
        raise ParameterError(f"rank {k} exceeds dimension {d}")
    p = np.zeros(d)
    p[:k] = _gen(rng).dirichlet(np.ones(k))
    p /= p.sum()
    return Spectrum(tuple(p))


def gue_hamiltonian(d: int, rng: RngLike) -> np.ndarray:
    """``(G + G^dag)/2`` with ``G`` having independent N(0,1) real and imaginary parts.

    Off-diagonal entries then have ``E|H_ij|^2 = 1``, so the spectrum fills
    ``[-2 sqrt(d), 2 sqrt(d)]`` for large ``d``.
    """
    d = _check_dim(d)
    g = _gen(rng)
    G = g.standard_normal((d, d)) + 1j * g.standard_normal((d, d))
    return 0.5 * (G + G.conj().T)


def random_interaction(space: BipartiteSpace, rng: RngLike, normalize: bool = True) -> np.ndarray:
    """Interaction part of a GUE Hamiltonian on ``S (x) E``.

    With ``normalize`` the result is scaled to unit operator norm.
    """
    from .hamiltonian import canonical_decompose, interaction_strength

    H_int = canonical_decompose(gue_hamiltonian(space.dim, rng), space).H_int
    if normalize:
        s = interaction_strength(H_int)
        if s <= 1e-300:
            raise DegenerateInputError("sampled interaction vanishes; cannot normalize")
        H_int = H_int / s
    return H_int
