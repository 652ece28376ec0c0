import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lazyrates.hamiltonian import (
    canonical_decompose,
    delta_sdp_check,
    delta_strength,
    interaction_strength,
)
from lazyrates.linop import BipartiteSpace, op_norm, partial_trace, tensor
from lazyrates.sampler import SeededRng, gue_hamiltonian, random_interaction

SZ = np.diag([1.0, -1.0])
ZZ = np.kron(SZ, SZ)


def _check_invariants(dec, H, tol=1e-9):
    sp = dec.space
    scale = max(op_norm(H), 1.0)
    assert abs(np.trace(dec.H_S)) <= tol * scale
    assert abs(np.trace(dec.H_E)) <= tol * scale
    assert np.abs(partial_trace(dec.H_int, sp, "E")).max() <= tol * scale
    assert np.abs(partial_trace(dec.H_int, sp, "S")).max() <= tol * scale
    assert np.abs(dec.reconstruct() - H).max() <= tol * scale


def test_examples():
    sp = BipartiteSpace(2, 2)
    d = canonical_decompose(np.eye(4), sp)
    assert d.c == pytest.approx(1)
    assert np.allclose(d.H_S, 0) and np.allclose(d.H_E, 0) and np.allclose(d.H_int, 0)
    A = np.array([[0.3, 1 - 1j], [1 + 1j, -0.3]])
    d = canonical_decompose(tensor(A, np.eye(2)), sp)
    assert d.c == pytest.approx(0)
    assert np.allclose(d.H_S, A) and np.allclose(d.H_E, 0) and np.allclose(d.H_int, 0)
    d = canonical_decompose(ZZ, sp)
    assert np.allclose(d.H_int, ZZ) and np.allclose(d.H_S, 0) and np.allclose(d.H_E, 0)


@pytest.mark.parametrize("d_S,d_E", [(2, 2), (2, 8), (4, 4)])
def test_reconstruction_gue(d_S, d_E):
    sp = BipartiteSpace(d_S, d_E)
    r = SeededRng(31, d_S * 100 + d_E)
    for k in range(1000):
        H = gue_hamiltonian(sp.dim, r.child(k))
        _check_invariants(canonical_decompose(H, sp), H)


def test_shift_invariance(rng):
    sp = BipartiteSpace(3, 2)
    H = gue_hamiltonian(6, rng)
    a = canonical_decompose(H, sp).H_int
    b = canonical_decompose(H + 2.5 * np.eye(6), sp).H_int
    assert np.abs(a - b).max() <= 1e-12


def test_local_terms_absorbed(rng):
    sp = BipartiteSpace(2, 3)
    H = gue_hamiltonian(6, rng)
    A, B = gue_hamiltonian(2, rng), gue_hamiltonian(3, rng)
    a = canonical_decompose(H, sp).H_int
    b = canonical_decompose(H + tensor(A, np.eye(3)) + tensor(np.eye(2), B), sp).H_int
    assert np.abs(a - b).max() <= 1e-12


def test_orthogonality_to_local_basis(rng):
    sp = BipartiteSpace(3, 2)
    H_int = canonical_decompose(gue_hamiltonian(6, rng), sp).H_int
    for i in range(3):
        for j in range(3):
            E_ij = np.zeros((3, 3)); E_ij[i, j] = 1
            assert abs(np.trace(H_int @ tensor(E_ij, np.eye(2)))) <= 1e-12
    for i in range(2):
        for j in range(2):
            E_ij = np.zeros((2, 2)); E_ij[i, j] = 1
            assert abs(np.trace(H_int @ tensor(np.eye(3), E_ij))) <= 1e-12


def test_strength_examples(rng):
    assert interaction_strength(ZZ) == pytest.approx(1)
    assert interaction_strength(np.zeros((4, 4))) == 0
    H = random_interaction(BipartiteSpace(2, 3), rng)
    assert abs(interaction_strength(3 * H) - 3) <= 1e-9
    assert delta_strength(ZZ) == pytest.approx(2)
    assert delta_strength(np.eye(4)) == pytest.approx(0)
    assert delta_strength(np.diag([5.0, 1, 1, 1])) == pytest.approx(4)


def test_delta_sdp_examples():
    assert delta_sdp_check(ZZ) == pytest.approx(2, abs=1e-10)
    value, lam = delta_sdp_check(np.diag([5.0, 1, 1, 1]), return_shift=True)
    assert value == pytest.approx(4, abs=1e-10)
    assert lam == pytest.approx(3, abs=1e-8)


def test_delta_sdp_matches_closed_form():
    r = SeededRng(32)
    for k in range(100):
        H = gue_hamiltonian(8, r.child(k))
        assert abs(delta_sdp_check(H) - delta_strength(H)) <= 1e-8


def test_delta_at_most_twice_norm():
    r = SeededRng(33)
    sp = BipartiteSpace(2, 4)
    for k in range(200):
        H = canonical_decompose(gue_hamiltonian(8, r.child(k)), sp).H_int
        assert delta_strength(H) <= 2 * interaction_strength(H) + 1e-12


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1), st.floats(-5, 5))
def test_decomposition_property(d_S, d_E, seed, mu):
    sp = BipartiteSpace(d_S, d_E)
    H = gue_hamiltonian(sp.dim, SeededRng(seed))
    dec = canonical_decompose(H, sp)
    _check_invariants(dec, H)
    shifted = canonical_decompose(H + mu * np.eye(sp.dim), sp)
    assert np.abs(shifted.H_int - dec.H_int).max() <= 1e-12 * max(1.0, abs(mu))
    assert shifted.c == pytest.approx(dec.c + mu)
