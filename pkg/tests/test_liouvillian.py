"""Generator structure: trace annihilation, hermiticity, adjoint pairing,
and agreement between the matrix-free action and the vectorized form."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lindpair import hilbert as hb
from lindpair.liouvillian import (Liouvillian, LindbladTerm, dissipator_apply,
                                  materialize_superoperator,
                                  sparse_superoperator, trace_row_indices,
                                  MAX_SUPEROP_DIM)


def _random_model(seed: int, dim_b: int = 3):
    """Spin x oscillator pair with random hermitian H and two jumps."""
    rng = np.random.default_rng(seed)
    sp = hb.space(hb.spin(), hb.oscillator(dim_b))
    d = sp.total_dim
    X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    H = hb.Operator(sp, 0.5 * (X + X.conj().T))
    sm, _, _ = hb.mk_spin_ops(hb.spin())
    b = hb.mk_destroy(hb.oscillator(dim_b))
    terms = [LindbladTerm(hb.embed(sm, 0, sp), 0.5 + rng.uniform(0, 2)),
             LindbladTerm(hb.embed(b, 1, sp), 0.5 + rng.uniform(0, 2))]
    return Liouvillian(sp, H, terms), rng


def _random_state(rng, d):
    X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = X @ X.conj().T
    return rho / np.trace(rho).real


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_trace_annihilation(seed):
    L, rng = _random_model(seed)
    rho = _random_state(rng, L.dim)
    assert abs(np.trace(L.apply(rho))) <= 1e-12 * np.abs(L.apply(rho)).max()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_hermiticity_preservation(seed):
    L, rng = _random_model(seed)
    rho = _random_state(rng, L.dim)
    out = L.apply(rho)
    assert np.abs(out - out.conj().T).max() <= 1e-12 * np.abs(out).max()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_adjoint_pairing(seed):
    # Tr(Y^dag L(rho)) == Tr((L^dag Y)^dag rho) for arbitrary Y
    L, rng = _random_model(seed)
    d = L.dim
    rho = _random_state(rng, d)
    Y = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    lhs = np.trace(Y.conj().T @ L.apply(rho))
    rhs = np.trace(L.adjoint_apply(Y).conj().T @ rho)
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_matrix_free_matches_superoperator():
    L, rng = _random_model(11, dim_b=4)
    d = L.dim
    M = materialize_superoperator(L)
    rho = _random_state(rng, d)
    via_vec = (M @ rho.flatten(order="F")).reshape(d, d, order="F")
    direct = L.apply(rho)
    assert np.abs(via_vec - direct).max() <= 1e-12 * np.abs(direct).max()
    assert np.allclose(sparse_superoperator(L).toarray(), M)


def test_adjoint_of_identity_vanishes():
    L, _ = _random_model(5)
    out = L.adjoint_apply(np.eye(L.dim, dtype=complex))
    # unitality of the adjoint is trace preservation of the map
    assert np.abs(out).max() <= 1e-12


def test_dissipator_thermal_fixed_point():
    dim = 14
    sp = hb.space(hb.oscillator(dim))
    b = hb.embed(hb.mk_destroy(hb.oscillator(dim)), 0, sp)
    nbar = 0.4
    H = hb.Operator(sp, np.zeros((dim, dim), dtype=complex))
    L = Liouvillian(sp, H, [LindbladTerm(b, 1.0 * (nbar + 1)),
                            LindbladTerm(b.dagger(), 1.0 * nbar)])
    ratio = nbar / (nbar + 1)
    p = ratio ** np.arange(dim)
    p /= p.sum()
    rho = np.diag(p).astype(complex)
    # fixed up to the geometric weight leaking past the truncation
    assert np.abs(L.apply(rho)).max() <= 2 * ratio ** dim


def test_dissipator_apply_unit_rate():
    sp = hb.space(hb.spin())
    sm, _, _ = hb.mk_spin_ops(hb.spin())
    J = hb.embed(sm, 0, sp)
    rho = np.diag([0.0, 1.0]).astype(complex)
    out = dissipator_apply(J, rho)
    assert np.allclose(out, np.diag([1.0, -1.0]))


def test_trace_row_indices():
    d = 5
    rng = np.random.default_rng(0)
    rho = rng.normal(size=(d, d))
    vec = rho.flatten(order="F")
    assert np.isclose(vec[trace_row_indices(d)].sum(), np.trace(rho))


def test_negative_rate_rejected():
    sp = hb.space(hb.spin())
    sm, _, _ = hb.mk_spin_ops(hb.spin())
    with pytest.raises(ValueError):
        LindbladTerm(hb.embed(sm, 0, sp), -0.1)


def test_nonhermitian_hamiltonian_rejected():
    sp = hb.space(hb.spin())
    H = hb.Operator(sp, np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
    with pytest.raises(ValueError):
        Liouvillian(sp, H, [])


def test_superoperator_dimension_cap():
    dim = MAX_SUPEROP_DIM + 4
    sp = hb.space(hb.oscillator(dim))
    H = hb.Operator(sp, np.zeros((dim, dim), dtype=complex))
    L = Liouvillian(sp, H, [])
    with pytest.raises(ValueError):
        materialize_superoperator(L)
