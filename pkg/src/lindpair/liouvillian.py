"""Lindblad generators: matrix-free application and dense materialization.

A generator is stored as a hamiltonian plus weighted jump operators,

    L(rho) = -i [H, rho] + sum_j r_j ( J_j rho J_j^dag
                                       - (J_j^dag J_j rho + rho J_j^dag J_j) / 2 ).

Repeated application reuses the non-hermitian drift
``K = -i H - (1/2) sum_j r_j J_j^dag J_j`` held in sparse form, so one
call costs a handful of sparse-dense products instead of a superoperator
matvec.  Dense superoperators (column-stacking convention,
``A rho B -> kron(B^T, A) vec(rho)``) are only materialized for small
spaces, where they feed spectra, sector restrictions and null-space
steady-state solves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .hilbert import Operator, SpaceSpec

__all__ = [
    "LindbladTerm",
    "Liouvillian",
    "dissipator_apply",
    "liouvillian_apply",
    "liouvillian_adjoint_apply",
    "materialize_superoperator",
    "sparse_superoperator",
    "trace_row_indices",
    "MAX_SUPEROP_DIM",
    "TOL_TRACE",
]

# Dense superoperators grow as dim^4; refuse beyond this Hilbert dimension.
MAX_SUPEROP_DIM = 64

# Trace of L(rho) must vanish to this tolerance relative to |rho|_max.
TOL_TRACE = 1e-12


@dataclass(frozen=True)
class LindbladTerm:
    """One dissipation channel: jump operator with a nonnegative rate."""

    jump_op: Operator
    rate: float

    def __post_init__(self):
        if self.rate < 0:
            raise ValueError(f"negative rate {self.rate}")


@dataclass(eq=False)
class Liouvillian:
    """Markovian generator on a composite space.

    Parameters
    ----------
    space : SpaceSpec
        Space the generator acts on.
    hamiltonian : Operator
        Hermitian part; checked against :func:`Operator.is_hermitian`.
    terms : sequence of LindbladTerm
        Dissipation channels.
    """

    space: SpaceSpec
    hamiltonian: Operator
    terms: tuple[LindbladTerm, ...]
    _drift: sp.csr_matrix = field(init=False, repr=False, default=None)
    _jumps: tuple = field(init=False, repr=False, default=None)

    def __init__(self, space: SpaceSpec, hamiltonian: Operator,
                 terms: Sequence[LindbladTerm] = ()):
        if hamiltonian.space != space:
            raise ValueError("hamiltonian acts on a different space")
        if not hamiltonian.is_hermitian():
            raise ValueError("hamiltonian is not hermitian")
        for t in terms:
            if t.jump_op.space != space:
                raise ValueError("jump operator acts on a different space")
        self.space = space
        self.hamiltonian = hamiltonian
        self.terms = tuple(terms)
        self._build_cache()

    def _build_cache(self):
        d = self.space.total_dim
        K = -1j * self.hamiltonian.entries.copy()
        jumps = []
        for t in self.terms:
            J = t.jump_op.entries
            K -= 0.5 * t.rate * (J.conj().T @ J)
            jumps.append((sp.csr_matrix(J), sp.csr_matrix(J.conj().T), t.rate))
        self._drift = sp.csr_matrix(K)
        self._jumps = tuple(jumps)

    @property
    def dim(self) -> int:
        return self.space.total_dim

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """L(rho) for a dense matrix ``rho`` (no superoperator assembly)."""
        # K rho + rho K^dag; the second product comes from (K rho^dag)^dag
        # so both go through the same sparse drift.
        out = self._drift @ rho
        out = out + (self._drift @ rho.conj().T).conj().T
        for J, Jd, r in self._jumps:
            out += r * _sandwich(J, Jd, rho)
        return out

    def adjoint_apply(self, X: np.ndarray) -> np.ndarray:
        """Heisenberg-picture generator acting on an observable."""
        H = self.hamiltonian.entries
        out = 1j * (H @ X - X @ H)
        for t in self.terms:
            J = t.jump_op.entries
            JdJ = J.conj().T @ J
            out += t.rate * (J.conj().T @ X @ J - 0.5 * (JdJ @ X + X @ JdJ))
        return out


def _sandwich(J: sp.csr_matrix, Jd: sp.csr_matrix, rho: np.ndarray) -> np.ndarray:
    # J rho J^dag with sparse factors on both sides; the right factor is
    # applied through a transpose to keep sparse-times-dense ordering.
    left = J @ rho
    return (Jd.T @ left.T).T


def dissipator_apply(jump: Operator, rho: np.ndarray) -> np.ndarray:
    """Single dissipator ``D[J] rho`` at unit rate."""
    J = jump.entries
    rho = np.asarray(rho, dtype=complex)
    JdJ = J.conj().T @ J
    return J @ rho @ J.conj().T - 0.5 * (JdJ @ rho + rho @ JdJ)


def liouvillian_apply(L: Liouvillian, rho: np.ndarray) -> np.ndarray:
    """Schroedinger-picture action ``L(rho)``."""
    return L.apply(np.asarray(rho, dtype=complex))


def liouvillian_adjoint_apply(L: Liouvillian, X: np.ndarray) -> np.ndarray:
    """Heisenberg-picture action ``L^dag(X)``.

    Satisfies ``Tr(X^dag L(rho)) = Tr((L^dag X)^dag rho)`` for all
    arguments, which the tests check against random pairs.
    """
    return L.adjoint_apply(np.asarray(X, dtype=complex))


def sparse_superoperator(L: Liouvillian) -> sp.csr_matrix:
    """Column-stacking superoperator as a sparse matrix (any dimension).

    ``vec`` is column-major flattening, so ``A rho B`` maps to
    ``kron(B^T, A)``.
    """
    d = L.dim
    I = sp.identity(d, format="csr")
    H = sp.csr_matrix(L.hamiltonian.entries)
    M = -1j * (sp.kron(I, H, format="csr") - sp.kron(H.T, I, format="csr"))
    for t in L.terms:
        J = sp.csr_matrix(t.jump_op.entries)
        JdJ = (J.conj().T @ J).tocsr()
        M = M + t.rate * (
            sp.kron(J.conj(), J, format="csr")
            - 0.5 * sp.kron(I, JdJ, format="csr")
            - 0.5 * sp.kron(JdJ.T, I, format="csr")
        )
    return M.tocsr()


def materialize_superoperator(L: Liouvillian) -> np.ndarray:
    """Dense column-stacking superoperator, refused above ``MAX_SUPEROP_DIM``.

    The dense matrix satisfies
    ``(M @ rho.flatten(order="F")).reshape(d, d, order="F") == L(rho)``
    to machine precision; tests compare both routes on random inputs.
    """
    d = L.dim
    if d > MAX_SUPEROP_DIM:
        raise ValueError(
            f"refusing dense superoperator at dim {d} > {MAX_SUPEROP_DIM}")
    return sparse_superoperator(L).toarray()


def trace_row_indices(d: int) -> np.ndarray:
    """Flat vec indices of the diagonal, i.e. the trace functional row."""
    return np.arange(d) * (d + 1)
