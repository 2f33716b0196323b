"""Excitation sectors of system A and the decay-bound machinery.

The total excitation operator of system A (number operators plus
spin-projector terms) has nonnegative integer eigenvalues, so a basis
index of the A factors carries an exact excitation count.  A composite
density matrix splits into sectors labelled by the difference l of the
row and column excitation; the generator of the coupled pair commutes
with this splitting, each sector relaxes on its own, and every l != 0
sector dies out at a rate set by the A-side damping alone.

All sector operations work on the flat composite index with system A as
the leading tensor factors; the B dimension is inferred from the state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg

from .evolve import evolve, trace_norm
from .hilbert import Operator, SpaceSpec, OSCILLATOR, SPIN
from .liouvillian import Liouvillian, sparse_superoperator

__all__ = [
    "ExcitationStructure",
    "build_excitation_structure",
    "excitation_commutator",
    "project_sector",
    "project_sector_pair",
    "sector_pair_mask",
    "sector_vec_indices",
    "sector_decay_rate",
    "check_decay_bound",
    "DecayBoundReport",
    "trotter_compare",
    "TrotterReport",
    "TROTTER_DIM_CAP",
]

# Sector superoperators are materialized dense only below this dimension.
TROTTER_DIM_CAP = 32

# Multiplicative slack on the decay bound, absorbing integrator error.
TOL_BOUND = 1e-6


@dataclass(frozen=True)
class ExcitationStructure:
    """Spectral data of the A-side excitation operator.

    ``space`` covers only the A factors; ``VA`` is the diagonal
    excitation operator; ``sectors`` maps each integer eigenvalue to the
    A-basis indices spanning it; ``exc`` is the per-index eigenvalue
    array the maps are derived from.
    """

    space: SpaceSpec
    VA: Operator
    sectors: dict[int, tuple[int, ...]]
    exc: np.ndarray

    def composite_excitation(self, total_dim: int) -> np.ndarray:
        """Excitation count per composite basis index (A leading)."""
        dA = self.space.total_dim
        if total_dim % dA != 0:
            raise ValueError("total dimension not divisible by A dimension")
        return np.repeat(self.exc, total_dim // dA)

    @property
    def max_excitation(self) -> int:
        return int(self.exc.max())


def build_excitation_structure(spaceA: SpaceSpec) -> ExcitationStructure:
    """Diagonalize the A-side excitation operator by construction.

    The operator is a sum of embedded number operators (oscillators) and
    excited-state projectors (spins); it is diagonal in the product
    basis with integer entries, so sectors come from exact integer
    comparison, never float thresholds.
    """
    counts = []
    for f in spaceA.factors:
        if f.kind == OSCILLATOR:
            counts.append(np.arange(f.dim))
        elif f.kind == SPIN:
            counts.append(np.array([0, 1]))
        else:
            raise ValueError(f"unsupported factor kind {f.kind!r}")
    exc = np.zeros(1, dtype=int)
    for c in counts:
        exc = (exc[:, None] + c[None, :]).reshape(-1)
    VA = Operator(spaceA, np.diag(exc.astype(complex)))
    sectors: dict[int, tuple[int, ...]] = {}
    for v in np.unique(exc):
        sectors[int(v)] = tuple(int(i) for i in np.nonzero(exc == v)[0])
    return ExcitationStructure(spaceA, VA, sectors, exc)


def _composite_exc(es: ExcitationStructure, rho: np.ndarray) -> np.ndarray:
    d = rho.shape[0]
    if rho.shape != (d, d):
        raise ValueError("state must be a square matrix")
    return es.composite_excitation(d)


def excitation_commutator(es: ExcitationStructure, rho) -> np.ndarray:
    """Commutator ``[VA x 1, rho]`` on the composite space.

    VA is diagonal, so the commutator is a row/column scaling; a block
    with excitation difference l is an eigenvector with eigenvalue l.
    """
    rho = np.asarray(getattr(rho, "entries", rho), dtype=complex)
    v = _composite_exc(es, rho)
    return v[:, None] * rho - rho * v[None, :]


def project_sector(es: ExcitationStructure, rho, l: int) -> np.ndarray:
    """Keep only blocks with row excitation minus column excitation = l."""
    rho = np.asarray(getattr(rho, "entries", rho), dtype=complex)
    v = _composite_exc(es, rho)
    mask = (v[:, None] - v[None, :]) == l
    return np.where(mask, rho, 0.0)


def project_sector_pair(es: ExcitationStructure, rho, l: int) -> np.ndarray:
    """Keep the +-l sector pair (l >= 1); maps hermitian to hermitian."""
    if l < 1:
        raise ValueError("sector pair projector needs l >= 1")
    rho = np.asarray(getattr(rho, "entries", rho), dtype=complex)
    v = _composite_exc(es, rho)
    mask = np.abs(v[:, None] - v[None, :]) == l
    return np.where(mask, rho, 0.0)


def sector_pair_mask(es: ExcitationStructure, total_dim: int,
                     l: int) -> np.ndarray:
    """Boolean entry mask of the +-l sector pair at a given total dim."""
    v = es.composite_excitation(total_dim)
    if l == 0:
        return (v[:, None] - v[None, :]) == 0
    return np.abs(v[:, None] - v[None, :]) == l


def sector_vec_indices(es: ExcitationStructure, total_dim: int,
                       l: int) -> np.ndarray:
    """Column-stacked vec indices of sector l (row exc - col exc = l)."""
    v = es.composite_excitation(total_dim)
    diff = v[:, None] - v[None, :]
    # vec index of entry (i, j) in column-major stacking is i + j*d
    ii, jj = np.nonzero(diff == l)
    return ii + jj * total_dim


def _a_unit_costs(model) -> list:
    """Per-unit decay costs of the A factors: (cost, capacity) pairs.

    Spins supply at most one excitation unit at cost gamma/2; an
    oscillator supplies unlimited units at kappa/2 each.
    """
    costs = getattr(model, "a_unit_costs", None)
    if costs is not None:
        return list(costs)
    cfg = getattr(model, "cfg", model)
    name = getattr(cfg, "model", None)
    if name in ("two_spins", "spin_oscillator"):
        return [(cfg.gamma_A / 2.0, 1)]
    if name == "optomechanical":
        return [(cfg.kappa / 2.0, None)]
    raise ValueError("cannot derive A-side unit costs from this model")


def sector_decay_rate(model, l: int) -> float:
    """Largest real part eta_l of the A damping restricted to sector l.

    For a single spin eta_{+-1} = -gamma_A/2; for a single oscillator
    eta_l = -kappa*|l|/2.  A composite A side distributes the |l|
    excitation units over its factors at the cheapest total per-unit
    cost (spins capped at one unit each); dense sector spectra confirm
    the formula in the tests.
    """
    units = abs(int(l))
    if units == 0:
        return 0.0
    pools = _a_unit_costs(model)
    unit_costs = []
    unbounded = [c for c, cap in pools if cap is None]
    for c, cap in pools:
        if cap is not None:
            unit_costs.extend([c] * cap)
    if unbounded:
        cheapest = min(unbounded)
        unit_costs.extend([cheapest] * units)
    unit_costs.sort()
    if len(unit_costs) < units:
        raise ValueError(f"sector {l} exceeds the A-side excitation range")
    return -float(sum(unit_costs[:units]))


@dataclass
class DecayBoundReport:
    """Measured sector norms against their exponential bounds."""

    times: np.ndarray
    measured: dict[int, np.ndarray]
    bounds: dict[int, np.ndarray]
    rates: dict[int, float]
    max_ratio: dict[int, float]


def _eligible_ls(model) -> list:
    es: ExcitationStructure = model.es
    cap = 0
    for f in es.space.factors:
        cap += 1 if f.kind == SPIN else f.dim - 2
    return [l for l in range(1, es.max_excitation + 1) if l <= cap]


def check_decay_bound(model, rho0, t_grid,
                      ls: Sequence[int] | None = None,
                      tol_bound: float = TOL_BOUND) -> DecayBoundReport:
    """Verify ``|Q_l rho(t)|_1 <= e^{eta_l t} |Q_l rho(0)|_1`` on a grid.

    Sectors touching the truncated top of an oscillator ladder are
    excluded by default (l above N_trunc - 2 per oscillator factor),
    since the cut ladder distorts their rates.  A violation beyond the
    multiplicative slack ``tol_bound`` (plus a 1e-12 absolute floor for
    identically zero sectors) raises RuntimeError.
    """
    L: Liouvillian = model.L
    es: ExcitationStructure = model.es
    rho0 = np.asarray(getattr(rho0, "entries", rho0), dtype=complex)
    if ls is None:
        ls = _eligible_ls(model)
    d = L.dim
    masks = {l: sector_pair_mask(es, d, l) for l in ls}
    rec = evolve(L, rho0, t_grid, sector_masks=masks)
    t = rec.times - rec.times[0]
    measured, bounds, rates, ratios = {}, {}, {}, {}
    for l in ls:
        eta = sector_decay_rate(model, l)
        start = rec.sector_pair_norms[l][0]
        bound = np.exp(eta * t) * start
        meas = rec.sector_pair_norms[l]
        measured[l], bounds[l], rates[l] = meas, bound, eta
        limit = bound * (1.0 + tol_bound) + 1e-12
        if np.any(meas > limit):
            i = int(np.argmax(meas - limit))
            raise RuntimeError(
                f"decay bound violated in sector {l} at t={rec.times[i]:.6g}: "
                f"{meas[i]:.12g} > {bound[i]:.12g}")
        ratios[l] = float(np.max(meas / np.maximum(bound, 1e-300)))
    return DecayBoundReport(rec.times.copy(), measured, bounds, rates, ratios)


@dataclass
class TrotterReport:
    """Splitting errors of the sector-restricted propagator."""

    errors: dict[int, float]
    fitted_order: float | None
    max_error: float
    split_commutator_max: float


def sector_generator_matrix(L: Liouvillian, es: ExcitationStructure,
                            l: int) -> np.ndarray:
    """Dense superoperator of L restricted to sector l (vec indices)."""
    d = L.dim
    if d > TROTTER_DIM_CAP:
        raise ValueError(f"sector materialization capped at dim {TROTTER_DIM_CAP}")
    idx = sector_vec_indices(es, d, l)
    M = sparse_superoperator(L).toarray()
    return M[np.ix_(idx, idx)]


def trotter_compare(model, l: int, t: float,
                    N_list: Sequence[int]) -> TrotterReport:
    """Error of the split propagator against the exact sector exponential.

    Splits the sector-l generator into the A-damping part and the rest,
    and measures ``max-norm((e^{A t/N} e^{rest t/N})^N - e^{full t})``
    for each N.  The fitted order is the log-slope between the last two
    N values (None when the split commutes and errors sit at the noise
    floor).  Matrix exponentials use scaling-and-squaring.
    """
    L: Liouvillian = model.L
    es: ExcitationStructure = model.es
    if L.dim > TROTTER_DIM_CAP:
        raise ValueError(f"trotter_compare capped at dim {TROTTER_DIM_CAP}")
    N_list = sorted(int(n) for n in N_list)
    if len(N_list) < 1 or N_list[0] < 1:
        raise ValueError("N_list must contain positive integers")
    MA = sector_generator_matrix(model.LA_dissipative, es, l)
    Mfull = sector_generator_matrix(L, es, l)
    Mrest = Mfull - MA
    comm = MA @ Mrest - Mrest @ MA
    exact = scipy.linalg.expm(Mfull * t)
    errors = {}
    for N in N_list:
        step = scipy.linalg.expm(MA * (t / N)) @ scipy.linalg.expm(Mrest * (t / N))
        errors[N] = float(np.abs(np.linalg.matrix_power(step, N) - exact).max())
    max_error = max(errors.values())
    fitted = None
    if max_error >= 1e-12 and len(N_list) >= 2:
        n1, n2 = N_list[-2], N_list[-1]
        if errors[n2] > 0:
            fitted = float(np.log(errors[n1] / errors[n2])
                           / np.log(n2 / n1))
    return TrotterReport(errors, fitted, max_error,
                         float(np.abs(comm).max()))
