"""Time evolution with trajectory records, trace norms and truncation checks.

``evolve`` integrates ``drho/dt = L(rho)`` on a sample grid and records
requested scalar observables, the trace-norm distance of the reduced
state of the first subsystem to a supplied target, and the norms of
selected excitation-difference blocks.  The trace of the state is
monitored along the way: drift beyond 1e-6 aborts the run, since it
signals a truncation or step-size problem rather than physics.

``trace_norm`` follows the two-branch contract: matrices that are
hermitian up to 1e-8 (relative max-norm) are hermitized and diagonalized
with cyclic Jacobi rotations; anything else falls back to singular
values.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from ._integrate import integrate_adaptive
from .hilbert import Operator, partial_trace
from .liouvillian import Liouvillian

__all__ = [
    "TrajectoryRecord",
    "evolve",
    "trace_norm",
    "certify_truncation",
]

# Relative asymmetry below which trace_norm takes the hermitian branch.
HERM_BRANCH_TOL = 1e-8

# Trace drift that aborts an evolution.
TRACE_ABORT = 1e-6


def _jacobi_eigvals(A: np.ndarray, need_vectors: bool = False,
                    max_sweeps: int = 100):
    """Eigenvalues of a hermitian matrix by cyclic Jacobi rotations.

    Sweeps zero each off-diagonal entry in turn with a complex plane
    rotation; quadratic convergence makes a dozen sweeps plenty at the
    dimensions used here.  Raises after ``max_sweeps`` without reaching
    the off-diagonal floor.
    """
    A = np.array(A, dtype=complex)
    n = A.shape[0]
    V = np.eye(n, dtype=complex) if need_vectors else None
    if n == 1:
        w = A.real.diagonal().copy()
        return (w, V) if need_vectors else w
    fro = np.linalg.norm(A)
    floor = 1e-14 * max(fro, 1e-300)
    for sweep in range(max_sweeps):
        # measure the off-diagonal mass directly; the norm-difference
        # formula cancels catastrophically near convergence
        offmat = A.copy()
        np.fill_diagonal(offmat, 0.0)
        off = np.linalg.norm(offmat)
        if off <= floor:
            w = A.diagonal().real.copy()
            order = np.argsort(w)
            if need_vectors:
                return w[order], V[:, order]
            return w[order]
        # skip tiny entries only during early sweeps; later sweeps must
        # rotate everything or rounding remnants stall the iteration
        thresh = (off / n) * 1e-3 if sweep < 4 else 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                g = abs(apq)
                if g <= thresh or g == 0.0:
                    continue
                phase = apq / g
                tau = (A[q, q].real - A[p, p].real) / (2.0 * g)
                if tau == 0.0:
                    t = 1.0
                elif abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # columns: A <- A R, with R[p,p]=c, R[p,q]=s*phase,
                # R[q,p]=-s*conj(phase), R[q,q]=c
                col_p = A[:, p].copy()
                col_q = A[:, q].copy()
                A[:, p] = c * col_p - s * np.conj(phase) * col_q
                A[:, q] = s * phase * col_p + c * col_q
                # rows: A <- R^dag A
                row_p = A[p, :].copy()
                row_q = A[q, :].copy()
                A[p, :] = c * row_p - s * phase * row_q
                A[q, :] = s * np.conj(phase) * row_p + c * row_q
                A[p, q] = 0.0
                A[q, p] = 0.0
                if need_vectors:
                    vc_p = V[:, p].copy()
                    vc_q = V[:, q].copy()
                    V[:, p] = c * vc_p - s * np.conj(phase) * vc_q
                    V[:, q] = s * phase * vc_p + c * vc_q
    raise RuntimeError("Jacobi eigen-iteration did not converge")


def trace_norm(X) -> float:
    """Trace norm ``Tr sqrt(X^dag X)``.

    Hermitian inputs (up to relative asymmetry 1e-8) go through the
    Jacobi eigensolver on the hermitized part; general matrices use
    singular values.
    """
    arr = np.asarray(getattr(X, "entries", X), dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("trace_norm needs a square matrix")
    scale = np.abs(arr).max()
    if scale == 0.0:
        return 0.0
    if np.abs(arr - arr.conj().T).max() <= HERM_BRANCH_TOL * scale:
        herm = 0.5 * (arr + arr.conj().T)
        w = _jacobi_eigvals(herm)
        return float(np.abs(w).sum())
    return float(np.linalg.svd(arr, compute_uv=False).sum())


@dataclass
class TrajectoryRecord:
    """Sampled evolution output.

    ``times`` is the raw sample grid (callers rescale by a reference
    rate for plotting); ``observables`` maps names to complex series;
    ``trace_norm_distance_to_A_steady`` holds the distance of the
    reduced state of subsystem A to the supplied target, when requested;
    ``sector_pair_norms`` maps an excitation difference ``l`` to the
    trace norm of the corresponding +-l block pair along the trajectory.
    """

    times: np.ndarray
    observables: dict[str, np.ndarray]
    trace_norm_distance_to_A_steady: np.ndarray | None
    sector_pair_norms: dict[int, np.ndarray]
    final_state: np.ndarray
    states: list[np.ndarray] | None = None


def evolve(L: Liouvillian, rho0, t_grid,
           observables: Mapping[str, object] | None = None,
           distance_target: np.ndarray | None = None,
           keep_factors: tuple[int, ...] = (0,),
           sector_masks: Mapping[int, np.ndarray] | None = None,
           tol: float = 1e-10,
           store_states: bool = False) -> TrajectoryRecord:
    """Integrate the master equation over ``t_grid``.

    Parameters
    ----------
    L : Liouvillian
        Generator.
    rho0 : Operator or ndarray
        Initial state at ``t_grid[0]``; trace must be 1 within 1e-8.
    t_grid : array
        Strictly increasing sample times.
    observables : mapping, optional
        Name to operator; records ``Tr(O rho)`` at each sample.
    distance_target : ndarray, optional
        Reference reduced state; when given, the trace-norm distance of
        ``Tr_partial(rho)`` over ``keep_factors`` is recorded.
    sector_masks : mapping, optional
        ``l -> boolean matrix``; records ``trace_norm(rho * mask)``.
    store_states : bool
        Keep every sampled density matrix (memory permitting).
    """
    rho = np.asarray(getattr(rho0, "entries", rho0), dtype=complex).copy()
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 1 or np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    if abs(np.trace(rho).real - 1.0) > 1e-8 or abs(np.trace(rho).imag) > 1e-8:
        raise ValueError("initial state is not normalized")

    obs_items = list((observables or {}).items())
    obs_mats = [np.asarray(getattr(o, "entries", o), dtype=complex)
                for _, o in obs_items]
    masks = {int(l): np.asarray(m, dtype=bool)
             for l, m in (sector_masks or {}).items()}

    n_samp = len(t_grid)
    obs_out = {name: np.empty(n_samp, dtype=complex) for name, _ in obs_items}
    dist_out = np.empty(n_samp) if distance_target is not None else None
    sector_out = {l: np.empty(n_samp) for l in masks}
    states = [] if store_states else None

    def record(i: int, state: np.ndarray):
        tr = np.trace(state)
        if abs(tr - 1.0) > TRACE_ABORT:
            raise RuntimeError(
                f"trace drifted to {tr:.12g} at sample {i}; aborting")
        for (name, _), mat in zip(obs_items, obs_mats):
            obs_out[name][i] = np.trace(mat @ state)
        if dist_out is not None:
            red = partial_trace(Operator(L.space, state), keep_factors)
            dist_out[i] = trace_norm(red.entries - distance_target)
        for l, mask in masks.items():
            sector_out[l][i] = trace_norm(np.where(mask, state, 0.0))
        if states is not None:
            states.append(state.copy())

    record(0, rho)
    rhs = lambda t, y: L.apply(y)
    for i in range(1, n_samp):
        rho = integrate_adaptive(rhs, rho, t_grid[i - 1], t_grid[i], tol=tol)
        record(i, rho)

    return TrajectoryRecord(
        times=t_grid.copy(),
        observables=obs_out,
        trace_norm_distance_to_A_steady=dist_out,
        sector_pair_norms=sector_out,
        final_state=rho,
        states=states,
    )


def certify_truncation(cfg, quantity_extractor: Callable[[object], object],
                       enlarge: int = 5) -> float:
    """Re-run a quantity at enlarged oscillator truncation.

    ``quantity_extractor(cfg)`` must return a float or a mapping of
    floats.  Every oscillator truncation in ``cfg`` is raised by
    ``enlarge`` and the largest relative change is returned; values
    below 1e-6 are considered converged.  Configurations without an
    oscillator return 0.0.
    """
    trunc = getattr(cfg, "n_trunc", None)
    if trunc is None:
        return 0.0
    if isinstance(trunc, int):
        bumped = trunc + enlarge
    else:
        bumped = tuple(int(n) + enlarge for n in trunc)
    base = quantity_extractor(cfg)
    wide = quantity_extractor(dataclasses.replace(cfg, n_trunc=bumped))
    if not isinstance(base, Mapping):
        base, wide = {"value": base}, {"value": wide}
    shift = 0.0
    for key, v1 in base.items():
        v2 = wide[key]
        denom = max(abs(complex(v1)), 1e-300)
        shift = max(shift, abs(complex(v2) - complex(v1)) / denom)
    return shift
