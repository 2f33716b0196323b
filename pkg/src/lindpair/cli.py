"""Command-line front end.

Subcommands: ``run`` (time evolution to CSV), ``steady`` (fixed point,
reduced states and invariance norms), ``spectrum`` (eigenvalue tables),
``verify`` (invariant suite as JSON, exit code reflects pass/fail) and
``figure {1,2,3,4}`` (the standard parameter studies).  All time axes
are scaled by the model's reference rate and complex values are written
as re,im column pairs.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import hilbert as hb
from .evolve import certify_truncation, evolve, trace_norm
from .liouvillian import materialize_superoperator
from .models import BuiltModel, ModelConfig, build_model, model_steady, parse_config
from .moments import steady_spin_osc_excitation
from .sectors import (build_excitation_structure, check_decay_bound,
                      excitation_commutator, project_sector,
                      sector_pair_mask)
from .spectral import spin_eigensystem
from .steady import solve_steady


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_csv(path: Path, header: list, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {path}")


def _write_matrix_pair(out: Path, stem: str, mat: np.ndarray) -> None:
    for part, data in (("re", mat.real), ("im", mat.imag)):
        path = out / f"{stem}_{part}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            for row in data:
                w.writerow([f"{v:.16e}" for v in row])
        print(f"wrote {path}")


def _default_initial(bm: BuiltModel) -> np.ndarray:
    # equal superposition of the two lowest A levels, B in its ground
    # state: populates the l=1 sector so decay is visible
    dA = bm.es.space.total_dim
    dB = bm.L.dim // dA
    psiA = np.zeros(dA, dtype=complex)
    psiA[0] = psiA[1] = 1.0 / np.sqrt(2.0)
    psiB = np.zeros(dB, dtype=complex)
    psiB[0] = 1.0
    psi = np.kron(psiA, psiB)
    return np.outer(psi, psi.conj())


def _observables(bm: BuiltModel) -> dict:
    sp = bm.L.space
    obs = {}
    for idx, tag in ((0, "A"), (1, "B")):
        f = sp.factors[idx]
        if f.kind == hb.SPIN:
            _, _, sz = hb.mk_spin_ops(f)
            obs[f"sz_{tag}"] = hb.embed(sz, idx, sp).entries
        else:
            obs[f"n_{tag}"] = hb.embed(hb.mk_number(f), idx, sp).entries
    return obs


def cmd_run(args) -> int:
    bm = build_model(parse_config(args.config))
    out = _outdir(args)
    rate = bm.reference_rate
    t_max = args.t_max / rate
    t_grid = np.linspace(0.0, t_max, args.samples)
    obs = _observables(bm)
    masks = {1: sector_pair_mask(bm.es, bm.L.dim, 1)}
    rec = evolve(bm.L, _default_initial(bm), t_grid, observables=obs,
                 distance_target=bm.analytic_A_steady,
                 keep_factors=bm.a_factors, sector_masks=masks)
    header = [f"{bm.reference_name}_t"]
    cols = [rec.times * rate]
    for name, series in rec.observables.items():
        header += [f"{name}_re", f"{name}_im"]
        cols += [series.real, series.imag]
    header.append("dist_A_steady")
    cols.append(rec.trace_norm_distance_to_A_steady)
    header.append("sector1_norm")
    cols.append(rec.sector_pair_norms[1])
    _write_csv(out / "trajectory.csv", header,
               zip(*[np.asarray(c) for c in cols]))
    return 0


def cmd_steady(args) -> int:
    cfg = parse_config(args.config)
    bm = build_model(cfg)
    out = _outdir(args)
    report = model_steady(bm)
    rho = report.rho_st.entries
    _write_matrix_pair(out, "rho_st", rho)
    op = report.rho_st
    redA = hb.partial_trace(op, bm.a_factors).entries
    redB = hb.partial_trace(op, bm.b_factors).entries
    _write_matrix_pair(out, "rho_A", redA)
    _write_matrix_pair(out, "rho_B", redB)
    summary = {
        "residual": report.residual,
        "method": report.method,
        "clipped_weight": report.clipped_weight,
        "invariance_A": trace_norm(redA - bm.analytic_A_steady),
        "deviation_B": trace_norm(redB - bm.analytic_B_steady),
    }
    if args.trunc_check:
        def extractor(c: ModelConfig):
            m = build_model(c)
            r = model_steady(m)
            red = hb.partial_trace(r.rho_st, m.b_factors).entries
            nb = hb.mk_number(m.L.space.factors[1]).entries \
                if m.L.space.factors[1].kind == hb.OSCILLATOR else None
            if nb is None:
                return {"pop_B": float(red[1, 1].real)}
            return {"n_B": float(np.trace(nb @ red).real)}
        summary["truncation_shift"] = certify_truncation(cfg, extractor)
        report.truncation_shift = summary["truncation_shift"]
    path = out / "steady_summary.json"
    path.write_text(json.dumps(summary, indent=2) + "\n")
    print(f"wrote {path}")
    print(json.dumps(summary, indent=2))
    return 0


def cmd_spectrum(args) -> int:
    cfg = parse_config(args.config)
    bm = build_model(cfg)
    out = _outdir(args)
    rows = []
    fA = bm.L.space.factors[0]
    if fA.kind == hb.SPIN:
        gamma = cfg.gamma_A
        mbar = cfg.s_A if cfg.model == "two_spins" else cfg.s
        se = spin_eigensystem(gamma, mbar)
        labels = ["stationary", "population", "coherence_plus",
                  "coherence_minus"]
        for lab, lam in zip(labels, se.eigenvalues):
            rows.append(["A_analytic", lab, lam.real, lam.imag])
    else:
        kappa = bm.reference_rate
        for n in range(6):
            for k in range(-5, 6):
                rows.append(["A_analytic", f"n={n};k={k}",
                             -kappa * (n + abs(k) / 2.0), 0.0])
    if bm.L.dim <= 16:
        M = materialize_superoperator(bm.L)
        for lam in sorted(np.linalg.eigvals(M), key=lambda z: -z.real):
            rows.append(["full_numeric", "", lam.real, lam.imag])
    _write_csv(_outdir(args) / "spectrum.csv",
               ["family", "label", "re", "im"], rows)
    return 0


def cmd_verify(args) -> int:
    cfg = parse_config(args.config)
    bm = build_model(cfg)
    out = _outdir(args)
    rng = np.random.default_rng(11)
    d = bm.L.dim
    X = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = X @ X.conj().T
    rho /= np.trace(rho).real
    checks = []

    def add(name, value, tol):
        checks.append({"name": name, "value": float(value),
                       "tolerance": tol, "pass": bool(value <= tol)})

    Lr = bm.L.apply(rho)
    add("trace_annihilation", abs(np.trace(Lr)), 1e-12)
    add("hermiticity_preservation",
        np.abs(Lr - bm.L.apply(rho.conj().T).conj().T).max(), 1e-12)
    Y = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    lhs = np.trace(Y.conj().T @ Lr)
    rhs = np.trace(bm.L.adjoint_apply(Y).conj().T @ rho)
    add("adjoint_pairing", abs(lhs - rhs) / max(1.0, abs(lhs)), 1e-10)
    comm = excitation_commutator(bm.es, Lr) \
        - bm.L.apply(excitation_commutator(bm.es, rho))
    add("excitation_commutation",
        np.abs(comm).max() / max(np.abs(Lr).max(), 1e-300), 1e-10)
    v = bm.es.composite_excitation(d)
    ls = np.unique(v[:, None] - v[None, :])
    acc = np.zeros_like(rho)
    for l in ls:
        P = project_sector(bm.es, rho, int(l))
        acc += P
        add(f"sector_{l}_idempotent",
            np.abs(project_sector(bm.es, P, int(l)) - P).max(), 1e-12)
    add("sector_completeness", np.abs(acc - rho).max(), 1e-12)
    for l in (0, 1):
        lhs_m = project_sector(bm.es, Lr, l)
        rhs_m = bm.L.apply(project_sector(bm.es, rho, l))
        add(f"sector_{l}_preservation",
            np.abs(lhs_m - rhs_m).max() / max(np.abs(Lr).max(), 1e-300),
            1e-10)
    report = model_steady(bm)
    redA = hb.partial_trace(report.rho_st, bm.a_factors).entries
    add("steady_invariance_A", trace_norm(redA - bm.analytic_A_steady), 1e-7)
    add("steady_residual", report.residual, 1e-9)
    all_pass = all(c["pass"] for c in checks)
    payload = {"model": cfg.model, "checks": checks, "all_pass": all_pass}
    path = out / "verify.json"
    path.write_text(json.dumps(payload, indent=2) + "\n")
    print(f"wrote {path}")
    for c in checks:
        print(f"{'PASS' if c['pass'] else 'FAIL'} {c['name']}: "
              f"{c['value']:.3e} (tol {c['tolerance']:.1e})")
    return 0 if all_pass else 1


def _fig1(out: Path) -> None:
    omegas = (1.0, 10.0)
    grid = np.linspace(0.0, 10.0, 41)
    cols = {w: ([], []) for w in omegas}
    for w in omegas:
        for om in grid:
            cfg = ModelConfig(model="two_spins", omega=w, gamma_A=1.0,
                              gamma_B=1.0, s_A=0.8, s_B=0.6, Omega=float(om))
            bm = build_model(cfg)
            rep = model_steady(bm)
            sz = np.diag([-1.0, 1.0])
            rA = hb.partial_trace(rep.rho_st, (0,)).entries
            rB = hb.partial_trace(rep.rho_st, (1,)).entries
            cols[w][0].append(float(np.trace(sz @ rA).real))
            cols[w][1].append(float(np.trace(sz @ rB).real))
    header = ["Omega_over_gamma_A"]
    series = [grid]
    for w in omegas:
        header += [f"sz_A_omega{w:g}", f"sz_B_omega{w:g}"]
        series += [np.array(cols[w][0]), np.array(cols[w][1])]
    _write_csv(out / "fig1.csv", header, zip(*series))


def _fig2(out: Path) -> None:
    grid = np.linspace(0.0, 5.0, 51)
    header = ["Omega_over_gamma_A"]
    series = [grid]
    for wB in (1.0, 5.0):
        vals = []
        for om in grid:
            cfg = ModelConfig(model="spin_oscillator", omega_A=1.0,
                              omega_B=wB, gamma_A=1.0, gamma_B=1.0, s=0.5,
                              nbar=0.0, Omega=float(om), n_trunc=4)
            vals.append(steady_spin_osc_excitation(cfg))
        header.append(f"n_b_omegaB{wB:g}")
        series.append(np.array(vals))
    _write_csv(out / "fig2.csv", header, zip(*series))


def _fig3(out: Path) -> None:
    t_grid = np.linspace(0.0, 10.0, 201)
    series = [t_grid]
    header = ["gamma_A_t"]
    for om in (0.0, 5.0):
        cfg = ModelConfig(model="spin_oscillator", omega_A=10.0,
                          omega_B=10.0, gamma_A=1.0, gamma_B=1.0, s=0.5,
                          nbar=0.0, Omega=om, n_trunc=10)
        bm = build_model(cfg)
        rec = evolve(bm.L, _default_initial(bm), t_grid,
                     distance_target=bm.analytic_A_steady,
                     keep_factors=(0,))
        header.append(f"dist_Omega{om:g}")
        series.append(rec.trace_norm_distance_to_A_steady)
    header.append("bound_exp")
    series.append(np.exp(-t_grid / 2.0))
    _write_csv(out / "fig3.csv", header, zip(*series))


def _coherent(alpha: complex, dim: int) -> np.ndarray:
    from math import factorial
    v = np.array([alpha ** n / np.sqrt(factorial(n)) for n in range(dim)],
                 dtype=complex)
    v /= np.linalg.norm(v)
    return v


def _fig4(out: Path, t_max: float = 20.0, samples: int = 41,
          n_trunc: tuple = (12, 12)) -> dict:
    t_grid = np.linspace(0.0, t_max, samples)
    header = ["kappa_t"]
    series = [t_grid]
    final = {}
    for g in (0.0, 0.9):
        cfg = ModelConfig(model="optomechanical", omega=10.0, nu=1.5,
                          kappa=1.0, gamma=0.9, nbar=0.015, mbar=0.1,
                          g=g, n_trunc=n_trunc)
        bm = build_model(cfg)
        psi = np.kron(_coherent(0.15, n_trunc[0]),
                      _coherent(0.15, n_trunc[1]))
        rho0 = np.outer(psi, psi.conj())
        rec = evolve(bm.L, rho0, t_grid,
                     distance_target=bm.analytic_A_steady,
                     keep_factors=(0,), tol=1e-8)
        header.append(f"dist_g{g:g}")
        series.append(rec.trace_norm_distance_to_A_steady)
        final[g] = float(rec.trace_norm_distance_to_A_steady[-1])
    _write_csv(out / "fig4.csv", header, zip(*series))
    return final


def cmd_figure(args) -> int:
    out = _outdir(args)
    n = args.number
    if n == 1:
        _fig1(out)
    elif n == 2:
        _fig2(out)
    elif n == 3:
        _fig3(out)
    elif n == 4:
        _fig4(out)
    else:
        raise SystemExit(f"no figure {n}")
    return 0


def main(argv=None) -> int:
    p = argparse.ArgumentParser(
        prog="lindpair",
        description="coupled open-pair simulator (steady states, sector "
                    "decay, spectra, moment closures)")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config_required=True):
        if config_required:
            sp.add_argument("--config", required=True,
                            help="model config JSON path")
        sp.add_argument("--out", default="out", help="output directory")

    sp_run = sub.add_parser("run", help="evolve and record a trajectory")
    common(sp_run)
    sp_run.add_argument("--t-max", type=float, default=10.0,
                        help="horizon in units of the reference rate")
    sp_run.add_argument("--samples", type=int, default=101)
    sp_run.set_defaults(func=cmd_run)

    sp_st = sub.add_parser("steady", help="solve the composite fixed point")
    common(sp_st)
    sp_st.add_argument("--trunc-check", action="store_true",
                       help="re-solve at enlarged truncation and report "
                            "the shift")
    sp_st.set_defaults(func=cmd_steady)

    sp_sp = sub.add_parser("spectrum", help="eigenvalue tables as CSV")
    common(sp_sp)
    sp_sp.set_defaults(func=cmd_spectrum)

    sp_v = sub.add_parser("verify", help="invariant suite, JSON report")
    common(sp_v)
    sp_v.set_defaults(func=cmd_verify)

    sp_f = sub.add_parser("figure", help="standard parameter studies")
    sp_f.add_argument("number", type=int, choices=(1, 2, 3, 4))
    sp_f.add_argument("--out", default="out")
    sp_f.set_defaults(func=cmd_figure)

    args = p.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
