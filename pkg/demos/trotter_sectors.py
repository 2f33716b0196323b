"""Splitting the sector propagator into A damping and everything else.

When system A is a single spin, its damping commutes with the rest of
the generator inside each fixed-difference sector, so the split
propagator is exact for any step count.  With an oscillator on the A
side the commutator is nonzero and the first-order splitting error
shrinks like 1/N.  Both behaviours fall out of trotter_compare.
"""

import numpy as np

from lindpair import build_model, parse_config, trotter_compare


def main():
    # spin A: commuting split, error at the noise floor for any N
    cfg = parse_config(dict(
        model="spin_oscillator", omega_A=1.0, omega_B=1.0,
        gamma_A=1.0, gamma_B=1.0, s=0.4, nbar=0.1,
        Omega=0.7, n_trunc=12))
    bm = build_model(cfg)
    rep = trotter_compare(bm, 1, 1.0, [2, 4, 8])
    print("spin-oscillator, sector l = 1:")
    print(f"  split commutator max {rep.split_commutator_max:.2e}")
    for N, e in sorted(rep.errors.items()):
        print(f"  N = {N}: error {e:.2e}")
    print(f"  fitted order: {rep.fitted_order}")

    # oscillator A: noncommuting split, clean first-order scaling
    cfg2 = parse_config(dict(
        model="optomechanical", omega=1.0, nu=1.5, kappa=1.0,
        gamma=0.9, nbar=0.2, mbar=0.1, g=0.6, n_trunc=(4, 4)))
    bm2 = build_model(cfg2)
    Ns = [4, 8, 16, 32, 64]
    rep2 = trotter_compare(bm2, 1, 1.0, Ns)
    print("\noptomechanical, sector l = 1:")
    print(f"  split commutator max {rep2.split_commutator_max:.2e}")
    for N in Ns:
        print(f"  N = {N:2d}: error {rep2.errors[N]:.3e}")
    print(f"  fitted order: {rep2.fitted_order:.3f}")

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return

    fig, ax = plt.subplots(figsize=(4.6, 3.4))
    errs = [rep2.errors[N] for N in Ns]
    ax.loglog(Ns, errs, "C1o-", label="measured")
    ax.loglog(Ns, errs[0] * Ns[0] / np.asarray(Ns, float), "k--", lw=1,
              label=r"$\propto 1/N$")
    ax.set_xlabel("steps N")
    ax.set_ylabel("propagator error (max norm)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig("trotter_sectors.png", dpi=150)
    print("wrote trotter_sectors.png")


if __name__ == "__main__":
    main()
