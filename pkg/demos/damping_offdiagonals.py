"""Why the steady state of pure damping carries no off-diagonal weight.

A would-be stationary matrix element on diagonal l generates, through
the three-term recurrence, a sequence r_n whose partial sums grow
without bound (they dominate a 1/(n+1) Stirling-type floor), while the
trace norm caps any admissible sequence.  The only way out is a zero
seed.  The demo prints the recurrence at several damping ratios, checks
the epsilon = 0 closed form, and plots the divergence of the sums.
"""

import numpy as np

from lindpair import damping_recurrence, off_diagonal_witness
from lindpair import pure_damping_recurrence


def main():
    n_max = 2000

    # the diagonal, by contrast, is an honest geometric distribution
    diag = pure_damping_recurrence(1.0, 0.4, 30)
    print(f"diagonal at gamma2/gamma1 = 0.4: rho_0 = {diag[0]:.6f}, "
          f"ratio check {diag[5] / diag[4]:.6f}")

    curves = {}
    for eps in (0.0, 0.3, 0.7):
        r, sums, lower = off_diagonal_witness(eps, 1, n_max)
        curves[eps] = (r, sums, lower)
        print(f"epsilon = {eps:3.1f}: r_{n_max} = {r[-1]:.4e}, "
              f"partial sum {sums[-1]:.2f}, floor margin "
              f"{(r / lower).min():.4f}")

    # positive epsilon can only increase every term: the expansion
    # coefficients of r_n in epsilon are all positive
    rec = damping_recurrence(1.0, 0.5, 2, 12)
    print("\nexact expansion coefficients of r_n (l = 2):")
    for n in (1, 3, 6):
        row = ", ".join(f"{float(c):.5f}" for c in rec.coeffs[n])
        print(f"  n = {n}: [{row}]")

    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.4))
    ns = np.arange(n_max + 1)
    for eps, (r, sums, lower) in curves.items():
        ax1.loglog(ns + 1, r, lw=1, label=rf"$\epsilon={eps:g}$")
        ax2.semilogx(ns + 1, sums, lw=1, label=rf"$\epsilon={eps:g}$")
    ax1.loglog(ns + 1, lower, "k--", lw=1, label="Stirling floor")
    ax1.set_xlabel("n + 1")
    ax1.set_ylabel(r"$r_n$")
    ax1.legend(fontsize=8)
    ax2.set_xlabel("n + 1")
    ax2.set_ylabel(r"$\sum_{m \leq n} r_m$")
    ax2.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig("damping_offdiagonals.png", dpi=150)
    print("wrote damping_offdiagonals.png")


if __name__ == "__main__":
    main()
