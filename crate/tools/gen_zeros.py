"""Generate ordinates of the nontrivial zeta zeros on the critical line.

Scans the Riemann-Siegel Z function for sign changes on a fine grid,
refines each bracket with Brent's method, and cross-checks the total
count against mpmath's Turing-method zero counter plus a sample of
mpmath.zetazero values.

Usage: python3 tools/gen_zeros.py T_MAX OUTPUT
"""

import sys

import mpmath
from scipy.optimize import brentq

Z = mpmath.fp.siegelz


def scan(t_max, step=0.02):
    zeros = []
    t0 = 10.0
    z0 = Z(t0)
    t = t0
    while t < t_max:
        t1 = t + step
        z1 = Z(t1)
        if z0 == 0.0:
            zeros.append(t)
        elif z0 * z1 < 0.0:
            zeros.append(brentq(Z, t, t1, xtol=1e-12, rtol=1e-15, maxiter=200))
        t, z0 = t1, z1
    return zeros


def main():
    t_max = float(sys.argv[1])
    out = sys.argv[2]
    zeros = scan(t_max)
    expected = mpmath.nzeros(zeros[-1] + 1e-6)
    if expected != len(zeros):
        raise SystemExit(f"count mismatch: scanned {len(zeros)}, nzeros {expected}")
    for n in list(range(1, len(zeros) + 1, 97)) + [len(zeros)]:
        ref = float(mpmath.zetazero(n).imag)
        if abs(ref - zeros[n - 1]) > 1e-8:
            raise SystemExit(f"zero {n}: scanned {zeros[n - 1]} vs {ref}")
    with open(out, "w") as fh:
        for g in zeros:
            fh.write(f"{g:.9f}\n")
    print(f"wrote {len(zeros)} zeros up to {zeros[-1]:.6f}")


if __name__ == "__main__":
    main()
