"""Meixner zeros inside the saturated region sit on the shifted lattice.

Run with:  python demos/saturated_zeros.py
"""

import numpy as np

from artifact.families import make_family, predict_zero, true_zeros


def main():
    spec = make_family("meixner", c=0.25, beta=1.0)
    for N in (50, 200):
        z = np.sort(true_zeros(spec, N))
        print(f"N={N}")
        for k in range(1, 6):
            lattice = predict_zero(spec, N, k, "saturated")
            midpoint = predict_zero(spec, N, k, "saturated", "family")
            near = z[np.argmin(np.abs(z - midpoint))]
            print(f"  k={k}  zero={z[k - 1]:.12f}  lattice gap={abs(z[k - 1] - lattice):.1e}"
                  f"  midpoint gap to nearest zero * N={N * abs(near - midpoint):.3f}")


if __name__ == "__main__":
    main()
