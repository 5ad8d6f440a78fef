"""Print measured error rates for every family: outer region, upper edge and the first zero.

Run with:  python demos/error_rates.py
"""

import math

from artifact.families import FAMILY_KINDS, build_error_table, make_family, predict_zero, true_zeros

NS = (50, 100, 200, 400)


def zero_slope(spec):
    errs = [abs(predict_zero(spec, N, 1) - true_zeros(spec, N)[0]) for N in NS]
    return math.log(errs[-1] / errs[0]) / math.log(NS[-1] / NS[0]), errs[-1]


def main():
    print(f"{'family':20s} {'outer slope':>12s} {'edge slope':>11s} {'zero slope':>11s} {'zero err N=400':>15s}")
    for kind in FAMILY_KINDS:
        spec = make_family(kind)
        e = spec.upper_edge
        # e + 1 is avoided: for wilson the 1/N coefficient vanishes near y = 2
        outer = build_error_table(spec, NS, [e + 0.5, e + 2.0], "outer")
        edge = build_error_table(spec, NS, [e], "airy-plus")
        zs, zerr = zero_slope(spec)
        print(f"{kind:20s} {outer.slope:12.3f} {edge.slope:11.3f} {zs:11.3f} {zerr:15.3e}")


if __name__ == "__main__":
    main()
