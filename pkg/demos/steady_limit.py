"""Watch large-delta1 shots flatten toward the steady soliton and the
pancake regime.

As delta1 grows, the circle-side shot rescaled by p = 1/sqrt(delta1)
tracks the steady (lambda = 0) reference for a longer and longer time,
and in scaled variables the trajectory hugs the critical line that the
pancake limit singles out.  The script prints both convergence tables.
"""

import argparse

from solshoot import verify


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--delta1",
        type=float,
        nargs="+",
        default=(100.0, 1000.0, 10000.0),
        help="circle-side parameters, in increasing order",
    )
    args = parser.parse_args()

    print("rescaled comparison against the steady reference:")
    print(f"{'delta1':>10} {'p^2':>10} {'sup dev':>12} {'c_obs':>12}")
    for d1 in args.delta1:
        rep = verify.rescaled_bryant_compare(d1)
        print(
            f"{d1:>10.0f} {rep.p_squared:>10.2e} "
            f"{rep.sup_dev:>12.3e} {rep.c_obs:>12.6f}"
        )
    print("  (sup dev -> 0: the shot follows the steady soliton longer", flush=True)
    print("   as delta1 grows; c_obs stays order one)")

    print("\nscaled-variable traces at the xi = 10 event:")
    print(f"{'delta1':>10} {'|R-1|+|L2|':>14} {'|D+1|':>12} {'x_min':>10} {'E_min':>10}")
    for d1 in args.delta1:
        rep = verify.large_delta1_trace(d1)
        dev = abs(1.0 / rep.z - 1.0) + abs(rep.x) / rep.z
        print(
            f"{d1:>10.0f} {dev:>14.3e} {abs(rep.d_plus_1):>12.3e} "
            f"{rep.x_min:>10.2e} {rep.e_min:>10.2e}"
        )
    print("  (both deviation columns shrink by ~10x per decade of delta1;")
    print("   x and the eigenvalue monitor E never go negative)")


if __name__ == "__main__":
    main()
