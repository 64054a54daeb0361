"""Locate the round soliton as the meeting point of the two shooting maps.

One family of shots leaves the circle orbit (one parameter), the other
leaves the sphere orbit (two parameters); both are integrated to their
xi = 0 crossing and the difference of the crossing states is the mismatch
map whose zero is the soliton.  The script sweeps both maps near the zero,
runs the damped Newton iteration from a rough guess, and confirms the
curvature eigenvalues stay nonnegative along both shots of the root.
"""

import argparse
import math

import numpy as np

from solshoot import verify
from solshoot.shooting import (
    ROUND_DELTAS,
    find_root,
    mismatch,
    sample_curve,
    shoot_curve_point,
    shoot_surface_point,
)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--guess", type=float, nargs=3, default=(0.05, -0.8, 0.6))
    args = parser.parse_args()

    print("shots near the zero (circle side, delta1 sweep):")
    print(f"{'delta1':>10} {'l1':>10} {'l2':>10} {'r':>10} {'min eig':>10}")
    for s in sample_curve((0.02, 0.2), 7):
        print(
            f"{s.delta1:>10.4f} {s.meet.l1:>10.5f} {s.meet.l2:>10.5f} "
            f"{s.meet.r:>10.5f} {min(s.eig_min):>10.5f}"
        )

    print(f"\nnewton from {tuple(args.guess)}:")
    res = find_root(tuple(args.guess))
    d1, d2, d3 = res.root
    print(f"  root     = ({d1:.9f}, {d2:.9f}, {d3:.9f})")
    print(f"  residual = {res.residual:.2e} after {res.iterations} iterations")
    exact = ROUND_DELTAS
    print(f"  exact    = (1/18, -7/9, 1/sqrt(3))")
    print(f"            ({exact[0]:.9f}, {exact[1]:.9f}, {exact[2]:.9f})")
    err = max(abs(a - b) for a, b in zip(res.root, exact))
    print(f"  distance = {err:.2e}")

    f = mismatch(*exact)
    print(f"\nmismatch at the exact parameters: |F|_inf = {f.inf_norm:.2e}")

    print("\ncurvature along the two shots of the root:")
    for name, traj in (
        ("circle side", shoot_curve_point(exact[0])[1]),
        ("sphere side", shoot_surface_point(exact[1], exact[2])[1]),
    ):
        rep = verify.max_principle_report(traj)
        sp = verify.sign_profile(traj)
        changes = sum(len(c) for c in sp.sign_changes)
        print(
            f"  {name}: min k_t1 = {rep.min_k_t1:.7f}, "
            f"min k_s = {rep.min_k_s:.7f}, sign changes = {changes}"
        )
    third = 1.0 / 3.0
    print(f"  (the round metric has every eigenvalue = 1/3 = {third:.7f})")


if __name__ == "__main__":
    main()
