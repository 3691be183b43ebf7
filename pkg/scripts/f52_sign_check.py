"""Which sign of the f5,2 term reproduces the assembled curvature of anti-invariant planes?

For random synthetic structures this compares the pairwise sum of the
assembled sectional curvatures against the closed form with both signs.

    python scripts/f52_sign_check.py --trials 200
"""

import argparse

import numpy as np

from dwpgeom.contact import DIVIDED_KEYS, random_pointwise_structure
from dwpgeom.inequalities import plane_restrictions, tau_plane_closed_form, tau_plane_pairwise


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=3)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    err = {"+f52": 0.0, "-f52 (printed)": 0.0}
    for _ in range(args.trials):
        k = int(rng.integers(2, 5))
        m = int(rng.integers(k, 5))
        ps, F = random_pointwise_structure(rng, m)
        coeffs = dict(zip(DIVIDED_KEYS, rng.normal(size=7)))
        basis = (F[:, :m] @ rng.normal(size=(m, k))).T
        _, h, a = plane_restrictions(ps, basis)
        direct = tau_plane_pairwise(coeffs, ps, basis)
        err["+f52"] = max(err["+f52"], abs(tau_plane_closed_form(coeffs, h, a) - direct))
        err["-f52 (printed)"] = max(err["-f52 (printed)"],
                                    abs(tau_plane_closed_form(coeffs, h, a, printed_f52_sign=True) - direct))
    for sign, e in err.items():
        print(f"{sign:15s} max |closed form - pairwise| = {e:.3e}")


if __name__ == "__main__":
    main()
