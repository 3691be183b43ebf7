"""Compare the two readings of the factor Laplacians in the mixed scalar curvature identity.

"leaf" takes the Laplacian of rho_i on the leaf through the point (metric
rho_j(p)^2 g_i); "factor" takes it on (M_i, g_i).  Only the leaf reading
makes the identity hold once the opposite warping function is not 1.

    python scripts/leaf_vs_factor_laplacian.py --products 30
"""

import argparse
from dataclasses import dataclass

import numpy as np

from dwpgeom.corpus import random_doubly_warped, sample_box
from dwpgeom.warped import mixed_scalar_identity_residual


@dataclass
class Config:
    products: int = 30
    seed: int = 1


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--products", type=int, default=Config.products)
    ap.add_argument("--seed", type=int, default=Config.seed)
    cfg = Config(**vars(ap.parse_args(argv)))
    rng = np.random.default_rng(cfg.seed)
    res = {"leaf": [], "factor": []}
    for _ in range(cfg.products):
        n1, n2 = (int(v) for v in rng.integers(1, 3, size=2))
        dwp = random_doubly_warped(rng, n1, n2)
        p = sample_box(rng, n1 + n2, 1)[0]
        for kind in res:
            res[kind].append(mixed_scalar_identity_residual(dwp, p, kind)[2])
    for kind, vals in res.items():
        v = np.array(vals)
        print(f"{kind:7s} residual: max {v.max():.3e}  median {np.median(v):.3e}")


if __name__ == "__main__":
    main()
