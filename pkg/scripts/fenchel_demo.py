"""Numerical convex conjugates against closed forms.

For H = |z|^beta / beta the conjugate is G = |y|^alpha / alpha with
1/alpha + 1/beta = 1; the table reports the worst relative error over a
log-spaced radial range, and the Young equality gap at random points.

    python3 scripts/fenchel_demo.py --betas 3 4 6
"""
import argparse

import numpy as np

from nehari_orbits import builtin_hamiltonian, fenchel_transform


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--betas", type=float, nargs="+", default=[2.5, 3.0, 4.0, 6.0])
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    rng = np.random.default_rng(args.seed)
    print(f"{'beta':>6} {'alpha':>8} {'max rel err':>12} {'Young gap':>10}")
    for beta in args.betas:
        H = builtin_hamiltonian("power", {"beta": beta})
        pair = fenchel_transform(H)
        d = rng.standard_normal((args.points, 2))
        y = d / np.linalg.norm(d, axis=1, keepdims=True)
        y *= np.geomspace(1e-2, 1e2, args.points)[:, None]
        exact = np.linalg.norm(y, axis=1) ** pair.alpha / pair.alpha
        err = np.max(np.abs(pair.G(y) - exact) / exact)
        x = rng.uniform(-10, 10, (args.points, 2))
        g = H.grad(x)
        xg = np.sum(x * g, axis=1)
        young = np.max(np.abs(pair.G(g) + H.H(x) - xg) / (1 + np.abs(xg)))
        print(f"{beta:6.2f} {pair.alpha:8.5f} {err:12.2e} {young:10.2e}")


if __name__ == "__main__":
    main()
