"""Sweep the period of x'' = -x^3 and compare with the cn-orbit oracle.

The minimal-period-T orbit is x = A cn(A t, 1/2) with A = 4K / T, and its
action is A^4 T / 12, so c_T scales like T^-3.

    python3 scripts/quartic_sweep.py --periods 0.5 1 2 4 --modes 8
"""
import argparse
from scipy.special import ellipk

from nehari_orbits import SolverConfig, builtin_potential, solve_direct


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--periods", type=float, nargs="+", default=[0.5, 1.0, 2.0, 4.0])
    p.add_argument("--modes", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    four_k = 4 * ellipk(0.5)
    model = builtin_potential("power", {"beta": 4})
    print(f"{'T':>8} {'c_T':>18} {'oracle':>18} {'rel err':>9} {'A':>12} {'A*':>12} {'cert':>5}")
    for T in args.periods:
        res = solve_direct(model, T, num_modes=args.modes, solver=SolverConfig(seed=args.seed))
        A = four_k / T
        oracle = A**4 * T / 12
        rel = abs(res.value - oracle) / oracle
        print(f"{T:8.4f} {res.value:18.10f} {oracle:18.10f} {rel:9.1e} "
              f"{res.amplitude:12.8f} {A:12.8f} {str(res.certificate.certified):>5}")
    if len(args.periods) > 1:
        T0, T1 = args.periods[0], args.periods[-1]
        print(f"predicted c ratio (T0/T1)^3 = {(T0 / T1) ** 3:.6g}")
    print(f"4K(1/sqrt 2) = {four_k:.16f}")


if __name__ == "__main__":
    main()
