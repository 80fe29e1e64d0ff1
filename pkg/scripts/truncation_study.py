"""How the inf-max value and the orbit residual converge with the mode budget.

Direct quartic at T = 1 (E1 cosines) and the dual circle at T = 2 pi.

    python3 scripts/truncation_study.py --direct 2 4 8 16 --dual 4 8 16
"""
import argparse
import math

from nehari_orbits import builtin_hamiltonian, builtin_potential, solve_direct, solve_dual


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--direct", type=int, nargs="*", default=[2, 4, 8, 16])
    p.add_argument("--dual", type=int, nargs="*", default=[4, 8, 16])
    args = p.parse_args()

    quartic = builtin_potential("power", {"beta": 4})
    print("direct quartic, T = 1")
    print(f"{'modes':>6} {'c_T':>20} {'ode abs':>10} {'ode rel':>10} {'trunc':>10}")
    for n in args.direct:
        r = solve_direct(quartic, 1.0, num_modes=n, audit_rays=20)
        c = r.certificate
        print(f"{n:6d} {r.value:20.12f} {c.ode_residual_abs:10.2e} {c.ode_residual_sup:10.2e} "
              f"{c.truncation_agreement:10.2e}")

    H = builtin_hamiltonian("power", {"beta": 4})
    print("\ndual circle, T = 2 pi (exact value pi / 2)")
    print(f"{'modes':>6} {'Phi':>20} {'|Phi - pi/2|':>13} {'radius range':>26}")
    for n in args.dual:
        r = solve_dual(H, 2 * math.pi, num_modes=n, audit_rays=20, truncation_check=False)
        lo, hi = r.extras["radius_range"]
        print(f"{n:6d} {r.value:20.15f} {abs(r.value - math.pi / 2):13.2e} {lo:12.9f} .. {hi:12.9f}")


if __name__ == "__main__":
    main()
