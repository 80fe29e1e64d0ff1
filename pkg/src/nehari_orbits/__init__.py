"""Periodic orbits with prescribed minimal period via a Nehari inf-max method.

Direct route: minimize m(e) = max_s psi(s e) for the action of x'' + V'(x) = 0
on a symmetric Fourier subspace.  Dual route: the same inf-max for the Clarke
dual action of z' = J H'(z) over the negative cone of its quadratic part.
"""
from .action import DirectActionContext, DualActionContext
from .certify import (
    check_hamiltonian_conditions,
    check_potential_conditions,
    infmax_audit,
    minimal_period_certificate,
)
from .fiber import FiberTolerances, fiber_profile, make_fiber, ray_maximum
from .models import builtin_hamiltonian, builtin_potential, fenchel_transform
from .nehari import SolverConfig, minimize_sphere, newton_refine, recover_orbit
from .pipeline import solve_direct, solve_dual
from .symfun import Symmetry, make_space

__all__ = [
    "DirectActionContext",
    "DualActionContext",
    "FiberTolerances",
    "SolverConfig",
    "Symmetry",
    "builtin_hamiltonian",
    "builtin_potential",
    "check_hamiltonian_conditions",
    "check_potential_conditions",
    "fenchel_transform",
    "fiber_profile",
    "infmax_audit",
    "make_fiber",
    "make_space",
    "minimal_period_certificate",
    "minimize_sphere",
    "newton_refine",
    "ray_maximum",
    "recover_orbit",
    "solve_direct",
    "solve_dual",
]
