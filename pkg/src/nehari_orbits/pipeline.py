"""End-to-end solve + certify for the direct and dual formulations."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .action import DirectActionContext, DualActionContext
from .certify import (
    Certificate,
    CertificateThresholds,
    ConditionReport,
    PeriodTolerances,
    check_hamiltonian_conditions,
    check_potential_conditions,
    energy_drift,
    infmax_audit,
    minimal_period_certificate,
    ode_residual,
)
from .models import FenchelPair, HamiltonianModel, PotentialModel, fenchel_transform
from .nehari import Candidate, Orbit, SolverConfig, direct_orbit, minimize_sphere, newton_refine, recover_orbit
from .symfun import Symmetry, make_space

__all__ = ["ConditionFailure", "SolveResult", "solve_direct", "solve_dual", "refined_candidate"]


class ConditionFailure(RuntimeError):
    """The model fails a hypothesis audit and the run was not forced."""

    def __init__(self, report: ConditionReport):
        super().__init__(f"condition check failed: {', '.join(report.failed)}")
        self.report = report


@dataclass
class SolveResult:
    kind: str
    ctx: object
    candidate: Candidate
    orbit: Orbit
    certificate: Certificate
    fine_value: float | None = None
    extras: dict = field(default_factory=dict)

    @property
    def value(self) -> float:
        return self.candidate.value

    @property
    def amplitude(self) -> float:
        return self.orbit.amplitude


def refined_candidate(ctx, solver: SolverConfig) -> Candidate:
    cand = minimize_sphere(ctx, solver)
    return newton_refine(ctx, cand, solver.newton_tolerance(ctx.kind), solver.newton_max_iter)


def _truncation(value_coarse, make_ctx, num_modes, solver):
    fine = refined_candidate(make_ctx(2 * num_modes), solver)
    rel = abs(fine.value - value_coarse) / max(abs(value_coarse), 1e-300)
    return fine, rel


def solve_direct(potential: PotentialModel, period_T: float, num_modes: int = 8,
                 symmetry=Symmetry.E1, solver: SolverConfig | None = None,
                 audit_rays: int = 100, check_conditions: bool = True, force: bool = False,
                 truncation_check: bool = True, period_tol: PeriodTolerances | None = None,
                 thresholds: CertificateThresholds | None = None) -> SolveResult:
    """Inf-max solve of x'' + V'(x) = 0 on a symmetric subspace, then certify."""
    solver = solver or SolverConfig()
    report = check_potential_conditions(potential) if check_conditions else None
    if report is not None and report.failed and not force:
        raise ConditionFailure(report)

    def make_ctx(n):
        return DirectActionContext(make_space(period_T, potential.dim, symmetry, n), potential)

    ctx = make_ctx(num_modes)
    cand = refined_candidate(ctx, solver)
    orbit = direct_orbit(cand)
    fine = None
    trunc = None
    if truncation_check:
        fine, trunc = _truncation(cand.value, make_ctx, num_modes, solver)
    cert = Certificate(
        candidate=cand.summary(),
        ode_residual_sup=ode_residual(orbit, potential, relative=True),
        energy_drift=energy_drift(orbit, potential, relative=True),
        minimal_period=minimal_period_certificate(cand, period_tol, ctx, cand.value),
        infmax_audit=infmax_audit(ctx, cand, n_rays=audit_rays, seed=solver.seed),
        conditions=report,
        truncation_agreement=trunc,
        thresholds=thresholds or CertificateThresholds(),
        ode_residual_abs=ode_residual(orbit, potential),
        energy_drift_abs=energy_drift(orbit, potential),
    )
    res = SolveResult("direct", ctx, cand, orbit, cert, None if fine is None else fine.value)
    if fine is not None:
        res.extras["fine_amplitude"] = direct_orbit(fine).amplitude
    return res


def solve_dual(hamiltonian: HamiltonianModel | FenchelPair, period_T: float, num_modes: int = 16,
               solver: SolverConfig | None = None, audit_rays: int = 100,
               check_conditions: bool = True, force: bool = False, truncation_check: bool = True,
               period_tol: PeriodTolerances | None = None,
               thresholds: CertificateThresholds | None = None) -> SolveResult:
    """Inf-max solve of the dual action on S^-, recover z' = J H'(z), certify."""
    solver = solver or SolverConfig()
    pair = hamiltonian if isinstance(hamiltonian, FenchelPair) else fenchel_transform(hamiltonian)
    report = check_hamiltonian_conditions(pair) if check_conditions else None
    if report is not None and report.failed and not force:
        raise ConditionFailure(report)

    def make_ctx(n):
        return DualActionContext(make_space(period_T, pair.base.dim, Symmetry.FULL_MEANZERO, n), pair)

    ctx = make_ctx(num_modes)
    cand = refined_candidate(ctx, solver)
    orbit = recover_orbit(ctx, cand)
    fine = None
    trunc = None
    if truncation_check:
        fine, trunc = _truncation(cand.value, make_ctx, num_modes, solver)
    summary = cand.summary()
    summary["recovery_consistency"] = orbit.consistency
    summary["recovery_accepted"] = orbit.accepted
    summary["offset_xi"] = orbit.offset.tolist()
    cert = Certificate(
        candidate=summary,
        ode_residual_sup=ode_residual(orbit, pair.base, relative=True),
        energy_drift=energy_drift(orbit, pair.base, relative=True),
        minimal_period=minimal_period_certificate(cand, period_tol, ctx, cand.value),
        infmax_audit=infmax_audit(ctx, cand, n_rays=audit_rays, seed=solver.seed),
        conditions=report,
        truncation_agreement=trunc,
        thresholds=thresholds or CertificateThresholds(),
        ode_residual_abs=ode_residual(orbit, pair.base),
        energy_drift_abs=energy_drift(orbit, pair.base),
    )
    if not orbit.accepted:
        cert.candidate["refined"] = False
    res = SolveResult("dual", ctx, cand, orbit, cert, None if fine is None else fine.value)
    res.extras["radius_range"] = [float(np.min(np.linalg.norm(orbit.x, axis=1))),
                                  float(np.max(np.linalg.norm(orbit.x, axis=1)))]
    if fine is not None:
        res.extras["fine_amplitude"] = recover_orbit(make_ctx(2 * num_modes), fine).amplitude
    return res
