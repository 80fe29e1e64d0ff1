"""Verification of solved orbits and audits of the model hypotheses.

Nothing here proves anything. Residuals are sup norms on the quadrature
grid and hypotheses are judged from sampled points and ladder trends.  Every failing verdict carries a concrete witness.
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .action import DirectActionContext, DualActionContext, symplectic_matrix
from .fiber import FiberStatus, FiberTolerances, fiber_profile, make_fiber, ray_maximum
from .models import (
    FenchelError,
    FenchelPair,
    HamiltonianModel,
    PotentialModel,
    fit_growth_exponent,
    sphere_directions,
)
from .nehari import Orbit, random_direction
from .symfun import TrajectoryCoeffs, basis_matrix, compress, frequency_mass

__all__ = [
    "Verdict",
    "ConditionVerdict",
    "ConditionReport",
    "SamplingPlan",
    "PeriodTolerances",
    "PeriodVerdict",
    "AuditReport",
    "Certificate",
    "CertificateThresholds",
    "ode_residual",
    "energy_drift",
    "minimal_period_certificate",
    "infmax_audit",
    "check_potential_conditions",
    "check_hamiltonian_conditions",
    "check_fiber_conditions",
]


# ---------------------------------------------------------------------------
# orbit residuals


def ode_residual(orbit: Orbit, model, relative: bool = False) -> float:
    """sup_t |x'' + V'(x)| for a potential, sup_t |x' - J H'(x)| for a Hamiltonian.

    With ``relative`` the residual is divided by max(1, sup_t |force|), the
    force being V'(x) or J H'(x); the equations are not scale invariant, so an
    absolute bound means different things for large and small orbits.
    """
    if isinstance(model, PotentialModel):
        if orbit.xddot is None:
            raise ValueError("second-order residual needs acceleration samples")
        force = -model.grad(orbit.x)
        r = orbit.xddot - force
    elif isinstance(model, HamiltonianModel):
        J = symplectic_matrix(model.dim)
        force = model.grad(orbit.x) @ J.T
        r = orbit.xdot - force
    else:
        raise TypeError(f"unsupported model type {type(model).__name__}")
    res = float(np.max(np.linalg.norm(r, axis=1)))
    if relative:
        res /= max(1.0, float(np.max(np.linalg.norm(force, axis=1))))
    return res


def energy_drift(orbit: Orbit, model, relative: bool = False) -> float:
    """max_t |E(t) - E(0)|, E = |x'|^2/2 + V(x) (or H(x) for a Hamiltonian).

    With ``relative`` the drift is divided by max(1, |E(0)|).
    """
    if isinstance(model, PotentialModel):
        E = 0.5 * np.sum(orbit.xdot**2, axis=1) + model.V(orbit.x)
    else:
        E = model.H(orbit.x)
    drift = float(np.max(np.abs(E - E[0])))
    return drift / max(1.0, abs(float(E[0]))) if relative else drift


# ---------------------------------------------------------------------------
# minimal period


@dataclass(frozen=True)
class PeriodTolerances:
    tol_mass: float = 1e-8   # relative coefficient mass counted as active
    tol_sub: float = 1e-3    # subperiod violation threshold, times sup |x|
    K: int = 8               # subperiods T/k tested for k = 2..K


class PeriodStatus(str, enum.Enum):
    CERTIFIED = "CERTIFIED"
    REFUTED = "REFUTED"
    INDETERMINATE = "INDETERMINATE"


@dataclass
class PeriodVerdict:
    status: PeriodStatus
    period_T: float
    certified_T: float | None
    active_frequency_gcd: int
    spectral_ok: bool
    time_domain_ok: bool
    subperiod_rejections: list
    lemma_margins: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.status is PeriodStatus.CERTIFIED

    @property
    def minimal_period(self) -> float:
        return self.period_T / self.active_frequency_gcd

    def as_dict(self) -> dict:
        d = asdict(self)
        d["status"] = self.status.value
        return d


def _active_gcd(masses: dict, tol: float) -> int:
    total = math.sqrt(sum(v * v for v in masses.values()))
    if total == 0:
        return 0
    g = 0
    for k, v in masses.items():
        if v > tol * total:
            g = math.gcd(g, k)
    return g


def _lemma_margins(ctx, x: TrajectoryCoeffs, value: float, K: int) -> list:
    """Fiber maxima of the k-fold iterates x(k t), minus the candidate value.

    An iterate has the same potential part and a k^2 (direct) or 1/k (dual)
    rescaled quadratic part, so a genuine inf-max point must lose to it.
    """
    out = []
    for k in range(2, K + 1):
        z = compress(x, k)
        if isinstance(ctx, DirectActionContext):
            zctx = DirectActionContext(z.space, ctx.potential)
        else:
            zctx = DualActionContext(z.space, ctx.pair, ctx.tol_cone)
        prof, _ = ray_maximum(zctx, z.coeffs)
        out.append({"k": k, "fiber_max": prof.value, "margin": prof.value - value})
    return out


def minimal_period_certificate(x, tol: PeriodTolerances | None = None, ctx=None,
                               value: float | None = None) -> PeriodVerdict:
    """Certify that T is the minimal period of a trajectory.

    (a) The gcd of the active raw frequencies must be 1; the gcd is recomputed
    with the mass threshold moved by a factor 10 either way, and disagreement
    gives INDETERMINATE.  (b) For every k = 2..K the shift by T/k must move
    the orbit by more than tol_sub * sup|x|.  With ``ctx`` and ``value`` the
    rescaling margins m(x(k.)) - value are reported as well.
    """
    tol = tol or PeriodTolerances()
    x = getattr(x, "point", x)
    sp = x.space
    T = sp.period_T
    masses = frequency_mass(x)
    g = _active_gcd(masses, tol.tol_mass)
    if g == 0:
        raise ValueError("the zero trajectory has no minimal period")
    variants = {_active_gcd(masses, tol.tol_mass * f) for f in (0.1, 10.0)}
    t = sp.grid.times
    X = basis_matrix(sp, t) @ x.coeffs
    amp = float(np.max(np.linalg.norm(X, axis=1)))
    rejections = []
    for k in range(2, tol.K + 1):
        Xs = basis_matrix(sp, t + T / k) @ x.coeffs
        viol = float(np.max(np.linalg.norm(Xs - X, axis=1)))
        rejections.append({"k": k, "violation": viol, "rejected": viol > tol.tol_sub * amp})
    time_ok = all(r["rejected"] for r in rejections)
    if variants != {g}:
        status = PeriodStatus.INDETERMINATE
    elif g == 1 and time_ok:
        status = PeriodStatus.CERTIFIED
    else:
        status = PeriodStatus.REFUTED
    margins = []
    if ctx is not None and value is not None:
        margins = _lemma_margins(ctx, x, value, tol.K)
    return PeriodVerdict(status, T, T if status is PeriodStatus.CERTIFIED else None, g,
                         g == 1, time_ok, rejections, margins)


# ---------------------------------------------------------------------------
# inf-max audit


@dataclass
class AuditReport:
    rays_tested: int
    min_margin: float
    self_margin: float
    self_consistent: bool
    worst: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def infmax_audit(ctx, candidate, n_rays: int = 100, seed: int = 0,
                 extra_rays=(), local_scales=(1e-3, 1e-2, 1e-1),
                 self_tol: float = 1e-8) -> AuditReport:
    """min over audited rays of m(e) - Phi(candidate).

    Half the budget goes to global random directions (in P^- for the dual
    action), half to random perturbations of the candidate direction at the
    given scales, which are the rays most likely to undercut it.
    """
    rng = np.random.default_rng(seed)
    point = getattr(candidate, "point", candidate)
    c = point.coeffs
    value = ctx.value(c)
    prof, e0 = ray_maximum(ctx, c)
    self_margin = prof.value - value
    rays = [np.asarray(r, dtype=float).reshape(ctx.space.shape) for r in extra_rays]
    n_global = n_rays // 2
    rays += [random_direction(ctx, rng) for _ in range(n_global)]
    for i in range(n_rays - n_global):
        v = rng.standard_normal(ctx.space.shape)
        eps = local_scales[i % len(local_scales)]
        rays.append(e0 + eps * v / ctx.norm(v))
    worst = {"margin": math.inf}
    for i, r in enumerate(rays):
        p, _ = ray_maximum(ctx, r)
        margin = p.value - value
        if margin < worst["margin"]:
            worst = {"ray": i, "margin": margin, "status": p.status.value}
    ok = abs(self_margin) <= self_tol * max(1.0, abs(value))
    return AuditReport(len(rays), worst["margin"], self_margin, ok, worst)


# ---------------------------------------------------------------------------
# hypothesis audits


class Verdict(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass
class ConditionVerdict:
    name: str
    verdict: Verdict
    margin: float = math.nan
    witness: dict | None = None
    detail: str = ""

    def as_dict(self) -> dict:
        d = asdict(self)
        d["verdict"] = self.verdict.value
        return d


@dataclass
class ConditionReport:
    kind: str
    conditions: dict = field(default_factory=dict)

    def add(self, v: ConditionVerdict):
        self.conditions[v.name] = v

    @property
    def passed(self) -> bool:
        return all(v.verdict is Verdict.PASS for v in self.conditions.values())

    @property
    def failed(self) -> list:
        return [k for k, v in self.conditions.items() if v.verdict is Verdict.FAIL]

    def __getitem__(self, name) -> ConditionVerdict:
        return self.conditions[name]

    def as_dict(self) -> dict:
        return {"kind": self.kind, "passed": self.passed,
                "conditions": {k: v.as_dict() for k, v in self.conditions.items()}}


@dataclass(frozen=True)
class SamplingPlan:
    small_radii: tuple = tuple(np.geomspace(1e-8, 1e-1, 8))
    large_radii: tuple = tuple(np.geomspace(1e1, 1e6, 6))
    n_dirs: int = 32
    n_interior: int = 200
    interior_radius: float = 10.0
    eps1: float = 1e-3        # (V1) threshold at the smallest radius
    big: float = 1e3          # (V2) threshold at the largest radius
    min_decay_slope: float = 0.05
    ratio_slack: float = 1e-9
    s_grid: tuple = tuple(np.geomspace(1e-3, 1e3, 64))
    seed: int = 0


def _ladder(f, dirs, radii, reduce):
    r = np.asarray(radii, dtype=float)
    vals = np.asarray(f(r[:, None, None] * dirs[None]), dtype=float)
    if not np.all(np.isfinite(vals)):
        i, j = np.argwhere(~np.isfinite(vals))[0]
        return None, {"x": (r[i] * dirs[j]).tolist(), "value": float(vals[i, j])}
    return reduce(vals / r[:, None] ** 2, axis=1), None


def _vanishing_ratio(name, f, dirs, plan) -> ConditionVerdict:
    """lim_{x -> 0} f(x)/|x|^2 = 0, judged on the small-radius ladder."""
    radii = np.asarray(plan.small_radii)
    R, bad = _ladder(f, dirs, radii, np.max)
    if R is None:
        return ConditionVerdict(name, Verdict.FAIL, witness=bad, detail="non-finite value")
    decreasing = bool(np.all(np.diff(R) > plan.ratio_slack * np.abs(R[1:])))
    threshold = bool(R[0] < plan.eps1)
    slope = float(np.polyfit(np.log(radii), np.log(np.maximum(R, 1e-300)), 1)[0])
    power_decay = decreasing and slope >= plan.min_decay_slope
    witness = {"radius": float(radii[0]), "ratio": float(R[0]), "slope": slope}
    if decreasing and (threshold or power_decay):
        return ConditionVerdict(name, Verdict.PASS, float(plan.eps1 - R[0]), witness)
    if not decreasing and not threshold:
        i = int(np.argmin(np.diff(R)))
        witness.update(r_small=float(radii[i]), ratio_small=float(R[i]),
                       r_large=float(radii[i + 1]), ratio_large=float(R[i + 1]))
        return ConditionVerdict(name, Verdict.FAIL, float(plan.eps1 - R[0]), witness,
                                "ratio f(x)/|x|^2 does not decrease to 0 as x -> 0")
    return ConditionVerdict(name, Verdict.INCONCLUSIVE, float(plan.eps1 - R[0]), witness,
                            "trend and threshold disagree")


def _diverging_ratio(name, f, dirs, radii, plan, reverse=False) -> ConditionVerdict:
    """lim f(x)/|x|^2 = +inf along the ladder (towards small radii if ``reverse``).

    Passes on the threshold, or on a divergence trend: increasing ratios whose
    increments per ladder step do not decay (logarithmic divergence is slow
    enough to miss any fixed threshold at desk-scale radii).
    """
    radii = np.asarray(radii, dtype=float)
    if reverse:
        radii = radii[::-1]
    R, bad = _ladder(f, dirs, radii, np.min)
    if R is None:
        return ConditionVerdict(name, Verdict.FAIL, witness=bad, detail="non-finite value")
    inc = np.diff(R)
    increasing = bool(np.all(inc > plan.ratio_slack * np.abs(R[1:])))
    threshold = bool(R[-1] > plan.big)
    sustained = increasing and inc[-1] >= 0.5 * inc.max()
    witness = {"radius": float(radii[-1]), "ratio": float(R[-1])}
    if increasing and (threshold or sustained):
        return ConditionVerdict(name, Verdict.PASS, float(R[-1] - plan.big), witness)
    if not increasing:
        i = int(np.argmin(inc))
        witness.update(r_from=float(radii[i]), ratio_from=float(R[i]),
                       r_to=float(radii[i + 1]), ratio_to=float(R[i + 1]))
        return ConditionVerdict(name, Verdict.FAIL, float(R[-1] - plan.big), witness,
                                "ratio f(x)/|x|^2 does not grow along the ladder")
    return ConditionVerdict(name, Verdict.INCONCLUSIVE, float(R[-1] - plan.big), witness,
                            "ratio grows but increments decay")


def _sample_points(dim, plan, rng, dirs):
    interior = rng.uniform(-plan.interior_radius, plan.interior_radius, (plan.n_interior, dim))
    radii = np.concatenate([plan.small_radii, plan.large_radii])
    ladder = (radii[:, None, None] * dirs[None]).reshape(-1, dim)
    pts = np.vstack([interior, ladder])
    return pts[np.linalg.norm(pts, axis=1) > 0]


def check_potential_conditions(model: PotentialModel, plan: SamplingPlan | None = None) -> ConditionReport:
    """Sampled audit of (V1)-(V4) for a potential."""
    plan = plan or SamplingPlan()
    rng = np.random.default_rng(plan.seed)
    dirs = sphere_directions(model.dim, plan.n_dirs, rng)
    rep = ConditionReport("potential")
    rep.add(_vanishing_ratio("V1", model.V, dirs, plan))
    rep.add(_diverging_ratio("V2", model.V, dirs, plan.large_radii, plan))

    pts = _sample_points(model.dim, plan, rng, dirs)
    with np.errstate(all="ignore"):
        g = model.grad(pts)
        H = np.stack([model.hess(p) for p in pts])
    lhs = np.sum(g * pts, axis=1)
    quad = np.einsum("ni,nij,nj->n", pts, H, pts)
    finite = np.isfinite(lhs) & np.isfinite(quad)
    if not finite.all():
        i = int(np.argmin(finite))
        rep.add(ConditionVerdict("V3", Verdict.FAIL, witness={"x": pts[i].tolist()},
                                 detail="non-finite derivative"))
    else:
        scale = np.abs(lhs) + np.abs(quad)
        gap = quad - lhs
        rel = gap / np.where(scale > 0, scale, 1.0)
        i_pos, i_gap = int(np.argmin(lhs)), int(np.argmin(rel))
        if lhs[i_pos] <= 0:
            rep.add(ConditionVerdict("V3", Verdict.FAIL, float(lhs[i_pos]),
                                     {"x": pts[i_pos].tolist(), "Vp_dot_x": float(lhs[i_pos])},
                                     "V'(x).x > 0 violated"))
        elif gap[i_gap] < -plan.ratio_slack * scale[i_gap]:
            rep.add(ConditionVerdict("V3", Verdict.FAIL, float(rel[i_gap]),
                                     {"x": pts[i_gap].tolist(), "Vp_dot_x": float(lhs[i_gap]),
                                      "Vpp_xx": float(quad[i_gap])},
                                     "V'(x).x <= V''(x)x.x violated"))
        else:
            boundary = bool(np.max(np.abs(rel)) <= plan.ratio_slack)
            rep.add(ConditionVerdict("V3", Verdict.PASS, float(rel[i_gap]),
                                     {"x": pts[i_gap].tolist()},
                                     "equality V'(x).x = V''(x)x.x at every sample" if boundary else ""))

    Vp, Vm = model.V(pts), model.V(-pts)
    err = np.abs(Vp - Vm) / (1 + np.abs(Vp))
    i = int(np.argmax(err))
    if err[i] < 1e-10:
        rep.add(ConditionVerdict("V4", Verdict.PASS, float(1e-10 - err[i])))
    else:
        rep.add(ConditionVerdict("V4", Verdict.FAIL, float(1e-10 - err[i]),
                                 {"x": pts[i].tolist(), "V(x)": float(Vp[i]), "V(-x)": float(Vm[i])},
                                 "V is not even"))
    return rep


def check_hamiltonian_conditions(pair: FenchelPair | HamiltonianModel,
                                 plan: SamplingPlan | None = None) -> ConditionReport:
    """Sampled audit of (H1)-(H3), strict convexity and the derived (G1), (G2).

    Accepts a bare HamiltonianModel; the conjugate-side checks then build the
    Fenchel pair themselves and report inconclusive if that fails.
    """
    from .models import fenchel_transform

    plan = plan or SamplingPlan()
    model = pair.base if isinstance(pair, FenchelPair) else pair
    rng = np.random.default_rng(plan.seed)
    dirs = sphere_directions(model.dim, plan.n_dirs, rng)
    rep = ConditionReport("hamiltonian")
    rep.add(_vanishing_ratio("H1", model.H, dirs, plan))

    fit = fit_growth_exponent(model.H, model.dim, declared=model.growth_beta, seed=plan.seed)
    beta = model.growth_beta if model.growth_beta is not None else fit.exponent
    w = {"beta_hat": fit.exponent, "a1": fit.lower, "a2": fit.upper, "declared": model.growth_beta}
    if beta > 2 + 1e-3 and fit.sandwich_ok and fit.superquadratic:
        rep.add(ConditionVerdict("H2", Verdict.PASS, beta - 2, w))
    else:
        rep.add(ConditionVerdict("H2", Verdict.FAIL, beta - 2, w,
                                 "growth exponent beta > 2 with a sandwich bound is required"))

    x = rng.uniform(-plan.interior_radius, plan.interior_radius, (plan.n_interior, model.dim))
    y = rng.uniform(-plan.interior_radius, plan.interior_radius, (plan.n_interior, model.dim))
    gap = 0.5 * (model.H(x) + model.H(y)) - model.H(0.5 * (x + y))
    margin = 1e-12 * (1 + np.abs(model.H(x)) + np.abs(model.H(y)))
    i = int(np.argmin(gap - margin))
    if gap[i] > margin[i]:
        rep.add(ConditionVerdict("convexity", Verdict.PASS, float(gap[i])))
    else:
        rep.add(ConditionVerdict("convexity", Verdict.FAIL, float(gap[i]),
                                 {"x": x[i].tolist(), "y": y[i].tolist(), "midpoint_gap": float(gap[i])},
                                 "midpoint strict convexity violated"))

    if not isinstance(pair, FenchelPair):
        try:
            pair = fenchel_transform(model)
        except (FenchelError, ValueError) as exc:
            for name in ("H3", "G1", "G2"):
                rep.add(ConditionVerdict(name, Verdict.INCONCLUSIVE, detail=f"no conjugate: {exc}"))
            return rep
    try:
        rep.add(_g_ratio_monotone(pair, dirs, plan))
        rep.add(_diverging_ratio("G1", pair.G, dirs, plan.small_radii, plan, reverse=True))
        gfit = fit_growth_exponent(pair.G, model.dim, declared=pair.alpha, seed=plan.seed)
        w = {"alpha_hat": gfit.exponent, "b1": gfit.lower, "b2": gfit.upper, "alpha": pair.alpha}
        verdict = Verdict.PASS if gfit.sandwich_ok else Verdict.FAIL
        rep.add(ConditionVerdict("G2", verdict, gfit.lower, w))
    except FenchelError as exc:
        for name in ("H3", "G1", "G2"):
            if name not in rep.conditions:
                rep.add(ConditionVerdict(name, Verdict.INCONCLUSIVE, witness=exc.witness,
                                         detail=f"Fenchel engine failure: {exc}"))
    return rep


def _g_ratio_monotone(pair, dirs, plan) -> ConditionVerdict:
    """(H3): s -> G'(s y).y / s non-increasing for every sampled y."""
    s = np.asarray(plan.s_grid)
    pts = s[:, None, None] * dirs[None]
    ratio = np.sum(pair.Gprime(pts) * dirs[None], axis=-1) / s[:, None]
    inc = np.diff(ratio, axis=0)
    tol = plan.ratio_slack * np.abs(ratio[1:])
    excess = inc - tol
    i, j = np.unravel_index(int(np.argmax(excess)), excess.shape)
    if excess[i, j] <= 0:
        return ConditionVerdict("H3", Verdict.PASS, float(-excess[i, j]))
    return ConditionVerdict("H3", Verdict.FAIL, float(-excess[i, j]),
                            {"y": dirs[j].tolist(), "s_left": float(s[i]), "s_right": float(s[i + 1]),
                             "ratio_left": float(ratio[i, j]), "ratio_right": float(ratio[i + 1, j])},
                            "G'(s y).y / s increases")


def check_fiber_conditions(ctx, n_rays: int = 16, seed: int = 0,
                           tol: FiberTolerances | None = None) -> ConditionReport:
    """Ray-level audit of the abstract hypotheses on random directions.

    Every sampled fiber must have a maximum (growth), a monotone ratio over a
    dense scan, positive value at the maximizer, and the increasing-then-
    decreasing shape around its critical set.
    """
    tol = tol or FiberTolerances(scan=True)
    rng = np.random.default_rng(seed)
    rep = ConditionReport("fiber")
    bad = {"growth": None, "monotone_ratio": None, "positivity": None, "shape": None}
    for i in range(n_rays):
        e = random_direction(ctx, rng)
        prob = make_fiber(ctx, e)
        prof = fiber_profile(prob, tol)
        if prof.status is FiberStatus.NO_SIGN_CHANGE:
            bad["growth"] = bad["growth"] or {"ray": i, **prof.witnesses[0]}
            continue
        if prof.status is FiberStatus.NON_MONOTONE_RATIO:
            bad["monotone_ratio"] = bad["monotone_ratio"] or {"ray": i, "samples": prof.witnesses}
            continue
        if not prof.value > 0:
            bad["positivity"] = bad["positivity"] or {"ray": i, "value": prof.value}
        up = [prob.phi(s) for s in np.linspace(0, prof.crit_lo, 16)]
        down = [prob.phi(s) for s in np.linspace(prof.crit_hi, 2 * prof.crit_hi, 16)]
        slack = 1e-12 * abs(prof.value)
        if np.any(np.diff(up) < -slack) or np.any(np.diff(down) > slack):
            bad["shape"] = bad["shape"] or {"ray": i, "crit_lo": prof.crit_lo, "crit_hi": prof.crit_hi}
    for name, w in bad.items():
        rep.add(ConditionVerdict(name, Verdict.PASS if w is None else Verdict.FAIL, witness=w))
    return rep


# ---------------------------------------------------------------------------
# certificate


@dataclass(frozen=True)
class CertificateThresholds:
    ode: float = 1e-6
    energy: float = 1e-6
    audit: float = -1e-5
    truncation: float = 1e-4


@dataclass
class Certificate:
    candidate: dict
    ode_residual_sup: float          # relative, see ode_residual
    energy_drift: float | None       # relative, see energy_drift
    minimal_period: PeriodVerdict
    infmax_audit: AuditReport
    conditions: ConditionReport | None = None
    truncation_agreement: float | None = None
    thresholds: CertificateThresholds = field(default_factory=CertificateThresholds)
    ode_residual_abs: float | None = None
    energy_drift_abs: float | None = None

    def checks(self) -> dict:
        th = self.thresholds
        out = {
            "ode_residual": self.ode_residual_sup < th.ode,
            "minimal_period": self.minimal_period.certified,
            "infmax_audit": self.infmax_audit.min_margin > th.audit and self.infmax_audit.self_consistent,
            "truncation": self.truncation_agreement is not None and self.truncation_agreement < th.truncation,
            "refined": bool(self.candidate.get("refined", False)),
        }
        if self.energy_drift is not None:
            out["energy_drift"] = self.energy_drift < th.energy
        if self.conditions is not None:
            out["conditions"] = not self.conditions.failed
        return out

    @property
    def certified(self) -> bool:
        return all(self.checks().values())

    def as_dict(self) -> dict:
        return {
            "certified": self.certified,
            "checks": self.checks(),
            "candidate": self.candidate,
            "ode_residual_sup": self.ode_residual_sup,
            "energy_drift": self.energy_drift,
            "ode_residual_abs": self.ode_residual_abs,
            "energy_drift_abs": self.energy_drift_abs,
            "minimal_period": self.minimal_period.as_dict(),
            "infmax_audit": self.infmax_audit.as_dict(),
            "conditions": None if self.conditions is None else self.conditions.as_dict(),
            "truncation_agreement": self.truncation_agreement,
            "thresholds": asdict(self.thresholds),
        }
