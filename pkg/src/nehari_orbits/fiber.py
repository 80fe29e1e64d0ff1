"""Fiber maps phi(s) = Phi(s e) along rays and their maximizers.

Along a ray the derivative factors as  phi'(s) = s * g(s)  with

    g(s) = kappa - I'(s e) e / s     (direct, kappa = ||e||^2)
    g(s) = kappa + b'(s e) e / s     (dual,   kappa = a(e, e) < 0)

and the ratio hypotheses make g non-increasing.  The critical set on s > 0
is therefore a point or a closed interval (a plateau), located here by
bracketing and root finding on g.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .action import Cone, Ray

__all__ = [
    "FiberStatus",
    "FiberTolerances",
    "FiberProblem",
    "FiberProfile",
    "PlateauError",
    "make_fiber",
    "fiber_profile",
    "fiber_value_at",
    "envelope_derivative",
    "ray_maximum",
    "ratio_samples",
]


class FiberStatus(str, enum.Enum):
    OK = "OK"
    NO_SIGN_CHANGE = "NO_SIGN_CHANGE"
    NON_MONOTONE_RATIO = "NON_MONOTONE_RATIO"


class PlateauError(ValueError):
    """The fiber maximum is attained on an interval; m has no classical derivative."""


@dataclass(frozen=True)
class FiberTolerances:
    xtol: float = 1e-12          # relative tolerance on crit_lo / crit_hi
    zero_band: float = 1e-10     # |g| <= zero_band * |kappa| counts as zero
    plateau_rel: float = 1e-6    # plateau if crit_hi - crit_lo > plateau_rel * crit_lo
    ratio_slack: float = 1e-9    # allowed ratio inversion, relative
    s0: float = 1.0
    s_max_doublings: int = 60
    scan: bool = False           # dense 64-point monotonicity scan of the ratio
    n_scan: int = 64


@dataclass(frozen=True)
class FiberProblem:
    kind: str
    ray: Ray
    direction: np.ndarray | None = None
    ctx: object = None

    @property
    def kappa(self) -> float:
        return self.ray.kappa

    def phi(self, s: float) -> float:
        r = self.ray
        return 0.5 * r.kappa * s * s + r.sign * r.N(s)

    def dphi(self, s: float) -> float:
        r = self.ray
        return r.kappa * s + r.sign * r.dN(s)

    def ratio(self, s: float) -> float:
        """I'(s e) e / s (direct) or b'(s e) e / s (dual)."""
        return self.ray.dN(s) / s

    def g(self, s: float) -> float:
        return self.ray.kappa + self.ray.sign * self.ratio(s)


@dataclass
class FiberProfile:
    status: FiberStatus
    s_lo: float = math.nan
    s_hi: float = math.nan
    crit_lo: float = math.nan
    crit_hi: float = math.nan
    s_star: float = math.nan
    value: float = math.inf
    plateau: bool = False
    witnesses: list = field(default_factory=list)
    n_evals: int = 0

    @property
    def ok(self) -> bool:
        return self.status is FiberStatus.OK

    def as_dict(self) -> dict:
        return {
            "status": self.status.value,
            "crit_lo": self.crit_lo,
            "crit_hi": self.crit_hi,
            "s_star": self.s_star,
            "value": self.value,
            "plateau": self.plateau,
        }


def make_fiber(ctx, e, normalize: bool = True) -> FiberProblem:
    """Fiber along the direction e of a direct or dual action context."""
    e = np.array(e.coeffs if hasattr(e, "coeffs") else e, dtype=float).reshape(ctx.space.shape)
    n = ctx.norm(e)
    if n == 0:
        raise ValueError("zero direction")
    if normalize:
        e = e / n
    elif abs(n - 1.0) > 1e-12:
        raise ValueError(f"direction is not normalized (norm {n!r})")
    if ctx.kind == "dual" and ctx.cone(e) is not Cone.P_MINUS:
        raise ValueError("dual fibers need a direction in the negative cone")
    return FiberProblem(ctx.kind, ctx.ray(e), e, ctx)


def fiber_value_at(problem: FiberProblem, s: float) -> tuple[float, float]:
    if s < 0:
        raise ValueError("fibers are parametrized by s >= 0")
    return problem.phi(s), problem.dphi(s)


def _monotone_violations(pts, kappa, slack):
    """Sample pairs s_left < s_right where g rises by more than the slack."""
    out = []
    gmin, smin = math.inf, None
    for s, gv in sorted(pts):
        tol = slack * (abs(kappa) + abs(gv - kappa))
        if gv > gmin + tol:
            out.append({"s_left": smin, "g_left": gmin, "s_right": s, "g_right": gv})
        if gv < gmin:
            gmin, smin = gv, s
    return out


def fiber_profile(problem: FiberProblem, tol: FiberTolerances | None = None) -> FiberProfile:
    """Locate the critical point (or interval) and the maximum of a fiber.

    Never raises on hypothesis violations: an unbounded fiber comes back with
    status NO_SIGN_CHANGE and value +inf, a ratio inversion with status
    NON_MONOTONE_RATIO and the offending samples as witnesses.
    """
    tol = tol or FiberTolerances()
    kappa = problem.kappa
    band = tol.zero_band * max(abs(kappa), 1e-300)
    records: list[tuple[float, float]] = []

    def g(s):
        v = problem.g(s)
        if not math.isfinite(v):
            raise FloatingPointError(f"non-finite fiber slope at s={s!r}")
        records.append((s, v))
        return v

    s = tol.s0
    gs = g(s)
    if gs > band:
        # expand upward until g < -band
        for _ in range(tol.s_max_doublings):
            s *= 2.0
            if g(s) < -band:
                break
        else:
            return FiberProfile(FiberStatus.NO_SIGN_CHANGE, s_lo=tol.s0, s_hi=s,
                                witnesses=[{"s": s, "g": records[-1][1]}],
                                n_evals=len(records))
    elif gs >= -band:
        for _ in range(tol.s_max_doublings):
            s *= 2.0
            if g(s) < -band:
                break
        else:
            return FiberProfile(FiberStatus.NO_SIGN_CHANGE, s_lo=tol.s0, s_hi=s,
                                witnesses=[{"s": s, "g": records[-1][1]}],
                                n_evals=len(records))
    if max(v for _, v in records) <= band:
        s = tol.s0
        for _ in range(tol.s_max_doublings):
            s *= 0.5
            if g(s) > band:
                break
        else:
            return FiberProfile(FiberStatus.NO_SIGN_CHANGE, s_lo=s, s_hi=tol.s0,
                                witnesses=[{"s": s, "g": records[-1][1], "note": "phi' <= 0 near 0"}],
                                n_evals=len(records))

    def bracket(level):
        pts = sorted(records)
        left = max(p for p in pts if p[1] > level)[0]
        right = min(p for p in pts if p[1] <= level and p[0] > left)[0]
        return left, right

    def boundary(level):
        a, b = bracket(level)
        return brentq(lambda s: g(s) - level, a, b, xtol=tol.xtol * a, rtol=4 * np.finfo(float).eps)

    try:
        crit_lo = boundary(band)
        crit_hi = boundary(-band)
    except ValueError:
        crit_lo = crit_hi = math.nan

    slack = tol.ratio_slack
    viol = _monotone_violations(records, kappa, slack)
    if not viol and tol.scan and math.isfinite(crit_lo):
        grid = np.geomspace(crit_lo / 8.0, 8.0 * crit_hi, tol.n_scan)
        for sv in grid:
            g(float(sv))
        viol = _monotone_violations(records, kappa, slack)
    if viol or not (math.isfinite(crit_lo) and crit_lo <= crit_hi * (1 + 1e-12)):
        return FiberProfile(FiberStatus.NON_MONOTONE_RATIO, witnesses=viol[:5],
                            n_evals=len(records))

    plateau = (crit_hi - crit_lo) > tol.plateau_rel * crit_lo
    if plateau:
        s_star = 0.5 * (crit_lo + crit_hi)
    else:
        a, b = crit_lo, crit_hi
        ga, gb = problem.g(a), problem.g(b)
        s_star = brentq(problem.g, a, b, xtol=tol.xtol * a) if ga > 0 > gb else 0.5 * (a + b)
    s_lo = max(p[0] for p in records if p[1] > band)
    s_hi = min(p[0] for p in records if p[1] < -band)
    return FiberProfile(FiberStatus.OK, s_lo, s_hi, crit_lo, crit_hi, s_star,
                        problem.phi(s_star), plateau, [], len(records))


def ray_maximum(ctx, e, tol: FiberTolerances | None = None) -> tuple[FiberProfile, np.ndarray]:
    """m(e) = max_s Phi(s e) together with the normalized direction.

    A dual direction outside the negative cone has m = +inf.
    """
    e = np.asarray(e, dtype=float).reshape(ctx.space.shape)
    e = e / ctx.norm(e)
    if ctx.kind == "dual" and ctx.cone(e) is not Cone.P_MINUS:
        return FiberProfile(FiberStatus.NO_SIGN_CHANGE, witnesses=[{"cone": ctx.cone(e).value}]), e
    return fiber_profile(make_fiber(ctx, e, normalize=False), tol), e


def envelope_derivative(problem: FiberProblem, profile: FiberProfile, v) -> float:
    """Directional derivative of m(e) = max_s Phi(s e) along v.

    Equals s* <Phi'(s* e), v> off plateaus; the normalization term drops out
    because phi'(s*) = 0.
    """
    if profile.plateau:
        raise PlateauError("fiber maximum is a plateau; use a sampling estimate")
    v = np.asarray(v, dtype=float).reshape(problem.direction.shape)
    if not np.any(v):
        return 0.0
    s = profile.s_star
    grad = problem.ctx.gradient(s * problem.direction)
    return float(s * np.sum(grad * v))


def ratio_samples(problem: FiberProblem, s_grid) -> np.ndarray:
    return np.array([problem.ratio(float(s)) for s in s_grid])
