"""Inf-max solver: minimize m(e) = max_s Phi(s e) over rays, then refine.

The sphere search is a preconditioned projected-gradient descent.  Since
phi'(s*) = 0 at the ray maximizer, the gradient of m at x = s* e is just the
gradient of the functional, so a step is taken from x along
-W^{-1} Phi'(x) and the new ray is read off the trial point; W is the H^1
weight (direct) or the L^2 weight (dual).  Backtracking enforces monotone
decrease of m.  The winner is then polished by a damped Newton iteration on
the full coefficient gradient.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .action import Cone, DirectActionContext, DualActionContext, symplectic_matrix
from .fiber import FiberProfile, FiberTolerances, ray_maximum
from .symfun import (
    TrajectoryCoeffs,
    _grid_basis,
    pi_operator,
)

__all__ = [
    "SolverConfig",
    "Candidate",
    "Orbit",
    "SolverError",
    "minimize_sphere",
    "newton_refine",
    "recover_orbit",
    "direct_orbit",
    "random_direction",
]

log = logging.getLogger(__name__)


class SolverError(RuntimeError):
    def __init__(self, code: str, message: str, last=None):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.last = last


@dataclass(frozen=True)
class SolverConfig:
    restarts: int = 4
    max_outer_iters: int = 500
    initial_step: float = 1.0
    shrink: float = 0.5
    growth: float = 2.0
    max_step: float = 1e3
    armijo: float = 1e-4
    grad_tol: float = 1e-9
    newton_tol: float | None = None   # 1e-10 direct, 1e-8 dual
    newton_max_iter: int = 40
    gradient_mode: str = "auto"       # or "sampling"
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.restarts < 1 or self.max_outer_iters < 1:
            raise ValueError("restarts and max_outer_iters must be >= 1")
        for name in ("initial_step", "grad_tol", "max_step", "armijo"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.newton_tol is not None and not self.newton_tol > 0:
            raise ValueError("newton_tol must be positive")
        if not (0 < self.shrink < 1 < self.growth):
            raise ValueError("need 0 < shrink < 1 < growth")
        if self.gradient_mode not in ("auto", "sampling"):
            raise ValueError(f"unknown gradient_mode {self.gradient_mode!r}")

    def newton_tolerance(self, kind: str) -> float:
        if self.newton_tol is not None:
            return self.newton_tol
        return 1e-10 if kind == "direct" else 1e-8


@dataclass
class Candidate:
    point: TrajectoryCoeffs
    direction: np.ndarray
    fiber: FiberProfile
    value: float
    refined: bool = False
    residual_norm: float = math.nan
    restart: int = 0
    iterations: int = 0
    stationarity: float = math.nan
    status: str = "converged"
    newton_iterations: int = 0
    infmax_value: float = math.nan    # m* before refinement
    diagnostics: dict = field(default_factory=dict)

    def summary(self) -> dict:
        return {
            "value": self.value,
            "infmax_value": self.infmax_value,
            "refined": self.refined,
            "residual_norm": self.residual_norm,
            "restart": self.restart,
            "iterations": self.iterations,
            "newton_iterations": self.newton_iterations,
            "stationarity": self.stationarity,
            "status": self.status,
            "fiber": self.fiber.as_dict(),
        }


def random_direction(ctx, rng: np.random.Generator, max_draws: int = 1000) -> np.ndarray:
    """Standard normal coefficients, redrawn until in P^- for the dual action."""
    for _ in range(max_draws):
        e = rng.standard_normal(ctx.space.shape)
        if ctx.kind != "dual" or ctx.cone(e) is Cone.P_MINUS:
            return e / ctx.norm(e)
    raise SolverError("NO_NEGATIVE_DIRECTION", "could not draw a direction in P^-")


def _sampled_descent(ctx, e, m, rng, fib_tol, h=1e-4):
    """Descent direction for m from central differences along random tangents."""
    k = min(10, e.size - 1)
    basis = rng.standard_normal((e.size, k + 1))
    basis[:, 0] = e.ravel()
    q, _ = np.linalg.qr(basis)
    tangents = q[:, 1:].T.reshape((k,) + e.shape)
    dm = np.empty(k)
    for i, v in enumerate(tangents):
        fp, _ = ray_maximum(ctx, e + h * v, fib_tol)
        fm, _ = ray_maximum(ctx, e - h * v, fib_tol)
        dm[i] = (fp.value - fm.value) / (2 * h)
    if not np.all(np.isfinite(dm)):
        dm = np.nan_to_num(dm, nan=0.0, posinf=0.0, neginf=0.0)
    d_e = -np.tensordot(dm, tangents, axes=1)
    return d_e, -float(dm @ dm)


def _descend(ctx, config: SolverConfig, restart: int, fib_tol: FiberTolerances):
    rng = np.random.default_rng([config.seed, restart])
    e = random_direction(ctx, rng)
    prof, e = ray_maximum(ctx, e, fib_tol)
    if not prof.ok:
        return None
    m = prof.value
    eta = config.initial_step
    history = [m]
    status = "max_iters"
    stat = math.inf
    it = 0
    for it in range(1, config.max_outer_iters + 1):
        s = prof.s_star
        x = s * e
        sampling = config.gradient_mode == "sampling" or prof.plateau
        if sampling:
            d_e, slope = _sampled_descent(ctx, e, m, rng, fib_tol)
            d = s * d_e
            stat = math.sqrt(-slope) / max(abs(m), 1e-300)
        else:
            g = ctx.gradient(x)
            d = -ctx.riesz(g)
            slope = float(np.sum(g * d))
            stat = math.sqrt(max(-slope, 0.0)) / ctx.metric_norm(x)
        if stat < config.grad_tol:
            status = "converged"
            break
        accepted = False
        first = True
        while eta > 1e-14:
            trial, e_t = ray_maximum(ctx, x + eta * d, fib_tol)
            if trial.ok and trial.value <= m + config.armijo * eta * slope:
                accepted = True
                break
            eta *= config.shrink
            first = False
        if not accepted:
            status = "NO_DESCENT"
            break
        if first:
            # step adaptation: try a smaller, then a larger step; keep the first that improves
            for cand_eta in (eta * config.shrink, min(eta * config.growth, config.max_step)):
                t2, e2 = ray_maximum(ctx, x + cand_eta * d, fib_tol)
                if t2.ok and t2.value < trial.value:
                    trial, e_t, best_eta = t2, e2, cand_eta
                    break
            else:
                best_eta = eta
            eta = best_eta
        prev = m
        prof, e, m = trial, e_t, trial.value
        history.append(m)
        # rounding floor: an accepted step that no longer moves m
        if prev - m <= 4 * np.finfo(float).eps * abs(m) and stat < 1e3 * config.grad_tol:
            status = "converged"
            break
    point = ctx.wrap(prof.s_star * e)
    cand = Candidate(point, e, prof, prof.value, restart=restart, iterations=it,
                     stationarity=stat, status=status, infmax_value=prof.value)
    cand.diagnostics["history_len"] = len(history)
    return cand


def minimize_sphere(ctx, config: SolverConfig | None = None,
                    fib_tol: FiberTolerances | None = None) -> Candidate:
    """Best inf-max candidate over ``config.restarts`` random starts.

    Raises SolverError("ALL_FIBERS_UNBOUNDED") when every starting ray is
    unbounded above.  A restart that stalls keeps status "NO_DESCENT".
    """
    config = config or SolverConfig()
    fib_tol = fib_tol or FiberTolerances()
    runs = range(config.restarts)
    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            results = list(pool.map(lambda r: _descend(ctx, config, r, fib_tol), runs))
    else:
        results = [_descend(ctx, config, r, fib_tol) for r in runs]
    best = None
    for cand in results:
        if cand is None:
            continue
        # strict comparison: lowest restart index wins ties
        if best is None or cand.value < best.value:
            best = cand
    if best is None:
        raise SolverError("ALL_FIBERS_UNBOUNDED",
                          "every restart produced a fiber without a maximum")
    best.diagnostics["restart_values"] = [None if c is None else c.value for c in results]
    return best


def _fd_jacobian(fun, c, rel=1e-6):
    flat = c.ravel()
    n = flat.size
    J = np.empty((n, n))
    for j in range(n):
        h = rel * (1.0 + abs(flat[j]))
        cp, cm = flat.copy(), flat.copy()
        cp[j] += h
        cm[j] -= h
        J[:, j] = (fun(cp.reshape(c.shape)) - fun(cm.reshape(c.shape))).ravel() / (2 * h)
    return 0.5 * (J + J.T)


def newton_refine(ctx, candidate: Candidate, tol: float | None = None,
                  max_iter: int = 40, fib_tol: FiberTolerances | None = None) -> Candidate:
    """Damped Newton on the coefficient gradient of the action.

    The direct action uses its exact Hessian; the dual action a symmetrized
    central-difference Jacobian of its gradient.  Steps are solved in the
    least-squares sense, which handles the zero modes of autonomous problems.
    On divergence (no residual decrease for 5 consecutive steps) the input
    candidate comes back unrefined with a diagnostic.
    """
    tol = tol if tol is not None else (1e-10 if ctx.kind == "direct" else 1e-8)
    c = candidate.point.coeffs.copy()
    g = ctx.gradient(c)
    res = float(np.linalg.norm(g))
    its = 0
    failures = 0
    while res >= tol and its < max_iter:
        its += 1
        if ctx.kind == "direct":
            Hm = ctx.hessian(c)
        else:
            Hm = _fd_jacobian(ctx.gradient, c)
        step = np.linalg.lstsq(Hm, -g.ravel(), rcond=1e-12)[0].reshape(c.shape)
        t = 1.0
        accepted = False
        for _ in range(30):
            ct = c + t * step
            try:
                gt = ctx.gradient(ct)
            except (FloatingPointError, RuntimeError):
                t *= 0.5
                continue
            rt = float(np.linalg.norm(gt))
            if rt < res:
                c, g, res = ct, gt, rt
                accepted = True
                break
            t *= 0.5
        failures = 0 if accepted else failures + 1
        if failures >= 5 or (not accepted and res < 1e3 * tol):
            break
    if res >= tol:
        out = replace(candidate, refined=False, residual_norm=res, newton_iterations=its)
        out.diagnostics = dict(candidate.diagnostics, newton="no convergence",
                               newton_residual=res)
        log.warning("Newton refinement stopped at residual %.3e (tol %.1e)", res, tol)
        return out
    prof, e = ray_maximum(ctx, c, fib_tol)
    value = ctx.value(c)
    out = replace(candidate, point=ctx.wrap(c), direction=e, fiber=prof, value=value,
                  refined=True, residual_norm=res, newton_iterations=its)
    m = candidate.infmax_value
    out.diagnostics = dict(candidate.diagnostics,
                           action_shift=abs(value - m) / max(abs(m), 1e-300))
    return out


@dataclass
class Orbit:
    """A sampled periodic orbit x(t) over one period."""

    times: np.ndarray
    x: np.ndarray
    xdot: np.ndarray
    xddot: np.ndarray | None = None
    coeffs: TrajectoryCoeffs | None = None
    offset: np.ndarray | None = None
    consistency: float = 0.0
    accepted: bool = True

    @property
    def amplitude(self) -> float:
        return float(np.max(np.linalg.norm(self.x, axis=1)))


def direct_orbit(candidate_or_coeffs) -> Orbit:
    x = getattr(candidate_or_coeffs, "point", candidate_or_coeffs)
    sp = x.space
    X, Xd, Xdd = (_grid_basis(sp, n) @ x.coeffs for n in range(3))
    return Orbit(sp.grid.times.copy(), X, Xd, Xdd, coeffs=x, offset=np.zeros(sp.dim_N))


def recover_orbit(ctx: DualActionContext, candidate, tol: float = 1e-4) -> Orbit:
    """x = J Pi u + xi with xi the mean of G'(u); Jx' = ... checked by the caller.

    The recovery is flagged (``accepted = False``) when x deviates from
    G'(u) by more than ``tol`` in sup norm.
    """
    u = getattr(candidate, "point", candidate)
    if not np.any(u.coeffs):
        raise ValueError("the zero field is not a candidate")
    sp = u.space
    J = symplectic_matrix(sp.dim_N)
    Pu = pi_operator(u)
    xc = TrajectoryCoeffs(sp, Pu.coeffs @ J.T)
    B = _grid_basis(sp, 0)
    Gp = ctx.pair.Gprime(B @ u.coeffs)
    xi = Gp.mean(axis=0)
    X = B @ xc.coeffs + xi
    Xd = B @ (u.coeffs @ J.T)
    cons = float(np.max(np.abs(X - Gp)))
    return Orbit(sp.grid.times.copy(), X, Xd, None, coeffs=xc, offset=xi,
                 consistency=cons, accepted=cons <= tol)
