"""Potentials V, Hamiltonians H and the numerical Fenchel transform G = H*.

Every callable is vectorized over leading axes: ``V(x)`` maps ``(..., N)`` to
``(...)``, the gradient keeps the shape and the Hessian returns
``(..., N, N)``.  User models are plain :class:`PotentialModel` or
:class:`HamiltonianModel` instances built from such callables.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "PotentialModel",
    "HamiltonianModel",
    "FenchelPair",
    "FenchelError",
    "GrowthFit",
    "builtin_potential",
    "builtin_hamiltonian",
    "fenchel_transform",
    "fit_growth_exponent",
    "fd_hessian",
    "gradient_check",
    "sphere_directions",
    "quadratic_hamiltonian",
    "circular_orbit_radius",
]

Array = np.ndarray


class FenchelError(RuntimeError):
    """The conjugate could not be evaluated (Newton stalled or diverged)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


def fd_hessian(grad: Callable[[Array], Array], x: Array) -> Array:
    """Central-difference Jacobian of ``grad`` with h = 1e-5 (1 + |x_d|)."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    out = np.empty(x.shape + (n,))
    for d in range(n):
        h = 1e-5 * (1.0 + np.abs(x[..., d]))
        step = np.zeros_like(x)
        step[..., d] = h
        out[..., :, d] = (grad(x + step) - grad(x - step)) / (2.0 * h[..., None])
    # symmetrize; the exact Hessian of a C^2 function is symmetric
    return 0.5 * (out + np.swapaxes(out, -1, -2))


@dataclass(frozen=True)
class PotentialModel:
    name: str
    params: dict
    V: Callable[[Array], Array]
    grad: Callable[[Array], Array]
    dim: int
    hess_fn: Optional[Callable[[Array], Array]] = None
    claims_even: bool = True

    def __post_init__(self):
        v0 = float(self.V(np.zeros(self.dim)))
        if v0 != 0.0:
            base = self.V
            object.__setattr__(self, "V", lambda x: base(x) - v0)

    def hess(self, x: Array) -> Array:
        if self.hess_fn is not None:
            return self.hess_fn(x)
        return fd_hessian(self.grad, x)


@dataclass(frozen=True)
class HamiltonianModel:
    name: str
    params: dict
    H: Callable[[Array], Array]
    grad: Callable[[Array], Array]
    dim: int
    hess_fn: Optional[Callable[[Array], Array]] = None
    claims_strictly_convex: bool = True
    growth_beta: Optional[float] = None

    def __post_init__(self):
        if self.dim % 2:
            raise ValueError("a Hamiltonian lives on R^{2n}")
        h0 = float(self.H(np.zeros(self.dim)))
        if h0 != 0.0:
            base = self.H
            object.__setattr__(self, "H", lambda x: base(x) - h0)

    def hess(self, x: Array) -> Array:
        if self.hess_fn is not None:
            return self.hess_fn(x)
        return fd_hessian(self.grad, x)


# ---------------------------------------------------------------------------
# radial building blocks


def _norm(x):
    return np.linalg.norm(x, axis=-1)


def _radial_hessian(x, f1_over_r, f2):
    """Hessian of f(|x|) from f'(r)/r and f''(r)."""
    r = _norm(x)
    n = x.shape[-1]
    eye = np.eye(n)
    with np.errstate(invalid="ignore", divide="ignore"):
        xx = np.where(r[..., None, None] > 0,
                      x[..., :, None] * x[..., None, :] / (r**2)[..., None, None], 0.0)
    return f1_over_r[..., None, None] * (eye - xx) + f2[..., None, None] * xx


def _power_parts(beta):
    def V(x):
        return _norm(x) ** beta / beta

    def grad(x):
        return (_norm(x) ** (beta - 2))[..., None] * x

    def hess(x):
        r = _norm(x)
        return _radial_hessian(x, r ** (beta - 2), (beta - 1) * r ** (beta - 2))

    return V, grad, hess


def _anisotropic_parts(beta, lam):
    lam = np.asarray(lam, dtype=float)

    def V(x):
        return np.sum(lam * np.abs(x) ** beta, axis=-1) / beta

    def grad(x):
        return lam * np.abs(x) ** (beta - 2) * x

    def hess(x):
        d = lam * (beta - 1) * np.abs(x) ** (beta - 2)
        return d[..., :, None] * np.eye(x.shape[-1])

    return V, grad, hess


def _log_quadratic_parts(p, q):
    # V = r^2 L^q with L = log(1 + r^p)
    def L(r):
        return np.log1p(r**p)

    def V(x):
        r = _norm(x)
        return r**2 * L(r) ** q

    def f1_over_r(r):
        with np.errstate(invalid="ignore", divide="ignore"):
            Lr = L(r)
            dL = p * r ** (p - 1) / (1 + r**p)
            out = 2 * Lr**q + q * r * Lr ** (q - 1) * dL
        return np.where(r > 0, out, 0.0)

    def grad(x):
        return f1_over_r(_norm(x))[..., None] * x

    def hess(x):
        r = _norm(x)
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            Lr = L(r)
            rp = r**p
            dL = p * r ** (p - 1) / (1 + rp)
            d2L = p * (p - 1) * r ** (p - 2) / (1 + rp) - (p * r ** (p - 1) / (1 + rp)) ** 2
            f2 = (2 * Lr**q + 4 * q * r * Lr ** (q - 1) * dL
                  + q * (q - 1) * r**2 * Lr ** (q - 2) * dL**2
                  + q * r**2 * Lr ** (q - 1) * d2L)
        f2 = np.where(r > 0, f2, 0.0)
        return _radial_hessian(x, f1_over_r(r), f2)

    return V, grad, hess


def builtin_potential(name: str, params: dict | None = None, dim: int = 1) -> PotentialModel:
    """Built-in potential families.

    ``power``           |x|^beta / beta, beta > 2
    ``log_quadratic``   |x|^2 (log(1 + |x|^p))^q, p, q > 0
    ``quadratic``       omega^2 |x|^2 / 2 (negative control: not superquadratic)
    ``anisotropic_power``  sum_d lambda_d |x_d|^beta / beta
    """
    params = dict(params or {})
    if name == "power":
        beta = float(params.setdefault("beta", 4.0))
        if not beta > 2:
            raise ValueError(f"power potential needs beta > 2, got {beta}")
        V, g, h = _power_parts(beta)
    elif name == "log_quadratic":
        p = float(params.setdefault("p", 1.0))
        q = float(params.setdefault("q", 1.0))
        if not (p > 0 and q > 0):
            raise ValueError("log_quadratic needs p, q > 0")
        V, g, h = _log_quadratic_parts(p, q)
    elif name == "quadratic":
        om = float(params.setdefault("omega", 1.0))
        if om <= 0:
            raise ValueError("quadratic needs omega > 0")
        V = lambda x: 0.5 * om**2 * np.sum(x**2, axis=-1)  # noqa: E731
        g = lambda x: om**2 * x  # noqa: E731
        h = lambda x: om**2 * np.broadcast_to(np.eye(x.shape[-1]), x.shape + (x.shape[-1],))  # noqa: E731
    elif name == "anisotropic_power":
        beta = float(params.setdefault("beta", 4.0))
        lam = params.setdefault("lambdas", [1.0] * dim)
        if not beta > 2:
            raise ValueError(f"anisotropic_power needs beta > 2, got {beta}")
        if len(lam) != dim or min(lam) <= 0:
            raise ValueError("lambdas must be positive, one per dimension")
        params["lambdas"] = [float(v) for v in lam]
        V, g, h = _anisotropic_parts(beta, lam)
    else:
        raise ValueError(f"unknown potential {name!r}")
    return PotentialModel(name, params, V, g, dim, h, claims_even=True)


def builtin_hamiltonian(name: str, params: dict | None = None, dim: int = 2) -> HamiltonianModel:
    """Built-in convex Hamiltonians on R^{2n}: ``power`` and ``anisotropic_power``."""
    params = dict(params or {})
    beta = float(params.setdefault("beta", 4.0))
    if not beta > 2:
        raise ValueError(f"Hamiltonian needs beta > 2 (superquadratic), got {beta}")
    if name == "power":
        H, g, h = _power_parts(beta)
    elif name == "anisotropic_power":
        lam = params.setdefault("lambdas", [1.0] * dim)
        if len(lam) != dim or min(lam) <= 0:
            raise ValueError("lambdas must be positive, one per dimension")
        params["lambdas"] = [float(v) for v in lam]
        H, g, h = _anisotropic_parts(beta, lam)
    else:
        raise ValueError(f"unknown Hamiltonian {name!r}")
    return HamiltonianModel(name, params, H, g, dim, h, True, beta)


def quadratic_hamiltonian(dim: int = 2) -> HamiltonianModel:
    """|z|^2 / 2: convex but only quadratic.  Used as a negative control."""
    H = lambda z: 0.5 * np.sum(z**2, axis=-1)  # noqa: E731
    g = lambda z: np.array(z, dtype=float)  # noqa: E731
    h = lambda z: np.broadcast_to(np.eye(z.shape[-1]), z.shape + (z.shape[-1],))  # noqa: E731
    return HamiltonianModel("quadratic", {}, H, g, dim, h, True, 2.0)


# ---------------------------------------------------------------------------
# growth fits


def sphere_directions(dim: int, n: int, rng: np.random.Generator) -> Array:
    """``n`` unit vectors; in one dimension these are +1 and -1 alternating."""
    if dim == 1:
        return np.where(np.arange(n) % 2 == 0, 1.0, -1.0)[:, None]
    d = rng.standard_normal((n, dim))
    return d / _norm(d)[:, None]


@dataclass
class GrowthFit:
    exponent: float
    lower: float
    upper: float
    declared: Optional[float]
    sandwich_ok: bool
    superquadratic: bool
    radii: list = field(default_factory=list)

    def as_dict(self):
        return {
            "exponent": self.exponent,
            "lower": self.lower,
            "upper": self.upper,
            "declared": self.declared,
            "sandwich_ok": self.sandwich_ok,
            "superquadratic": self.superquadratic,
        }


def fit_growth_exponent(f: Callable[[Array], Array], dim: int, radii=None,
                        n_dirs: int = 32, declared: float | None = None,
                        seed: int = 0) -> GrowthFit:
    """Log-log least-squares growth exponent of ``f`` and envelope constants.

    ``f`` is sampled at r * d for every radius r and unit direction d.  The
    envelope constants are min and max of f / r^p with p the declared exponent
    when given, else the fitted one.
    """
    radii = np.geomspace(1e1, 1e4, 13) if radii is None else np.asarray(radii, dtype=float)
    dirs = sphere_directions(dim, n_dirs, np.random.default_rng(seed))
    pts = radii[:, None, None] * dirs[None, :, :]
    vals = np.asarray(f(pts), dtype=float)
    if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
        raise ValueError("growth fit needs finite positive values on the ladder")
    logr = np.broadcast_to(np.log(radii)[:, None], vals.shape).ravel()
    slope, _ = np.polyfit(logr, np.log(vals).ravel(), 1)
    p = declared if declared is not None else slope
    ratio = vals / radii[:, None] ** p
    lo, hi = float(ratio.min()), float(ratio.max())
    ok = bool(lo > 0 and np.isfinite(hi))
    if declared is not None:
        ok = ok and abs(slope - declared) < 1e-2 * max(1.0, declared)
    return GrowthFit(float(slope), lo, hi, declared, ok, bool(slope > 2 + 1e-3),
                     radii.tolist())


# ---------------------------------------------------------------------------
# Fenchel transform


def _batched_solve(A, b):
    try:
        return np.linalg.solve(A, b[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.empty_like(b)
        for i in range(b.shape[0]):
            out[i] = np.linalg.lstsq(A[i], b[i], rcond=None)[0]
        return out


@dataclass(frozen=True)
class FenchelPair:
    """A Hamiltonian together with its numerically evaluated conjugate.

    ``G(y) = sup_x {x.y - H(x)}`` is computed by solving ``H'(x) = y`` with a
    damped Newton iteration started from a radial guess tuned to the fitted
    growth exponent; then ``G'(y) = x`` and ``G(y) = x.y - H(x)``.
    """

    base: HamiltonianModel
    beta_hat: float
    alpha: float
    closed_form: Optional[tuple] = None
    max_iter: int = 100

    def solve(self, y: Array) -> Array:
        """The maximizer x*(y) = G'(y), vectorized over leading axes."""
        y = np.asarray(y, dtype=float)
        shape = y.shape
        y2 = y.reshape(-1, shape[-1])
        r = _norm(y2)
        with np.errstate(divide="ignore"):
            scale = np.where(r > 0, r ** (1.0 / (self.beta_hat - 1.0) - 1.0), 0.0)
        x = y2 * scale[:, None]
        tol = 1e-10 * (1.0 + r)
        res = self.base.grad(x) - y2
        err = _norm(res)
        active = np.flatnonzero(err > tol)
        stalls = np.zeros(len(y2), dtype=int)
        for _ in range(self.max_iter):
            if active.size == 0:
                break
            xa, ra, ea = x[active], res[active], err[active]
            step = _batched_solve(self.base.hess(xa), ra)
            t = np.ones(active.size)
            done = np.zeros(active.size, dtype=bool)
            for _h in range(40):
                trial = xa - t[:, None] * step
                rt = self.base.grad(trial) - y2[active]
                et = _norm(rt)
                better = (et < ea) & ~done
                x[active[better]] = trial[better]
                res[active[better]] = rt[better]
                err[active[better]] = et[better]
                done |= better
                if done.all():
                    break
                t = np.where(done, t, 0.5 * t)
            stalls[active[~done]] += 1
            active = active[(err[active] > tol[active]) & (stalls[active] < 3)]
        bad = err > tol
        if np.any(bad):
            i = int(np.argmax(err - tol))
            raise FenchelError(
                f"Newton for H'(x) = y did not converge (residual {err[i]:.3e})",
                witness={"y": y2[i].tolist(), "residual": float(err[i])},
            )
        return x.reshape(shape)

    def G(self, y: Array) -> Array:
        return self.value_and_grad(y)[0]

    def Gprime(self, y: Array) -> Array:
        return self.solve(y)

    def value_and_grad(self, y: Array):
        y = np.asarray(y, dtype=float)
        x = self.solve(y)
        return np.sum(x * y, axis=-1) - self.base.H(x), x


def fenchel_transform(model: HamiltonianModel) -> FenchelPair:
    """Conjugate of a strictly convex superlinear Hamiltonian.

    For the isotropic power family the closed form |y|^alpha / alpha is
    attached as ``closed_form = (G, G')`` for cross-checks; evaluation always
    goes through the numerical engine.
    """
    fit = fit_growth_exponent(model.H, model.dim)
    beta_hat = fit.exponent
    if not beta_hat > 1:
        raise FenchelError(f"fitted growth exponent {beta_hat:.4f} is not superlinear")
    beta = model.growth_beta if model.growth_beta is not None else beta_hat
    alpha = beta / (beta - 1.0)
    closed = None
    if model.name == "power":
        b = float(model.params["beta"])
        a = b / (b - 1.0)
        closed = (
            lambda y: _norm(y) ** a / a,
            lambda y: (_norm(y) ** (a - 2))[..., None] * y,
        )
    return FenchelPair(model, beta_hat, alpha, closed)


def gradient_check(f, grad, dim, n_points=100, radius=10.0, seed=0) -> float:
    """Largest relative error between ``grad`` and central differences of ``f``."""
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-1, 1, (n_points, dim))
    pts *= radius * rng.uniform(0, 1, (n_points, 1)) ** (1 / dim) / np.maximum(_norm(pts), 1e-300)[:, None]
    g = grad(pts)
    fd = np.empty_like(g)
    for d in range(dim):
        h = 1e-6 * (1.0 + np.abs(pts[:, d]))
        e = np.zeros_like(pts)
        e[:, d] = h
        fd[:, d] = (f(pts + e) - f(pts - e)) / (2 * h)
    scale = np.maximum(_norm(g), 1e-8)
    return float(np.max(_norm(g - fd) / scale))


def circular_orbit_radius(period: float) -> float:
    """Radius of the T-periodic circle of z' = J|z|^2 z (angular speed r^2)."""
    return math.sqrt(2 * math.pi / period)
