"""Direct action psi and Clarke dual action Phi in coefficient space.

Both contexts expose the same small surface used by the fiber analysis and
the sphere solver:

* ``value(c)``, ``gradient(c)`` with ``c`` the raw coefficient array;
* ``ray(e)`` returning the quadratic coefficient ``kappa`` and callables for
  the nonlinear part along ``s -> s e``;
* ``norm(c)`` (H^1 seminorm, resp. L^alpha norm) and ``riesz(g)``, the
  preconditioner that turns a coefficient gradient into a descent step.

The direct action is  psi(x) = 1/2 int |xdot|^2 - int V(x),
the dual action is    Phi(u) = 1/2 int (J u, Pi u) + int G(u).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .models import FenchelPair, PotentialModel
from .symfun import (
    DualFieldCoeffs,
    SpaceConfig,
    Symmetry,
    TrajectoryCoeffs,
    _grid_basis,
    lalpha_norm,
)

__all__ = [
    "DirectActionContext",
    "DualActionContext",
    "Cone",
    "symplectic_matrix",
    "direct_action",
    "direct_gradient",
    "quadratic_form_a",
    "cone_classify",
    "dual_action",
    "dual_gradient",
]


def _arr(x, space):
    if isinstance(x, TrajectoryCoeffs):
        if x.space != space:
            raise ValueError("coefficients belong to a different space")
        return x.coeffs
    return np.asarray(x, dtype=float).reshape(space.shape)


def symplectic_matrix(dim: int) -> np.ndarray:
    n = dim // 2
    J = np.zeros((dim, dim))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    return J


@dataclass(frozen=True)
class Ray:
    """Restriction of a functional to s -> s e.

    ``phi(s) = kappa s^2 / 2 + sign * N(s)`` where ``N`` is the nonlinear
    part and ``dN(s) = d/ds N(s)``.
    """

    kappa: float
    sign: float
    N: object
    dN: object


@dataclass(frozen=True)
class DirectActionContext:
    space: SpaceConfig
    potential: PotentialModel

    def __post_init__(self):
        if self.potential.dim != self.space.dim_N:
            raise ValueError("potential dimension does not match the space")

    @property
    def grid(self):
        return self.space.grid

    @property
    def kind(self) -> str:
        return "direct"

    def wrap(self, c) -> TrajectoryCoeffs:
        return TrajectoryCoeffs(self.space, np.array(c, dtype=float))

    def samples(self, c) -> np.ndarray:
        return _grid_basis(self.space, 0) @ _arr(c, self.space)

    def norm(self, c) -> float:
        c = _arr(c, self.space)
        return float(np.sqrt(np.sum(self.space.h1_weights[:, None] * c**2)))

    def riesz(self, g) -> np.ndarray:
        return _arr(g, self.space) / self.space.h1_weights[:, None]

    def metric_norm(self, c) -> float:
        """Norm of the inner product that ``riesz`` inverts."""
        return self.norm(c)

    def kinetic(self, c) -> float:
        return 0.5 * self.norm(c) ** 2

    def potential_integral(self, c) -> float:
        X = self.samples(c)
        V = self.potential.V(X)
        if not np.all(np.isfinite(V)):
            raise FloatingPointError("non-finite potential values on the grid")
        return float(self.grid.integrate(V))

    def value(self, c) -> float:
        return self.kinetic(c) - self.potential_integral(c)

    def gradient(self, c) -> np.ndarray:
        c = _arr(c, self.space)
        B = _grid_basis(self.space, 0)
        dV = self.potential.grad(B @ c)
        if not np.all(np.isfinite(dV)):
            raise FloatingPointError("non-finite potential gradient on the grid")
        w = self.grid.weights[:, None]
        return self.space.h1_weights[:, None] * c - B.T @ (w * dV)

    def hessian(self, c) -> np.ndarray:
        """Full coefficient-space Hessian, flattened in (basis, component) order."""
        c = _arr(c, self.space)
        B = _grid_basis(self.space, 0)
        nb, N = self.space.shape
        H2 = self.potential.hess(B @ c) * self.grid.weights[:, None, None]
        pot = np.einsum("ij,il,ide->jdle", B, B, H2).reshape(nb * N, nb * N)
        kin = np.diag(np.repeat(self.space.h1_weights, N))
        return kin - pot

    def ray(self, e) -> Ray:
        Xe = self.samples(e)
        w = self.grid.weights
        V, dV = self.potential.V, self.potential.grad

        def N(s):
            return float(w @ V(s * Xe))

        def dN(s):
            return float(w @ np.sum(dV(s * Xe) * Xe, axis=1))

        return Ray(self.norm(e) ** 2, -1.0, N, dN)


class Cone(str, enum.Enum):
    P_PLUS = "P_PLUS"
    P_MINUS = "P_MINUS"
    P_ZERO = "P_ZERO"


@dataclass(frozen=True)
class DualActionContext:
    space: SpaceConfig
    pair: FenchelPair
    tol_cone: float = 1e-10

    def __post_init__(self):
        if self.space.symmetry_class is not Symmetry.FULL_MEANZERO:
            raise ValueError("the dual action lives on FULL_MEANZERO fields")
        if self.space.dim_N % 2 or self.space.dim_N != self.pair.base.dim:
            raise ValueError("dual space dimension must equal the Hamiltonian's 2n")

    @property
    def grid(self):
        return self.space.grid

    @property
    def kind(self) -> str:
        return "dual"

    @property
    def alpha(self) -> float:
        return self.pair.alpha

    @property
    def J(self) -> np.ndarray:
        return symplectic_matrix(self.space.dim_N)

    def wrap(self, c) -> DualFieldCoeffs:
        return DualFieldCoeffs(self.space, np.array(c, dtype=float))

    def samples(self, c) -> np.ndarray:
        return _grid_basis(self.space, 0) @ _arr(c, self.space)

    def _afactor(self) -> np.ndarray:
        k = self.space.freqs[0::2]
        return -(self.space.period_T**2) / (4.0 * math.pi * k)

    def form(self, c, d) -> float:
        """The symmetric bilinear form a(u, v) = int (J u, Pi v) dt."""
        c, d = _arr(c, self.space), _arr(d, self.space)
        J = self.J
        f = self._afactor()
        Jc_u, Jc_v = c[0::2] @ J.T, d[0::2] @ J.T
        terms = np.sum(Jc_u * d[1::2], axis=1) + np.sum(Jc_v * c[1::2], axis=1)
        return float(np.sum(f * terms))

    def form_gradient(self, c) -> np.ndarray:
        """Gradient of a(u, u) / 2 with respect to the coefficients."""
        c = _arr(c, self.space)
        J = self.J
        f = self._afactor()[:, None]
        out = np.empty_like(c)
        out[0::2] = f * (c[1::2] @ J)
        out[1::2] = f * (c[0::2] @ J.T)
        return out

    def norm(self, c) -> float:
        return lalpha_norm(TrajectoryCoeffs(self.space, _arr(c, self.space)), self.alpha)

    def riesz(self, g) -> np.ndarray:
        return _arr(g, self.space) / (self.space.period_T / 2.0)

    def metric_norm(self, c) -> float:
        """L^2 norm, the inner product that ``riesz`` inverts."""
        return float(np.sqrt(0.5 * self.space.period_T * np.sum(_arr(c, self.space) ** 2)))

    def conjugate_integral(self, c) -> float:
        G, _ = self.pair.value_and_grad(self.samples(c))
        return float(self.grid.integrate(G))

    def value(self, c) -> float:
        c = _arr(c, self.space)
        return 0.5 * self.form(c, c) + self.conjugate_integral(c)

    def gradient(self, c) -> np.ndarray:
        c = _arr(c, self.space)
        B = _grid_basis(self.space, 0)
        Gp = self.pair.Gprime(B @ c)
        # explicit mean-zero projection: the constraint int u = 0 only fixes
        # the Euler-Lagrange equation modulo constants
        Gp = Gp - Gp.mean(axis=0)
        return self.form_gradient(c) + B.T @ (self.grid.weights[:, None] * Gp)

    def cone(self, c) -> Cone:
        c = _arr(c, self.space)
        if not np.any(c):
            raise ValueError("the zero field has no cone")
        a = self.form(c, c)
        band = self.tol_cone * self.norm(c) ** 2
        if a < -band:
            return Cone.P_MINUS
        if a > band:
            return Cone.P_PLUS
        return Cone.P_ZERO

    def ray(self, e) -> Ray:
        Ue = self.samples(e)
        w = self.grid.weights
        pair = self.pair

        def N(s):
            return float(w @ pair.G(s * Ue))

        def dN(s):
            return float(w @ np.sum(pair.Gprime(s * Ue) * Ue, axis=1))

        return Ray(self.form(e, e), 1.0, N, dN)


# ---------------------------------------------------------------------------
# functional API


def direct_action(ctx: DirectActionContext, x) -> float:
    return ctx.value(x)


def direct_gradient(ctx: DirectActionContext, x) -> np.ndarray:
    return ctx.gradient(x)


def quadratic_form_a(u, v, ctx: DualActionContext | None = None) -> float:
    """a(u, v) for two dual fields of the same space."""
    if isinstance(u, TrajectoryCoeffs) and isinstance(v, TrajectoryCoeffs) and u.space != v.space:
        raise ValueError("space mismatch")
    if ctx is None:
        ctx = _FormOnly(u.space)
    return ctx.form(u, v)


class _FormOnly:
    """Just the bilinear form, for callers that have no Fenchel pair."""

    def __init__(self, space):
        self.space = space

    form = DualActionContext.form
    _afactor = DualActionContext._afactor
    J = DualActionContext.J


def cone_classify(u, ctx: DualActionContext | None = None, alpha: float = 4 / 3,
                  tol: float = 1e-10) -> Cone:
    """Sign of a(u, u) with a dead band tol * ||u||_alpha^2."""
    if ctx is not None:
        return ctx.cone(u)
    c = u.coeffs
    if not np.any(c):
        raise ValueError("the zero field has no cone")
    a = quadratic_form_a(u, u)
    band = tol * lalpha_norm(u, alpha) ** 2
    if a < -band:
        return Cone.P_MINUS
    if a > band:
        return Cone.P_PLUS
    return Cone.P_ZERO


def dual_action(ctx: DualActionContext, u) -> float:
    return ctx.value(u)


def dual_gradient(ctx: DualActionContext, u) -> np.ndarray:
    return ctx.gradient(u)
