"""Truncated Fourier spaces of T-periodic functions with symmetry constraints.

Coefficients are stored against raw (un-normalized) trigonometric modes.  A
space carries a basis table of ``(raw frequency, kind)`` pairs where kind 0 is
a cosine and kind 1 a sine, and the coefficient array of a trajectory has
shape ``(n_basis, dim)``.

Symmetry classes
----------------
E1
    even about t = 0, T/2 and odd about t = T/4, 3T/4: odd-frequency cosines.
E2
    half-period antisymmetric, x(t + T/2) = -x(t): odd-frequency cosines and
    sines.
E3
    odd functions, x(-t) = -x(t): sines.
FULL_MEANZERO
    every nonzero frequency, cosines and sines.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = [
    "Symmetry",
    "SpaceConfig",
    "QuadratureGrid",
    "TrajectoryCoeffs",
    "DualFieldCoeffs",
    "SymmetryReport",
    "make_space",
    "basis_matrix",
    "synthesize",
    "evaluate",
    "analyze",
    "h1_seminorm",
    "lalpha_norm",
    "pi_operator",
    "derivative",
    "symmetry_check",
    "compress",
    "stretch",
    "frequency_mass",
]

COS, SIN = 0, 1


class Symmetry(str, enum.Enum):
    E1 = "E1"
    E2 = "E2"
    E3 = "E3"
    FULL_MEANZERO = "FULL_MEANZERO"


@dataclass(frozen=True)
class QuadratureGrid:
    """Uniform periodic grid; the trapezoidal rule has equal weights T/M."""

    period: float
    times: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @classmethod
    def uniform(cls, period: float, n: int) -> "QuadratureGrid":
        times = period * np.arange(n) / n
        return cls(period, times, np.full(n, period / n))

    @property
    def size(self) -> int:
        return self.times.size

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Integrate samples over one period along the first axis."""
        return np.tensordot(self.weights, values, axes=(0, 0))


@dataclass(frozen=True)
class SpaceConfig:
    period_T: float
    dim_N: int
    symmetry_class: Symmetry
    num_modes: int
    grid_points: int

    def __post_init__(self):
        if not (self.period_T > 0 and math.isfinite(self.period_T)):
            raise ValueError(f"period_T must be positive, got {self.period_T}")
        if self.dim_N < 1:
            raise ValueError(f"dim_N must be >= 1, got {self.dim_N}")
        if self.num_modes < 1:
            raise ValueError(f"num_modes must be >= 1, got {self.num_modes}")
        object.__setattr__(self, "symmetry_class", Symmetry(self.symmetry_class))
        need = 8 * self.max_frequency
        if self.grid_points < need or self.grid_points % 4:
            raise ValueError(
                f"grid_points={self.grid_points} must be a multiple of 4 and >= {need}"
            )

    @property
    def omega(self) -> float:
        return 2.0 * math.pi / self.period_T

    @property
    def max_frequency(self) -> int:
        if self.symmetry_class in (Symmetry.E1, Symmetry.E2):
            return 2 * self.num_modes - 1
        return self.num_modes

    @cached_property
    def basis(self) -> tuple[np.ndarray, np.ndarray]:
        """Raw frequencies and kinds (0 = cos, 1 = sin) of every basis function."""
        j = np.arange(self.num_modes)
        cls = self.symmetry_class
        if cls is Symmetry.E1:
            freqs, kinds = 2 * j + 1, np.zeros_like(j)
        elif cls is Symmetry.E3:
            freqs, kinds = j + 1, np.ones_like(j)
        else:
            k = 2 * j + 1 if cls is Symmetry.E2 else j + 1
            freqs = np.repeat(k, 2)
            kinds = np.tile([COS, SIN], self.num_modes)
        return freqs.astype(int), kinds.astype(int)

    @property
    def freqs(self) -> np.ndarray:
        return self.basis[0]

    @property
    def kinds(self) -> np.ndarray:
        return self.basis[1]

    @property
    def n_basis(self) -> int:
        return self.freqs.size

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_basis, self.dim_N

    @cached_property
    def grid(self) -> QuadratureGrid:
        return QuadratureGrid.uniform(self.period_T, self.grid_points)

    @cached_property
    def h1_weights(self) -> np.ndarray:
        """Per-basis weight (k omega)^2 T/2 so that ||x||^2 = sum w |c|^2."""
        return (self.freqs * self.omega) ** 2 * self.period_T / 2.0

    def zeros(self) -> "TrajectoryCoeffs":
        return TrajectoryCoeffs(self, np.zeros(self.shape))


def make_space(period_T, dim_N, symmetry_class, num_modes, grid_points=None) -> SpaceConfig:
    """Build a space; the grid defaults to max(64, 8 * largest raw frequency)."""
    sym = Symmetry(symmetry_class)
    if num_modes < 1:
        raise ValueError(f"num_modes must be >= 1, got {num_modes}")
    kmax = 2 * num_modes - 1 if sym in (Symmetry.E1, Symmetry.E2) else num_modes
    if grid_points is None:
        grid_points = max(64, 8 * kmax)
    return SpaceConfig(float(period_T), int(dim_N), sym, int(num_modes), int(grid_points))


@dataclass
class TrajectoryCoeffs:
    space: SpaceConfig
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=float).reshape(self.space.shape)

    def __add__(self, other):
        return type(self)(self.space, self.coeffs + _coeffs_of(other, self.space))

    def __sub__(self, other):
        return type(self)(self.space, self.coeffs - _coeffs_of(other, self.space))

    def __mul__(self, s):
        return type(self)(self.space, self.coeffs * float(s))

    __rmul__ = __mul__

    def __neg__(self):
        return type(self)(self.space, -self.coeffs)

    @property
    def flat(self) -> np.ndarray:
        return self.coeffs.ravel()


class DualFieldCoeffs(TrajectoryCoeffs):
    """Mean-zero field on R^{2n}; the space must be FULL_MEANZERO."""

    def __post_init__(self):
        super().__post_init__()
        if self.space.symmetry_class is not Symmetry.FULL_MEANZERO:
            raise ValueError("dual fields live in the FULL_MEANZERO class")
        if self.space.dim_N % 2:
            raise ValueError("dual fields need an even dimension 2n")

    def cosine(self, k: int) -> np.ndarray:
        return self.coeffs[2 * (k - 1)]

    def sine(self, k: int) -> np.ndarray:
        return self.coeffs[2 * (k - 1) + 1]


def _coeffs_of(other, space):
    if isinstance(other, TrajectoryCoeffs):
        if other.space != space:
            raise ValueError("space mismatch")
        return other.coeffs
    return np.asarray(other, dtype=float).reshape(space.shape)


def basis_matrix(space: SpaceConfig, times, order: int = 0) -> np.ndarray:
    """Values of the ``order``-th time derivative of each basis function.

    Returns an array of shape ``(len(times), n_basis)``.
    """
    t = np.asarray(times, dtype=float)
    w = space.freqs * space.omega
    # phase reduced in integer cycles first so that sample values at grid
    # times are symmetric to rounding
    phase = 2.0 * np.pi * np.mod(np.outer(t / space.period_T, space.freqs), 1.0)
    c, s = np.cos(phase), np.sin(phase)
    # derivative cycle: cos -> -sin -> -cos -> sin, and sin -> cos -> -sin -> -cos
    cyc_cos = (c, -s, -c, s)
    cyc_sin = (s, c, -s, -c)
    n = order % 4
    out = np.where(space.kinds == COS, cyc_cos[n], cyc_sin[n])
    return w**order * out


def _grid_basis(space: SpaceConfig, order: int) -> np.ndarray:
    cache = space.__dict__.setdefault("_basis_cache", {})
    if order not in cache:
        cache[order] = basis_matrix(space, space.grid.times, order)
    return cache[order]


def synthesize(x: TrajectoryCoeffs, grid: QuadratureGrid | None = None, order: int = 1):
    """Samples of x and its first ``order`` derivatives on a grid.

    Returns a tuple ``(x, xdot, ...)`` of arrays with shape ``(M, dim)``.
    """
    space = x.space
    if grid is None or grid is space.grid:
        mats = [_grid_basis(space, n) for n in range(order + 1)]
    else:
        if not math.isclose(grid.period, space.period_T, rel_tol=1e-14):
            raise ValueError("grid period does not match the space")
        mats = [basis_matrix(space, grid.times, n) for n in range(order + 1)]
    return tuple(B @ x.coeffs for B in mats)


def evaluate(x: TrajectoryCoeffs, times, order: int = 0) -> np.ndarray:
    """Evaluate x (or a derivative) at arbitrary times."""
    return basis_matrix(x.space, times, order) @ x.coeffs


def analyze(samples, space: SpaceConfig, full_output: bool = False):
    """Project grid samples onto the space.

    With ``full_output`` also returns a dict holding the sup-norm of the part
    of the samples the space cannot represent and the sample mean.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim == 1:
        samples = samples[:, None]
    M = space.grid_points
    if samples.shape != (M, space.dim_N):
        raise ValueError(f"expected samples of shape {(M, space.dim_N)}, got {samples.shape}")
    B = _grid_basis(space, 0)
    # discrete orthogonality: sum_i phi_j(t_i) phi_l(t_i) = (M/2) delta_jl for 0 < k < M/2
    coeffs = (2.0 / M) * (B.T @ samples)
    x = TrajectoryCoeffs(space, coeffs)
    if not full_output:
        return x
    residual = samples - B @ coeffs
    info = {
        "residual_sup": float(np.max(np.abs(residual))),
        "mean": samples.mean(axis=0),
    }
    return x, info


def h1_seminorm(x: TrajectoryCoeffs) -> float:
    """(int_0^T |xdot|^2 dt)^{1/2} by Parseval."""
    return float(np.sqrt(np.sum(x.space.h1_weights[:, None] * x.coeffs**2)))


def lalpha_norm(u: TrajectoryCoeffs, alpha: float) -> float:
    if not alpha > 1:
        raise ValueError(f"alpha must exceed 1, got {alpha}")
    (vals,) = synthesize(u, order=0)
    mod = np.linalg.norm(vals, axis=1)
    return float(u.space.grid.integrate(mod**alpha) ** (1.0 / alpha))


def pi_operator(u: TrajectoryCoeffs) -> TrajectoryCoeffs:
    """Mean-zero antiderivative: d/dt (Pi u) = u and int Pi u = 0."""
    space = u.space
    if space.symmetry_class not in (Symmetry.FULL_MEANZERO, Symmetry.E2):
        raise ValueError("Pi needs a class closed under antidifferentiation (E2 or FULL_MEANZERO)")
    w = (space.freqs[::2] * space.omega)[:, None]
    c, s = u.coeffs[0::2], u.coeffs[1::2]
    out = np.empty_like(u.coeffs)
    # int c cos(wt) = (c/w) sin(wt);  int s sin(wt) = -(s/w) cos(wt)
    out[0::2] = -s / w
    out[1::2] = c / w
    return type(u)(space, out)


def derivative(u: TrajectoryCoeffs) -> TrajectoryCoeffs:
    """Term-wise time derivative (same closure requirement as Pi)."""
    space = u.space
    if space.symmetry_class not in (Symmetry.FULL_MEANZERO, Symmetry.E2):
        raise ValueError("derivative needs the E2 or FULL_MEANZERO class")
    w = (space.freqs[::2] * space.omega)[:, None]
    c, s = u.coeffs[0::2], u.coeffs[1::2]
    out = np.empty_like(u.coeffs)
    out[0::2] = w * s
    out[1::2] = -w * c
    return type(u)(space, out)


@dataclass
class SymmetryReport:
    symmetry_class: Symmetry
    violations: dict
    tol: float

    @property
    def max_violation(self) -> float:
        return max(self.violations.values())

    @property
    def passed(self) -> bool:
        return self.max_violation <= self.tol


def symmetry_check(samples, symmetry_class, tol: float = 1e-12) -> SymmetryReport:
    """Check the defining identities of a class on uniform-grid samples.

    ``samples`` must cover one period at t_i = i T / M with M divisible by 4.
    Violations are absolute sup-norm differences.
    """
    x = np.asarray(samples, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    M = x.shape[0]
    if M % 4:
        raise ValueError(f"grid size {M} is not divisible by 4")
    sym = Symmetry(symmetry_class)
    i = np.arange(M)

    def at(offset, sign):
        return x[(offset + sign * i) % M]

    identities = {}
    if sym is Symmetry.E1:
        identities["even_about_0"] = x - at(0, -1)
        identities["even_about_T/2"] = at(M // 2, 1) - at(M // 2, -1)
        identities["odd_about_T/4"] = at(M // 4, 1) + at(M // 4, -1)
        identities["odd_about_3T/4"] = at(3 * M // 4, 1) + at(3 * M // 4, -1)
    elif sym is Symmetry.E2:
        identities["antiperiodic_T/2"] = at(M // 2, 1) + x
    elif sym is Symmetry.E3:
        identities["odd_about_0"] = x + at(0, -1)
    identities["mean_zero"] = x.mean(axis=0, keepdims=True)
    violations = {k: float(np.max(np.abs(v))) for k, v in identities.items()}
    return SymmetryReport(sym, violations, tol)


def frequency_mass(x: TrajectoryCoeffs) -> dict[int, float]:
    """Euclidean coefficient mass per raw frequency."""
    out: dict[int, float] = {}
    for k, row in zip(x.space.freqs, x.coeffs):
        out[int(k)] = out.get(int(k), 0.0) + float(row @ row)
    return {k: math.sqrt(v) for k, v in out.items()}


def _transplant(x: TrajectoryCoeffs, target: SpaceConfig, fmap) -> TrajectoryCoeffs:
    index = {(int(k), int(kind)): j for j, (k, kind) in enumerate(zip(*target.basis))}
    out = np.zeros(target.shape)
    for (k, kind), row in zip(zip(*x.space.basis), x.coeffs):
        if not np.any(row):
            continue
        key = (fmap(int(k)), int(kind))
        if key not in index:
            raise ValueError(f"frequency {key[0]} ({'cos' if kind == COS else 'sin'}) "
                             f"not representable in {target.symmetry_class.value}")
        out[index[key]] = row
    return type(x)(target, out)


def compress(x: TrajectoryCoeffs, k: int, target: SpaceConfig | None = None) -> TrajectoryCoeffs:
    """The k-fold iterate t -> x(k t), a T/k-periodic trajectory.

    By default the result lives in the FULL_MEANZERO space with k times the
    frequency budget, which can always represent it.
    """
    if target is None:
        sp = x.space
        target = make_space(sp.period_T, sp.dim_N, Symmetry.FULL_MEANZERO, k * sp.max_frequency)
    return _transplant(x, target, lambda f: k * f)


def stretch(x: TrajectoryCoeffs, k: int, target: SpaceConfig | None = None) -> TrajectoryCoeffs:
    """t -> x(t / k); needs every active frequency of x to be a multiple of k."""
    target = target or x.space

    def fmap(f):
        if f % k:
            raise ValueError(f"frequency {f} is not a multiple of {k}: x is not T/{k}-periodic")
        return f // k

    return _transplant(x, target, fmap)
