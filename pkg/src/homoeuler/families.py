"""Closed-form solution families and a residual checker for sampled profiles.

Five profile families solve the angular ODE exactly: the constant rotational
flow, the parallel shear flow A |cos theta|^lam at P = 0, the full lam = 2
family gamma1 + gamma2 cos(2 theta), its lam = 1/2 conjugate
sqrt(gamma1 + gamma2 cos theta), and the B = 0 harmonic arch.  The point
vortex sits outside this family: its velocity is homogeneous of degree -1 and
admits no r^lam stream function, so it is kept as a bare field descriptor.

ode_residual measures how well an arbitrary sampled profile satisfies

    2 (lam - 1) P = -(lam - 1) (psi')^2 + lam^2 psi^2 + lam psi'' psi

both pointwise (psi'' by finite differences) and in the weak form obtained by
multiplying with a 2 pi-periodic test function and integrating by parts.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._mesh import hermite_pair, simpson_uniform
from .core import FlowParams
from .errors import DomainError, InsufficientSamples

__all__ = [
    "FamilyKind",
    "FamilyCoeffs",
    "ExplicitFamily",
    "PointVortexField",
    "ResidualReport",
    "rotational",
    "parallel_shear",
    "lambda2",
    "lambda_half",
    "harmonic",
    "point_vortex",
    "evaluate_family",
    "ode_residual",
]

WEAK_MODE_COUNT = 8


class FamilyKind(enum.Enum):
    Rotational = "Rotational"
    ParallelShear = "ParallelShear"
    Lambda2 = "Lambda2"
    LambdaHalf = "LambdaHalf"
    Harmonic = "Harmonic"
    PointVortex = "PointVortex"


@dataclass(frozen=True)
class FamilyCoeffs:
    """Coefficients of a closed-form family; unused slots stay at 0."""

    A: float = 0.0
    B_coef: float = 0.0
    gamma1: float = 0.0
    gamma2: float = 0.0


@dataclass(frozen=True)
class ExplicitFamily:
    """A closed-form angular profile together with its (lam, P, B) triple."""

    kind: FamilyKind
    coeffs: FamilyCoeffs
    params: FlowParams


@dataclass(frozen=True)
class PointVortexField:
    """Velocity field u = (A tau + B nu)/r with tangential/radial unit vectors.

    The homogeneity degree is q = -1, outside the stream-function framework;
    A = circulation strength, B_coef = radial (source-type) strength.
    """

    A: float
    B_coef: float

    @property
    def q(self) -> float:
        return -1.0

    def velocity(self, x: float, y: float) -> tuple[float, float]:
        """Cartesian velocity at (x, y) != 0."""
        r2 = x * x + y * y
        if r2 == 0.0:
            raise DomainError("point vortex velocity is singular at the origin")
        # tau = (-sin, cos), nu = (cos, sin); divide by r once more for 1/r decay
        return (
            (-self.A * y + self.B_coef * x) / r2,
            (self.A * x + self.B_coef * y) / r2,
        )


@dataclass(frozen=True)
class ResidualReport:
    """Pointwise and weak-form defects of a profile against the angular ODE."""

    max_classical: float
    weak: tuple[float, ...]


def rotational(lam: float, P: float) -> ExplicitFamily:
    """Constant profile psi = sqrt(2 (lam - 1) P)/lam; needs (lam - 1) P > 0."""
    if not (lam - 1.0) * P > 0.0:
        raise DomainError(f"rotational flow requires (lam - 1) P > 0, "
                          f"got lam={lam}, P={P}")
    c = math.sqrt(2.0 * (lam - 1.0) * P) / lam
    B = (2.0 * P + lam * lam * c * c) * math.pow(c, 2.0 / lam - 2.0)
    return ExplicitFamily(FamilyKind.Rotational, FamilyCoeffs(A=c),
                          FlowParams(lam, P, B))


def parallel_shear(lam: float, A: float) -> ExplicitFamily:
    """Shear profile psi = A |cos theta|^lam at P = 0."""
    if not A > 0.0:
        raise DomainError("parallel shear amplitude must be positive")
    B = lam * lam * math.pow(A, 2.0 / lam)
    return ExplicitFamily(FamilyKind.ParallelShear, FamilyCoeffs(A=A),
                          FlowParams(lam, 0.0, B))


def lambda2(gamma1: float, gamma2: float) -> ExplicitFamily:
    """Full lam = 2 family psi = gamma1 + gamma2 cos(2 theta)."""
    P = 2.0 * (gamma1 * gamma1 - gamma2 * gamma2)
    return ExplicitFamily(FamilyKind.Lambda2,
                          FamilyCoeffs(gamma1=gamma1, gamma2=gamma2),
                          FlowParams(2.0, P, 8.0 * gamma1))


def lambda_half(gamma1: float, gamma2: float) -> ExplicitFamily:
    """Full lam = 1/2 family psi = sqrt(gamma1 + gamma2 cos theta).

    Requires |gamma2| <= gamma1 so the profile is real on the whole circle;
    equality gives the parabolic profile vanishing at exactly one point.
    """
    if not abs(gamma2) <= gamma1:
        raise DomainError("lambda_half requires |gamma2| <= gamma1")
    B = 0.25 * (gamma2 * gamma2 - gamma1 * gamma1)
    return ExplicitFamily(FamilyKind.LambdaHalf,
                          FamilyCoeffs(gamma1=gamma1, gamma2=gamma2),
                          FlowParams(0.5, -0.25 * gamma1, B))


def harmonic(lam: float, P: float) -> ExplicitFamily:
    """Oscillator arch psi = (sqrt(-2 P)/lam) cos(lam theta); B = 0 exactly."""
    if not P < 0.0:
        raise DomainError("harmonic profile requires P < 0")
    if not lam >= 0.5:
        raise DomainError("harmonic arch is sign-definite only for lam >= 1/2")
    amp = math.sqrt(-2.0 * P) / lam
    return ExplicitFamily(FamilyKind.Harmonic, FamilyCoeffs(A=amp),
                          FlowParams(lam, P, 0.0))


def point_vortex(A: float, B: float) -> PointVortexField:
    """Degree -1 field u = (A tau + B nu)/r; A=1, B=0 is the point vortex."""
    return PointVortexField(A=A, B_coef=B)


def evaluate_family(f: ExplicitFamily, theta: float) -> tuple[float, float]:
    """Exact (psi, psi') of a closed-form family at angle theta.

    At the parabolic touch point of the lam = 1/2 family (|gamma2| = gamma1)
    the left one-sided slope is returned.

    Raises
    ------
    DomainError
        LambdaHalf outside {gamma1 + gamma2 cos theta >= 0}; ParallelShear on
        a zero ray when lam <= 1 (the slope is not defined there).
    """
    c = f.coeffs
    if f.kind is FamilyKind.Rotational:
        return (c.A, 0.0)
    if f.kind is FamilyKind.ParallelShear:
        lam = f.params.lam
        ct = math.cos(theta)
        if ct == 0.0:
            if lam <= 1.0:
                raise DomainError("shear slope undefined on the zero ray")
            return (0.0, 0.0)
        psi = c.A * math.pow(abs(ct), lam)
        dpsi = -c.A * lam * math.pow(abs(ct), lam - 1.0) \
            * math.copysign(1.0, ct) * math.sin(theta)
        return (psi, dpsi)
    if f.kind is FamilyKind.Lambda2:
        return (c.gamma1 + c.gamma2 * math.cos(2.0 * theta),
                -2.0 * c.gamma2 * math.sin(2.0 * theta))
    if f.kind is FamilyKind.LambdaHalf:
        v = c.gamma1 + c.gamma2 * math.cos(theta)
        if v < 0.0:
            raise DomainError(
                f"profile is imaginary where gamma1 + gamma2 cos theta < 0 "
                f"(theta={theta})")
        if v == 0.0:
            slope = math.sqrt(0.5 * c.gamma1)
            return (0.0, -slope if math.sin(theta) >= 0.0 else slope)
        return (math.sqrt(v), -0.5 * c.gamma2 * math.sin(theta) / math.sqrt(v))
    if f.kind is FamilyKind.Harmonic:
        lam = f.params.lam
        return (c.A * math.cos(lam * theta),
                -c.A * lam * math.sin(lam * theta))
    raise DomainError(f"{f.kind} has no angular profile")


def _resample_uniform(theta: np.ndarray, psi: np.ndarray, dpsi: np.ndarray,
                      factor: int = 1):
    """Profile on a uniform grid over [theta[0], theta[-1]].

    factor > 1 refines a non-uniform input beyond its own node count: the
    Hermite values stay accurate to the input spacing while the finer grid
    keeps the Simpson tail of the weak integrals below the interpolation
    floor.  The classical stencil must stay at factor 1, where differencing
    does not amplify the interpolation wiggle.
    """
    n = theta.shape[0]
    h = (theta[-1] - theta[0]) / (n - 1)
    gaps = np.diff(theta)
    if np.max(np.abs(gaps - h)) <= 1e-12 * h:
        return theta, psi, dpsi, float(h)
    m = min(factor * (n - 1), 16384) + 1
    tu = np.linspace(theta[0], theta[-1], m)
    pu, du = hermite_pair(tu, theta, psi, dpsi)
    return tu, pu, du, float((theta[-1] - theta[0]) / (m - 1))


def ode_residual(profile, lam: float, P: float,
                 modes: int = WEAK_MODE_COUNT) -> ResidualReport:
    """Defect of a sampled profile against the angular ODE.

    Parameters
    ----------
    profile : sequence of (theta, psi, dpsi)
        Samples of one sign-definite arc (or a full non-vanishing circle),
        theta strictly increasing, at least 64 points.
    lam, P : float
    modes : int
        Highest Fourier mode used for the weak residual (2 modes per k).

    Returns
    -------
    ResidualReport
        max_classical: max over interior points of
        |2 (lam-1) P + (lam-1) (psi')^2 - lam^2 psi^2 - lam psi'' psi| with
        psi'' from 5-point centered stencils on a uniform resample.
        weak: for each test function phi (Fourier modes cos/sin k theta,
        k = 1..8) the value of
        int [-(2 lam - 1)(psi')^2 + lam^2 psi^2] phi - lam psi psi' phi'
        - 2 (lam - 1) P phi dtheta, which vanishes for true weak solutions.

    Raises
    ------
    InsufficientSamples
        Fewer than 64 samples.
    DomainError
        Non-increasing theta samples.
    """
    arr = np.asarray(profile, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] < 64:
        raise InsufficientSamples(
            "need at least 64 (theta, psi, dpsi) samples per arc")
    theta, psi, dpsi = arr[:, 0], arr[:, 1], arr[:, 2]
    if np.any(np.diff(theta) <= 0.0):
        raise DomainError("profile samples must have strictly increasing theta")

    tu, pu, du, h = _resample_uniform(theta, psi, dpsi)

    # interior psi'' by the 4th-order 5-point stencil
    dd = (-pu[:-4] + 16.0 * pu[1:-3] - 30.0 * pu[2:-2]
          + 16.0 * pu[3:-1] - pu[4:]) / (12.0 * h * h)
    pin = pu[2:-2]
    din = du[2:-2]
    classical = (2.0 * (lam - 1.0) * P + (lam - 1.0) * din * din
                 - lam * lam * pin * pin - lam * dd * pin)
    max_classical = float(np.max(np.abs(classical)))

    tu, pu, du, h = _resample_uniform(theta, psi, dpsi, factor=4)
    bulk = -(2.0 * lam - 1.0) * du * du + lam * lam * pu * pu \
        - 2.0 * (lam - 1.0) * P
    cross = lam * pu * du
    weak = []
    for k in range(1, modes + 1):
        ck = np.cos(k * tu)
        sk = np.sin(k * tu)
        weak.append(h * (simpson_uniform(bulk * ck) + simpson_uniform(cross * k * sk)))
        weak.append(h * (simpson_uniform(bulk * sk) - simpson_uniform(cross * k * ck)))
    return ResidualReport(max_classical=max_classical, weak=tuple(weak))
