"""Closed-form families: exact values, parameter wiring, residual checker."""

import math

import numpy as np
import pytest

from homoeuler import DomainError, InsufficientSamples, conjugate
from homoeuler.families import (
    ExplicitFamily,
    FamilyCoeffs,
    FamilyKind,
    evaluate_family,
    harmonic,
    lambda2,
    lambda_half,
    ode_residual,
    parallel_shear,
    point_vortex,
    rotational,
)


def sample(family, lo, hi, n=512):
    thetas = np.linspace(lo, hi, n)
    return [(float(t), *evaluate_family(family, float(t))) for t in thetas]


def bernoulli_values(family, lo, hi, n=256):
    lam, P = family.params.lam, family.params.P
    out = []
    for t in np.linspace(lo, hi, n):
        psi, dpsi = evaluate_family(family, float(t))
        out.append((2.0 * P + lam * lam * psi * psi + dpsi * dpsi)
                   * psi ** (2.0 / lam - 2.0))
    return np.array(out)


class TestFactories:
    def test_rotational_constant_one(self):
        f = rotational(2.0, 2.0)
        for t in (0.0, 1.0, 4.5):
            assert evaluate_family(f, t) == (1.0, 0.0)
        assert f.params.B == pytest.approx(8.0, rel=1e-15)

    def test_rotational_sign_requirement(self):
        with pytest.raises(DomainError):
            rotational(2.0, -1.0)
        with pytest.raises(DomainError):
            rotational(0.5, 1.0)
        rotational(0.5, -1.0)  # (lam-1)P > 0 on the other branch

    def test_shear_params(self):
        f = parallel_shear(2.0, 1.0)
        assert f.params.P == 0.0
        assert f.params.B == pytest.approx(4.0, rel=1e-15)
        with pytest.raises(DomainError):
            parallel_shear(2.0, -1.0)

    def test_lambda2_params(self):
        f = lambda2(1.0, 0.5)
        assert f.params.lam == 2.0
        assert f.params.P == pytest.approx(1.5, rel=1e-15)
        assert f.params.B == pytest.approx(8.0, rel=1e-15)

    def test_lambda_half_params(self):
        f = lambda_half(1.0, 0.5)
        assert f.params.lam == 0.5
        assert f.params.P == pytest.approx(-0.25, rel=1e-15)
        assert f.params.B == pytest.approx(-3.0 / 16.0, rel=1e-15)
        with pytest.raises(DomainError):
            lambda_half(1.0, 1.5)

    def test_lambda2_conjugate_is_lambda_half(self):
        p = conjugate(lambda2(1.0, 0.5).params)
        q = lambda_half(1.0, 0.5).params
        assert (p.lam, p.P, p.B) == pytest.approx((q.lam, q.P, q.B), rel=1e-15)

    def test_harmonic_params(self):
        f = harmonic(2.0, -0.5)
        assert f.params.B == 0.0
        assert evaluate_family(f, 0.0) == (0.5, 0.0)
        with pytest.raises(DomainError):
            harmonic(2.0, 0.5)
        with pytest.raises(DomainError):
            harmonic(0.4, -1.0)


class TestEvaluate:
    def test_lambda2_quarter_turn(self):
        f = lambda2(1.0, 0.5)
        psi, dpsi = evaluate_family(f, math.pi / 4)
        assert psi == pytest.approx(1.0, abs=1e-15)
        assert dpsi == pytest.approx(-1.0, abs=1e-15)

    def test_shear_near_zero_ray(self):
        # float pi/2 is not the exact ray; values decay (lam > 1) or blow up
        psi, dpsi = evaluate_family(parallel_shear(2.5, 1.0), math.pi / 2)
        assert abs(psi) < 1e-39
        assert abs(dpsi) < 1e-23
        _, dpsi = evaluate_family(parallel_shear(0.8, 1.0), math.pi / 2)
        assert abs(dpsi) > 1e2

    def test_lambda_half_imaginary_region(self):
        bad = ExplicitFamily(FamilyKind.LambdaHalf,
                             FamilyCoeffs(gamma1=1.0, gamma2=2.0),
                             lambda_half(1.0, 0.5).params)
        with pytest.raises(DomainError):
            evaluate_family(bad, math.pi)

    def test_parabolic_touch(self):
        f = lambda_half(1.0, 1.0)
        psi, dpsi = evaluate_family(f, math.pi)
        assert psi == 0.0
        assert abs(dpsi) == pytest.approx(math.sqrt(0.5), rel=1e-12)

    def test_parabolic_vanishes_once(self):
        f = lambda_half(1.0, 1.0)
        # grid contains theta = pi exactly, where cos evaluates to -1.0
        thetas = np.linspace(0.0, 2.0 * math.pi, 100000, endpoint=False)
        vals = np.array([evaluate_family(f, float(t))[0] for t in thetas])
        assert np.count_nonzero(vals < 1e-9) == 1

    def test_harmonic_nodes(self):
        f = harmonic(3.0, -1.0)
        psi, dpsi = evaluate_family(f, math.pi / 6)
        assert abs(psi) <= 1e-16
        assert abs(dpsi) == pytest.approx(math.sqrt(2.0), rel=1e-15)


class TestPointVortex:
    def test_pure_vortex(self):
        v = point_vortex(1.0, 0.0)
        assert v.q == -1.0
        ux, uy = v.velocity(2.0, 0.0)
        assert (ux, uy) == (0.0, 0.5)
        # tangential: u . x_hat = 0 on the x axis
        assert v.velocity(3.0, 0.0)[0] == 0.0

    def test_zero_field(self):
        assert point_vortex(0.0, 0.0).velocity(1.0, 1.0) == (0.0, 0.0)

    def test_pure_radial(self):
        v = point_vortex(0.0, 1.0)
        ux, uy = v.velocity(0.0, 2.0)
        assert ux == 0.0
        assert uy == 0.5
        # no tangential component anywhere
        x, y = 1.3, -0.7
        ux, uy = v.velocity(x, y)
        assert ux * (-y) + uy * x == pytest.approx(0.0, abs=1e-15)

    def test_origin_singular(self):
        with pytest.raises(DomainError):
            point_vortex(1.0, 0.0).velocity(0.0, 0.0)


class TestOdeResidual:
    def test_lambda2_full_circle(self):
        f = lambda2(1.0, 0.5)
        rep = ode_residual(sample(f, 0.0, 2.0 * math.pi), 2.0, f.params.P)
        assert rep.max_classical <= 1e-6
        assert len(rep.weak) == 16

    def test_harmonic_arch(self):
        f = harmonic(3.0, -1.0)
        rep = ode_residual(sample(f, -math.pi / 6, math.pi / 6), 3.0, -1.0)
        assert rep.max_classical <= 1e-6
        assert max(abs(w) for w in rep.weak) <= 1e-8

    def test_rotational(self):
        f = rotational(3.0, 1.0)
        rep = ode_residual(sample(f, 0.0, 2.0 * math.pi), 3.0, 1.0)
        assert rep.max_classical <= 1e-12

    def test_shear_arch(self):
        f = parallel_shear(2.5, 1.3)
        rep = ode_residual(sample(f, -math.pi / 2 + 0.05, math.pi / 2 - 0.05),
                           2.5, 0.0)
        assert rep.max_classical <= 1e-6

    def test_lambda_half_full_circle(self):
        f = lambda_half(1.0, 0.5)
        rep = ode_residual(sample(f, 0.0, 2.0 * math.pi), 0.5, f.params.P)
        assert rep.max_classical <= 1e-6

    def test_perturbation_detected(self):
        f = lambda2(1.0, 0.5)
        prof = [(t, psi + 1e-3, dpsi)
                for t, psi, dpsi in sample(f, 0.0, 2.0 * math.pi)]
        rep = ode_residual(prof, 2.0, f.params.P)
        assert rep.max_classical > 1e-4

    def test_nonuniform_resample_path(self):
        f = lambda2(1.0, 0.5)
        n = 512
        u = np.linspace(0.0, 2.0 * math.pi, n)
        thetas = u + 0.3 * (u[1] - u[0]) * np.sin(7.0 * u) \
            * np.ones_like(u) * (u > 0) * (u < u[-1])
        prof = [(float(t), *evaluate_family(f, float(t))) for t in thetas]
        rep = ode_residual(prof, 2.0, f.params.P)
        assert rep.max_classical <= 1e-4
        prof_bad = [(t, psi + 1e-2, dpsi) for t, psi, dpsi in prof]
        assert ode_residual(prof_bad, 2.0, f.params.P).max_classical > 1e-3

    def test_insufficient_samples(self):
        f = lambda2(1.0, 0.5)
        with pytest.raises(InsufficientSamples):
            ode_residual(sample(f, 0.0, 2.0 * math.pi, n=63), 2.0, f.params.P)

    def test_decreasing_theta_rejected(self):
        f = lambda2(1.0, 0.5)
        prof = sample(f, 0.0, 2.0 * math.pi)[::-1]
        with pytest.raises(DomainError):
            ode_residual(prof, 2.0, f.params.P)

    def test_weak_mode_count_configurable(self):
        f = lambda2(1.0, 0.5)
        rep = ode_residual(sample(f, 0.0, 2.0 * math.pi), 2.0, f.params.P,
                           modes=3)
        assert len(rep.weak) == 6


class TestBernoulliAlongFamilies:
    def test_lambda2_constant_eight(self):
        vals = bernoulli_values(lambda2(1.0, 0.5), 0.0, 2.0 * math.pi)
        assert np.max(np.abs(vals - 8.0)) <= 1e-10
        assert np.ptp(vals) <= 1e-9 * 8.0

    def test_lambda_half_anchor(self):
        vals = bernoulli_values(lambda_half(1.0, 0.5), 0.0, 2.0 * math.pi)
        assert np.max(np.abs(vals + 3.0 / 16.0)) <= 1e-10

    def test_harmonic_is_zero(self):
        # stay away from the nodes: psi^(2/lam - 2) blows up there
        vals = bernoulli_values(harmonic(3.0, -1.0), -0.45, 0.45)
        assert np.max(np.abs(vals)) <= 1e-10

    def test_shear_matches_params(self):
        f = parallel_shear(2.5, 1.3)
        vals = bernoulli_values(f, -1.4, 1.4)
        assert np.max(np.abs(vals - f.params.B)) <= 1e-9 * f.params.B

    def test_rotational_constant(self):
        f = rotational(3.0, 0.7)
        vals = bernoulli_values(f, 0.0, 2.0 * math.pi)
        assert np.ptp(vals) == 0.0
