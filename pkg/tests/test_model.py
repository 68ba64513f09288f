import cmath
import math

import mpmath as mp
import numpy as np
import pytest

from djcqsl import (
    DensityMatrix,
    InternalConsistencyError,
    InvalidInputError,
    ModelParams,
    RateSingularityError,
    basis_state,
    evolve,
    master_rhs,
    propagator,
    rates,
    state_derivative,
    stationary_state,
    trace_distance,
)

from conftest import random_density, random_params

FIRST_ZERO_CRITICAL = 4.0 * math.pi / (3.0 * math.sqrt(3.0))  # gamma0=2, delta=0


def mp_propagator(g: float, d: float, u, dps: int = 50):
    """High-precision reimplementation of the closed form (test oracle)."""
    with mp.workdps(dps):
        alpha = mp.mpc(1.0, -d)
        om = mp.sqrt(alpha * alpha - 2 * g)
        x = om * mp.mpf(u) / 2
        shc = mp.sinh(x) / x if abs(x) > mp.mpf("1e-40") else mp.mpf(1)
        return mp.exp(-alpha * mp.mpf(u) / 2) * (alpha * (mp.mpf(u) / 2) * shc + mp.cosh(x))


class TestPropagator:
    def test_unit_at_time_zero(self, rng):
        for _ in range(20):
            p = random_params(rng)
            s = propagator(p, 0.0)
            assert s.G == 1.0 + 0.0j
            assert s.G_dot == 0.0 + 0.0j

    def test_uncoupled_is_frozen(self):
        p = ModelParams(0.0, 0.3)
        for t in (0.0, 0.5, 3.0, 40.0):
            s = propagator(p, t)
            assert s.G == pytest.approx(1.0 + 0.0j, abs=1e-12)
            assert abs(s.G_dot) <= 1e-12

    def test_matches_high_precision_reference(self, rng):
        for _ in range(300):
            p = random_params(rng)
            t = rng.uniform(0.0, 60.0)
            ref = complex(mp_propagator(p.gamma0_over_lambda, p.delta_over_lambda, t))
            got = propagator(p, t).G
            assert got == pytest.approx(ref, abs=1e-12 + 1e-12 * abs(ref))

    def test_first_zero_at_critical_coupling(self):
        # independent root: cos(sqrt(3) t / 2) + sin(sqrt(3) t / 2)/sqrt(3) = 0
        import scipy.optimize

        bracket = lambda t: math.cos(math.sqrt(3) * t / 2) + math.sin(
            math.sqrt(3) * t / 2) / math.sqrt(3)
        root = scipy.optimize.brentq(bracket, 2.0, 3.0, xtol=1e-14)
        assert root == pytest.approx(FIRST_ZERO_CRITICAL, abs=1e-12)
        p = ModelParams(2.0, 0.0)
        assert abs(propagator(p, root).G) <= 1e-12
        assert abs(propagator(p, root - 0.3).G) > 1e-2
        assert abs(propagator(p, 1.0).G) > 0.1

    def test_branch_independence(self, rng):
        # G written with -Omega must reproduce G: sinh odd, cosh even
        for _ in range(100):
            p = random_params(rng)
            t = rng.uniform(0.01, 30.0)
            alpha = p.alpha
            om = -p.omega_over_lambda
            x = om * t / 2.0
            flipped = cmath.exp(-alpha * t / 2.0) * (
                (alpha / om) * cmath.sinh(x) + cmath.cosh(x)
            )
            assert propagator(p, t).G == pytest.approx(flipped, abs=1e-12)

    def test_degenerate_omega(self):
        p = ModelParams(0.5, 0.0)
        assert abs(p.omega_over_lambda) < 1e-12
        for t in (0.1, 1.0, 10.0, 300.0):
            # double-root limit: G = e^{-u/2} (1 + u/2)
            expected = math.exp(-t / 2.0) * (1.0 + t / 2.0)
            assert propagator(p, t).G == pytest.approx(expected, rel=1e-12)

    def test_no_overflow_far_beyond_figure_range(self):
        for p in (ModelParams(0.1, 0.1), ModelParams(1e4, 0.1), ModelParams(0.3, 30.0)):
            s = propagator(p, 2000.0)
            assert np.isfinite(s.G.real) and np.isfinite(s.G.imag)
            assert abs(s.G) <= 1.0 + 1e-9

    def test_contractive_magnitude(self, rng):
        for _ in range(100):
            p = random_params(rng)
            t = rng.uniform(0.0, 50.0)
            assert abs(propagator(p, t).G) <= 1.0 + 1e-9

    def test_rejects_negative_time(self):
        with pytest.raises(InvalidInputError):
            propagator(ModelParams(1.0, 0.0), -0.1)

    def test_rejects_bad_params(self):
        with pytest.raises(InvalidInputError):
            ModelParams(-1.0, 0.0)
        with pytest.raises(InvalidInputError):
            ModelParams(math.inf, 0.0)


class TestDerivative:
    def test_matches_high_precision_finite_difference(self, rng):
        h = mp.mpf("1e-12")
        worst = 0.0
        for _ in range(300):
            p = random_params(rng)
            t = rng.uniform(0.01, 50.0)
            g, d = p.gamma0_over_lambda, p.delta_over_lambda
            with mp.workdps(50):
                fd = (mp_propagator(g, d, mp.mpf(t) + h) -
                      mp_propagator(g, d, mp.mpf(t) - h)) / (2 * h)
            fd = complex(fd)
            got = propagator(p, t).G_dot
            worst = max(worst, abs(got - fd) / max(abs(fd), 1e-300))
        assert worst <= 1e-7

    def test_double_precision_centered_difference(self, rng):
        # moderate parameters where a double-precision stencil is well posed
        for _ in range(100):
            p = ModelParams(10 ** rng.uniform(-1, 2), rng.uniform(-3, 3))
            t = rng.uniform(0.1, 20.0)
            h = 1e-5
            fd = (propagator(p, t + h).G - propagator(p, t - h).G) / (2 * h)
            got = propagator(p, t).G_dot
            assert abs(got - fd) <= 1e-7 * max(abs(fd), 1e-6)


class TestRates:
    def test_markovian_limit_curve(self):
        # weak coupling: gamma_t -> gamma0 (1 - e^{-lambda t})
        p = ModelParams(1e-3, 1e-3)
        for t in np.linspace(0.1, 20.0, 40):
            r = rates(p, float(t))
            assert r.valid
            expected = p.gamma0_over_lambda * (1.0 - math.exp(-t))
            assert r.gamma_t_over_lambda == pytest.approx(expected, rel=1e-2)

    def test_asymptotic_rate(self):
        r = rates(ModelParams(1e-3, 1e-3), 50.0)
        assert r.gamma_t_over_lambda == pytest.approx(1e-3, rel=1e-2)

    def test_internal_route_agreement_runs(self, rng):
        # rates() itself cross-checks the sinh/cosh form against -2Re(Gdot/G)
        for _ in range(200):
            p = random_params(rng)
            t = rng.uniform(0.01, 30.0)
            s = propagator(p, t)
            if abs(s.G) > 1e-6:
                rates(p, t)  # raises InternalConsistencyError on disagreement

    def test_invalid_near_propagator_zero(self):
        p = ModelParams(2.0, 0.0)
        r = rates(p, FIRST_ZERO_CRITICAL)
        assert not r.valid

    def test_degenerate_omega_rate(self):
        p = ModelParams(0.5, 0.0)
        r = rates(p, 2.0)
        assert r.valid
        # gamma = -2 Re d/du log G with G = e^{-u/2}(1+u/2)
        expected = 1.0 - 2.0 * (0.5 / (1.0 + 1.0))
        assert r.gamma_t_over_lambda == pytest.approx(expected, rel=1e-10)


class TestEvolve:
    def test_uncoupled_identity(self, rng):
        p = ModelParams(0.0, 0.7)
        for _ in range(20):
            rho = random_density(rng)
            out = evolve(p, rho, 12.3)
            assert trace_distance(out, rho) <= 1e-12

    def test_equatorial_initial_state(self):
        p = ModelParams(1.3, 0.4)
        t = 2.0
        s = propagator(p, t)
        out = evolve(p, basis_state("x+"), t)
        assert out.excited == pytest.approx(abs(s.G) ** 2 / 2.0, abs=1e-14)
        assert out.coherence == pytest.approx(s.G / 2.0, abs=1e-14)

    def test_asymptotic_ground_state(self, rng):
        for p in (ModelParams(0.5, 0.5), ModelParams(30.0, 2.0)):
            rho = random_density(rng)
            out = evolve(p, rho, 400.0)
            assert trace_distance(out, stationary_state()) <= 1e-9

    def test_ground_state_fixed_point(self, rng):
        for _ in range(50):
            p = random_params(rng)
            t = rng.uniform(0.0, 50.0)
            out = evolve(p, stationary_state(), t)
            assert trace_distance(out, stationary_state()) <= 1e-12

    def test_channel_positivity(self, rng):
        for _ in range(1000):
            p = random_params(rng)
            rho = random_density(rng)
            out = evolve(p, rho, rng.uniform(0.0, 50.0))
            assert out.det() >= -1e-12
            assert 0.0 - 1e-12 <= out.excited <= 1.0 + 1e-12


class TestStateDerivative:
    def test_uncoupled_is_zero(self, rng):
        d = state_derivative(ModelParams(0.0, 0.5), random_density(rng), 3.0)
        assert np.max(np.abs(d)) <= 1e-14

    def test_ground_state_is_stationary(self, rng):
        p = random_params(rng)
        d = state_derivative(p, stationary_state(), 1.7)
        assert np.max(np.abs(d)) <= 1e-14

    def test_traceless_hermitian(self, rng):
        for _ in range(50):
            p = random_params(rng)
            d = state_derivative(p, random_density(rng), rng.uniform(0.0, 20.0))
            assert abs(np.trace(d)) <= 1e-14
            assert np.max(np.abs(d - d.conj().T)) <= 1e-14

    def test_matches_finite_difference_of_evolve(self, rng):
        h = 1e-6
        for _ in range(300):
            p = ModelParams(10 ** rng.uniform(-2, 2), rng.uniform(-10, 10))
            rho = random_density(rng)
            t = rng.uniform(2 * h, 20.0)
            plus = evolve(p, rho, t + h).matrix
            minus = evolve(p, rho, t - h).matrix
            fd = (plus - minus) / (2.0 * h)
            got = state_derivative(p, rho, t)
            assert np.max(np.abs(got - fd)) <= 1e-6


class TestMasterEquation:
    def test_zero_rates_give_zero(self):
        p = ModelParams(0.0, 0.0)
        rhs = master_rhs(p, basis_state("x+"), 1.0)
        assert np.max(np.abs(rhs)) <= 1e-14

    def test_ground_state_annihilated(self, rng):
        p = ModelParams(0.7, 1.1)
        rhs = master_rhs(p, stationary_state(), 2.0)
        assert np.max(np.abs(rhs)) <= 1e-14

    def test_equals_channel_derivative(self, rng):
        hits = 0
        for _ in range(300):
            p = random_params(rng)
            rho0 = random_density(rng)
            t = rng.uniform(0.01, 30.0)
            if abs(propagator(p, t).G) <= 1e-6:
                continue
            hits += 1
            lhs = master_rhs(p, evolve(p, rho0, t), t)
            rhs = state_derivative(p, rho0, t)
            assert np.max(np.abs(lhs - rhs)) <= 1e-6
        assert hits > 200

    def test_raises_at_propagator_zero(self):
        p = ModelParams(2.0, 0.0)
        with pytest.raises(RateSingularityError, match="state_derivative"):
            master_rhs(p, basis_state("x+"), FIRST_ZERO_CRITICAL)


class TestTwoParameterReduction:
    def test_only_dimensionless_inputs_exist(self):
        p = ModelParams(1.5, -2.0)
        assert set(p.__dataclass_fields__) == {"gamma0_over_lambda", "delta_over_lambda"}
