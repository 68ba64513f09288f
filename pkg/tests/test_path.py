import math

import numpy as np
import pytest

from djcqsl import (
    GridResolutionError,
    InvalidInputError,
    ModelParams,
    TimeGrid,
    arc_length,
    basis_state,
    bures_angle,
    cumulative_norm_integrals,
    evolve,
    precession_path,
    sample_path,
)
from djcqsl.path import _fill_fisher_fallback, cumulative_trapezoid

from conftest import random_density, random_params

MARKOV = ModelParams(0.1, 0.1)
STRONG = ModelParams(1e4, 0.1)


class TestTimeGrid:
    def test_policy_structure(self):
        grid = TimeGrid.for_params(MARKOV, 25.0)
        t = grid.times
        assert t[0] == 0.0 and t[-1] == 25.0
        assert np.all(np.diff(t) > 0.0)
        fine = np.diff(t[t <= 10.0])
        coarse = np.diff(t[t >= 10.0])
        assert np.max(fine) <= 1e-3 + 1e-12
        assert np.max(coarse) <= 1e-2 + 1e-12

    def test_oscillation_cap(self):
        grid = TimeGrid.for_params(STRONG, 20.0)
        im = abs(STRONG.omega_over_lambda.imag)
        cap = 0.01 * 2.0 * math.pi / im
        assert np.max(np.diff(grid.times)) <= cap + 1e-12

    def test_no_cap_without_oscillation(self):
        grid = TimeGrid.for_params(ModelParams(0.3, 0.0), 5.0)
        assert math.isinf(grid.oscillation_cap)
        assert len(grid) == 5001

    def test_refinement_splits_intervals(self):
        grid = TimeGrid.uniform(1.0, 0.25)
        fine = grid.refined()
        assert len(fine) == 2 * len(grid) - 1
        np.testing.assert_allclose(fine.times[::2], grid.times, atol=1e-15)

    def test_rejects_bad_grids(self):
        with pytest.raises(InvalidInputError):
            TimeGrid(np.array([0.0]))
        with pytest.raises(InvalidInputError):
            TimeGrid(np.array([0.1, 0.2]))
        with pytest.raises(InvalidInputError):
            TimeGrid(np.array([0.0, 1.0, 1.0]))
        with pytest.raises(InvalidInputError):
            TimeGrid.for_params(MARKOV, 0.0)


class TestSamplePath:
    def test_frozen_path_is_exactly_still(self, rng):
        p = ModelParams(0.0, 0.4)
        samples = sample_path(p, random_density(rng), TimeGrid.uniform(5.0, 0.01))
        assert np.max(samples.fisher_q) <= 1e-20
        assert np.max(samples.norm_op) <= 1e-16
        assert np.max(samples.quantumness_t) <= 1e-20
        assert np.max(samples.bures_angle_t) <= 1e-12
        assert np.max(samples.step_angles) <= 1e-12

    def test_norm_ordering_and_ratios(self, rng):
        for _ in range(10):
            p = random_params(rng)
            samples = sample_path(p, random_density(rng), TimeGrid.for_params(p, 5.0))
            np.testing.assert_allclose(samples.norm_hs, math.sqrt(2) * samples.norm_op,
                                       rtol=1e-12)
            np.testing.assert_allclose(samples.norm_tr, 2.0 * samples.norm_op, rtol=1e-12)
            assert np.all(samples.norm_op <= samples.norm_hs + 1e-15)
            assert np.all(samples.norm_hs <= samples.norm_tr + 1e-15)

    def test_sample_view_consistency(self):
        samples = sample_path(MARKOV, basis_state("x+"), TimeGrid.uniform(2.0, 0.01))
        view = samples[37]
        assert view.lambda_t == samples.lambda_t[37]
        assert view.norm_hs == pytest.approx(math.sqrt(2) * view.norm_op)
        assert np.allclose(view.rho_dot, view.rho_dot.conj().T)
        assert abs(np.trace(view.rho_dot)) <= 1e-15

    def test_markovian_speed_dies_out(self):
        samples = sample_path(MARKOV, basis_state("x+"),
                              TimeGrid.for_params(MARKOV, 200.0))
        t = samples.lambda_t
        late = samples.speed[t > 150.0]
        assert np.max(late) < 1e-3 * np.max(samples.speed)

    def test_initial_fisher_matches_pure_state_limit(self):
        # F_Q(0+) = 2 gamma0 rho_ee^2 for a pure initial state
        samples = sample_path(MARKOV, basis_state("x+"),
                              TimeGrid.uniform(1.0, 1e-3))
        assert samples.fisher_q[0] == pytest.approx(2.0 * 0.1 * 0.25, rel=1e-12)
        assert samples.fisher_q[1] == pytest.approx(samples.fisher_q[0], rel=1e-2)

    def test_fisher_vs_finite_angle_richardson(self):
        # 4 (arccos F_B(rho_t, rho_{t+h}))^2 / h^2 -> F_Q with first-order
        # error in h; one Richardson step must land within 1e-3 relative
        for p, t0 in ((MARKOV, 5.0), (MARKOV, 30.0), (ModelParams(2.0, 0.0), 1.0),
                      (STRONG, 0.5), (STRONG, 3.0)):
            grid = TimeGrid.for_params(p, t0 * 1.5)
            samples = sample_path(p, basis_state("x+"), grid)
            k = int(np.argmin(np.abs(grid.times - t0)))
            t = float(grid.times[k])
            rho_ref = samples.state(k)

            def estimate(h):
                left = evolve(p, basis_state("x+"), t - h)
                right = evolve(p, basis_state("x+"), t + h)
                return (bures_angle(left, right) / h) ** 2

            h = 1e-4
            richardson = 2.0 * estimate(h / 2) - estimate(h)
            assert richardson == pytest.approx(samples.fisher_q[k], rel=1e-3)
            assert rho_ref.excited == pytest.approx(
                evolve(p, basis_state("x+"), t).excited, abs=1e-12)

    def test_fallback_estimator_fills_flagged_samples(self):
        t = np.array([0.0, 0.5, 1.0, 1.5, 2.0])
        fisher = np.array([1.0, np.nan, 1.0, 1.0, 1.0])
        speed = np.sqrt(np.maximum(fisher, 0)) / 2
        steps = np.full(4, 0.025)
        flags = np.isnan(fisher)
        _fill_fisher_fallback(t, fisher, speed, steps, flags)
        assert fisher[1] == pytest.approx((2 * 0.05 / 1.0) ** 2)
        assert speed[1] == pytest.approx(0.05)


class TestPrecessionPath:
    def test_constant_fisher_information(self):
        omega = 1.7
        samples = precession_path(omega, basis_state("x+"), TimeGrid.uniform(1.5, 1e-3))
        np.testing.assert_allclose(samples.fisher_q, omega ** 2, rtol=1e-12)

    def test_arc_length_is_half_the_rotation_angle(self):
        omega, t_final = 1.0, 2.0
        samples = precession_path(omega, basis_state("x+"),
                                  TimeGrid.uniform(t_final, 1e-3))
        s = arc_length(samples)
        assert s[-1] == pytest.approx(omega * t_final / 2.0, rel=1e-9)
        assert samples.bures_angle_t[-1] == pytest.approx(omega * t_final / 2.0, rel=1e-9)

    def test_mixed_state_precession_slows_the_angle(self):
        rho0 = (0.8 * np.array([0.5, 0.5, 0.0]))  # shrunk equatorial vector
        from djcqsl import BlochVector

        state = BlochVector(0.8, 0.0, 0.0).to_density()
        samples = precession_path(1.0, state, TimeGrid.uniform(1.0, 1e-3))
        s = arc_length(samples)
        assert s[-1] < 0.5  # shorter than the pure-state geodesic arc


class TestArcLength:
    def test_nondecreasing(self, rng):
        for _ in range(5):
            p = random_params(rng)
            samples = sample_path(p, random_density(rng), TimeGrid.for_params(p, 10.0))
            s = arc_length(samples)
            assert np.all(np.diff(s) >= -1e-14)

    def test_routes_agree_markovian(self):
        grid = TimeGrid.for_params(MARKOV, 50.0)
        samples = sample_path(MARKOV, basis_state("x+"), grid.refined())
        arc_length(samples, cross_check_rtol=1e-4)  # must not raise

    def test_coarse_grid_raises(self):
        p = ModelParams(50.0, 0.0)
        samples = sample_path(p, basis_state("x+"), TimeGrid.uniform(10.0, 0.5))
        with pytest.raises(GridResolutionError):
            arc_length(samples, cross_check_rtol=1e-4)

    def test_markovian_arc_saturates(self):
        grid = TimeGrid.for_params(MARKOV, 1000.0)
        samples = sample_path(MARKOV, basis_state("x+"), grid)
        s = arc_length(samples)
        t = samples.lambda_t
        s200 = s[np.argmin(np.abs(t - 200.0))]
        assert abs(s[-1] - s200) <= 1e-3 * s200


class TestCumulativeIntegrals:
    def test_frozen_path_zero(self, rng):
        p = ModelParams(0.0, 1.0)
        samples = sample_path(p, random_density(rng), TimeGrid.uniform(3.0, 0.01))
        for arr in cumulative_norm_integrals(samples):
            assert np.max(np.abs(arr)) <= 1e-13

    def test_ordering_everywhere(self):
        samples = sample_path(ModelParams(2.0, 0.0), basis_state("x+"),
                              TimeGrid.for_params(ModelParams(2.0, 0.0), 8.0))
        int_op, int_hs, int_tr, _ = cumulative_norm_integrals(samples)
        assert np.all(int_op <= int_hs + 1e-14)
        assert np.all(int_hs <= int_tr + 1e-14)

    def test_trapezoid_matches_closed_form(self):
        t = np.linspace(0.0, 2.0, 2001)
        out = cumulative_trapezoid(t ** 2, t)
        assert out[-1] == pytest.approx(8.0 / 3.0, rel=1e-6)

    def test_norm_chain_against_bures_target(self, rng):
        # sin^2 L <= int ||rho_dot||_op and sqrt(Q/2) <= int ||[rho0, rho_dot]||
        # pointwise. The commutator norm has |.|-kinks at its zeros, where the
        # trapezoid underestimates by up to ~2e-4 relative on policy grids
        # while the continuum inequality is near saturation, hence the slack.
        for _ in range(20):
            p = random_params(rng, gamma_range=(-2.0, 3.0))
            samples = sample_path(p, random_density(rng, pure=True),
                                  TimeGrid.for_params(p, 10.0))
            int_op, _, _, int_comm = cumulative_norm_integrals(samples)
            sin2 = np.sin(samples.bures_angle_t) ** 2
            assert np.all(sin2 <= int_op + 1e-6 * (1.0 + int_op))
            target = np.sqrt(samples.quantumness_t / 2.0)
            assert np.all(target <= int_comm + 5e-4 * (1.0 + int_comm))
