# -*- coding: utf-8 -*-
"""
Created on Thu Mar  7 14:20:05 2024

Testing functions for langevin_spectra.py.

@author: antiptsv developers
"""
import unittest
from ddt import ddt, data, unpack
import numpy as np
from .. import langevin_spectra as ls
from .. import gaussian_info
from ..effective_model import SystemParams
from ..errors import InternalConsistencyError, StabilityError


def _params(*, delta0=0.0, gamma_c=0.5, gamma12=1.0, n_exc=1.0,
            eta_read=1.0, broad_amp=0.0):
    """SystemParams with the requested total decay rate and no pumping."""
    return SystemParams(delta0=delta0, gamma0=gamma12 - gamma_c,
                        gamma_c=gamma_c, control_rabi=0.0, n_exc=n_exc,
                        eta_read=eta_read, broad_amp=broad_amp)


def _random_draws(count, seed):
    rng = np.random.default_rng(seed)
    draws = []
    for _ in range(count):
        gamma12 = rng.uniform(0.5, 3.0)
        draws.append(_params(delta0=rng.uniform(-3, 3),
                             gamma_c=rng.uniform(0, 0.95) * gamma12,
                             gamma12=gamma12, n_exc=rng.uniform(0, 3),
                             eta_read=rng.uniform(0, 1),
                             broad_amp=rng.uniform(0, 1)))
    return draws


@ddt
class DriftAndNoiseTestCase(unittest.TestCase):
    """Set up the test case for the drift matrix and noise model"""

    @data((0.0, 1.0, 2.0, [-3.0, -1.0]), (5.0, 3.0, 4.0, [-4 - 4j, -4 + 4j]))
    @unpack
    def test_drift_eigenvalues(self, delta0, gamma_c, gamma12, expected):
        """Verify drift eigenvalues against the closed form"""
        evals = ls.drift_matrix(_params(delta0=delta0, gamma_c=gamma_c,
                                        gamma12=gamma12)).eigenvalues
        evals = np.sort_complex(evals)
        np.testing.assert_allclose(evals, expected, atol=1e-12)

    def test_decoupled_drift(self):
        """Verify the decoupled drift matrix"""
        drift = ls.drift_matrix(_params(delta0=2.0, gamma_c=0.0,
                                        gamma12=1.0))
        np.testing.assert_allclose(drift.m, np.diag([-1 - 2j, -1 + 2j]),
                                   atol=1e-15)

    def test_stability(self):
        """Verify the slowest drift eigenvalue is -(gamma12 - gamma_c)"""
        for params in _random_draws(50, 1):
            evals = ls.drift_matrix(params).eigenvalues
            self.assertLess(np.max(evals.real), 0)
            if abs(params.delta0) <= params.gamma_c:
                self.assertAlmostEqual(
                    np.max(evals.real),
                    -(params.gamma12 - np.sqrt(params.gamma_c**2 -
                                               params.delta0**2)),
                    places=6)

    def test_noise_model_values(self):
        """Verify the noise correlations for zero excess noise"""
        noise = ls.noise_model(_params(gamma_c=1.0, gamma12=2.0, n_exc=0.0))
        np.testing.assert_allclose(noise.d_out, [[4, -2], [-2, 4]])
        np.testing.assert_allclose(noise.d_in, np.zeros((2, 2)))

    @data(0.0, 0.5, 2.0)
    def test_noise_model_eigenvalues(self, n_exc):
        """Verify d_out eigenvalues and the commutator closure"""
        noise = ls.NoiseModel.from_rates(gamma12=2.0, gamma_c=0.5,
                                         n_exc=n_exc)
        np.testing.assert_allclose(np.linalg.eigvalsh(noise.d_out),
                                   [2 * 1.5 * (1 + n_exc),
                                    2 * 2.5 * (1 + n_exc)])
        np.testing.assert_array_equal(noise.d_out - noise.d_in,
                                      2 * noise.damping)
        np.testing.assert_allclose(noise.damping, [[2.0, -0.5], [-0.5, 2.0]])

    def test_noise_model_boundary(self):
        """Verify gamma12 = gamma_c gives a singular d_out"""
        noise = ls.NoiseModel.from_rates(gamma12=1.0, gamma_c=1.0, n_exc=0.3)
        self.assertAlmostEqual(np.min(np.linalg.eigvalsh(noise.d_out)), 0.0)

    @data(np.diag([1.0, -1.0]), np.array([[1.0, 0.5], [0.0, 1.0]]))
    def test_noise_model_rejects(self, matrix):
        """Verify indefinite or asymmetric correlations are rejected"""
        with self.assertRaises(InternalConsistencyError):
            ls.NoiseModel(d_out=matrix, d_in=np.zeros((2, 2)))


class SpectralCMTestCase(unittest.TestCase):
    """Set up the test case for frequency-domain spectra"""
    def setUp(self):
        """Create a frequency grid"""
        self.omega = np.linspace(-10.0, 10.0, 401)

    def test_decoupled_vacuum(self):
        """Verify identity plus pedestal without coupling or excess noise"""
        params = SystemParams(gamma_c=0.0, n_exc=0.0)
        spec = ls.spectral_cm(params, self.omega)
        ped = ls.pedestal(params, self.omega)
        expected = np.eye(4)[None] * (1.0 + ped)[:, None, None]
        np.testing.assert_allclose(spec.cm, expected, atol=1e-14)
        self.assertAlmostEqual(ped[200], params.broad_amp)

    def test_single_mode_spectrum(self):
        """Verify a lone damped mode gives a Lorentzian in both
        quadratures"""
        decay, occupancy = 0.7, 1.5
        spectra = ls.normally_ordered_spectrum(
            drift=[[-decay]], diffusion=[[2 * decay * occupancy]],
            omega=self.omega, alpha=[[1], [-1j]], beta=[[1], [1j]])
        lorentz = 4 * decay * occupancy / (self.omega**2 + decay**2)
        np.testing.assert_allclose(spectra[:, 0, 0], lorentz, rtol=1e-12)
        np.testing.assert_allclose(spectra[:, 1, 1], lorentz, rtol=1e-12)
        np.testing.assert_allclose(spectra[:, 0, 1], 0.0, atol=1e-12)

    def test_non_finite_grid(self):
        """Verify a non-finite grid is rejected"""
        with self.assertRaises(ValueError):
            ls.spectral_cm(SystemParams(), [0.0, np.nan])

    def test_analysis_frequency_closed_form(self):
        """Verify variance and correlation at the Larmor frequency"""
        for params in _random_draws(20, 2):
            cm = ls.cm_at_analysis_frequency(params)
            g12, gc, delta = params.gamma12, params.gamma_c, params.delta0
            det = g12**2 + delta**2 - gc**2
            scale = 4 * params.eta_read * params.n_exc / det
            ped = params.broad_amp
            np.testing.assert_allclose([cm[0, 0], cm[2, 2]],
                                       1 + ped + scale * g12, rtol=1e-10)
            np.testing.assert_allclose([cm[0, 2], -cm[1, 3]], scale * gc,
                                       rtol=1e-10, atol=1e-14)

    def test_phase_conjugate_sign(self):
        """Verify c = CM13 = -CM24 > 0 for a coupled excited pair"""
        cm = ls.cm_at_analysis_frequency(_params(gamma_c=0.72, n_exc=1.0))
        self.assertGreater(cm[0, 2], 0)
        self.assertAlmostEqual(cm[0, 2], -cm[1, 3], places=12)

    def test_quadrature_symmetries(self):
        """Verify X/P symmetry, physicality and equal joint variances"""
        for params in _random_draws(25, 3):
            spec = ls.spectral_cm(params, np.linspace(-6, 6, 41))
            cm = spec.cm
            np.testing.assert_allclose(cm, np.swapaxes(cm, 1, 2), atol=1e-12)
            np.testing.assert_allclose(cm[:, 0, 0], cm[:, 1, 1], atol=1e-10)
            np.testing.assert_allclose(cm[:, 2, 2], cm[:, 3, 3], atol=1e-10)
            np.testing.assert_allclose(cm[:, 0, 2], -cm[:, 1, 3], atol=1e-10)
            np.testing.assert_allclose(cm[:, 0, 3], cm[:, 1, 2], atol=1e-10)
            traces = ls.variance_traces(spec)
            np.testing.assert_allclose(traces['varxdiff_db'],
                                       traces['varpsum_db'], atol=1e-10)
            for matrix in cm:
                self.assertGreaterEqual(
                    np.min(np.linalg.eigvalsh(matrix - np.eye(4))), -1e-10)
                nu_plus, nu_minus = gaussian_info.symplectic_eigenvalues(
                    matrix)
                self.assertGreaterEqual(nu_minus, 1 - 1e-9)

    def test_channel_symmetry_on_resonance(self):
        """Verify equal channel traces at delta0 = 0"""
        spec = ls.spectral_cm(SystemParams(), self.omega)
        traces = ls.variance_traces(spec)
        np.testing.assert_allclose(traces['varx1_db'], traces['varx2_db'],
                                   atol=1e-12)
        self.assertEqual(int(np.argmax(traces['varx1_db'])), 200)

    def test_correlation_reduces_joint_variance(self):
        """Verify the cross term lowers Var(X1 - X2) on resonance"""
        spec = ls.spectral_cm(_params(gamma_c=0.5), [0.0])
        cm = spec.cm[0]
        var_diff = cm[0, 0] + cm[2, 2] - 2 * cm[0, 2]
        self.assertLess(var_diff, cm[0, 0] + cm[2, 2] - 2)

    def test_contrast_increases_with_coupling(self):
        """Verify the narrow-feature height grows with gamma_c / gamma12"""
        heights = []
        for ratio in np.arange(1, 10) / 10:
            spec = ls.spectral_cm(_params(gamma_c=ratio), self.omega)
            heights.append(ls.narrow_feature(spec).height)
        self.assertTrue(np.all(np.diff(heights) > 0))

    def test_detuned_peaks_and_contrast(self):
        """Verify detuned channels peak near +/- delta0 and the cross
        correlation falls with delta0"""
        spec = ls.spectral_cm(_params(delta0=5.0, gamma_c=1.0, gamma12=1.5),
                              np.linspace(-10, 10, 2001))
        feature = ls.narrow_feature(spec)
        self.assertLess(abs(feature.center - 5.0), 0.75)
        correlations = [ls.cm_at_analysis_frequency(
            _params(delta0=delta0, gamma_c=0.5))[0, 2]
            for delta0 in np.linspace(0, 5, 11)]
        self.assertTrue(np.all(np.diff(correlations) < 0))


class VarianceTracesTestCase(unittest.TestCase):
    """Set up the test case for dB traces"""
    def test_vacuum_reads_zero(self):
        """Verify a vacuum spectrum is 0 dB in every column"""
        spec = ls.NoiseSpectrum(omega_grid=np.array([-1.0, 0.0, 1.0]),
                                cm=np.tile(np.eye(4), (3, 1, 1)),
                                pedestal=np.zeros(3))
        traces = ls.variance_traces(spec)
        self.assertEqual(list(traces.columns),
                         ['omega', 'varx1_db', 'varx2_db', 'varxdiff_db',
                          'varpsum_db'])
        np.testing.assert_allclose(traces.iloc[:, 1:].values, 0.0,
                                   atol=1e-15)

    def test_frame_layout(self):
        """Verify the flattened covariance table"""
        spec = ls.spectral_cm(SystemParams(), [0.0, 1.0])
        frame = spec.to_frame()
        self.assertEqual(len(frame.columns), 11)
        self.assertEqual(frame['cm13'][0], spec.cm[0, 0, 2])

    def test_narrow_feature_channel(self):
        """Verify the channel argument is checked"""
        spec = ls.spectral_cm(SystemParams(), [-1.0, 0.0, 1.0])
        with self.assertRaises(ValueError):
            ls.narrow_feature(spec, channel=3)


class StationaryCovarianceTestCase(unittest.TestCase):
    """Set up the test case for the stationary covariance"""
    def test_lyapunov_residual(self):
        """Verify the Lyapunov equation and positivity"""
        for params in _random_draws(10, 4):
            cov = ls.stationary_covariance(params)
            m = ls.drift_matrix(params).m
            d_in = ls.noise_model(params).d_in
            np.testing.assert_allclose(m @ cov + cov @ m.conj().T + d_in, 0,
                                       atol=1e-9)
            self.assertGreaterEqual(np.min(np.linalg.eigvalsh(cov)), -1e-12)


@ddt
class TimeDomainTestCase(unittest.TestCase):
    """Set up the test case for the time-domain oracle"""
    def setUp(self):
        """Use a short run for contract checks"""
        self.params = _params(gamma_c=0.5, n_exc=1.0)
        self.settings = {'n_traj': 4, 'dt': 0.01, 't_total': 20.48,
                         'nperseg': 256, 'batch_size': 2}

    def test_time_step_guard(self):
        """Verify a large time step raises StabilityError"""
        with self.assertRaises(StabilityError):
            ls.simulate_time_domain(self.params, seed=0, n_traj=1, dt=0.2,
                                    t_total=100.0)

    def test_bad_sizes(self):
        """Verify an empty ensemble and a short record are rejected"""
        with self.assertRaises(ValueError):
            ls.simulate_time_domain(self.params, seed=0, n_traj=0, dt=0.01,
                                    t_total=10.0)
        with self.assertRaises(ValueError):
            ls.simulate_time_domain(self.params, seed=0, n_traj=1, dt=0.01,
                                    t_total=1.0, nperseg=512)

    def test_vacuum_is_shot_noise(self):
        """Verify the vacuum estimate is exactly shot noise"""
        params = _params(gamma_c=0.0, n_exc=0.0)
        estimate = ls.simulate_time_domain(params, seed=3, **self.settings)
        np.testing.assert_array_equal(
            estimate.cm, np.tile(np.eye(4), (len(estimate.omega_grid), 1, 1)))
        np.testing.assert_array_equal(estimate.cm_se, 0.0)

    def test_determinism(self):
        """Verify equal seeds give bit-identical output and worker count
        does not matter"""
        first = ls.simulate_time_domain(self.params, seed=11,
                                        **self.settings)
        second = ls.simulate_time_domain(self.params, seed=11, n_jobs=2,
                                         **self.settings)
        other = ls.simulate_time_domain(self.params, seed=12,
                                        **self.settings)
        np.testing.assert_array_equal(first.cm, second.cm)
        np.testing.assert_array_equal(first.cm_se, second.cm_se)
        self.assertFalse(np.array_equal(first.cm, other.cm))
        self.assertTrue(np.all(np.diff(first.omega_grid) > 0))
        frame = first.to_frame()
        self.assertIn('se13', frame.columns)

    @data((0.0, 0.5, 1.0), (0.8, 0.3, 1.0), (2.0, 0.6, 1.0),
          (1.5, 0.5, 3.0), (0.4, 0.7, 2.0))
    @unpack
    def test_oracle_agreement(self, delta0, gamma_c, n_exc):
        """Verify the ensemble estimate agrees with the closed form within
        its standard errors"""
        params = _params(delta0=delta0, gamma_c=gamma_c, n_exc=n_exc)
        estimate = ls.simulate_time_domain(params, seed=2024, n_traj=64,
                                           dt=0.01, t_total=819.2,
                                           nperseg=8192, batch_size=16)
        keep = np.abs(estimate.omega_grid) <= 4.0
        self.assertGreaterEqual(np.count_nonzero(keep), 20)
        exact = ls.spectral_cm(params, estimate.omega_grid[keep]).cm
        rows, cols = np.triu_indices(4)
        diff = (estimate.cm[keep] - exact)[:, rows, cols]
        se = estimate.cm_se[keep][:, rows, cols]
        z = np.abs(diff) / se
        self.assertGreaterEqual(np.mean(z <= 3), 0.95)
        self.assertTrue(np.all(z <= 5))


if __name__ == '__main__':
    unittest.main()
