# -*- coding: utf-8 -*-
"""
Created on Tue Mar 12 15:27:40 2024

Testing functions for microscopic_exchange.py.

@author: antiptsv developers
"""
import unittest
from ddt import ddt, data, unpack
import numpy as np
from pandas.testing import assert_frame_equal
from .. import microscopic_exchange as me
from ..errors import ConfigError, NumericError, StabilityError


def _coherence(frame, region):
    return (frame['re_c_' + region].values +
            1j * frame['im_c_' + region].values)


@ddt
class MicroParamsTestCase(unittest.TestCase):
    """Set up the test case for compartment model parameters"""

    @data({'r_exit': -1.0}, {'gamma_dark': -0.1}, {'pump_rate': np.nan},
          {'r_exit': 1.0, 'r_return': 0.0}, {'delta0': True})
    def test_invalid(self, changes):
        """Verify invalid rates are rejected"""
        with self.assertRaises(ConfigError):
            me.MicroParams(**changes)

    def test_isolated_beams_allowed(self):
        """Verify no return rate is needed when atoms never leave"""
        mp = me.MicroParams(r_exit=0.0, r_return=0.0)
        np.testing.assert_array_equal(me.initial_state(mp).weight,
                                      [0.5, 0.5, 0.0])

    def test_scaled(self):
        """Verify rates scale and the effective coupling with them"""
        mp = me.MicroParams(delta0=0.4)
        scaled = mp.scaled(3.0)
        self.assertEqual(scaled.r_exit, 3 * mp.r_exit)
        self.assertEqual(scaled.delta0, 3 * mp.delta0)
        self.assertAlmostEqual(me.adiabatic_coupling(scaled),
                               3 * me.adiabatic_coupling(mp), places=12)
        with self.assertRaises(ConfigError):
            mp.scaled(0.0)

    def test_compartment_state(self):
        """Verify imbalances stay within the atom fraction"""
        state = me.CompartmentState(weight=np.array([0.5, 0.5, 0.0]),
                                    coherence=np.zeros(3, dtype=complex),
                                    orientation=np.array([0.25, -0.5, 0.0]))
        np.testing.assert_allclose(state.imbalance, [0.5, -1.0, 0.0])
        with self.assertRaises(ConfigError):
            me.CompartmentState(weight=np.array([0.5, 0.5, 0.0]),
                                coherence=np.zeros(3, dtype=complex),
                                orientation=np.array([0.6, 0.0, 0.0]))
        with self.assertRaises(ConfigError):
            me.CompartmentState(weight=np.array([0.5, 0.5, 0.0]),
                                coherence=np.array([np.nan, 0, 0]),
                                orientation=np.zeros(3))


class GeneratorTestCase(unittest.TestCase):
    """Set up the test case for the compartment generators"""
    def setUp(self):
        """Create the default compartment model"""
        self.mp = me.MicroParams(delta0=0.7)

    def test_exchange_conserves_atoms(self):
        """Verify exchange columns sum to zero"""
        np.testing.assert_allclose(me.exchange_matrix(self.mp).sum(axis=0),
                                   0.0, atol=1e-14)
        population = me.build_compartment_generator(self.mp,
                                                    sector='population')
        self.assertEqual(population.shape, (6, 6))
        np.testing.assert_allclose(population[:3, :3].sum(axis=0), 0.0,
                                   atol=1e-14)

    def test_coherence_sector(self):
        """Verify local precession, decay and exchange entries"""
        generator = me.build_compartment_generator(self.mp)
        mp = self.mp
        np.testing.assert_allclose(np.diag(generator), [
            -1j * mp.delta0 - mp.pump_rate - mp.r_exit,
            1j * mp.delta0 - mp.pump_rate - mp.r_exit,
            -mp.gamma_dark - mp.r_return])
        np.testing.assert_allclose(generator[:2, 2], 0.5 * mp.r_return)
        np.testing.assert_allclose(generator[2, :2], mp.r_exit)
        self.assertEqual(generator[0, 1], 0)

    def test_isolated_beams(self):
        """Verify beams neither exchange nor feed the dark region"""
        generator = me.build_compartment_generator(
            self.mp.replace(r_exit=0.0))
        self.assertEqual(generator[0, 1], 0)
        self.assertEqual(generator[1, 0], 0)
        np.testing.assert_array_equal(generator[2, :2], [0.0, 0.0])

    def test_stable(self):
        """Verify every mode decays for random rates"""
        rng = np.random.default_rng(11)
        for _ in range(200):
            mp = me.MicroParams(r_exit=rng.uniform(0.1, 5.0),
                                r_return=rng.uniform(0.1, 100.0),
                                gamma_dark=rng.uniform(0.0, 2.0),
                                pump_rate=rng.uniform(0.0, 2.0),
                                delta0=rng.uniform(-3.0, 3.0))
            for sector in ('coherence', 'population'):
                evals = np.linalg.eigvals(me.build_compartment_generator(
                    mp, sector=sector))
                if sector == 'population':
                    # atom number is conserved
                    evals = np.delete(evals, np.argmin(np.abs(evals)))
                self.assertLess(np.max(evals.real), 0)

    def test_bad_sector(self):
        """Verify unknown sectors raise"""
        with self.assertRaises(ValueError):
            me.build_compartment_generator(self.mp, sector='dark')


class EffectiveCouplingTestCase(unittest.TestCase):
    """Set up the test case for the reduction to two modes"""
    def setUp(self):
        """Create the default compartment model"""
        self.mp = me.MicroParams()

    def test_adiabatic_formula(self):
        """Verify the eliminated generator against the closed form"""
        coupling = me.extract_effective_coupling(self.mp.replace(delta0=1.1))
        expected = 2.0 * 50.0 / (2 * (1.0 + 50.0))
        self.assertAlmostEqual(coupling.gamma_c_eff, expected, places=12)
        self.assertAlmostEqual(coupling.gamma12_eff,
                               0.3 + 2.0 - expected, places=12)
        self.assertLess(coupling.residual, 1e-12)

    def test_limits(self):
        """Verify no coupling without exit or with a scrambling dark
        region"""
        self.assertEqual(me.extract_effective_coupling(
            self.mp.replace(r_exit=0.0)).gamma_c_eff, 0.0)
        self.assertLess(me.extract_effective_coupling(
            self.mp.replace(gamma_dark=1e9)).gamma_c_eff, 1e-6)

    def test_no_elimination(self):
        """Verify a dark region without decay or return cannot be
        eliminated"""
        with self.assertRaises(NumericError):
            me.extract_effective_coupling(me.MicroParams(
                r_exit=0.0, r_return=0.0, gamma_dark=0.0))

    def test_monotone(self):
        """Verify coupling grows with exit rate and falls with dark decay"""
        exits = [me.adiabatic_coupling(self.mp.replace(r_exit=r))
                 for r in np.linspace(0.1, 5.0, 20)]
        darks = [me.adiabatic_coupling(self.mp.replace(gamma_dark=g))
                 for g in np.linspace(0.0, 20.0, 20)]
        self.assertTrue(np.all(np.diff(exits) > 0))
        self.assertTrue(np.all(np.diff(darks) < 0))

    def test_fit_agrees(self):
        """Verify the closed form is within 5% of the frequency-response
        fit"""
        gamma_c_fit, gamma12_fit, cost = me.fit_effective_coupling(self.mp)
        coupling = me.extract_effective_coupling(self.mp)
        self.assertAlmostEqual(coupling.gamma_c_eff / gamma_c_fit, 1.0,
                               delta=0.05)
        self.assertAlmostEqual(coupling.gamma12_eff / gamma12_fit, 1.0,
                               delta=0.05)
        self.assertGreaterEqual(cost, 0.0)


class CompartmentTrajectoryTestCase(unittest.TestCase):
    """Set up the test case for the exact compartment solution"""
    def setUp(self):
        """Create output times"""
        self.times = np.linspace(0.0, 3.0, 31)

    def test_isolated_decay(self):
        """Verify isolated beams precess and decay"""
        mp = me.MicroParams(r_exit=0.0, r_return=0.0, delta0=0.8)
        frame = me.compartment_trajectories(mp, self.times)
        decay = np.exp(-(0.8j + mp.pump_rate) * self.times)
        np.testing.assert_allclose(_coherence(frame, 'beam1'), 0.5 * decay,
                                   atol=1e-12)
        np.testing.assert_allclose(_coherence(frame, 'beam2'),
                                   0.5 * decay.conj(), atol=1e-12)

    def test_conservation(self):
        """Verify atom number is conserved and imbalances stay bounded"""
        frame = me.compartment_trajectories(me.MicroParams(delta0=0.3),
                                            self.times)
        weights = frame[['w_beam1', 'w_beam2', 'w_dark']].values
        np.testing.assert_allclose(weights.sum(axis=1), 1.0, atol=1e-12)
        orient = frame[['o_beam1', 'o_beam2', 'o_dark']].values
        self.assertTrue(np.all(np.abs(orient) <= weights + 1e-12))
        self.assertGreater(frame['o_beam1'].iloc[-1], 0)
        self.assertLess(frame['o_beam2'].iloc[-1], 0)

    def test_negative_times(self):
        """Verify negative times are rejected"""
        with self.assertRaises(ValueError):
            me.compartment_trajectories(me.MicroParams(), [-1.0, 0.0])


class MonteCarloTestCase(unittest.TestCase):
    """Set up the test case for the single-atom simulation"""

    def test_isolated_decay(self):
        """Verify every beam atom follows the local exponential exactly"""
        mp = me.MicroParams(r_exit=0.0, r_return=0.0, delta0=0.8)
        frame = me.monte_carlo_exchange(mp, seed=5, n_atoms=500, dt=0.05,
                                        t_total=5.0)
        decay = np.exp(-(0.8j + mp.pump_rate) * frame['time'].values)
        np.testing.assert_allclose(
            _coherence(frame, 'beam1') / frame['w_beam1'].values, decay,
            atol=1e-12)
        np.testing.assert_allclose(
            _coherence(frame, 'beam2') / frame['w_beam2'].values,
            decay.conj(), atol=1e-12)
        np.testing.assert_array_equal(frame['w_dark'].values, 0.0)

    def test_matches_compartment_equations(self):
        """Verify ensemble means agree with the exact solution"""
        mp = me.MicroParams(delta0=0.5)
        frame = me.monte_carlo_exchange(mp, seed=17, n_atoms=10000,
                                        dt=0.0015, t_total=1.5)
        index = np.linspace(0, len(frame) - 1, 10).astype(int)
        sampled = frame.iloc[index]
        exact = me.compartment_trajectories(mp, sampled['time'].values)
        columns = [name for name in exact.columns if name != 'time']
        diff = np.abs(sampled[columns].values - exact[columns].values)
        se = sampled[['se_' + name for name in columns]].values
        exact_points = se == 0
        np.testing.assert_allclose(diff[exact_points], 0.0, atol=1e-12)
        z = diff[~exact_points] / se[~exact_points]
        self.assertGreaterEqual(np.mean(z <= 3), 0.95)
        self.assertTrue(np.all(z <= 5))

    def test_deterministic(self):
        """Verify results depend only on seed, atoms and block size"""
        mp = me.MicroParams(delta0=0.2)
        kwargs = dict(seed=3, n_atoms=300, dt=0.001, t_total=0.5,
                      block_size=100)
        first = me.monte_carlo_exchange(mp, **kwargs)
        assert_frame_equal(first, me.monte_carlo_exchange(mp, **kwargs))
        assert_frame_equal(first, me.monte_carlo_exchange(mp, n_jobs=2,
                                                          **kwargs))
        other = me.monte_carlo_exchange(mp, **dict(kwargs, seed=4))
        self.assertFalse(other.equals(first))

    def test_single_atom(self):
        """Verify a single atom has no standard error"""
        frame = me.monte_carlo_exchange(me.MicroParams(), seed=0, n_atoms=1,
                                        dt=0.001, t_total=0.01)
        self.assertTrue(frame['se_w_beam1'].isna().all())

    def test_invalid_settings(self):
        """Verify too coarse steps and empty ensembles are rejected"""
        with self.assertRaises(StabilityError):
            me.monte_carlo_exchange(me.MicroParams(), seed=0, n_atoms=10,
                                    dt=0.01, t_total=1.0)
        with self.assertRaises(ValueError):
            me.monte_carlo_exchange(me.MicroParams(), seed=0, n_atoms=0,
                                    dt=0.001, t_total=1.0)


@ddt
class SpectrumComparisonTestCase(unittest.TestCase):
    """Set up the test case for compartment against two-mode spectra"""

    def test_beam_response_matches_at_dc(self):
        """Verify the reduced model is exact at zero frequency"""
        mp = me.MicroParams(delta0=0.4)
        coupling = me.extract_effective_coupling(mp)
        drift = np.array([[-0.4j - coupling.gamma12_eff, coupling.gamma_c_eff],
                          [coupling.gamma_c_eff, 0.4j - coupling.gamma12_eff]])
        np.testing.assert_allclose(me.beam_response(mp, 0.0)[0],
                                   np.linalg.inv(-drift), rtol=1e-12)

    def test_random_draws(self):
        """Verify narrow-feature widths agree for fast return"""
        rng = np.random.default_rng(23)
        for _ in range(10):
            gamma_dark = rng.uniform(0.1, 4.0)
            mp = me.MicroParams(r_exit=rng.uniform(0.2, 1.0),
                                r_return=rng.uniform(max(30.0,
                                                         5 * gamma_dark),
                                                     100.0),
                                gamma_dark=gamma_dark,
                                pump_rate=rng.uniform(0.1, 0.5))
            table = me.narrow_feature_comparison(mp).set_index('model')
            self.assertAlmostEqual(table.loc['micro', 'center'],
                                   table.loc['effective', 'center'],
                                   delta=0.1 * table.loc['effective',
                                                         'width'])
            self.assertAlmostEqual(table.loc['micro', 'width'] /
                                   table.loc['effective', 'width'], 1.0,
                                   delta=0.1)

    @data((2.0, 1.0), (3.0, 0.5))
    @unpack
    def test_detuned_centres(self, delta0, n_exc):
        """Verify split narrow features sit at the same detuning"""
        table = me.narrow_feature_comparison(me.MicroParams(delta0=delta0),
                                             n_exc=n_exc)
        table = table.set_index('model')
        self.assertAlmostEqual(table.loc['micro', 'center'] /
                               table.loc['effective', 'center'], 1.0,
                               delta=0.1)

    def test_vacuum_without_pumping_noise(self):
        """Verify zero occupancy leaves shot noise"""
        spec = me.micro_spectrum(me.MicroParams(), np.linspace(-2, 2, 5),
                                 n_exc=0.0)
        np.testing.assert_allclose(spec.cm, np.broadcast_to(np.eye(4),
                                                            (5, 4, 4)),
                                   atol=1e-15)

    def test_isolated_beams_match_reduced_model(self):
        """Verify isolated beams give the reduced spectra exactly"""
        mp = me.MicroParams(r_exit=0.0, delta0=0.6)
        omega = np.linspace(-3, 3, 61)
        micro = me.micro_spectrum(mp, omega, n_exc=1.0)
        reduced = me.effective_spectrum(mp, omega, n_exc=1.0)
        np.testing.assert_allclose(micro.cm, reduced.cm, rtol=1e-10,
                                   atol=1e-12)
        self.assertGreater(reduced.cm[30, 0, 0], 1.0)


if __name__ == '__main__':
    unittest.main()
