import numpy
import unittest

from spincraft import errors, hetero
from spincraft.operators import (
    Operator, angular_momentum, singlet_order_op, total_angular_momentum)
from spincraft.analysis.ensemble import Distribution, rf_inhomogeneity_average
from spincraft.pulse.sequence import (
    AdiabaticShape, CslicParams, build_adslic, build_cslic, build_slic)


class TestSystem(unittest.TestCase):

    def test_default_durations(self):
        system = hetero.build_fumarate_like(15.0, 5.95, 3.25)
        t_h, t_c = hetero.ideal_slic_durations(system)
        self.assertAlmostEqual(t_h, 0.5238, places=4)
        self.assertAlmostEqual(t_c, 0.3704, places=4)

    def test_effective_rabi(self):
        system = hetero.build_fumarate_like(15.0, 1.35, -1.35)
        condition = hetero.effective_rabi(system)
        self.assertAlmostEqual(condition.rabi_hz, 2.7 / 4)
        self.assertEqual(condition.matched_nut_hz, 15.0)

    def test_equal_couplings(self):
        system = hetero.build_fumarate_like(15.0, 2.0, 2.0)
        with self.assertRaises(errors.ParameterError):
            hetero.ideal_slic_durations(system)

    def test_wrong_layout(self):
        from spincraft.system import SpinSystem
        with self.assertRaises(errors.ChannelError):
            hetero.coupling_difference(SpinSystem.pair(15.0, 3.0))


class TestFilter(unittest.TestCase):

    def test_keeps_singlet_order(self):
        q = singlet_order_op((1, 2), 3)
        self.assertTrue(hetero.singlet_filter(q).allclose(q, atol=1e-12))

        sz = 2 * angular_momentum(3, 3, "z")
        qz = Operator.hermitian(q.matrix @ sz.matrix)
        self.assertTrue(hetero.singlet_filter(qz).allclose(qz, atol=1e-12))

    def test_removes_magnetization(self):
        fx = total_angular_momentum(3, "x", [1, 2])
        self.assertTrue(hetero.singlet_filter(fx).allclose(
            Operator.zeros(8), atol=1e-12))

    def test_idempotent(self):
        rho = total_angular_momentum(3, "z") + singlet_order_op((1, 2), 3)
        once = hetero.singlet_filter(rho)
        self.assertTrue(hetero.singlet_filter(once).allclose(once,
                                                             atol=1e-12))

    def test_never_increases_norm(self):
        rng = numpy.random.default_rng(7)
        for _ in range(5):
            m = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
            rho = Operator.hermitian(m + m.conj().T)
            kept = hetero.singlet_filter(rho)
            self.assertLessEqual(numpy.linalg.norm(kept.matrix),
                                 numpy.linalg.norm(rho.matrix) + 1e-12)

    def test_dimension(self):
        with self.assertRaises(errors.DimensionError):
            hetero.singlet_filter(Operator.identity(8), num_spins=2)


class TestPipeline(unittest.TestCase):

    def setUp(self):
        self.system = hetero.build_fumarate_like(15.0, 1.35, -1.35)
        t_h, t_c = hetero.ideal_slic_durations(self.system)
        self.slic_h = build_slic(15.0, t_h, channel="H")
        self.slic_c = build_slic(15.0, t_c, channel="C")
        self.cslic_h = build_cslic(CslicParams.new(15.0, 8, alpha=0.988),
                                   "H")
        self.cslic_c = build_cslic(CslicParams.new(15.0, 6, alpha=0.988),
                                   "C")

    def test_initial_state(self):
        self.assertTrue(hetero.initial_state(self.system).allclose(
            total_angular_momentum(3, "z", [1, 2])))

    def test_ideal_transfer(self):
        signal = hetero.run_pipeline(self.slic_h, self.slic_c, self.system)
        self.assertGreater(abs(signal), 0.5)
        self.assertLess(abs(signal), 2 / 3 + 1e-9)

        signal = hetero.run_pipeline(self.cslic_h, self.cslic_c,
                                     self.system)
        self.assertGreater(abs(signal), 0.5)
        self.assertLess(abs(signal), 2 / 3 + 1e-9)

    def test_compensated_tolerates_rf_error(self):
        eps = hetero.channel_errors(0.1, ["C"])
        slic = hetero.run_pipeline(self.slic_h, self.slic_c, self.system,
                                   eps)
        cslic = hetero.run_pipeline(self.cslic_h, self.cslic_c, self.system,
                                    eps)
        self.assertGreater(abs(cslic), abs(slic))

    def test_carbon_rf_error(self):
        def signal(h, c, eps):
            return abs(hetero.run_pipeline(
                h, c, self.system, hetero.channel_errors(eps, ["C"])))

        slic = signal(self.slic_h, self.slic_c, 0.0)
        cslic = signal(self.cslic_h, self.cslic_c, 0.0)
        for eps in (-0.1, 0.1):
            self.assertLess(signal(self.slic_h, self.slic_c, eps),
                            0.6 * slic)
        for eps in (-0.5, 0.5):
            self.assertGreater(signal(self.cslic_h, self.cslic_c, eps),
                               0.5 * cslic)

    def test_ensemble_ordering(self):
        adslic_h = build_adslic(AdiabaticShape(0.5, 0.9, 1.78), 15.0, "H")
        adslic_c = build_adslic(AdiabaticShape(0.5, 0.9, 1.56), 15.0, "C")
        distribution = Distribution("gaussian", 0.1, 9)

        def average(h, c):
            return abs(rf_inhomogeneity_average(
                lambda eps: hetero.run_pipeline(
                    h, c, self.system, hetero.channel_errors(eps, ["C"])),
                distribution))

        slic = average(self.slic_h, self.slic_c)
        adslic = average(adslic_h, adslic_c)
        self.assertGreater(average(self.cslic_h, self.cslic_c), adslic)
        self.assertGreater(adslic, slic)

    def test_no_transfer_without_coupling_difference(self):
        system = hetero.build_fumarate_like(15.0, 1.35, 1.35)
        signal = hetero.run_pipeline(self.cslic_h, self.cslic_c, system)
        self.assertLess(abs(signal), 1e-10)

    def test_global_phase_shift(self):
        signal = hetero.run_pipeline(self.cslic_h, self.cslic_c,
                                     self.system)
        shifted = hetero.run_pipeline(self.cslic_h.scaled_phase(0.7),
                                      self.cslic_c.scaled_phase(-1.3),
                                      self.system)
        self.assertAlmostEqual(signal, shifted, places=9)

    def test_no_transfer_without_carbon_lock(self):
        # The filtered state holds no carbon magnetization.
        short = build_slic(15.0, 1e-9, channel="C")
        signal = hetero.run_pipeline(self.slic_h, short, self.system)
        self.assertAlmostEqual(signal, 0.0, places=6)

    def test_wrong_channel(self):
        with self.assertRaises(errors.ChannelError):
            hetero.run_pipeline(self.slic_c, self.slic_c, self.system)

    def test_channel_errors(self):
        self.assertEqual(hetero.channel_errors(0.1, None), 0.1)
        self.assertEqual(hetero.channel_errors(0.1, ["C"]), {"C": 0.1})

    def test_sweep_threads(self):
        eps = numpy.linspace(-0.2, 0.2, 5)
        single = hetero.sweep_pipeline(self.cslic_h, self.cslic_c,
                                       self.system, eps, ["C"], threads=1)
        many = hetero.sweep_pipeline(self.cslic_h, self.cslic_c,
                                     self.system, eps, ["C"], threads=4)
        numpy.testing.assert_array_equal(single, many)
        self.assertEqual(single.shape, (5,))


if __name__ == "__main__":
    unittest.main()
