import numpy
import unittest

from spincraft import errors
from spincraft.analysis import ensemble
from spincraft.analysis.ensemble import Distribution


class TestDistribution(unittest.TestCase):

    def test_from_dict(self):
        d = Distribution.from_dict(kind="uniform", width=0.2)
        self.assertEqual(d.points, 81)
        self.assertEqual(Distribution.from_dict(**d.asdict()), d)

    def test_invalid(self):
        for kwargs in (dict(kind="lorentzian", width=0.1),
                       dict(kind="gaussian", width=0.0),
                       dict(kind="gaussian", width=0.1, points=2)):
            with self.assertRaises(errors.ParameterError):
                Distribution.from_dict(**kwargs)

    def test_grid(self):
        nodes, weights = Distribution("gaussian", 0.1, 9).grid(0.5)
        self.assertAlmostEqual(nodes[4], 0.5)
        self.assertAlmostEqual(nodes[0], 0.1)
        self.assertAlmostEqual(weights[4], 1.0)


class TestAverage(unittest.TestCase):

    def test_constant(self):
        d = Distribution("gaussian", 0.1)
        self.assertAlmostEqual(
            ensemble.rf_inhomogeneity_average(lambda e: 0.7, d), 0.7)

    def test_linear(self):
        d = Distribution("gaussian", 0.1)
        self.assertAlmostEqual(
            ensemble.rf_inhomogeneity_average(lambda e: e, d), 0.0)
        self.assertAlmostEqual(
            ensemble.rf_inhomogeneity_average(lambda e: e, d, center=0.2),
            0.2)

    def test_second_moment(self):
        gaussian = Distribution("gaussian", 0.1)
        self.assertAlmostEqual(
            ensemble.rf_inhomogeneity_average(lambda e: e * e, gaussian),
            0.01, delta=1e-4)

        uniform = Distribution("uniform", 0.3)
        self.assertAlmostEqual(
            ensemble.rf_inhomogeneity_average(lambda e: e * e, uniform,
                                              n_points=11),
            0.03)

    def test_ensemble_curve(self):
        d = Distribution("uniform", 0.1, 5)
        values = ensemble.ensemble_curve(lambda e: 2 * e, [0.0, 0.5], d)
        numpy.testing.assert_allclose(values, [0.0, 1.0], atol=1e-12)

    def test_dimension_mismatch(self):
        with self.assertRaises(errors.DimensionError):
            ensemble.quadrature_average([1.0], [0.0, 1.0], [1.0, 1.0])


if __name__ == "__main__":
    unittest.main()
