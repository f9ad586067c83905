import io
import numpy
import pathlib
import tempfile
import unittest

from spincraft import errors
from spincraft.analysis import saving
from spincraft.analysis.transfer import EfficiencyCurve, TransferMap


class TestSaving(unittest.TestCase):

    def setUp(self):
        self.map = TransferMap([-1.0, 0.0, 1.0], [-0.5, 0.5],
                               [[0.1, 0.2, 0.3], [0.4, 0.5, 0.6]],
                               dict(sequence="slic", duration_s=0.236))

    def test_csv_layout(self):
        f = io.StringIO()
        saving.csv_export(f, self.map)

        lines = f.getvalue().splitlines()
        self.assertEqual(lines[0], "offset_hz,eps_rf,amplitude")
        self.assertEqual(lines[1], "-1,-0.5,0.1")
        self.assertEqual(lines[2], "0,-0.5,0.2")
        self.assertEqual(lines[4], "-1,0.5,0.4")
        self.assertEqual(len(lines), 7)
        self.assertNotIn("\r", f.getvalue())

    def test_csv_file(self):
        with tempfile.TemporaryDirectory() as workdir:
            path = pathlib.Path(workdir).joinpath("map.csv")
            saving.csv_export(path, self.map)
            m = saving.load_csv(path)

        numpy.testing.assert_array_equal(m.offset_axis_hz,
                                         self.map.offset_axis_hz)
        numpy.testing.assert_array_equal(m.amplitude, self.map.amplitude)

    def test_csv_curve(self):
        f = io.StringIO()
        saving.csv_export(f, EfficiencyCurve([0.0, 0.1], [1.0, 0.123456789]))
        self.assertEqual(f.getvalue(), "eps_rf,amplitude\n0,1\n"
                                       "0.1,0.123456789\n")

        f.seek(0)
        curve = saving.load_csv(f)
        self.assertIsInstance(curve, EfficiencyCurve)
        self.assertEqual(len(curve), 2)

    def test_json(self):
        f = io.StringIO()
        saving.json_export(f, self.map)
        f.seek(0)

        m = saving.load_json(f)
        self.assertEqual(m.metadata, self.map.metadata)
        numpy.testing.assert_array_equal(m.amplitude, self.map.amplitude)

    def test_malformed(self):
        with self.assertRaises(errors.ConfigError):
            saving.load_csv(io.StringIO("a,b\n1,2\n"))
        with self.assertRaises(errors.ConfigError):
            saving.load_csv(io.StringIO("eps_rf,amplitude\n1,x\n"))
        with self.assertRaises(errors.ConfigError):
            saving.load_json(io.StringIO("{"))

    def test_missing_directory(self):
        with tempfile.TemporaryDirectory() as workdir:
            path = pathlib.Path(workdir).joinpath("missing", "map.csv")
            with self.assertRaises(OSError):
                saving.csv_export(path, self.map)


if __name__ == "__main__":
    unittest.main()
