import flagparse
import numpy
import pathlib
import tempfile
import unittest
import unittest.mock
import yaml

from spincraft.analysis import saving
from spincraft.logging import internal_logger
from spincraft.shell import commands
from tests import spintest


class TestMap(unittest.TestCase):

    def handle(self, **kwargs):
        command = commands.Map(unittest.mock.Mock())
        command.handle(spintest.namespace(command, **kwargs))

    def test_csv(self):
        with tempfile.TemporaryDirectory() as workdir:
            path = pathlib.Path(workdir).joinpath("map.csv")
            self.handle(j=50.0, delta=2.0, res=3, eps_range="-0.1:0.1",
                        offset_range="-5:5", source="-x", out=str(path))
            m = saving.load_csv(path)

        self.assertEqual(m.shape, (3, 3))
        numpy.testing.assert_allclose(m.eps_axis, [-0.1, 0.0, 0.1])
        self.assertGreater(m.amplitude[1, 1], 0.95)

    def test_json(self):
        with tempfile.TemporaryDirectory() as workdir:
            path = pathlib.Path(workdir).joinpath("map.json")
            self.handle(j=100.0, delta=3.0, sequence="cslic", res=2,
                        eps_range="0", offset_range="-1:1", out=str(path))
            m = saving.load_json(path)

        self.assertEqual(m.shape, (1, 2))
        self.assertEqual(m.metadata["sequence"], "cslic")
        self.assertEqual(m.metadata["params"]["n_reps"], 24)

    def test_threads_do_not_change_output(self):
        outputs = []
        with tempfile.TemporaryDirectory() as workdir:
            for threads in (1, 8):
                path = pathlib.Path(workdir).joinpath(f"map{threads}.csv")
                self.handle(j=100.0, delta=3.0, sequence="cycle:S3", res=3,
                            eps_range="-0.2:0.2", threads=threads,
                            out=str(path))
                outputs.append(path.read_bytes())
        self.assertEqual(outputs[0], outputs[1])

    def test_missing_j(self):
        with spintest.exit_codes():
            with self.assertRaises(spintest.ExitError) as cm:
                self.handle(delta=3.0)
        self.assertEqual(cm.exception.code, 2)

    def test_invalid_phase(self):
        with self.assertRaises(flagparse.ExitError):
            self.handle(j=15.0, delta=3.0, phase="y")

    def test_invalid_sequence(self):
        with self.assertRaises(flagparse.ExitError):
            self.handle(j=15.0, delta=3.0, sequence="hard")
        with self.assertRaises(flagparse.ExitError):
            self.handle(j=15.0, delta=3.0, sequence="cycle:ABX")

    def test_invalid_range(self):
        with self.assertRaises(flagparse.ExitError):
            self.handle(j=15.0, delta=3.0, eps_range="a:b")

    def test_unwritable_output(self):
        with spintest.exit_codes():
            with self.assertRaises(spintest.ExitError) as cm:
                self.handle(j=15.0, delta=3.0, res=2,
                            out="/nonexistent/dir/map.csv")
        self.assertEqual(cm.exception.code, 1)


class TestResponse(unittest.TestCase):

    def handle(self, **kwargs):
        command = commands.Response(unittest.mock.Mock())
        with tempfile.TemporaryDirectory() as workdir:
            path = pathlib.Path(workdir).joinpath("curve.csv")
            command.handle(spintest.namespace(command, out=str(path),
                                              **kwargs))
            return saving.load_csv(path)

    def test_analytic(self):
        curve = self.handle(j=15.0, delta=3.0, eps_range="-2:0.5:6")
        self.assertAlmostEqual(curve.amplitude[4], 1.0, places=6)

        curve = self.handle(j=15.0, delta=3.0, mode="analytic-cslic",
                            eps_range="-2:0.5:6")
        self.assertAlmostEqual(curve.amplitude[0], -1.0, places=6)
        self.assertAlmostEqual(curve.amplitude[4], 1.0, places=6)
        self.assertAlmostEqual(curve.amplitude[5], 0.670, delta=0.005)

    def test_numeric_normalized(self):
        curve = self.handle(j=50.0, delta=2.0, mode="numeric",
                            eps_range="-0.1:0.1:3")
        self.assertAlmostEqual(curve.amplitude[1], 1.0, places=6)
        self.assertLess(curve.amplitude[0], 1.0)

    def test_logs_width(self):
        with self.assertLogs(internal_logger, level="INFO") as cm:
            self.handle(j=15.0, delta=3.0, mode="analytic-cslic",
                        eps_range="-0.5:0.5:11")
        self.assertTrue(any("width" in line for line in cm.output))

    def test_missing_delta(self):
        with self.assertRaises(flagparse.ExitError):
            self.handle(j=15.0)


class TestEffham(unittest.TestCase):

    @unittest.mock.patch("builtins.print")
    def test_slic(self, print_mock):
        command = commands.Effham(unittest.mock.Mock())
        command.handle(spintest.namespace(command, j=100.0, delta=3.0,
                                          steps=100))

        report = yaml.safe_load(print_mock.call_args[0][0])
        self.assertEqual(report["dominant"]["transition"], "S0,T+")
        self.assertAlmostEqual(abs(report["dominant"]["relative"]), 1.0,
                               places=5)
        self.assertIn("S0,T-", report["coefficients"])

    @unittest.mock.patch("builtins.print")
    def test_keeps_flags(self, print_mock):
        command = commands.Effham(unittest.mock.Mock())
        args = spintest.namespace(command, j=100.0, delta=3.0,
                                  sequence="cslic", steps=10)
        command.handle(args)

        self.assertIsNone(args.n)
        report = yaml.safe_load(print_mock.call_args[0][0])
        self.assertEqual(report["dominant"]["transition"], "S0,T+")

    @unittest.mock.patch("builtins.print")
    def test_cycle(self, print_mock):
        command = commands.Effham(unittest.mock.Mock())
        command.handle(spintest.namespace(command, j=100.0, delta=3.0,
                                          sequence="cycle:ABBA", steps=100,
                                          matrix=True))

        report = yaml.safe_load(print_mock.call_args[0][0])
        self.assertEqual(report["sequence"], "cycle:ABBA")
        self.assertEqual(len(report["matrix"]), 4)

    def test_invalid_method(self):
        command = commands.Effham(unittest.mock.Mock())
        with self.assertRaises(flagparse.ExitError):
            command.handle(spintest.namespace(command, j=100.0, delta=3.0,
                                              method="simpson"))


class TestParse(unittest.TestCase):

    @unittest.mock.patch("builtins.print")
    def test_expansion(self, print_mock):
        command = commands.Parse(unittest.mock.Mock())
        command.handle(spintest.namespace(command, text="S3"))

        report = yaml.safe_load(print_mock.call_args[0][0])
        self.assertEqual(report["expansion"], "AABBABBABBAA")
        self.assertEqual(report["elements"], 12)
        self.assertNotIn("segments", report)

    @unittest.mock.patch("builtins.print")
    def test_timings(self, print_mock):
        command = commands.Parse(unittest.mock.Mock())
        command.handle(spintest.namespace(command, text="ABBA", j=15.0))

        report = yaml.safe_load(print_mock.call_args[0][0])
        self.assertEqual(len(report["segments"]), 3)
        self.assertAlmostEqual(report["duration_s"], 1 / 15.0)

    def test_syntax_error(self):
        command = commands.Parse(unittest.mock.Mock())
        with self.assertRaises(flagparse.ExitError):
            command.handle(spintest.namespace(command, text="AB?"))


class TestPipeline(unittest.TestCase):

    def test_pipeline(self):
        command = commands.Pipeline(unittest.mock.Mock())
        with spintest.recipe_file() as path:
            out = path.parent.joinpath("curve.csv")
            with unittest.mock.patch("builtins.print") as print_mock:
                command.handle(spintest.namespace(
                    command, config=str(path), eps_range="-0.1:0.1:3",
                    points=5, out=str(out)))
            curve = saving.load_csv(out)

        self.assertEqual(len(curve), 3)
        self.assertGreater(abs(curve.amplitude[1]), 0.5)

        summary = yaml.safe_load(print_mock.call_args[0][0])
        self.assertEqual(summary["points"], 3)
        self.assertGreater(abs(summary["ensemble_mean"]), 0.5)

    def test_missing_config(self):
        command = commands.Pipeline(unittest.mock.Mock())
        with self.assertRaises(flagparse.ExitError):
            command.handle(spintest.namespace(command))
        with self.assertRaises(flagparse.ExitError):
            command.handle(spintest.namespace(
                command, config="/nonexistent/recipe.yaml"))


if __name__ == "__main__":
    unittest.main()
