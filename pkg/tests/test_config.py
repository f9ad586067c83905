import copy
import unittest
import unittest.mock

import spincraft

from spincraft import config, errors
from tests import spintest


class TestLoad(unittest.TestCase):

    def test_load(self):
        with spintest.recipe_file() as path:
            data = config.load(path)
        self.assertEqual(data["version"], "1.0.0")

    def test_version(self):
        for version in ("2.0.0", "0.9.0", "one"):
            data = dict(spintest.fumarate_recipe, version=version)
            with spintest.recipe_file(data) as path:
                with self.assertRaises(errors.ConfigError):
                    config.load(path)

    def test_missing_version(self):
        data = dict(spintest.fumarate_recipe)
        del data["version"]
        with spintest.recipe_file(data) as path:
            with self.assertRaises(errors.ConfigError):
                config.load(path)

    def test_not_a_mapping(self):
        with spintest.recipe_file([1, 2]) as path:
            with self.assertRaises(errors.ConfigError):
                config.load(path)

    def test_missing_file(self):
        with self.assertRaises(errors.ConfigError):
            config.load("/nonexistent/recipe.yaml")

    def test_user_recipe_directory(self):
        name = "user-directory-recipe.yaml"
        with spintest.recipe_file(name=name) as path:
            with unittest.mock.patch.object(spincraft, "homepath",
                                            path.parent):
                self.assertEqual(config.resolve(name), path)
                data = config.load(name)
        self.assertEqual(data["version"], "1.0.0")

    def test_working_directory_first(self):
        with spintest.recipe_file() as path:
            self.assertEqual(config.resolve(path), path)

    def test_malformed(self):
        with spintest.recipe_file() as path:
            path.write_text("version: [1.0\n", encoding="utf-8")
            with self.assertRaises(errors.ConfigError):
                config.load(path)


class TestOverride(unittest.TestCase):

    def test_dotted(self):
        data = config.override(spintest.fumarate_recipe,
                               **{"distribution.width": 0.2,
                                  "eps": None,
                                  "output": "out.csv"})
        self.assertEqual(data["distribution"]["width"], 0.2)
        self.assertEqual(data["distribution"]["kind"], "gaussian")
        self.assertEqual(data["eps"], spintest.fumarate_recipe["eps"])
        self.assertEqual(data["output"], "out.csv")
        self.assertEqual(spintest.fumarate_recipe["distribution"]["width"],
                         0.1)


class TestBuildSequence(unittest.TestCase):

    def test_kinds(self):
        seq = config.build_sequence(
            dict(kind="slic", j_hz=15.0, total_s=0.5), "C")
        self.assertEqual(seq.channels, ["C"])

        seq = config.build_sequence(
            dict(kind="adslic", j_hz=15.0, total_s=1.78, delta_max=0.5,
                 shape_xi=0.9, n_samples=32), "H")
        self.assertEqual(len(seq), 32)

        seq = config.build_sequence(
            dict(kind="cycle", cycle="S3", j_hz=100.0, alpha=0.99,
                 n_cycles=24), "H")
        self.assertEqual(seq.params["repetitions"], 8)

    def test_unknown_kind(self):
        with self.assertRaises(errors.ConfigError):
            config.build_sequence(dict(kind="pulse"), "H")

    def test_unknown_parameter(self):
        with self.assertRaises(errors.ConfigError) as cm:
            config.build_sequence(
                dict(kind="slic", j_hz=15.0, total_s=0.5, tau=1.0), "H")
        self.assertIn("tau", cm.exception.reason)

    def test_incomplete(self):
        with self.assertRaises(errors.ConfigError):
            config.build_sequence(dict(kind="slic", j_hz=15.0), "H")


class TestPipelineConfig(unittest.TestCase):

    def test_recipe(self):
        p = config.pipeline_config(copy.deepcopy(spintest.fumarate_recipe))
        self.assertEqual(p.system.channels, ("H", "H", "C"))
        self.assertEqual(p.seq_h.channels, ["H"])
        self.assertEqual(p.seq_c.channels, ["C"])
        self.assertEqual(p.eps_axis.size, 5)
        self.assertEqual(p.eps_channels, ["C"])
        self.assertEqual(p.distribution.width, 0.1)
        self.assertIsNone(p.output)

    def test_comma_channels(self):
        data = dict(spintest.fumarate_recipe, eps_channels="H,C")
        self.assertEqual(config.pipeline_config(data).eps_channels,
                         ["H", "C"])

    def test_unknown_channel(self):
        data = dict(spintest.fumarate_recipe, eps_channels=["N"])
        with self.assertRaises(errors.ChannelError):
            config.pipeline_config(data)

    def test_missing_sequence(self):
        data = dict(spintest.fumarate_recipe,
                    sequences=dict(H=spintest.fumarate_recipe["sequences"]
                                   ["H"]))
        with self.assertRaises(errors.ConfigError):
            config.pipeline_config(data)

    def test_missing_system(self):
        data = dict(spintest.fumarate_recipe)
        del data["system"]
        with self.assertRaises(errors.ConfigError):
            config.pipeline_config(data)

    def test_bad_distribution(self):
        data = dict(spintest.fumarate_recipe,
                    distribution=dict(kind="gaussian"))
        with self.assertRaises(errors.ConfigError):
            config.pipeline_config(data)


if __name__ == "__main__":
    unittest.main()
