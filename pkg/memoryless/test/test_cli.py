import io
import json
import math
from contextlib import redirect_stdout
from pathlib import Path
from tempfile import TemporaryDirectory

import numpy
from unittest import TestCase
from unittest.mock import patch

from memoryless.cli import main, exit_cp, exit_constraint_violation, exit_ncp, exit_singular, exit_usage, \
    exit_cannot_create
from memoryless.dynamical_map import save_map, identity_map, StochasticMap, a_to_b, load_map, DynamicalMap
from memoryless.tools import write_text


def run(*argv: str):
    output = io.StringIO()
    with redirect_stdout(output):
        code = main(list(argv))
    return code, output.getvalue()


def transpose_map() -> StochasticMap:
    a = numpy.zeros((4, 4))
    for a1 in range(2):
        for a2 in range(2):
            a[a2 * 2 + a1, a1 * 2 + a2] = 1
    return StochasticMap(a)


class ValidateCommandTest(TestCase):
    def setUp(self):
        self.directory = TemporaryDirectory()
        self.path = Path(self.directory.name)

    def tearDown(self):
        self.directory.cleanup()

    def test_identity(self):
        save_map(self.path / "identity.json", identity_map(2))
        code, output = run("validate", str(self.path / "identity.json"))

        self.assertEqual(exit_cp, code)
        self.assertIn("CP", output)

    def test_transpose_is_ncp(self):
        save_map(self.path / "transpose.json", a_to_b(transpose_map()))
        code, output = run("validate", str(self.path / "transpose.json"), "--format", "json")

        self.assertEqual(exit_ncp, code)
        parsed = json.loads(output)
        self.assertTrue(parsed["valid"])
        self.assertAlmostEqual(-1, parsed["lambda_min"])
        self.assertEqual("NCP", parsed["verdict"])

    def test_constraint_violation(self):
        a = numpy.identity(4)
        a[0, 0] = 0.5
        save_map(self.path / "broken.json", StochasticMap(a))
        code, output = run("validate", str(self.path / "broken.json"), "--format", "json")

        self.assertEqual(exit_constraint_violation, code)
        self.assertFalse(json.loads(output)["valid"])

    def test_malformed_file(self):
        write_text(self.path / "bad.json", "{")
        self.assertEqual(exit_usage, run("validate", str(self.path / "bad.json"))[0])
        self.assertEqual(exit_usage, run("validate", str(self.path / "missing.json"))[0])


class IntermediateCommandTest(TestCase):
    def test_verdicts(self):
        code, output = run("intermediate", "--model", "twoqubit", "--param", "omega=1", "--t1", "1", "--t2", "2")
        self.assertEqual(exit_cp, code)
        self.assertEqual("CP", json.loads(output)["verdict"])

        code, output = run("intermediate", "--model", "twoqubit", "--param", "omega=1", "--t1", "1.4", "--t2", "2.8")
        self.assertEqual(exit_ncp, code)
        self.assertAlmostEqual(-4.5436, json.loads(output)["lambda_min"], places=4)

        code, output = run("intermediate", "--model", "twoqubit", "--t1", str(math.pi / 2), "--t2", str(math.pi))
        self.assertEqual(exit_singular, code)
        self.assertIsNone(json.loads(output)["lambda_min"])

    def test_usage_errors(self):
        self.assertEqual(exit_usage, run("intermediate", "--model", "ising", "--t1", "1", "--t2", "2")[0])
        self.assertEqual(exit_usage, run("intermediate", "--model", "twoqubit", "--t1", "2", "--t2", "1")[0])
        self.assertEqual(exit_usage, run("intermediate", "--model", "twoqubit", "--t1", "1")[0])
        self.assertEqual(exit_usage, run("intermediate", "--model", "twoqubit", "--param", "N=2", "--t1", "1",
                                         "--t2", "2")[0])
        self.assertEqual(exit_usage, run("frobnicate")[0])
        self.assertEqual(exit_usage, run()[0])

    def test_eigensolver_failure(self):
        with patch("memoryless.tensor.jacobi_max_sweep_count", 0):
            code, output = run("intermediate", "--model", "twoqubit", "--param", "omega=1", "--t1", "1", "--t2", "2")

        self.assertEqual(exit_constraint_violation, code)
        self.assertEqual("", output)


class ModelCommandTest(TestCase):
    def test_choi_output(self):
        with TemporaryDirectory() as directory:
            file = Path(directory, "b.json")
            code, _ = run("model", "--model", "spinbath", "--param", "N=4", "--t", "0.3", "--kind", "B",
                          "--output", str(file))
            loaded = load_map(file)

        self.assertEqual(exit_cp, code)
        self.assertIsInstance(loaded, DynamicalMap)
        self.assertAlmostEqual(1, numpy.trace(loaded.matrix).real / 2)


class SweepCommandTest(TestCase):
    arguments = ["sweep", "--model", "twoqubit", "--param", "omega=1", "--t1", "1", "--mu", "1.5,2,4"]

    def test_standard_output(self):
        code, output = run(*self.arguments)
        lines = output.split("\n")

        self.assertEqual(exit_cp, code)
        self.assertEqual("model,t1,t2,mu,omega,lambda_min,lambda2,lambda3,lambda4,verdict", lines[0])
        self.assertEqual(5, len(lines))
        self.assertTrue(lines[3].endswith(",NCP"))

    def test_file_output_matches_standard_output(self):
        _, printed = run(*self.arguments)
        with TemporaryDirectory() as directory:
            file = Path(directory, "sweep.csv")
            code, output = run(*(self.arguments + ["--output", str(file)]))
            self.assertEqual(exit_cp, code)
            self.assertEqual("", output)
            self.assertEqual(printed, file.read_text())

    def test_json_and_config_file(self):
        with TemporaryDirectory() as directory:
            config = Path(directory, "run.json")
            write_text(config, json.dumps({"model": "spinbath", "parameters": {"A": 1}, "grid": {"N": "2,4"},
                                           "t1": 0.3, "mu": "2,3", "format": "json"}))
            code, output = run("sweep", "--config", str(config))

        self.assertEqual(exit_cp, code)
        self.assertEqual([2, 2, 4, 4], [record["parameters"]["N"] for record in json.loads(output)])

    def test_unwritable_output(self):
        with TemporaryDirectory() as directory:
            blocker = Path(directory, "file")
            write_text(blocker, "")
            code, _ = run(*(self.arguments + ["--output", str(blocker / "sweep.csv")]))

        self.assertEqual(exit_cannot_create, code)

    def test_bad_grid(self):
        self.assertEqual(exit_usage, run("sweep", "--model", "twoqubit", "--t1", "1", "--mu", "3:1:0.1")[0])
        self.assertEqual(exit_usage, run("sweep", "--model", "twoqubit", "--t1", "1", "--mu", "0.5,2")[0])
        self.assertEqual(exit_usage, run(*(self.arguments + ["--processes", "0"]))[0])

    def test_log_file(self):
        with TemporaryDirectory() as directory:
            log_file = Path(directory, "run.log")
            code, _ = run(*(self.arguments + ["--output", str(Path(directory, "sweep.csv")),
                                              "--log-file", str(log_file)]))

            self.assertEqual(exit_cp, code)
            self.assertIn("sweep.csv", log_file.read_text())


class ConcurrenceCommandTest(TestCase):
    def test_revival(self):
        code, output = run("concurrence", "--profile", "cospow2m", "--param", "M=1", "--t", "0,1.5,3")
        lines = output.split("\n")

        self.assertEqual(exit_cp, code)
        self.assertEqual("t,p,concurrence", lines[0])
        self.assertEqual("0,1,1", lines[1])
        self.assertTrue(lines[2].endswith(",0"))
        self.assertNotEqual("0", lines[3].split(",")[2])

    def test_preset(self):
        code, output = run("concurrence", "--preset", "markov", "--format", "json")
        self.assertEqual(exit_cp, code)
        self.assertEqual(315, len(json.loads(output)))


class OracleCommandTest(TestCase):
    def test_optical(self):
        code, output = run("oracle", "--which", "optical", "--format", "json")

        self.assertEqual(exit_cp, code)
        self.assertTrue(all(report["passed"] for report in json.loads(output)))
