# This file is part of ts_succinct_qwt.
#
# Developed for the Vera Rubin Observatory Telescope and Site Systems.
# This product includes software developed by the LSST Project
# (https://www.lsst.org).
# See the COPYRIGHT file at the top-level directory of this distribution
# for details of code ownership.
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License

import contextlib
import csv
import io
import json
import os
import tempfile
import unittest
from unittest import mock

from lsst.ts.succinct.qwt import CheckResult, cli


class CliTest(unittest.TestCase):
    def setUp(self):
        self.tmpdir = tempfile.TemporaryDirectory()
        self.corpus = self.path("corpus.txt")
        with open(self.corpus, "wb") as stream:
            stream.write(b"accessandselect" * 40)
        self.index = self.path("corpus.qwt")

    def tearDown(self):
        self.tmpdir.cleanup()

    def path(self, name):
        return os.path.join(self.tmpdir.name, name)

    def run_main(self, *argv):
        stdout = io.StringIO()
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(io.StringIO()):
            code = cli.main(list(argv))
        return code, stdout.getvalue()

    def run_json(self, *argv):
        code, output = self.run_main(*argv)
        self.assertEqual(code, 0, output)
        return json.loads(output)

    def test_build_and_query(self):
        code, _ = self.run_main("build", self.corpus, "-o", self.index)
        self.assertEqual(code, 0)
        self.assertTrue(os.path.exists(self.index))

        record = self.run_json("query", self.index, "--kind", "access", "--pos", "4")
        self.assertEqual(record["answer"], ord("s"))
        record = self.run_json("query", self.index, "--kind", "rank", "--pos", "15", "--sym", "s")
        self.assertEqual(record["answer"], 3)
        record = self.run_json("query", self.index, "--kind", "select", "--pos", "1", "--sym", "e")
        self.assertEqual(record["answer"], 4)
        record = self.run_json("query", self.index, "--kind", "rank", "--pos", "15", "--sym", "z")
        self.assertEqual(record["answer"], 0)
        record = self.run_json("query", self.index, "--kind", "rank", "--pos", "10", "--sym", "115")
        self.assertEqual(record["answer"], 3)

    def test_stats(self):
        self.run_main("build", self.corpus, "-o", self.index, "--prefetch", "--corrected", "--epsilon", "64")
        record = self.run_json("stats", self.index)
        self.assertEqual(record["n"], 600)
        self.assertEqual(record["sigma"], 8)
        self.assertEqual(record["levels"], 2)
        self.assertGreater(record["predictor_bits"], 0)
        self.assertFalse(record["search"])

        record = self.run_json(
            "query", self.index, "--kind", "rank", "--pos", "300", "--sym", "c", "--prefetch"
        )
        self.assertEqual(record["answer"], 60)

    def test_search(self):
        self.run_main("build", self.corpus, "-o", self.index, "--fm", "--geometry", "256")
        record = self.run_json("search", self.index, "--pattern", "ssa")
        self.assertEqual(record["count"], 40)
        record = self.run_json("search", self.index, "--pattern", "lectac")
        self.assertEqual(record["count"], 39)
        record = self.run_json("search", self.index, "--pattern", "xyz")
        self.assertEqual(record["count"], 0)
        self.assertIsNone(record["interval"])
        record = self.run_json("query", self.index, "--kind", "access", "--pos", "0")
        # Row 0 is the sentinel suffix, preceded by the last text symbol.
        self.assertEqual(record["answer"], ord("t"))

    def test_bench(self):
        self.run_main("build", self.corpus, "-o", self.index, "--prefetch", "--epsilon", "16")
        record = self.run_json(
            "bench", self.index, "--kind", "rank", "--count", "200", "--reps", "2", "--oracle", "binwm"
        )
        self.assertEqual(record["count"], 200)
        self.assertEqual(record["repetitions"], 2)
        self.assertEqual(record["structure"], "qwm")

        code, output = self.run_main(
            "bench", self.index, "--kind", "select", "--count", "50", "--reps", "1", "--format", "csv"
        )
        self.assertEqual(code, 0)
        rows = list(csv.DictReader(io.StringIO(output)))
        self.assertEqual(len(rows), 1)
        self.assertEqual(rows[0]["kind"], "select")

        record = self.run_json(
            "bench",
            self.index,
            "--kind",
            "rank",
            "--count",
            "100",
            "--reps",
            "1",
            "--chained",
            "--compare-prefetch",
        )
        self.assertEqual(record["plain"]["checksum"], record["prefetch"]["checksum"])

    def test_hardware_pinned(self):
        self.run_main("build", self.corpus, "-o", self.index)
        with mock.patch.dict(os.environ, {"QWT_HARDWARE": "pinned-rig"}):
            record = self.run_json("bench", self.index, "--kind", "access", "--count", "10", "--reps", "1")
        self.assertEqual(record["hardware"], "pinned-rig")

    def test_invalid_input(self):
        self.run_main("build", self.corpus, "-o", self.index)
        code, _ = self.run_main("query", self.index, "--kind", "access", "--pos", "600")
        self.assertEqual(code, 1)
        code, _ = self.run_main("query", self.index, "--kind", "rank", "--pos", "5")
        self.assertEqual(code, 1)
        code, _ = self.run_main("query", self.index, "--kind", "select", "--pos", "1", "--sym", "z")
        self.assertEqual(code, 1)
        code, _ = self.run_main("query", self.index, "--kind", "select", "--pos", "41", "--sym", "n")
        self.assertEqual(code, 1)
        code, _ = self.run_main("search", self.index, "--pattern", "ss")
        self.assertEqual(code, 1)

        empty = self.path("empty.txt")
        open(empty, "wb").close()
        code, _ = self.run_main("build", empty, "-o", self.path("empty.qwt"))
        self.assertEqual(code, 1)

    def test_usage_error(self):
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as raised:
                cli.main(["query", self.index, "--kind", "count", "--pos", "1"])
        self.assertEqual(raised.exception.code, 1)

    def test_io_error(self):
        code, _ = self.run_main("stats", self.path("missing.qwt"))
        self.assertEqual(code, 2)
        code, _ = self.run_main("build", self.path("missing.txt"), "-o", self.index)
        self.assertEqual(code, 2)

    def test_selftest_exit_code(self):
        passing = [CheckResult("golden-matrix", True, "ok")]
        with mock.patch.object(cli, "run_selftest", return_value=passing):
            code, output = self.run_main("selftest")
        self.assertEqual(code, 0)
        self.assertIn("golden-matrix", output)

        failing = passing + [CheckResult("space-laws", False, "counter overhead")]
        with mock.patch.object(cli, "run_selftest", return_value=failing):
            code, output = self.run_main("selftest", "--full")
        self.assertEqual(code, 1)
        self.assertIn("FAIL", output)


if __name__ == "__main__":
    unittest.main()
