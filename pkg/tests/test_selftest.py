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

import unittest
from unittest import mock

import numpy as np

from lsst.ts.succinct.qwt import run_selftest
from lsst.ts.succinct.qwt import selftest


class SelftestTest(unittest.TestCase):
    def test_quick_suite_passes(self):
        results = run_selftest(seed=3)
        self.assertListEqual([result.name for result in results], [name for name, _ in selftest.CHECKS])
        for result in results:
            self.assertTrue(result.passed, "{}: {}".format(result.name, result.detail))

    def test_quick_space_laws_hold(self):
        sizes = selftest._Sizes(False)
        self.assertGreaterEqual(sizes.space_law_quads, 1 << 21)
        detail = selftest.check_space_laws(sizes, np.random.default_rng(0))
        self.assertTrue(detail.endswith("n={}".format(1 << 21)))

    def test_failure_reported(self):
        def broken(sizes, rng):
            selftest._expect(False, "rank({}) is off", 7)

        checks = (("broken", broken), selftest.CHECKS[0])
        with mock.patch.object(selftest, "CHECKS", checks):
            results = run_selftest()
        self.assertFalse(results[0].passed)
        self.assertEqual(results[0].detail, "rank(7) is off")
        self.assertTrue(results[1].passed)


if __name__ == "__main__":
    unittest.main()
