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

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from lsst.ts.succinct.qwt import (
    BinaryWaveletMatrix,
    BinaryWaveletTree,
    DenseAlphabet,
    validate_text,
)

GOLDEN = b"accessandselect"


class BinaryWaveletMatrixTest(unittest.TestCase):
    def setUp(self):
        self.codes = DenseAlphabet.from_data(GOLDEN).encode(GOLDEN)
        self.matrix = BinaryWaveletMatrix.build(self.codes, 8)

    def test_golden_zeros(self):
        self.assertListEqual(list(self.matrix.zeros), [9, 7, 7])
        top = "".join(str(b) for b in self.matrix.planes[0].to_numpy().astype(int))
        self.assertEqual(top, "000011010101001")
        self.assertListEqual(self.matrix.ones_before, [0, 6, 14])

    def test_golden_queries(self):
        # 's' is code 6 and 'e' is code 3.
        self.assertEqual(self.matrix.rank(6, 15), 3)
        self.assertEqual(self.matrix.rank(6, 5), 1)
        self.assertEqual(self.matrix.select(3, 2), 11)
        self.assertEqual(self.matrix.access(7), 5)

    def test_trace_visits_every_level(self):
        trace = []
        self.matrix.rank(1, 9, trace=trace)
        self.assertListEqual(trace, [0, 1, 2])

    def test_errors(self):
        with self.assertRaises(IndexError):
            self.matrix.access(15)
        with self.assertRaises(IndexError):
            self.matrix.rank(8, 0)
        with self.assertRaises(IndexError):
            self.matrix.rank(0, 16)
        with self.assertRaises(LookupError):
            self.matrix.select(7, 2)
        with self.assertRaises(ValueError):
            BinaryWaveletMatrix.build([0, 8], 8)
        with self.assertRaises(ValueError):
            validate_text([0], 1)

    def test_space_report(self):
        report = self.matrix.space_report()
        self.assertEqual(report.data_bits, 3 * 15)

    @given(
        st.integers(2, 300).flatmap(
            lambda sigma: st.tuples(
                st.just(sigma), st.lists(st.integers(0, sigma - 1), min_size=1, max_size=150)
            )
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_against_scan(self, case):
        sigma, values = case
        text = np.array(values)
        matrix = BinaryWaveletMatrix.build(text, sigma)
        tree = BinaryWaveletTree.build(text, sigma)
        for i in range(text.size):
            self.assertEqual(matrix.access(i), text[i])
        for symbol in sorted(set(values))[:6] + [sigma - 1]:
            for i in range(0, text.size + 1):
                expected = int(np.count_nonzero(text[:i] == symbol))
                self.assertEqual(matrix.rank(symbol, i), expected)
                self.assertEqual(tree.rank(symbol, i), expected)
            positions = np.flatnonzero(text == symbol) + 1
            for j in range(1, positions.size + 1):
                self.assertEqual(matrix.select(symbol, j), positions[j - 1])


class BinaryWaveletTreeTest(unittest.TestCase):
    def test_golden_rank(self):
        codes = DenseAlphabet.from_data(GOLDEN).encode(GOLDEN)
        tree = BinaryWaveletTree.build(codes, 8)
        trace = []
        self.assertEqual(tree.rank(3, 15, trace=trace), 3)
        self.assertListEqual(trace, [0, 1, 2])
        self.assertEqual(tree.rank(0, 7), 2)
        with self.assertRaises(IndexError):
            tree.rank(0, 16)


if __name__ == "__main__":
    unittest.main()
