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
    LEVEL_ORDER,
    Geometry,
    QuadWaveletMatrix,
    RankPredictor,
)

GOLDEN = b"accessandselect"
SIGMAS = (2, 3, 4, 5, 16, 17, 64, 256, 257)


def bit_string(vector):
    return "".join(str(int(b)) for b in vector.to_numpy())


class GoldenMatrixTest(unittest.TestCase):
    def setUp(self):
        self.matrix = QuadWaveletMatrix.from_data(GOLDEN)

    def test_shape(self):
        self.assertEqual(self.matrix.sigma, 8)
        self.assertEqual(self.matrix.bit_width, 3)
        self.assertEqual(self.matrix.levels, 2)
        self.assertEqual(len(self.matrix.planes), 1)
        self.assertEqual(len(self.matrix), 15)

    def test_first_level(self):
        quads = self.matrix.planes[0].to_numpy()
        self.assertListEqual(quads.tolist(), [0, 0, 0, 1, 3, 3, 0, 2, 1, 3, 1, 2, 1, 0, 3])
        self.assertEqual("".join(str(q >> 1) for q in quads), "000011010101001")
        self.assertEqual("".join(str(q & 1) for q in quads), "000111001110101")
        self.assertTupleEqual(self.matrix.cumulative_offsets(0), (5, 7, 11, 15))
        self.assertTupleEqual(self.matrix.offsets[0], (0, 7, 5, 11))

    def test_tail_level(self):
        self.assertEqual(bit_string(self.matrix.tail), "011011010110001")
        self.assertEqual(self.matrix.tail.zeros, 7)

    def test_decode(self):
        decoded = self.matrix.alphabet.decode(self.matrix.to_numpy())
        self.assertEqual(decoded.astype(np.uint8).tobytes(), GOLDEN)
        text = [chr(self.matrix.alphabet.decode_symbol(self.matrix.access(i))) for i in range(15)]
        self.assertEqual("".join(text), GOLDEN.decode())

    def test_queries(self):
        s = self.matrix.alphabet.encode_symbol(ord("s"))
        e = self.matrix.alphabet.encode_symbol(ord("e"))
        self.assertEqual(self.matrix.rank(s, 15), 3)
        self.assertEqual(self.matrix.rank(e, 11), 2)
        self.assertEqual(self.matrix.rank(e, 0), 0)
        self.assertEqual(self.matrix.select(s, 3), 10)
        self.assertEqual(self.matrix.select(e, 1), 4)

    def test_rank_chain(self):
        e = self.matrix.alphabet.encode_symbol(ord("e"))
        starts, ends = self.matrix.rank_chain(e, 15)
        # 'e' is 011: quad 1 then tail bit 1.
        self.assertListEqual(starts, [7, 7 + 4])
        self.assertEqual(ends[-1] - starts[-1], 3)

    def test_trace(self):
        trace = []
        self.matrix.rank(3, 9, trace=trace)
        self.assertListEqual(trace, [0, 1])
        trace = []
        self.matrix.select(3, 1, trace=trace)
        self.assertEqual(len(trace), 2)


class LevelCountTest(unittest.TestCase):
    def test_levels_per_sigma(self):
        rng = np.random.default_rng(1)
        for sigma, levels, tail in (
            (2, 1, True),
            (3, 1, False),
            (4, 1, False),
            (5, 2, True),
            (16, 2, False),
            (17, 3, True),
            (256, 4, False),
            (257, 5, True),
        ):
            matrix = QuadWaveletMatrix.build(rng.integers(0, sigma, 100), sigma)
            self.assertEqual(matrix.levels, levels)
            self.assertEqual(matrix.tail is not None, tail)
            trace = []
            matrix.rank(sigma - 1, 50, trace=trace)
            self.assertEqual(len(trace), levels)

    def test_level_order_is_involution(self):
        self.assertListEqual([LEVEL_ORDER[q] for q in LEVEL_ORDER], [0, 1, 2, 3])


class QuadWaveletMatrixTest(unittest.TestCase):
    def test_single_symbol_text(self):
        matrix = QuadWaveletMatrix.from_data(b"zzzz")
        self.assertEqual(matrix.sigma, 2)
        self.assertEqual(matrix.rank(0, 3), 3)
        self.assertEqual(matrix.select(0, 4), 4)
        with self.assertRaises(LookupError):
            matrix.select(1, 1)

    def test_errors(self):
        matrix = QuadWaveletMatrix.build([0, 1, 2, 3, 4], 5)
        with self.assertRaises(IndexError):
            matrix.access(5)
        with self.assertRaises(IndexError):
            matrix.rank(5, 0)
        with self.assertRaises(IndexError):
            matrix.rank(0, 6)
        with self.assertRaises(LookupError):
            matrix.select(4, 2)
        with self.assertRaises(LookupError):
            matrix.select(4, 0)
        with self.assertRaises(ValueError):
            QuadWaveletMatrix.build([0, 5], 5)
        with self.assertRaises(ValueError):
            QuadWaveletMatrix.build([0], 1 + (1 << 16))
        with self.assertRaises(ValueError):
            QuadWaveletMatrix.from_data(b"")

    def test_space_report_adds_levels_and_predictor(self):
        rng = np.random.default_rng(8)
        matrix = QuadWaveletMatrix.build(rng.integers(0, 32, 9000), 32)
        report = matrix.space_report()
        expected = matrix.planes[0].space_report()
        for plane in matrix.planes[1:]:
            expected = expected + plane.space_report()
        expected = expected + matrix.tail.space_report()
        self.assertEqual(report, expected)
        self.assertEqual(report.predictor_bits, 0)
        predictor = RankPredictor.build(matrix, coarse_epsilon=64)
        matrix.attach_predictor(predictor)
        self.assertEqual(matrix.space_report().predictor_bits, predictor.space_bits())

    def test_prefetch_is_transparent(self):
        rng = np.random.default_rng(9)
        text = rng.integers(0, 200, 20000)
        matrix = QuadWaveletMatrix.build(text, 200, Geometry.SB2048_B256)
        queries = [(int(text[i]), int(i)) for i in rng.integers(0, text.size, 300)]
        plain = [matrix.rank(c, i) for c, i in queries]
        self.assertListEqual([matrix.rank_prefetch(c, i) for c, i in queries], plain)
        matrix.attach_predictor(RankPredictor.build(matrix, coarse_epsilon=256, fine_epsilon=32))
        self.assertListEqual([matrix.rank_prefetch(c, i) for c, i in queries], plain)

    @given(
        st.sampled_from(SIGMAS),
        st.sampled_from(list(Geometry)),
        st.integers(1, 400),
        st.integers(0, 2**32 - 1),
    )
    @settings(max_examples=40, deadline=None)
    def test_against_scan(self, sigma, geometry, n, seed):
        rng = np.random.default_rng(seed)
        text = rng.integers(0, sigma, n)
        matrix = QuadWaveletMatrix.build(text, sigma, geometry)
        np.testing.assert_array_equal(matrix.to_numpy(), text)
        for i in range(n):
            self.assertEqual(matrix.access(i), text[i])
        symbols = set(text[: min(n, 5)].tolist()) | {int(rng.integers(0, sigma))}
        for symbol in symbols:
            prefix = np.concatenate([[0], np.cumsum(text == symbol)])
            for i in range(n + 1):
                self.assertEqual(matrix.rank(symbol, i), prefix[i])
            positions = np.flatnonzero(text == symbol) + 1
            for j in range(1, positions.size + 1):
                self.assertEqual(matrix.select(symbol, j), positions[j - 1])


if __name__ == "__main__":
    unittest.main()
