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

import os
import tempfile
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from lsst.ts.succinct.qwt import (
    ACCESS,
    RANK,
    SELECT,
    SplitMix64,
    gen_queries,
    ingest,
)


class SplitMix64Test(unittest.TestCase):
    def test_known_outputs(self):
        rng = SplitMix64(0)
        self.assertEqual(rng.next(), 0xE220A8397B1DCDAF)
        self.assertEqual(rng.next(), 0x6E789E6AA1B965F4)

    def test_deterministic(self):
        first = SplitMix64(1234)
        second = SplitMix64(1234)
        self.assertListEqual([first.next() for _ in range(10)], [second.next() for _ in range(10)])
        self.assertNotEqual(SplitMix64(1).next(), SplitMix64(2).next())

    @given(st.integers(0, 2**64 - 1), st.integers(1, 2**40))
    @settings(max_examples=200)
    def test_below(self, seed, bound):
        rng = SplitMix64(seed)
        for _ in range(5):
            value = rng.below(bound)
            self.assertGreaterEqual(value, 0)
            self.assertLess(value, bound)


class GenQueriesTest(unittest.TestCase):
    def setUp(self):
        rng = np.random.default_rng(8)
        self.text = rng.integers(0, 20, 3000)

    def test_deterministic(self):
        first = gen_queries(self.text, RANK, 500, seed=42)
        second = gen_queries(self.text, RANK, 500, seed=42)
        self.assertListEqual(first.entries, second.entries)
        other = gen_queries(self.text, RANK, 500, seed=43)
        self.assertNotEqual(first.entries, other.entries)

    def test_access(self):
        workload = gen_queries(self.text, ACCESS, 300, seed=1)
        self.assertEqual(len(workload), 300)
        self.assertIsNone(workload.symbols)
        self.assertTrue(all(0 <= p < self.text.size for p in workload.entries))

    def test_rank_uses_symbol_at_position(self):
        workload = gen_queries(self.text, RANK, 300, seed=2)
        for position, symbol in workload.entries:
            self.assertEqual(symbol, self.text[position])

    def test_select_occurrence_range(self):
        workload = gen_queries(self.text, SELECT, 300, seed=3)
        occurrences = np.bincount(self.text)
        for occurrence, symbol in workload.entries:
            self.assertGreaterEqual(occurrence, 1)
            self.assertLessEqual(occurrence, occurrences[symbol])

    def test_select_symbols_follow_text_frequencies(self):
        rng = np.random.default_rng(15)
        text = np.where(rng.random(20000) < 0.7, 0, rng.integers(1, 8, 20000))
        workload = gen_queries(text, SELECT, 20000, seed=6)
        drawn = np.bincount(workload.symbols, minlength=8) / len(workload)
        corpus = np.bincount(text, minlength=8) / text.size
        np.testing.assert_allclose(drawn, corpus, atol=0.02)

    def test_same_positions_across_kinds(self):
        access = gen_queries(self.text, ACCESS, 100, seed=9)
        rank = gen_queries(self.text, RANK, 100, seed=9)
        np.testing.assert_array_equal(access.arguments, rank.arguments)

    def test_chain(self):
        workload = gen_queries(self.text, RANK, 10, seed=4, chained=True)
        self.assertTrue(workload.chained)
        self.assertEqual(workload.chain(5, 0, 0), 5)
        self.assertEqual(workload.chain(5, 0, 3), 6)
        self.assertEqual(workload.chain(2999, 0, 1), 2998)
        self.assertLess(workload.chain(2999, 0, 4096), 3000)

        select = gen_queries(self.text, SELECT, 10, seed=4, chained=True)
        occurrences = int(np.count_nonzero(self.text == 7))
        for previous in (0, 1, 17, 2**40):
            value = select.chain(occurrences, 7, previous)
            self.assertGreaterEqual(value, 1)
            self.assertLessEqual(value, occurrences)
        self.assertEqual(select.chain(3, 7, 0), 3)

    def test_errors(self):
        with self.assertRaises(ValueError):
            gen_queries(self.text, "count", 10, seed=0)
        with self.assertRaises(ValueError):
            gen_queries([], RANK, 10, seed=0)
        with self.assertRaises(ValueError):
            gen_queries(self.text, RANK, 0, seed=0)


class IngestTest(unittest.TestCase):
    def setUp(self):
        self.tmpdir = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmpdir.cleanup()

    def write(self, data):
        path = os.path.join(self.tmpdir.name, "corpus.txt")
        with open(path, "wb") as stream:
            stream.write(data)
        return path

    def test_dna(self):
        codes, alphabet = ingest(self.write(b"GATTACA" * 100))
        self.assertEqual(alphabet.sigma, 4)
        self.assertEqual(codes.size, 700)
        self.assertListEqual(codes[:7].tolist(), [2, 0, 3, 3, 0, 1, 0])

    def test_limit(self):
        codes, alphabet = ingest(self.write(b"aaaabbbbcccc"), limit=6)
        self.assertEqual(codes.size, 6)
        self.assertEqual(alphabet.sigma, 2)

    def test_empty(self):
        with self.assertRaises(ValueError):
            ingest(self.write(b""))

    def test_missing(self):
        with self.assertRaises(OSError):
            ingest(os.path.join(self.tmpdir.name, "missing.txt"))


if __name__ == "__main__":
    unittest.main()
