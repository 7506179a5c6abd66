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
    group_count,
    lane_matches,
    lane_matches_array,
    pack_counter_groups,
    popcount64,
    select_in_word,
    unpack_counter_groups,
)

words64 = st.integers(min_value=0, max_value=(1 << 64) - 1)


def pack_lanes(quads):
    word = 0
    for lane, quad in enumerate(quads):
        word |= quad << (2 * lane)
    return word


class PopcountTest(unittest.TestCase):
    @given(st.lists(words64, max_size=40))
    @settings(max_examples=200, deadline=None)
    def test_matches_bin_count(self, words):
        counts = popcount64(np.array(words, dtype=np.uint64))
        self.assertListEqual(counts.tolist(), [bin(w).count("1") for w in words])

    def test_extremes(self):
        counts = popcount64(np.array([0, 1, (1 << 64) - 1, 1 << 63], dtype=np.uint64))
        self.assertListEqual(counts.tolist(), [0, 1, 64, 1])

    def test_keeps_shape(self):
        words = np.array([[3, 7], [0, (1 << 64) - 1]], dtype=np.uint64)
        counts = popcount64(words)
        self.assertEqual(counts.dtype, np.uint64)
        self.assertListEqual(counts.tolist(), [[2, 3], [0, 64]])


class LaneMatchTest(unittest.TestCase):
    @given(st.lists(st.integers(0, 3), min_size=32, max_size=32), st.integers(0, 3))
    @settings(max_examples=200, deadline=None)
    def test_counts_matching_lanes(self, quads, symbol):
        word = pack_lanes(quads)
        matches = lane_matches(word, symbol)
        self.assertEqual(matches.bit_count(), quads.count(symbol))
        self.assertEqual(matches & ~0x5555555555555555, 0)
        expected = [lane for lane, q in enumerate(quads) if q == symbol]
        found = [lane for lane in range(32) if (matches >> (2 * lane)) & 1]
        self.assertListEqual(found, expected)

    def test_array_agrees_with_scalar(self):
        rng = np.random.default_rng(3)
        words = rng.integers(0, 1 << 63, 64, dtype=np.uint64) * np.uint64(2) + np.uint64(1)
        for symbol in range(4):
            vectorized = lane_matches_array(words, symbol).tolist()
            self.assertListEqual(vectorized, [lane_matches(w, symbol) for w in words.tolist()])


class SelectInWordTest(unittest.TestCase):
    @given(words64.filter(lambda w: w != 0), st.data())
    @settings(max_examples=300, deadline=None)
    def test_position_of_kth_one(self, word, data):
        ones = [bit for bit in range(64) if (word >> bit) & 1]
        rank = data.draw(st.integers(0, len(ones) - 1))
        self.assertEqual(select_in_word(word, rank), ones[rank])

    def test_high_byte(self):
        self.assertEqual(select_in_word(1 << 63, 0), 63)
        self.assertEqual(select_in_word((1 << 64) - 1, 40), 40)


class CounterGroupTest(unittest.TestCase):
    def test_fields_survive_packing(self):
        superblocks = np.array([0, 1, (1 << 44) - 1])
        blocks = np.array(
            [
                [0, 0, 0, 0, 0, 0, 0],
                [1, 2, 3, 4, 5, 6, 7],
                [4095, 255, 256, 4000, 17, 2048, 4095],
            ]
        )
        groups = pack_counter_groups(superblocks, blocks)
        self.assertEqual(groups.shape, (3, 2))
        decoded_sb, decoded_blocks = unpack_counter_groups(groups)
        self.assertListEqual(decoded_sb, superblocks.tolist())
        for row, decoded in zip(blocks.tolist(), decoded_blocks):
            self.assertListEqual(decoded, [0] + row)
        lo, hi = groups[2].tolist()
        self.assertEqual(group_count(lo, hi, 0), (1 << 44) - 1)
        self.assertEqual(group_count(lo, hi, 2), (1 << 44) - 1 + 255)
        self.assertEqual(group_count(lo, hi, 7), (1 << 44) - 1 + 4095)

    def test_block_two_straddles_words(self):
        lo, hi = pack_counter_groups([0], [[0, 0xABC, 0, 0, 0, 0, 0]])[0].tolist()
        self.assertEqual(lo >> 56, 0xBC)
        self.assertEqual(hi & 0xF, 0xA)

    def test_overflow(self):
        with self.assertRaises(ValueError):
            pack_counter_groups([1 << 44], [[0] * 7])
        with self.assertRaises(ValueError):
            pack_counter_groups([0], [[4096, 0, 0, 0, 0, 0, 0]])


if __name__ == "__main__":
    unittest.main()
