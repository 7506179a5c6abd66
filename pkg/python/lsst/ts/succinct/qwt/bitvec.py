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

import numpy as np

from .broadword import (
    BLOCKS_PER_GROUP,
    SUPERBLOCK_COUNTER_BITS,
    WORD_MASK,
    group_count,
    pack_counter_groups,
    popcount64,
    select_in_word,
)
from .space import SpaceReport

__all__ = ["RsBitVector", "Rank9BitVector", "pack_bits"]

_SUPERBLOCK_MASK = (1 << SUPERBLOCK_COUNTER_BITS) - 1


def pack_bits(bits, words_multiple=1):
    """Pack a boolean sequence into little-endian ``uint64`` words.

    Parameters
    ----------
    bits : sequence of `bool`
        The bits, first bit at index 0.
    words_multiple : `int`, optional
        Pad the word count up to a multiple of this value.

    Returns
    -------
    words : `numpy.ndarray`
        The ``uint64`` words; padding bits are zero.
    length : `int`
        Number of valid bits.
    """
    bits = np.asarray(bits, dtype=bool).reshape(-1)
    length = bits.size
    nwords = -(-length // 64)
    nwords = -(-nwords // words_multiple) * words_multiple
    padded = np.zeros(nwords * 64, dtype=bool)
    padded[:length] = bits
    words = np.packbits(padded, bitorder="little").view("<u8").astype(np.uint64)
    return words, length


def _clear_tail(words, length):
    """Zero every bit at or beyond ``length``."""
    full, rem = divmod(length, 64)
    if rem:
        words[full] &= np.uint64((1 << rem) - 1)
        full += 1
    words[full:] = 0


class RsBitVector(object):
    """Bit vector with constant-time rank and sampled select.

    The rank directory has the same shape as the quad vector one: one
    128-bit group per 4096-bit superblock, holding the absolute count of
    ones before the superblock and the counts before blocks 1..7 of 512
    bits each. Select keeps the superblock index of every 8192-th one
    and every 8192-th zero, then scans superblock and block counters and
    finally words.

    Build instances with `build` or `from_words`.
    """

    SUPERBLOCK_BITS = 4096
    BLOCK_BITS = 512
    SELECT_SAMPLE_RATE = 8192

    def __init__(self, words, length, directory, ones, select_samples_1, select_samples_0):
        self._words = words
        self._len = length
        self._directory = directory
        self._ones = ones
        self._select_samples_1 = select_samples_1
        self._select_samples_0 = select_samples_0

    @classmethod
    def build(cls, bits):
        """Build the vector over a sequence of booleans.

        Parameters
        ----------
        bits : sequence of `bool`
            The bits; an empty sequence is allowed.

        Returns
        -------
        `RsBitVector`
        """
        words, length = pack_bits(bits, cls.SUPERBLOCK_BITS // 64)
        return cls.from_words(words, length)

    @classmethod
    def from_words(cls, words, length):
        """Build the vector over already packed words.

        Parameters
        ----------
        words : `numpy.ndarray`
            ``uint64`` words, bit ``i`` at bit ``i % 64`` of word ``i // 64``.
        length : `int`
            Number of valid bits.

        Raises
        ------
        ValueError
            The words hold fewer than ``length`` bits.
        """
        words = np.asarray(words, dtype=np.uint64).reshape(-1)
        if length < 0 or words.size * 64 < length:
            raise ValueError(
                "{} words cannot hold {} bits.".format(words.size, length)
            )
        nsb = -(-length // cls.SUPERBLOCK_BITS)
        words_per_sb = cls.SUPERBLOCK_BITS // 64
        padded = np.zeros(nsb * words_per_sb, dtype=np.uint64)
        kept = min(words.size, padded.size)
        padded[:kept] = words[:kept]
        _clear_tail(padded, length)

        block_ones = (
            popcount64(padded)
            .astype(np.int64)
            .reshape(nsb, BLOCKS_PER_GROUP, cls.BLOCK_BITS // 64)
            .sum(axis=2)
        )
        sb_ones = block_ones.sum(axis=1)
        sb_before = np.cumsum(sb_ones) - sb_ones
        block_before = np.cumsum(block_ones, axis=1) - block_ones
        directory = pack_counter_groups(sb_before, block_before[:, 1:])

        ones = int(sb_ones.sum())
        zeros = length - ones
        rate = cls.SELECT_SAMPLE_RATE
        samples_1 = np.searchsorted(
            np.cumsum(sb_ones), np.arange(1, ones + 1, rate), side="left"
        ).astype(np.uint32)
        samples_0 = np.searchsorted(
            np.cumsum(cls.SUPERBLOCK_BITS - sb_ones),
            np.arange(1, zeros + 1, rate),
            side="left",
        ).astype(np.uint32)
        return cls(padded, length, directory, ones, samples_1, samples_0)

    def __len__(self):
        return self._len

    def __repr__(self):
        return "RsBitVector(len={}, ones={})".format(self._len, self._ones)

    @property
    def words(self):
        """`numpy.ndarray`: The packed words, padded to whole superblocks."""
        return self._words

    @property
    def ones(self):
        """int: Total number of set bits."""
        return self._ones

    @property
    def zeros(self):
        """int: Total number of clear bits."""
        return self._len - self._ones

    def to_numpy(self):
        """Return the bits as a boolean array of length ``len``."""
        bits = np.unpackbits(self._words.view(np.uint8), bitorder="little")
        return bits[: self._len].astype(bool)

    def access(self, i):
        """Return bit ``i``.

        Raises
        ------
        IndexError
            ``i`` is not below the length.
        """
        if not 0 <= i < self._len:
            raise IndexError("Bit index {} out of range [0, {}).".format(i, self._len))
        return (int(self._words[i >> 6]) >> (i & 63)) & 1

    def rank1(self, i):
        """Number of ones strictly before position ``i``.

        Raises
        ------
        IndexError
            ``i`` is negative or larger than the length.
        """
        if not 0 <= i <= self._len:
            raise IndexError("Rank position {} out of range [0, {}].".format(i, self._len))
        if i == self._len:
            return self._ones
        sb, rem = divmod(i, self.SUPERBLOCK_BITS)
        block, offset = divmod(rem, self.BLOCK_BITS)
        lo, hi = self._directory[sb].tolist()
        count = group_count(lo, hi, block)
        full, tail = divmod(offset, 64)
        w = (i - offset) >> 6
        chunk = self._words[w : w + full + 1].tolist()
        for k in range(full):
            count += chunk[k].bit_count()
        if tail:
            count += (chunk[full] & ((1 << tail) - 1)).bit_count()
        return count

    def rank0(self, i):
        """Number of zeros strictly before position ``i``."""
        return i - self.rank1(i)

    def select1(self, j):
        """Smallest ``p`` with ``rank1(p) == j``.

        Raises
        ------
        LookupError
            ``j`` is not in ``1..ones``.
        """
        if not 1 <= j <= self._ones:
            raise LookupError("No {}-th one among {} ones.".format(j, self._ones))
        return self._select(j, 1)

    def select0(self, j):
        """Smallest ``p`` with ``rank0(p) == j``.

        Raises
        ------
        LookupError
            ``j`` is not in ``1..zeros``.
        """
        if not 1 <= j <= self.zeros:
            raise LookupError("No {}-th zero among {} zeros.".format(j, self.zeros))
        return self._select(j, 0)

    def _before(self, sb, block, bit, lo, hi):
        count = group_count(lo, hi, block)
        if bit:
            return count
        return sb * self.SUPERBLOCK_BITS + block * self.BLOCK_BITS - count

    def _select(self, j, bit):
        samples = self._select_samples_1 if bit else self._select_samples_0
        sb = int(samples[(j - 1) // self.SELECT_SAMPLE_RATE])
        nsb = self._directory.shape[0]
        while sb + 1 < nsb:
            lo, hi = self._directory[sb + 1].tolist()
            if self._before(sb + 1, 0, bit, lo, hi) >= j:
                break
            sb += 1

        lo, hi = self._directory[sb].tolist()
        block = 0
        for k in range(1, BLOCKS_PER_GROUP):
            if self._before(sb, k, bit, lo, hi) >= j:
                break
            block = k
        remaining = j - self._before(sb, block, bit, lo, hi)

        w = (sb * self.SUPERBLOCK_BITS + block * self.BLOCK_BITS) >> 6
        while True:
            word = int(self._words[w])
            if not bit:
                word = ~word & WORD_MASK
            ones = word.bit_count()
            if remaining <= ones:
                return (w << 6) + select_in_word(word, remaining - 1) + 1
            remaining -= ones
            w += 1

    def space_report(self):
        """Return the `SpaceReport` of the vector."""
        return SpaceReport(
            data_bits=self._len,
            counter_bits=self._directory.size * 64,
            select_bits=(self._select_samples_1.size + self._select_samples_0.size) * 32,
        )


class Rank9BitVector(object):
    """Bit vector with a 25% rank directory.

    Each 512-bit block carries one 64-bit count of the ones before it and
    one word packing the seven 9-bit counts before words 1..7 of the
    block. Select binary-searches the block counts. Used for the sparse
    bitmaps of the rank predictors, where the directory has to stay
    proportional to the bitmap.
    """

    BLOCK_BITS = 512
    _RELATIVE_BITS = 9

    def __init__(self, words, length, directory, ones):
        self._words = words
        self._len = length
        self._directory = directory
        self._ones = ones

    @classmethod
    def build(cls, bits):
        """Build the vector over a sequence of booleans."""
        words, length = pack_bits(bits, cls.BLOCK_BITS // 64)
        return cls.from_words(words, length)

    @classmethod
    def from_words(cls, words, length):
        """Build the vector over packed words, as `RsBitVector.from_words`."""
        words = np.asarray(words, dtype=np.uint64).reshape(-1)
        if length < 0 or words.size * 64 < length:
            raise ValueError(
                "{} words cannot hold {} bits.".format(words.size, length)
            )
        nblocks = -(-length // cls.BLOCK_BITS)
        padded = np.zeros(nblocks * (cls.BLOCK_BITS // 64), dtype=np.uint64)
        kept = min(words.size, padded.size)
        padded[:kept] = words[:kept]
        _clear_tail(padded, length)

        word_ones = popcount64(padded).astype(np.int64).reshape(nblocks, -1)
        block_ones = word_ones.sum(axis=1)
        before = np.cumsum(block_ones) - block_ones
        relative = np.cumsum(word_ones, axis=1) - word_ones
        packed = np.zeros(nblocks, dtype=np.uint64)
        for k in range(1, word_ones.shape[1]):
            packed |= relative[:, k].astype(np.uint64) << np.uint64(
                cls._RELATIVE_BITS * (k - 1)
            )
        directory = np.stack([before.astype(np.uint64), packed], axis=-1)
        return cls(padded, length, directory, int(block_ones.sum()))

    def __len__(self):
        return self._len

    @property
    def words(self):
        """`numpy.ndarray`: The packed words, padded to whole blocks."""
        return self._words

    @property
    def ones(self):
        """int: Total number of set bits."""
        return self._ones

    def access(self, i):
        """Return bit ``i``; raises `IndexError` out of range."""
        if not 0 <= i < self._len:
            raise IndexError("Bit index {} out of range [0, {}).".format(i, self._len))
        return (int(self._words[i >> 6]) >> (i & 63)) & 1

    def _word_rank(self, word, lo, hi):
        if word == 0:
            return lo
        return lo + ((hi >> (self._RELATIVE_BITS * (word - 1))) & 0x1FF)

    def rank1(self, i):
        """Number of ones strictly before ``i``; raises `IndexError`."""
        if not 0 <= i <= self._len:
            raise IndexError("Rank position {} out of range [0, {}].".format(i, self._len))
        if i == self._len:
            return self._ones
        block, offset = divmod(i, self.BLOCK_BITS)
        word, tail = divmod(offset, 64)
        lo, hi = self._directory[block].tolist()
        count = self._word_rank(word, lo, hi)
        if tail:
            count += (int(self._words[i >> 6]) & ((1 << tail) - 1)).bit_count()
        return count

    def select1(self, j):
        """Smallest ``p`` with ``rank1(p) == j``; raises `LookupError`."""
        if not 1 <= j <= self._ones:
            raise LookupError("No {}-th one among {} ones.".format(j, self._ones))
        block = int(np.searchsorted(self._directory[:, 0], j, side="left")) - 1
        lo, hi = self._directory[block].tolist()
        word = 0
        for k in range(1, self.BLOCK_BITS // 64):
            if self._word_rank(k, lo, hi) >= j:
                break
            word = k
        remaining = j - self._word_rank(word, lo, hi)
        w = block * (self.BLOCK_BITS // 64) + word
        return (w << 6) + select_in_word(int(self._words[w]), remaining - 1) + 1

    def space_report(self):
        """Return the `SpaceReport`; the bitmap counts as data."""
        return SpaceReport(
            data_bits=self._words.size * 64,
            counter_bits=self._directory.size * 64,
        )
