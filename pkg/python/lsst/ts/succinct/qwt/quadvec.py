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

import enum

import numpy as np

from .broadword import (
    BLOCKS_PER_GROUP,
    SUPERBLOCK_COUNTER_BITS,
    group_count,
    lane_matches,
    lane_matches_array,
    pack_counter_groups,
    popcount64,
    select_in_word,
)
from .space import SpaceReport

__all__ = [
    "Geometry",
    "RsQuadVector",
    "COUNTER_LINE",
    "DATA_LINE",
    "LINE_BITS",
    "unpack_quads",
]

COUNTER_LINE = "counter-line"
DATA_LINE = "data-line"
# Cache line size in bits; data lines hold LINE_BITS // 2 quads.
LINE_BITS = 512

_SUPERBLOCK_MASK = (1 << SUPERBLOCK_COUNTER_BITS) - 1


class Geometry(enum.IntEnum):
    """Superblock/block layout of a quad vector.

    The value is the tag written to index files.
    """

    SB4096_B512 = 1
    SB2048_B256 = 2

    @property
    def superblock_size(self):
        """int: Quads covered by one superblock."""
        return 4096 if self is Geometry.SB4096_B512 else 2048

    @property
    def block_size(self):
        """int: Quads covered by one block."""
        return self.superblock_size // BLOCKS_PER_GROUP

    @classmethod
    def from_block_size(cls, block_size):
        """Return the geometry with the given block size (512 or 256).

        Raises
        ------
        ValueError
            No geometry has that block size.
        """
        for geometry in cls:
            if geometry.block_size == int(block_size):
                return geometry
        raise ValueError("Unsupported block size {}.".format(block_size))


def unpack_quads(words, length):
    """Expand packed words into one ``uint8`` per quad.

    Parameters
    ----------
    words : `numpy.ndarray`
        ``uint64`` words, 32 quads each.
    length : `int`
        Number of quads to return.
    """
    raw = np.asarray(words, dtype="<u8").view(np.uint8)
    quads = np.empty((raw.size, 4), dtype=np.uint8)
    for lane in range(4):
        quads[:, lane] = (raw >> (2 * lane)) & 3
    return quads.reshape(-1)[:length]


def _pack_quads(quads):
    lanes = quads.reshape(-1, 4)
    raw = lanes[:, 0] | (lanes[:, 1] << 2) | (lanes[:, 2] << 4) | (lanes[:, 3] << 6)
    return raw.astype(np.uint8).view("<u8").astype(np.uint64)


class RsQuadVector(object):
    """Vector over the alphabet {0, 1, 2, 3} with rank and select.

    For each superblock the four per-symbol counter groups (128 bits
    each) are stored next to each other, so they fill exactly one 64-byte
    cache line. Rank reads that line plus the data of at most one block.
    Select starts from the superblock of the closest sampled occurrence
    (one sample every 8192 occurrences of a symbol).

    Parameters
    ----------
    data : `numpy.ndarray`
        Packed ``uint64`` words, padded to whole superblocks.
    length : `int`
        Number of quads.
    geometry : `Geometry`
        Superblock/block layout.
    counters : `numpy.ndarray`
        ``uint64`` array of shape ``(superblocks, 4, 2)``.
    totals : `tuple` of `int`
        Occurrences of each symbol.
    select_samples : `numpy.ndarray`
        ``uint32`` array of shape ``(4, ceil(2 * length / 8192))``.
    """

    QUADS_PER_WORD = 32
    SELECT_SAMPLE_RATE = 8192

    def __init__(self, data, length, geometry, counters, totals, select_samples):
        self._data = data
        self._len = length
        self.geometry = Geometry(geometry)
        self._counters = counters
        self._totals = tuple(totals)
        self._select_samples = select_samples
        self._sb_size = self.geometry.superblock_size
        self._block_size = self.geometry.block_size

    @classmethod
    def build(cls, quads, geometry=Geometry.SB4096_B512):
        """Build the vector.

        Parameters
        ----------
        quads : sequence of `int`
            Symbols in ``0..3``; may be empty.
        geometry : `Geometry`, optional
            Counter layout, ``SB4096_B512`` by default.

        Raises
        ------
        ValueError
            A symbol is outside ``0..3``.
        """
        geometry = Geometry(geometry)
        quads = np.asarray(quads).reshape(-1)
        if quads.size and (int(quads.min()) < 0 or int(quads.max()) > 3):
            raise ValueError("Quad vectors only hold symbols 0..3.")
        length = quads.size
        sb_size = geometry.superblock_size
        nsb = -(-length // sb_size)
        padded = np.zeros(nsb * sb_size, dtype=np.uint8)
        padded[:length] = quads

        words = _pack_quads(padded)
        block_words = words.reshape(-1, geometry.block_size // cls.QUADS_PER_WORD)
        counters = np.zeros((nsb, 4, 2), dtype=np.uint64)
        # One slot per symbol and 8192 data bits, enough for any symbol.
        capacity = -(-2 * length // cls.SELECT_SAMPLE_RATE)
        select_samples = np.zeros((4, capacity), dtype=np.uint32)
        totals = []
        for symbol in range(4):
            block_counts = (
                popcount64(lane_matches_array(block_words, symbol))
                .astype(np.int64)
                .sum(axis=1)
                .reshape(nsb, BLOCKS_PER_GROUP)
            )
            sb_counts = block_counts.sum(axis=1)
            within = np.cumsum(block_counts, axis=1) - block_counts
            counters[:, symbol, :] = pack_counter_groups(
                np.cumsum(sb_counts) - sb_counts, within[:, 1:]
            )
            total = int(np.count_nonzero(quads == symbol))
            totals.append(total)
            targets = np.arange(1, total + 1, cls.SELECT_SAMPLE_RATE)
            select_samples[symbol, : targets.size] = np.searchsorted(
                np.cumsum(sb_counts), targets, side="left"
            )
        return cls(words, length, geometry, counters, totals, select_samples)

    @classmethod
    def from_words(cls, words, length, geometry=Geometry.SB4096_B512):
        """Rebuild the vector from packed data words.

        Raises
        ------
        ValueError
            The words hold fewer than ``length`` quads.
        """
        words = np.asarray(words, dtype=np.uint64).reshape(-1)
        if length < 0 or words.size * cls.QUADS_PER_WORD < length:
            raise ValueError(
                "{} words cannot hold {} quads.".format(words.size, length)
            )
        return cls.build(unpack_quads(words, length), geometry)

    def __len__(self):
        return self._len

    def __repr__(self):
        return "RsQuadVector(len={}, geometry={})".format(self._len, self.geometry.name)

    @property
    def words(self):
        """`numpy.ndarray`: Packed data words, padded to whole superblocks."""
        return self._data

    @property
    def counters(self):
        """`numpy.ndarray`: Counter groups of shape (superblocks, 4, 2)."""
        return self._counters

    @property
    def select_samples(self):
        """`numpy.ndarray`: Superblock of every 8192-th occurrence."""
        return self._select_samples

    @property
    def totals(self):
        """tuple of int: Occurrences of each symbol."""
        return self._totals

    def to_numpy(self):
        """Return the quads as a ``uint8`` array."""
        return unpack_quads(self._data, self._len)

    def _check_symbol(self, symbol):
        if not 0 <= symbol < 4:
            raise IndexError("Quad symbol {} out of range [0, 4).".format(symbol))

    def access(self, i):
        """Return the quad at position ``i``.

        Raises
        ------
        IndexError
            ``i`` is not below the length.
        """
        if not 0 <= i < self._len:
            raise IndexError("Quad index {} out of range [0, {}).".format(i, self._len))
        return (int(self._data[i >> 5]) >> ((i & 31) << 1)) & 3

    def rank(self, symbol, i):
        """Occurrences of ``symbol`` strictly before position ``i``.

        Raises
        ------
        IndexError
            ``symbol`` is not a quad or ``i`` is outside ``0..len``.
        """
        self._check_symbol(symbol)
        if not 0 <= i <= self._len:
            raise IndexError("Rank position {} out of range [0, {}].".format(i, self._len))
        if i == self._len:
            return self._totals[symbol]
        sb, rem = divmod(i, self._sb_size)
        block, offset = divmod(rem, self._block_size)
        lo, hi = self._counters[sb, symbol].tolist()
        count = group_count(lo, hi, block)
        full, tail = divmod(offset, self.QUADS_PER_WORD)
        w = (i - offset) >> 5
        chunk = self._data[w : w + full + 1].tolist()
        for k in range(full):
            count += lane_matches(chunk[k], symbol).bit_count()
        if tail:
            count += (lane_matches(chunk[full], symbol) & ((1 << (tail << 1)) - 1)).bit_count()
        return count

    def block_rank(self, symbol, i):
        """Occurrences of ``symbol`` before the block holding position ``i``.

        Reads only the counter line; the result is at most
        ``block_size - 1`` below `rank`.
        """
        self._check_symbol(symbol)
        if not 0 <= i <= self._len:
            raise IndexError("Rank position {} out of range [0, {}].".format(i, self._len))
        sb, rem = divmod(i, self._sb_size)
        if sb == self._counters.shape[0]:
            return self._totals[symbol]
        lo, hi = self._counters[sb, symbol].tolist()
        return group_count(lo, hi, rem // self._block_size)

    def select(self, symbol, j):
        """Smallest ``p`` with ``rank(symbol, p) == j``.

        Raises
        ------
        IndexError
            ``symbol`` is not a quad.
        LookupError
            ``j`` is not in ``1..totals[symbol]``.
        """
        self._check_symbol(symbol)
        total = self._totals[symbol]
        if not 1 <= j <= total:
            raise LookupError(
                "No {}-th occurrence of quad {} among {}.".format(j, symbol, total)
            )
        sb = int(self._select_samples[symbol, (j - 1) // self.SELECT_SAMPLE_RATE])
        nsb = self._counters.shape[0]
        while sb + 1 < nsb and (int(self._counters[sb + 1, symbol, 0]) & _SUPERBLOCK_MASK) < j:
            sb += 1

        lo, hi = self._counters[sb, symbol].tolist()
        block = 0
        for k in range(1, BLOCKS_PER_GROUP):
            if group_count(lo, hi, k) >= j:
                break
            block = k
        remaining = j - group_count(lo, hi, block)

        w = (sb * self._sb_size + block * self._block_size) >> 5
        while True:
            matches = lane_matches(int(self._data[w]), symbol)
            found = matches.bit_count()
            if remaining <= found:
                bit = select_in_word(matches, remaining - 1)
                return (w << 5) + (bit >> 1) + 1
            remaining -= found
            w += 1

    def counter_line(self, i):
        """Index of the counter cache line read by a rank at ``i``."""
        return i // self._sb_size

    def data_line(self, i, line_bits=LINE_BITS):
        """Index of the data cache line holding quad ``i``."""
        return (i << 1) // line_bits

    def prefetch(self, symbol, i):
        """Touch the counter and data lines a rank at ``i`` will read.

        Semantically a no-op: nothing observable changes and positions at
        or past the end are ignored.
        """
        if 0 <= i < self._len:
            self._counters.item(i // self._sb_size, symbol & 3, 0)
            self._data.item(i >> 5)

    def prefetch_line(self, kind, line, line_bits=LINE_BITS):
        """Touch one planned cache line; lines past the end are ignored."""
        if kind == COUNTER_LINE:
            if 0 <= line < self._counters.shape[0]:
                self._counters.item(line, 0, 0)
        else:
            w = (line * line_bits) >> 6
            if 0 <= w < self._data.size:
                self._data.item(w)

    def space_report(self):
        """Return the `SpaceReport` of the vector.

        Select samples are accounted at their reserved capacity,
        ``4 * 32 * ceil(2 * len / 8192)`` bits.
        """
        return SpaceReport(
            data_bits=2 * self._len,
            counter_bits=self._counters.size * 64,
            select_bits=self._select_samples.size * 32,
        )
