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

"""Word-level primitives shared by the bit and quad vectors.

Words are 64-bit little-endian.
- A bit vector keeps bit ``i`` at bit ``i % 64`` of word ``i // 64``.
- A quad vector keeps quad ``i`` in lane ``i % 32`` of word ``i // 32``.
  Lane ``j`` occupies bits ``2j`` and ``2j + 1``.

Counter groups are 128 bits, stored as two words (lo, hi). Each group
holds a 44-bit superblock counter, then seven 12-bit block counters for
blocks 1..7. Block 0 of a superblock always counts zero and is not
stored.
"""

import numpy as np

__all__ = [
    "WORD_BITS",
    "WORD_MASK",
    "LOW_LANES",
    "QUAD_PATTERNS",
    "SUPERBLOCK_COUNTER_BITS",
    "BLOCK_COUNTER_BITS",
    "BLOCKS_PER_GROUP",
    "popcount64",
    "lane_matches",
    "lane_matches_array",
    "select_in_word",
    "pack_counter_groups",
    "unpack_counter_groups",
    "group_count",
]

WORD_BITS = 64
WORD_MASK = (1 << WORD_BITS) - 1
LOW_LANES = 0x5555555555555555
# Each symbol replicated into all 32 lanes.
QUAD_PATTERNS = (
    0x0000000000000000,
    0x5555555555555555,
    0xAAAAAAAAAAAAAAAA,
    0xFFFFFFFFFFFFFFFF,
)

SUPERBLOCK_COUNTER_BITS = 44
BLOCK_COUNTER_BITS = 12
BLOCKS_PER_GROUP = 8

_SUPERBLOCK_MASK = (1 << SUPERBLOCK_COUNTER_BITS) - 1
_BLOCK_MASK = (1 << BLOCK_COUNTER_BITS) - 1


def popcount64(words):
    """Count the set bits of every word of an array.

    Parameters
    ----------
    words : `numpy.ndarray`
        Array of ``uint64`` words.

    Returns
    -------
    `numpy.ndarray`
        ``uint64`` array of the same shape with the per-word counts.
    """
    return np.bitwise_count(np.asarray(words, dtype=np.uint64)).astype(np.uint64)


def lane_matches(word, symbol):
    """Mark the lanes of ``word`` equal to ``symbol``.

    Parameters
    ----------
    word : `int`
        A 64-bit word holding 32 quads.
    symbol : `int`
        The quad to match, in ``0..3``.

    Returns
    -------
    `int`
        A word with the low bit of every matching lane set and every
        other bit clear. Its population count is the number of matches.
    """
    x = word ^ QUAD_PATTERNS[symbol]
    return ~(x | (x >> 1)) & LOW_LANES


def lane_matches_array(words, symbol):
    """Vectorized `lane_matches` over an array of ``uint64`` words."""
    x = np.asarray(words, dtype=np.uint64) ^ np.uint64(QUAD_PATTERNS[symbol])
    return ~(x | (x >> np.uint64(1))) & np.uint64(LOW_LANES)


def select_in_word(word, rank):
    """Return the bit position of the ``rank``-th set bit of ``word``.

    ``rank`` is 0-based and must be smaller than the population count of
    the word. The scan skips whole bytes by population count and then
    clears low bits inside the byte that holds the answer.
    """
    shift = 0
    while True:
        byte = (word >> shift) & 0xFF
        ones = byte.bit_count()
        if rank < ones:
            break
        rank -= ones
        shift += 8
    for _ in range(rank):
        byte &= byte - 1
    return shift + (byte & -byte).bit_length() - 1


def pack_counter_groups(superblocks, blocks):
    """Pack superblock and block counters into 128-bit groups.

    Parameters
    ----------
    superblocks : `numpy.ndarray`
        Absolute counters, one per superblock, each below ``2**44``.
    blocks : `numpy.ndarray`
        Shape ``(m, 7)``: counters of blocks 1..7 relative to the start
        of their superblock, each below ``2**12``.

    Returns
    -------
    `numpy.ndarray`
        ``uint64`` array of shape ``(m, 2)`` with the (lo, hi) words.

    Raises
    ------
    ValueError
        A counter does not fit in its field.
    """
    superblocks = np.asarray(superblocks, dtype=np.uint64).reshape(-1)
    blocks = np.asarray(blocks, dtype=np.uint64).reshape(
        superblocks.size, BLOCKS_PER_GROUP - 1
    )
    if superblocks.size and int(superblocks.max()) > _SUPERBLOCK_MASK:
        raise ValueError("Superblock counter overflows 44 bits.")
    if blocks.size and int(blocks.max()) > _BLOCK_MASK:
        raise ValueError("Block counter overflows 12 bits.")

    lo = superblocks.copy()
    hi = np.zeros_like(superblocks)
    for k in range(1, BLOCKS_PER_GROUP):
        value = blocks[:, k - 1]
        offset = SUPERBLOCK_COUNTER_BITS + BLOCK_COUNTER_BITS * (k - 1)
        if offset + BLOCK_COUNTER_BITS <= 64:
            lo |= value << np.uint64(offset)
        elif offset >= 64:
            hi |= value << np.uint64(offset - 64)
        else:
            # Straddles the word boundary.
            lo |= value << np.uint64(offset)
            hi |= value >> np.uint64(64 - offset)
    return np.stack([lo, hi], axis=-1)


def unpack_counter_groups(groups):
    """Decode packed groups back into counters.

    Parameters
    ----------
    groups : `numpy.ndarray`
        ``uint64`` array of shape ``(m, 2)``.

    Returns
    -------
    superblocks : `list` of `int`
        Absolute superblock counters.
    blocks : `list` of `list` of `int`
        For each group the eight relative block counters, the first one
        being the implicit zero.
    """
    superblocks = []
    blocks = []
    for lo, hi in np.asarray(groups, dtype=np.uint64).reshape(-1, 2).tolist():
        group = lo | (hi << 64)
        superblocks.append(group & _SUPERBLOCK_MASK)
        blocks.append(
            [0]
            + [
                (group >> (32 + BLOCK_COUNTER_BITS * k)) & _BLOCK_MASK
                for k in range(1, BLOCKS_PER_GROUP)
            ]
        )
    return superblocks, blocks


def group_count(lo, hi, block):
    """Absolute count at the start of ``block`` of a decoded group.

    Parameters
    ----------
    lo, hi : `int`
        The two words of the group.
    block : `int`
        Block index inside the superblock, ``0..7``.
    """
    count = lo & _SUPERBLOCK_MASK
    if block:
        count += ((lo | (hi << 64)) >> (32 + BLOCK_COUNTER_BITS * block)) & _BLOCK_MASK
    return count
