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

"""Approximate rank and prefetch planning for quad wavelet matrices.

An `ApproxRankIndex` marks, per symbol, the block of every ``ε/2``-th
occurrence in a bitmap of ``ceil(2n/ε)`` bits. Counting the marked blocks
before the query block gives ``r̃ <= r < r̃ + ε``.

Chained over the levels of a matrix, the errors add up. The
`DiscriminantTable` stores where each marked occurrence sits inside its
block, so the chain can re-anchor itself on an exactly known rank at
every level and keep the error below ε.

`plan_prefetch` turns predicted positions into the cache lines a rank
query will read.
"""

import collections
import logging

import numpy as np

from .bitvec import Rank9BitVector
from .quadvec import COUNTER_LINE, DATA_LINE, LINE_BITS, RsQuadVector

__all__ = [
    "ApproxRankIndex",
    "DiscriminantTable",
    "RankPredictor",
    "PlannedLine",
    "PrefetchPlan",
    "corrected_chain",
    "uncorrected_chain",
    "plan_prefetch",
    "rank_footprint",
]

PlannedLine = collections.namedtuple("PlannedLine", ["level", "kind", "line"])


def _check_epsilon(epsilon):
    if epsilon < 2 or epsilon % 2:
        raise ValueError("Epsilon must be an even number >= 2, got {}.".format(epsilon))


class ApproxRankIndex(object):
    """Rank with additive error below ``epsilon`` over one quad vector.

    Parameters
    ----------
    epsilon : `int`
        Error budget in quads; even and at least 2.
    length : `int`
        Length of the indexed quad vector.
    bitmaps : `list` of `Rank9BitVector`
        One bitmap per quad symbol.
    offsets : `list` of `numpy.ndarray`, optional
        Per symbol, the in-block offset of each marked occurrence, aligned
        with the set bits of its bitmap.
    """

    def __init__(self, epsilon, length, bitmaps, offsets=None):
        _check_epsilon(epsilon)
        self.epsilon = epsilon
        self.step = epsilon // 2
        self.length = length
        self.bitmaps = bitmaps
        self.offsets = offsets

    @classmethod
    def build(cls, quads, epsilon, with_offsets=False):
        """Build the bitmaps.

        Parameters
        ----------
        quads : `RsQuadVector` or sequence of `int`
            The indexed vector.
        epsilon : `int`
            Error budget, even and at least 2.
        with_offsets : `bool`, optional
            Also keep the in-block offsets needed by `DiscriminantTable`.

        Raises
        ------
        ValueError
            ``epsilon`` is odd or below 2.
        """
        _check_epsilon(epsilon)
        if isinstance(quads, RsQuadVector):
            quads = quads.to_numpy()
        quads = np.asarray(quads).reshape(-1)
        step = epsilon // 2
        nbits = -(-quads.size // step)
        offset_type = np.min_scalar_type(max(step - 1, 0))
        bitmaps = []
        offsets = [] if with_offsets else None
        for symbol in range(4):
            marked = np.flatnonzero(quads == symbol)[step - 1 :: step]
            bits = np.zeros(nbits, dtype=bool)
            bits[marked // step] = True
            bitmaps.append(Rank9BitVector.build(bits))
            if with_offsets:
                offsets.append((marked % step).astype(offset_type))
        return cls(epsilon, quads.size, bitmaps, offsets)

    def __repr__(self):
        return "ApproxRankIndex(epsilon={}, length={})".format(self.epsilon, self.length)

    def rank_approx(self, symbol, i):
        """Approximate occurrences of ``symbol`` before ``i``.

        The result is a multiple of ``epsilon / 2`` with
        ``result <= rank(symbol, i) < result + epsilon``.

        Raises
        ------
        IndexError
            ``i`` is outside ``0..length``.
        """
        if not 0 <= i <= self.length:
            raise IndexError(
                "Rank position {} out of range [0, {}].".format(i, self.length)
            )
        return self.bitmaps[symbol].rank1(i // self.step) * self.step

    def space_bits(self):
        """Bits of bitmaps, their directories and stored offsets."""
        bits = sum(bitmap.space_report().total_bits for bitmap in self.bitmaps)
        if self.offsets is not None:
            bits += sum(offset.nbytes * 8 for offset in self.offsets)
        return bits


class DiscriminantTable(object):
    """Exactly ranked anchor positions for every level of a matrix.

    The anchors of level ``k`` and quad ``q`` are the positions of the
    ``m * epsilon / 2``-th occurrences of ``q``; each is recovered from
    the marked block in the level's `ApproxRankIndex` plus the stored
    offset.

    Parameters
    ----------
    epsilon : `int`
        Error budget shared by every level.
    levels : `list` of `ApproxRankIndex`
        Indexes built with offsets, one per quad level.
    """

    def __init__(self, epsilon, levels):
        _check_epsilon(epsilon)
        for index in levels:
            if index.offsets is None or index.epsilon != epsilon:
                raise ValueError("Every level needs offsets built with the same epsilon.")
        self.epsilon = epsilon
        self.step = epsilon // 2
        self.levels = levels

    @classmethod
    def build(cls, matrix, epsilon):
        """Build the anchors for every quad level of ``matrix``."""
        return cls(
            epsilon,
            [
                ApproxRankIndex.build(plane, epsilon, with_offsets=True)
                for plane in matrix.planes
            ],
        )

    def successor(self, level, symbol, position):
        """First anchor of ``symbol`` at or after ``position``.

        Returns
        -------
        anchor : `tuple` of `int` or `None`
            ``(d, rank)`` with ``rank`` the exact number of occurrences of
            ``symbol`` before ``d``, or `None` past the last anchor.
        """
        index = self.levels[level]
        bitmap = index.bitmaps[symbol]
        offsets = index.offsets[symbol]
        marked_before = bitmap.rank1(min(position // self.step, len(bitmap)))
        for m in (marked_before, marked_before + 1):
            if m >= bitmap.ones:
                return None
            d = (bitmap.select1(m + 1) - 1) * self.step + int(offsets[m])
            if d >= position:
                return d, (m + 1) * self.step - 1
        return None

    def space_bits(self):
        """Bits used by every level."""
        return sum(index.space_bits() for index in self.levels)


def _first_level(matrix, index, symbol, start):
    q = matrix.digit(symbol, 0)
    return matrix.offsets[0][q] + index.rank_approx(q, start)


def uncorrected_chain(matrix, levels, symbol, start):
    """Chain approximate ranks through the levels without correction.

    Each level feeds the previous estimate straight into the next
    `ApproxRankIndex`, so the error grows with the level.

    Parameters
    ----------
    matrix : `QuadWaveletMatrix`
        The matrix the indexes were built on.
    levels : `list` of `ApproxRankIndex`
        One index per quad level.
    symbol : `int`
        Queried symbol.
    start : `int`
        Position on the first level.

    Returns
    -------
    `list` of `int`
        The estimate after each quad level.
    """
    if not matrix.planes:
        return []
    estimates = [_first_level(matrix, levels[0], symbol, start)]
    for k in range(1, len(matrix.planes)):
        q = matrix.digit(symbol, k)
        estimates.append(matrix.offsets[k][q] + levels[k].rank_approx(q, estimates[-1]))
    return estimates


def corrected_chain(matrix, table, symbol, start):
    """Chain approximate ranks with the discriminant correction.

    On every level below the first, the estimate is re-anchored on the
    first discriminant ``d`` at or after the previous estimate, whose rank
    is known exactly, and moved back by ``min(d - previous, epsilon - 1)``.
    Every returned estimate ``e`` satisfies ``e <= exact < e + epsilon``.
    Past the last discriminant the chain uses the level total and the
    full ``epsilon - 1`` correction.

    Parameters
    ----------
    matrix : `QuadWaveletMatrix`
        The matrix the table was built on.
    table : `DiscriminantTable`
        Anchors for every quad level.
    symbol : `int`
        Queried symbol.
    start : `int`
        Position on the first level.

    Returns
    -------
    `list` of `int`
        The estimate after each quad level.
    """
    if not matrix.planes:
        return []
    limit = table.epsilon - 1
    estimates = [_first_level(matrix, table.levels[0], symbol, start)]
    for k in range(1, len(matrix.planes)):
        q = matrix.digit(symbol, k)
        previous = estimates[-1]
        anchor = table.successor(k, q, previous)
        if anchor is None:
            rank, delta = matrix.planes[k].totals[q], limit
        else:
            d, rank = anchor
            delta = min(d - previous, limit)
        estimates.append(matrix.offsets[k][q] + max(rank - delta, 0))
    return estimates


class PrefetchPlan(object):
    """Cache lines predicted for one rank query.

    Entries are `PlannedLine` tuples in issue order: the predicted data
    line of every level, then the predicted counter line of every level,
    then the lines that widen the windows. The two chains (interval start
    and query position) share one deduplicated list.
    """

    def __init__(self, entries, requested):
        self.entries = list(entries)
        self.requested = requested

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __contains__(self, entry):
        return entry in self.entries

    @property
    def truncated(self):
        """bool: Whether the cap dropped some predicted lines."""
        return self.requested > len(self.entries)

    def lines(self, level, kind):
        """Planned line indexes of one level and kind."""
        return [e.line for e in self.entries if e.level == level and e.kind == kind]


class RankPredictor(object):
    """Predictors attached to a `QuadWaveletMatrix` for prefetching.

    The coarse level is one `ApproxRankIndex` per quad level; it predicts
    the superblocks whose counter lines a rank query reads. The data
    lines are refined through the superblock and block counters
    themselves. An optional `DiscriminantTable` enables the corrected
    planning mode.

    Parameters
    ----------
    coarse : `list` of `ApproxRankIndex`
        One coarse index per quad level.
    discriminants : `DiscriminantTable`, optional
        Anchors for corrected planning.
    line_bits : `int`, optional
        Cache line size in bits.
    max_lines : `int`, optional
        Cap on the lines planned per query.
    """

    def __init__(self, coarse, discriminants=None, line_bits=LINE_BITS, max_lines=10):
        self.coarse = coarse
        self.discriminants = discriminants
        self.line_bits = line_bits
        self.max_lines = max_lines

    @classmethod
    def build(
        cls,
        matrix,
        coarse_epsilon=4096,
        fine_epsilon=None,
        line_bits=LINE_BITS,
        max_lines=10,
        log_level=logging.DEBUG,
    ):
        """Build the predictor for every quad level of ``matrix``.

        Parameters
        ----------
        matrix : `QuadWaveletMatrix`
            The matrix to predict on.
        coarse_epsilon : `int`, optional
            Error budget of the coarse indexes; 4096 samples every 2048
            quads.
        fine_epsilon : `int`, optional
            When given, also build a `DiscriminantTable` with this budget.
        line_bits : `int`, optional
            Cache line size in bits.
        max_lines : `int`, optional
            Cap on the lines planned per query.
        log_level : `int`, optional
            Level used for the build log line.
        """
        coarse = [ApproxRankIndex.build(plane, coarse_epsilon) for plane in matrix.planes]
        discriminants = None
        if fine_epsilon is not None:
            discriminants = DiscriminantTable.build(matrix, fine_epsilon)
        predictor = cls(coarse, discriminants, line_bits, max_lines)
        logging.getLogger("RankPredictor").log(
            log_level,
            "build: levels=%d coarse_epsilon=%d fine_epsilon=%s bits=%d",
            len(coarse),
            coarse_epsilon,
            fine_epsilon,
            predictor.space_bits(),
        )
        return predictor

    def __repr__(self):
        return "RankPredictor(levels={}, coarse_epsilon={}, corrected={})".format(
            len(self.coarse),
            self.coarse_epsilon,
            self.discriminants is not None,
        )

    @property
    def coarse_epsilon(self):
        """int: Error budget of the coarse indexes."""
        return self.coarse[0].epsilon if self.coarse else 0

    def space_bits(self):
        """Total bits of the coarse indexes and discriminant tables."""
        bits = sum(index.space_bits() for index in self.coarse)
        if self.discriminants is not None:
            bits += self.discriminants.space_bits()
        return bits


def _line_window(first, extra, last):
    """Lines ``first`` to ``first + extra``, stopping at line ``last``."""
    return range(first, min(first + extra, last) + 1)


def _practical_windows(matrix, predictor, symbol, start):
    """Counter and data line windows of one chain, per quad level.

    Counter lines follow the coarse prediction and data lines the
    prediction refined through the block counters. Neither prediction
    exceeds the exact position, so level ``k`` (0 for the first level)
    widens both windows upwards by ``k`` lines.
    """
    line_quads = predictor.line_bits // 2
    coarse = fine = start
    windows = []
    for k, plane in enumerate(matrix.planes):
        last = len(plane) - 1
        counters = data = ()
        if coarse <= last:
            counters = _line_window(plane.counter_line(coarse), k, plane.counter_line(last))
        if fine <= last:
            data = _line_window(fine // line_quads, k, last // line_quads)
        windows.append((counters, data))
        q = matrix.digit(symbol, k)
        offset = matrix.offsets[k][q]
        coarse = offset + predictor.coarse[k].rank_approx(q, coarse)
        fine = offset + plane.block_rank(q, fine)
    return windows


def _corrected_windows(matrix, predictor, symbol, start):
    """Windows spanning ``epsilon`` positions from each corrected estimate."""
    line_quads = predictor.line_bits // 2
    table = predictor.discriminants
    positions = [start] + corrected_chain(matrix, table, symbol, start)[:-1]
    windows = []
    for k, (plane, position) in enumerate(zip(matrix.planes, positions)):
        last = min(position + (table.epsilon - 1 if k else 0), len(plane) - 1)
        if position > last:
            windows.append(((), ()))
            continue
        windows.append(
            (
                range(plane.counter_line(position), plane.counter_line(last) + 1),
                range(position // line_quads, last // line_quads + 1),
            )
        )
    return windows


def plan_prefetch(matrix, symbol, i, cap=-1, corrected=False):
    """Plan the cache lines a rank query of ``symbol`` at ``i`` reads.

    For both the interval-start chain and the query chain, every quad
    level gets a window of counter lines from the coarse prediction and a
    window of data lines from the counter-refined prediction. A window is
    the predicted line plus one extra line per level already chained, so
    the first level is exact. In corrected mode both windows come from
    the discriminant chain and span ``epsilon`` positions.

    Lines are issued in three rounds, level by level within each: the
    predicted data lines, the predicted counter lines, then the widening
    lines nearest first. The cap cuts the last rounds, so with a cap of
    at least twice the level count every level keeps its predicted data
    lines.

    Parameters
    ----------
    matrix : `QuadWaveletMatrix`
        Matrix with an attached `RankPredictor`.
    symbol : `int`
        Queried symbol.
    i : `int`
        Queried position.
    cap : `int` or `None`, optional
        Maximum number of lines. The default uses the predictor's
        ``max_lines``; `None` disables the cap.
    corrected : `bool`, optional
        Plan from the discriminant chain instead.

    Returns
    -------
    `PrefetchPlan`
        Possibly empty when no predictor is attached.
    """
    predictor = matrix.predictor
    if predictor is None or not matrix.planes:
        return PrefetchPlan([], 0)
    if cap == -1:
        cap = predictor.max_lines
    if corrected:
        if predictor.discriminants is None:
            raise ValueError("Corrected planning needs a discriminant table.")
        windows = _corrected_windows
    else:
        windows = _practical_windows

    priority = {}
    for chain, start in enumerate((0, i)):
        for k, (counters, data) in enumerate(windows(matrix, predictor, symbol, start)):
            for order, kind, lines in ((0, DATA_LINE, data), (1, COUNTER_LINE, counters)):
                for extra, line in enumerate(lines):
                    if extra == 0:
                        key = (0, order, k, chain)
                    else:
                        key = (extra, k, order, chain)
                    entry = PlannedLine(k, kind, line)
                    if entry not in priority or key < priority[entry]:
                        priority[entry] = key

    entries = sorted(priority, key=priority.get)
    requested = len(entries)
    if cap is not None:
        entries = entries[:cap]
    return PrefetchPlan(entries, requested)


def rank_footprint(matrix, symbol, i, line_bits=LINE_BITS):
    """Counter and data lines an exact rank query actually reads.

    Only the quad levels are covered, and positions at the end of a
    level read nothing.

    Returns
    -------
    `set` of `PlannedLine`
    """
    starts, ends = matrix.rank_chain(symbol, i)
    line_quads = line_bits // 2
    touched = set()
    for start, chain in ((0, starts), (i, ends)):
        positions = [start] + chain[: len(matrix.planes) - 1]
        for k, position in enumerate(positions):
            plane = matrix.planes[k]
            if position < len(plane):
                touched.add(PlannedLine(k, COUNTER_LINE, plane.counter_line(position)))
                touched.add(PlannedLine(k, DATA_LINE, position // line_quads))
    return touched
