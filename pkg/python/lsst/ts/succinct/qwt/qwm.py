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

import logging

import numpy as np

from .alphabet import DenseAlphabet
from .binwm import validate_text
from .bitvec import RsBitVector
from .predictor import plan_prefetch
from .quadvec import Geometry, RsQuadVector

__all__ = ["QuadWaveletMatrix", "LEVEL_ORDER", "MAX_SIGMA"]

MAX_SIGMA = 1 << 16
# Quads in the order their intervals appear on the next level (bit
# reversal of the 2-bit value). The tuple is its own inverse, so it also
# gives the rank of each quad in that order.
LEVEL_ORDER = (0, 2, 1, 3)
_ORDER_RANK = np.array(LEVEL_ORDER, dtype=np.int64)


class QuadWaveletMatrix(object):
    """4-ary wavelet matrix over dense codes.

    Level ``k`` stores the ``k``-th pair of code bits (MSB first) of every
    symbol in one `RsQuadVector`. The next level is the stable sort of the
    current one by that pair, with intervals in `LEVEL_ORDER`. When the
    code width is odd, the LSB of every symbol goes into a final
    `RsBitVector` that is walked like a binary wavelet matrix level.

    Parameters
    ----------
    planes : `list` of `RsQuadVector`
        Quad levels, top first.
    offsets : `list` of `tuple` of `int`
        Per level, ``offsets[k][q]`` is the number of level-``k`` symbols
        whose quad precedes ``q`` in `LEVEL_ORDER`.
    tail : `RsBitVector` or `None`
        LSB plane for odd code widths.
    sigma : `int`
        Alphabet size.
    alphabet : `DenseAlphabet`, optional
        Decode table back to the original symbols.
    log_level : `int`, optional
        Level used for log messages. Default is logging.DEBUG.
    """

    def __init__(self, planes, offsets, tail, sigma, alphabet=None, log_level=logging.DEBUG):
        self.log = logging.getLogger("QuadWaveletMatrix")
        self.log_level = log_level
        self.planes = planes
        self.offsets = [tuple(int(c) for c in level) for level in offsets]
        self.tail = tail
        self.sigma = sigma
        self.bit_width = (sigma - 1).bit_length()
        self.alphabet = alphabet
        self.predictor = None
        if planes:
            self.n = len(planes[0])
        else:
            self.n = len(tail) if tail is not None else 0
        self._tail_zeros = tail.zeros if tail is not None else 0

    @classmethod
    def build(
        cls,
        text,
        sigma,
        geometry=Geometry.SB4096_B512,
        alphabet=None,
        log_level=logging.DEBUG,
    ):
        """Build the matrix over a dense-coded text.

        Parameters
        ----------
        text : sequence of `int`
            Symbols below ``sigma``.
        sigma : `int`
            Alphabet size, ``2 <= sigma <= 2**16``.
        geometry : `Geometry`, optional
            Counter layout of the quad levels.
        alphabet : `DenseAlphabet`, optional
            Decode table to keep with the matrix.
        log_level : `int`, optional
            Level used for log messages.

        Raises
        ------
        ValueError
            ``sigma`` is out of range or the text holds a symbol
            ``>= sigma``.
        """
        codes = validate_text(text, sigma, MAX_SIGMA)
        width = (sigma - 1).bit_length()
        planes = []
        offsets = []
        current = codes
        for k in range(width // 2):
            digits = (current >> (width - 2 * (k + 1))) & 3
            plane = RsQuadVector.build(digits.astype(np.uint8), geometry)
            start = 0
            level_offsets = [0, 0, 0, 0]
            for q in LEVEL_ORDER:
                level_offsets[q] = start
                start += plane.totals[q]
            planes.append(plane)
            offsets.append(level_offsets)
            current = current[np.argsort(_ORDER_RANK[digits], kind="stable")]
        tail = None
        if width % 2:
            tail = RsBitVector.build((current & 1).astype(bool))

        matrix = cls(planes, offsets, tail, sigma, alphabet=alphabet, log_level=log_level)
        matrix.log.log(
            log_level,
            "build: n=%d sigma=%d bit_width=%d quad_levels=%d tail=%s geometry=%s",
            codes.size,
            sigma,
            width,
            len(planes),
            tail is not None,
            Geometry(geometry).name,
        )
        return matrix

    @classmethod
    def from_data(cls, data, geometry=Geometry.SB4096_B512, log_level=logging.DEBUG):
        """Remap ``data`` to a dense alphabet and build over the codes.

        Parameters
        ----------
        data : `bytes` or sequence of `int`
            The original text.

        Raises
        ------
        ValueError
            ``data`` is empty.
        """
        alphabet = DenseAlphabet.from_data(data)
        if alphabet.sigma == 0:
            raise ValueError("Cannot index an empty text.")
        return cls.build(
            alphabet.encode(data),
            max(2, alphabet.sigma),
            geometry=geometry,
            alphabet=alphabet,
            log_level=log_level,
        )

    def __len__(self):
        return self.n

    def __repr__(self):
        return "QuadWaveletMatrix(n={}, sigma={}, levels={})".format(
            self.n, self.sigma, self.levels
        )

    @property
    def levels(self):
        """int: Quad levels plus the tail level when present."""
        return len(self.planes) + (1 if self.tail is not None else 0)

    @property
    def geometry(self):
        """`Geometry`: Counter layout of the quad levels."""
        return self.planes[0].geometry if self.planes else Geometry.SB4096_B512

    def digit(self, symbol, level):
        """Quad of ``symbol`` consumed on quad level ``level``."""
        return (symbol >> (self.bit_width - 2 * (level + 1))) & 3

    def cumulative_offsets(self, level):
        """Inclusive interval ends of ``level`` in `LEVEL_ORDER`."""
        plane = self.planes[level]
        return tuple(self.offsets[level][q] + plane.totals[q] for q in LEVEL_ORDER)

    def attach_predictor(self, predictor):
        """Attach a `RankPredictor` used by `rank_prefetch`."""
        self.predictor = predictor
        self.log.log(self.log_level, "attach_predictor: %r", predictor)

    def _check_symbol(self, symbol):
        if not 0 <= symbol < self.sigma:
            raise IndexError("Symbol {} out of range [0, {}).".format(symbol, self.sigma))

    def _check_rank_position(self, i):
        if not 0 <= i <= self.n:
            raise IndexError("Rank position {} out of range [0, {}].".format(i, self.n))

    def access(self, i, trace=None):
        """Return the dense code at position ``i``.

        Parameters
        ----------
        i : `int`
            Position below ``n``.
        trace : `list`, optional
            Receives one entry per level visited.

        Raises
        ------
        IndexError
            ``i`` is out of range.
        """
        if not 0 <= i < self.n:
            raise IndexError("Index {} out of range [0, {}).".format(i, self.n))
        code = 0
        for k, plane in enumerate(self.planes):
            if trace is not None:
                trace.append(k)
            q = plane.access(i)
            code = (code << 2) | q
            i = self.offsets[k][q] + plane.rank(q, i)
        if self.tail is not None:
            if trace is not None:
                trace.append(len(self.planes))
            code = (code << 1) | self.tail.access(i)
        return code

    def to_numpy(self):
        """Decode the whole text back to dense codes."""
        codes = np.zeros(self.n, dtype=np.int64)
        where = np.arange(self.n, dtype=np.int64)
        for k, plane in enumerate(self.planes):
            quads = plane.to_numpy().astype(np.int64)
            moved = np.empty(self.n, dtype=np.int64)
            for q in range(4):
                mask = quads == q
                moved[mask] = self.offsets[k][q] + np.arange(np.count_nonzero(mask))
            codes = (codes << 2) | quads[where]
            where = moved[where]
        if self.tail is not None:
            codes = (codes << 1) | self.tail.to_numpy().astype(np.int64)[where]
        return codes

    def rank(self, symbol, i, trace=None):
        """Occurrences of ``symbol`` strictly before position ``i``.

        Two quad ranks per level, one for the start of the symbol's
        interval and one for ``i``.

        Raises
        ------
        IndexError
            ``symbol`` or ``i`` is out of range.
        """
        self._check_symbol(symbol)
        self._check_rank_position(i)
        start = 0
        for k, plane in enumerate(self.planes):
            if trace is not None:
                trace.append(k)
            q = (symbol >> (self.bit_width - 2 * (k + 1))) & 3
            offset = self.offsets[k][q]
            start = offset + plane.rank(q, start)
            i = offset + plane.rank(q, i)
        if self.tail is not None:
            if trace is not None:
                trace.append(len(self.planes))
            if symbol & 1:
                start = self._tail_zeros + self.tail.rank1(start)
                i = self._tail_zeros + self.tail.rank1(i)
            else:
                start = self.tail.rank0(start)
                i = self.tail.rank0(i)
        return i - start

    def rank_chain(self, symbol, i):
        """Exact positions produced on every level by a rank query.

        Returns
        -------
        starts : `list` of `int`
            The interval start after each level (the b chain).
        ends : `list` of `int`
            The mapped position of ``i`` after each level (the r chain).
        """
        self._check_symbol(symbol)
        self._check_rank_position(i)
        starts = []
        ends = []
        start = 0
        for k, plane in enumerate(self.planes):
            q = self.digit(symbol, k)
            start = self.offsets[k][q] + plane.rank(q, start)
            i = self.offsets[k][q] + plane.rank(q, i)
            starts.append(start)
            ends.append(i)
        if self.tail is not None:
            if symbol & 1:
                start = self._tail_zeros + self.tail.rank1(start)
                i = self._tail_zeros + self.tail.rank1(i)
            else:
                start = self.tail.rank0(start)
                i = self.tail.rank0(i)
            starts.append(start)
            ends.append(i)
        return starts, ends

    def rank_prefetch(self, symbol, i, trace=None):
        """`rank` preceded by prefetching the predicted cache lines.

        Returns exactly what `rank` returns. Without an attached
        predictor this is plain `rank`.
        """
        if self.predictor is None:
            return self.rank(symbol, i, trace)
        self._check_symbol(symbol)
        self._check_rank_position(i)
        line_bits = self.predictor.line_bits
        for entry in plan_prefetch(self, symbol, i):
            self.planes[entry.level].prefetch_line(entry.kind, entry.line, line_bits)
        return self.rank(symbol, i, trace)

    def select(self, symbol, j, trace=None):
        """Smallest ``p`` with ``rank(symbol, p) == j``.

        Raises
        ------
        IndexError
            ``symbol`` is out of range.
        LookupError
            ``j`` is not in ``1..rank(symbol, n)``.
        """
        self._check_symbol(symbol)
        starts, ends = self.rank_chain(symbol, self.n)
        count = ends[-1] - starts[-1] if starts else 0
        if not 1 <= j <= count:
            raise LookupError(
                "No {}-th occurrence of {} among {}.".format(j, symbol, count)
            )
        p = starts[-1] + j - 1
        if self.tail is not None:
            if trace is not None:
                trace.append(len(self.planes))
            if symbol & 1:
                p = self.tail.select1(p - self._tail_zeros + 1) - 1
            else:
                p = self.tail.select0(p + 1) - 1
        for k in reversed(range(len(self.planes))):
            if trace is not None:
                trace.append(k)
            q = self.digit(symbol, k)
            p = self.planes[k].select(q, p - self.offsets[k][q] + 1) - 1
        return p + 1

    def space_report(self):
        """Sum of the level reports plus the attached predictor."""
        vectors = list(self.planes)
        if self.tail is not None:
            vectors.append(self.tail)
        report = vectors[0].space_report()
        for vector in vectors[1:]:
            report = report + vector.space_report()
        if self.predictor is not None:
            report.predictor_bits = self.predictor.space_bits()
        return report
