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

from .bitvec import RsBitVector

__all__ = ["BinaryWaveletMatrix", "BinaryWaveletTree", "validate_text"]


def validate_text(text, sigma, max_sigma=None):
    """Check a dense-coded text and return it as an ``int64`` array.

    Raises
    ------
    ValueError
        ``sigma`` is below 2 or above ``max_sigma``, or a symbol is
        outside ``0..sigma-1``.
    """
    if sigma < 2:
        raise ValueError("Alphabet size must be at least 2, got {}.".format(sigma))
    if max_sigma is not None and sigma > max_sigma:
        raise ValueError(
            "Alphabet size {} exceeds the supported {}.".format(sigma, max_sigma)
        )
    codes = np.asarray(text).reshape(-1).astype(np.int64)
    if codes.size and (int(codes.min()) < 0 or int(codes.max()) >= sigma):
        raise ValueError("Text symbols must lie in [0, {}).".format(sigma))
    return codes


class BinaryWaveletMatrix(object):
    """Binary wavelet matrix, one bit vector per level.

    Level ``k`` stores bit ``k`` (from the MSB) of every symbol, in the
    order obtained by stably sorting the previous level by its bit.
    Positions are local to each level; a one-bit descends to
    ``zeros[k] + rank1`` and a zero-bit to ``rank0``.

    Parameters
    ----------
    planes : `list` of `RsBitVector`
        The levels, MSB first.
    sigma : `int`
        Alphabet size.
    """

    def __init__(self, planes, sigma):
        self.planes = planes
        self.sigma = sigma
        self.bit_width = len(planes)
        self.n = len(planes[0]) if planes else 0
        self.zeros = [plane.zeros for plane in planes]

    @classmethod
    def build(cls, text, sigma, log_level=logging.DEBUG):
        """Build the matrix.

        Parameters
        ----------
        text : sequence of `int`
            Dense codes below ``sigma``.
        sigma : `int`
            Alphabet size, at least 2.
        log_level : `int`, optional
            Level for the build log line.
        """
        codes = validate_text(text, sigma)
        width = (sigma - 1).bit_length()
        planes = []
        current = codes
        for level in range(width):
            bits = ((current >> (width - 1 - level)) & 1).astype(bool)
            planes.append(RsBitVector.build(bits))
            current = np.concatenate([current[~bits], current[bits]])
        logging.getLogger("BinaryWaveletMatrix").log(
            log_level, "build: n=%d sigma=%d levels=%d", codes.size, sigma, width
        )
        return cls(planes, sigma)

    @property
    def ones_before(self):
        """list of int: Ones stored on all levels above each level."""
        totals = [len(plane) - zeros for plane, zeros in zip(self.planes, self.zeros)]
        return [sum(totals[:level]) for level in range(len(totals))]

    def __len__(self):
        return self.n

    def _check_symbol(self, symbol):
        if not 0 <= symbol < self.sigma:
            raise IndexError("Symbol {} out of range [0, {}).".format(symbol, self.sigma))

    def access(self, i, trace=None):
        """Return the symbol at position ``i``.

        Raises
        ------
        IndexError
            ``i`` is not below ``n``.
        """
        if not 0 <= i < self.n:
            raise IndexError("Index {} out of range [0, {}).".format(i, self.n))
        code = 0
        for level, plane in enumerate(self.planes):
            if trace is not None:
                trace.append(level)
            bit = plane.access(i)
            code = (code << 1) | bit
            i = self.zeros[level] + plane.rank1(i) if bit else plane.rank0(i)
        return code

    def rank(self, symbol, i, trace=None):
        """Occurrences of ``symbol`` strictly before position ``i``.

        Parameters
        ----------
        symbol : `int`
            Dense code below ``sigma``.
        i : `int`
            Position in ``0..n``.
        trace : `list`, optional
            Receives one entry per level visited.
        """
        self._check_symbol(symbol)
        if not 0 <= i <= self.n:
            raise IndexError("Rank position {} out of range [0, {}].".format(i, self.n))
        start = 0
        for level, plane in enumerate(self.planes):
            if trace is not None:
                trace.append(level)
            if (symbol >> (self.bit_width - 1 - level)) & 1:
                start = self.zeros[level] + plane.rank1(start)
                i = self.zeros[level] + plane.rank1(i)
            else:
                start = plane.rank0(start)
                i = plane.rank0(i)
        return i - start

    def select(self, symbol, j, trace=None):
        """Smallest ``p`` with ``rank(symbol, p) == j``.

        Raises
        ------
        LookupError
            ``symbol`` has fewer than ``j`` occurrences or ``j < 1``.
        """
        count = self.rank(symbol, self.n)
        if not 1 <= j <= count:
            raise LookupError(
                "No {}-th occurrence of {} among {}.".format(j, symbol, count)
            )
        start = 0
        for level, plane in enumerate(self.planes):
            if (symbol >> (self.bit_width - 1 - level)) & 1:
                start = self.zeros[level] + plane.rank1(start)
            else:
                start = plane.rank0(start)
        p = start + j - 1
        for level in reversed(range(self.bit_width)):
            if trace is not None:
                trace.append(level)
            plane = self.planes[level]
            if (symbol >> (self.bit_width - 1 - level)) & 1:
                p = plane.select1(p - self.zeros[level] + 1) - 1
            else:
                p = plane.select0(p + 1) - 1
        return p + 1

    def space_report(self):
        """Sum of the `SpaceReport` of every level."""
        report = self.planes[0].space_report()
        for plane in self.planes[1:]:
            report = report + plane.space_report()
        return report


class BinaryWaveletTree(object):
    """Level-wise binary wavelet tree, kept as a rank oracle.

    Level ``k`` concatenates the node bit vectors of depth ``k`` from left
    to right, i.e. bit ``k`` of every symbol after stably sorting the
    text by its first ``k`` bits. Rank tracks the current node as
    ``(start, size)`` on each level.
    """

    def __init__(self, planes, sigma):
        self.planes = planes
        self.sigma = sigma
        self.bit_width = len(planes)
        self.n = len(planes[0]) if planes else 0

    @classmethod
    def build(cls, text, sigma):
        """Build the tree over dense codes below ``sigma``."""
        codes = validate_text(text, sigma)
        width = (sigma - 1).bit_length()
        planes = []
        for level in range(width):
            order = np.argsort(codes >> (width - level), kind="stable")
            bits = ((codes[order] >> (width - 1 - level)) & 1).astype(bool)
            planes.append(RsBitVector.build(bits))
        return cls(planes, sigma)

    def __len__(self):
        return self.n

    def rank(self, symbol, i, trace=None):
        """Occurrences of ``symbol`` strictly before ``i``."""
        if not 0 <= symbol < self.sigma:
            raise IndexError("Symbol {} out of range [0, {}).".format(symbol, self.sigma))
        if not 0 <= i <= self.n:
            raise IndexError("Rank position {} out of range [0, {}].".format(i, self.n))
        start = 0
        size = self.n
        for level, plane in enumerate(self.planes):
            if trace is not None:
                trace.append(level)
            before = plane.rank1(start)
            position = plane.rank1(start + i) - before
            inside = plane.rank1(start + size) - before
            if (symbol >> (self.bit_width - 1 - level)) & 1:
                start += size - inside
                size = inside
                i = position
            else:
                size -= inside
                i -= position
        return i
