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

import collections
import logging

import numpy as np

from .alphabet import DenseAlphabet, as_symbol_array
from .qwm import QuadWaveletMatrix
from .quadvec import Geometry

__all__ = [
    "FmCountIndex",
    "SearchInterval",
    "MAX_TEXT_BYTES",
    "suffix_array",
    "bwt_transform",
]

MAX_TEXT_BYTES = 64 * 1024 * 1024

# 1-based, both ends included.
SearchInterval = collections.namedtuple("SearchInterval", ["start", "end"])


def suffix_array(codes):
    """Sort the suffixes of ``codes`` by prefix doubling.

    Every round sorts the suffixes by the ranks of their first ``2k``
    symbols, taken as a pair of ``k``-symbol ranks, until all ranks are
    distinct. Suffixes that run off the end sort first.

    Parameters
    ----------
    codes : sequence of `int`
        The text, non-negative integers.

    Returns
    -------
    `numpy.ndarray`
        ``int64`` start positions in lexicographic order of the suffixes.
    """
    rank = np.asarray(codes, dtype=np.int64).reshape(-1)
    n = rank.size
    if n <= 1:
        return np.arange(n, dtype=np.int64)
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if k < n:
            second[: n - k] = rank[k:]
        order = np.lexsort((second, rank))
        first_sorted = rank[order]
        second_sorted = second[order]
        changed = (first_sorted[1:] != first_sorted[:-1]) | (
            second_sorted[1:] != second_sorted[:-1]
        )
        rank = np.empty(n, dtype=np.int64)
        rank[order] = np.concatenate(([0], np.cumsum(changed)))
        if rank[order[-1]] == n - 1:
            return order
        k *= 2


def _bwt_codes(codes):
    """BWT of ``codes + 1`` followed by a 0 sentinel."""
    text = np.concatenate((np.asarray(codes, dtype=np.int64) + 1, [0]))
    return text[suffix_array(text) - 1]


def bwt_transform(text, sentinel=b"$"):
    """Burrows-Wheeler transform of ``text`` with an explicit sentinel.

    The sentinel sorts before every byte of the text.

    Parameters
    ----------
    text : `bytes`
        The text.
    sentinel : `bytes`, optional
        One byte written where the sentinel lands.
    """
    alphabet = DenseAlphabet.from_data(text)
    bwt = _bwt_codes(alphabet.encode(text))
    out = np.full(bwt.size, sentinel[0], dtype=np.uint8)
    mask = bwt > 0
    out[mask] = alphabet.decode(bwt[mask] - 1)
    return out.tobytes()


class FmCountIndex(object):
    """Pattern counting by backward search over the BWT.

    The BWT is stored in a `QuadWaveletMatrix` whose code 0 is the
    sentinel; text symbols keep their dense code plus one.

    Parameters
    ----------
    matrix : `QuadWaveletMatrix`
        Matrix over the BWT codes.
    counts : `numpy.ndarray`
        Exclusive prefix sums of the BWT histogram, one entry per code.
    alphabet : `DenseAlphabet`
        Alphabet of the original text.
    log_level : `int`, optional
        Level used for log messages. Default is logging.DEBUG.
    """

    def __init__(self, matrix, counts, alphabet, log_level=logging.DEBUG):
        self.log = logging.getLogger("FmCountIndex")
        self.log_level = log_level
        self.matrix = matrix
        self.counts = [int(c) for c in counts]
        self.alphabet = alphabet
        self.n = len(matrix)

    @classmethod
    def build(
        cls,
        text,
        geometry=Geometry.SB4096_B512,
        max_bytes=MAX_TEXT_BYTES,
        log_level=logging.DEBUG,
    ):
        """Build the index.

        Parameters
        ----------
        text : `bytes`
            The text; must not be empty.
        geometry : `Geometry`, optional
            Counter layout of the matrix levels.
        max_bytes : `int`, optional
            Largest text accepted.
        log_level : `int`, optional
            Level used for log messages.

        Raises
        ------
        ValueError
            ``text`` is empty or longer than ``max_bytes``.
        """
        symbols = as_symbol_array(text)
        if symbols.size == 0:
            raise ValueError("Cannot build a search index over an empty text.")
        if symbols.size > max_bytes:
            raise ValueError(
                "Text of {} bytes exceeds the {} byte limit.".format(symbols.size, max_bytes)
            )
        alphabet = DenseAlphabet.from_data(symbols)
        bwt = _bwt_codes(alphabet.encode(symbols))
        sigma = alphabet.sigma + 1
        matrix = QuadWaveletMatrix.build(
            bwt, sigma, geometry=geometry, alphabet=alphabet, log_level=log_level
        )
        histogram = np.bincount(bwt, minlength=sigma)
        counts = np.cumsum(histogram) - histogram
        index = cls(matrix, counts, alphabet, log_level=log_level)
        index.log.log(log_level, "build: n=%d sigma=%d", index.n, sigma)
        return index

    def __len__(self):
        return self.n

    def backward_search(self, pattern):
        """Find the BWT rows prefixed by ``pattern``.

        The loop keeps the half-open row range ``[s, e)``; with exclusive
        ranks each step is ``C[c] + rank_c(s)`` and ``C[c] + rank_c(e)``.
        The answer is reported 1-based and closed, ``[s + 1, e]``.

        Parameters
        ----------
        pattern : `bytes` or sequence of `int`
            Nonempty pattern in original symbols.

        Returns
        -------
        `SearchInterval` or `None`
            `None` when the pattern does not occur, including patterns
            with symbols outside the alphabet.

        Raises
        ------
        ValueError
            ``pattern`` is empty.
        """
        symbols = as_symbol_array(pattern)
        if symbols.size == 0:
            raise ValueError("Pattern must not be empty.")
        start, end = 0, self.n
        for value in symbols[::-1].tolist():
            code = self.alphabet.encode_symbol(value)
            if code is None:
                return None
            code += 1
            start = self.counts[code] + self.matrix.rank(code, start)
            end = self.counts[code] + self.matrix.rank(code, end)
            if start >= end:
                return None
        return SearchInterval(start + 1, end)

    def count(self, pattern):
        """Number of occurrences of ``pattern`` in the text."""
        interval = self.backward_search(pattern)
        if interval is None:
            return 0
        return interval.end - interval.start + 1
