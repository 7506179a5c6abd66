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

__all__ = [
    "ACCESS",
    "RANK",
    "SELECT",
    "QUERY_KINDS",
    "SplitMix64",
    "QueryWorkload",
    "gen_queries",
    "ingest",
]

ACCESS = "access"
RANK = "rank"
SELECT = "select"
QUERY_KINDS = (ACCESS, RANK, SELECT)

_MASK = (1 << 64) - 1


class SplitMix64(object):
    """The SplitMix64 generator.

    ``state += 0x9E3779B97F4A7C15``, then the output is the state mixed
    with two xor-shift-multiply rounds and a final xor-shift. Bounded
    draws use the high half of ``next() * bound``.

    Parameters
    ----------
    seed : `int`
        Any integer; only the low 64 bits are used.
    """

    def __init__(self, seed):
        self.state = seed & _MASK

    def next(self):
        """Return the next 64-bit output."""
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, bound):
        """Return an integer in ``[0, bound)``."""
        return (self.next() * bound) >> 64


class QueryWorkload(object):
    """Pre-generated queries of one kind.

    Parameters
    ----------
    kind : `str`
        One of `QUERY_KINDS`.
    arguments : `numpy.ndarray`
        Positions for access and rank, occurrence indexes (1-based) for
        select.
    symbols : `numpy.ndarray` or `None`
        Queried symbols for rank and select.
    seed : `int`
        Seed the workload was drawn with.
    chained : `bool`
        Whether each query is perturbed by the previous answer.
    length : `int`
        Length of the text.
    occurrences : `numpy.ndarray`, optional
        Occurrences of each symbol, needed to chain select queries.
    """

    def __init__(self, kind, arguments, symbols, seed, chained, length, occurrences=None):
        if kind not in QUERY_KINDS:
            raise ValueError("Unknown query kind {!r}.".format(kind))
        self.kind = kind
        self.arguments = arguments
        self.symbols = symbols
        self.seed = seed
        self.chained = chained
        self.length = length
        self.occurrences = occurrences

    def __len__(self):
        return self.arguments.size

    @property
    def entries(self):
        """list: Positions, or ``(argument, symbol)`` pairs."""
        if self.symbols is None:
            return self.arguments.tolist()
        return list(zip(self.arguments.tolist(), self.symbols.tolist()))

    def chain(self, argument, symbol, previous):
        """Perturb one query by the previous answer.

        Positions become ``(position ^ previous) % n``. Select occurrence
        indexes are folded the same way into ``1..occ(symbol)``. The drawn
        symbol is kept, so a chained rank query asks for that symbol at the
        new position, which usually holds a different one.
        """
        if self.kind == SELECT:
            return ((argument - 1) ^ previous) % int(self.occurrences[symbol]) + 1
        return (argument ^ previous) % self.length


def gen_queries(text, kind, count, seed, chained=False):
    """Draw a reproducible workload over ``text``.

    - access: uniform positions;
    - rank: a uniform position ``i`` queried with its own symbol
      ``text[i]``;
    - select: the symbol at a uniform position (so symbols follow the
      text frequencies) and an occurrence index uniform in
      ``1..occ(symbol)``.

    Parameters
    ----------
    text : sequence of `int`
        Dense-coded text.
    kind : `str`
        One of `QUERY_KINDS`.
    count : `int`
        Number of queries, at least 1.
    seed : `int`
        Generator seed.
    chained : `bool`, optional
        Mark the workload for latency mode.

    Raises
    ------
    ValueError
        Unknown kind, empty text or ``count < 1``.
    """
    codes = np.asarray(text).reshape(-1).astype(np.int64)
    n = codes.size
    if kind not in QUERY_KINDS:
        raise ValueError("Unknown query kind {!r}.".format(kind))
    if n == 0:
        raise ValueError("Cannot draw queries over an empty text.")
    if count < 1:
        raise ValueError("Query count must be at least 1.")

    rng = SplitMix64(seed)
    positions = np.array([rng.below(n) for _ in range(count)], dtype=np.int64)
    occurrences = np.bincount(codes)
    symbols = None
    if kind == ACCESS:
        arguments = positions
    elif kind == RANK:
        arguments = positions
        symbols = codes[positions]
    else:
        symbols = codes[positions]
        arguments = np.array(
            [1 + rng.below(int(occurrences[c])) for c in symbols.tolist()], dtype=np.int64
        )
    logging.getLogger("QueryWorkload").debug(
        "gen_queries: kind=%s count=%d seed=%d chained=%s", kind, count, seed, chained
    )
    return QueryWorkload(kind, arguments, symbols, seed, chained, n, occurrences)


def ingest(path, limit=None):
    """Read a corpus prefix and remap it to a dense alphabet.

    Parameters
    ----------
    path : `str`
        Corpus file.
    limit : `int`, optional
        Maximum number of bytes to read.

    Returns
    -------
    codes : `numpy.ndarray`
        Dense-coded text.
    alphabet : `DenseAlphabet`
        Decode table.

    Raises
    ------
    ValueError
        The prefix is empty.
    OSError
        The file cannot be read.
    """
    with open(path, "rb") as stream:
        data = stream.read() if limit is None else stream.read(limit)
    if not data:
        raise ValueError("Corpus {} is empty.".format(path))
    alphabet = DenseAlphabet.from_data(data)
    return alphabet.encode(data), alphabet
