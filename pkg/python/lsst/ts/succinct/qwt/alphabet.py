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

__all__ = ["DenseAlphabet", "as_symbol_array"]


def as_symbol_array(data):
    """Return ``data`` as a 1-d integer array.

    `bytes`-like inputs become ``uint8``; anything else goes through
    `numpy.asarray`.
    """
    if isinstance(data, (bytes, bytearray, memoryview)):
        return np.frombuffer(bytes(data), dtype=np.uint8)
    return np.asarray(data).reshape(-1)


class DenseAlphabet(object):
    """Map between original symbols and dense codes ``0..sigma-1``.

    Codes follow the sorted order of the distinct symbols, so the map is
    order preserving. The sorted symbols double as the decode table.

    Parameters
    ----------
    symbols : sequence of `int`
        The distinct original symbols, strictly increasing.
    """

    def __init__(self, symbols):
        self.symbols = np.asarray(symbols, dtype=np.int64).reshape(-1)
        if self.symbols.size > 1 and np.any(np.diff(self.symbols) <= 0):
            raise ValueError("Alphabet symbols must be strictly increasing.")

    @classmethod
    def from_data(cls, data):
        """Collect the distinct symbols of ``data``.

        Parameters
        ----------
        data : `bytes` or sequence of `int`
            The text.
        """
        return cls(np.unique(as_symbol_array(data)))

    def __len__(self):
        return self.symbols.size

    def __eq__(self, other):
        if not isinstance(other, DenseAlphabet):
            return NotImplemented
        return np.array_equal(self.symbols, other.symbols)

    def __repr__(self):
        return "DenseAlphabet(sigma={})".format(self.sigma)

    @property
    def sigma(self):
        """int: Number of distinct symbols."""
        return self.symbols.size

    @property
    def bit_width(self):
        """int: Bits per dense code, at least 1."""
        return max(1, (self.sigma - 1).bit_length())

    def encode(self, data):
        """Translate a text into dense codes.

        Raises
        ------
        ValueError
            ``data`` holds a symbol outside the alphabet.
        """
        values = as_symbol_array(data).astype(np.int64)
        codes = np.searchsorted(self.symbols, values)
        if values.size and (
            int(codes.max()) >= self.sigma
            or not np.array_equal(self.symbols[codes], values)
        ):
            raise ValueError("Text holds symbols outside the alphabet.")
        return codes.astype(np.int64)

    def encode_symbol(self, value):
        """Dense code of ``value``, or `None` if it is not in the alphabet."""
        code = int(np.searchsorted(self.symbols, value))
        if code < self.sigma and int(self.symbols[code]) == value:
            return code
        return None

    def decode(self, codes):
        """Translate dense codes back into original symbols."""
        return self.symbols[np.asarray(codes, dtype=np.int64)]

    def decode_symbol(self, code):
        """Original symbol of one dense code."""
        return int(self.symbols[code])
