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

"""Binary index files.

Layout, all integers little-endian:

- header: magic ``b"QWTK"``, format version (u16), sigma (u32), n (u64),
  bit width (u8), geometry tag (u8), flags (u8: bit 0 predictor present,
  bit 1 search counts present);
- every quad level: geometry tag (u8), length (u64), data word count
  (u64) and words, counter groups, symbol totals (4 x u64), select
  sample capacity (u64) and samples (u32);
- tail level when the bit width is odd: length (u64), word count (u64)
  and words;
- per quad level the four interval offsets (u64);
- decode table: symbol count (u32) and symbols (u32);
- optional predictor section, then optional search counts.
"""

import logging
import struct

import numpy as np

from .alphabet import DenseAlphabet
from .bitvec import Rank9BitVector, RsBitVector
from .predictor import ApproxRankIndex, DiscriminantTable, RankPredictor
from .quadvec import Geometry, RsQuadVector
from .qwm import QuadWaveletMatrix
from .search import FmCountIndex

__all__ = ["MAGIC", "FORMAT_VERSION", "save_index", "load_index"]

MAGIC = b"QWTK"
FORMAT_VERSION = 1

_HEADER = struct.Struct("<4sHIQBBB")
_FLAG_PREDICTOR = 0x1
_FLAG_SEARCH = 0x2


class _Writer(object):
    def __init__(self, stream):
        self.stream = stream

    def pack(self, fmt, *values):
        self.stream.write(struct.pack("<" + fmt, *values))

    def array(self, values, dtype):
        values = np.ascontiguousarray(values, dtype=dtype)
        self.pack("Q", values.size)
        self.stream.write(values.tobytes())

    def bits(self, vector):
        self.pack("Q", len(vector))
        self.array(vector.words, "<u8")


class _Reader(object):
    def __init__(self, buffer):
        self.buffer = memoryview(buffer)
        self.position = 0

    def unpack(self, fmt):
        layout = struct.Struct("<" + fmt)
        if self.position + layout.size > len(self.buffer):
            raise ValueError("Index file is truncated.")
        values = layout.unpack_from(self.buffer, self.position)
        self.position += layout.size
        return values if len(values) > 1 else values[0]

    def array(self, dtype):
        count = self.unpack("Q")
        dtype = np.dtype(dtype)
        end = self.position + count * dtype.itemsize
        if end > len(self.buffer):
            raise ValueError("Index file is truncated.")
        values = np.frombuffer(self.buffer[self.position : end], dtype=dtype)
        self.position = end
        return values.astype(dtype.newbyteorder("="))

    def bits(self, cls):
        length = self.unpack("Q")
        return cls.from_words(self.array("<u8").astype(np.uint64), length)


def _write_quad_vector(writer, vector):
    writer.pack("BQ", int(vector.geometry), len(vector))
    writer.array(vector.words, "<u8")
    writer.array(vector.counters.reshape(-1), "<u8")
    writer.pack("4Q", *vector.totals)
    writer.array(vector.select_samples.reshape(-1), "<u4")


def _read_quad_vector(reader):
    geometry, length = reader.unpack("BQ")
    geometry = Geometry(geometry)
    words = reader.array("<u8").astype(np.uint64)
    counters = reader.array("<u8").astype(np.uint64)
    totals = reader.unpack("4Q")
    samples = reader.array("<u4").astype(np.uint32)
    nsb = -(-length // geometry.superblock_size)
    if counters.size != nsb * 8 or samples.size % 4 or sum(totals) != length:
        raise ValueError("Corrupt quad vector section.")
    return RsQuadVector(
        words,
        length,
        geometry,
        counters.reshape(nsb, 4, 2),
        totals,
        samples.reshape(4, -1),
    )


def _write_approx(writer, index):
    writer.pack("QQB", index.epsilon, index.length, index.offsets is not None)
    for symbol in range(4):
        writer.bits(index.bitmaps[symbol])
        if index.offsets is not None:
            writer.array(index.offsets[symbol], "<u4")


def _read_approx(reader):
    epsilon, length, has_offsets = reader.unpack("QQB")
    bitmaps = []
    offsets = [] if has_offsets else None
    offset_type = np.min_scalar_type(max(epsilon // 2 - 1, 0))
    for _ in range(4):
        bitmaps.append(reader.bits(Rank9BitVector))
        if has_offsets:
            offsets.append(reader.array("<u4").astype(offset_type))
    return ApproxRankIndex(epsilon, length, bitmaps, offsets)


def _write_predictor(writer, predictor):
    writer.pack("III", predictor.line_bits, predictor.max_lines, len(predictor.coarse))
    for index in predictor.coarse:
        _write_approx(writer, index)
    table = predictor.discriminants
    writer.pack("B", table is not None)
    if table is not None:
        writer.pack("QI", table.epsilon, len(table.levels))
        for index in table.levels:
            _write_approx(writer, index)


def _read_predictor(reader):
    line_bits, max_lines, levels = reader.unpack("III")
    coarse = [_read_approx(reader) for _ in range(levels)]
    table = None
    if reader.unpack("B"):
        epsilon, count = reader.unpack("QI")
        table = DiscriminantTable(epsilon, [_read_approx(reader) for _ in range(count)])
    return RankPredictor(coarse, table, line_bits, max_lines)


def save_index(path, index, log_level=logging.DEBUG):
    """Write a `QuadWaveletMatrix` or `FmCountIndex` to ``path``.

    Parameters
    ----------
    path : `str`
        Output file name.
    index : `QuadWaveletMatrix` or `FmCountIndex`
        The structure; an attached predictor is saved with it.
    log_level : `int`, optional
        Level for the log line.
    """
    search = index if isinstance(index, FmCountIndex) else None
    matrix = search.matrix if search is not None else index
    flags = 0
    if matrix.predictor is not None:
        flags |= _FLAG_PREDICTOR
    if search is not None:
        flags |= _FLAG_SEARCH

    with open(path, "wb") as stream:
        writer = _Writer(stream)
        stream.write(
            _HEADER.pack(
                MAGIC,
                FORMAT_VERSION,
                matrix.sigma,
                matrix.n,
                matrix.bit_width,
                int(matrix.geometry),
                flags,
            )
        )
        for plane in matrix.planes:
            _write_quad_vector(writer, plane)
        if matrix.tail is not None:
            writer.bits(matrix.tail)
        for offsets in matrix.offsets:
            writer.pack("4Q", *offsets)
        symbols = matrix.alphabet.symbols if matrix.alphabet is not None else []
        writer.pack("I", len(symbols))
        stream.write(np.asarray(symbols, dtype="<u4").tobytes())
        if matrix.predictor is not None:
            _write_predictor(writer, matrix.predictor)
        if search is not None:
            writer.array(search.counts, "<u8")
    logging.getLogger("index_file").log(
        log_level, "save_index: path=%s n=%d flags=%d", path, matrix.n, flags
    )


def load_index(path, log_level=logging.DEBUG):
    """Read an index written by `save_index`.

    Returns
    -------
    `QuadWaveletMatrix` or `FmCountIndex`
        The search index when the file carries search counts.

    Raises
    ------
    ValueError
        The file is not an index, has an unknown version or is corrupt.
    OSError
        The file cannot be read.
    """
    with open(path, "rb") as stream:
        buffer = stream.read()
    if len(buffer) < _HEADER.size:
        raise ValueError("{} is too short to be an index file.".format(path))
    magic, version, sigma, n, bit_width, geometry, flags = _HEADER.unpack_from(buffer)
    if magic != MAGIC:
        raise ValueError("{} is not an index file.".format(path))
    if version != FORMAT_VERSION:
        raise ValueError("Unsupported index format version {}.".format(version))
    if sigma < 2 or bit_width != (sigma - 1).bit_length():
        raise ValueError("Corrupt index header.")

    reader = _Reader(buffer)
    reader.position = _HEADER.size
    planes = [_read_quad_vector(reader) for _ in range(bit_width // 2)]
    tail = reader.bits(RsBitVector) if bit_width % 2 else None
    offsets = [reader.unpack("4Q") for _ in planes]
    count = reader.unpack("I")
    if reader.position + 4 * count > len(reader.buffer):
        raise ValueError("Index file is truncated.")
    symbols = np.frombuffer(
        reader.buffer[reader.position : reader.position + 4 * count], dtype="<u4"
    )
    reader.position += 4 * count
    alphabet = DenseAlphabet(symbols.astype(np.int64)) if count else None

    matrix = QuadWaveletMatrix(planes, offsets, tail, sigma, alphabet=alphabet)
    if matrix.n != n or any(len(plane) != n for plane in planes):
        raise ValueError("Corrupt index: level lengths disagree with the header.")
    if planes and int(planes[0].geometry) != geometry:
        raise ValueError("Corrupt index: geometry disagrees with the header.")
    if flags & _FLAG_PREDICTOR:
        matrix.attach_predictor(_read_predictor(reader))
    logging.getLogger("index_file").log(
        log_level, "load_index: path=%s n=%d sigma=%d flags=%d", path, n, sigma, flags
    )
    if flags & _FLAG_SEARCH:
        counts = reader.array("<u8")
        if alphabet is None or counts.size != sigma:
            raise ValueError("Corrupt search section.")
        return FmCountIndex(matrix, counts, alphabet)
    return matrix
