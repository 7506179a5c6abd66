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

"""In-process golden and oracle checks behind ``qwt selftest``.

The quick suite runs in seconds. ``full=True`` scales every check up to
the acceptance sizes (texts of up to 4096 symbols, quad vectors of 2^22
quads, predictors over 2^24 quads), which takes minutes in pure Python.
"""

import collections
import logging

import numpy as np

from .alphabet import DenseAlphabet
from .bench import BenchTarget, run_bench
from .binwm import BinaryWaveletMatrix, BinaryWaveletTree
from .predictor import (
    ApproxRankIndex,
    DiscriminantTable,
    RankPredictor,
    corrected_chain,
    uncorrected_chain,
)
from .quadvec import Geometry, RsQuadVector
from .qwm import QuadWaveletMatrix
from .search import FmCountIndex, bwt_transform
from .workload import RANK, gen_queries

__all__ = ["CheckResult", "ORACLE_SIGMAS", "run_selftest"]

CheckResult = collections.namedtuple("CheckResult", ["name", "passed", "detail"])

ORACLE_SIGMAS = (2, 3, 4, 5, 16, 17, 64, 256, 257)

GOLDEN_TEXT = b"accessandselect"
GOLDEN_LEVEL1 = [0, 0, 0, 1, 3, 3, 0, 2, 1, 3, 1, 2, 1, 0, 3]
GOLDEN_TAIL = "011011010110001"


class _Sizes(object):
    def __init__(self, full):
        self.texts = 1000 if full else 24
        self.max_text = 4096 if full else 384
        self.space_quads = 1 << 22 if full else 1 << 16
        self.predictor_quads = 1 << 24 if full else 1 << 16
        # The predictor space law is exact once every bitmap fills its blocks.
        self.space_law_quads = 1 << 24 if full else 1 << 21
        self.approx_queries = 10**6 if full else 2000
        self.chain_text = 1 << 20 if full else 1 << 15
        self.chain_queries = 10**5 if full else 1000
        self.transparency_text = 1 << 22 if full else 1 << 14
        self.transparency_queries = 10**5 if full else 2000
        self.fm_text = 1 << 20 if full else 1 << 13
        self.fm_patterns = 100 if full else 30


def _expect(condition, message, *args):
    if not condition:
        raise AssertionError(message.format(*args))


class _PrefixOracle(object):
    """Linear-scan answers backed by per-symbol prefix counts."""

    def __init__(self, text):
        self.text = np.asarray(text, dtype=np.int64)
        self._prefix = {}

    def prefix(self, symbol):
        if symbol not in self._prefix:
            counts = np.zeros(self.text.size + 1, dtype=np.int64)
            np.cumsum(self.text == symbol, out=counts[1:])
            self._prefix[symbol] = counts
        return self._prefix[symbol]

    def rank(self, symbol, i):
        return int(self.prefix(symbol)[i])

    def select(self, symbol, j):
        return int(np.flatnonzero(self.text == symbol)[j - 1]) + 1


def check_golden_matrix(sizes, rng):
    matrix = QuadWaveletMatrix.from_data(GOLDEN_TEXT)
    _expect(matrix.sigma == 8 and matrix.levels == 2, "unexpected shape {!r}", matrix)
    level1 = matrix.planes[0].to_numpy().tolist()
    _expect(level1 == GOLDEN_LEVEL1, "level 1 quads {}", level1)
    offsets = matrix.cumulative_offsets(0)
    _expect(offsets == (5, 7, 11, 15), "cumulative offsets {}", offsets)
    tail = "".join(str(int(b)) for b in matrix.tail.to_numpy())
    _expect(tail == GOLDEN_TAIL and matrix.tail.zeros == 7, "tail plane {}", tail)
    decoded = matrix.alphabet.decode(matrix.to_numpy()).astype(np.uint8).tobytes()
    _expect(decoded == GOLDEN_TEXT, "decoded {!r}", decoded)
    return "level 1, offsets (5, 7, 11, 15), tail zeros 7"


def check_golden_binary(sizes, rng):
    alphabet = DenseAlphabet.from_data(GOLDEN_TEXT)
    matrix = BinaryWaveletMatrix.build(alphabet.encode(GOLDEN_TEXT), 8)
    _expect(list(matrix.zeros) == [9, 7, 7], "zeros {}", list(matrix.zeros))
    return "Z = [9, 7, 7]"


def check_golden_search(sizes, rng):
    transformed = bwt_transform(b"banana")
    _expect(transformed == b"annb$aa", "bwt {!r}", transformed)
    index = FmCountIndex.build(b"banana")
    for pattern, expected in ((b"ana", 2), (b"a", 3), (b"nab", 0), (b"banana", 1)):
        _expect(index.count(pattern) == expected, "count {!r}", pattern)
    return "banana"


def check_oracle_sweep(sizes, rng):
    queries = 0
    for t in range(sizes.texts):
        sigma = ORACLE_SIGMAS[t % len(ORACLE_SIGMAS)]
        n = int(rng.integers(1, sizes.max_text + 1))
        text = rng.integers(0, sigma, n)
        oracle = _PrefixOracle(text)
        matrix = QuadWaveletMatrix.build(text, sigma, Geometry(1 + t % 2))
        binary = BinaryWaveletMatrix.build(text, sigma)
        tree = BinaryWaveletTree.build(text, sigma)
        quads = RsQuadVector.build(text & 3, Geometry(1 + t % 2))
        quad_oracle = _PrefixOracle(text & 3)

        _expect(np.array_equal(matrix.to_numpy(), text), "sigma={} decode", sigma)
        for i in range(n + 1):
            symbol = int(text[min(i, n - 1)])
            drawn = int(rng.integers(0, sigma))
            if i < n:
                _expect(matrix.access(i) == text[i], "sigma={} access({})", sigma, i)
                _expect(binary.access(i) == text[i], "sigma={} binwm access({})", sigma, i)
            for c in (symbol, drawn):
                expected = oracle.rank(c, i)
                _expect(matrix.rank(c, i) == expected, "sigma={} rank({}, {})", sigma, c, i)
                _expect(binary.rank(c, i) == expected, "sigma={} binwm rank", sigma)
                _expect(tree.rank(c, i) == expected, "sigma={} wt rank", sigma)
            _expect(
                quads.rank(symbol & 3, i) == quad_oracle.rank(symbol & 3, i),
                "quad rank({}, {})",
                symbol & 3,
                i,
            )
            queries += 8
        for c in np.unique(text).tolist():
            for j in range(1, oracle.rank(c, n) + 1):
                expected = oracle.select(c, j)
                _expect(matrix.select(c, j) == expected, "sigma={} select({}, {})", sigma, c, j)
                _expect(binary.select(c, j) == expected, "sigma={} binwm select", sigma)
                queries += 2
        for q in range(4):
            for j in range(1, quad_oracle.rank(q, n) + 1):
                _expect(quads.select(q, j) == quad_oracle.select(q, j), "quad select")
                queries += 1
    return "{} texts, {} queries".format(sizes.texts, queries)


def check_space_laws(sizes, rng):
    quads = rng.integers(0, 4, sizes.space_quads).astype(np.uint8)
    for geometry, expected in ((Geometry.SB4096_B512, 6.25), (Geometry.SB2048_B256, 12.5)):
        report = RsQuadVector.build(quads, geometry).space_report()
        _expect(
            abs(report.counter_overhead - expected) <= 0.05,
            "{} counter overhead {}",
            geometry.name,
            report.counter_overhead,
        )
        _expect(
            abs(report.select_overhead - 1.5625) <= 0.01,
            "{} select overhead {}",
            geometry.name,
            report.select_overhead,
        )

    n = sizes.space_law_quads
    matrix = QuadWaveletMatrix.build(rng.integers(0, 256, n), 256)
    bits = RankPredictor.build(matrix, coarse_epsilon=4096).space_bits()
    law = 5 * matrix.levels * n / 2048
    _expect(abs(bits - law) <= 0.05 * law, "predictor bits {} vs {}", bits, law)
    return "predictor {} bits for n={}".format(bits, n)


def check_predictor_bounds(sizes, rng):
    quads = rng.integers(0, 4, sizes.predictor_quads).astype(np.uint8)
    oracle = _PrefixOracle(quads)
    positions = rng.integers(0, quads.size + 1, sizes.approx_queries)
    symbols = rng.integers(0, 4, sizes.approx_queries)
    for epsilon in (16, 256, 2048):
        index = ApproxRankIndex.build(quads, epsilon)
        for i, q in zip(positions.tolist(), symbols.tolist()):
            error = oracle.rank(q, i) - index.rank_approx(q, i)
            _expect(0 <= error < epsilon, "epsilon={} error {} at ({}, {})", epsilon, error, q, i)
    return "{} queries per epsilon".format(sizes.approx_queries)


def _chain_errors(matrix, chain, queries):
    """Per level, the largest ``exact - estimate`` over the queries."""
    worst = [0] * len(matrix.planes)
    smallest = 0
    for symbol, i in queries:
        _, ends = matrix.rank_chain(symbol, i)
        for k, estimate in enumerate(chain(symbol, i)):
            error = ends[k] - estimate
            worst[k] = max(worst[k], error)
            smallest = min(smallest, error)
    return worst, smallest


def check_corrected_chain(sizes, rng):
    epsilon = 64
    n = sizes.chain_text
    # One dominant symbol keeps every digit dense, which is what makes
    # uncorrected errors pile up.
    text = np.where(rng.random(n) < 0.9, 0, rng.integers(0, 256, n))
    matrix = QuadWaveletMatrix.build(text, 256)
    table = DiscriminantTable.build(matrix, epsilon)
    positions = rng.integers(0, n, sizes.chain_queries).tolist()
    queries = [(int(text[i]), i) for i in positions]

    worst, smallest = _chain_errors(
        matrix, lambda c, i: corrected_chain(matrix, table, c, i), queries
    )
    _expect(smallest >= 0 and max(worst) < epsilon, "corrected errors {}", worst)
    ablation, _ = _chain_errors(
        matrix, lambda c, i: uncorrected_chain(matrix, table.levels, c, i), queries
    )
    _expect(max(ablation[1:]) > epsilon, "uncorrected errors never exceed epsilon {}", ablation)
    return "corrected worst {}, uncorrected worst {}".format(worst, ablation)


def check_prefetch_transparency(sizes, rng):
    n = sizes.transparency_text
    matrix = QuadWaveletMatrix.build(rng.integers(0, 256, n), 256)
    matrix.attach_predictor(RankPredictor.build(matrix, coarse_epsilon=256, fine_epsilon=64))
    workload = gen_queries(matrix.to_numpy(), RANK, sizes.transparency_queries, 7)
    plain = run_bench(BenchTarget("qwm", matrix), workload, 1, hardware="selftest")
    prefetched = run_bench(
        BenchTarget("qwm-prefetch", matrix, prefetch=True),
        workload,
        1,
        oracle=BenchTarget("binwm", BinaryWaveletMatrix.build(matrix.to_numpy(), 256)),
        hardware="selftest",
    )
    _expect(plain.checksum == prefetched.checksum, "checksums differ")
    return "checksum {}".format(plain.checksum)


def _naive_count(symbols, pattern):
    needle = np.frombuffer(pattern, dtype=np.uint8)
    windows = np.lib.stride_tricks.sliding_window_view(symbols, needle.size)
    return int(np.count_nonzero((windows == needle).all(axis=1)))


def check_backward_search(sizes, rng):
    text = rng.choice(np.frombuffer(b"ACGT", dtype=np.uint8), sizes.fm_text).tobytes()
    index = FmCountIndex.build(text)
    symbols = np.frombuffer(text, dtype=np.uint8)
    for _ in range(sizes.fm_patterns):
        length = int(rng.integers(1, 9))
        start = int(rng.integers(0, len(text) - length))
        pattern = text[start : start + length]
        if rng.random() < 0.2:
            pattern = pattern[:-1] + b"N"
        expected = _naive_count(symbols, pattern)
        _expect(index.count(pattern) == expected, "count({!r})", pattern)
    return "{} patterns".format(sizes.fm_patterns)


CHECKS = (
    ("golden-matrix", check_golden_matrix),
    ("golden-binary", check_golden_binary),
    ("golden-search", check_golden_search),
    ("oracle-sweep", check_oracle_sweep),
    ("space-laws", check_space_laws),
    ("predictor-bounds", check_predictor_bounds),
    ("corrected-chain", check_corrected_chain),
    ("prefetch-transparency", check_prefetch_transparency),
    ("backward-search", check_backward_search),
)


def run_selftest(full=False, seed=0, log_level=logging.INFO):
    """Run every check and return one `CheckResult` per check.

    Parameters
    ----------
    full : `bool`, optional
        Use the acceptance sizes.
    seed : `int`, optional
        Seed of the random texts.
    log_level : `int`, optional
        Level used for the per-check log lines.
    """
    log = logging.getLogger("Selftest")
    sizes = _Sizes(full)
    results = []
    for name, check in CHECKS:
        rng = np.random.default_rng(seed)
        try:
            detail = check(sizes, rng)
            results.append(CheckResult(name, True, detail))
        except AssertionError as error:
            results.append(CheckResult(name, False, str(error)))
        log.log(log_level, "%s: %s", name, "ok" if results[-1].passed else results[-1].detail)
    return results
