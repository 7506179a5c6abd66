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

import csv
import hashlib
import io
import json
import logging
import os
import platform
import time

import numpy as np

from .workload import ACCESS, RANK

__all__ = [
    "HARDWARE_ENV",
    "CSV_FIELDS",
    "TIMING_FIELDS",
    "ChecksumMismatchError",
    "BenchTarget",
    "BenchReport",
    "answer_checksum",
    "hardware_string",
    "run_queries",
    "run_bench",
    "compare_prefetch",
]

HARDWARE_ENV = "QWT_HARDWARE"

CSV_FIELDS = (
    "structure",
    "kind",
    "count",
    "repetitions",
    "chained",
    "seed",
    "wall_time_ns",
    "latency_ns",
    "throughput_qps",
    "data_bits",
    "counter_bits",
    "select_bits",
    "predictor_bits",
    "total_bits",
    "checksum",
    "hardware",
)
# Fields that change from one run to the next.
TIMING_FIELDS = ("wall_time_ns", "latency_ns", "throughput_qps")


class ChecksumMismatchError(RuntimeError):
    """Answers of a benchmark run disagree with the oracle or with an
    earlier repetition."""

    pass


class BenchTarget(object):
    """Uniform query surface over an indexed structure.

    Parameters
    ----------
    name : `str`
        Label used in reports.
    structure : `QuadWaveletMatrix` or `BinaryWaveletMatrix`
        Anything with ``access``, ``rank``, ``select`` and
        ``space_report``.
    prefetch : `bool`, optional
        Route rank queries through ``rank_prefetch``.
    """

    def __init__(self, name, structure, prefetch=False):
        self.name = name
        self.structure = structure
        self.prefetch = prefetch
        if prefetch:
            self._rank = structure.rank_prefetch
        else:
            self._rank = structure.rank

    def __len__(self):
        return len(self.structure)

    def __repr__(self):
        return "BenchTarget({!r}, prefetch={})".format(self.name, self.prefetch)

    def answer(self, kind, argument, symbol=None):
        """Run one query of ``kind``."""
        if kind == ACCESS:
            return self.structure.access(argument)
        if kind == RANK:
            return self._rank(symbol, argument)
        return self.structure.select(symbol, argument)

    def space_report(self):
        return self.structure.space_report()


def answer_checksum(answers):
    """Hex BLAKE2b digest of the answers as little-endian ``uint64``."""
    data = np.asarray(answers, dtype="<u8").tobytes()
    return hashlib.blake2b(data, digest_size=16).hexdigest()


def hardware_string(env=HARDWARE_ENV):
    """Hardware label from ``env`` or, when unset, from `platform`."""
    label = os.environ.get(env)
    if label:
        return label
    return "{} {} {}".format(
        platform.system(), platform.machine(), platform.processor() or "unknown-cpu"
    ).strip()


def run_queries(target, workload):
    """Answer every query of ``workload`` in order.

    In chained mode each query is perturbed by the previous answer
    (see `QueryWorkload.chain`), so queries cannot overlap. Only the
    argument changes; rank and select keep the drawn symbol.
    """
    kind = workload.kind
    arguments = workload.arguments.tolist()
    symbols = workload.symbols.tolist() if workload.symbols is not None else None
    answers = []
    previous = 0
    for index, argument in enumerate(arguments):
        symbol = symbols[index] if symbols is not None else None
        if workload.chained:
            argument = workload.chain(argument, symbol, previous)
        previous = target.answer(kind, argument, symbol)
        answers.append(previous)
    return answers


class BenchReport(object):
    """Result of one benchmark run.

    Parameters
    ----------
    target : `BenchTarget`
        What was measured.
    workload : `QueryWorkload`
        What was run.
    repetitions : `int`
        Number of timed repetitions.
    elapsed_ns : `list` of `int`
        Wall time of each repetition.
    checksum : `str`
        Digest of the answers.
    hardware : `str`
        Hardware label.
    """

    def __init__(self, target, workload, repetitions, elapsed_ns, checksum, hardware):
        self.structure = target.name
        self.kind = workload.kind
        self.count = len(workload)
        self.repetitions = repetitions
        self.chained = workload.chained
        self.seed = workload.seed
        self.elapsed_ns = list(elapsed_ns)
        self.checksum = checksum
        self.hardware = hardware
        self.space = target.space_report()

    @property
    def wall_time_ns(self):
        """float: Mean wall time of one repetition."""
        return float(np.mean(self.elapsed_ns))

    @property
    def latency_ns(self):
        """float: Mean time per query."""
        return self.wall_time_ns / self.count

    @property
    def throughput_qps(self):
        """float: Queries per second."""
        if self.wall_time_ns == 0:
            return 0.0
        return self.count * 1e9 / self.wall_time_ns

    def to_dict(self):
        record = {
            "structure": self.structure,
            "kind": self.kind,
            "count": self.count,
            "repetitions": self.repetitions,
            "chained": self.chained,
            "seed": self.seed,
            "wall_time_ns": self.wall_time_ns,
            "latency_ns": self.latency_ns,
            "throughput_qps": self.throughput_qps,
        }
        record.update(self.space.to_dict())
        record["checksum"] = self.checksum
        record["hardware"] = self.hardware
        return record

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_csv(self, header=True):
        """One CSV row, optionally preceded by the header."""
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, extrasaction="ignore")
        if header:
            writer.writeheader()
        writer.writerow(self.to_dict())
        return buffer.getvalue()


def run_bench(
    target,
    workload,
    repetitions=10,
    oracle=None,
    hardware=None,
    log_level=logging.DEBUG,
):
    """Time ``workload`` on ``target``.

    Every repetition must produce the same checksum, and when ``oracle``
    is given that checksum must match the oracle's.

    Parameters
    ----------
    target : `BenchTarget`
        Structure under test.
    workload : `QueryWorkload`
        Queries to run.
    repetitions : `int`, optional
        Timed repetitions, at least 1.
    oracle : `BenchTarget`, optional
        Reference structure answering the same workload.
    hardware : `str`, optional
        Hardware label; defaults to `hardware_string`.
    log_level : `int`, optional
        Level used for log messages.

    Returns
    -------
    `BenchReport`

    Raises
    ------
    ValueError
        ``repetitions < 1``.
    ChecksumMismatchError
        Answers differ between repetitions or from the oracle.
    """
    log = logging.getLogger("Bench")
    if repetitions < 1:
        raise ValueError("Repetitions must be at least 1.")

    expected = None
    if oracle is not None:
        expected = answer_checksum(run_queries(oracle, workload))
        log.log(log_level, "run_bench: oracle=%s checksum=%s", oracle.name, expected)

    checksum = None
    elapsed = []
    for repetition in range(repetitions):
        start = time.perf_counter_ns()
        answers = run_queries(target, workload)
        elapsed.append(time.perf_counter_ns() - start)
        current = answer_checksum(answers)
        if checksum is None:
            checksum = current
        elif current != checksum:
            raise ChecksumMismatchError(
                "Repetition {} of {} gave checksum {} instead of {}.".format(
                    repetition, target.name, current, checksum
                )
            )
        log.log(log_level, "run_bench: rep=%d elapsed_ns=%d", repetition, elapsed[-1])

    if expected is not None and checksum != expected:
        raise ChecksumMismatchError(
            "{} checksum {} differs from oracle {} checksum {}.".format(
                target.name, checksum, oracle.name, expected
            )
        )
    if hardware is None:
        hardware = hardware_string()
    return BenchReport(target, workload, repetitions, elapsed, checksum, hardware)


def compare_prefetch(matrix, workload, repetitions=10, hardware=None, log_level=logging.DEBUG):
    """Run ``workload`` on ``matrix`` with and without prefetching.

    The matrix needs an attached predictor. Returns a `dict` holding both
    reports and the latency ratio ``without / with``.

    Raises
    ------
    ValueError
        ``matrix`` has no predictor.
    ChecksumMismatchError
        The two runs disagree.
    """
    if matrix.predictor is None:
        raise ValueError("Prefetch comparison needs an index built with a predictor.")
    plain = run_bench(
        BenchTarget("qwm", matrix), workload, repetitions, hardware=hardware, log_level=log_level
    )
    prefetched = run_bench(
        BenchTarget("qwm-prefetch", matrix, prefetch=True),
        workload,
        repetitions,
        hardware=hardware,
        log_level=log_level,
    )
    if plain.checksum != prefetched.checksum:
        raise ChecksumMismatchError(
            "Prefetching changed the answers ({} != {}).".format(
                prefetched.checksum, plain.checksum
            )
        )
    ratio = plain.latency_ns / prefetched.latency_ns if prefetched.latency_ns else 0.0
    return {
        "plain": plain.to_dict(),
        "prefetch": prefetched.to_dict(),
        "speedup": ratio,
    }
