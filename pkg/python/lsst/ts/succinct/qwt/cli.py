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

import argparse
import json
import logging
import sys

from .bench import (
    BenchTarget,
    ChecksumMismatchError,
    compare_prefetch,
    hardware_string,
    run_bench,
)
from .binwm import BinaryWaveletMatrix
from .index_file import load_index, save_index
from .parameters import QwtParameters
from .predictor import RankPredictor
from .quadvec import Geometry
from .qwm import QuadWaveletMatrix
from .search import FmCountIndex
from .selftest import run_selftest
from .workload import ACCESS, QUERY_KINDS, RANK, gen_queries, ingest

__all__ = ["main", "make_parser"]

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


class _ArgumentParser(argparse.ArgumentParser):
    """Argument parser reporting usage errors with the validation exit
    code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, "{}: error: {}\n".format(self.prog, message))


def _parameters(args):
    parameters = QwtParameters()
    parameters.configure_from_module(getattr(args, "config", None))
    return parameters


def _matrix_of(index):
    return index.matrix if isinstance(index, FmCountIndex) else index


def _symbol_code(index, value):
    """Matrix code of a symbol given as one character or an integer.

    Returns `None` when the symbol does not occur in the indexed text.
    """
    symbol = ord(value) if len(value) == 1 and not value.isdigit() else int(value)
    matrix = _matrix_of(index)
    if matrix.alphabet is None:
        return symbol
    code = matrix.alphabet.encode_symbol(symbol)
    if code is None:
        return None
    return code + 1 if isinstance(index, FmCountIndex) else code


def _print_json(record):
    print(json.dumps(record, sort_keys=True))


def cmd_build(args):
    parameters = _parameters(args)
    geometry = parameters.geometry
    if args.geometry is not None:
        geometry = Geometry.from_block_size(args.geometry)
    if args.fm:
        with open(args.input, "rb") as stream:
            data = stream.read() if args.limit is None else stream.read(args.limit)
        index = FmCountIndex.build(data, geometry, max_bytes=parameters.max_text_bytes)
        matrix = index.matrix
    else:
        codes, alphabet = ingest(args.input, args.limit)
        index = matrix = QuadWaveletMatrix.build(
            codes, max(2, alphabet.sigma), geometry=geometry, alphabet=alphabet
        )
    if args.prefetch:
        matrix.attach_predictor(
            RankPredictor.build(
                matrix,
                coarse_epsilon=args.epsilon or parameters.coarse_epsilon,
                fine_epsilon=parameters.fine_epsilon if args.corrected else None,
                line_bits=parameters.cache_line_bits,
                max_lines=parameters.max_prefetch_lines,
            )
        )
    save_index(args.output, index, log_level=logging.INFO)
    return EXIT_OK


def cmd_query(args):
    index = load_index(args.index)
    matrix = _matrix_of(index)
    if args.kind == ACCESS:
        code = matrix.access(args.pos)
        value = code
        if isinstance(index, FmCountIndex):
            value = None if code == 0 else index.alphabet.decode_symbol(code - 1)
        elif matrix.alphabet is not None:
            value = matrix.alphabet.decode_symbol(code)
        _print_json({"kind": args.kind, "pos": args.pos, "answer": value})
        return EXIT_OK
    if args.sym is None:
        raise ValueError("--sym is required for {} queries.".format(args.kind))
    code = _symbol_code(index, args.sym)
    if args.kind == RANK:
        if code is None:
            if not 0 <= args.pos <= len(matrix):
                raise IndexError("Rank position {} out of range.".format(args.pos))
            answer = 0
        elif args.prefetch:
            answer = matrix.rank_prefetch(code, args.pos)
        else:
            answer = matrix.rank(code, args.pos)
    else:
        if code is None:
            raise LookupError("Symbol {!r} does not occur in the text.".format(args.sym))
        answer = matrix.select(code, args.pos)
    _print_json({"kind": args.kind, "pos": args.pos, "sym": args.sym, "answer": answer})
    return EXIT_OK


def cmd_bench(args):
    parameters = _parameters(args)
    matrix = _matrix_of(load_index(args.index))
    text = matrix.to_numpy()
    workload = gen_queries(
        text,
        args.kind,
        args.count or parameters.bench_count,
        parameters.bench_seed if args.seed is None else args.seed,
        chained=args.chained,
    )
    repetitions = args.reps or parameters.bench_repetitions
    hardware = hardware_string(parameters.hardware_env)

    if args.compare_prefetch:
        _print_json(compare_prefetch(matrix, workload, repetitions, hardware=hardware))
        return EXIT_OK

    oracle = None
    if args.oracle == "binwm":
        oracle = BenchTarget("binwm", BinaryWaveletMatrix.build(text, matrix.sigma))
    name = "qwm-prefetch" if args.prefetch else "qwm"
    target = BenchTarget(name, matrix, prefetch=args.prefetch)
    report = run_bench(target, workload, repetitions, oracle=oracle, hardware=hardware)
    if args.format == "csv":
        sys.stdout.write(report.to_csv())
    else:
        print(report.to_json())
    return EXIT_OK


def cmd_stats(args):
    index = load_index(args.index)
    matrix = _matrix_of(index)
    record = {
        "n": matrix.n,
        "sigma": matrix.sigma,
        "bit_width": matrix.bit_width,
        "levels": matrix.levels,
        "geometry": matrix.geometry.name,
        "predictor": repr(matrix.predictor) if matrix.predictor is not None else None,
        "search": isinstance(index, FmCountIndex),
    }
    record.update(matrix.space_report().to_dict())
    _print_json(record)
    return EXIT_OK


def cmd_search(args):
    index = load_index(args.index)
    if not isinstance(index, FmCountIndex):
        raise ValueError("{} was not built with --fm.".format(args.index))
    interval = index.backward_search(args.pattern.encode("utf-8"))
    _print_json(
        {
            "pattern": args.pattern,
            "count": 0 if interval is None else interval.end - interval.start + 1,
            "interval": None if interval is None else list(interval),
        }
    )
    return EXIT_OK


def cmd_selftest(args):
    results = run_selftest(full=args.full, seed=args.seed)
    for result in results:
        print("{:24s} {:4s} {}".format(result.name, "ok" if result.passed else "FAIL", result.detail))
    return EXIT_OK if all(result.passed for result in results) else EXIT_INVALID


def make_parser():
    parser = _ArgumentParser(
        prog="qwt", description="Quad wavelet matrix indexes: build, query, bench."
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level.")
    commands = parser.add_subparsers(dest="command", required=True)

    build = commands.add_parser("build", help="Index a corpus file.")
    build.add_argument("input")
    build.add_argument("-o", "--output", required=True)
    build.add_argument("--geometry", type=int, choices=(256, 512))
    build.add_argument("--prefetch", action="store_true", help="Attach a rank predictor.")
    build.add_argument("--corrected", action="store_true", help="Add discriminant tables.")
    build.add_argument("--epsilon", type=int, help="Coarse predictor error budget.")
    build.add_argument("--fm", action="store_true", help="Index the BWT for pattern search.")
    build.add_argument("--limit", type=int, help="Read at most this many bytes.")
    build.add_argument("--config")
    build.set_defaults(func=cmd_build)

    query = commands.add_parser("query", help="Answer one query.")
    query.add_argument("index")
    query.add_argument("--kind", choices=QUERY_KINDS, required=True)
    query.add_argument("--pos", type=int, required=True, help="Position or occurrence index.")
    query.add_argument("--sym", help="Symbol as one character or an integer.")
    query.add_argument("--prefetch", action="store_true")
    query.set_defaults(func=cmd_query)

    bench = commands.add_parser("bench", help="Time a generated workload.")
    bench.add_argument("index")
    bench.add_argument("--kind", choices=QUERY_KINDS, required=True)
    bench.add_argument("--count", type=int)
    bench.add_argument("--seed", type=int)
    bench.add_argument("--chained", action="store_true", help="Latency mode.")
    bench.add_argument("--reps", type=int)
    bench.add_argument("--format", choices=("json", "csv"), default="json")
    bench.add_argument("--prefetch", action="store_true")
    bench.add_argument("--oracle", choices=("binwm",))
    bench.add_argument("--compare-prefetch", action="store_true")
    bench.add_argument("--config")
    bench.set_defaults(func=cmd_bench)

    stats = commands.add_parser("stats", help="Print the space breakdown.")
    stats.add_argument("index")
    stats.set_defaults(func=cmd_stats)

    search = commands.add_parser("search", help="Count pattern occurrences.")
    search.add_argument("index")
    search.add_argument("--pattern", required=True)
    search.set_defaults(func=cmd_search)

    selftest = commands.add_parser("selftest", help="Run the golden and oracle checks.")
    selftest.add_argument("--full", action="store_true", help="Use acceptance sizes.")
    selftest.add_argument("--seed", type=int, default=0)
    selftest.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    """Entry point of the ``qwt`` command; returns the exit code."""
    args = make_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
    )
    log = logging.getLogger("qwt")
    try:
        return args.func(args)
    except (ValueError, IndexError, LookupError, ChecksumMismatchError) as error:
        log.error("%s: %s", args.command, error)
        return EXIT_INVALID
    except OSError as error:
        log.error("%s: %s", args.command, error)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
