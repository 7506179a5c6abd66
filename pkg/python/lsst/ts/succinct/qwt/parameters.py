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
import os

from .helpers import read_conf_file
from .quadvec import Geometry

__all__ = ["QwtParameters"]


class QwtParameters(object):
    """Collects the configuration of index builds, prefetching, the
    benchmark harness and the search index.

    Parameters
    ----------
    log_level : `int`, optional
        Level used for the configure messages. Default is logging.DEBUG.
    """

    def __init__(self, log_level=logging.DEBUG):
        self.log = logging.getLogger("QwtParameters")
        self.log_level = log_level

        self.geometry = Geometry.SB4096_B512

        self.coarse_epsilon = 4096
        self.fine_epsilon = 256
        self.cache_line_bits = 512
        self.max_prefetch_lines = 10

        self.bench_count = 1000000
        self.bench_repetitions = 10
        self.bench_seed = 42
        self.hardware_env = "QWT_HARDWARE"

        self.max_text_bytes = 64 * 1024 * 1024

    @classmethod
    def get_configure_dict(cls):
        """Get the packaged default configuration.

        Returns
        -------
        `dict`
            The configuration dictionary.
        """
        conf_file = os.path.join(os.path.dirname(__file__), "qwt.conf")
        return read_conf_file(conf_file)

    def configure_from_module(self, conf_file=None):
        """Apply the packaged defaults, then ``conf_file`` on top.

        Parameters
        ----------
        conf_file : `str`, optional
            User configuration; only the keys it sets are overridden.
        """
        confdict = self.get_configure_dict()
        if conf_file is not None:
            for section, values in read_conf_file(conf_file).items():
                confdict[section].update(values)
        self.configure(confdict)

    def configure(self, confdict):
        """Configure every section present in ``confdict``."""
        for section in ("quadvector", "predictor", "bench", "search"):
            if section in confdict:
                getattr(self, "configure_" + section)(confdict)

    def configure_quadvector(self, confdict):
        """Configure the quad vector layout.

        Parameters
        ----------
        confdict : `dict`
            Must hold ``quadvector.block_size`` (512 or 256).
        """
        self.geometry = Geometry.from_block_size(confdict["quadvector"]["block_size"])
        self.log.log(self.log_level, "configure_quadvector: geometry=%s", self.geometry.name)

    def configure_predictor(self, confdict):
        """Configure the rank predictors and the prefetch planner.

        Parameters
        ----------
        confdict : `dict`
            The ``predictor`` section.

        Raises
        ------
        ValueError
            An error budget is odd or below 2, or a size is not positive.
        """
        section = confdict["predictor"]
        for key in ("coarse_epsilon", "fine_epsilon"):
            value = section[key]
            if not isinstance(value, int) or value < 2 or value % 2:
                raise ValueError("{} must be an even integer >= 2, got {}.".format(key, value))
        if section["cache_line_bits"] < 64 or section["max_prefetch_lines"] < 0:
            raise ValueError("Invalid cache line size or prefetch cap.")
        self.coarse_epsilon = section["coarse_epsilon"]
        self.fine_epsilon = section["fine_epsilon"]
        self.cache_line_bits = section["cache_line_bits"]
        self.max_prefetch_lines = section["max_prefetch_lines"]
        self.log.log(
            self.log_level,
            "configure_predictor: coarse_epsilon=%d fine_epsilon=%d "
            "cache_line_bits=%d max_prefetch_lines=%d",
            self.coarse_epsilon,
            self.fine_epsilon,
            self.cache_line_bits,
            self.max_prefetch_lines,
        )

    def configure_bench(self, confdict):
        """Configure the benchmark defaults.

        Parameters
        ----------
        confdict : `dict`
            The ``bench`` section.
        """
        section = confdict["bench"]
        self.bench_count = section["count"]
        self.bench_repetitions = section["repetitions"]
        self.bench_seed = section["seed"]
        try:
            self.hardware_env = section["hardware_env"]
        except KeyError:
            self.hardware_env = "QWT_HARDWARE"
        if self.bench_count < 1 or self.bench_repetitions < 1:
            raise ValueError("Bench count and repetitions must be positive.")
        self.log.log(
            self.log_level,
            "configure_bench: count=%d repetitions=%d seed=%d",
            self.bench_count,
            self.bench_repetitions,
            self.bench_seed,
        )

    def configure_search(self, confdict):
        """Configure the search index.

        Parameters
        ----------
        confdict : `dict`
            The ``search`` section.
        """
        self.max_text_bytes = int(confdict["search"]["max_text_bytes"])
        self.log.log(self.log_level, "configure_search: max_text_bytes=%d", self.max_text_bytes)
