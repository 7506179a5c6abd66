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

__all__ = ["SpaceReport"]


class SpaceReport(object):
    """Bit accounting of a succinct structure.

    Parameters
    ----------
    data_bits : `int`
        Bits of payload (``n`` for bit vectors, ``2n`` for quad vectors).
    counter_bits : `int`
        Bits of rank directories.
    select_bits : `int`
        Bits of select samples.
    predictor_bits : `int`, optional
        Bits of attached rank predictors.
    """

    def __init__(self, data_bits=0, counter_bits=0, select_bits=0, predictor_bits=0):
        self.data_bits = int(data_bits)
        self.counter_bits = int(counter_bits)
        self.select_bits = int(select_bits)
        self.predictor_bits = int(predictor_bits)

    def __add__(self, other):
        return SpaceReport(
            self.data_bits + other.data_bits,
            self.counter_bits + other.counter_bits,
            self.select_bits + other.select_bits,
            self.predictor_bits + other.predictor_bits,
        )

    def __eq__(self, other):
        if not isinstance(other, SpaceReport):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self):
        return (
            "SpaceReport(data_bits={}, counter_bits={}, select_bits={}, "
            "predictor_bits={})".format(
                self.data_bits, self.counter_bits, self.select_bits, self.predictor_bits
            )
        )

    @property
    def total_bits(self):
        """int: Sum of every accounted field."""
        return self.data_bits + self.counter_bits + self.select_bits + self.predictor_bits

    def _percent(self, bits):
        if self.data_bits == 0:
            return 0.0
        return 100.0 * bits / self.data_bits

    @property
    def counter_overhead(self):
        """float: Counter bits as a percentage of data bits."""
        return self._percent(self.counter_bits)

    @property
    def select_overhead(self):
        """float: Select-sample bits as a percentage of data bits."""
        return self._percent(self.select_bits)

    @property
    def predictor_overhead(self):
        """float: Predictor bits as a percentage of data bits."""
        return self._percent(self.predictor_bits)

    def to_dict(self):
        """Return the report as a plain `dict` for JSON output."""
        return {
            "data_bits": self.data_bits,
            "counter_bits": self.counter_bits,
            "select_bits": self.select_bits,
            "predictor_bits": self.predictor_bits,
            "total_bits": self.total_bits,
            "counter_overhead_pct": self.counter_overhead,
            "select_overhead_pct": self.select_overhead,
            "predictor_overhead_pct": self.predictor_overhead,
        }
