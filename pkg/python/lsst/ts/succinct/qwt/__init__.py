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

try:
    from .version import *
except ModuleNotFoundError:
    __version__ = "?"

from .broadword import *
from .space import *
from .bitvec import *
from .quadvec import *
from .alphabet import *
from .binwm import *
from .predictor import *
from .qwm import *
from .search import *
from .index_file import *
from .helpers import *
from .parameters import *
from .workload import *
from .bench import *
from .selftest import *
