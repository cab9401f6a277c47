# This file is part of ts_sfh_torsion.
#
# Developed for the Vera C. Rubin Observatory Telescope and Site Systems.
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
# along with this program.  If not, see <https://www.gnu.org/licenses/>.

try:
    from .version import *
except ModuleNotFoundError:
    __version__ = "?"

from .backends import *
from .config_schema import *
from .diagram import *
from .disks import *
from .domains import *
from .filtered_complex import *
from .gluing import *
from .mock_diagrams import *
from .open_book import *
from .sfhtorsion_app import *
from .torsion import *
from .utils import *
