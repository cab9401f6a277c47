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

__all__ = ["UNVERIFIED_BANNER", "ComplexError", "FilteredComplex", "from_diagram", "from_fixture"]

import collections
import dataclasses
import functools
import logging

import jsonschema

from .config_schema import COMPLEX_SCHEMA
from .diagram import DiagramError, permutation_cycles
from .utils.conversion import (
    format_generator_shorthand,
    names_to_vector,
    parse_generator_shorthand,
    vector_to_names,
)
from .utils.f2_linalg import convolution_failures, f2_apply
from .utils.input_files import DefaultingValidator, load_json_file

UNVERIFIED_BANNER = "unverified complex: loaded from a fixture, the square of the differential is not checked"
"""Banner carried by reports on complexes read from fixtures."""


class ComplexError(ValueError):
    """A filtered complex is malformed.

    Parameters
    ----------
    message : `str`
        Error message.
    level : `int`, optional
        Level ``n`` at which ``Σ_{i+j=n} ∂_i ∂_j`` is nonzero, if that is
        the problem.
    """

    def __init__(self, message, level=None):
        super().__init__(message)
        self.level = level


@dataclasses.dataclass(frozen=True)
class FilteredComplex:
    """A J+ filtered complex over F2.

    Elements of the filtered complex are sequences ``(c_0, c_1, ...)`` of
    F2 vectors (bitsets over generator indices), given as tuples or lists
    with finite length.

    Attributes
    ----------
    names : `tuple` [`str`]
        Generator names.
    matrices : `tuple` [`tuple` [`int`]]
        ``matrices[r][j]`` is ``∂_r`` of generator ``j`` as a bitset.
    eh : `str` or `None`
        Name of the contact generator.
    cycles : `tuple`
        ``|x|`` of each generator, `None` where unknown.
    provenance : `str`
        ``"from_diagram"`` or ``"fixture"``.
    verified : `bool`
        True if the convolution identities were checked.
    disks : `tuple` [`dict`]
        Disk records (``from``, ``to``, ``jplus`` and optional ``shape``
        and ``name``) for reports.
    """

    names: tuple
    matrices: tuple
    eh: str = None
    cycles: tuple = None
    provenance: str = "fixture"
    verified: bool = False
    disks: tuple = ()

    @functools.cached_property
    def index(self):
        """Position of each generator name."""
        return {name: i for i, name in enumerate(self.names)}

    @property
    def num_generators(self):
        return len(self.names)

    @property
    def max_level(self):
        """Largest ``r`` of a stored ``∂_r``."""
        return len(self.matrices) - 1

    @property
    def eh_vector(self):
        if self.eh is None:
            return 0
        return 1 << self.index[self.eh]

    def matrix(self, r):
        """Columns of ``∂_r``; zero above the top level."""
        if 0 <= r < len(self.matrices):
            return self.matrices[r]
        return (0,) * self.num_generators

    def apply_matrix(self, r, vector):
        """``∂_r`` applied to an F2 vector."""
        if r < 0 or r >= len(self.matrices):
            return 0
        return f2_apply(self.matrices[r], vector)

    def apply_total(self, element):
        """Apply the total differential.

        Component ``j`` of the result is ``Σ_i ∂_i c_{i+j}``; the result
        has the same length as ``element``.
        """
        element = list(element)
        result = []
        for j in range(len(element)):
            value = 0
            for i in range(min(len(self.matrices), len(element) - j)):
                value ^= self.apply_matrix(i, element[i + j])
            result.append(value)
        return tuple(result)

    def apply_undivided(self, vector):
        """``∂_0 + ∂_1 + ...`` applied to a single vector."""
        value = 0
        for r in range(len(self.matrices)):
            value ^= self.apply_matrix(r, vector)
        return value

    def is_cycle(self, vector):
        """True if every ``∂_r`` kills ``vector``."""
        return all(self.apply_matrix(r, vector) == 0 for r in range(len(self.matrices)))

    def convolution_failures(self):
        return convolution_failures([list(matrix) for matrix in self.matrices])

    def vector(self, names):
        """F2 vector of a list of generator names (repeats cancel).

        Raises
        ------
        ComplexError
            If a name is unknown.
        """
        try:
            return names_to_vector([_canonical_name(name) for name in names], self.index)
        except KeyError as e:
            raise ComplexError(e.args[0]) from None

    def names_of(self, vector):
        """Generator names in the support of ``vector``."""
        return vector_to_names(vector, self.names)

    def element_to_json(self, element):
        """Element as a list of lists of generator names."""
        return [self.names_of(vector) for vector in element]

    def relabel(self, permutation):
        """Return the same complex with generator ``i`` moved to position
        ``permutation[i]``.
        """
        if sorted(permutation) != list(range(self.num_generators)):
            raise ComplexError(f"{list(permutation)} is not a permutation of the generators.")

        def move(vector):
            result = 0
            for i, target in enumerate(permutation):
                if vector >> i & 1:
                    result |= 1 << target
            return result

        names = [None] * self.num_generators
        cycles = None if self.cycles is None else [None] * self.num_generators
        for i, target in enumerate(permutation):
            names[target] = self.names[i]
            if cycles is not None:
                cycles[target] = self.cycles[i]
        matrices = []
        for matrix in self.matrices:
            columns = [0] * self.num_generators
            for i, target in enumerate(permutation):
                columns[target] = move(matrix[i])
            matrices.append(tuple(columns))
        return dataclasses.replace(
            self,
            names=tuple(names),
            matrices=tuple(matrices),
            cycles=None if cycles is None else tuple(cycles),
        )


def _canonical_name(name):
    try:
        return format_generator_shorthand(parse_generator_shorthand(name))
    except ValueError:
        return name


def from_diagram(sd, eh=None, log=None):
    """Build the filtered complex of a split differential.

    Parameters
    ----------
    sd : `SplitDifferential`
        Differential computed from a diagram.
    eh : `Generator`, optional
        Contact generator.
    log : `logging.Logger`, optional
        Logger.

    Raises
    ------
    ComplexError
        If ``Σ_{i+j=n} ∂_i ∂_j`` is nonzero for some ``n`` (reported as the
        ``level`` attribute) or ``eh`` is not a cycle.
    """
    log = log or logging.getLogger(__name__)
    failures = sd.convolution_failures()
    if failures:
        raise ComplexError(
            f"The differential does not square to zero: Σ_(i+j=n) ∂_i ∂_j ≠ 0 for n = {failures[0]}.",
            level=failures[0],
        )
    fc = FilteredComplex(
        names=sd.names,
        matrices=sd.matrices,
        eh=None if eh is None else eh.name,
        cycles=tuple(generator.cycles for generator in sd.generators),
        provenance="from_diagram",
        verified=True,
        disks=tuple(
            {
                "from": disk.source.name,
                "to": disk.target.name,
                "jplus": disk.j_plus,
                "shape": disk.shape,
                "name": disk.name,
            }
            for disk in sd.disks
        ),
    )
    if eh is not None and not fc.is_cycle(fc.eh_vector):
        raise ComplexError(f"Contact generator {eh.name} is not a cycle.")
    log.debug("Built complex with %d generators and %d levels.", fc.num_generators, len(fc.matrices))
    return fc


def _fixture_cycles(item):
    cycles = item.get("cycles")
    if "beta" not in item:
        return cycles
    try:
        computed = permutation_cycles([index - 1 for index in item["beta"]])
    except DiagramError as e:
        raise ComplexError(f"Generator {item['name']}: {e}") from None
    if cycles is not None and cycles != computed:
        raise ComplexError(
            f"Generator {item['name']}: cycles {cycles} does not match {computed} computed from beta."
        )
    return computed


def _expected_j_plus(shape, source_cycles, target_cycles):
    # 2(n_x + n_y) is 1 for a bigon and 2 for a rectangle
    corner_measure = 1 if shape == "bigon" else 2
    return corner_measure - 1 + source_cycles - target_cycles


def from_fixture(source, log=None):
    """Read a complex-level fixture.

    Parameters
    ----------
    source : `str`, `pathlib.Path` or `dict`
        Fixture file, or its already parsed contents.
    log : `logging.Logger`, optional
        Logger.

    Returns
    -------
    fc : `FilteredComplex`
        Complex with exactly the listed disks, flagged unverified.

    Raises
    ------
    ComplexError
        If the fixture names an unknown or duplicate generator, has
        inconsistent cycle data, or a disk whose J+ contradicts its shape
        and cycle counts.
    lsst.ts.sfhtorsion.utils.InputFileError
        If the file cannot be parsed.
    """
    log = log or logging.getLogger(__name__)
    if isinstance(source, dict):
        try:
            data = DefaultingValidator(COMPLEX_SCHEMA).validate(source)
        except jsonschema.ValidationError as e:
            raise ComplexError(f"Invalid fixture: {e.message}") from e
    else:
        data = load_json_file(source, COMPLEX_SCHEMA, log=log)

    names = [_canonical_name(item["name"]) for item in data["generators"]]
    duplicates = sorted(name for name, count in collections.Counter(names).items() if count > 1)
    if duplicates:
        raise ComplexError(f"Generators listed more than once: {duplicates}.")
    index = {name: i for i, name in enumerate(names)}
    cycles = tuple(_fixture_cycles(item) for item in data["generators"])

    eh = _canonical_name(data["eh"])
    if eh not in index:
        raise ComplexError(f"Contact generator {eh!r} is not a listed generator.")

    counts = collections.Counter()
    records = dict()
    for item in data["disks"]:
        source_name, target_name = _canonical_name(item["from"]), _canonical_name(item["to"])
        for name in (source_name, target_name):
            if name not in index:
                raise ComplexError(f"Disk {source_name} -> {target_name} names unknown generator {name!r}.")
        j_plus = item["jplus"]
        shape = item.get("shape")
        source_cycles, target_cycles = cycles[index[source_name]], cycles[index[target_name]]
        if shape is not None and source_cycles is not None and target_cycles is not None:
            expected = _expected_j_plus(shape, source_cycles, target_cycles)
            if expected != j_plus:
                raise ComplexError(
                    f"Disk {item.get('name', '')} {source_name} -> {target_name}: "
                    f"jplus {j_plus} but a {shape} between these generators has J+ = {expected}."
                )
        key = (source_name, target_name, j_plus)
        counts[key] += 1
        record = {"from": source_name, "to": target_name, "jplus": j_plus}
        for field in ("shape", "name"):
            if field in item:
                record[field] = item[field]
        records.setdefault(key, []).append(record)

    max_level = max((key[2] // 2 for key in counts), default=0)
    matrices = [[0] * len(names) for _ in range(max_level + 1)]
    disks = []
    for key, count in counts.items():
        source_name, target_name, j_plus = key
        if count % 2 == 0:
            log.warning(
                "Disk %s -> %s with J+ %d is listed %d times and cancels mod 2.",
                source_name,
                target_name,
                j_plus,
                count,
            )
            continue
        if count > 1:
            log.warning(
                "Disk %s -> %s with J+ %d is listed %d times.", source_name, target_name, j_plus, count
            )
        matrices[j_plus // 2][index[source_name]] ^= 1 << index[target_name]
        disks.append(records[key][0])
    while len(matrices) > 1 and not any(matrices[-1]):
        matrices.pop()

    fc = FilteredComplex(
        names=tuple(names),
        matrices=tuple(tuple(matrix) for matrix in matrices),
        eh=eh,
        cycles=cycles,
        provenance="fixture",
        verified=False,
        disks=tuple(disks),
    )
    log.warning("%s.", UNVERIFIED_BANNER.capitalize())
    return fc
