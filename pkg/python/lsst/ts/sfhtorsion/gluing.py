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

__all__ = [
    "GluingError",
    "GluingData",
    "GluingMap",
    "ChainMapReport",
    "InequalityReport",
    "load_gluing_data",
    "gluing_into_union",
    "induced_map",
    "verify_filtered_chain_map",
    "at_inequality_check",
]

import dataclasses
import logging

import numpy as np

from .config_schema import GLUING_MAP_SCHEMA
from .diagram import QUADRANTS, DiagramError, disjoint_union, eh_generator, enumerate_generators
from .disks import DiskCountError, enumerate_disks, split_differential
from .domains import Domain
from .filtered_complex import ComplexError, from_diagram
from .torsion import algebraic_torsion, verify_witness
from .utils.f2_linalg import bit_indices
from .utils.input_files import load_json_file


class GluingError(ValueError):
    """A gluing map is malformed or its preconditions fail."""


@dataclasses.dataclass(frozen=True)
class GluingData:
    """Embedding of a sub-diagram into an ambient diagram.

    Attributes
    ----------
    sub : `HeegaardDiagram`
        The sub-diagram.
    ambient : `HeegaardDiagram`
        The diagram it is glued into.
    alpha : `dict` [`int`, `int`]
        Alpha curve index map.
    beta : `dict` [`int`, `int`]
        Beta curve index map.
    points : `dict` [`str`, `str`]
        Point id map.
    regions : `dict` [`str`, `str`]
        Region id map. Regions of ``sub`` touching the suture may be left
        out; the gluing cuts them.
    xprime : `tuple` [`str`]
        Ambient points completing every image generator, one per alpha
        curve outside the image.
    """

    sub: object
    ambient: object
    alpha: dict
    beta: dict
    points: dict
    regions: dict
    xprime: tuple

    @classmethod
    def from_dict(cls, sub, ambient, data):
        """Build gluing data from the contents of a map file."""
        return cls(
            sub,
            ambient,
            {int(key): value for key, value in data["alpha"].items()},
            {int(key): value for key, value in data["beta"].items()},
            dict(data["points"]),
            dict(data["regions"]),
            tuple(data["xprime"]),
        )

    def to_dict(self):
        return {
            "alpha": {str(key): value for key, value in sorted(self.alpha.items())},
            "beta": {str(key): value for key, value in sorted(self.beta.items())},
            "points": dict(sorted(self.points.items())),
            "regions": dict(sorted(self.regions.items())),
            "xprime": list(self.xprime),
        }


def load_gluing_data(sub, ambient, path, log=None):
    """Read a gluing map file for the two diagrams.

    Raises
    ------
    lsst.ts.sfhtorsion.InputFileError
        If the file cannot be read or does not match the map format.
    """
    return GluingData.from_dict(sub, ambient, load_json_file(path, GLUING_MAP_SCHEMA, log=log))


def gluing_into_union(sub, complement, suffix="'"):
    """Gluing data of ``sub`` into its disjoint union with ``complement``.

    ``xprime`` is the contact generator of ``complement``.

    Raises
    ------
    GluingError
        If ``complement`` has no marked contact generator.
    """
    if complement.eh is None:
        raise GluingError("The complement needs a marked contact generator to serve as xprime.")
    ambient, renamed = disjoint_union(complement, sub, suffix=suffix)
    return GluingData(
        sub,
        ambient,
        dict(renamed["alpha"]),
        dict(renamed["beta"]),
        dict(renamed["points"]),
        dict(renamed["regions"]),
        tuple(complement.eh),
    )


@dataclasses.dataclass(frozen=True)
class GluingMap:
    """The map ``y -> (y, x')`` on generators, extended linearly.

    Attributes
    ----------
    sub_names : `tuple` [`str`]
        Generator names of the sub-diagram.
    ambient_names : `tuple` [`str`]
        Generator names of the ambient diagram.
    generator_map : `tuple` [`int`]
        Index of the image of each sub generator.
    """

    sub_names: tuple
    ambient_names: tuple
    generator_map: tuple

    def apply_vector(self, vector):
        result = 0
        for i in bit_indices(vector):
            result ^= 1 << self.generator_map[i]
        return result

    def apply_element(self, element):
        """Apply the map level by level."""
        return tuple(self.apply_vector(vector) for vector in element)

    def image_name(self, name):
        return self.ambient_names[self.generator_map[self.sub_names.index(name)]]


def induced_map(g):
    """Generator map of a gluing.

    Raises
    ------
    GluingError
        If ``xprime`` does not complete some sub generator to an ambient
        generator.
    """
    sub_generators = enumerate_generators(g.sub)
    ambient_generators = enumerate_generators(g.ambient)
    ambient_index = {generator.points: i for i, generator in enumerate(ambient_generators)}
    generator_map = []
    for generator in sub_generators:
        try:
            points = [g.points[point_id] for point_id in generator.points] + list(g.xprime)
            image = g.ambient.make_generator(points)
        except (DiagramError, KeyError) as e:
            raise GluingError(
                f"xprime {list(g.xprime)} does not complete generator {generator}: {e}"
            ) from None
        generator_map.append(ambient_index[image.points])
    return GluingMap(
        tuple(generator.name for generator in sub_generators),
        tuple(generator.name for generator in ambient_generators),
        tuple(generator_map),
    )


def _is_rotation(first, second):
    if len(first) != len(second):
        return False
    if not first:
        return True
    doubled = list(second) + list(second)
    return any(doubled[i : i + len(first)] == list(first) for i in range(len(second)))


def _check_embedding(g):
    """Incidence violations of the embedding, as messages."""
    violations = []
    sub, ambient = g.sub, g.ambient
    for kind, mapping, count, target_count in (
        ("alpha", g.alpha, sub.num_alpha, ambient.num_alpha),
        ("beta", g.beta, sub.num_beta, ambient.num_beta),
    ):
        if sorted(mapping) != list(range(count)):
            violations.append(f"The {kind} map does not cover the {count} {kind} curves of the sub-diagram.")
        if len(set(mapping.values())) != len(mapping) or any(
            not 0 <= value < target_count for value in mapping.values()
        ):
            violations.append(f"The {kind} map is not an injection into the ambient {kind} curves.")
    if set(g.points) != set(sub.points):
        violations.append("The point map does not cover the points of the sub-diagram.")
    if len(set(g.points.values())) != len(g.points) or not set(g.points.values()) <= set(ambient.points):
        violations.append("The point map is not an injection into the ambient points.")
    if not set(g.regions) <= set(sub.regions) or not set(g.regions.values()) <= set(ambient.regions):
        violations.append("The region map names unknown regions.")
    if len(set(g.regions.values())) != len(g.regions):
        violations.append("The region map is not injective.")
    for point_id in g.xprime:
        if point_id not in ambient.points:
            violations.append(f"xprime point {point_id!r} is not an ambient point.")
        elif point_id in set(g.points.values()):
            violations.append(f"xprime point {point_id!r} lies in the image of the sub-diagram.")
    if violations:
        return violations

    for point in sub.points.values():
        image = ambient.points[g.points[point.id]]
        if image.alpha != g.alpha[point.alpha] or image.beta != g.beta[point.beta]:
            violations.append(f"Point {point.id!r} maps to {image.id!r} on different curves.")
        for quadrant in QUADRANTS:
            region_id = point.region(quadrant)
            if region_id in g.regions:
                if image.region(quadrant) != g.regions[region_id]:
                    violations.append(
                        f"Quadrant {quadrant} of point {point.id!r} is region {region_id!r}, "
                        f"but its image lies in {image.region(quadrant)!r}."
                    )
            elif not sub.region(region_id).on_boundary:
                violations.append(f"Region {region_id!r} away from the suture is not mapped.")

    image_points = set(g.points.values())
    for kind, mapping in (("alpha", g.alpha), ("beta", g.beta)):
        for curve in sub.curves(kind):
            target = ambient.curves(kind)[mapping[curve.index]]
            mapped = [g.points[point_id] for point_id in curve.points]
            seen = [point_id for point_id in target.points if point_id in image_points]
            if not _is_rotation(mapped, seen):
                violations.append(f"The points of {kind} curve {curve.index} do not keep their order.")

    for region_id, image_id in g.regions.items():
        region, image = sub.region(region_id), ambient.region(image_id)
        corners = [(g.points[point_id], quadrant) for point_id, quadrant in region.corners]
        kinds = [(item.chi, item.basepoints, item.on_boundary) for item in (region, image)]
        if kinds[0] != kinds[1]:
            violations.append(f"Region {region_id!r} and its image {image_id!r} differ in type.")
        elif not _is_rotation(corners, image.corners):
            violations.append(f"Region {region_id!r} and its image {image_id!r} have different corners.")
    return violations


@dataclasses.dataclass
class ChainMapReport:
    """Result of `verify_filtered_chain_map`.

    The complexes and the map are kept for further checks but are not part
    of `to_dict`.
    """

    incidence_violations: list = dataclasses.field(default_factory=list)
    unmatched_super_disks: list = dataclasses.field(default_factory=list)
    unmatched_sub_disks: list = dataclasses.field(default_factory=list)
    jplus_mismatches: list = dataclasses.field(default_factory=list)
    commutation_failures: list = dataclasses.field(default_factory=list)
    gluing_map: GluingMap = None
    sub_complex: object = None
    super_complex: object = None

    @property
    def ok(self):
        return not (
            self.incidence_violations
            or self.unmatched_super_disks
            or self.unmatched_sub_disks
            or self.jplus_mismatches
            or self.commutation_failures
        )

    def to_dict(self):
        return {
            "incidence_violations": list(self.incidence_violations),
            "unmatched_super_disks": list(self.unmatched_super_disks),
            "unmatched_sub_disks": list(self.unmatched_sub_disks),
            "jplus_mismatches": list(self.jplus_mismatches),
            "commutation_failures": list(self.commutation_failures),
            "ok": self.ok,
        }


def _disk_record(disk):
    return {
        "from": disk.source.name,
        "to": disk.target.name,
        "name": disk.name,
        "shape": disk.shape,
        "jplus": disk.j_plus,
    }


def _compare_disks(g, sub_disks, ambient_disks, report):
    inverse_points = {value: key for key, value in g.points.items()}
    inverse_regions = {value: key for key, value in g.regions.items()}
    xprime = set(g.xprime)

    def pull_back(generator):
        # Sub generator points of an image generator, or None.
        if not xprime <= set(generator.points):
            return None
        rest = [point_id for point_id in generator.points if point_id not in xprime]
        if not all(point_id in inverse_points for point_id in rest):
            return None
        return tuple(sorted(inverse_points[point_id] for point_id in rest))

    sub_by_points = dict()
    for disk in sub_disks:
        key = (tuple(sorted(disk.source.points)), tuple(sorted(disk.target.points)))
        sub_by_points.setdefault(key, []).append(disk)

    matched = set()
    for disk in ambient_disks:
        source = pull_back(disk.source)
        if source is None:
            continue
        target = pull_back(disk.target)
        regions = disk.domain.as_dict()
        if target is None or not all(region_id in inverse_regions for region_id in regions):
            report.unmatched_super_disks.append(_disk_record(disk))
            continue
        domain = Domain.from_dict({inverse_regions[region_id]: value for region_id, value in regions.items()})
        candidates = [
            candidate for candidate in sub_by_points.get((source, target), []) if candidate.domain == domain
        ]
        if not candidates:
            report.unmatched_super_disks.append(_disk_record(disk))
            continue
        matched.add(id(candidates[0]))
        if candidates[0].j_plus != disk.j_plus:
            report.jplus_mismatches.append(
                {"sub": _disk_record(candidates[0]), "super": _disk_record(disk)}
            )
    for disk in sub_disks:
        if id(disk) not in matched:
            report.unmatched_sub_disks.append(_disk_record(disk))


def _check_commutation(phi, sub_fc, super_fc, report, sample_size, seed):
    levels = max(len(sub_fc.matrices), len(super_fc.matrices))
    for r in range(levels):
        for i, name in enumerate(sub_fc.names):
            vector = 1 << i
            image = phi.apply_vector(sub_fc.apply_matrix(r, vector))
            if image != super_fc.apply_matrix(r, phi.apply_vector(vector)):
                report.commutation_failures.append({"level": r, "generator": name})
    rng = np.random.default_rng(seed)
    for sample in range(sample_size):
        element = tuple(
            int(sum(1 << int(i) for i in np.flatnonzero(rng.integers(0, 2, sub_fc.num_generators))))
            for _ in range(levels + 1)
        )
        if phi.apply_element(sub_fc.apply_total(element)) != super_fc.apply_total(phi.apply_element(element)):
            report.commutation_failures.append({"level": "total", "sample": sample})


def _complex_of(d, disks, log):
    eh = eh_generator(d) if d.eh is not None else None
    try:
        return from_diagram(split_differential(d, disks=disks, log=log), eh, log=log)
    except ComplexError as e:
        raise GluingError(f"Cannot build the complex: {e}") from e


def verify_filtered_chain_map(g, sample_size=32, seed=0, log=None):
    """Check that a gluing map is a filtered chain map.

    Checks the embedding, then compares disks: every ambient disk leaving
    an image generator must be the image of a sub disk with the same J+,
    every sub disk must reappear, and the map must commute with every
    ``∂_r``. Commutation with the total differential is also spot checked
    on ``sample_size`` random elements.

    Parameters
    ----------
    g : `GluingData`
        The gluing.
    sample_size : `int`, optional
        Number of random elements.
    seed : `int`, optional
        Seed of the random elements.
    log : `logging.Logger`, optional
        Logger.

    Returns
    -------
    report : `ChainMapReport`
        Violations found.

    Raises
    ------
    GluingError
        If a diagram is not nice or not admissible, or ``xprime`` does not
        complete the sub generators.
    """
    log = log or logging.getLogger(__name__)
    report = ChainMapReport(incidence_violations=_check_embedding(g))
    if report.incidence_violations:
        log.info("Embedding has %d incidence violations.", len(report.incidence_violations))
        return report
    try:
        sub_disks = enumerate_disks(g.sub, log=log)
        ambient_disks = enumerate_disks(g.ambient, log=log)
    except DiskCountError as e:
        raise GluingError(f"Disks cannot be counted: {e}") from e
    report.gluing_map = induced_map(g)
    _compare_disks(g, sub_disks, ambient_disks, report)
    report.sub_complex = _complex_of(g.sub, sub_disks, log)
    report.super_complex = _complex_of(g.ambient, ambient_disks, log)
    _check_commutation(report.gluing_map, report.sub_complex, report.super_complex, report, sample_size, seed)
    log.info("Gluing map check %s.", "passed" if report.ok else "failed")
    return report


@dataclasses.dataclass(frozen=True)
class InequalityReport:
    """Result of `at_inequality_check`.

    Attributes
    ----------
    sub : `ATReport`
        Torsion of the sub complex.
    ambient : `ATReport`
        Torsion of the ambient complex.
    verdict : `str`
        ``"holds"``, ``"violated"`` or ``"inconclusive"``.
    transported_witness : `tuple` [`int`] or `None`
        Image of the sub witness.
    transported_ok : `bool` or `None`
        True if the transported witness bounds the ambient contact class.
    """

    sub: object
    ambient: object
    verdict: str
    transported_witness: tuple
    transported_ok: bool

    def to_dict(self, sub_fc, super_fc):
        return {
            "sub": self.sub.to_dict(sub_fc),
            "super": self.ambient.to_dict(super_fc),
            "verdict": self.verdict,
            "transported_witness": (
                None
                if self.transported_witness is None
                else super_fc.element_to_json(self.transported_witness)
            ),
            "transported_ok": self.transported_ok,
        }


def _verdict(sub_report, super_report):
    if sub_report.value == "infinity":
        return "holds"
    if super_report.value == "infinity":
        return "violated" if sub_report.is_finite else "inconclusive"
    if not sub_report.is_finite or not super_report.is_finite:
        return "inconclusive"
    return "holds" if sub_report.value >= super_report.value else "violated"


def at_inequality_check(sub_fc, super_fc, phi, cap=64, exact=False, backend="iterative", log=None):
    """Compare the torsion of a sub complex with that of the ambient one.

    Parameters
    ----------
    sub_fc : `FilteredComplex`
        Complex of the sub-diagram.
    super_fc : `FilteredComplex`
        Complex of the ambient diagram.
    phi : `GluingMap`
        The gluing map.
    cap, exact, backend
        Passed to `algebraic_torsion`.
    log : `logging.Logger`, optional
        Logger.

    Returns
    -------
    report : `InequalityReport`
        Both values, the verdict and the transported witness.

    Raises
    ------
    GluingError
        If the map does not send the sub contact generator to the ambient
        one.
    """
    log = log or logging.getLogger(__name__)
    if sub_fc.eh is None or super_fc.eh is None:
        raise GluingError("Both complexes need a contact generator.")
    if phi.apply_vector(sub_fc.eh_vector) != super_fc.eh_vector:
        raise GluingError(
            f"The gluing map sends {sub_fc.eh} to {phi.image_name(sub_fc.eh)}, not to {super_fc.eh}."
        )
    sub_report = algebraic_torsion(sub_fc, cap=cap, exact=exact, backend=backend, window=None, log=log)
    super_report = algebraic_torsion(super_fc, cap=cap, exact=exact, backend=backend, window=None, log=log)
    transported, transported_ok = None, None
    if sub_report.witness is not None:
        transported = phi.apply_element(sub_report.witness)
        transported_ok = verify_witness(super_fc, super_fc.eh_vector, transported)
    verdict = _verdict(sub_report, super_report)
    log.info(
        "AT(sub) = %s, AT(super) = %s: inequality %s.",
        sub_report.display_value(),
        super_report.display_value(),
        verdict,
    )
    return InequalityReport(sub_report, super_report, verdict, transported, transported_ok)
