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
    "TorsionError",
    "PageTable",
    "ATReport",
    "available_backends",
    "page_dimension",
    "page_table",
    "verify_witness",
    "in_boundary_depth",
    "boundary_threshold",
    "decide_infinity",
    "algebraic_torsion",
]

import dataclasses
import logging

from . import backends
from .filtered_complex import UNVERIFIED_BANNER
from .utils.f2_linalg import f2_kernel_basis, f2_rank

available_backends = {
    "iterative": backends.IterativeBackend,
    "exact": backends.ExactBackend,
}

DEFAULT_WINDOW = (8, 8)
"""Default ``(r_max, p_max)`` window for page dimensions."""


class TorsionError(ValueError):
    """The torsion of a complex cannot be computed as asked."""


@dataclasses.dataclass(frozen=True)
class PageTable:
    """Dimensions of ``E^r_p`` for ``0 <= r <= r_max``, ``0 <= p <= p_max``.

    Attributes
    ----------
    dimensions : `tuple` [`tuple` [`int`]]
        ``dimensions[r][p]``.
    """

    dimensions: tuple

    @property
    def r_max(self):
        return len(self.dimensions) - 1

    @property
    def p_max(self):
        return len(self.dimensions[0]) - 1 if self.dimensions else -1

    def __getitem__(self, rp):
        r, p = rp
        return self.dimensions[r][p]

    def to_dict(self):
        return {
            "r_max": self.r_max,
            "p_max": self.p_max,
            "dimensions": [list(row) for row in self.dimensions],
        }


@dataclasses.dataclass(frozen=True)
class ATReport:
    """Result of `algebraic_torsion`.

    Attributes
    ----------
    value : `int` or `str`
        The torsion ``k``, ``"infinity"`` or ``"undetermined"``.
    witness : `tuple` [`int`] or `None`
        Chain ``(c_0, ..., c_k)`` with ``∂̂ c = (EH, 0, ..., 0)`` when
        ``value`` is finite.
    page_table : `PageTable` or `None`
        Page dimensions.
    cap : `int`
        Largest ``k`` scanned.
    backend : `str`
        Backend used for the scan.
    status : `str`
        ``"within_cap"``, ``"beyond_cap"`` (found by the exact backend),
        ``"infinite"`` or ``"undetermined"``.
    banner : `str` or `None`
        Warning carried into reports, e.g. for fixture complexes.
    """

    value: object
    witness: tuple
    page_table: PageTable
    cap: int
    backend: str
    status: str
    banner: str = None

    @property
    def is_finite(self):
        return isinstance(self.value, int)

    def display_value(self):
        """Value as text: ``k``, ``∞`` or ``≥ cap+1 (undetermined)``."""
        if self.is_finite:
            return str(self.value)
        if self.value == "infinity":
            return "∞"
        return f"≥ {self.cap + 1} (undetermined)"

    def to_dict(self, fc):
        """JSON-ready dictionary; the witness is given in generator names
        of ``fc``.
        """
        return {
            "value": self.value,
            "display": self.display_value(),
            "status": self.status,
            "cap": self.cap,
            "backend": self.backend,
            "witness": None if self.witness is None else fc.element_to_json(self.witness),
            "page_table": None if self.page_table is None else self.page_table.to_dict(),
            "banner": self.banner,
        }


def _stack(element, ngens):
    vector = 0
    for m, component in enumerate(element):
        vector |= component << (m * ngens)
    return vector


def _unstack(vector, length, ngens):
    mask = (1 << ngens) - 1
    return tuple((vector >> (m * ngens)) & mask for m in range(length))


def _total_columns(fc, top, keep_from, keep_to):
    """Columns of ``∂̂`` on ``F_top`` keeping output levels in
    ``[keep_from, keep_to]``.
    """
    ngens = fc.num_generators
    columns = []
    for m in range(top + 1):
        for g in range(ngens):
            element = [0] * (top + 1)
            element[m] = 1 << g
            image = fc.apply_total(element)
            kept = [image[j] if keep_from <= j <= keep_to else 0 for j in range(top + 1)]
            columns.append(_stack(kept, ngens))
    return columns


def _cycles_basis(fc, k, p):
    """Basis of ``Z^k_p = {x in F_p : ∂̂ x in F_(p-k)}`` as stacked
    vectors.
    """
    if p < 0:
        return []
    columns = _total_columns(fc, p, max(p - k + 1, 0), p)
    return f2_kernel_basis(columns)


def _boundaries_basis(fc, k, p):
    """Spanning set of ``B^k_p = F_p ∩ ∂̂ F_(p+k)`` as stacked vectors over
    levels ``0..p``.
    """
    top = p + k
    if p < 0 or top < 0:
        return []
    ngens = fc.num_generators
    kernel = f2_kernel_basis(_total_columns(fc, top, p + 1, top))
    spanning = []
    for combination in kernel:
        image = fc.apply_total(_unstack(combination, top + 1, ngens))
        spanning.append(_stack(image[: p + 1], ngens))
    return spanning


def page_dimension(fc, r, p, window=DEFAULT_WINDOW):
    """Dimension of ``E^r_p = Z^r_p / (Z^(r-1)_(p-1) + B^(r-1)_p)``.

    Levels below 0 are zero (``F_(-1) = 0``).

    Parameters
    ----------
    fc : `FilteredComplex`
        The complex.
    r : `int`
        Page.
    p : `int`
        Filtration level.
    window : `tuple` [`int`, `int`], optional
        Largest allowed ``(r, p)``.

    Raises
    ------
    TorsionError
        If ``r`` or ``p`` is negative or outside ``window``.
    """
    r_max, p_max = window
    if r < 0 or p < 0 or r > r_max or p > p_max:
        raise TorsionError(
            f"Page entry (r={r}, p={p}) is outside the window 0 <= r <= {r_max}, 0 <= p <= {p_max}."
        )
    cycles = _cycles_basis(fc, r, p)
    lower = _cycles_basis(fc, r - 1, p - 1) + _boundaries_basis(fc, r - 1, p)
    return f2_rank(cycles) - f2_rank(lower)


def page_table(fc, r_max, p_max):
    """Page dimensions for ``0 <= r <= r_max`` and ``0 <= p <= p_max``."""
    window = (r_max, p_max)
    return PageTable(
        tuple(tuple(page_dimension(fc, r, p, window) for p in range(p_max + 1)) for r in range(r_max + 1))
    )


def verify_witness(fc, vector, witness):
    """True if ``∂̂ witness = (vector, 0, ..., 0)``."""
    if not witness:
        return False
    image = fc.apply_total(witness)
    return image[0] == vector and not any(image[1:])


def _make_backend(name, log):
    try:
        backend_class = available_backends[name]
    except KeyError:
        raise TorsionError(
            f"Unknown backend {name!r}; must be one of {sorted(available_backends)}."
        ) from None
    return backend_class(log=log)


def in_boundary_depth(fc, vector, k, backend="iterative", log=None):
    """Decide whether a level 0 vector lies in ``B^k_0``.

    Parameters
    ----------
    fc : `FilteredComplex`
        The complex.
    vector : `int`
        Level 0 vector as a bitset.
    k : `int`
        Depth.
    backend : `str`, optional
        Name in `available_backends`.
    log : `logging.Logger`, optional
        Logger.

    Returns
    -------
    bounds : `bool`
        True if the vector lies in ``B^k_0``.
    witness : `tuple` [`int`] or `None`
        Chain ``(c_0, ..., c_k)`` certifying it.

    Raises
    ------
    TorsionError
        If ``k`` is negative or the backend returns a chain that does not
        check out.
    """
    log = log or logging.getLogger(__name__)
    if k < 0:
        raise TorsionError(f"Boundary depth must be nonnegative; got {k}.")
    witness = _make_backend(backend, log).solve(fc, vector, k)
    if witness is None:
        return False, None
    if not verify_witness(fc, vector, witness):
        raise TorsionError(
            f"Backend {backend!r} returned a chain at depth {k} that does not bound the class."
        )
    return True, witness


def boundary_threshold(fc, vector, log=None):
    """Smallest ``k`` with ``vector`` in ``B^k_0``, or `None` if there is
    none.
    """
    log = log or logging.getLogger(__name__)
    return backends.ExactBackend(log=log).threshold(fc, vector)


def _check_against_scan(fc, vector, threshold, scanner, depths):
    """Raise unless ``scanner`` first bounds ``vector`` at ``threshold``
    among ``depths``.
    """
    for k in depths:
        if scanner.solve(fc, vector, k) is not None:
            if k != threshold:
                raise TorsionError(
                    f"The exact threshold {threshold} disagrees with the scan, which bounds EH at depth {k}."
                )
            return
    if threshold is not None and threshold in depths:
        raise TorsionError(f"The scan does not bound EH at the exact threshold {threshold}.")


def decide_infinity(fc, cap=8, backend="iterative", log=None):
    """True if the contact class lies in no ``B^k_0``.

    The exact threshold is checked against a scan of depths ``0..cap``
    with ``backend``.

    Raises
    ------
    TorsionError
        If the complex has no contact generator, or the exact threshold
        and the scan disagree.
    """
    log = log or logging.getLogger(__name__)
    if fc.eh is None:
        raise TorsionError("The complex has no contact generator.")
    if cap < 0:
        raise TorsionError(f"cap must be nonnegative; got {cap}.")
    threshold = boundary_threshold(fc, fc.eh_vector, log=log)
    limit = cap if threshold is None else min(cap, threshold)
    _check_against_scan(fc, fc.eh_vector, threshold, _make_backend(backend, log), range(limit + 1))
    return threshold is None


def algebraic_torsion(fc, cap=64, exact=False, backend="iterative", window=DEFAULT_WINDOW, log=None):
    """Algebraic torsion of the contact class of one presentation.

    Scans ``k = 0, 1, ..., cap`` for the smallest ``k`` with EH in
    ``B^k_0``.

    Parameters
    ----------
    fc : `FilteredComplex`
        The complex.
    cap : `int`, optional
        Largest depth scanned.
    exact : `bool`, optional
        If no depth up to ``cap`` works, decide the value with the exact
        backend instead of reporting it undetermined.
    backend : `str`, optional
        Backend for the scan.
    window : `tuple` [`int`, `int`] or `None`, optional
        ``(r_max, p_max)`` of the page table; `None` to skip it.
    log : `logging.Logger`, optional
        Logger.

    Returns
    -------
    report : `ATReport`
        The value with its witness and page table.

    Raises
    ------
    TorsionError
        If the complex has no contact generator or EH is not a cycle of
        ``∂_0``.
    """
    log = log or logging.getLogger(__name__)
    if fc.eh is None:
        raise TorsionError("The complex has no contact generator.")
    if cap < 0:
        raise TorsionError(f"cap must be nonnegative; got {cap}.")
    eh = fc.eh_vector
    boundary = fc.apply_matrix(0, eh)
    if boundary:
        raise TorsionError(
            f"Contact generator {fc.eh} is not a cycle of ∂_0: ∂_0 EH = {fc.names_of(boundary)}."
        )
    scanner = _make_backend(backend, log)
    banner = UNVERIFIED_BANNER if not fc.verified else None
    table = None if window is None else page_table(fc, *window)

    def report(value, witness, status):
        return ATReport(value, witness, table, cap, backend, status, banner)

    for k in range(cap + 1):
        witness = scanner.solve(fc, eh, k)
        if witness is not None:
            if not verify_witness(fc, eh, witness):
                raise TorsionError(
                    f"Backend {backend!r} returned a chain at depth {k} that does not bound EH."
                )
            log.info("EH bounds at depth %d.", k)
            return report(k, witness, "within_cap")
        log.debug("EH does not bound at depth %d.", k)

    if not exact:
        log.info("EH does not bound at any depth up to %d.", cap)
        return report("undetermined", None, "undetermined")
    threshold = boundary_threshold(fc, eh, log=log)
    if threshold is not None and threshold <= cap:
        raise TorsionError(
            f"The exact threshold {threshold} disagrees with the scan, which never bounds EH up to {cap}."
        )
    if threshold is None:
        return report("infinity", None, "infinite")
    witness = backends.ExactBackend(log=log).solve(fc, eh, threshold)
    if not verify_witness(fc, eh, witness):
        raise TorsionError(f"Exact backend returned a chain at depth {threshold} that does not bound EH.")
    return report(threshold, witness, "beyond_cap")
