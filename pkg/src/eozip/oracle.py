from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass, field as dataclass_field
from typing import Dict, List, Sequence, Set

import numpy as np

from .algebra.field import field_of_order
from .algebra.symplectic import SymplecticSpace, standard_symplectic_space, symplectic_group
from .constants import ORACLE_MAX_G, ORACLE_MAX_Q
from .errors import PropertyViolation, ScaleTooLarge
from .fzip import SymplecticFZip, all_zips, eo_type

__all__ = ["OracleReport", "orbit_partition", "oracle_check"]

logger = logging.getLogger(__name__)


@dataclass(slots=True)
class OracleReport:
    g: int
    q: int
    zips: int = 0
    orbits: int = 0
    classes: List[str] = dataclass_field(default_factory=list)
    orbits_per_class: Dict[str, int] = dataclass_field(default_factory=dict)
    constant_on_orbits: bool = True
    all_types_realized: bool = False

    @property
    def ok(self) -> bool:
        return self.constant_on_orbits and self.all_types_realized

    def as_dict(self) -> dict:
        return {
            "g": self.g,
            "q": self.q,
            "zips": self.zips,
            "orbits": self.orbits,
            "classes": self.classes,
            "orbits_per_class": self.orbits_per_class,
            "classifier_constant_on_orbits": self.constant_on_orbits,
            "all_types_realized": self.all_types_realized,
        }


def orbit_partition(zips: Sequence[SymplecticFZip], sp: SymplecticSpace) -> List[int]:
    """Orbit index of every zip under Sp(M); the list must be closed under the action.

    A valid zip is determined by phi0, so orbits are computed on phi0 alone
    by twisted conjugation h phi0 F(h)^-1.
    """

    field = sp.field
    group = symplectic_group(sp)
    frob_inverse = sp.inverse_of(field.frob(group))
    index = {z.Phi0.tobytes(): i for i, z in enumerate(zips)}
    orbit_of = [-1] * len(zips)
    count = 0
    for i, z in enumerate(zips):
        if orbit_of[i] >= 0:
            continue
        images = field.matmul(field.matmul(group, z.Phi0), frob_inverse)
        for matrix in images:
            j = index.get(matrix.tobytes())
            if j is None:
                raise PropertyViolation("an orbit leaves the enumerated set of zips")
            orbit_of[j] = count
        count += 1
    logger.info("%d zips fall into %d orbits", len(zips), count)
    return orbit_of


def oracle_check(g: int, q: int) -> OracleReport:
    """Compare the classifier with brute-force Sp-orbits on every zip over F_q."""

    if g > ORACLE_MAX_G or q > ORACLE_MAX_Q:
        raise ScaleTooLarge(f"oracle check needs g <= {ORACLE_MAX_G} and q <= {ORACLE_MAX_Q}")
    sp = standard_symplectic_space(field_of_order(q), g)
    zips = all_zips(sp)
    orbit_of = orbit_partition(zips, sp)
    types_in_orbit: Dict[int, Set[str]] = defaultdict(set)
    for z, orbit in zip(zips, orbit_of):
        types_in_orbit[orbit].add(eo_type(z).bitstring())
    report = OracleReport(g=g, q=q, zips=len(zips), orbits=len(types_in_orbit))
    report.constant_on_orbits = all(len(types) == 1 for types in types_in_orbit.values())
    per_class: Dict[str, int] = defaultdict(int)
    for types in types_in_orbit.values():
        for bits in types:
            per_class[bits] += 1
    report.classes = sorted(per_class)
    report.orbits_per_class = dict(sorted(per_class.items()))
    report.all_types_realized = len(report.classes) == 2**g
    return report
