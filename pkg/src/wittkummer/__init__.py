"""Truncated Witt vectors, group cohomology over Z/p^r, and Kummer-type lifting."""

__version__ = "0.1.0"

from .cohomology import CohomologyClass, CohomologyGroup, cohomology_group
from .extensions import GModExtension, baer_sum, extension_class, obstruction_class
from .gmodule import Character, GModule, ModuleMap, WittModule
from .groups import BoundExceeded, FiniteGroup, cyclic_group, direct_product
from .kummer import (CyclotomicData, fit_factorization, is_cyclotomic_pair,
                     lift_cocycle_rank1)
from .witt import WittRing, WittVector
from .zpmod import ResidueMatrix, howell_form, kernel_basis, solve_linear
