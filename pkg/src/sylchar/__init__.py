"""Exact computational workbench for Sylow 2-subgroups, character tables,
and Galois actions of small matrix groups over finite fields."""

from .cyclotomic import CyclotomicNumber, GaloisMap, galois_apply, sigma, sigma_exponent
from .ffield import FieldElement, FiniteField, ff_create
from .matgroup import AutomorphismDesc, GroupSpec, group_order
from .engine import GroupData, SubgroupHandle, enumerate_group

__all__ = [
    "AutomorphismDesc",
    "CyclotomicNumber",
    "FieldElement",
    "FiniteField",
    "GaloisMap",
    "GroupData",
    "GroupSpec",
    "SubgroupHandle",
    "enumerate_group",
    "ff_create",
    "galois_apply",
    "group_order",
    "sigma",
    "sigma_exponent",
]

__version__ = "0.1.0"
