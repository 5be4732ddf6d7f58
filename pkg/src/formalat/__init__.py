"""Finite permutation groups, formations and K-F-subnormality."""

from .formations import FormationSpec
from .invariants import PrimePartition
from .lattice import Subgroup, all_subgroups
from .perm import CapExceeded, GroupError, Perm, PermGroup, load_group, parse_group

__all__ = ["CapExceeded", "FormationSpec", "GroupError", "Perm", "PermGroup", "PrimePartition",
           "Subgroup", "all_subgroups", "load_group", "parse_group"]
__version__ = "0.1.0"
