"""Permutations, stabilizer chains, block systems and backtrack search."""

from .perm import Permutation, compose, inverse, commutator
from .chain import PermOps, StabChain
from .group import (
    PermGroup,
    alternating_group,
    cyclic_group,
    dihedral_group,
    symmetric_group,
    trivial_group,
)
from .blocks import (
    BlockActionData,
    BlockSystem,
    LinkingStructure,
    StructureError,
    block_action,
    is_primitive,
    linking_structure,
    minimal_block_system,
    minimal_nontrivial_block_system,
)
from .backtrack import subgroup_search

__all__ = [
    "Permutation", "compose", "inverse", "commutator", "PermOps", "StabChain",
    "PermGroup", "alternating_group", "cyclic_group", "dihedral_group",
    "symmetric_group", "trivial_group", "BlockActionData", "BlockSystem",
    "LinkingStructure", "StructureError", "block_action", "is_primitive",
    "linking_structure", "minimal_block_system", "minimal_nontrivial_block_system",
    "subgroup_search",
]
