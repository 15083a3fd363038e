"""Triangle removal in F_2^n: exact counting, superregular decompositions,
shattering and the entropy-increment refinement driver."""

from .errors import InvariantError, PreconditionError
from .gf2_linalg import Coset, DualCharacter, Subgroup, subgroup_from_generators
from .sets import SetF2

__version__ = "0.1.0"

__all__ = ["Coset", "DualCharacter", "InvariantError", "PreconditionError", "SetF2",
           "Subgroup", "subgroup_from_generators"]
