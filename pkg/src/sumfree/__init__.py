"""Sum-free sets in F_p^n: extremal constructions, exact search and law checks."""

from .space import LinearAuto, LinearForm, Space, make_space
from .sets import GroupSet, dilate, is_sum_free, sumset, symmetry_group

__version__ = "0.1.0"

__all__ = [
    "GroupSet",
    "LinearAuto",
    "LinearForm",
    "Space",
    "dilate",
    "is_sum_free",
    "make_space",
    "sumset",
    "symmetry_group",
]
