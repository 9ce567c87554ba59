"""
Executable checks of the equivalence and correctness guarantees.
"""

from cellpm.verify.equivalence import (
    EquivalenceReport,
    check_equivalence,
    equivalent_up_to_permutation,
)
from cellpm.verify.laws import check_interaction_laws, check_motion_constraints
from cellpm.verify.lemmas import lemma_suite

__all__ = [
    "EquivalenceReport",
    "check_equivalence",
    "check_interaction_laws",
    "check_motion_constraints",
    "equivalent_up_to_permutation",
    "lemma_suite",
]
