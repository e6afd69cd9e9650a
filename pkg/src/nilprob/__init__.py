"""nilprob: exact nilpotency probabilities of finite permutation groups."""

from .errors import (
    BudgetExceededError,
    GroupFormatError,
    NilprobError,
    VerificationError,
)
from .perm import (
    Permutation,
    commutator,
    compose,
    conjugate,
    cycle_decomposition,
    element_order,
    identity,
    inverse,
    prime_power_part,
)

__version__ = "0.1.0"

__all__ = [
    "Permutation",
    "compose",
    "inverse",
    "identity",
    "conjugate",
    "commutator",
    "element_order",
    "prime_power_part",
    "cycle_decomposition",
    "NilprobError",
    "BudgetExceededError",
    "GroupFormatError",
    "VerificationError",
    "__version__",
]
