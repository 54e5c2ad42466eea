from .validators import (validate_power, validate_matrix, validate_selection_size,
                         validate_subset, validate_trials)
from .errors import (MimoSelectError, InvalidInputError, ChannelParseError,
                     DomainError, NumericalFailureError, CapacityBudgetError)

__all__ = [
    "validate_power", "validate_matrix", "validate_selection_size",
    "validate_subset", "validate_trials",
    "MimoSelectError", "InvalidInputError", "ChannelParseError",
    "DomainError", "NumericalFailureError", "CapacityBudgetError",
]
