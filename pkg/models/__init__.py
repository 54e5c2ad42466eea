from .channel import CapacityReport, ChannelFile, MimoChannel
from .matrix import HermitianForm, Polynomial, SubsetIndex
from .reports import IdentityReport, IdentityRun, TightnessReport, TrialFailure, VerificationRun
from .selection import BoundReport, RemovalStep, Selection, SelectionOutput, SelectionResult

__all__ = [
    "CapacityReport", "ChannelFile", "MimoChannel",
    "HermitianForm", "Polynomial", "SubsetIndex",
    "IdentityReport", "IdentityRun", "TightnessReport", "TrialFailure", "VerificationRun",
    "BoundReport", "RemovalStep", "Selection", "SelectionOutput", "SelectionResult",
]
