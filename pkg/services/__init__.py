from .matrix_service import MatrixService
from .channel_service import ChannelService
from .selection_service import SelectionService
from .identity_service import IdentityService
from .verification_service import VerificationService
from .logger import ReportLogger

__all__ = [
    "MatrixService", "ChannelService", "SelectionService",
    "IdentityService", "VerificationService", "ReportLogger",
]
