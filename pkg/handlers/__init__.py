from .base import BaseHandler, build_parser
from .channel import ChannelHandler
from .verify import VerifyHandler

__all__ = ["BaseHandler", "ChannelHandler", "VerifyHandler", "build_parser"]
