from .session import CommandAck, SessionCore
from .server import create_app

__all__ = ["CommandAck", "SessionCore", "create_app"]
