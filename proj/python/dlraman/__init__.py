"""Double-Lambda bi-frequency Raman laser simulator."""

from ._dlraman import *  # noqa: F401,F403
from ._dlraman import DlramanError, Engine

__all__ = [name for name in dir() if not name.startswith("_")]
