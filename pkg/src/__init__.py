from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("nhaah")
except PackageNotFoundError:
    __version__ = "0.1.0"

from .config import settings

__all__ = ["__version__", "settings"]
