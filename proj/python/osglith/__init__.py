"""Cross-cavity optical Stern-Gerlach momentum distributions and lithography planning."""

from ._core import *  # noqa: F401,F403
from ._core import OsgError, __version__  # noqa: F401
