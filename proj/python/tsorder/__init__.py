from ._tsorder import *  # noqa: F401,F403
from ._tsorder import __version__  # noqa: F401
