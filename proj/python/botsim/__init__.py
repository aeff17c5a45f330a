from botsim._core import *  # noqa: F401,F403

from botsim._core import __doc__  # noqa: F401
