from ._wzlq import *  # noqa: F401,F403
from ._wzlq import __doc__  # noqa: F401
