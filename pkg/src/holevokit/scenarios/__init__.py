"""Worked examples: qubit, EPR pair, rotated Bell measurements, Aspect runs, free particle."""
from .aspect import *  # noqa: F401,F403
from .bell import *  # noqa: F401,F403
from .epr import *  # noqa: F401,F403
from .particle import *  # noqa: F401,F403
from .qubit import *  # noqa: F401,F403
