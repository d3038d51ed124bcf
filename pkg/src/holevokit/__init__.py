"""Indiscernibility of quantum states relative to commuting observables.

The package decides when two states cannot be told apart by a family of
commuting projection-valued measures, builds the resulting quotient (a
simplex over the atoms of the generated algebra) with its metrics and
observable lifts, and ships worked two-qubit and free-particle scenarios.
"""
__version__ = "0.1.0"

from .errors import *  # noqa: E402,F401,F403
from .numerics import *  # noqa: E402,F401,F403
from .states import *  # noqa: E402,F401,F403
from .observables import *  # noqa: E402,F401,F403
from .algebra import *  # noqa: E402,F401,F403
from .holevo import *  # noqa: E402,F401,F403
