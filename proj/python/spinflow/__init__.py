"""Nonlinear Dirac equations on flat 2D domains.

Fields are :class:`SpinorField` objects on a :class:`GridChart`; their
``values`` property is a complex array of shape (ny, nx, n, 2).
"""

from ._core import *  # noqa: F401,F403
from ._core import oracles  # noqa: F401

__version__ = "0.1.0"
