"""Free additive convolution toolkit: subordination, Stieltjes inversion, free cumulants."""

from ._core import *  # noqa: F401,F403
from ._core import FreeconvError, Law, Measure, FamilySpec  # noqa: F401

__version__ = "0.1.0"
