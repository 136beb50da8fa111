"""Transfer matrices of 1D complex scattering potentials.

Computes 2x2 transfer matrices by ODE integration, composes potentials with
disjoint or overlapping support (including the overlap-correction factor S
and its endpoint power series), and runs the unidirectional-invisibility
overlap experiment.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
