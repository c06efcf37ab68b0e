"""phaselab: exchange, geometric and topological phase experiments.

Thin Python surface over the C++ core. The heavy lifting (time-ordered
evolution, Wilson-loop holonomies, flux quadrature) happens in `_core`;
this package just re-exports it.
"""

from phaselab._core import *  # noqa: F401,F403
from phaselab._core import __doc__ as _core_doc  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
