"""Rank-r matrix approximation from sampled entries.

Thin Python layer over the compiled core: sampling schemes, the naive and
gradient-descent estimators, structural diagnostics, bound evaluators, and
the benchmark experiment driver.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__doc__ = _core_doc or __doc__
__version__ = "0.1.0"
