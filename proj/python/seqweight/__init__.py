"""Weighted sequential multiple testing.

Gap and gap-intersection stopping rules driven by weighted log-likelihood
ratios, family-wise-error-calibrated thresholds, and a reproducible Monte
Carlo harness. Everything here is a thin re-export of the compiled core.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
