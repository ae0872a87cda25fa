"""Likelihood-ratio agglomerative clustering with statistical guarantees.

Detects groups of users that respond heterogeneously to a treatment
(A/B lift) or are treated disparately by a classifier, with family-wise
error control over the sequential merge procedure.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
