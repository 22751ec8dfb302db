"""Levy-process-driven two-dimensional sequential hypothesis testing.

Thin Python layer over the C++ core: simulators for the observation and
log-likelihood-ratio processes, the rectangle threshold system, the
sequential decision rule with Monte Carlo operating characteristics, the
integro-differential generators, super/sub-solution envelopes and the
one-dimensional oil-market experiment.
"""

from ._levyht import *  # noqa: F401,F403
from ._levyht import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
