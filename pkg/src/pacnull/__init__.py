"""Modulation index for phase-amplitude coupling with a closed-form null.

The null distribution of the modulation index between independent white
noise channels is approximated by a beta distribution that depends only on
the signal length and the number of phase bins, so significance needs no
surrogate resampling.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DegenerateInputError,
    DomainError,
    InvalidArgumentError,
    NumericInstabilityError,
)
from .mi import MiValue, PhaseAmpHistogram, entropy, mi_pipeline, modulation_index, phase_amp_histogram  # noqa: E402
from .nullmodel import MiAssessment, NullModelParams, assess, critical_value, null_params, p_value  # noqa: E402
from .sigproc import AnalyticSeries, BandSpec, TimeSeries, analytic, bandpass, hilbert, white_noise  # noqa: E402
