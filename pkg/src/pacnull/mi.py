"""Phase-amplitude histogram, its entropy and the modulation index."""

from dataclasses import dataclass
import logging
import math

import numpy as np

from .errors import DegenerateInputError, InvalidArgumentError
from .sigproc import TWO_PI, TimeSeries, analytic, bandpass

__all__ = [
    "PhaseAmpHistogram",
    "MiValue",
    "phase_bins",
    "phase_amp_histogram",
    "entropy",
    "modulation_index",
    "mi_pipeline",
    "batch_histograms",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PhaseAmpHistogram:
    probs: np.ndarray
    bin_count: int
    empty_bins: int = 0


@dataclass(frozen=True)
class MiValue:
    mi: float
    entropy_nats: float
    bin_count: int
    empty_bins: int = 0


def phase_bins(phase, bins):
    """Index of the half-open bin ``[b*2pi/B, (b+1)*2pi/B)`` holding each phase."""
    phase = np.mod(np.asarray(phase, dtype=float), TWO_PI)
    idx = np.floor(phase * (bins / TWO_PI)).astype(np.intp)
    # phase == 2*pi after rounding wraps to bin 0
    idx[idx >= bins] = 0
    return idx


def phase_amp_histogram(phase, amp, bins):
    """Normalized mean amplitude per phase bin.

    Parameters
    ----------
    phase : array
        Instantaneous phase in [0, 2*pi).
    amp : array
        Nonnegative instantaneous amplitude, same length as ``phase``.
    bins : int
        Number of equal-width phase bins, at least 2.

    Empty bins get a mean amplitude of zero and are counted in
    ``empty_bins``.
    """
    phase = np.asarray(phase, dtype=float)
    amp = np.asarray(amp, dtype=float)
    if phase.shape != amp.shape or phase.ndim != 1:
        raise InvalidArgumentError("phase and amplitude must be 1-D with equal length")
    if phase.size < 1:
        raise InvalidArgumentError("need at least one sample")
    if int(bins) != bins or bins < 2:
        raise InvalidArgumentError(f"bin count must be an integer >= 2, got {bins}")
    bins = int(bins)
    if np.any(amp < 0):
        raise InvalidArgumentError("amplitudes must be nonnegative")
    idx = phase_bins(phase, bins)
    counts = np.bincount(idx, minlength=bins)
    sums = np.bincount(idx, weights=amp, minlength=bins)
    means = np.divide(sums, counts, out=np.zeros(bins), where=counts > 0)
    total = means.sum()
    if not total > 0:
        raise DegenerateInputError("all amplitudes are zero; the histogram is undefined")
    empty = int(np.count_nonzero(counts == 0))
    if empty:
        log.warning("%d of %d phase bins are empty", empty, bins)
    return PhaseAmpHistogram(means / total, bins, empty)


def batch_histograms(phase, amp, bins):
    """Row-wise histograms for 2-D (replicate, sample) arrays.

    Returns an array of shape (replicates, bins).  Rows with empty bins get
    zeros there; the caller decides whether that matters.
    """
    reps = phase.shape[0]
    idx = phase_bins(phase, bins) + bins * np.arange(reps)[:, None]
    counts = np.bincount(idx.ravel(), minlength=reps * bins).reshape(reps, bins)
    sums = np.bincount(idx.ravel(), weights=amp.ravel(), minlength=reps * bins).reshape(reps, bins)
    means = np.divide(sums, counts, out=np.zeros_like(sums), where=counts > 0)
    return means / means.sum(axis=1, keepdims=True)


def _entropy_of(probs):
    p = np.asarray(probs, dtype=float)
    terms = np.zeros_like(p)
    pos = p > 0
    terms[pos] = p[pos] * np.log(p[pos])
    return -terms.sum(axis=-1)


def entropy(hist):
    """Shannon entropy in nats, with ``0 * log 0 = 0``."""
    h = float(_entropy_of(hist.probs))
    # rounding can push a uniform histogram a hair past log(B)
    return min(max(h, 0.0), math.log(hist.bin_count))


def modulation_index(hist):
    """``1 - H / log(B)``."""
    h = entropy(hist)
    mi = 1.0 - h / math.log(hist.bin_count)
    return MiValue(min(max(mi, 0.0), 1.0), h, hist.bin_count, hist.empty_bins)


def mi_from_probs(probs):
    """Vectorized modulation index over the last axis."""
    probs = np.asarray(probs, dtype=float)
    return 1.0 - _entropy_of(probs) / np.log(probs.shape[-1])


def mi_pipeline(x, low, high, bins, amp_source=None):
    """Modulation index between the low-band phase and high-band amplitude.

    ``x`` supplies the phase.  The amplitude comes from ``amp_source`` when
    given (two-channel variant), otherwise from ``x`` itself.
    """
    if amp_source is None:
        amp_source = x
    if len(x) != len(amp_source):
        raise InvalidArgumentError("phase and amplitude channels differ in length")
    if x.fs != amp_source.fs:
        raise InvalidArgumentError("phase and amplitude channels differ in sampling rate")
    low.validate(x.fs)
    high.validate(x.fs)
    phase = analytic(bandpass(x, low)).phase
    amp = analytic(bandpass(amp_source, high)).amplitude
    return modulation_index(phase_amp_histogram(phase, amp, bins))


def mi_raw(x, y, bins):
    """Modulation index with phase from ``x`` and amplitude from ``y``, unfiltered."""
    px = analytic(x if isinstance(x, TimeSeries) else TimeSeries(x, 1.0)).phase
    ay = analytic(y if isinstance(y, TimeSeries) else TimeSeries(y, 1.0)).amplitude
    return modulation_index(phase_amp_histogram(px, ay, bins))
