"""Signal generation, ideal band-pass filtering and the analytic signal."""

from dataclasses import dataclass
import math

import numpy as np

from .errors import InvalidArgumentError
from .specfun import digamma, trigamma

__all__ = [
    "TimeSeries",
    "AnalyticSeries",
    "BandSpec",
    "white_noise",
    "hilbert",
    "analytic",
    "bandpass",
    "kernel_sums",
    "hilbert_kernel",
    "causal_hilbert",
    "kernel_variance_factor",
]

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled real signal."""

    samples: np.ndarray
    fs: float

    def __post_init__(self):
        x = np.asarray(self.samples, dtype=float)
        if x.ndim != 1 or x.size < 1:
            raise InvalidArgumentError("TimeSeries needs a 1-D sequence with at least one sample")
        if not np.all(np.isfinite(x)):
            raise InvalidArgumentError("TimeSeries samples must be finite")
        if not (math.isfinite(self.fs) and self.fs > 0):
            raise InvalidArgumentError(f"sampling rate must be positive, got {self.fs}")
        object.__setattr__(self, "samples", x)

    def __len__(self):
        return self.samples.size

    @property
    def duration(self):
        return self.samples.size / self.fs


@dataclass(frozen=True)
class AnalyticSeries:
    """Instantaneous amplitude and phase; phase lies in [0, 2*pi)."""

    amplitude: np.ndarray
    phase: np.ndarray
    fs: float

    def __post_init__(self):
        if self.amplitude.shape != self.phase.shape:
            raise InvalidArgumentError("amplitude and phase must have equal length")

    def __len__(self):
        return self.amplitude.size


@dataclass(frozen=True)
class BandSpec:
    f_lo: float
    f_hi: float

    def validate(self, fs):
        if not (0 <= self.f_lo < self.f_hi <= fs / 2):
            raise InvalidArgumentError(
                f"band ({self.f_lo}, {self.f_hi}) Hz is not within [0, {fs / 2}] Hz"
            )
        return self

    @classmethod
    def parse(cls, text):
        """Build from ``"lo,hi"`` or ``"lo-hi"``."""
        sep = "," if "," in text else "-"
        try:
            lo, hi = (float(t) for t in text.split(sep))
        except ValueError as exc:
            raise InvalidArgumentError(f"cannot parse band {text!r}") from exc
        return cls(lo, hi)


def white_noise(n, sigma=1.0, seed=None, fs=1.0):
    """``n`` i.i.d. zero-mean Gaussian samples (PCG64 via ``default_rng``)."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if not sigma > 0:
        raise InvalidArgumentError(f"sigma must be > 0, got {sigma}")
    rng = np.random.default_rng(seed)
    return TimeSeries(sigma * rng.standard_normal(int(n)), fs)


def _as_array(x):
    return x.samples if isinstance(x, TimeSeries) else np.asarray(x, dtype=float)


def _sign_mask(n):
    # X + sgn(k) X with the DC and (even-N) Nyquist bins left untouched
    h = np.zeros(n)
    h[0] = 1.0
    if n % 2 == 0:
        h[n // 2] = 1.0
        h[1 : n // 2] = 2.0
    else:
        h[1 : (n + 1) // 2] = 2.0
    return h


def analytic_signal(x, axis=-1):
    """Complex analytic signal of a real array along ``axis``."""
    x = np.asarray(x, dtype=float)
    n = x.shape[axis]
    if n < 2:
        raise InvalidArgumentError("the analytic signal needs at least 2 samples")
    spec = np.fft.fft(x, axis=axis)
    shape = [1] * x.ndim
    shape[axis] = n
    return np.fft.ifft(spec * _sign_mask(n).reshape(shape), axis=axis)


def hilbert(x):
    """Hilbert transform: the imaginary part of the analytic signal."""
    samples = _as_array(x)
    out = analytic_signal(samples).imag
    if isinstance(x, TimeSeries):
        return TimeSeries(out, x.fs)
    return out


def analytic(x):
    """Instantaneous amplitude and phase of ``x``.

    Phase is the four-quadrant angle of ``(x, hilbert(x))`` wrapped into
    ``[0, 2*pi)``.
    """
    if not isinstance(x, TimeSeries):
        x = TimeSeries(x, 1.0)
    z = analytic_signal(x.samples)
    return AnalyticSeries(np.abs(z), wrap_phase(np.angle(z)), x.fs)


def wrap_phase(phi):
    phi = np.mod(phi, TWO_PI)
    # np.mod can round tiny negatives up to exactly 2*pi
    phi[phi >= TWO_PI] = 0.0
    return phi


def bandpass(x, band):
    """Ideal (brick-wall) FFT band-pass; both band edges are kept."""
    if not isinstance(x, TimeSeries):
        raise InvalidArgumentError("bandpass needs a TimeSeries (sampling rate required)")
    band.validate(x.fs)
    return TimeSeries(_bandpass_array(x.samples, x.fs, band), x.fs)


def _bandpass_array(samples, fs, band, axis=-1):
    n = samples.shape[axis]
    spec = np.fft.rfft(samples, axis=axis)
    freqs = np.fft.rfftfreq(n, d=1.0 / fs)
    keep = (freqs >= band.f_lo) & (freqs <= band.f_hi)
    shape = [1] * samples.ndim
    shape[axis] = keep.size
    return np.fft.irfft(spec * keep.reshape(shape), n=n, axis=axis)


def kernel_sums(n):
    """Closed-form sums of the discrete Hilbert kernel and of its square.

    Returns ``(H1, H2)`` for the kernel ``2/(pi*l)`` on odd ``l``, summed over
    the ``n/2`` odd lags below ``n``.  Both vanish at ``n = 0``.
    """
    if n < 0:
        raise InvalidArgumentError("n must be >= 0")
    if n == 0:
        return 0.0, 0.0
    half = n / 2.0 + 0.5
    h1 = (digamma(half) - digamma(0.5)) / np.pi
    h2 = 0.5 * (1.0 - 2.0 / np.pi**2 * trigamma(half))
    return float(h1), float(h2)


def hilbert_kernel(lags):
    """Discrete Hilbert (Dirichlet) kernel: 2/(pi*l) for odd l, else 0."""
    lags = np.asarray(lags)
    out = np.zeros(lags.shape, dtype=float)
    odd = lags % 2 != 0
    out[odd] = 2.0 / (np.pi * lags[odd])
    return out


def causal_hilbert(x):
    """Truncated convolution form of the Hilbert transform.

    Future samples weighted positively, past samples negatively.  O(N^2);
    meant as an independent check on :func:`hilbert`, not for production.
    """
    x = _as_array(x)
    n = x.size
    lags = np.arange(n)[None, :] - np.arange(n)[:, None]
    # out[i] = sum_j x[j] * h(j - i)
    return hilbert_kernel(lags) @ x


def kernel_variance_factor(n, signed=False):
    """Per-sample variance gain of :func:`causal_hilbert` on unit white noise.

    ``signed=False`` adds the squared-weight sums of future and past lags
    (variance of a weighted sum of independent samples).  ``signed=True``
    subtracts them instead, reproducing the alternative printed form.
    """
    idx = np.arange(n)
    ahead = n - 1 - idx
    behind = idx
    sq = np.concatenate([[0.0], np.cumsum(hilbert_kernel(np.arange(1, n)) ** 2)])
    fwd, back = sq[ahead], sq[behind]
    return fwd - back if signed else fwd + back
