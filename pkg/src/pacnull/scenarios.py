"""Seeded coupling scenarios and strength sweeps.

Three generators share one layout: a deterministic event train scaled by the
strength ``A`` plus unit-variance Gaussian background noise.

* ``am``: a 1 Hz oscillation that also modulates the amplitude of a 20 Hz
  carrier, ``sin(2 pi t) + (1 + A sin(2 pi t)) sin(2 pi 20 t)``.
* ``spikes``: a train of spikes, each the sum of three Gumbel densities of
  60, 120 and 200 ms duration, one spike every 2/3 s from t = 1/3 s.
* ``hfo``: a train of 120 Hz bursts under Gaussian envelopes of 200 ms FWHM,
  on the same schedule as the spikes.

For ``spikes`` and ``hfo`` the strength is an SNR.  With ``snr_mode="rms"``
(default) the event train is scaled so its RMS over the record equals ``A``
times the noise standard deviation; ``snr_mode="peak"`` scales its peak to
``A`` instead.
"""

from dataclasses import asdict, dataclass
import math

import numpy as np

from .errors import InvalidArgumentError
from .mi import modulation_index, phase_amp_histogram
from .nullmodel import critical_value, null_params, p_value
from .sigproc import BandSpec, TimeSeries, analytic, bandpass

__all__ = [
    "ScenarioConfig",
    "SweepRow",
    "DEFAULT_BANDS",
    "KINDS",
    "gumbel_scale",
    "gaussian_scale",
    "event_times",
    "simulate",
    "simulate_am",
    "simulate_spikes",
    "simulate_hfo",
    "sweep",
    "median_by_cell",
]

KINDS = ("am", "spikes", "hfo")

DEFAULT_BANDS = {
    "am": (BandSpec(0.1, 5.0), BandSpec(10.0, 75.0)),
    "spikes": (BandSpec(0.1, 8.0), BandSpec(12.0, 40.0)),
    "hfo": (BandSpec(0.1, 12.0), BandSpec(90.0, 147.0)),
}

AM_MODULATOR_HZ = 1.0
AM_CARRIER_HZ = 20.0
SPIKE_DURATIONS = (0.060, 0.120, 0.200)
HFO_DURATION = 0.200
HFO_HZ = 120.0
EVENT_PERIOD = 2.0 / 3.0
EVENT_START = 1.0 / 3.0
JITTER = 1.0 / 6.0


@dataclass(frozen=True)
class ScenarioConfig:
    kind: str
    strength: float = 0.0
    fs: float = 300.0
    duration: float = 2.0
    seed: int = 0
    low_band: BandSpec = None
    high_band: BandSpec = None
    bins: int = 18
    jitter: bool = False
    snr_mode: str = "rms"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidArgumentError(f"unknown scenario kind {self.kind!r}; choose from {KINDS}")
        if not (math.isfinite(self.strength) and self.strength >= 0):
            raise InvalidArgumentError("strength must be >= 0")
        if not self.fs > 0 or not self.duration > 0:
            raise InvalidArgumentError("fs and duration must be positive")
        if self.snr_mode not in ("rms", "peak"):
            raise InvalidArgumentError(f"snr_mode must be 'rms' or 'peak', got {self.snr_mode!r}")
        lo, hi = DEFAULT_BANDS[self.kind]
        if self.low_band is None:
            object.__setattr__(self, "low_band", lo)
        if self.high_band is None:
            object.__setattr__(self, "high_band", hi)
        self.low_band.validate(self.fs)
        self.high_band.validate(self.fs)
        if self.bins < 2:
            raise InvalidArgumentError("bins must be >= 2")

    @property
    def n(self):
        return int(round(self.fs * self.duration))

    @property
    def times(self):
        return np.arange(self.n) / self.fs

    def to_dict(self):
        d = asdict(self)
        d["low_band"] = [self.low_band.f_lo, self.low_band.f_hi]
        d["high_band"] = [self.high_band.f_lo, self.high_band.f_hi]
        return d


def gumbel_scale(duration):
    """Gumbel scale whose central 95% interval spans ``duration``."""
    return -duration / (math.log(-math.log(0.975)) - math.log(-math.log(0.025)))


def gaussian_scale(fwhm):
    return fwhm / 2.4


def _gumbel_pdf(t, loc, scale):
    z = (t - loc) / scale
    # exp(-z) overflows far to the left, where the density is 0 anyway
    with np.errstate(over="ignore"):
        return np.exp(-(z + np.exp(-z))) / scale


def event_times(cfg, rng=None):
    """Event centres: every 2/3 s from 1/3 s, optionally jittered by +-1/6 s."""
    times = np.arange(EVENT_START, cfg.duration, EVENT_PERIOD)
    if cfg.jitter:
        if rng is None:
            rng = np.random.default_rng(cfg.seed)
        times = times + rng.uniform(-JITTER, JITTER, times.size)
    return times


def _noise(cfg):
    rng = np.random.default_rng(cfg.seed)
    return rng, rng.standard_normal(cfg.n)


def _scale_events(template, cfg):
    if cfg.snr_mode == "rms":
        norm = math.sqrt(np.mean(template**2))
    else:
        norm = np.max(np.abs(template))
    if norm == 0:
        # record too short to hold an event
        return np.zeros_like(template)
    return cfg.strength * template / norm


def _require(cfg, kind):
    if cfg.kind != kind:
        raise InvalidArgumentError(f"config is for {cfg.kind!r}, not {kind!r}")


def am_template(cfg):
    t = cfg.times
    mod = np.sin(2 * np.pi * AM_MODULATOR_HZ * t)
    return mod + (1.0 + cfg.strength * mod) * np.sin(2 * np.pi * AM_CARRIER_HZ * t)


def spike_template(cfg, centres):
    t = cfg.times
    out = np.zeros_like(t)
    for c in centres:
        for d in SPIKE_DURATIONS:
            out += _gumbel_pdf(t, c, gumbel_scale(d))
    return out


def hfo_template(cfg, centres):
    t = cfg.times
    sigma = gaussian_scale(HFO_DURATION)
    env = np.zeros_like(t)
    for c in centres:
        env += np.exp(-0.5 * ((t - c) / sigma) ** 2)
    return env * np.sin(2 * np.pi * HFO_HZ * t)


def simulate_am(cfg):
    _require(cfg, "am")
    _, noise = _noise(cfg)
    return TimeSeries(am_template(cfg) + noise, cfg.fs)


def simulate_spikes(cfg):
    _require(cfg, "spikes")
    rng, noise = _noise(cfg)
    events = spike_template(cfg, event_times(cfg, rng))
    return TimeSeries(_scale_events(events, cfg) + noise, cfg.fs)


def simulate_hfo(cfg):
    _require(cfg, "hfo")
    rng, noise = _noise(cfg)
    events = hfo_template(cfg, event_times(cfg, rng))
    return TimeSeries(_scale_events(events, cfg) + noise, cfg.fs)


_GENERATORS = {"am": simulate_am, "spikes": simulate_spikes, "hfo": simulate_hfo}


def simulate(cfg):
    return _GENERATORS[cfg.kind](cfg)


@dataclass(frozen=True)
class SweepRow:
    kind: str
    strength: float
    bins: int
    seed: int
    mi: float
    p_value: float
    critical_99: float

    FIELDS = ("kind", "strength", "bins", "seed", "mi", "p_value", "critical_99")


def sweep(kind, strengths, bins_list, seeds, alpha=0.01, **overrides):
    """MI for every (strength, bins, seed) cell, with the analytic threshold.

    Rows are ordered strength-major, then bins, then seed.  The threshold
    column holds the critical value at ``alpha`` (0.01 by default).
    """
    strengths, bins_list, seeds = list(strengths), list(bins_list), list(seeds)
    if not strengths or not bins_list or not seeds:
        raise InvalidArgumentError("strengths, bins and seeds must all be non-empty")
    rows = []
    nulls = {}
    for a in strengths:
        per_seed = {}
        for s in seeds:
            cfg = ScenarioConfig(kind, strength=a, seed=s, **overrides)
            x = simulate(cfg)
            phase = analytic(bandpass(x, cfg.low_band)).phase
            amp = analytic(bandpass(x, cfg.high_band)).amplitude
            per_seed[s] = (cfg.n, phase, amp)
        for b in bins_list:
            for s in seeds:
                n, phase, amp = per_seed[s]
                if (n, b) not in nulls:
                    params = null_params(n, b)
                    nulls[n, b] = (params, critical_value(params, alpha))
                params, cv = nulls[n, b]
                mi = modulation_index(phase_amp_histogram(phase, amp, b)).mi
                rows.append(SweepRow(kind, float(a), int(b), int(s), mi, p_value(params, mi), cv))
    return rows


def median_by_cell(rows):
    """Median MI over seeds for each (strength, bins), with its threshold."""
    cells = {}
    for r in rows:
        cells.setdefault((r.strength, r.bins), []).append(r)
    return {
        key: (float(np.median([r.mi for r in rs])), rs[0].critical_99)
        for key, rs in cells.items()
    }
