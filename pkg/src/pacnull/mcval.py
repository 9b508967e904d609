"""Monte Carlo checks of the closed-form null.

Replicates are generated in blocks.  Block ``k`` draws from
``default_rng(SeedSequence((seed, k)))`` and the block size depends only on
the signal length, so a sample is a pure function of ``(n, bins, reps,
seed, sigma)`` whatever order blocks are evaluated in.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import InvalidArgumentError
from .mi import batch_histograms, mi_from_probs
from .sigproc import analytic_signal, wrap_phase
from .specfun import BetaDist, beta_cdf, beta_inv_cdf

__all__ = [
    "McNullSample",
    "MomentEstimates",
    "mc_null",
    "null_histograms",
    "qq_table",
    "ks_distance",
    "moment_oracle",
    "max_relative_gap",
]

# samples held per block (two real channels plus their complex spectra)
_BLOCK_SAMPLES = 2_000_000


@dataclass(frozen=True)
class McNullSample:
    n: int
    bins: int
    reps: int
    mis: np.ndarray
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "mis", np.sort(np.asarray(self.mis, dtype=float)))


def block_size(n):
    return max(1, _BLOCK_SAMPLES // int(n))


def _block_rng(seed, k):
    return np.random.default_rng(np.random.SeedSequence((int(seed), int(k))))


def null_histograms(n, bins, reps, seed=0, sigma=1.0, model="pipeline"):
    """Yield blocks of white-noise phase-amplitude histograms.

    ``model="pipeline"`` runs two independent white-noise signals through the
    analytic signal (phase from the first, amplitude from the second).
    ``model="iid"`` skips the transform: uniform phases and i.i.d. Rayleigh
    amplitudes, the idealization the closed form assumes.
    """
    if reps < 1:
        raise InvalidArgumentError(f"reps must be >= 1, got {reps}")
    if n < 2:
        raise InvalidArgumentError(f"n must be >= 2, got {n}")
    if model not in ("pipeline", "iid"):
        raise InvalidArgumentError(f"unknown null sampling model {model!r}")
    size = block_size(n)
    done = 0
    k = 0
    while done < reps:
        m = min(size, reps - done)
        rng = _block_rng(seed, k)
        if model == "pipeline":
            x = sigma * rng.standard_normal((size, n))[:m]
            y = sigma * rng.standard_normal((size, n))[:m]
            phase = wrap_phase(np.angle(analytic_signal(x, axis=1)))
            amp = np.abs(analytic_signal(y, axis=1))
        else:
            phase = rng.uniform(0.0, 2 * np.pi, (size, n))[:m]
            amp = rng.rayleigh(sigma, (size, n))[:m]
        yield batch_histograms(phase, amp, bins)
        done += m
        k += 1


def mc_null(n, bins, reps, seed=0, sigma=1.0):
    """Empirical null sample of the modulation index (no band-pass)."""
    mis = np.concatenate([mi_from_probs(p) for p in null_histograms(n, bins, reps, seed, sigma)])
    return McNullSample(int(n), int(bins), int(reps), np.clip(mis, 0.0, 1.0), int(seed))


def _values(sample):
    mis = sample.mis if isinstance(sample, McNullSample) else np.sort(np.asarray(sample, float))
    if mis.size == 0:
        raise InvalidArgumentError("empty sample")
    return mis


def _dist(params):
    return params if isinstance(params, BetaDist) else params.dist


def qq_table(sample, params, quantiles):
    """Rows ``(q, empirical quantile, analytic quantile)``."""
    q = np.asarray(quantiles, dtype=float)
    if np.any(q <= 0) or np.any(q >= 1):
        raise InvalidArgumentError("quantiles must lie in (0, 1)")
    mis = _values(sample)
    emp = np.quantile(mis, q)
    theo = np.atleast_1d(beta_inv_cdf(_dist(params), q))
    return [(float(a), float(b), float(c)) for a, b, c in zip(q, emp, theo)]


def max_relative_gap(table):
    return max(abs(e - t) / t for _, e, t in table)


def ks_distance(sample, params):
    """Sup-norm distance between the empirical CDF and the analytic beta CDF."""
    mis = _values(sample)
    cdf = np.atleast_1d(beta_cdf(_dist(params), mis))
    m = mis.size
    upper = np.arange(1, m + 1) / m - cdf
    lower = cdf - np.arange(m) / m
    return float(max(upper.max(), lower.max()))


@dataclass(frozen=True)
class MomentEstimates:
    """Monte Carlo moments of the entropy chain and their standard errors."""

    n: int
    bins: int
    reps: int
    m1: float
    m2: float
    c: float
    mu_h: float
    sigma2_h: float
    se: dict

    def values(self):
        return {k: getattr(self, k) for k in ("m1", "m2", "c", "mu_h", "sigma2_h")}

    def z_scores(self, params):
        """(estimate - analytic) / standard error for each moment."""
        return {k: (v - getattr(params, k)) / self.se[k] for k, v in self.values().items()}


def moment_oracle(n, bins, reps, seed=0, model="pipeline"):
    """Brute-force estimates of the moments the closed form predicts.

    Per replicate the bin-averaged ``p log p``, ``(p log p)^2``, the
    off-diagonal mean of ``h_i h_j`` and the normalized entropy are
    recorded; replicates are the independent unit for standard errors.
    """
    if reps < 100:
        raise InvalidArgumentError(f"moment oracle needs reps >= 100, got {reps}")
    B = int(bins)
    rows = []
    for probs in null_histograms(n, B, reps, seed, model=model):
        h = np.zeros_like(probs)
        pos = probs > 0
        h[pos] = probs[pos] * np.log(probs[pos])
        s1 = h.sum(axis=1)
        s2 = (h * h).sum(axis=1)
        rows.append(
            np.column_stack(
                [s1 / B, s2 / B, (s1 * s1 - s2) / (B * (B - 1)), -s1 / math.log(B)]
            )
        )
    data = np.vstack(rows)
    r = data.shape[0]
    mean = data.mean(axis=0)
    se = data.std(axis=0, ddof=1) / math.sqrt(r)
    ent = data[:, 3]
    var_h = ent.var(ddof=1)
    dev = ent - ent.mean()
    # standard error of a sample variance from the fourth central moment
    se_var = math.sqrt(max(np.mean(dev**4) - var_h**2, 0.0) / r)
    names = ("m1", "m2", "c", "mu_h")
    ses = dict(zip(names, (float(s) for s in se)))
    ses["sigma2_h"] = se_var
    return MomentEstimates(
        n=int(n),
        bins=B,
        reps=r,
        m1=float(mean[0]),
        m2=float(mean[1]),
        c=float(mean[2]),
        mu_h=float(mean[3]),
        sigma2_h=float(var_h),
        se=ses,
    )
