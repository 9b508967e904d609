"""Closed-form white-noise null distribution of the modulation index.

Under the null both channels are independent white noise.  The normalized
phase-amplitude histogram is modeled as a symmetric Dirichlet whose marginal
moments come from the sampling variance of per-bin Rayleigh averages; the
normalized entropy is then moment-matched to a beta distribution and the
modulation index inherits the reflected shapes.

The chain is::

    sigma2_p  -> a_p (method of moments), b_p = (B-1) a_p
              -> M1 = E[p log p], M2 = E[(p log p)^2], C = E[h_i h_j]
              -> mu_h, sigma2_h of H / log(B)
              -> d_h -> Beta(a_mi, b_mi) = Beta((1-mu_h) d_h, mu_h d_h)
"""

from dataclasses import asdict, dataclass, field
import math

import numpy as np

from .errors import DomainError, InvalidArgumentError, NumericInstabilityError
from .specfun import BetaDist, beta_inv_cdf, beta_sf, digamma, trigamma

__all__ = [
    "NullVariant",
    "CALIBRATED",
    "PRINTED",
    "NullModelParams",
    "MiAssessment",
    "cell_variance",
    "dirichlet_cross_moment",
    "null_params",
    "critical_value",
    "p_value",
    "assess",
]

# 4/pi - 1: squared coefficient of variation of a Rayleigh variable
RAYLEIGH_CV2 = 4.0 / math.pi - 1.0


@dataclass(frozen=True)
class NullVariant:
    """Switches selecting between alternative readings of the moment chain.

    leading_term
        Keep the N-independent ``1/B^3`` term in the cell variance.  With it
        the variance stays O(1/B^2) as N grows and the Dirichlet shape
        collapses toward 1.
    cross_moment
        ``"dirichlet"``: exact ``E[h_i h_j]`` under the symmetric Dirichlet.
        ``"printed"``: ``(trigamma(B a + 2) + h(a,1,2)^2) / B``.
    centered
        Use ``C - M1^2`` (covariance) rather than raw ``C`` in the entropy
        variance.
    normalized
        Moment-match ``H / log(B)`` instead of raw ``H``.
    """

    name: str
    leading_term: bool = False
    cross_moment: str = "dirichlet"
    centered: bool = True
    normalized: bool = True


CALIBRATED = NullVariant("calibrated")
PRINTED = NullVariant(
    "printed", leading_term=True, cross_moment="printed", centered=False, normalized=False
)

VARIANTS = {v.name: v for v in (CALIBRATED, PRINTED)}


@dataclass(frozen=True)
class NullModelParams:
    n: int
    bins: int
    mu_p: float
    sigma2_p: float
    a_p: float
    b_p: float
    m1: float
    m2: float
    c: float
    mu_h: float
    sigma2_h: float
    d_h: float
    dist: BetaDist
    variant: str = "calibrated"

    def to_dict(self):
        out = asdict(self)
        out["dist"] = {"a": self.dist.a, "b": self.dist.b}
        return out

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        data["dist"] = BetaDist(**data["dist"])
        return cls(**data)


@dataclass(frozen=True)
class MiAssessment:
    mi: float
    p_value: float
    alpha: float
    critical_value: float
    significant: bool
    n: int = 0
    bins: int = 0
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        out = asdict(self)
        extra = out.pop("extra")
        out.update(extra)
        return out


def cell_variance(n, bins, leading_term=False):
    """Variance of one normalized histogram cell ``p_b`` under white noise.

    Delta-method variance of ``S_b / sum(S)`` where ``S_b`` is the mean of a
    binomially sized group of Rayleigh amplitudes.  ``1/M`` is expanded to
    third order around ``N/B``.
    """
    B = float(bins)
    N = float(n)
    inner = RAYLEIGH_CV2 / N * (
        1.0 / B**2 + (1.0 - 1.0 / B) / N * (1.0 / B - (1.0 - 2.0 / B) / (2.0 * N))
    )
    if leading_term:
        inner += 1.0 / B**3
    return B * (1.0 - 1.0 / B) * inner


def _h(a, bins, i, j):
    return digamma(a + i) - digamma(bins * a + j)


def _h1(a, bins, i, j):
    return trigamma(a + i) - trigamma(bins * a + j)


def entropy_contribution_moments(a, bins):
    """``E[p log p]`` and ``E[(p log p)^2]`` for ``p ~ Beta(a, (B-1) a)``."""
    m1 = _h(a, bins, 1, 1) / bins
    m2 = (a + 1.0) / (bins * (bins * a + 1.0)) * (_h1(a, bins, 2, 2) + _h(a, bins, 2, 2) ** 2)
    return m1, m2


def dirichlet_cross_moment(a, bins):
    """``E[p_i log p_i * p_j log p_j]`` for a symmetric Dirichlet(a, ..., a).

    ``E[p_i p_j] = a^2 / (A (A+1))`` with ``A = B a``, times
    ``E[log p_i log p_j]`` under Dirichlet(a+1, a+1, ..., A+2), whose
    covariance is ``-trigamma(A+2)``.
    """
    A = bins * a
    return a / (bins * (A + 1.0)) * (_h(a, bins, 1, 2) ** 2 - trigamma(A + 2.0))


def _printed_cross_moment(a, bins):
    return (trigamma(bins * a + 2.0) + _h(a, bins, 1, 2) ** 2) / bins


def null_params(n, bins, variant=CALIBRATED):
    """Beta approximation to the null distribution of the modulation index.

    Parameters
    ----------
    n : int
        Signal length (samples), at least 2.
    bins : int
        Phase bins, at least 2.
    variant : NullVariant or str
        Moment-chain reading; the default reproduces Monte Carlo.

    Raises
    ------
    NumericInstabilityError
        When the chain yields non-finite or non-positive shapes; the
        computed intermediates are attached to the exception.
    """
    if isinstance(variant, str):
        try:
            variant = VARIANTS[variant]
        except KeyError:
            raise InvalidArgumentError(f"unknown null-model variant {variant!r}") from None
    if int(n) != n or n < 2:
        raise InvalidArgumentError(f"n must be an integer >= 2, got {n}")
    if int(bins) != bins or bins < 2:
        raise InvalidArgumentError(f"bins must be an integer >= 2, got {bins}")
    n, bins = int(n), int(bins)
    B = float(bins)
    steps = {"n": n, "bins": bins, "variant": variant.name}

    mu_p = 1.0 / B
    sigma2_p = cell_variance(n, bins, variant.leading_term)
    a_p = mu_p * ((mu_p - mu_p**2) / sigma2_p - 1.0)
    b_p = (B - 1.0) * a_p
    steps.update(mu_p=mu_p, sigma2_p=sigma2_p, a_p=a_p, b_p=b_p)
    if not (math.isfinite(a_p) and a_p > 0):
        raise NumericInstabilityError("non-positive Dirichlet shape", steps)

    m1, m2 = entropy_contribution_moments(a_p, B)
    if variant.cross_moment == "dirichlet":
        c = dirichlet_cross_moment(a_p, B)
    elif variant.cross_moment == "printed":
        c = _printed_cross_moment(a_p, B)
    else:
        raise InvalidArgumentError(f"unknown cross-moment form {variant.cross_moment!r}")
    steps.update(m1=m1, m2=m2, c=c)

    cov = c - m1**2 if variant.centered else c
    mu_h = -m1 * B
    sigma2_h = B * (m2 - m1**2) + B * (B - 1.0) * cov
    if variant.normalized:
        mu_h /= math.log(B)
        sigma2_h /= math.log(B) ** 2
    steps.update(mu_h=mu_h, sigma2_h=sigma2_h)
    if not (math.isfinite(sigma2_h) and sigma2_h > 0):
        raise NumericInstabilityError("non-positive entropy variance", steps)

    d_h = (mu_h - mu_h**2) / sigma2_h - 1.0
    steps["d_h"] = d_h
    if not (math.isfinite(d_h) and d_h > 0 and 0 < mu_h < 1):
        raise NumericInstabilityError("entropy moments admit no beta distribution", steps)

    # MI = 1 - H/log B reflects the entropy shapes
    dist = BetaDist((1.0 - mu_h) * d_h, mu_h * d_h)
    return NullModelParams(
        n=n,
        bins=bins,
        mu_p=mu_p,
        sigma2_p=sigma2_p,
        a_p=a_p,
        b_p=b_p,
        m1=m1,
        m2=m2,
        c=c,
        mu_h=mu_h,
        sigma2_h=sigma2_h,
        d_h=d_h,
        dist=dist,
        variant=variant.name,
    )


def _check_alpha(alpha):
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")


def critical_value(params, alpha=0.01):
    """Smallest MI rejected at level ``alpha``: the ``1 - alpha`` quantile."""
    _check_alpha(alpha)
    return beta_inv_cdf(params.dist, 1.0 - alpha)


def p_value(params, mi):
    """Upper-tail probability of observing an MI at least ``mi`` under the null."""
    mi_arr = np.asarray(mi, dtype=float)
    if np.any(~np.isfinite(mi_arr)) or np.any(mi_arr < 0) or np.any(mi_arr > 1):
        raise DomainError("mi must lie in [0, 1]")
    return beta_sf(params.dist, mi)


def assess(mi, n, alpha=0.01, params=None):
    """Test an observed MI against the null for its length and bin count.

    ``mi`` is a :class:`~pacnull.mi.MiValue`; bins are taken from it.  The
    null is rejected when ``p_value < alpha``.
    """
    _check_alpha(alpha)
    if params is None:
        params = null_params(n, mi.bin_count)
    elif params.bins != mi.bin_count or params.n != n:
        raise InvalidArgumentError("params do not match (n, bins) of the observation")
    pv = p_value(params, mi.mi)
    cv = critical_value(params, alpha)
    return MiAssessment(
        mi=mi.mi,
        p_value=pv,
        alpha=alpha,
        critical_value=cv,
        significant=bool(pv < alpha),
        n=int(n),
        bins=mi.bin_count,
    )
