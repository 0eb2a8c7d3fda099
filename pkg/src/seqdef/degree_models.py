"""Parametric degree distributions and their moment machinery.

Four model kinds are supported: Erdos-Renyi (Poisson degrees with mean
k_hat), power-law (skewness alpha), exponential (scale beta), and
empirical histograms. Analytic moments use the continuous approximation
on [k_min, k_max] (the exponential kind in its large-k_max limit), while
sampling produces integer degree sequences suitable for configuration
model generation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ._rand import rng_stream
from .errors import ConfigError

ER = "er"
POWER_LAW = "power_law"
EXPONENTIAL = "exponential"
EMPIRICAL = "empirical"

_PARAMETRIC = (ER, POWER_LAW, EXPONENTIAL)

DEFAULT_K_MIN = 1
DEFAULT_K_MAX = 1000
DEFAULT_N = 10000


@dataclass(frozen=True)
class DegreeModel:
    """A degree distribution plus support bounds and network size.

    Instances are immutable; build them with the `er`, `power_law`,
    `exponential`, `empirical`, or `empirical_from_file` constructors.
    """

    kind: str
    k_min: int = DEFAULT_K_MIN
    k_max: int = DEFAULT_K_MAX
    n: int = DEFAULT_N
    k_hat: float | None = None
    alpha: float | None = None
    beta: float | None = None
    histogram: Mapping[int, float] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind not in (*_PARAMETRIC, EMPIRICAL):
            raise ConfigError(f"unknown degree model kind {self.kind!r}")
        if self.k_min < 1:
            raise ConfigError("k_min must be >= 1")
        if self.k_max < self.k_min:
            raise ConfigError("k_max must be >= k_min")
        if self.n < 2:
            raise ConfigError("network size n must be >= 2")
        if self.kind in _PARAMETRIC and self.k_max == self.k_min:
            raise ConfigError("degenerate support (k_min == k_max) for parametric model")
        if self.kind == ER:
            if self.k_hat is None or self.k_hat <= 0:
                raise ConfigError("ER model needs mean degree k_hat > 0")
        elif self.kind == POWER_LAW:
            if self.alpha is None or self.alpha <= 1:
                raise ConfigError("power-law model needs alpha > 1")
        elif self.kind == EXPONENTIAL:
            if self.beta is None or self.beta <= 0:
                raise ConfigError("exponential model needs beta > 0")
        else:
            if not self.histogram:
                raise ConfigError("empirical model needs a non-empty histogram")
            total = math.fsum(self.histogram.values())
            if abs(total - 1.0) > 1e-9:
                raise ConfigError(f"empirical histogram sums to {total!r}, not 1")
            for k, p in self.histogram.items():
                if not (self.k_min <= int(k) <= self.k_max):
                    raise ConfigError(f"histogram degree {k} outside [{self.k_min}, {self.k_max}]")
                if p < 0:
                    raise ConfigError(f"histogram probability for degree {k} is negative")

    @classmethod
    def er(cls, k_hat, k_min=DEFAULT_K_MIN, k_max=DEFAULT_K_MAX, n=DEFAULT_N):
        return cls(kind=ER, k_hat=float(k_hat), k_min=k_min, k_max=k_max, n=n)

    @classmethod
    def power_law(cls, alpha, k_min=DEFAULT_K_MIN, k_max=DEFAULT_K_MAX, n=DEFAULT_N):
        return cls(kind=POWER_LAW, alpha=float(alpha), k_min=k_min, k_max=k_max, n=n)

    @classmethod
    def exponential(cls, beta, k_min=DEFAULT_K_MIN, k_max=DEFAULT_K_MAX, n=DEFAULT_N):
        return cls(kind=EXPONENTIAL, beta=float(beta), k_min=k_min, k_max=k_max, n=n)

    @classmethod
    def empirical(cls, histogram, n=DEFAULT_N, k_min=None, k_max=None):
        hist = {int(k): float(p) for k, p in histogram.items()}
        if not hist:
            raise ConfigError("empirical model needs a non-empty histogram")
        lo = min(hist) if k_min is None else k_min
        hi = max(hist) if k_max is None else k_max
        return cls(kind=EMPIRICAL, histogram=hist, k_min=lo, k_max=hi, n=n)

    @classmethod
    def empirical_from_file(cls, path, n=DEFAULT_N):
        return cls.empirical(load_histogram(path), n=n)


@dataclass(frozen=True)
class MomentSummary:
    """First two degree moments and their ratio tau = E[K^2]/E[K]."""

    mean_degree: float
    second_moment: float
    tau: float


def load_histogram(path) -> dict[int, float]:
    """Read a two-column "degree probability" text file ('#' comments)."""
    hist: dict[int, float] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ConfigError(f"{path}:{lineno}: expected 'degree probability', got {raw.strip()!r}")
            try:
                k = int(parts[0])
                p = float(parts[1])
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from exc
            hist[k] = hist.get(k, 0.0) + p
    if not hist:
        raise ConfigError(f"{path}: empty histogram")
    return hist


def _power_integral(a: float, b: float, p: float) -> float:
    """Integral of k^p over [a, b], stable through the p = -1 singularity."""
    s = p + 1.0
    span = math.log(b / a)
    if s == 0.0:
        return span
    # a^s * (e^{s*span} - 1) / s; expm1 keeps the s -> 0 limit smooth
    return a**s * math.expm1(s * span) / s


def moments(model: DegreeModel) -> MomentSummary:
    """First two moments of the degree distribution.

    ER uses the Poisson identities, power-law the normalized continuous
    moment integrals (with logarithmic branches at alpha = 2 and 3),
    and exponential the large-k_max limit closed forms.
    """
    if model.kind == ER:
        m1 = model.k_hat
        m2 = model.k_hat**2 + model.k_hat
    elif model.kind == POWER_LAW:
        a, b, alpha = float(model.k_min), float(model.k_max), model.alpha
        c1 = 1.0 / _power_integral(a, b, -alpha)
        m1 = c1 * _power_integral(a, b, 1.0 - alpha)
        m2 = c1 * _power_integral(a, b, 2.0 - alpha)
    elif model.kind == EXPONENTIAL:
        kn, beta = float(model.k_min), model.beta
        m1 = kn + beta
        m2 = kn**2 + 2.0 * kn * beta + 2.0 * beta**2
    else:
        items = sorted(model.histogram.items())
        m1 = math.fsum(k * p for k, p in items)
        m2 = math.fsum(k * k * p for k, p in items)
    return MomentSummary(m1, m2, m2 / m1)


def giant_component_exists(model: DegreeModel) -> bool:
    """Molloy-Reed criterion: a giant component exists iff tau > 2."""
    return moments(model).tau > 2.0


def thin(model: DegreeModel, q: float) -> MomentSummary:
    """Moments after uniformly random removal of a q fraction of nodes.

    Removal binomially thins each surviving node's degree, so
    E[K] -> (1-q) E[K0] and E[K^2] -> (1-q)^2 E[K0^2] + q(1-q) E[K0].
    At q = 1 the network is empty and tau is reported as 0.
    """
    if not 0.0 <= q <= 1.0:
        raise ConfigError("removal fraction q must lie in [0, 1]")
    m0 = moments(model)
    keep = 1.0 - q
    m1 = keep * m0.mean_degree
    m2 = keep * keep * m0.second_moment + q * keep * m0.mean_degree
    tau = m2 / m1 if m1 > 0.0 else 0.0
    return MomentSummary(m1, m2, tau)


def discrete_pmf(model: DegreeModel) -> tuple[np.ndarray, np.ndarray]:
    """Normalized probability masses on the integer support [k_min, k_max]."""
    ks = np.arange(model.k_min, model.k_max + 1, dtype=np.int64)
    if model.kind == ER:
        # Poisson masses via the multiplicative recurrence
        logp = ks * math.log(model.k_hat) - model.k_hat - np.array(
            [math.lgamma(k + 1.0) for k in ks]
        )
        w = np.exp(logp)
    elif model.kind == POWER_LAW:
        w = ks.astype(float) ** (-model.alpha)
    elif model.kind == EXPONENTIAL:
        w = np.exp(-ks / model.beta)
    else:
        w = np.zeros(ks.shape)
        for k, p in model.histogram.items():
            w[int(k) - model.k_min] += p
    return ks, w / w.sum()


def _continuous_inverse_cdf(model: DegreeModel, u: np.ndarray) -> np.ndarray:
    a, b = float(model.k_min), float(model.k_max)
    if model.kind == POWER_LAW:
        s = 1.0 - model.alpha
        return (a**s + u * (b**s - a**s)) ** (1.0 / s)
    # exponential: truncated density ~ e^{-k/beta} on [a, b]
    beta = model.beta
    return a - beta * np.log1p(-u * (1.0 - math.exp(-(b - a) / beta)))


def _resample_overflow(draw, size, k_max):
    draws = draw(size)
    while True:
        over = draws > k_max
        if not over.any():
            return draws.astype(np.int64)
        draws[over] = draw(int(over.sum()))


def _draw(model: DegreeModel, size: int, rng: np.random.Generator) -> np.ndarray:
    if model.kind == ER:
        return _resample_overflow(lambda m: rng.poisson(model.k_hat, size=m), size, model.k_max)
    if model.kind == EMPIRICAL:
        ks, ps = discrete_pmf(model)
        return rng.choice(ks, size=size, p=ps)
    if model.kind == EXPONENTIAL and model.beta > 1.0:
        # negative-binomial offset calibrated so both closed-form moments
        # hold exactly: mean beta needs p = 1/beta, and r = beta/(beta-1)
        # then gives variance beta^2
        r = model.beta / (model.beta - 1.0)
        p = 1.0 / model.beta
        return _resample_overflow(
            lambda m: model.k_min + rng.negative_binomial(r, p, size=m), size, model.k_max
        )
    # remaining continuous kinds: inverse-CDF draw, then mean-preserving
    # stochastic rounding (floor plus a Bernoulli on the fractional part)
    t = _continuous_inverse_cdf(model, rng.random(size))
    base = np.floor(t)
    k = base + (rng.random(size) < (t - base))
    return np.clip(k, model.k_min, model.k_max).astype(np.int64)


def sample_degree_sequence(model: DegreeModel, size: int, seed: int) -> np.ndarray:
    """Draw `size` i.i.d. degrees; the sum is forced even by resampling one entry.

    Deterministic given (model, size, seed). ER draws keep the full
    Poisson support (isolated nodes occur in ER graphs); the other kinds
    stay within [k_min, k_max].
    """
    if size < 2:
        raise ConfigError("degree sequence needs size >= 2")
    rng = rng_stream(seed, 0xDE6)  # stream tag for degree draws
    seq = _draw(model, size, rng)
    if int(seq.sum()) % 2 == 1:
        old = int(seq[-1])
        for _ in range(1000):
            new = int(_draw(model, 1, rng)[0])
            if (new - old) % 2 == 1:
                seq[-1] = new
                break
        else:
            raise ConfigError("cannot make degree sum even by resampling one entry")
    return seq
