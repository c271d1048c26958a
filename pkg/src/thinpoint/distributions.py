"""Absolutely continuous distributions and the probability integral transform."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

from .pointset import DomainError, PointSet, from_unsorted

__all__ = [
    "CustomDistribution",
    "DistributionSpec",
    "Exponential",
    "Normal",
    "Uniform01",
    "cdf",
    "parse_distribution",
    "quantile",
    "sample",
    "transform_to_uniform",
]


class DistributionSpec:
    """Base class: a continuous law with vectorised ``cdf`` and ``quantile``."""

    def cdf(self, x):
        raise NotImplementedError

    def quantile(self, u):
        raise NotImplementedError

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if n < 0:
            raise DomainError(f"sample size must be non-negative, got {n!r}")
        # random() is on [0, 1); reject the single value 0 to stay in (0, 1)
        u = rng.random(n)
        while n and (u == 0.0).any():
            zero = u == 0.0
            u[zero] = rng.random(int(zero.sum()))
        return self.quantile(u)


def _check_u(u):
    u = np.asarray(u, dtype=np.float64)
    if not np.all((u > 0.0) & (u < 1.0)):
        raise DomainError("quantile needs u strictly inside (0, 1)")
    return u


def _out(arr):
    return float(arr) if np.ndim(arr) == 0 else arr


@dataclass(frozen=True)
class Uniform01(DistributionSpec):
    def cdf(self, x):
        return _out(np.clip(np.asarray(x, dtype=np.float64), 0.0, 1.0))

    def quantile(self, u):
        return _out(_check_u(u).copy())

    def __str__(self):
        return "uniform"


@dataclass(frozen=True)
class Normal(DistributionSpec):
    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"Normal sigma must be positive, got {self.sigma!r}")

    def cdf(self, x):
        z = (np.asarray(x, dtype=np.float64) - self.mu) / self.sigma
        return _out(0.5 * special.erfc(-z / math.sqrt(2.0)))

    def quantile(self, u):
        return _out(self.mu + self.sigma * special.ndtri(_check_u(u)))

    def __str__(self):
        return f"normal:{self.mu!r},{self.sigma!r}"


@dataclass(frozen=True)
class Exponential(DistributionSpec):
    rate: float = 1.0

    def __post_init__(self):
        if not self.rate > 0:
            raise DomainError(f"Exponential rate must be positive, got {self.rate!r}")

    def cdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        return _out(np.where(x > 0, -np.expm1(-self.rate * np.maximum(x, 0.0)), 0.0))

    def quantile(self, u):
        return _out(-np.log1p(-_check_u(u)) / self.rate)

    def __str__(self):
        return f"exp:{self.rate!r}"


@dataclass(frozen=True)
class CustomDistribution(DistributionSpec):
    """User-supplied ``cdf``/``quantile`` pair, both vectorised over numpy arrays."""

    cdf_fn: Callable
    quantile_fn: Callable
    name: str = "custom"

    def cdf(self, x):
        return _out(np.asarray(self.cdf_fn(np.asarray(x, dtype=np.float64)), dtype=np.float64))

    def quantile(self, u):
        return _out(np.asarray(self.quantile_fn(_check_u(u)), dtype=np.float64))

    def __str__(self):
        return self.name


def parse_distribution(text: str) -> DistributionSpec:
    """Parse ``uniform``, ``normal:MU,SIGMA`` or ``exp:RATE``."""
    name, _, args = text.strip().partition(":")
    name = name.lower()
    try:
        params = [float(a) for a in args.split(",")] if args else []
    except ValueError:
        raise DomainError(f"bad distribution parameters in {text!r}") from None
    if name == "uniform" and not params:
        return Uniform01()
    if name == "normal" and len(params) in (0, 2):
        return Normal(*params)
    if name in ("exp", "exponential") and len(params) in (0, 1):
        return Exponential(*params)
    raise DomainError(f"unknown distribution {text!r}; use uniform, normal:MU,SIGMA or exp:RATE")


def cdf(spec: DistributionSpec, x):
    return spec.cdf(x)


def quantile(spec: DistributionSpec, u):
    return spec.quantile(u)


def sample(spec: DistributionSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` i.i.d. draws by inverse transform of uniforms from ``rng``."""
    return spec.sample(n, rng)


def transform_to_uniform(samples, spec: DistributionSpec) -> PointSet:
    """Map samples through their CDF; the images are i.i.d. uniform on [0, 1]."""
    samples = np.asarray(samples, dtype=np.float64).ravel()
    if samples.size == 0:
        return PointSet(np.empty(0))
    return from_unsorted(np.atleast_1d(spec.cdf(samples)))
