"""Tail bounds used by the thinning argument, and the planner that picks
the bin count and per-bin keep target for a sample size and deletion budget.

All logarithms are natural.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from enum import Enum

from .pointset import DomainError

__all__ = [
    "BUDGET_FRACTION",
    "Regime",
    "ThinningPlan",
    "binning_failure_prob",
    "chernoff_lower_tail",
    "dkw_tail",
    "kolmogorov_sf",
    "max_bins",
    "no_deletion_threshold",
    "plan_thinning",
    "proof_bound",
    "theorem_bound",
]

# Largest admissible deletion budget as a fraction of n.
BUDGET_FRACTION = 0.1

KOLMOGOROV_Z_MIN = 0.04
_SERIES_TOL = 1e-16


class Regime(str, Enum):
    NO_DELETION = "NoDeletion"
    THIN = "Thin"


def chernoff_lower_tail(mu: float, delta: float) -> float:
    """Multiplicative Chernoff bound ``P(X <= (1 - delta) mu) <= exp(-delta^2 mu / 2)``."""
    if not mu > 0:
        raise DomainError(f"mu must be positive, got {mu!r}")
    if not 0.0 <= delta < 1.0:
        raise DomainError(f"delta must lie in [0, 1), got {delta!r}")
    return math.exp(-delta * delta * mu / 2.0)


def binning_failure_prob(n: int, k: int, lam: float) -> float:
    """Union bound over ``k`` bins that some bin gets at most ``n/k - lam`` points."""
    if n < 1 or not 1 <= k <= n or lam < 0:
        raise DomainError(f"need n >= 1, 1 <= k <= n, lam >= 0; got {(n, k, lam)!r}")
    return min(1.0, k * math.exp(-lam * lam * k / (2.0 * n)))


def dkw_tail(n: int, eps: float) -> float:
    """Dvoretzky-Kiefer-Wolfowitz bound ``min(1, 2 exp(-2 n eps^2))``."""
    if n < 1 or eps < 0:
        raise DomainError(f"need n >= 1 and eps >= 0; got {(n, eps)!r}")
    return min(1.0, 2.0 * math.exp(-2.0 * n * eps * eps))


def kolmogorov_sf(z: float) -> float:
    """Survival function of the Kolmogorov distribution, ``P(sup |B(t)| >= z)``.

    Sums ``2 * sum_{j>=1} (-1)^(j-1) exp(-2 j^2 z^2)`` until the next term
    drops below 1e-16. Below ``z = 0.04`` the value is 1 to double precision
    and the series is not used.
    """
    if z < 0 or math.isnan(z):
        raise DomainError(f"z must be non-negative, got {z!r}")
    if z < KOLMOGOROV_Z_MIN:
        return 1.0
    terms = []
    j = 1
    while True:
        t = math.exp(-2.0 * j * j * z * z)
        terms.append(t if j % 2 else -t)
        if math.exp(-2.0 * (j + 1) ** 2 * z * z) < _SERIES_TOL:
            break
        j += 1
    return min(1.0, max(0.0, 2.0 * math.fsum(terms)))


def theorem_bound(n: float, m: float) -> float:
    """Headline guarantee ``100 ln(n) / m`` on the discrepancy after thinning."""
    if n < 2 or m < 1:
        raise DomainError(f"need n >= 2 and m >= 1; got {(n, m)!r}")
    return 100.0 * math.log(n) / m


def proof_bound(M: int, k: int) -> float:
    """High-probability bound ``10 sqrt(ln(Mk) / (Mk))`` for ``M`` kept points in ``k`` bins."""
    t = M * k
    if t < 2:
        raise DomainError(f"need M*k >= 2, got {t!r}")
    return 10.0 * math.sqrt(math.log(t) / t)


def no_deletion_threshold(n: int, c_lambda: float = 10.0) -> float:
    """Budgets below ``sqrt(c_lambda n ln n)`` are not worth spending."""
    return math.sqrt(c_lambda * n * math.log(n))


def max_bins(n: int, c_lambda: float = 10.0) -> int:
    """Largest ``k`` with ``lambda(k) <= n / (10 k)``, i.e. ``floor(n / (100 c_lambda ln n))``.

    For ``c_lambda = 10`` this is ``floor(0.001 n / ln n)``.
    """
    return int(math.floor(n / (100.0 * c_lambda * math.log(n))))


@dataclass(frozen=True)
class ThinningPlan:
    """Parameters of one thinning run.

    In the ``Thin`` regime each of ``k`` equal bins is cut down to ``cap``
    points, deleting at most ``max_deletions = n - k*cap`` points when no
    bin falls short. In the ``NoDeletion`` regime ``k``, ``lam`` and ``cap``
    are ``None`` and nothing is removed.
    """

    n: int
    m: int
    c_lambda: float
    regime: Regime
    k: int | None = None
    lam: float | None = None
    cap: int | None = None
    max_deletions: int = 0

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise DomainError("n and m must be non-negative")
        if self.regime is Regime.NO_DELETION:
            if self.k is not None or self.cap is not None or self.max_deletions:
                raise DomainError("a NoDeletion plan carries no bins and deletes nothing")
            return
        if self.k is None or self.k < 1:
            raise DomainError("a Thin plan needs k >= 1")
        if self.cap is None or self.cap < 1:
            raise DomainError("a Thin plan needs cap >= 1")
        if self.max_deletions != max(0, self.n - self.k * self.cap):
            raise DomainError("max_deletions must equal n - k*cap")
        if self.max_deletions > self.m:
            raise DomainError(f"plan deletes {self.max_deletions} points, over the budget m = {self.m}")

    @classmethod
    def no_deletion(cls, n: int, m: int = 0, c_lambda: float = 10.0) -> ThinningPlan:
        return cls(n=n, m=m, c_lambda=c_lambda, regime=Regime.NO_DELETION)

    @classmethod
    def manual(cls, n: int, k: int, cap: int, m: int | None = None,
               c_lambda: float = 10.0) -> ThinningPlan:
        """Hand-built plan with explicit ``k`` and ``cap``.

        The budget ``m`` defaults to ``n``, which leaves the caps alone even
        when bins fall short. ``lam`` is set to the implied shortfall
        ``n/k - cap``. The planner's limit on ``k`` is not enforced.
        """
        return cls(n=n, m=n if m is None else m, c_lambda=c_lambda, regime=Regime.THIN,
                   k=k, lam=n / k - cap, cap=cap, max_deletions=max(0, n - k * cap))

    @property
    def is_thin(self) -> bool:
        return self.regime is Regime.THIN

    def to_dict(self) -> dict:
        d = asdict(self)
        d["regime"] = self.regime.value
        d["lambda"] = d.pop("lam")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ThinningPlan:
        d = dict(d)
        d["lam"] = d.pop("lambda", None)
        d["regime"] = Regime(d["regime"])
        return cls(**d)


def plan_thinning(n: int, m: int, c_lambda: float = 10.0) -> ThinningPlan:
    """Choose the bin count and keep target for ``n`` points and budget ``m``.

    Budgets below :func:`no_deletion_threshold` give a ``NoDeletion`` plan.
    Otherwise ``k`` starts at ``min(floor(m^2 / (c_lambda n ln n)), max_bins(n))``
    and decreases until ``n - k * floor(n/k - lambda(k)) <= m``, where
    ``lambda(k) = sqrt(c_lambda n ln n / k)``. Flooring can push the deletion
    count above ``k * lambda``; the scan keeps the budget exact.

    Raises
    ------
    DomainError
        If ``n < 2``, ``m < 0`` or ``m > 0.1 n``.
    """
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")
    if int(m) != m or m < 0:
        raise DomainError(f"m must be a non-negative integer, got {m!r}")
    if not c_lambda > 0:
        raise DomainError(f"c_lambda must be positive, got {c_lambda!r}")
    n, m = int(n), int(m)
    if m > math.floor(BUDGET_FRACTION * n):
        raise DomainError(
            f"deletion budget m = {m} exceeds {BUDGET_FRACTION} n = {BUDGET_FRACTION * n:g}"
        )
    scale = c_lambda * n * math.log(n)
    if m < math.sqrt(scale):
        return ThinningPlan.no_deletion(n, m, c_lambda)
    k = min(int(math.floor(m * m / scale)), max_bins(n, c_lambda))
    while k >= 1:
        lam = math.sqrt(scale / k)
        cap = int(math.floor(n / k - lam))
        if cap >= 1 and n - k * cap <= m:
            plan = ThinningPlan(n=n, m=m, c_lambda=c_lambda, regime=Regime.THIN,
                                k=k, lam=lam, cap=cap, max_deletions=n - k * cap)
            assert lam <= n / (10.0 * k) * (1 + 1e-12)
            return plan
        k -= 1
    return ThinningPlan.no_deletion(n, m, c_lambda)
