"""Exact measures of caps and equatorial tubes on high-dimensional spheres.

All measures are normalized rotation-invariant measures.  The measure of
the geodesic eps-neighborhood of an equatorial subsphere S^n inside S^N
has the closed form I_{sin^2 eps}((N-n)/2, (n+1)/2): for a uniform point
of S^N the squared norm of its last N-n coordinates is Beta-distributed,
and the geodesic distance to the equator is the arcsine of that norm.
This closed form is what the concentration lower bounds in this module
are checked against.

Every probability is carried together with its natural log
(:class:`MeasureValue`); the log value is authoritative below 1e-300.
"""

import math
from dataclasses import dataclass

from .betainc import log_betainc

__all__ = [
    "SphereQuery",
    "LevyConstants",
    "MeasureValue",
    "DEFAULT_LEVY",
    "cap_measure",
    "tube_measure",
    "levy_lower_bound",
    "recursive_tube_lower_bound",
    "TubeLowerBounds",
    "exponential_decay_ratio",
    "DecayRatio",
]


@dataclass(frozen=True)
class SphereQuery:
    """A (subsphere dim n, ambient dim N, geodesic radius epsilon) triple."""

    n: int
    N: int
    epsilon: float

    def __post_init__(self):
        if not (isinstance(self.n, int) and isinstance(self.N, int)):
            raise ValueError("dimensions must be integers")
        if not (0 <= self.n <= self.N):
            raise ValueError(f"need 0 <= n <= N, got n={self.n}, N={self.N}")
        if not (0.0 <= self.epsilon <= math.pi):
            raise ValueError(f"epsilon must lie in [0, pi], got {self.epsilon!r}")

    @property
    def codim(self) -> int:
        return self.N - self.n


@dataclass(frozen=True)
class LevyConstants:
    """Prefactor / rate pair (c1, c2) of the spherical concentration bound.

    The default (sqrt(pi/2), 1/2) makes 1 - c1*exp(-c2*eps^2*(m)) a true
    lower bound for the eps-tube of the equator in S^m: the tube
    complement consists of two caps, each bounded by
    sqrt(pi/8)*exp(-eps^2*m/2), hence the doubled prefactor.
    """

    c1: float = math.sqrt(math.pi / 2.0)
    c2: float = 0.5

    def __post_init__(self):
        if not (math.isfinite(self.c1) and self.c1 > 0.0):
            raise ValueError(f"c1 must be finite and positive, got {self.c1!r}")
        if not (math.isfinite(self.c2) and self.c2 > 0.0):
            raise ValueError(f"c2 must be finite and positive, got {self.c2!r}")


DEFAULT_LEVY = LevyConstants()


@dataclass(frozen=True)
class MeasureValue:
    """A probability with a parallel log representation.

    ``value`` is exp(log_value) rounded to double; below ~1e-300 it
    underflows to 0.0 and ``log_value`` is the authoritative record.
    """

    value: float
    log_value: float

    def __post_init__(self):
        if not (0.0 <= self.value <= 1.0):
            raise ValueError(f"value must lie in [0, 1], got {self.value!r}")
        if self.log_value > 0.0:
            raise ValueError(f"log_value must be <= 0, got {self.log_value!r}")

    @classmethod
    def from_log(cls, log_value: float) -> "MeasureValue":
        if log_value > 0.0 and log_value < 1e-12:
            log_value = 0.0  # rounding guard on the complementary branch
        return cls(math.exp(log_value), log_value)

    @classmethod
    def zero(cls) -> "MeasureValue":
        return cls(0.0, -math.inf)

    @classmethod
    def one(cls) -> "MeasureValue":
        return cls(1.0, 0.0)


def cap_measure(n: int, r: float) -> MeasureValue:
    """Normalized measure of a geodesic ball of radius r on S^n.

    For r <= pi/2 this is (1/2) I_{sin^2 r}(n/2, 1/2); beyond the
    hemisphere the complementary cap is used.
    """
    if n < 1:
        raise ValueError(f"sphere dimension must be >= 1, got {n}")
    if not (0.0 <= r <= math.pi):
        raise ValueError(f"cap radius must lie in [0, pi], got {r!r}")
    if r == 0.0:
        return MeasureValue.zero()
    if r == math.pi:
        return MeasureValue.one()
    if r > math.pi / 2.0:
        complement = cap_measure(n, math.pi - r)
        value = 1.0 - complement.value
        return MeasureValue(value, math.log(value))
    s = math.sin(r)
    log_val = log_betainc(s * s, n / 2.0, 0.5) - math.log(2.0)
    if r == math.pi / 2.0:
        return MeasureValue(0.5, math.log(0.5))
    return MeasureValue.from_log(log_val)


def tube_measure(q: SphereQuery) -> MeasureValue:
    """Measure of the geodesic eps-neighborhood of equatorial S^n in S^N.

    Exact value I_{sin^2 eps}((N-n)/2, (n+1)/2).  By convention the
    neighborhood of the whole sphere (n = N) has measure 1.
    """
    if q.epsilon > math.pi / 2.0:
        raise ValueError(f"tube radius must lie in [0, pi/2], got {q.epsilon!r}")
    if q.n == q.N:
        return MeasureValue.one()
    if q.epsilon == math.pi / 2.0:
        return MeasureValue.one()
    if q.epsilon == 0.0:
        return MeasureValue.zero()
    s = math.sin(q.epsilon)
    return MeasureValue.from_log(log_betainc(s * s, q.codim / 2.0, (q.n + 1) / 2.0))


def levy_lower_bound(n: int, epsilon: float, c: LevyConstants = DEFAULT_LEVY) -> float:
    """Concentration lower bound max(0, 1 - c1 exp(-c2 eps^2 (n+1))).

    Bounds tube_measure(n, n+1, eps) from below for the default
    constants.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if epsilon <= 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    return max(0.0, 1.0 - c.c1 * math.exp(-c.c2 * epsilon * epsilon * (n + 1)))


@dataclass(frozen=True)
class TubeLowerBounds:
    """Recursive product bound and its closed-form simplification.

    ``product`` is Prod_{j=1..k} max(0, 1 - c1 exp(-c2 (eps/sqrt(k))^2 (n+j))),
    obtained by stacking k one-codimension concentration steps of height
    eps/sqrt(k); ``simplified`` replaces every factor by the weakest one,
    (1 - c1 exp(-c2 eps^2 n/k))^k.  Always simplified <= product, and
    both bound the exact tube measure from below.
    """

    product: MeasureValue
    simplified: MeasureValue


def _log_levy_factor(arg: float, c: LevyConstants) -> float:
    """log max(0, 1 - c1 exp(-c2 * arg)); -inf when the factor clips at 0."""
    t = c.c1 * math.exp(-c.c2 * arg)
    if t >= 1.0:
        return -math.inf
    return math.log1p(-t)


def recursive_tube_lower_bound(
    q: SphereQuery, c: LevyConstants = DEFAULT_LEVY
) -> TubeLowerBounds:
    """Lower bounds for tube_measure(q) built from k = N - n nested steps.

    Restricted to eps < pi/2: the stacked-cylinder construction measures
    geodesic height above the equator, and heights at or beyond pi/2
    degenerate (the whole sphere, antipodal ambiguities).
    """
    k = q.codim
    if k < 1:
        raise ValueError("recursive bound needs N > n")
    if not (0.0 < q.epsilon < math.pi / 2.0):
        raise ValueError(f"epsilon must lie in (0, pi/2), got {q.epsilon!r}")
    eps2_over_k = q.epsilon * q.epsilon / k
    log_product = 0.0
    for j in range(1, k + 1):
        log_product += _log_levy_factor(eps2_over_k * (q.n + j), c)
        if log_product == -math.inf:
            break
    log_simplified = k * _log_levy_factor(eps2_over_k * q.n, c)
    return TubeLowerBounds(
        product=MeasureValue.from_log(log_product),
        simplified=MeasureValue.from_log(log_simplified),
    )


@dataclass(frozen=True)
class DecayRatio:
    """exp(-rate*n) / tube_measure(n, n+k, eps), tracked in log space.

    ``ratio`` is the linear value when representable; when the log-ratio
    leaves the representable range, ``overflowed`` is set and ``ratio``
    holds the clipped 0.0 / inf limit.
    """

    log_ratio: float
    ratio: float
    overflowed: bool


_LOG_DOUBLE_MAX = math.log(1.7976931348623157e308)


def exponential_decay_ratio(
    n: int, k: int, epsilon: float, decay_rate: float
) -> DecayRatio:
    """Ratio of the decaying exponential exp(-rate*n) to the exact tube measure.

    The tube of S^n inside S^{n+k} at radius eps eventually dominates
    every exponential exp(-C n) when k grows sublinearly; this ratio is
    the quantitative diagnostic of that fact.
    """
    if n < 1 or k < 1:
        raise ValueError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    if epsilon <= 0.0 or decay_rate <= 0.0:
        raise ValueError("epsilon and decay_rate must be positive")
    log_tube = tube_measure(SphereQuery(n, n + k, epsilon)).log_value
    log_ratio = -decay_rate * n - log_tube
    if abs(log_ratio) > _LOG_DOUBLE_MAX:
        return DecayRatio(log_ratio, 0.0 if log_ratio < 0 else math.inf, True)
    return DecayRatio(log_ratio, math.exp(log_ratio), False)
