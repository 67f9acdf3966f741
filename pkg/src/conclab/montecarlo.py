"""Monte Carlo estimates of neighborhood measures on spheres.

Uniform sphere samples come from normalized Gaussian vectors.  The
geodesic distance from a point of S^N to the equatorial S^n is the
arcsine of the norm of its last N-n coordinates, so every tube / cap /
cylinder membership test reduces to coordinate-block norms; no nearest
point search is ever performed.  Everything is chunked so that large
sample counts stay inside a fixed memory budget.
"""

import math
from dataclasses import dataclass

import numpy as np

from .sphere import SphereQuery, cap_measure, tube_measure
from .streams import Estimate, SampleStream

__all__ = [
    "sample_sphere",
    "estimate_tube_measure",
    "estimate_tube_profile",
    "estimate_cylinder_measure",
    "check_fibre_inequality",
    "FibreReport",
    "DEFAULT_CHUNK",
]

DEFAULT_CHUNK = 1 << 16
_CHUNK_ELEMENTS = 1 << 24  # ~134 MB of doubles per chunk matrix

_ZERO_NORM = 1e-150  # an all-but-impossible draw; resampled when hit


def _auto_chunk(chunk: int, dim: int) -> int:
    return max(1024, min(chunk, _CHUNK_ELEMENTS // max(1, dim)))


def _gaussian_chunk(rng: np.random.Generator, rows: int, dim: int) -> np.ndarray:
    """Gaussian matrix with every row guaranteed nonzero."""
    x = rng.standard_normal((rows, dim))
    norms = np.linalg.norm(x, axis=1)
    while np.any(norms < _ZERO_NORM):
        bad = norms < _ZERO_NORM
        x[bad] = rng.standard_normal((int(bad.sum()), dim))
        norms = np.linalg.norm(x, axis=1)
    return x


def sample_sphere(n: int, stream: SampleStream, count: int) -> np.ndarray:
    """(count, n+1) array of i.i.d. uniform points on S^n, rows of norm 1."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if count < 1:
        raise ValueError(f"need count >= 1, got {count}")
    rng = stream.generator()
    x = _gaussian_chunk(rng, count, n + 1)
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x


def _chunk_sizes(count: int, chunk: int):
    done = 0
    while done < count:
        step = min(chunk, count - done)
        yield step
        done += step


def estimate_tube_measure(
    q: SphereQuery, stream: SampleStream, count: int, chunk: int = DEFAULT_CHUNK
) -> Estimate:
    """Fraction of uniform S^N samples within geodesic eps of equatorial S^n."""
    return estimate_tube_profile(q.n, q.N, [q.epsilon], stream, count, chunk)[0]


def estimate_tube_profile(
    n: int,
    N: int,
    epsilons,
    stream: SampleStream,
    count: int,
    chunk: int = DEFAULT_CHUNK,
) -> list:
    """Tube estimates for several radii over one shared sample pass.

    Each returned Estimate equals what estimate_tube_measure would give
    for its radius from this stream; batching only avoids regenerating
    the identical sample set per radius.
    """
    for eps in epsilons:
        SphereQuery(n, N, eps)
        if eps > math.pi / 2.0:
            raise ValueError("tube radius must lie in [0, pi/2]")
    k = N - n
    thresholds = [math.sin(e) ** 2 for e in epsilons]
    rng = stream.generator()
    hits = [0] * len(thresholds)
    chunk = _auto_chunk(chunk, N + 1)
    for rows in _chunk_sizes(count, chunk):
        x = _gaussian_chunk(rng, rows, N + 1)
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        if k == 0:
            for i in range(len(hits)):
                hits[i] += rows
            continue
        tail_sq = np.einsum("ij,ij->i", x[:, n + 1 :], x[:, n + 1 :])
        for i, t in enumerate(thresholds):
            hits[i] += int(np.count_nonzero(tail_sq <= t))
    return [Estimate.from_hits(h, count) for h in hits]


def estimate_cylinder_measure(
    n: int,
    cap_radius: float,
    epsilon: float,
    stream: SampleStream,
    count: int,
    chunk: int = DEFAULT_CHUNK,
) -> Estimate:
    """Measure of the spherical cylinder over a cap, estimated on S^{n+1}.

    The cylinder is the set of points of S^{n+1} within geodesic height
    epsilon of the equatorial S^n whose normalized projection onto the
    equator hyperplane lands in the cap of the given radius (centered at
    the first coordinate axis).  Its exact measure factorizes as
    cap_measure(n, cap_radius) * tube_measure(n, n+1, epsilon).
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not (0.0 <= cap_radius <= math.pi):
        raise ValueError(f"cap radius must lie in [0, pi], got {cap_radius!r}")
    if not (0.0 <= epsilon <= math.pi / 2.0):
        raise ValueError(f"epsilon must lie in [0, pi/2], got {epsilon!r}")
    height_threshold = math.sin(epsilon) ** 2
    cos_cap = math.cos(cap_radius)
    rng = stream.generator()
    hits = 0
    chunk = _auto_chunk(chunk, n + 2)
    for rows in _chunk_sizes(count, chunk):
        x = _gaussian_chunk(rng, rows, n + 2)
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        last_sq = x[:, -1] ** 2
        in_tube = last_sq <= height_threshold
        proj_norm = np.sqrt(1.0 - last_sq)
        while np.any(proj_norm < 1e-12):  # poles: projection undefined, resample
            bad = proj_norm < 1e-12
            y = _gaussian_chunk(rng, int(bad.sum()), n + 2)
            y /= np.linalg.norm(y, axis=1, keepdims=True)
            x[bad] = y
            last_sq = x[:, -1] ** 2
            in_tube = last_sq <= height_threshold
            proj_norm = np.sqrt(1.0 - last_sq)
        in_cap = x[:, 0] >= cos_cap * proj_norm
        hits += int(np.count_nonzero(in_tube & in_cap))
    return Estimate.from_hits(hits, count)


@dataclass(frozen=True)
class FibreReport:
    """Empirical check of mu_N(O_eps(A)) >= mu_n(A) * mu_N(O_eps(S^n))."""

    lhs: Estimate
    rhs: float
    margin: float
    violation: bool


def check_fibre_inequality(
    n: int,
    N: int,
    cap_radius: float,
    epsilon: float,
    stream: SampleStream,
    count: int,
    chunk: int = DEFAULT_CHUNK,
) -> FibreReport:
    """Compare the eps-neighborhood measure of a cap A in S^n against the
    product lower bound cap_measure(n, |A|) * tube_measure(n, N, eps).

    The geodesic distance from x in S^N to the cap (centered at the
    first axis, inside the equatorial S^n) has a closed form: project x
    to the equator plane, measure the angular excess of the projection
    direction over the cap radius, and combine with the projection norm.
    A violation is flagged only when the estimate falls more than 4
    standard errors below the product.
    """
    if not (1 <= n < N):
        raise ValueError(f"need 1 <= n < N, got n={n}, N={N}")
    if not (0.0 < cap_radius <= math.pi):
        raise ValueError(f"cap radius must lie in (0, pi], got {cap_radius!r}")
    if not (0.0 < epsilon <= math.pi / 2.0):
        raise ValueError(f"epsilon must lie in (0, pi/2], got {epsilon!r}")
    cos_eps = math.cos(epsilon)
    rng = stream.generator()
    hits = 0
    chunk = _auto_chunk(chunk, N + 1)
    for rows in _chunk_sizes(count, chunk):
        x = _gaussian_chunk(rng, rows, N + 1)
        x /= np.linalg.norm(x, axis=1, keepdims=True)
        proj = x[:, : n + 1]
        proj_norm = np.linalg.norm(proj, axis=1)
        while np.any(proj_norm < 1e-12):
            bad = proj_norm < 1e-12
            y = _gaussian_chunk(rng, int(bad.sum()), N + 1)
            y /= np.linalg.norm(y, axis=1, keepdims=True)
            x[bad] = y
            proj = x[:, : n + 1]
            proj_norm = np.linalg.norm(proj, axis=1)
        cos_angle = np.clip(x[:, 0] / proj_norm, -1.0, 1.0)
        excess = np.maximum(0.0, np.arccos(cos_angle) - cap_radius)
        # cos d(x, A) = |proj| * cos(excess); inside iff d <= epsilon
        hits += int(np.count_nonzero(proj_norm * np.cos(excess) >= cos_eps))
    lhs = Estimate.from_hits(hits, count)
    rhs = cap_measure(n, cap_radius).value * tube_measure(SphereQuery(n, N, epsilon)).value
    margin = lhs.mean - rhs
    violation = lhs.mean + 4.0 * lhs.std_error < rhs
    return FibreReport(lhs=lhs, rhs=rhs, margin=margin, violation=violation)
