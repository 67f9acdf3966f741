"""Prefix partition of the rank-2 free group, the unit-sphere cover built
from it, and verifier/refuter tooling for the translated-neighborhood
separation claims about that cover.

The group partitions into classes W_n (words whose reduced form leads
with a^n).  The cover splits the unit sphere of finitely supported
vectors by the restricted norm over W_0 at threshold 1/3.  Everything
here evaluates the two branches of that construction -- the certified
chain for the low-mass branch, and the pigeonhole diagnostics for the
high-mass branch -- and reports outcomes as data.  Claims are never
asserted; where the construction's stated bound fails, the failure is
recorded together with the witnessing vector.

Two translation conventions are supported, because the construction's
translated-norm step reads differently under each:

* ``PAPER``:   (g f)(h) = f(g h)      (atom at w moves to g^-1 w)
* ``INVERSE``: (g f)(h) = f(g^-1 h)   (atom at w moves to g w)

Every report names the convention it was computed under.
"""

import json
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .l2vec import L2Vector, delta
from .streams import SampleStream
from .words import (
    IDENTITY,
    ReducedWord,
    classify_prefix,
    enumerate_ball,
    inverse,
    multiply,
    word,
)

__all__ = [
    "ActionConvention",
    "act",
    "vector_to_json",
    "vector_from_json",
    "restricted_norm",
    "classify_cover",
    "PrefixSet",
    "W0",
    "NormWitness",
    "CoverClass",
    "TranslatedClass",
    "A1",
    "A2",
    "designated_candidate",
    "BallFrame",
    "sample_unit_vectors",
    "sample_cover_vectors",
    "distance_to_class",
    "project_to_class",
    "count_inclusion_exceptions",
    "verify_A1_separation",
    "A1SeparationReport",
    "evaluate_A2_claim",
    "A2ClaimReport",
    "neighborhood_disjointness",
    "SeparationCertificate",
    "RefutationSearchResult",
]

ONE_THIRD = 1.0 / 3.0
_BOUNDARY_TOL = 1e-12


class ActionConvention(Enum):
    PAPER = "paper"
    INVERSE = "inverse"


def act(g: ReducedWord, f: L2Vector, convention: ActionConvention = ActionConvention.PAPER) -> L2Vector:
    """Translation action of g on a vector; exactly norm-preserving."""
    if convention is ActionConvention.PAPER:
        g_inv = inverse(g)
        return f.rekey(lambda w: multiply(g_inv, w))
    return f.rekey(lambda w: multiply(g, w))


def vector_to_json(f: L2Vector) -> str:
    """JSON map from word strings ("aaBa" style, "" = identity) to amplitudes."""
    return json.dumps(
        {str(w): v for w, v in f.amplitudes.items()},
        sort_keys=True,
        separators=(",", ":"),
    )


def vector_from_json(text: str) -> L2Vector:
    data = json.loads(text)
    return L2Vector({word(k): float(v) for k, v in data.items()})


def restricted_norm(class_set: Iterable[int], f: L2Vector) -> float:
    """Norm of f restricted to words whose prefix class lies in class_set."""
    classes = frozenset(class_set)
    return f.masked_norm(lambda w: classify_prefix(w) in classes)


def classify_cover(f: L2Vector) -> str:
    """Which side of the 1/3 threshold a unit vector falls on.

    Returns "A1" (restricted W_0 norm below 1/3), "A2" (above), or
    "both" on the boundary, mirroring the non-strict inequalities that
    define both classes.
    """
    if abs(f.norm() - 1.0) > 1e-9:
        raise ValueError(f"classify_cover needs a unit vector, got norm {f.norm()!r}")
    s = restricted_norm({0}, f)
    if abs(s - ONE_THIRD) <= _BOUNDARY_TOL:
        return "both"
    return "A1" if s < ONE_THIRD else "A2"


# ---------------------------------------------------------------------------
# symbolic prefix sets and the certified translation lemmas


@dataclass(frozen=True)
class PrefixSet:
    """Union of prefix classes, or the complement of such a union."""

    classes: frozenset
    complement: bool = False

    def contains_word(self, w: ReducedWord) -> bool:
        return (classify_prefix(w) in self.classes) != self.complement

    def complemented(self) -> "PrefixSet":
        return PrefixSet(self.classes, not self.complement)

    def includes(self, other: "PrefixSet") -> bool:
        """True when self is certainly a superset of other."""
        if not self.complement and not other.complement:
            return other.classes <= self.classes
        if self.complement and not other.complement:
            return not (other.classes & self.classes)
        if self.complement and other.complement:
            return self.classes <= other.classes
        # a finite union never contains a cofinite set
        return False

    def describe(self) -> str:
        inner = "W{" + ",".join(str(c) for c in sorted(self.classes)) + "}"
        return f"complement({inner})" if self.complement else inner


W0 = PrefixSet(frozenset({0}))


def _pure_a_power(g: ReducedWord) -> Optional[int]:
    if len(g.syllables) == 1 and g.syllables[0][0] == 0:
        return g.syllables[0][1]
    return None


def _pure_b_power(g: ReducedWord) -> bool:
    return len(g.syllables) == 1 and g.syllables[0][0] == 1


def translate_bounds(g: ReducedWord, s: PrefixSet):
    """Certified (subset, superset) of g . s in prefix-set terms.

    Powers of a shift the partition exactly: a^i W_j = W_{i+j}.  Pure
    powers of b satisfy two one-sided lemmas (both verified exhaustively
    in the test suite): b^k W_j is contained in W_0 for j != 0, and
    b^k W_0 contains every W_j with j != 0.  Anything else returns the
    trivial bounds (None, None).
    """
    if g == IDENTITY:
        return s, s
    i = _pure_a_power(g)
    if i is not None:
        if s.complement:
            shifted = PrefixSet(frozenset(c + i for c in s.classes), True)
        else:
            shifted = PrefixSet(frozenset(c + i for c in s.classes))
        return shifted, shifted
    if _pure_b_power(g):
        if not s.complement:
            subset = PrefixSet(frozenset({0}), True) if 0 in s.classes else None
            superset = PrefixSet(frozenset({0})) if 0 not in s.classes else None
            return subset, superset
        if 0 in s.classes:
            # every piece W_j of the complement has j != 0: image inside W_0
            return None, PrefixSet(frozenset({0}))
        # W_0 is a piece, so the image covers everything outside W_0
        return PrefixSet(frozenset({0}), True), None
    return None, None


# ---------------------------------------------------------------------------
# cover classes and witness functionals


@dataclass(frozen=True)
class NormWitness:
    """The 1-Lipschitz functional f -> ||chi_region . f||."""

    region: PrefixSet

    def evaluate(self, f: L2Vector) -> float:
        return f.masked_norm(self.region.contains_word)


@dataclass(frozen=True)
class CoverClass:
    """Unit vectors whose restricted norm over a region clears a threshold."""

    label: str
    region: PrefixSet
    op: str  # "le" or "ge"
    threshold: float

    def __post_init__(self):
        if self.op not in ("le", "ge"):
            raise ValueError(f"op must be 'le' or 'ge', got {self.op!r}")
        if not (0.0 <= self.threshold <= 1.0):
            raise ValueError(f"threshold must lie in [0, 1], got {self.threshold!r}")

    def satisfied_by(self, f: L2Vector, tol: float = _BOUNDARY_TOL) -> bool:
        s = f.masked_norm(self.region.contains_word)
        return s <= self.threshold + tol if self.op == "le" else s >= self.threshold - tol

    def norm_interval(self):
        """Possible values of the defining restricted norm on this class."""
        return (0.0, self.threshold) if self.op == "le" else (self.threshold, 1.0)


@dataclass(frozen=True)
class TranslatedClass:
    base: CoverClass
    translator: ReducedWord = IDENTITY

    def label(self) -> str:
        if self.translator == IDENTITY:
            return self.base.label
        return f"{self.translator}.{self.base.label}"


A1 = CoverClass("A1", W0, "le", ONE_THIRD)
A2 = CoverClass("A2", W0, "ge", ONE_THIRD)


def designated_candidate() -> L2Vector:
    """The explicit boundary vector used to probe the high-mass branch:
    amplitude 1/3 at the identity, sqrt(2)/3 at one word in each of
    W_-1 .. W_-4."""
    amp = math.sqrt(2.0) / 3.0
    atoms = {IDENTITY: ONE_THIRD}
    for i in range(1, 5):
        atoms[ReducedWord(((0, -i),))] = amp
    return L2Vector(atoms)


# ---------------------------------------------------------------------------
# ball frames: vectorized amplitudes over a canonical ball enumeration


class BallFrame:
    """Canonical coordinate frame over the ball of a given radius.

    Rows of a sample matrix are vectors; columns follow the deterministic
    ball enumeration.  Masks for prefix regions (and their translates)
    are computed once per frame.
    """

    def __init__(self, radius: int):
        self.radius = radius
        self.words = enumerate_ball(radius)
        self.index = {w: i for i, w in enumerate(self.words)}
        self.classes = np.array([classify_prefix(w) for w in self.words])

    def __len__(self) -> int:
        return len(self.words)

    def mask(self, region: PrefixSet) -> np.ndarray:
        base = np.isin(self.classes, sorted(region.classes))
        return ~base if region.complement else base

    def translated_mask(
        self, g: ReducedWord, region: PrefixSet, convention: ActionConvention
    ) -> np.ndarray:
        """Columns w with ||chi_region (g f)|| picking up f's mass at w.

        Under the paper convention the relevant set is g.region, under
        the inverse convention g^-1.region; membership of w is decided
        exactly by reducing the translated word.
        """
        mover = inverse(g) if convention is ActionConvention.INVERSE else g
        g_inv = inverse(mover)
        out = np.zeros(len(self.words), dtype=bool)
        for i, w in enumerate(self.words):
            out[i] = region.contains_word(multiply(g_inv, w))
        return out

    def to_vector(self, row: np.ndarray) -> L2Vector:
        return L2Vector({w: float(v) for w, v in zip(self.words, row) if v != 0.0})

    def to_row(self, f: L2Vector) -> np.ndarray:
        row = np.zeros(len(self.words))
        for w, v in f.amplitudes.items():
            row[self.index[w]] = v
        return row


@lru_cache(maxsize=8)
def _frame(radius: int) -> BallFrame:
    return BallFrame(radius)


def sample_unit_vectors(frame: BallFrame, stream: SampleStream, count: int) -> np.ndarray:
    """Random unit vectors: Gaussian amplitudes over the ball, normalized."""
    rng = stream.generator()
    x = rng.standard_normal((count, len(frame)))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    return x


def sample_cover_vectors(
    cover: CoverClass, frame: BallFrame, stream: SampleStream, count: int
) -> np.ndarray:
    """Unit vectors conditioned to lie in a threshold cover class.

    A plain Gaussian sample almost never satisfies a one-sided norm
    condition in high dimension, so the region mass s is drawn uniformly
    from the feasible interval and the two blocks are filled with
    independent Gaussian directions: f = s u + sqrt(1-s^2) v.
    """
    mask = frame.mask(cover.region)
    n_in = int(mask.sum())
    n_out = len(frame) - n_in
    if n_in == 0 or n_out == 0:
        raise ValueError("cover region must split the ball support")
    lo, hi = cover.norm_interval()
    rng = stream.generator()
    s = rng.uniform(lo, hi, size=count)
    u = rng.standard_normal((count, n_in))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    v = rng.standard_normal((count, n_out))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    out = np.zeros((count, len(frame)))
    out[:, mask] = u * s[:, None]
    out[:, ~mask] = v * np.sqrt(1.0 - s * s)[:, None]
    return out


# ---------------------------------------------------------------------------
# exact distance to a threshold class, and metric projection onto it


def _class_norm(cover: CoverClass, f: L2Vector) -> float:
    return f.masked_norm(cover.region.contains_word)


def distance_to_class(cover: CoverClass, f: L2Vector) -> float:
    """Exact distance from a unit vector to the cover class.

    With s the region mass of f and c its complement mass, the nearest
    point of the class keeps both block directions and moves (s, c) to
    the boundary circle point (t, sqrt(1-t^2)).
    """
    s = _class_norm(cover, f)
    if (cover.op == "le" and s <= cover.threshold) or (
        cover.op == "ge" and s >= cover.threshold
    ):
        return 0.0
    t = cover.threshold
    c = math.sqrt(max(0.0, 1.0 - s * s))
    return math.hypot(s - t, c - math.sqrt(1.0 - t * t))


def project_to_class(cover: CoverClass, f: L2Vector, frame: BallFrame) -> L2Vector:
    """Nearest member of the class; equals f when f already belongs."""
    s = _class_norm(cover, f)
    if (cover.op == "le" and s <= cover.threshold) or (
        cover.op == "ge" and s >= cover.threshold
    ):
        return f
    t = cover.threshold
    target_c = math.sqrt(1.0 - t * t)
    inside = {w: v for w, v in f.amplitudes.items() if cover.region.contains_word(w)}
    outside = {w: v for w, v in f.amplitudes.items() if not cover.region.contains_word(w)}
    c = math.sqrt(math.fsum(v * v for v in outside.values()))
    out = {}
    if s > 0.0:
        for w, v in inside.items():
            out[w] = v * (t / s)
    elif t > 0.0:
        anchor = next(w for w in frame.words if cover.region.contains_word(w))
        out[anchor] = t
    if c > 0.0:
        for w, v in outside.items():
            out[w] = v * (target_c / c)
    elif target_c > 0.0:
        anchor = next(w for w in frame.words if not cover.region.contains_word(w))
        out[anchor] = target_c
    return L2Vector(out)


def distance_to_translated(
    tc: TranslatedClass, f: L2Vector, convention: ActionConvention
) -> float:
    """Exact distance from f to g.C, via unitarity of the action."""
    pulled = act(inverse(tc.translator), f, convention) if tc.translator != IDENTITY else f
    return distance_to_class(tc.base, pulled)


def project_to_translated(
    tc: TranslatedClass, f: L2Vector, frame: BallFrame, convention: ActionConvention
) -> L2Vector:
    if tc.translator == IDENTITY:
        return project_to_class(tc.base, f, frame)
    pulled = act(inverse(tc.translator), f, convention)
    return act(tc.translator, project_to_class(tc.base, pulled, frame), convention)


# ---------------------------------------------------------------------------
# certificates and refutation search for neighborhood disjointness


@dataclass(frozen=True)
class SeparationCertificate:
    """Proof that the eps-neighborhoods of two classes cannot meet.

    ``gap`` lower-bounds |witness(f) - witness(h)| over the two classes
    by threshold arithmetic (norm subadditivity for complements); since
    the witness is 1-Lipschitz, any points of the two neighborhoods stay
    ``margin`` = gap - 2 eps apart.
    """

    first: str
    second: str
    epsilon: float
    witness: NormWitness
    interval_first: tuple
    interval_second: tuple
    gap: float
    margin: float
    convention: ActionConvention


@dataclass(frozen=True)
class RefutationSearchResult:
    first: str
    second: str
    epsilon: float
    refuted: bool
    nearest_distance: float
    nearest_pair: tuple
    common_point: Optional[L2Vector]
    samples_used: int
    convention: ActionConvention


def _witness_interval(
    witness: NormWitness, tc: TranslatedClass, convention: ActionConvention
):
    """Certified [lo, hi] of the witness norm over a translated class.

    The witness over g.C equals a restricted norm over a translated
    region on C itself; certified subset / superset relations against
    the class's own region turn the threshold into bounds.  The lower
    bound through a complement uses ||chi_T f|| >= ||f|| - ||chi_{T^c} f||.
    """
    base = tc.base
    mover = tc.translator if convention is ActionConvention.PAPER else inverse(tc.translator)
    t_sub, t_sup = translate_bounds(mover, witness.region)
    s_lo, s_hi = base.norm_interval()
    lo, hi = 0.0, 1.0
    region = base.region
    if t_sub is not None:
        if t_sub.includes(region.complemented()):
            lo = max(lo, 1.0 - s_hi)
        if t_sub.includes(region):
            lo = max(lo, s_lo)
    if t_sup is not None:
        if region.includes(t_sup):
            hi = min(hi, s_hi)
        if region.complemented().includes(t_sup):
            hi = min(hi, math.sqrt(max(0.0, 1.0 - s_lo * s_lo)))
    return lo, hi


def _constructed_members(tc: TranslatedClass, frame: BallFrame, convention: ActionConvention):
    base = tc.base
    if base.op == "ge":
        anchor = next(w for w in frame.words if base.region.contains_word(w))
    else:
        anchor = next(w for w in frame.words if not base.region.contains_word(w))
    member = delta(anchor)
    if tc.translator != IDENTITY:
        member = act(tc.translator, member, convention)
    return [member]


def _normalized_midpoint(f: L2Vector, h: L2Vector) -> Optional[L2Vector]:
    m = f.add(h)
    if m.norm() < 1e-9:
        return None
    return m.normalized()


def _pool_matrix(pool):
    """Stack dict vectors over the union of their supports."""
    keys = sorted({w for v in pool for w in v.support}, key=lambda w: (len(w), str(w)))
    index = {w: i for i, w in enumerate(keys)}
    mat = np.zeros((len(pool), len(keys)))
    for r, v in enumerate(pool):
        for w, a in v.amplitudes.items():
            mat[r, index[w]] = a
    return mat, keys


def neighborhood_disjointness(
    predicate_pair,
    epsilon: float,
    witness: NormWitness,
    convention: ActionConvention = ActionConvention.PAPER,
    ball_radius: int = 6,
    samples: int = 120,
    stream: SampleStream = SampleStream(0, 0),
    search_on_failure: bool = True,
):
    """Certificate or refutation search for O_eps(P1) and O_eps(P2).

    A certificate is issued when threshold arithmetic proves the witness
    values of the two classes stay >= 2 eps apart.  Otherwise a
    randomized search looks for near pairs; if a normalized midpoint is
    verified within eps of both classes, disjointness is refuted with
    that common point.  Absence of a refutation is reported as data,
    never as a proof.  ``search_on_failure=False`` skips the search and
    returns a no-certificate marker result immediately.
    """
    if not isinstance(witness, NormWitness):
        raise TypeError(
            "witness must come from the restricted-norm family (NormWitness); "
            "arbitrary functionals carry no Lipschitz guarantee"
        )
    first, second = predicate_pair
    if isinstance(first, CoverClass):
        first = TranslatedClass(first)
    if isinstance(second, CoverClass):
        second = TranslatedClass(second)
    lo1, hi1 = _witness_interval(witness, first, convention)
    lo2, hi2 = _witness_interval(witness, second, convention)
    gap = max(lo1 - hi2, lo2 - hi1)
    if gap >= 2.0 * epsilon:
        return SeparationCertificate(
            first=first.label(),
            second=second.label(),
            epsilon=epsilon,
            witness=witness,
            interval_first=(lo1, hi1),
            interval_second=(lo2, hi2),
            gap=gap,
            margin=gap - 2.0 * epsilon,
            convention=convention,
        )
    if not search_on_failure:
        return RefutationSearchResult(
            first=first.label(),
            second=second.label(),
            epsilon=epsilon,
            refuted=False,
            nearest_distance=math.inf,
            nearest_pair=(None, None),
            common_point=None,
            samples_used=0,
            convention=convention,
        )

    frame = _frame(ball_radius)
    pools = []
    for side, sub_id in ((first, 1), (second, 2)):
        pool = list(_constructed_members(side, frame, convention))
        rows = sample_cover_vectors(
            side.base, frame, stream.substream(stream.stream_id * 1000 + sub_id), samples
        )
        for row in rows:
            v = frame.to_vector(row)
            if side.translator != IDENTITY:
                v = act(side.translator, v, convention)
            pool.append(v)
        pools.append(pool)

    mat1, keys1 = _pool_matrix(pools[0])
    mat2, keys2 = _pool_matrix(pools[1])
    keys = sorted(set(keys1) | set(keys2), key=lambda w: (len(w), str(w)))
    index = {w: i for i, w in enumerate(keys)}
    a = np.zeros((mat1.shape[0], len(keys)))
    a[:, [index[w] for w in keys1]] = mat1
    b = np.zeros((mat2.shape[0], len(keys)))
    b[:, [index[w] for w in keys2]] = mat2
    sq = (
        np.einsum("ij,ij->i", a, a)[:, None]
        + np.einsum("ij,ij->i", b, b)[None, :]
        - 2.0 * (a @ b.T)
    )
    i, j = np.unravel_index(int(np.argmin(sq)), sq.shape)
    best = (math.sqrt(max(0.0, float(sq[i, j]))), pools[0][i], pools[1][j])
    # pull each side's best candidate toward the other with one
    # projection round; often collapses the pair onto a common point
    d, f, h = best
    for _ in range(4):
        f2 = project_to_translated(first, h, frame, convention)
        h2 = project_to_translated(second, f2, frame, convention)
        d2 = f2.distance(h2)
        if d2 < d - 1e-15:
            d, f, h = d2, f2, h2
        else:
            break

    common = None
    refuted = False
    mid = _normalized_midpoint(f, h) if f is not None else None
    if mid is not None:
        d1 = distance_to_translated(first, mid, convention)
        d2 = distance_to_translated(second, mid, convention)
        if d1 <= epsilon and d2 <= epsilon:
            refuted = True
            common = mid
    return RefutationSearchResult(
        first=first.label(),
        second=second.label(),
        epsilon=epsilon,
        refuted=refuted,
        nearest_distance=d,
        nearest_pair=(f, h),
        common_point=common,
        samples_used=2 * samples,
        convention=convention,
    )


# ---------------------------------------------------------------------------
# bulk verification reports for the two cover branches


@dataclass(frozen=True)
class A1SeparationReport:
    convention: ActionConvention
    ball_radius: int
    samples: int
    inclusion_exceptions: int
    chain_violations: int
    min_translated_norm: float
    certificate: SeparationCertificate
    violating_vectors: tuple = ()


def count_inclusion_exceptions(
    ball_radius: int, convention: ActionConvention = ActionConvention.PAPER
) -> int:
    """Exhaustively test that pulling any word outside W_0 back through b
    lands in W_0, over the whole ball.  Zero exceptions is the exact
    inclusion backing the low-mass-branch chain."""
    b = word("b")
    mover = b if convention is ActionConvention.PAPER else inverse(b)
    g_inv = inverse(mover)
    exceptions = 0
    for w in enumerate_ball(ball_radius):
        if classify_prefix(w) != 0 and classify_prefix(multiply(g_inv, w)) != 0:
            exceptions += 1
    return exceptions


def verify_A1_separation(
    sample_count: int,
    ball_radius: int,
    stream: SampleStream,
    convention: ActionConvention = ActionConvention.PAPER,
    chunk: int = 20000,
) -> A1SeparationReport:
    """Check the certified low-mass-branch chain on sampled vectors.

    The chain: a unit vector with region mass <= 1/3 keeps complement
    mass >= sqrt(1 - 1/9), and the b-translate moves at least that much
    mass into the region (because the translated region is certified to
    contain the complement), hence the translated region norm is >= 2/3.
    The inclusion backing the middle step is also checked exhaustively
    over the ball.
    """
    b = word("b")
    frame = _frame(ball_radius)
    inclusion_exceptions = count_inclusion_exceptions(ball_radius, convention)
    chunk = max(1000, min(chunk, (1 << 24) // max(1, len(frame))))
    mask_w0 = frame.mask(W0)
    mask_translated = frame.translated_mask(b, W0, convention)
    complement_floor = math.sqrt(1.0 - 1.0 / 9.0)
    chain_violations = 0
    min_translated = math.inf
    bad_vectors = []
    remaining = sample_count
    chunk_index = 0
    while remaining > 0:
        rows = min(chunk, remaining)
        sample = sample_cover_vectors(
            A1, frame, stream.substream(stream.stream_id * 1000 + chunk_index), rows
        )
        comp = np.sqrt(np.einsum("ij,ij->i", sample[:, ~mask_w0], sample[:, ~mask_w0]))
        moved = np.sqrt(
            np.einsum("ij,ij->i", sample[:, mask_translated], sample[:, mask_translated])
        )
        ok = (
            (comp >= complement_floor - 1e-12)
            & (moved >= comp - 1e-12)
            & (moved >= 2.0 / 3.0)
        )
        bad = ~ok
        chain_violations += int(bad.sum())
        if bad.any() and len(bad_vectors) < 5:
            for row in sample[bad][: 5 - len(bad_vectors)]:
                bad_vectors.append(frame.to_vector(row))
        m = float(moved.min())
        min_translated = min(min_translated, m)
        remaining -= rows
        chunk_index += 1

    certificate = neighborhood_disjointness(
        (TranslatedClass(A1), TranslatedClass(A1, b)),
        epsilon=1.0 / 12.0,
        witness=NormWitness(W0),
        convention=convention,
    )
    if not isinstance(certificate, SeparationCertificate):
        raise AssertionError("threshold arithmetic failed to certify the low-mass branch")
    return A1SeparationReport(
        convention=convention,
        ball_radius=ball_radius,
        samples=sample_count,
        inclusion_exceptions=inclusion_exceptions,
        chain_violations=chain_violations,
        min_translated_norm=min_translated,
        certificate=certificate,
        violating_vectors=tuple(bad_vectors),
    )


@dataclass(frozen=True)
class A2ClaimReport:
    convention: ActionConvention
    ball_radius: int
    samples: int
    index_range: tuple
    min_norm_quantiles: dict
    fraction_below_one_sixth: float
    pigeonhole_exceptions: int
    candidate_min: float
    candidate_meets_stated_bound: bool
    stated_bound: float = 1.0 / 6.0
    example_vectors_meeting_bound: tuple = ()
    example_vectors_missing_bound: tuple = ()


def evaluate_A2_claim(
    sample_count: int,
    ball_radius: int,
    stream: SampleStream,
    index_range: Iterable[int] = (1, 2, 3, 4),
    convention: ActionConvention = ActionConvention.PAPER,
    chunk: int = 20000,
) -> A2ClaimReport:
    """Distribution of min_i ||chi_{W_-i} f|| over sampled high-mass vectors.

    Reports the fraction meeting the stated < 1/6 bound, checks the
    averaged pigeonhole min^2 <= (1 - 1/9) / k for every sample, and
    evaluates the designated candidate vector, whose minimum sqrt(2)/3
    misses the stated bound.  Outcomes are recorded, not asserted.
    """
    indices = tuple(sorted(index_range))
    if not indices or any(i < 1 for i in indices):
        raise ValueError(f"index_range must be a nonempty set of positive indices, got {indices}")
    frame = _frame(ball_radius)
    chunk = max(1000, min(chunk, (1 << 24) // max(1, len(frame))))
    masks = [frame.mask(PrefixSet(frozenset({-i}))) for i in indices]
    for i, m in zip(indices, masks):
        if not m.any():
            raise ValueError(f"ball radius {ball_radius} has no words in class W_{-i}")
    pigeonhole_cap = (1.0 - 1.0 / 9.0) / len(indices)

    mins = []
    pigeonhole_exceptions = 0
    meets = []
    misses = []
    remaining = sample_count
    chunk_index = 0
    while remaining > 0:
        rows = min(chunk, remaining)
        sample = sample_cover_vectors(
            A2, frame, stream.substream(stream.stream_id * 1000 + chunk_index), rows
        )
        norms = np.stack(
            [np.sqrt(np.einsum("ij,ij->i", sample[:, m], sample[:, m])) for m in masks],
            axis=1,
        )
        row_min = norms.min(axis=1)
        mins.append(row_min)
        pigeonhole_exceptions += int((row_min**2 > pigeonhole_cap + 1e-12).sum())
        below = row_min < 1.0 / 6.0
        if below.any() and len(meets) < 3:
            for row in sample[below][: 3 - len(meets)]:
                meets.append(frame.to_vector(row))
        above = ~below
        if above.any() and len(misses) < 3:
            for row in sample[above][: 3 - len(misses)]:
                misses.append(frame.to_vector(row))
        remaining -= rows
        chunk_index += 1
    all_mins = np.concatenate(mins)
    quantiles = {
        q: float(np.quantile(all_mins, q / 100.0)) for q in (0, 25, 50, 75, 100)
    }

    candidate = designated_candidate()
    candidate_min = min(restricted_norm({-i}, candidate) for i in indices)
    return A2ClaimReport(
        convention=convention,
        ball_radius=ball_radius,
        samples=sample_count,
        index_range=indices,
        min_norm_quantiles=quantiles,
        fraction_below_one_sixth=float((all_mins < 1.0 / 6.0).mean()),
        pigeonhole_exceptions=pigeonhole_exceptions,
        candidate_min=candidate_min,
        candidate_meets_stated_bound=candidate_min < 1.0 / 6.0,
        example_vectors_meeting_bound=tuple(meets),
        example_vectors_missing_bound=tuple(misses),
    )
