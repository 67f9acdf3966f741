"""Folner chains, near-invariant vectors, and essential-set search.

The constructive picture: an amenable group has finite sets whose
boundary ratio |K delta DK| / |K| vanishes, the normalized indicators of
those sets are almost fixed by the translation action (the displacement
identity ||g.f - f||^2 = |gK delta K| / |K| is exact), and such vectors
witness that translated neighborhoods of a cover element intersect.
For the free group the same candidate family has boundary ratio bounded
below, and the cover built from the prefix partition admits certified
separations instead.

The search never conflates absence of evidence with emptiness: a cover
element is reported essential only with an explicit witness vector whose
per-translate distances were all evaluated directly, not-essential only
with a separation certificate, and everything else is inconclusive.

Scope notes.  Everything here acts through the left-regular translation
of vectors over group elements on truncated supports; general unitary
representations (cyclic submodules, sums of finite-dimensional pieces)
would slot in behind the same predicate/projection interface but are an
extension point, not implemented.  Likewise the search only tests the
final intersection of translated neighborhoods: the measure-theoretic
pigeonhole that selects a good cover element from the dimension chain
(choosing indices where the element keeps at least 1/|cover| of the
sphere measure) needs sphere-measure estimates on subspaces of growing
dimension and is not executable at desk scale for general covers.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import freegroup
from .freegroup import ActionConvention, CoverClass, NormWitness, TranslatedClass
from .groups import FolnerUnavailableError, FreeGroup, Group
from .l2vec import L2Vector, delta
from .streams import SampleStream

__all__ = [
    "FolnerCandidate",
    "boundary_ratio",
    "folner_chain",
    "near_invariant_vector",
    "act_on",
    "translation_displacement",
    "OrbitChain",
    "dimension_chain_report",
    "SearchPredicate",
    "trivial_predicate",
    "predicate_from_cover",
    "essential_set_search",
    "EssentialReport",
]


@dataclass(frozen=True)
class FolnerCandidate:
    group: Group
    elements: frozenset
    generators: tuple

    def __post_init__(self):
        if not self.elements:
            raise ValueError("a Folner candidate must be nonempty")


def boundary_ratio(candidate: FolnerCandidate) -> float:
    """|K delta (D.K)| / |K| for the candidate set K against generators D."""
    group = candidate.group
    translated = {
        group.multiply(g, k) for g in candidate.generators for k in candidate.elements
    }
    return len(translated ^ candidate.elements) / len(candidate.elements)


def folner_chain(
    group: Group, length: int, generators: Optional[tuple] = None
) -> list:
    """Nested candidates with D.K_n inside K_{n+1} and vanishing ratios.

    Raises FolnerUnavailableError for the free group, reporting the
    observed lower bound of the ratio over the word-metric ball family.
    """
    if length < 1:
        raise ValueError("chain length must be >= 1")
    gens = generators if generators is not None else group.default_generators()
    if not group.amenable_family:
        observed = math.inf
        for radius in range(1, min(length, 6) + 1):
            ball = frozenset(group.ball(radius))
            observed = min(
                observed,
                boundary_ratio(FolnerCandidate(group, ball, tuple(gens))),
            )
        raise FolnerUnavailableError(
            "no Folner chain: candidate family has ratio bounded below "
            f"(observed lower bound {observed:.6g} over balls)",
            observed_lower_bound=observed,
        )
    chain = []
    previous = None
    for index in range(1, length + 1):
        elements = group.folner_set(index)
        candidate = FolnerCandidate(group, elements, tuple(gens))
        if previous is not None:
            if not previous.elements <= elements:
                raise AssertionError("Folner chain must be nested")
            pushed = {
                group.multiply(g, k) for g in gens for k in previous.elements
            }
            if not pushed <= elements:
                raise AssertionError("Folner chain must absorb D.K_n into K_{n+1}")
        chain.append(candidate)
        previous = candidate
    return chain


def near_invariant_vector(candidate: FolnerCandidate) -> L2Vector:
    """Normalized indicator of the candidate set.

    Its displacement under any g is exactly sqrt(|gK delta K| / |K|).
    """
    scale = 1.0 / math.sqrt(len(candidate.elements))
    return L2Vector({k: scale for k in candidate.elements})


def act_on(
    group: Group,
    g,
    f: L2Vector,
    convention: ActionConvention = ActionConvention.PAPER,
) -> L2Vector:
    """Translation action on vectors over the group; norm-preserving."""
    if convention is ActionConvention.PAPER:
        g_inv = group.inverse(g)
        return f.rekey(lambda w: group.multiply(g_inv, w))
    return f.rekey(lambda w: group.multiply(g, w))


def translation_displacement(
    group: Group,
    g,
    f: L2Vector,
    convention: ActionConvention = ActionConvention.PAPER,
) -> float:
    return act_on(group, g, f, convention).distance(f)


@dataclass(frozen=True)
class OrbitChain:
    """Dimension growth of the subspaces spanned by translated atoms.

    The span of {g.delta_e : g in K} has dimension |K|, so the chain of
    Folner sets (or balls, for the free group) is carried by its support
    sets and element counts; ``ratios`` is the step growth i_{n+1}/i_n.
    """

    dims: tuple
    supports: tuple
    generators: tuple
    ratios: tuple

    def __post_init__(self):
        for a, b in zip(self.dims, self.dims[1:]):
            if b < a:
                raise ValueError("dimension chain must be nondecreasing")
        for s, t in zip(self.supports, self.supports[1:]):
            if not s <= t:
                raise ValueError("supports must be nested")


def dimension_chain_report(
    group: Group, length: int, generators: Optional[tuple] = None
) -> OrbitChain:
    """Orbit-subspace dimension chain; ratio tends to 1 exactly when the
    canonical candidate family is Folner, and stays at 3 for free balls."""
    gens = generators if generators is not None else group.default_generators()
    if group.amenable_family:
        supports = [group.folner_set(i) for i in range(1, length + 1)]
    else:
        supports = [frozenset(group.ball(i)) for i in range(1, length + 1)]
    for s, t in zip(supports, supports[1:]):
        pushed = {group.multiply(g, k) for g in gens for k in s}
        if not pushed <= t:
            raise AssertionError("generator translates must land in the next support")
    dims = tuple(len(s) for s in supports)
    ratios = tuple(b / a for a, b in zip(dims, dims[1:]))
    return OrbitChain(dims=dims, supports=tuple(supports), generators=tuple(gens), ratios=ratios)


# ---------------------------------------------------------------------------
# threshold predicates over group elements and the essential-set search


@dataclass(frozen=True)
class SearchPredicate:
    """Threshold condition ||chi_R f|| op t on unit vectors; the witness
    functional is the restricted norm, hence 1-Lipschitz."""

    label: str
    op: str
    threshold: float
    membership: Callable
    prefix_class: Optional[CoverClass] = None

    def __post_init__(self):
        if self.op not in ("le", "ge"):
            raise ValueError(f"op must be 'le' or 'ge', got {self.op!r}")

    def region_norm(self, f: L2Vector) -> float:
        return f.masked_norm(self.membership)

    def satisfied_by(self, f: L2Vector, tol: float = 1e-12) -> bool:
        s = self.region_norm(f)
        return s <= self.threshold + tol if self.op == "le" else s >= self.threshold - tol


def trivial_predicate(label: str = "all") -> SearchPredicate:
    return SearchPredicate(label=label, op="le", threshold=1.0, membership=lambda k: True)


def predicate_from_cover(cover: CoverClass) -> SearchPredicate:
    return SearchPredicate(
        label=cover.label,
        op=cover.op,
        threshold=cover.threshold,
        membership=cover.region.contains_word,
        prefix_class=cover,
    )


def _predicate_distance(pred: SearchPredicate, f: L2Vector) -> float:
    s = pred.region_norm(f)
    if (pred.op == "le" and s <= pred.threshold) or (
        pred.op == "ge" and s >= pred.threshold
    ):
        return 0.0
    t = pred.threshold
    c = math.sqrt(max(0.0, 1.0 - s * s))
    return math.hypot(s - t, c - math.sqrt(1.0 - t * t))


def _predicate_project(
    pred: SearchPredicate, f: L2Vector, support: Sequence
) -> L2Vector:
    s = pred.region_norm(f)
    if (pred.op == "le" and s <= pred.threshold) or (
        pred.op == "ge" and s >= pred.threshold
    ):
        return f
    t = pred.threshold
    target_c = math.sqrt(max(0.0, 1.0 - t * t))
    inside = {w: v for w, v in f.amplitudes.items() if pred.membership(w)}
    outside = {w: v for w, v in f.amplitudes.items() if not pred.membership(w)}
    c = math.sqrt(math.fsum(v * v for v in outside.values()))
    out = {}
    if s > 0.0:
        for w, v in inside.items():
            out[w] = v * (t / s)
    elif t > 0.0:
        anchor = next(w for w in support if pred.membership(w))
        out[anchor] = t
    if c > 0.0:
        for w, v in outside.items():
            out[w] = v * (target_c / c)
    elif target_c > 0.0:
        anchor = next(w for w in support if not pred.membership(w))
        out[anchor] = target_c
    return L2Vector(out)


def _distance_to_translate(
    group: Group, g, pred: SearchPredicate, f: L2Vector, convention: ActionConvention
) -> float:
    pulled = act_on(group, group.inverse(g), f, convention)
    return _predicate_distance(pred, pulled)


def _project_to_translate(
    group: Group,
    g,
    pred: SearchPredicate,
    f: L2Vector,
    support: Sequence,
    convention: ActionConvention,
) -> L2Vector:
    pulled = act_on(group, group.inverse(g), f, convention)
    return act_on(group, g, _predicate_project(pred, pulled, support), convention)


@dataclass(frozen=True)
class EssentialReport:
    cover_label: str
    status: str  # "essential", "not_essential", "inconclusive"
    epsilon: float
    convention: ActionConvention
    translates: tuple  # canonical strings, identity first
    witness: Optional[L2Vector]
    distances: tuple  # per-translate certified distance upper bounds
    displacements: tuple  # ||g.witness - witness|| per translate
    worst_distance: float
    certificate: Optional[freegroup.SeparationCertificate]
    separating_translate: Optional[str]
    seeds_tried: int


def _prefix_products(group: Group, elements: Sequence) -> list:
    products = []
    acc = None
    for g in elements:
        acc = g if acc is None else group.multiply(g, acc)
        products.append(acc)
    return products


def essential_set_search(
    group: Group,
    cover: Sequence[SearchPredicate],
    elements: Sequence,
    epsilon: float,
    budget: int,
    stream: SampleStream,
    convention: ActionConvention = ActionConvention.PAPER,
    support: Optional[Sequence] = None,
    elements_are: str = "translates",
    refine_rounds: int = 3,
) -> list:
    """Search each cover element for a point near all of its translates.

    ``elements`` is the finite family F; with ``elements_are =
    "generators"`` the tested translates are instead the stacked prefix
    products g_j ... g_1 of the list.  The identity translate is always
    included, so an empty family degenerates to plain nonemptiness.

    Per cover element the outcome is: ``essential`` with a witness whose
    distance to every translate was evaluated directly and is below
    epsilon; ``not_essential`` when a separation certificate shows two
    translates' neighborhoods cannot meet (free-group prefix covers
    only); otherwise ``inconclusive`` with the best vector found.
    """
    if epsilon <= 0.0:
        raise ValueError("epsilon must be positive")
    if elements_are not in ("translates", "generators"):
        raise ValueError(f"elements_are must be 'translates' or 'generators', got {elements_are!r}")
    family = list(elements) if elements_are == "translates" else _prefix_products(group, elements)
    translates = [group.identity()] + [g for g in family if g != group.identity()]
    if support is None:
        support = group.truncation(1500)
    support = tuple(support)

    reports = []
    for pred_index, pred in enumerate(cover):
        certificate = None
        separating = None
        if pred.prefix_class is not None and isinstance(group, FreeGroup):
            for g in translates[1:]:
                result = freegroup.neighborhood_disjointness(
                    (
                        TranslatedClass(pred.prefix_class),
                        TranslatedClass(pred.prefix_class, g),
                    ),
                    epsilon,
                    NormWitness(pred.prefix_class.region),
                    convention=convention,
                    search_on_failure=False,
                )
                if isinstance(result, freegroup.SeparationCertificate):
                    certificate = result
                    separating = group.element_str(g)
                    break
        if certificate is not None:
            reports.append(
                EssentialReport(
                    cover_label=pred.label,
                    status="not_essential",
                    epsilon=epsilon,
                    convention=convention,
                    translates=tuple(group.element_str(g) for g in translates),
                    witness=None,
                    distances=(),
                    displacements=(),
                    worst_distance=math.inf,
                    certificate=certificate,
                    separating_translate=separating,
                    seeds_tried=0,
                )
            )
            continue

        seeds = []
        # near-invariant indicators first (largest set first): for
        # amenable groups they are the canonical almost-common points
        if group.amenable_family:
            for index in (16, 8, 4):
                cand = FolnerCandidate(
                    group,
                    group.folner_set(index),
                    tuple(translates[1:]) or group.default_generators(),
                )
                seeds.append(near_invariant_vector(cand))
        # translated canonical members and their normalized average; the
        # average is often already a common point for threshold covers
        members = []
        try:
            if pred.op == "ge":
                anchor = next(w for w in support if pred.membership(w))
            else:
                anchor = support[0]
            base_member = delta(anchor)
            for g in translates:
                members.append(act_on(group, g, base_member, convention))
            avg = members[0]
            for m in members[1:]:
                avg = avg.add(m)
            if avg.norm() > 1e-9:
                seeds.append(avg.normalized())
            seeds.extend(members)
        except StopIteration:
            pass
        rng = stream.substream(stream.stream_id * 100 + pred_index).generator()
        for _ in range(max(0, budget)):
            amplitudes = rng.standard_normal(len(support))
            amplitudes /= np.linalg.norm(amplitudes)
            seeds.append(L2Vector(dict(zip(support, amplitudes))))

        best_vector = None
        best_dists = None
        best_worst = math.inf
        for seed in seeds:
            v = seed
            for _ in range(refine_rounds):
                dists = [
                    _distance_to_translate(group, g, pred, v, convention)
                    for g in translates
                ]
                worst = max(dists)
                if worst < best_worst:
                    best_worst, best_vector, best_dists = worst, v, dists
                if worst == 0.0:
                    break
                g_worst = translates[int(np.argmax(dists))]
                moved = _project_to_translate(group, g_worst, pred, v, support, convention)
                if moved.norm() < 1e-9:
                    break
                v = moved.normalized()
            if best_worst == 0.0:
                break

        if best_vector is not None and best_worst < epsilon:
            status = "essential"
        else:
            status = "inconclusive"
        displacements = ()
        if best_vector is not None:
            displacements = tuple(
                translation_displacement(group, g, best_vector, convention)
                for g in translates
            )
        reports.append(
            EssentialReport(
                cover_label=pred.label,
                status=status,
                epsilon=epsilon,
                convention=convention,
                translates=tuple(group.element_str(g) for g in translates),
                witness=best_vector,
                distances=tuple(best_dists) if best_dists is not None else (),
                displacements=displacements,
                worst_distance=best_worst,
                certificate=None,
                separating_translate=None,
                seeds_tried=len(seeds),
            )
        )
    return reports
