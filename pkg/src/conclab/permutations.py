"""Finitely supported permutations, the Hamming distance, and the
normalized ratio metric that fails right equicontinuity.

Composition convention: (s * t)(i) = s(t(i)).  The Hamming distance is
right-invariant under that convention, d(s u, t u) = d(s, t), but the
normalized ratio phi is not: the explicit pair family built here has
phi(sigma, eta) = 2/n while a single right translation by eta blows the
value up to 1.
"""

from dataclasses import dataclass

__all__ = [
    "Permutation",
    "IDENTITY_PERM",
    "from_cycles",
    "from_cycle_string",
    "hamming",
    "phi",
    "equicontinuity_counterexample",
    "CounterexampleRow",
]


@dataclass(frozen=True)
class Permutation:
    """Bijection of the positive integers moving finitely many points,
    stored as sorted (point, image) pairs over the moved points only."""

    moved: tuple

    def __post_init__(self):
        points = [p for p, _ in self.moved]
        images = [q for _, q in self.moved]
        if len(set(points)) != len(points):
            raise ValueError("duplicate points in permutation")
        if set(points) != set(images):
            raise ValueError("moved points must map onto themselves")
        if any(p == q for p, q in self.moved):
            raise ValueError("fixed points must not be stored")
        if any(p < 1 for p in points):
            raise ValueError("points must be positive integers")
        if list(self.moved) != sorted(self.moved):
            raise ValueError("moved pairs must be sorted by point")

    @classmethod
    def from_mapping(cls, mapping: dict) -> "Permutation":
        cleaned = tuple(sorted((p, q) for p, q in mapping.items() if p != q))
        return cls(cleaned)

    def __call__(self, i: int) -> int:
        for p, q in self.moved:
            if p == i:
                return q
        return i

    def __mul__(self, other: "Permutation") -> "Permutation":
        points = {p for p, _ in self.moved} | {p for p, _ in other.moved}
        return Permutation.from_mapping({p: self(other(p)) for p in points})

    def inverse(self) -> "Permutation":
        return Permutation.from_mapping({q: p for p, q in self.moved})

    def support(self) -> frozenset:
        return frozenset(p for p, _ in self.moved)

    def __str__(self) -> str:
        if not self.moved:
            return "e"
        remaining = dict(self.moved)
        cycles = []
        while remaining:
            start = min(remaining)
            cycle = [start]
            nxt = remaining.pop(start)
            while nxt != start:
                cycle.append(nxt)
                nxt = remaining.pop(nxt)
            cycles.append("(" + " ".join(str(i) for i in cycle) + ")")
        return "".join(cycles)


IDENTITY_PERM = Permutation(())


def from_cycles(*cycles) -> Permutation:
    """Build a permutation from disjoint cycles, e.g. from_cycles((1, 2), (3, 4))."""
    mapping = {}
    for cycle in cycles:
        for i, p in enumerate(cycle):
            q = cycle[(i + 1) % len(cycle)]
            if p in mapping:
                raise ValueError("cycles must be disjoint")
            mapping[p] = q
    return Permutation.from_mapping(mapping)


def from_cycle_string(text: str) -> Permutation:
    """Parse cycle notation, e.g. "(1 2)(3 4)"; "e" or "" is the identity."""
    text = text.strip()
    if text in ("", "e", "()"):
        return IDENTITY_PERM
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"not cycle notation: {text!r}")
    cycles = []
    for chunk in text[1:-1].split(")("):
        points = tuple(int(p) for p in chunk.split())
        if len(points) < 2:
            raise ValueError(f"cycle needs at least two points: {chunk!r}")
        cycles.append(points)
    return from_cycles(*cycles)


def hamming(s: Permutation, t: Permutation) -> int:
    """Number of points where the two permutations disagree."""
    points = s.support() | t.support()
    return sum(1 for p in points if s(p) != t(p))


def phi(s: Permutation, t: Permutation) -> float:
    """Hamming distance normalized by the larger distance to the identity;
    zero exactly when the permutations coincide."""
    if s == t:
        return 0.0
    denominator = max(hamming(s, IDENTITY_PERM), hamming(t, IDENTITY_PERM))
    if denominator == 0:
        raise AssertionError("distinct permutations cannot both equal the identity")
    return hamming(s, t) / denominator


@dataclass(frozen=True)
class CounterexampleRow:
    n: int
    sigma: Permutation
    eta: Permutation
    phi_before: float
    phi_after: float
    amplification: float


def equicontinuity_counterexample(n: int) -> CounterexampleRow:
    """The pair (sigma, eta) with phi 2/n that a right translation by eta
    maps to a pair with phi 1.

    sigma swaps (2k-1, 2k) for all k <= n/2; eta does the same but fixes
    {1, 2}.  Then sigma*eta is the bare transposition (1 2) and eta^2 is
    the identity, so phi jumps from 2/n to 1: the amplification n/2 is
    unbounded in n, which is exactly the failure of uniform
    equicontinuity for right translations.
    """
    if n < 4 or n % 2 != 0:
        raise ValueError(f"need an even n >= 4, got {n}")
    sigma = from_cycles(*[(2 * k - 1, 2 * k) for k in range(1, n // 2 + 1)])
    eta = from_cycles(*[(2 * k - 1, 2 * k) for k in range(2, n // 2 + 1)])
    phi_before = phi(sigma, eta)
    phi_after = phi(sigma * eta, eta * eta)
    # integer closed form keeps the ratio exact for even n
    amplification = (hamming(sigma * eta, eta * eta) * n) / (hamming(sigma, eta) * 2)
    return CounterexampleRow(
        n=n,
        sigma=sigma,
        eta=eta,
        phi_before=phi_before,
        phi_after=phi_after,
        amplification=amplification,
    )
