"""Finitely generated groups with canonical element encodings.

Four families are supported: integer lattices Z^d, the discrete
Heisenberg group, cyclic groups Z/m, and the rank-2 free group (backed
by the reduced-word module).  Elements serialize canonically so that
sets, CSV cells, and reports are stable across runs: lattice elements
as integer tuples, Heisenberg as integer triples, free-group elements
as words over {a, A, b, B}, cyclic elements as residues.
"""

from typing import Iterable

from . import words

__all__ = [
    "Group",
    "Lattice",
    "Heisenberg",
    "Cyclic",
    "FreeGroup",
    "group_from_spec",
    "FolnerUnavailableError",
]


class FolnerUnavailableError(ValueError):
    """Raised when a group family admits no vanishing boundary ratios."""

    def __init__(self, message: str, observed_lower_bound: float):
        super().__init__(message)
        self.observed_lower_bound = observed_lower_bound


class Group:
    """Minimal group interface; elements are hashable canonical values."""

    name = "group"
    amenable_family = True

    def identity(self):
        raise NotImplementedError

    def multiply(self, x, y):
        raise NotImplementedError

    def inverse(self, x):
        raise NotImplementedError

    def default_generators(self) -> tuple:
        raise NotImplementedError

    def element_str(self, x) -> str:
        return str(x)

    def parse_element(self, text: str):
        raise NotImplementedError

    def folner_set(self, index: int) -> frozenset:
        """index-th member of the canonical Folner family (amenable only)."""
        raise NotImplementedError

    def truncation(self, size_hint: int) -> tuple:
        """Deterministic finite support for vector experiments."""
        raise NotImplementedError


class Lattice(Group):
    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError(f"lattice dimension must be >= 1, got {dim}")
        self.dim = dim
        self.name = f"Z^{dim}" if dim > 1 else "Z"

    def identity(self):
        return (0,) * self.dim

    def multiply(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def inverse(self, x):
        return tuple(-a for a in x)

    def default_generators(self):
        gens = []
        for i in range(self.dim):
            e = [0] * self.dim
            e[i] = 1
            gens.append(tuple(e))
        return tuple(gens)

    def element_str(self, x):
        return "(" + ",".join(str(a) for a in x) + ")"

    def parse_element(self, text):
        parts = text.strip("() ").split(",")
        coords = tuple(int(p) for p in parts if p != "")
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {text!r}")
        return coords

    def folner_set(self, index: int) -> frozenset:
        if index < 1:
            raise ValueError("Folner index starts at 1")
        from itertools import product

        return frozenset(product(range(index), repeat=self.dim))

    def truncation(self, size_hint: int) -> tuple:
        side = max(2, round(size_hint ** (1.0 / self.dim)))
        from itertools import product

        return tuple(sorted(product(range(side), repeat=self.dim)))


class Heisenberg(Group):
    """Integer triples with (a,b,c)(x,y,z) = (a+x, b+y, c+z+a*y)."""

    name = "H3(Z)"

    def identity(self):
        return (0, 0, 0)

    def multiply(self, x, y):
        return (x[0] + y[0], x[1] + y[1], x[2] + y[2] + x[0] * y[1])

    def inverse(self, x):
        return (-x[0], -x[1], -x[2] + x[0] * x[1])

    def default_generators(self):
        return ((1, 0, 0), (0, 1, 0))

    def element_str(self, x):
        return f"({x[0]},{x[1]},{x[2]})"

    def parse_element(self, text):
        parts = text.strip("() ").split(",")
        coords = tuple(int(p) for p in parts)
        if len(coords) != 3:
            raise ValueError(f"expected 3 coordinates, got {text!r}")
        return coords

    def folner_set(self, index: int) -> frozenset:
        # the commutator [x,y] walks the z-axis, so the box must be
        # quadratically deeper in z for the boundary ratio to vanish
        if index < 1:
            raise ValueError("Folner index starts at 1")
        return frozenset(
            (x, y, z)
            for x in range(index)
            for y in range(index)
            for z in range(index * index)
        )

    def truncation(self, size_hint: int) -> tuple:
        side = max(2, round(size_hint ** 0.25))
        return tuple(
            sorted(
                (x, y, z)
                for x in range(side)
                for y in range(side)
                for z in range(side * side)
            )
        )


class Cyclic(Group):
    def __init__(self, modulus: int):
        if modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {modulus}")
        self.modulus = modulus
        self.name = f"Z/{modulus}"

    def identity(self):
        return 0

    def multiply(self, x, y):
        return (x + y) % self.modulus

    def inverse(self, x):
        return (-x) % self.modulus

    def default_generators(self):
        return (1 % self.modulus,)

    def element_str(self, x):
        return str(x)

    def parse_element(self, text):
        return int(text) % self.modulus

    def folner_set(self, index: int) -> frozenset:
        if index < 1:
            raise ValueError("Folner index starts at 1")
        return frozenset(range(min(index, self.modulus)))

    def truncation(self, size_hint: int) -> tuple:
        return tuple(range(self.modulus))


class FreeGroup(Group):
    """Rank-2 free group on reduced words; no Folner family exists."""

    name = "F2"
    amenable_family = False

    def identity(self):
        return words.IDENTITY

    def multiply(self, x, y):
        return words.multiply(x, y)

    def inverse(self, x):
        return words.inverse(x)

    def default_generators(self):
        return (words.word("a"), words.word("b"))

    def element_str(self, x):
        return str(x) if x.syllables else "e"

    def parse_element(self, text):
        if text in ("e", ""):
            return words.IDENTITY
        return words.parse_word(text)

    def ball(self, radius: int) -> tuple:
        return words.enumerate_ball(radius)

    def folner_set(self, index: int) -> frozenset:
        raise FolnerUnavailableError(
            "no Folner chain: candidate family has ratio bounded below",
            observed_lower_bound=1.0,
        )

    def truncation(self, size_hint: int) -> tuple:
        radius = 1
        while len(words.enumerate_ball(radius)) < size_hint and radius < words.MAX_BALL_RADIUS:
            radius += 1
        return words.enumerate_ball(radius)


def group_from_spec(spec: dict) -> Group:
    """Build a group from a configuration mapping.

    Recognized kinds: {"kind": "lattice", "dim": d}, {"kind": "heisenberg"},
    {"kind": "cyclic", "modulus": m}, {"kind": "free"}.  "Z" and "Z2" are
    accepted shorthands for 1- and 2-dimensional lattices.
    """
    kind = spec.get("kind")
    if kind in ("Z", "z"):
        return Lattice(1)
    if kind in ("Z2", "z2"):
        return Lattice(2)
    if kind == "lattice":
        return Lattice(int(spec.get("dim", 1)))
    if kind == "heisenberg":
        return Heisenberg()
    if kind == "cyclic":
        return Cyclic(int(spec.get("modulus", 12)))
    if kind == "free":
        return FreeGroup()
    raise ValueError(f"unknown group kind {kind!r}")


def parse_generators(group: Group, texts: Iterable[str]) -> tuple:
    return tuple(group.parse_element(t) for t in texts)
