"""Finitely supported square-summable vectors over group elements.

Amplitudes are real; keys are canonical group elements (reduced words,
lattice tuples, residues...).  Vectors are immutable values: every
operation returns a fresh vector, and the squared norm is fixed at
construction.
"""

import math
from typing import Callable, Mapping

__all__ = ["L2Vector", "zero_vector", "delta"]

_DROP = 0.0  # exact zeros never enter the support


class L2Vector:
    __slots__ = ("_amp", "_norm_sq")

    def __init__(self, amplitudes: Mapping):
        self._amp = {k: float(v) for k, v in amplitudes.items() if v != _DROP}
        self._norm_sq = math.fsum(v * v for v in self._amp.values())

    @property
    def amplitudes(self) -> dict:
        return dict(self._amp)

    @property
    def support(self):
        return self._amp.keys()

    def __getitem__(self, key) -> float:
        return self._amp.get(key, 0.0)

    def __len__(self) -> int:
        return len(self._amp)

    def __eq__(self, other) -> bool:
        return isinstance(other, L2Vector) and self._amp == other._amp

    def __repr__(self) -> str:
        return f"L2Vector({len(self._amp)} atoms, norm={self.norm():.6g})"

    def norm_sq(self) -> float:
        return self._norm_sq

    def norm(self) -> float:
        return math.sqrt(self._norm_sq)

    def scale(self, factor: float) -> "L2Vector":
        return L2Vector({k: factor * v for k, v in self._amp.items()})

    def add(self, other: "L2Vector") -> "L2Vector":
        out = dict(self._amp)
        for k, v in other._amp.items():
            out[k] = out.get(k, 0.0) + v
        return L2Vector(out)

    def sub(self, other: "L2Vector") -> "L2Vector":
        return self.add(other.scale(-1.0))

    def dot(self, other: "L2Vector") -> float:
        small, big = (self._amp, other._amp) if len(self._amp) <= len(other._amp) else (other._amp, self._amp)
        return math.fsum(v * big[k] for k, v in small.items() if k in big)

    def distance(self, other: "L2Vector") -> float:
        return self.sub(other).norm()

    def normalized(self) -> "L2Vector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return self.scale(1.0 / n)

    def rekey(self, mapper: Callable) -> "L2Vector":
        """Push the support through an injective key map; norms are
        preserved exactly (same multiset of amplitudes)."""
        out = {}
        for k, v in self._amp.items():
            new = mapper(k)
            if new in out:
                raise ValueError(f"key map is not injective at {k!r}")
            out[new] = v
        return L2Vector(out)

    def masked_norm(self, keep: Callable) -> float:
        """Norm of the restriction to keys where keep(key) is true."""
        return math.sqrt(math.fsum(v * v for k, v in self._amp.items() if keep(k)))


def zero_vector() -> L2Vector:
    return L2Vector({})


def delta(key) -> L2Vector:
    """Unit point mass at a single group element."""
    return L2Vector({key: 1.0})
