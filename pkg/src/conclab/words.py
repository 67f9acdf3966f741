"""Reduced-word arithmetic for the rank-2 free group.

Words are stored in canonical syllable form: a tuple of (generator
index, nonzero exponent) pairs with adjacent syllables on distinct
generators.  Generator 0 is ``a``, generator 1 is ``b``; the string form
uses capitals for inverses ("aaBa" = a^2 b^-1 a) and "" for the
identity.
"""

from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "ReducedWord",
    "IDENTITY",
    "word",
    "parse_word",
    "multiply",
    "inverse",
    "classify_prefix",
    "enumerate_ball",
    "MAX_BALL_RADIUS",
]

MAX_BALL_RADIUS = 12

_GEN_NAMES = ("a", "b")
_LETTERS = {"a": (0, 1), "A": (0, -1), "b": (1, 1), "B": (1, -1)}


@dataclass(frozen=True)
class ReducedWord:
    syllables: tuple

    def __post_init__(self):
        prev = None
        for gen, exp in self.syllables:
            if exp == 0:
                raise ValueError("zero exponent in reduced word")
            if gen not in (0, 1):
                raise ValueError(f"unknown generator index {gen!r}")
            if gen == prev:
                raise ValueError("adjacent syllables on the same generator")
            prev = gen

    def __mul__(self, other: "ReducedWord") -> "ReducedWord":
        return multiply(self, other)

    def __len__(self) -> int:
        return sum(abs(exp) for _, exp in self.syllables)

    def __str__(self) -> str:
        parts = []
        for gen, exp in self.syllables:
            letter = _GEN_NAMES[gen] if exp > 0 else _GEN_NAMES[gen].upper()
            parts.append(letter * abs(exp))
        return "".join(parts)

    def __repr__(self) -> str:
        return f"ReducedWord({str(self)!r})"


IDENTITY = ReducedWord(())


def word(text: str) -> ReducedWord:
    """Build a reduced word from letters; reduces if necessary."""
    return parse_word(text)


def parse_word(text: str) -> ReducedWord:
    result = IDENTITY
    for ch in text:
        if ch not in _LETTERS:
            raise ValueError(f"unknown letter {ch!r} (expected one of a, A, b, B)")
        gen, exp = _LETTERS[ch]
        result = multiply(result, ReducedWord(((gen, exp),)))
    return result


def multiply(u: ReducedWord, v: ReducedWord) -> ReducedWord:
    """Canonical reduced form of the concatenation uv."""
    stack = list(u.syllables)
    for gen, exp in v.syllables:
        if stack and stack[-1][0] == gen:
            merged = stack[-1][1] + exp
            stack.pop()
            if merged != 0:
                stack.append((gen, merged))
        else:
            stack.append((gen, exp))
    return ReducedWord(tuple(stack))


def inverse(u: ReducedWord) -> ReducedWord:
    return ReducedWord(tuple((gen, -exp) for gen, exp in reversed(u.syllables)))


def classify_prefix(w: ReducedWord) -> int:
    """Index n of the class W_n: the leading exponent on generator a,
    or 0 when the word starts with a b-syllable or is the identity."""
    if not w.syllables:
        return 0
    gen, exp = w.syllables[0]
    return exp if gen == 0 else 0


@lru_cache(maxsize=None)
def _ball(radius: int) -> tuple:
    if radius == 0:
        return (IDENTITY,)
    shorter = _ball(radius - 1)
    seen = list(shorter)
    have = set(shorter)
    frontier = [w for w in shorter if len(w) == radius - 1]
    letters = [ReducedWord(((g, e),)) for g, e in ((0, 1), (0, -1), (1, 1), (1, -1))]
    for w in frontier:
        for letter in letters:
            ext = multiply(w, letter)
            if len(ext) == radius and ext not in have:
                have.add(ext)
                seen.append(ext)
    return tuple(seen)


def enumerate_ball(radius: int) -> tuple:
    """All reduced words of length <= radius, in deterministic order
    (by length, then discovery order over letters a, A, b, B).

    Rank 2 gives exactly 2 * 3^radius - 1 words; the radius guard keeps
    that count around a million.
    """
    if radius < 0:
        raise ValueError(f"radius must be nonnegative, got {radius}")
    if radius > MAX_BALL_RADIUS:
        raise ValueError(f"ball radius {radius} exceeds guard {MAX_BALL_RADIUS}")
    return _ball(radius)
