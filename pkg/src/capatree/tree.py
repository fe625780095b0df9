"""Binary words, the boundary metric, the binary-expansion map, and cylinder sets.

Words are plain strings over {'0','1'}; the empty string is the root.
A finite union of boundary cylinders is kept canonical as a sorted
antichain of generator words (no generator is a prefix of another).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DomainError
from .exponents import Exponents, LogValue

ROOT = ""


def validate_word(word: str) -> str:
    if any(ch not in "01" for ch in word):
        raise DomainError(f"word must be over the alphabet {{0,1}}: {word!r}")
    return word


def meet(x: str, y: str) -> str:
    """Longest common prefix of two words."""
    n = min(len(x), len(y))
    i = 0
    while i < n and x[i] == y[i]:
        i += 1
    return x[:i]


def metric(x: str, y: str) -> LogValue:
    """Boundary distance 2**(-|meet(x, y)|)."""
    return LogValue.from_log2(-float(len(meet(x, y))))


def lambda_interval(x: str) -> tuple[Fraction, Fraction]:
    """The dyadic subinterval of [0,1] covered by the cylinder at ``x``.

    The word read as a binary integer k gives [k/2^|x|, (k+1)/2^|x|].
    """
    validate_word(x)
    n = len(x)
    k = int(x, 2) if x else 0
    scale = Fraction(1, 2 ** n)
    return (k * scale, (k + 1) * scale)


def weight(x: str, e: Exponents) -> LogValue:
    """Node weight 2**(-|x|*(1-ap)); identically 1 on the critical branch."""
    return LogValue.from_log2(-len(x) * float(1 - e.ap))


def canonicalize(words: Iterable[str]) -> "CylinderSet":
    return CylinderSet.from_words(words)


@dataclass(frozen=True)
class CylinderSet:
    """Canonical antichain of generator words for a finite union of cylinders."""

    generators: tuple[str, ...]

    @classmethod
    def from_words(cls, words: Iterable[str]) -> "CylinderSet":
        """Drop any word that has a (weak) prefix in the set; sort the rest.

        Lexicographic order lists a word right after all of its kept
        prefixes, so comparing against the last kept word suffices.
        """
        unique = sorted({validate_word(w) for w in words})
        kept: list[str] = []
        for w in unique:
            if kept and w.startswith(kept[-1]):
                continue
            kept.append(w)
        return cls(tuple(kept))

    @classmethod
    def empty(cls) -> "CylinderSet":
        return cls(())

    def __post_init__(self) -> None:
        for g in self.generators:
            validate_word(g)
        gens = sorted(self.generators)
        for prev, cur in zip(gens, gens[1:]):
            if cur.startswith(prev):
                raise DomainError(f"generators are not an antichain: {prev!r} <= {cur!r}")

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    def is_empty(self) -> bool:
        return not self.generators

    def covers(self, word: str) -> bool:
        """True when the cylinder at ``word`` lies inside the represented set."""
        return any(word.startswith(g) for g in self.generators)

    def contains_set(self, other: "CylinderSet") -> bool:
        return all(self.covers(g) for g in other.generators)

    def union(self, other: "CylinderSet") -> "CylinderSet":
        return CylinderSet.from_words(self.generators + other.generators)

    def bit_flip(self) -> "CylinderSet":
        table = str.maketrans("01", "10")
        return CylinderSet.from_words(g.translate(table) for g in self.generators)

    def spanning_nodes(self) -> set[str]:
        """All prefixes of all generators (the finite tree the recursion walks)."""
        nodes: set[str] = {ROOT}
        for g in self.generators:
            for i in range(1, len(g) + 1):
                nodes.add(g[:i])
        return nodes

    # -- JSON wire format: an array of bit strings ----------------------
    def to_json(self) -> list[str]:
        return list(self.generators)

    @classmethod
    def from_json(cls, data: Sequence[str] | str) -> "CylinderSet":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, (list, tuple)):
            raise DomainError("cylinder set JSON must be an array of bit strings")
        return cls.from_words(str(w) for w in data)


def d_cylinder_set(n: int, kappa: int) -> CylinderSet:
    """Explicit generator antichain for the run set D(n, kappa).

    Generators are every length-n word followed by kappa zeros, i.e. the
    boundary points whose digits n+1 .. n+kappa all vanish.
    """
    if n < 0 or kappa < 1:
        raise DomainError(f"need n >= 0 and kappa >= 1, got n={n}, kappa={kappa}")
    if (n + kappa) * 2 ** n > 2 ** 15:
        raise DomainError("explicit cylinder set too large; use the closed form")
    zeros = "0" * kappa
    return CylinderSet.from_words(
        format(i, f"0{n}b") + zeros if n else zeros for i in range(2 ** n)
    )
