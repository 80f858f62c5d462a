"""Symmetry-breaking predicates on a map sigma: pattern vertex -> host vertex.

Host vertices are compared by their integer id.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class LessThan:
    a: int
    b: int

    @property
    def vertices(self) -> frozenset:
        return frozenset((self.a, self.b))

    def holds(self, sigma: Sequence[int]) -> bool:
        return sigma[self.a] < sigma[self.b]

    def __str__(self):
        return f"s({self.a})<s({self.b})"


@dataclass(frozen=True)
class MinOf:
    """sigma(a) equals the minimum of sigma over ``among`` (which contains a)."""

    a: int
    among: frozenset

    def __post_init__(self):
        object.__setattr__(self, "among", frozenset(self.among) | {self.a})

    @property
    def vertices(self) -> frozenset:
        return self.among

    def holds(self, sigma: Sequence[int]) -> bool:
        s = sigma[self.a]
        return all(s <= sigma[x] for x in self.among)

    def __str__(self):
        return f"s({self.a})=min({','.join(map(str, sorted(self.among)))})"


Constraint = LessThan | MinOf


def all_hold(constraints, sigma) -> bool:
    return all(c.holds(sigma) for c in constraints)
