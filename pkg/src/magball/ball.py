"""The limited-magnitude error ball: up to ``t`` entries, each in
``[-kminus, kplus]``."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Iterator, Sequence

from .errors import DomainError
from .limits import check


@dataclass(frozen=True)
class BallSpec:
    n: int
    t: int
    kplus: int
    kminus: int

    def __post_init__(self) -> None:
        if not 0 <= self.kminus <= self.kplus:
            raise DomainError("need 0 <= kminus <= kplus")
        if self.kplus + self.kminus < 1:
            raise DomainError("need kplus + kminus >= 1")
        if not 0 <= self.t <= self.n:
            raise DomainError("need 0 <= t <= n")

    def nonzero_values(self) -> tuple[int, ...]:
        return tuple(range(-self.kminus, 0)) + tuple(range(1, self.kplus + 1))

    def to_json(self) -> dict:
        return {"n": self.n, "t": self.t, "kplus": self.kplus, "kminus": self.kminus}

    @classmethod
    def from_json(cls, data: dict) -> "BallSpec":
        return cls(int(data["n"]), int(data["t"]), int(data["kplus"]), int(data["kminus"]))


def ball_size(spec: BallSpec) -> int:
    """Exact number of ball points: sum over weights i of C(n,i) (kplus+kminus)^i."""
    k = spec.kplus + spec.kminus
    return sum(comb(spec.n, i) * k**i for i in range(spec.t + 1))


def enumerate_ball(spec: BallSpec) -> Iterator[tuple[int, ...]]:
    """Ball vectors, weight-major, support lexicographic, values lexicographic."""
    check("enumeration", ball_size(spec))
    values = sorted(spec.nonzero_values())
    zero = (0,) * spec.n
    yield zero
    for w in range(1, spec.t + 1):
        for support in combinations(range(spec.n), w):
            for vals in product(values, repeat=w):
                vec = list(zero)
                for pos, v in zip(support, vals):
                    vec[pos] = v
                yield tuple(vec)


def ball_contains(spec: BallSpec, v: Sequence[int]) -> bool:
    if len(v) != spec.n:
        raise DomainError(f"vector length {len(v)} != n = {spec.n}")
    weight = 0
    for x in v:
        if not -spec.kminus <= x <= spec.kplus:
            return False
        if x != 0:
            weight += 1
    return weight <= spec.t
