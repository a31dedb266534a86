"""Named test towers: cycles whose first edge is a bundle of parallel edges."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .multigraph import Multigraph
from .voltage import VoltageAssignment
from .iwasawa import cycle_family

# bundle size is a - 1; names use t/s for the two generators
BUNDLES_L1: dict[str, tuple[tuple[int, ...], ...]] = {
    "t": ((1,),),
    "t,1": ((1,), (0,)),
    "t,t": ((1,), (1,)),
    "t,t2": ((1,), (2,)),
    "t,t,t": ((1,), (1,), (1,)),
    "t,1,1": ((1,), (0,), (0,)),
    "t,t,1": ((1,), (1,), (0,)),
}
BUNDLES_L2: dict[str, tuple[tuple[int, ...], ...]] = {
    "t,s": ((1, 0), (0, 1)),
}

PRIMES = (2, 3, 5)
SIZES = (3, 4, 5)
VERTEX_CAP = 2000


@dataclass(frozen=True)
class Tower:
    n: int
    bundle: str
    p: int
    l: int

    @property
    def a(self) -> int:
        return len(self.volts) + 1

    @property
    def volts(self) -> tuple[tuple[int, ...], ...]:
        return (BUNDLES_L1 if self.l == 1 else BUNDLES_L2)[self.bundle]

    @property
    def label(self) -> str:
        return f"C{self.n}[{self.bundle}] p={self.p}"

    def build(self) -> tuple[Multigraph, VoltageAssignment]:
        return cycle_family(self.n, self.volts, self.p)

    def levels(self, cap: int = VERTEX_CAP) -> list[int]:
        out, m = [], 0
        while self.n * self.p ** (m * self.l) <= cap:
            out.append(m)
            m += 1
        return out


def corpus(sizes=SIZES, primes=PRIMES) -> Iterator[Tower]:
    for l, bundles in ((1, BUNDLES_L1), (2, BUNDLES_L2)):
        for name in bundles:
            for n in sizes:
                for p in primes:
                    yield Tower(n, name, p, l)


def example_84_bundle(a: int, b: int) -> tuple[tuple[int], ...]:
    """a - 1 parallel edges, b of them carrying tau and the rest trivial."""
    if not 0 < b <= a - 1:
        raise ValueError("need 0 < b <= a - 1")
    return ((1,),) * b + ((0,),) * (a - 1 - b)
