"""Dual-lattice geometry for one-dimensional spin configurations.

Spins live on the integers; spin flips (adjacent opposite spins) live on
the dual lattice Z + 1/2.  A half integer x + 1/2 is stored as the odd
integer 2x + 1, which keeps every geometric predicate in exact integer
arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyContourError


@dataclass(frozen=True, order=True)
class HalfInteger:
    """A dual-lattice point x + 1/2, stored as the odd integer 2x + 1."""

    twice_value: int

    def __post_init__(self) -> None:
        if self.twice_value % 2 == 0:
            raise ValueError(f"not a half integer: {self.twice_value}/2")

    @property
    def value(self) -> float:
        return self.twice_value / 2.0

    @property
    def site_left(self) -> int:
        """The integer site directly to the left."""
        return (self.twice_value - 1) // 2

    @property
    def site_right(self) -> int:
        return (self.twice_value + 1) // 2

    def __repr__(self) -> str:
        return f"{self.twice_value}/2"


@dataclass(frozen=True)
class IntervalZ:
    """Closed integer interval [lo, hi]; empty when lo > hi."""

    lo: int
    hi: int

    @classmethod
    def empty(cls) -> "IntervalZ":
        return cls(0, -1)

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    def __len__(self) -> int:
        return max(0, self.hi - self.lo + 1)

    def __contains__(self, x: int) -> bool:
        return self.lo <= x <= self.hi

    def sites(self) -> range:
        return range(self.lo, self.hi + 1)

    def intersects(self, other: "IntervalZ") -> bool:
        return not (self.is_empty or other.is_empty
                    or self.hi < other.lo or other.hi < self.lo)


@dataclass(frozen=True)
class SpinFlipSet:
    """An even finite subset b_1 < ... < b_2m of the dual lattice.

    Flips are stored through their doubled values (odd integers), strictly
    increasing.  The empty set is a valid member.
    """

    twice: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        t = tuple(self.twice)
        for v in t:
            if v % 2 == 0:
                raise ValueError(f"flip {v}/2 is not a half integer")
        for u, v in zip(t, t[1:]):
            if u >= v:
                raise ValueError("flips must be strictly increasing")
        if len(t) % 2:
            raise ValueError("flip set must have even cardinality")
        object.__setattr__(self, "twice", t)

    @classmethod
    def from_text(cls, text: str) -> "SpinFlipSet":
        """Parse the comma-separated twice_value form, e.g. "1,7,13,15"."""
        text = text.strip()
        if not text:
            return cls()
        return cls(tuple(sorted(int(tok) for tok in text.split(","))))

    def to_text(self) -> str:
        return ",".join(str(t) for t in self.twice)

    @property
    def halves(self) -> tuple[HalfInteger, ...]:
        return tuple(HalfInteger(t) for t in self.twice)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(t / 2.0 for t in self.twice)

    def __len__(self) -> int:
        return len(self.twice)

    def __bool__(self) -> bool:
        return bool(self.twice)

    def __repr__(self) -> str:
        return f"SpinFlipSet({self.to_text()})"


@dataclass(frozen=True)
class Configuration:
    """A spin configuration agreeing with boundary_sign off a finite set.

    minus_sites holds the sites whose spin is -boundary_sign; with a plus
    boundary these are literally the minus spins.  The minus-boundary class
    is its global flip, so the same geometry serves both.
    """

    minus_sites: frozenset[int]
    boundary_sign: int = 1

    def __post_init__(self) -> None:
        if self.boundary_sign not in (1, -1):
            raise ValueError("boundary_sign must be +1 or -1")
        object.__setattr__(self, "minus_sites", frozenset(self.minus_sites))

    def spin(self, x: int) -> int:
        return -self.boundary_sign if x in self.minus_sites else self.boundary_sign


def boundary(config: Configuration) -> SpinFlipSet:
    """The flips x + 1/2 at every adjacent sign change of the configuration."""
    flips: list[int] = []
    for lo, hi in _runs(config.minus_sites):
        flips.append(2 * lo - 1)
        flips.append(2 * hi + 1)
    return SpinFlipSet(tuple(flips))


def _runs(sites: frozenset[int]) -> list[tuple[int, int]]:
    """Maximal runs of consecutive integers, as closed pairs (lo, hi)."""
    out = []
    start = prev = None
    for x in sorted(sites):
        if prev is None or x > prev + 1:
            if prev is not None:
                out.append((start, prev))
            start = x
        prev = x
    if prev is not None:
        out.append((start, prev))
    return out


def configuration(gamma: SpinFlipSet, boundary_sign: int = 1) -> Configuration:
    """The configuration whose boundary is gamma (inverse of boundary())."""
    sites: list[int] = []
    for blk in interiors(gamma)[0] if gamma else []:
        sites.extend(blk.sites())
    return Configuration(frozenset(sites), boundary_sign)


def interiors(gamma: SpinFlipSet) -> tuple[list[IntervalZ], list[IntervalZ], IntervalZ]:
    """The alternating blocks of gamma.

    Returns (minus_blocks, plus_blocks, volume): the m closed integer blocks
    [b_1,b_2], [b_3,b_4], ... the m-1 gaps between them, and the volume
    [b_1, b_2m] as integer intervals.  Every block is non-empty because two
    distinct half integers always bracket an integer.
    """
    t = gamma.twice
    if not t:
        raise EmptyContourError("empty contour has no volume")
    blocks = [IntervalZ((t[i] + 1) // 2, (t[i + 1] - 1) // 2)
              for i in range(0, len(t), 2)]
    gaps = [IntervalZ((t[i] + 1) // 2, (t[i + 1] - 1) // 2)
            for i in range(1, len(t) - 1, 2)]
    volume = IntervalZ((t[0] + 1) // 2, (t[-1] - 1) // 2)
    return blocks, gaps, volume


def minus_sites_of(gamma: SpinFlipSet) -> list[int]:
    """I_-(gamma) as a sorted list of integer sites."""
    out: list[int] = []
    for blk in interiors(gamma)[0]:
        out.extend(blk.sites())
    return out


def diam(gamma: SpinFlipSet) -> int:
    """b_2m - b_1, an exact integer."""
    t = gamma.twice
    if not t:
        raise EmptyContourError("diameter of the empty flip set")
    return (t[-1] - t[0]) // 2


def dist(gamma: SpinFlipSet, other: SpinFlipSet) -> int:
    """Minimum pairwise |b - b'|; an exact integer for dual points."""
    if not gamma.twice or not other.twice:
        raise EmptyContourError("distance needs non-empty flip sets")
    return dist_twice(gamma.twice, other.twice) // 2


def dist_twice(t1: tuple[int, ...], t2: tuple[int, ...]) -> int:
    """Min |u - v| over u in t1, v in t2 (both sorted), in doubled units.

    Standard two-pointer scan: the pair under the pointers is evaluated
    before the smaller side advances, so the minimum is never skipped.
    """
    best = abs(t1[0] - t2[0])
    i = j = 0
    while i < len(t1) and j < len(t2):
        d = t1[i] - t2[j]
        ad = d if d >= 0 else -d
        if ad < best:
            best = ad
        if d < 0:
            i += 1
        else:
            j += 1
    return best
