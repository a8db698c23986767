"""Canonical multiscale covers and the scale-map bookkeeping.

At scale n a flip set is covered greedily from the left by open intervals
(l, l + 2^n) with integer endpoints; the first interval starts at
b_1 - 1/2 and the rule recurses on the uncovered remainder.  N(gamma)
totals the cover sizes over scales 0..n0 with n0 = floor(log2 diam);
N'(gamma) counts flips plus isolated intervals, the ones far from every
other interval of their scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EmptyContourError
from .lattice import SpinFlipSet, diam


@dataclass(frozen=True)
class ContourParams:
    """The (M, a) pair governing irreducibility and isolation."""

    M: float
    a: float

    def __post_init__(self) -> None:
        if not self.M > 1.0:
            raise ValueError("M must exceed 1")
        if not (1.0 < self.a < 2.0):
            raise ValueError("a must lie in (1, 2)")


@dataclass(frozen=True)
class OpenInterval:
    """The open interval (left, left + 2^scale) with integer endpoints."""

    left: int
    scale: int

    def __post_init__(self) -> None:
        if self.scale < 0:
            raise ValueError("scale must be non-negative")

    @property
    def right(self) -> int:
        return self.left + (1 << self.scale)

    def covers_flip(self, twice: int) -> bool:
        return 2 * self.left < twice < 2 * self.right

    def gap_to(self, other: "OpenInterval") -> int:
        """Distance between the two open intervals as subsets of R."""
        if self.left <= other.left:
            return max(0, other.left - self.right)
        return max(0, self.left - other.right)


@dataclass(frozen=True)
class CoverFamily:
    """All canonical covers of one flip set, scales 0..n0, plus isolation."""

    n0: int
    cover: tuple[tuple[OpenInterval, ...], ...]
    isolated: tuple[tuple[OpenInterval, ...], ...] | None = None

    def as_payload(self) -> dict:
        out = {
            "n0": self.n0,
            "cover": [[[iv.left, iv.right] for iv in level] for level in self.cover],
        }
        if self.isolated is not None:
            out["isolated"] = [[[iv.left, iv.right] for iv in level]
                               for level in self.isolated]
        return out


def canonical_cover(gamma: SpinFlipSet, n: int) -> list[OpenInterval]:
    """Greedy-leftmost cover of gamma by open intervals of diameter 2^n."""
    if not gamma:
        raise EmptyContourError("cannot cover the empty flip set")
    if n < 0:
        raise ValueError("scale must be non-negative")
    ts = gamma.twice
    size = 1 << n
    out: list[OpenInterval] = []
    i = 0
    while i < len(ts):
        left = (ts[i] - 1) // 2
        out.append(OpenInterval(left, n))
        limit = 2 * (left + size)
        while i < len(ts) and ts[i] < limit:
            i += 1
    return out


def top_scale(gamma: SpinFlipSet) -> int:
    """n0(gamma) = floor(log2 diam(gamma)); exact integer arithmetic."""
    d = diam(gamma)
    if d < 1:
        raise EmptyContourError("top scale needs at least two flips")
    return d.bit_length() - 1


def cover_size(gamma: SpinFlipSet) -> int:
    """N(gamma) = Sum_{n=0}^{n0} |I_n(gamma)|."""
    n0 = top_scale(gamma)
    return sum(len(canonical_cover(gamma, n)) for n in range(n0 + 1))


def isolation_threshold(n: int, params: ContourParams) -> float:
    return 2.0 * params.M * 2.0 ** (params.a * n)


def isolated_cover(gamma: SpinFlipSet, n: int,
                   params: ContourParams) -> list[OpenInterval]:
    """Members of I_n(gamma) at distance >= 2M 2^(an) from all the others.

    Only scales 1 <= n <= n0 are accepted.  The greedy cover is sorted and
    non-overlapping, so each interval's nearest neighbour is adjacent in the
    list.  A sole interval is isolated vacuously.
    """
    n0 = top_scale(gamma)
    if not (1 <= n <= n0):
        raise ValueError(f"scale {n} outside the isolated range 1..{n0}")
    cover = canonical_cover(gamma, n)
    if len(cover) == 1:
        return cover
    thr = isolation_threshold(n, params)
    out = []
    for i, iv in enumerate(cover):
        left_gap = iv.gap_to(cover[i - 1]) if i > 0 else None
        right_gap = iv.gap_to(cover[i + 1]) if i + 1 < len(cover) else None
        if ((left_gap is None or left_gap >= thr)
                and (right_gap is None or right_gap >= thr)):
            out.append(iv)
    return out


def isolated_cover_size(gamma: SpinFlipSet, params: ContourParams) -> int:
    """N'(gamma) = |gamma| + Sum_{n=1}^{n0} |I'_n(gamma)|."""
    if not gamma:
        raise EmptyContourError("empty flip set has no cover")
    n0 = top_scale(gamma)
    return len(gamma) + sum(len(isolated_cover(gamma, n, params))
                            for n in range(1, n0 + 1))


def cover_family(gamma: SpinFlipSet,
                 params: ContourParams | None = None) -> CoverFamily:
    n0 = top_scale(gamma)
    cover = tuple(tuple(canonical_cover(gamma, n)) for n in range(n0 + 1))
    isolated = None
    if params is not None:
        isolated = tuple(tuple(isolated_cover(gamma, n, params))
                         for n in range(1, n0 + 1))
    return CoverFamily(n0, cover, isolated)


def scale_map(n: int, params: ContourParams) -> int:
    """s(n) = floor((n - log2(8M)) / a)."""
    return math.floor((n - math.log2(8.0 * params.M)) / params.a)


def nbar(params: ContourParams) -> int:
    """The first scale with s(n) > 0: ceil(a + log2(8M))."""
    return math.ceil(params.a + math.log2(8.0 * params.M))


def scale_chain_stats(n: int, params: ContourParams) -> tuple[int, bool]:
    """l(n) = max{m : s^m(n) > 0} by iteration, plus its closed-form bracket.

    The bracket is
      -1 + log_a(((a-1) n + a + log2(8M)) / ((2a-1) + log2(8M)))
        <= l(n) <=
      log_a(((a-1) n + log2(8M)) / ((a-1) + log2(8M))).
    A tiny slack absorbs float noise at exact-integer crossings.
    """
    if n < nbar(params):
        raise ValueError(f"n={n} below nbar={nbar(params)}")
    a, lg = params.a, math.log2(8.0 * params.M)
    l_n = 0
    x = n
    while True:
        x = scale_map(x, params)
        if x > 0:
            l_n += 1
        else:
            break
    lower = -1.0 + math.log(((a - 1.0) * n + a + lg) / ((2.0 * a - 1.0) + lg), a)
    upper = math.log(((a - 1.0) * n + lg) / ((a - 1.0) + lg), a)
    ok = (lower - 1e-9 <= l_n <= upper + 1e-9)
    return l_n, ok


def scale_preimage_census(params: ContourParams, n_max: int,
                          m_max: int, j_max: int) -> dict[tuple[int, int], int]:
    """|S_{m,j}| = |{n <= n_max : s^m(n) = j}| for 1 <= m <= m_max, 1 <= j <= j_max."""
    counts: dict[tuple[int, int], int] = {}
    for n in range(1, n_max + 1):
        x = n
        for m in range(1, m_max + 1):
            x = scale_map(x, params)
            if 1 <= x <= j_max:
                counts[(m, x)] = counts.get((m, x), 0) + 1
            if x <= 0:
                break
    return counts


def scale_preimage_bound(m: int, params: ContourParams) -> float:
    """The census bound (3a/(a-1)) a^m."""
    a = params.a
    return (3.0 * a / (a - 1.0)) * a ** m
