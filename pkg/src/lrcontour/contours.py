"""(M,a)-irreducibility, the (M,a)-partition, nesting, and set algebra.

A flip set is reducible when it admits a bipartition into two even
non-empty pieces farther apart than M (min diameter)^a.  Only
bipartitions are tested: an n-part witness always yields a 2-part one
by peeling off the piece of smallest diameter, and the equivalence is
re-checked against exhaustive n-part search in the test suite.

The partition of a boundary is computed by split-then-repair: split
every reducible part, merge any pair of parts that sit too close, and
iterate to a fixpoint.  Uniqueness is enforced empirically against a
brute-force oracle on small instances.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field

from .covers import ContourParams
from .errors import EmptyContourError, FixpointError
from .lattice import SpinFlipSet, diam, dist_twice, interiors


def _require_contour(gamma: SpinFlipSet) -> None:
    if len(gamma) == 0:
        raise EmptyContourError("empty flip set")


def _diam_twice(ts: tuple[int, ...]) -> int:
    return ts[-1] - ts[0]


def _split_is_distant(ts1: tuple[int, ...], ts2: tuple[int, ...],
                      params: ContourParams) -> bool:
    """dist > M (min diam)^a for the pair, all in lattice units."""
    min_diam = min(_diam_twice(ts1), _diam_twice(ts2)) // 2
    gap = dist_twice(ts1, ts2) // 2
    return gap > params.M * float(min_diam) ** params.a


def _bipartitions(ts: tuple[int, ...]):
    """Even bipartitions (part1, part2) with ts[0] in part1, both non-empty.

    Contiguous splits come first; reducible sets in practice split at a
    large gap, so these catch most witnesses before the 2^(k-2) general
    masks are touched.
    """
    k = len(ts)
    seen = set()
    for cut in range(2, k, 2):
        seen.add((1 << cut) - 1)
        yield ts[:cut], ts[cut:]
    rest = k - 1
    for mask in range(1, 1 << rest):
        if bin(mask).count("1") % 2 == 0:
            continue
        full = (mask << 1) | 1
        if full in seen or full == (1 << k) - 1:
            continue
        part1 = tuple(ts[i] for i in range(k) if (full >> i) & 1)
        part2 = tuple(ts[i] for i in range(k) if not (full >> i) & 1)
        yield part1, part2


def _find_split(ts: tuple[int, ...], params: ContourParams):
    """A distant bipartition of ts, or None when ts is irreducible."""
    if len(ts) == 2:
        return None
    if (_diam_twice(ts) // 2) <= params.M:
        # every candidate pair has min diameter >= 1, hence threshold
        # > M, while no gap inside the set can exceed its diameter
        return None
    for ts1, ts2 in _bipartitions(ts):
        if _split_is_distant(ts1, ts2, params):
            return ts1, ts2
    return None


def is_irreducible(gamma: SpinFlipSet, params: ContourParams) -> bool:
    """True when no even bipartition of gamma is (M,a)-distant."""
    _require_contour(gamma)
    return _find_split(gamma.twice, params) is None


def _split_to_irreducible(ts: tuple[int, ...],
                          params: ContourParams) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    stack = [ts]
    while stack:
        cur = stack.pop()
        split = _find_split(cur, params)
        if split is None:
            out.append(cur)
        else:
            stack.extend(split)
    return out


def _merge_sorted(parts: list[tuple[int, ...]]) -> tuple[int, ...]:
    out: list[int] = []
    for p in parts:
        out.extend(p)
    out.sort()
    return tuple(out)


@dataclass(frozen=True)
class ContourPartition:
    """The (M,a)-partition of a flip set into irreducible distant parts."""

    parts: tuple[SpinFlipSet, ...]
    params: ContourParams
    source: SpinFlipSet

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def externals(self) -> list[SpinFlipSet]:
        return externals(list(self.parts))

    def view(self, gamma: SpinFlipSet) -> "PartitionView":
        return partition_view(list(self.parts), gamma)

    def negative_set(self) -> set[int]:
        return negative_set(list(self.parts))

    def positive_part(self) -> set[int]:
        return positive_part(list(self.parts))

    def as_payload(self) -> dict:
        return {
            "params": {"M": self.params.M, "a": self.params.a},
            "source": self.source.to_text(),
            "parts": [p.to_text() for p in self.parts],
        }


def partition(flips: SpinFlipSet, params: ContourParams) -> ContourPartition:
    """Split-then-repair computation of the unique (M,a)-partition."""
    if len(flips) == 0:
        return ContourPartition((), params, flips)
    parts = _split_to_irreducible(flips.twice, params)
    cap = max(4, len(flips) ** 2)
    for _ in range(cap):
        n = len(parts)
        owner = list(range(n))

        def root(i: int) -> int:
            while owner[i] != i:
                owner[i] = owner[owner[i]]
                i = owner[i]
            return i

        dirty = False
        for i in range(n):
            for j in range(i + 1, n):
                if root(i) == root(j):
                    continue
                if not _split_is_distant(parts[i], parts[j], params):
                    owner[root(i)] = root(j)
                    dirty = True
        if not dirty:
            ordered = sorted(parts)
            return ContourPartition(
                tuple(SpinFlipSet(p) for p in ordered), params, flips)
        groups: dict[int, list[tuple[int, ...]]] = {}
        for i, p in enumerate(parts):
            groups.setdefault(root(i), []).append(p)
        parts = []
        for members in groups.values():
            if len(members) == 1:
                parts.append(members[0])
            else:
                parts.extend(_split_to_irreducible(_merge_sorted(members),
                                                   params))
    raise FixpointError(
        f"fixpoint not reached after {cap} merge rounds on {flips.to_text()}")


def check_partition_properties(parts: list[SpinFlipSet], source: SpinFlipSet,
                               params: ContourParams) -> tuple[bool, str]:
    """Disjoint-union, irreducibility, and pairwise-distance checks."""
    merged: list[int] = []
    for p in parts:
        merged.extend(p.twice)
    if sorted(merged) != list(source.twice) or len(set(merged)) != len(merged):
        return False, "parts do not partition the source flips"
    for p in parts:
        if len(p) % 2 != 0 or len(p) == 0:
            return False, f"part {p.to_text()} is not even and non-empty"
        if not is_irreducible(p, params):
            return False, f"part {p.to_text()} is reducible"
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            if not _split_is_distant(parts[i].twice, parts[j].twice, params):
                return False, (f"parts {parts[i].to_text()} and "
                               f"{parts[j].to_text()} are too close")
    return True, "ok"


def nests_inside(inner: SpinFlipSet, outer: SpinFlipSet) -> bool:
    """inner < outer: inner lies in a single open gap of outer."""
    _require_contour(inner)
    _require_contour(outer)
    ts = outer.twice
    i = bisect_left(ts, inner.twice[0])
    if i <= 0 or i >= len(ts):
        return False
    if ts[i] == inner.twice[0]:
        return False
    return inner.twice[-1] < ts[i]


def gap_sign(inner: SpinFlipSet, outer: SpinFlipSet) -> int:
    """-1 when inner sits in a gap of I_-(outer), +1 for I_+(outer)."""
    if not nests_inside(inner, outer):
        raise ValueError("gap sign is defined only for nested flip sets")
    i = bisect_left(outer.twice, inner.twice[0])
    return -1 if i % 2 == 1 else 1


def externals(parts: list[SpinFlipSet]) -> list[SpinFlipSet]:
    """Maximal parts under the nesting order."""
    out = []
    for p in parts:
        if not any(q is not p and nests_inside(p, q) for q in parts):
            out.append(p)
    return sorted(out, key=lambda p: p.twice)


def is_well_ordered(parts: list[SpinFlipSet]) -> bool:
    """Every incomparable pair has disjoint volumes."""
    spans = []
    for p in parts:
        _require_contour(p)
        lo = (p.twice[0] + 1) // 2
        hi = (p.twice[-1] - 1) // 2
        spans.append((lo, hi))
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            if nests_inside(parts[i], parts[j]) or \
                    nests_inside(parts[j], parts[i]):
                continue
            lo_i, hi_i = spans[i]
            lo_j, hi_j = spans[j]
            if lo_i <= hi_j and lo_j <= hi_i:
                return False
    return True


@dataclass(frozen=True)
class PartitionView:
    """Closure of an external contour: {gamma} | interior plus | interior minus."""

    gamma: SpinFlipSet
    closure: tuple[SpinFlipSet, ...] = field(default=())
    interior_minus: tuple[SpinFlipSet, ...] = field(default=())
    interior_plus: tuple[SpinFlipSet, ...] = field(default=())


def partition_view(parts: list[SpinFlipSet],
                   gamma: SpinFlipSet) -> PartitionView:
    if gamma not in parts:
        raise ValueError("view requested for a flip set outside the family")
    closure = [gamma]
    minus = []
    plus = []
    for p in parts:
        if p == gamma:
            continue
        if nests_inside(p, gamma):
            closure.append(p)
            if gap_sign(p, gamma) == -1:
                minus.append(p)
            else:
                plus.append(p)
    key = lambda p: p.twice
    return PartitionView(gamma, tuple(sorted(closure, key=key)),
                         tuple(sorted(minus, key=key)),
                         tuple(sorted(plus, key=key)))


def union_flips(parts: list[SpinFlipSet]) -> SpinFlipSet:
    merged: list[int] = []
    for p in parts:
        merged.extend(p.twice)
    merged.sort()
    return SpinFlipSet(tuple(merged))


def negative_set(parts: list[SpinFlipSet]) -> set[int]:
    """N = sites flipped to -1 by the whole family, plus boundary."""
    if not parts:
        return set()
    minus, _plus, _vol = interiors(union_flips(parts))
    out: set[int] = set()
    for block in minus:
        out.update(block.sites())
    return out


def volume_set(parts: list[SpinFlipSet]) -> set[int]:
    """V = disjoint union of the volumes of the external parts."""
    out: set[int] = set()
    for p in externals(parts):
        lo = (p.twice[0] + 1) // 2
        hi = (p.twice[-1] - 1) // 2
        out.update(range(lo, hi + 1))
    return out


def positive_part(parts: list[SpinFlipSet]) -> set[int]:
    """P = V minus N."""
    return volume_set(parts) - negative_set(parts)
