"""Integer partitions with a fixed number of parts.

A partition is a non-increasing tuple of positive integers.  The slice
enumerators only ever produce partitions with 2 <= m <= n, but the type
itself tolerates looser shapes (a single part, say) so that padding with
trailing unit parts stays simple.
"""

from dataclasses import dataclass
from math import factorial


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        if not self.parts:
            raise ValueError("partition needs at least one part")
        if any(p < 1 for p in self.parts):
            raise ValueError(f"parts must be positive: {self.parts}")
        if any(a < b for a, b in zip(self.parts, self.parts[1:])):
            raise ValueError(f"parts must be non-increasing: {self.parts}")

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def num_parts(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return format_partition(self)


def partitions_of(n: int, m: int) -> list[Partition]:
    """All partitions of n into exactly m parts, lexicographically decreasing.

    The slice machinery works on 2 <= m <= n; anything else is a domain error.
    """
    if m < 2 or m > n:
        raise ValueError(f"need 2 <= m <= n, got n={n}, m={m}")

    out: list[Partition] = []

    def rec(remaining, parts_left, bound, acc):
        if parts_left == 1:
            if 1 <= remaining <= bound:
                out.append(Partition(acc + (remaining,)))
            return
        # leave at least 1 for each remaining part
        hi = min(bound, remaining - (parts_left - 1))
        for p in range(hi, 0, -1):
            rec(remaining - p, parts_left - 1, p, acc + (p,))

    rec(n, m, n, ())
    return out


def all_partitions(max_total: int, min_total: int = 2) -> list[Partition]:
    """Every partition with 2 <= m <= n and min_total <= n <= max_total."""
    out = []
    for n in range(max(2, min_total), max_total + 1):
        for m in range(2, n + 1):
            out.extend(partitions_of(n, m))
    return out


def ones_count(p: Partition) -> int:
    """Number of parts equal to 1."""
    return sum(1 for x in p.parts if x == 1)


def heavy_sum(p: Partition) -> int:
    """Sum of the parts strictly greater than 1 (0 if there are none)."""
    return sum(x for x in p.parts if x > 1)


def padding_adjustment(p: Partition) -> int:
    """1 for every partition except (2,1), which gets 0."""
    return 0 if p.parts == (2, 1) else 1


def padding_depth(p: Partition) -> int:
    """How many unit-padded companions the canonical identity family spans.

    max(heavy_sum - ones_count - adjustment, 0); never negative.
    """
    return max(heavy_sum(p) - ones_count(p) - padding_adjustment(p), 0)


def padded(p: Partition, k: int) -> Partition:
    """p with k trailing unit parts appended."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return Partition(p.parts + (1,) * k)


def transversal_size(p: Partition) -> int:
    """Number of words whose letter counts realize p (multinomial coefficient)."""
    size = factorial(p.total)
    for x in p.parts:
        size //= factorial(x)
    return size


def format_partition(p: Partition) -> str:
    return ",".join(str(x) for x in p.parts)


def parse_partition(text: str) -> Partition:
    try:
        parts = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise ValueError(f"cannot parse partition from {text!r}") from None
    return Partition(parts)
