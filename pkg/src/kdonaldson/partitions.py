"""Young diagrams stored by column lengths, and r-tuples of them."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, List, Tuple

__all__ = [
    "YoungDiagram",
    "YoungTuple",
    "partitions",
    "partition_count",
    "enumerate_tuples",
    "iter_tuples",
    "arm_leg",
    "tuple_count",
]


@dataclass(frozen=True)
class YoungDiagram:
    """A Young diagram given by its column lengths ``lambda_1 >= lambda_2 >= ...``.

    The cell ``(i, j)`` lies in column ``i`` at height ``j`` (both 1-based).
    """

    columns: Tuple[int, ...]
    _transpose: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        cols = tuple(c for c in self.columns if c > 0)
        if any(cols[i] < cols[i + 1] for i in range(len(cols) - 1)):
            raise ValueError(f"column lengths must be weakly decreasing: {self.columns}")
        object.__setattr__(self, "columns", cols)
        rows = tuple(sum(1 for c in cols if c >= j) for j in range(1, (cols[0] if cols else 0) + 1))
        object.__setattr__(self, "_transpose", rows)

    @property
    def size(self) -> int:
        return sum(self.columns)

    def __len__(self) -> int:
        return self.size

    def col(self, i: int) -> int:
        """lambda_i, zero beyond the diagram."""
        return self.columns[i - 1] if 0 < i <= len(self.columns) else 0

    def row(self, j: int) -> int:
        """lambda'_j, zero beyond the diagram."""
        return self._transpose[j - 1] if 0 < j <= len(self._transpose) else 0

    def transpose(self) -> "YoungDiagram":
        return YoungDiagram(self._transpose)

    def cells(self) -> Iterator[Tuple[int, int]]:
        for i, c in enumerate(self.columns, start=1):
            for j in range(1, c + 1):
                yield (i, j)

    def arm(self, s: Tuple[int, int]) -> int:
        i, j = s
        return self.col(i) - j

    def leg(self, s: Tuple[int, int]) -> int:
        i, j = s
        return self.row(j) - i


def arm_leg(Y: YoungDiagram, other: YoungDiagram, s: Tuple[int, int]) -> Tuple[int, int, int, int]:
    """``(a_Y(s), l_other(s), a'(s), l'(s))`` for a cell ``s = (i, j)``."""
    i, j = s
    return Y.arm(s), other.leg(s), j - 1, i - 1


@dataclass(frozen=True)
class YoungTuple:
    diagrams: Tuple[YoungDiagram, ...]

    @property
    def total_size(self) -> int:
        return sum(Y.size for Y in self.diagrams)

    @property
    def rank(self) -> int:
        return len(self.diagrams)

    def __getitem__(self, i: int) -> YoungDiagram:
        return self.diagrams[i]

    def transpose(self) -> "YoungTuple":
        return YoungTuple(tuple(Y.transpose() for Y in self.diagrams))


def partitions(n: int, max_part: int | None = None) -> Iterator[Tuple[int, ...]]:
    """Partitions of ``n`` in reverse-lexicographic order (largest first part first)."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def partition_count(n: int) -> int:
    """Number of partitions of n via the pentagonal-number recurrence."""
    p = [1] + [0] * n
    for m in range(1, n + 1):
        k, s = 1, 0
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            s += sign * p[m - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                s += sign * p[m - g2]
            k += 1
        p[m] = s
    return p[n]


def _compositions(n: int, r: int) -> Iterator[Tuple[int, ...]]:
    if r == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, r - 1):
            yield (first,) + rest


def iter_tuples(r: int, n: int) -> Iterator[YoungTuple]:
    """Stream all r-tuples of Young diagrams of total size n in canonical order."""
    if r < 1:
        raise ValueError("rank must be >= 1")
    for comp in _compositions(n, r):
        for parts in product(*(list(partitions(k)) for k in comp)):
            yield YoungTuple(tuple(YoungDiagram(p) for p in parts))


def enumerate_tuples(r: int, n: int) -> List[YoungTuple]:
    return list(iter_tuples(r, n))


def tuple_count(r: int, n: int) -> int:
    """Coefficient of x^n in prod_k (1 - x^k)^{-r}."""
    coeffs = [1] + [0] * n
    for _ in range(r):
        for k in range(1, n + 1):
            for m in range(k, n + 1):
                coeffs[m] += coeffs[m - k]
    return coeffs[n]
