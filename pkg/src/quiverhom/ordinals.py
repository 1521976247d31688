"""Truncated countable ordinals w*k + n and ladder systems on them."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Tuple


class LadderError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class OrdinalT:
    """The ordinal w*k + n; comparison is lexicographic on (k, n)."""

    k: int
    n: int

    def __post_init__(self):
        if self.k < 0 or self.n < 0:
            raise ValueError("ordinal coordinates must be natural numbers")

    @property
    def is_zero(self) -> bool:
        return self.k == 0 and self.n == 0

    @property
    def is_limit(self) -> bool:
        return self.n == 0 and self.k >= 1

    @property
    def is_successor(self) -> bool:
        return self.n >= 1

    @property
    def delta(self) -> "OrdinalT":
        """The largest limit-or-zero below or equal to this ordinal."""
        return OrdinalT(self.k, 0)

    @property
    def n_gamma(self) -> int:
        """For a successor gamma = delta + n_gamma + 1."""
        if not self.is_successor:
            raise ValueError(f"{self} is not a successor")
        return self.n - 1

    def __str__(self) -> str:
        if self.k == 0:
            return str(self.n)
        head = "w" if self.k == 1 else f"w*{self.k}"
        return head if self.n == 0 else f"{head}+{self.n}"


_ORD = re.compile(r"^\s*(?:(w)(?:\*(\d+))?(?:\s*\+\s*(\d+))?|(\d+))\s*$")


def parse_ordinal(text: str) -> OrdinalT:
    m = _ORD.match(text)
    if not m:
        raise ValueError(f"not an ordinal below w^2: {text!r}")
    if m.group(4) is not None:
        return OrdinalT(0, int(m.group(4)))
    k = int(m.group(2)) if m.group(2) else 1
    n = int(m.group(3)) if m.group(3) else 0
    return OrdinalT(k, n)


def limit(k: int) -> OrdinalT:
    if k < 1:
        raise ValueError("limits are w*k with k >= 1")
    return OrdinalT(k, 0)


class LadderSystem:
    """zeta^alpha_n for each limit alpha = w*k (1 <= k <= kmax) and n <= depth."""

    def __init__(self, kmax: int, depth: int, table: Mapping[Tuple[int, int], OrdinalT]):
        if kmax < 1:
            raise LadderError("kmax must be at least 1")
        if depth < 0:
            raise LadderError("depth must be a natural number")
        self.kmax = kmax
        self.depth = depth
        self._table: Dict[Tuple[int, int], OrdinalT] = dict(table)
        self.validate()

    def limits(self) -> List[OrdinalT]:
        return [OrdinalT(k, 0) for k in range(1, self.kmax + 1)]

    def zeta(self, alpha: OrdinalT, n: int) -> OrdinalT:
        if not alpha.is_limit or alpha.k > self.kmax:
            raise LadderError(f"{alpha} is not a limit inside the truncation")
        if not 0 <= n <= self.depth:
            raise LadderError(f"ladder index {n} outside 0..{self.depth}")
        return self._table[(alpha.k, n)]

    def points(self) -> Iterator[Tuple[OrdinalT, int, OrdinalT]]:
        for alpha in self.limits():
            for n in range(self.depth + 1):
                yield alpha, n, self.zeta(alpha, n)

    def validate(self) -> None:
        for k in range(1, self.kmax + 1):
            alpha = OrdinalT(k, 0)
            prev: Optional[OrdinalT] = None
            for n in range(self.depth + 1):
                z = self._table.get((k, n))
                if z is None:
                    raise LadderError(f"zeta missing for {alpha}, n={n}")
                if not z.is_successor or z.n_gamma != n:
                    raise LadderError(f"zeta^{alpha}_{n} = {z} is not of the form delta+{n}+1")
                if not z < alpha:
                    raise LadderError(f"zeta^{alpha}_{n} = {z} is not below {alpha}")
                if prev is not None and not prev < z:
                    raise LadderError(f"ladder at {alpha} is not increasing at n={n}")
                prev = z

    def with_override(self, k: int, n: int, value: OrdinalT) -> "LadderSystem":
        table = dict(self._table)
        if (k, n) not in table:
            raise LadderError(f"no ladder point for w*{k}, n={n}")
        table[(k, n)] = value
        return LadderSystem(self.kmax, self.depth, table)

    def blocks_reached(self, alpha: OrdinalT) -> List[int]:
        """Limit blocks w*j (j < k) met by the ladder at alpha."""
        return sorted({self.zeta(alpha, n).k for n in range(self.depth + 1)})

    def shared_points(self) -> Dict[OrdinalT, List[Tuple[OrdinalT, int]]]:
        """Successors that lie on more than one ladder."""
        seen: Dict[OrdinalT, List[Tuple[OrdinalT, int]]] = {}
        for alpha, n, z in self.points():
            seen.setdefault(z, []).append((alpha, n))
        return {z: v for z, v in seen.items() if len(v) > 1}

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, LadderSystem)
            and (self.kmax, self.depth) == (other.kmax, other.depth)
            and self._table == other._table
        )


def default_ladder(kmax: int, depth: int) -> LadderSystem:
    """zeta^{w*k}_n = w*min(n, k-1) + n + 1."""
    table = {
        (k, n): OrdinalT(min(n, k - 1), n + 1)
        for k in range(1, kmax + 1)
        for n in range(depth + 1)
    }
    return LadderSystem(kmax, depth, table)
