"""Independence systems over the doctor set.

Every variant is downward closed by construction: (I1) the empty set is
independent and (I2) subsets of independent sets are independent.
"""

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from itertools import pairwise
from typing import Literal

from ._bitset import check_ground, full_mask, iter_bits, iter_submasks, mask_of
from ._config import KNAPSACK_TOLERANCE, check_limit, current_limits


@dataclass(frozen=True)
class Capacity:
    """At most ``rank`` doctors."""

    size: int
    rank: int
    kind: Literal["capacity"] = field(default="capacity", init=False)

    def __post_init__(self) -> None:
        """Rejects negative ranks."""
        if self.rank < 0:
            msg = f"Capacity rank must be >= 0, got {self.rank}"
            raise ValueError(msg)

    def accepts(self, mask: int) -> bool:
        """Membership oracle on a doctor bitmask."""
        return mask.bit_count() <= self.rank


@dataclass(frozen=True)
class PartitionMatroid:
    """Per-part quotas plus an optional overall rank.

    Attributes:
        size: Number of doctors in the ground set.
        parts: Disjoint doctor bitmasks. Doctors outside every part are only
            limited by ``rank``.
        quotas: Quota of each part.
        rank: Overall cap, or None for no cap.
    """

    size: int
    parts: tuple[int, ...]
    quotas: tuple[int, ...]
    rank: int | None = None
    kind: Literal["partition_matroid"] = field(
        default="partition_matroid", init=False
    )

    def __post_init__(self) -> None:
        """Checks that parts are disjoint and quotas line up with parts."""
        if len(self.parts) != len(self.quotas):
            msg = (
                f"PartitionMatroid has {len(self.parts)} parts "
                f"but {len(self.quotas)} quotas"
            )
            raise ValueError(msg)
        seen = 0
        for part in self.parts:
            check_ground(part, self.size)
            if part & seen:
                msg = "PartitionMatroid parts must be disjoint"
                raise ValueError(msg)
            seen |= part
        if any(q < 0 for q in self.quotas) or (self.rank is not None and self.rank < 0):
            msg = "PartitionMatroid quotas and rank must be >= 0"
            raise ValueError(msg)

    def accepts(self, mask: int) -> bool:
        """Membership oracle on a doctor bitmask."""
        if self.rank is not None and mask.bit_count() > self.rank:
            return False
        return all(
            (mask & part).bit_count() <= quota
            for part, quota in zip(self.parts, self.quotas, strict=True)
        )


@dataclass(frozen=True)
class Explicit:
    """Independent sets are the subsets of the listed maximal sets."""

    size: int
    maximal_sets: tuple[int, ...]
    kind: Literal["explicit"] = field(default="explicit", init=False)

    def __post_init__(self) -> None:
        """Checks the maximal sets against the ground set."""
        for maximal in self.maximal_sets:
            check_ground(maximal, self.size)

    def accepts(self, mask: int) -> bool:
        """Membership oracle on a doctor bitmask."""
        return mask == 0 or any(mask & ~m == 0 for m in self.maximal_sets)


@dataclass(frozen=True)
class Knapsack:
    """rho-dimensional knapsack: every dimension's load is at most 1.

    Attributes:
        weights: For each doctor, a length-rho vector of nonnegative weights.
    """

    weights: tuple[tuple[float, ...], ...]
    kind: Literal["knapsack"] = field(default="knapsack", init=False)
    _columns: tuple[tuple[float, ...], ...] = field(
        init=False, repr=False, compare=False
    )
    _max_weights: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        """Validates the weight table and caches per-dimension columns."""
        dimensions = {len(row) for row in self.weights}
        if len(dimensions) > 1 or 0 in dimensions:
            msg = "Knapsack weight vectors must share one length >= 1"
            raise ValueError(msg)
        for doctor, row in enumerate(self.weights):
            if any(not math.isfinite(w) or w < 0 for w in row):
                msg = f"Knapsack weights of doctor {doctor} must be >= 0, got {row}"
                raise ValueError(msg)
        object.__setattr__(self, "_columns", tuple(zip(*self.weights, strict=True)))
        object.__setattr__(
            self, "_max_weights", tuple(max(row) for row in self.weights)
        )

    @property
    def size(self) -> int:
        """Number of doctors in the ground set."""
        return len(self.weights)

    @property
    def dimension(self) -> int:
        """The number of knapsack dimensions rho."""
        return len(self.weights[0]) if self.weights else 1

    def max_weight(self, doctor: int) -> float:
        """Returns max_i w(doctor, i)."""
        return self._max_weights[doctor]

    def accepts(self, mask: int) -> bool:
        """Membership oracle on a doctor bitmask."""
        doctors = list(iter_bits(mask))
        return all(
            sum(column[d] for d in doctors) <= 1 + KNAPSACK_TOLERANCE
            for column in self._columns
        )


@dataclass(frozen=True)
class Intersection:
    """Sets independent in every child system."""

    size: int
    children: tuple["IndependenceSystem", ...]
    kind: Literal["intersection"] = field(default="intersection", init=False)

    def __post_init__(self) -> None:
        """Checks that all children share the ground set."""
        for child in self.children:
            if child.size != self.size:
                msg = (
                    f"Intersection child has {child.size} doctors, "
                    f"expected {self.size}"
                )
                raise ValueError(msg)

    def accepts(self, mask: int) -> bool:
        """Membership oracle on a doctor bitmask."""
        return all(child.accepts(mask) for child in self.children)


@dataclass(frozen=True)
class Restriction:
    """The sets of ``inner`` contained in ``allowed``."""

    inner: "IndependenceSystem"
    allowed: int
    kind: Literal["restriction"] = field(default="restriction", init=False)

    @property
    def size(self) -> int:
        """Number of doctors in the ground set."""
        return self.inner.size

    def accepts(self, mask: int) -> bool:
        """Membership oracle on a doctor bitmask."""
        return mask & ~self.allowed == 0 and self.inner.accepts(mask)


type IndependenceSystem = (
    Capacity | PartitionMatroid | Explicit | Knapsack | Intersection | Restriction
)


def is_independent(system: IndependenceSystem, doctors: Iterable[int]) -> bool:
    """Membership oracle on a set of doctor indices.

    Raises:
        ValueError: If a doctor is outside the ground set ("foreign doctor").
    """
    mask = mask_of(doctors)
    check_ground(mask, system.size)
    return system.accepts(mask)


def restrict(system: IndependenceSystem, doctors: Iterable[int]) -> Restriction:
    """Returns the restriction of ``system`` to ``doctors``.

    Nested restrictions collapse to one whose allowed set is the intersection.
    """
    mask = mask_of(doctors)
    check_ground(mask, system.size)
    if isinstance(system, Restriction):
        return Restriction(system.inner, system.allowed & mask)
    return Restriction(system, mask)


def base_system(system: IndependenceSystem) -> IndependenceSystem:
    """Strips any Restriction wrapper."""
    while isinstance(system, Restriction):
        system = system.inner
    return system


def knapsack_of(system: IndependenceSystem) -> Knapsack | None:
    """Returns the Knapsack underlying ``system``, if that is its class."""
    base = base_system(system)
    return base if isinstance(base, Knapsack) else None


def slack_epsilon(knapsack: Knapsack) -> float:
    """Returns 1 - max_{d,i} w(d, i); 1 when there are no weights.

    The result is <= 0 when some weight reaches 1.
    """
    return 1.0 - max((max(row) for row in knapsack.weights), default=0.0)


def matroid_count(system: IndependenceSystem) -> int | None:
    """Returns k for a system represented as a k-matroid intersection.

    Capacity and PartitionMatroid count as one matroid, an Intersection sums
    its children, and a Restriction inherits from its inner system. Systems
    with no matroid representation on record (Explicit, Knapsack) give None.
    """
    match system:
        case Capacity() | PartitionMatroid():
            return 1
        case Restriction():
            return matroid_count(system.inner)
        case Intersection():
            counts = [matroid_count(child) for child in system.children]
            if any(count is None for count in counts):
                return None
            return max(1, sum(c for c in counts if c is not None))
        case _:
            return None


def iter_independent(system: IndependenceSystem, ground: int) -> Iterator[int]:
    """Yields every independent subset of the ``ground`` bitmask.

    Depth-first over doctors in increasing index order. A dependent set is
    never extended: by (I2) all its supersets are dependent too.
    """
    doctors = list(iter_bits(ground))
    stack: list[tuple[int, int]] = [(0, 0)]
    while stack:
        mask, start = stack.pop()
        yield mask
        for position in range(len(doctors) - 1, start - 1, -1):
            extended = mask | (1 << doctors[position])
            if system.accepts(extended):
                stack.append((extended, position + 1))


def verify_independence_axioms(
    system: IndependenceSystem, ground: Iterable[int]
) -> bool:
    """Checks (I1) and (I2) exhaustively over the subsets of ``ground``.

    Raises:
        OracleLimitError: If the ground set exceeds the exhaustive limit.
    """
    mask = mask_of(ground)
    check_ground(mask, system.size)
    check_limit(
        "constraint", "ground set", mask.bit_count(), current_limits().verification
    )
    if not system.accepts(0):
        return False
    return all(
        system.accepts(sub & ~(1 << d))
        for sub in iter_submasks(mask)
        if system.accepts(sub)
        for d in iter_bits(sub)
    )


def matroid_exchange_witness(
    system: IndependenceSystem, ground: Iterable[int]
) -> tuple[frozenset[int], frozenset[int]] | None:
    """Searches for independent A, B with |A| < |B| and no augmenting d.

    Checking pairs with |B| = |A| + 1 suffices, since any larger B contains
    an independent subset of that size.

    Returns:
        The first violating pair (A, B) in size-then-bitmask order, or None
        when the exchange property holds on ``ground``.

    Raises:
        OracleLimitError: If the ground set exceeds the exhaustive limit.
    """
    mask = mask_of(ground)
    check_ground(mask, system.size)
    check_limit(
        "constraint", "ground set", mask.bit_count(), current_limits().exchange
    )
    by_size: dict[int, list[int]] = {}
    for independent in iter_independent(system, mask):
        by_size.setdefault(independent.bit_count(), []).append(independent)
    sizes = sorted(by_size)
    for small, large in pairwise(sizes):
        if large != small + 1:
            continue
        for a in sorted(by_size[small]):
            for b in sorted(by_size[large]):
                if not any(system.accepts(a | (1 << d)) for d in iter_bits(b & ~a)):
                    return frozenset(iter_bits(a)), frozenset(iter_bits(b))
    return None


def verify_matroid_exchange(
    system: IndependenceSystem, ground: Iterable[int] | None = None
) -> bool:
    """True iff the exchange property holds over ``ground`` (default: all)."""
    doctors = iter_bits(full_mask(system.size)) if ground is None else ground
    return matroid_exchange_witness(system, doctors) is None
