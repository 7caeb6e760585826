"""Hospital utility functions: cardinality, additive and weighted coverage."""

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Literal

from ._bitset import check_ground, iter_bits, iter_submasks, mask_of
from ._config import TOLERANCE, check_limit, current_limits


@dataclass(frozen=True)
class Cardinality:
    """u(S) = |S| over a ground set of ``size`` doctors."""

    size: int
    kind: Literal["cardinality"] = field(default="cardinality", init=False)

    def value(self, mask: int) -> float:
        """Evaluates the utility on a doctor bitmask."""
        return float(mask.bit_count())

    def singleton(self, doctor: int) -> float:  # noqa: ARG002
        """Returns u({doctor})."""
        return 1.0


@dataclass(frozen=True)
class Additive:
    """u(S) = sum of per-doctor values. Doctors default to value 0."""

    values: tuple[float, ...]
    kind: Literal["additive"] = field(default="additive", init=False)

    def __post_init__(self) -> None:
        """Rejects negative or non-finite values."""
        for doctor, value in enumerate(self.values):
            if not math.isfinite(value) or value < 0:
                msg = f"Additive value of doctor {doctor} must be >= 0, got {value}"
                raise ValueError(msg)

    @property
    def size(self) -> int:
        """Number of doctors in the ground set."""
        return len(self.values)

    def value(self, mask: int) -> float:
        """Evaluates the utility on a doctor bitmask."""
        return math.fsum(self.values[d] for d in iter_bits(mask))

    def singleton(self, doctor: int) -> float:
        """Returns u({doctor})."""
        return self.values[doctor]


@dataclass(frozen=True)
class WeightedCoverage:
    """u(S) = total weight of the elements covered by the members of S.

    Attributes:
        element_weights: Nonnegative weight of every element.
        covers: For each doctor index, the elements that doctor covers.
    """

    element_weights: Mapping[str, float]
    covers: tuple[frozenset[str], ...]
    kind: Literal["coverage"] = field(default="coverage", init=False)

    def __post_init__(self) -> None:
        """Rejects negative weights and covers naming unknown elements."""
        for element, weight in self.element_weights.items():
            if not math.isfinite(weight) or weight < 0:
                msg = f"Weight of element '{element}' must be >= 0, got {weight}"
                raise ValueError(msg)
        for doctor, covered in enumerate(self.covers):
            unknown = covered - self.element_weights.keys()
            if unknown:
                msg = f"Doctor {doctor} covers unknown elements {sorted(unknown)}"
                raise ValueError(msg)

    @property
    def size(self) -> int:
        """Number of doctors in the ground set."""
        return len(self.covers)

    def value(self, mask: int) -> float:
        """Evaluates the utility on a doctor bitmask."""
        covered: set[str] = set()
        for doctor in iter_bits(mask):
            covered |= self.covers[doctor]
        return math.fsum(self.element_weights[e] for e in sorted(covered))

    def singleton(self, doctor: int) -> float:
        """Returns u({doctor})."""
        return self.value(1 << doctor)


type Utility = Cardinality | Additive | WeightedCoverage


def evaluate(utility: Utility, doctors: Iterable[int]) -> float:
    """Evaluates ``utility`` on a set of doctors.

    Args:
        utility: The utility function.
        doctors: Doctor indices within the utility's ground set.

    Returns:
        The nonnegative utility value.

    Raises:
        ValueError: If a doctor is outside the ground set ("foreign doctor").
    """
    mask = mask_of(doctors)
    check_ground(mask, utility.size)
    return utility.value(mask)


def is_additive(utility: Utility) -> bool:
    """True for the modular classes (cardinality and additive)."""
    return isinstance(utility, Cardinality | Additive)


def _value_table(utility: Utility, ground: int) -> dict[int, float]:
    return {sub: utility.value(sub) for sub in iter_submasks(ground)}


def verify_monotone(utility: Utility, ground: Iterable[int]) -> bool:
    """Checks u(S) <= u(S + d) for every S within ``ground`` and d outside S.

    Raises:
        OracleLimitError: If the ground set exceeds the exhaustive limit.
        ValueError: If ``ground`` contains a foreign doctor.
    """
    mask = mask_of(ground)
    check_ground(mask, utility.size)
    check_limit(
        "utility", "ground set", mask.bit_count(), current_limits().verification
    )
    table = _value_table(utility, mask)
    return all(
        table[sub] <= table[sub | (1 << d)] + TOLERANCE
        for sub in table
        for d in iter_bits(mask & ~sub)
    )


def verify_submodular(utility: Utility, ground: Iterable[int]) -> bool:
    """Checks u(A) + u(B) >= u(A | B) + u(A & B) for all A, B within ``ground``.

    Uses the equivalent local form u(S+x) + u(S+y) >= u(S+x+y) + u(S) for
    every S and distinct x, y outside S.

    Raises:
        OracleLimitError: If the ground set exceeds the exhaustive limit.
        ValueError: If ``ground`` contains a foreign doctor.
    """
    mask = mask_of(ground)
    check_ground(mask, utility.size)
    check_limit(
        "utility", "ground set", mask.bit_count(), current_limits().submodular
    )
    table = _value_table(utility, mask)
    for sub, base in table.items():
        outside = list(iter_bits(mask & ~sub))
        for i, x in enumerate(outside):
            with_x = table[sub | (1 << x)]
            for y in outside[i + 1 :]:
                with_y = table[sub | (1 << y)]
                with_both = table[sub | (1 << x) | (1 << y)]
                if with_x + with_y + TOLERANCE < with_both + base:
                    return False
    return True
