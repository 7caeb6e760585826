"""Offline packing: maximize a utility over the independent sets of a system."""

import math
from collections.abc import Iterable
from dataclasses import dataclass

from ._bitset import check_ground, iter_bits, mask_of, members
from ._config import OracleLimitError, current_limits
from ._constraint import IndependenceSystem, iter_independent, matroid_count
from ._utility import Utility, is_additive


# Values closer than this count as ties when picking the canonical optimum.
_TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class PackingInstance:
    """A (utility, independence system) pair over a ground set of doctors.

    Attributes:
        ground: The doctors the packing may choose from.
        utility: The objective.
        system: The feasibility constraint.
    """

    ground: frozenset[int]
    utility: Utility
    system: IndependenceSystem

    def __post_init__(self) -> None:
        """Checks that utility, system and ground set agree."""
        if self.utility.size != self.system.size:
            msg = (
                f"Utility has {self.utility.size} doctors but the system has "
                f"{self.system.size}"
            )
            raise ValueError(msg)
        check_ground(self.ground_mask, self.system.size)

    @classmethod
    def of(
        cls,
        utility: Utility,
        system: IndependenceSystem,
        ground: Iterable[int] | None = None,
    ) -> "PackingInstance":
        """Builds an instance; ``ground`` defaults to every doctor."""
        doctors = range(system.size) if ground is None else ground
        return cls(frozenset(doctors), utility, system)

    @property
    def ground_mask(self) -> int:
        """The ground set as a bitmask."""
        return mask_of(self.ground)


@dataclass(frozen=True)
class PackingSolution:
    """An optimal independent set and its utility."""

    chosen: frozenset[int]
    value: float


def utility_ratio(optimum: float, current: float) -> float:
    """Returns optimum / current with 0/0 -> 1 and positive/0 -> inf."""
    if current <= 0:
        return 1.0 if optimum <= 0 else math.inf
    return optimum / current


def _solve_greedy(instance: PackingInstance) -> PackingSolution:
    """Exact for additive utilities over a single matroid."""
    utility, system = instance.utility, instance.system
    order = sorted(instance.ground, key=lambda d: (-utility.singleton(d), d))
    chosen = 0
    for doctor in order:
        if utility.singleton(doctor) <= 0:
            break
        if system.accepts(chosen | (1 << doctor)):
            chosen |= 1 << doctor
    return PackingSolution(members(chosen), utility.value(chosen))


def _solve_enumerate(instance: PackingInstance) -> PackingSolution:
    """Walks every independent subset; ties go to the smallest bitmask."""
    utility = instance.utility
    best_mask, best_value = 0, utility.value(0)
    for mask in iter_independent(instance.system, instance.ground_mask):
        value = utility.value(mask)
        if value > best_value + _TIE_TOLERANCE or (
            value >= best_value - _TIE_TOLERANCE and mask < best_mask
        ):
            best_mask, best_value = mask, value
    return PackingSolution(members(best_mask), best_value)


def has_fast_path(instance: PackingInstance) -> bool:
    """True when the greedy solver is exact for ``instance``."""
    return is_additive(instance.utility) and matroid_count(instance.system) == 1


def solve_exact(instance: PackingInstance) -> PackingSolution:
    """Returns a maximum-utility independent subset of the ground set.

    Additive utilities over a single matroid take the greedy fast path.
    Everything else is solved by enumerating independent sets, skipping
    supersets of dependent sets, with the smallest bitmask winning ties.

    Args:
        instance: The packing instance.

    Returns:
        The optimal set and its value.

    Raises:
        OracleLimitError: If enumeration is needed and the ground set is
            larger than the packing limit ("instance too large").
    """
    if has_fast_path(instance):
        return _solve_greedy(instance)
    size = len(instance.ground)
    limit = current_limits().packing
    if size > limit:
        msg = (
            f"packing: instance too large: ground set of {size} doctors "
            f"exceeds the exhaustive limit of {limit}"
        )
        raise OracleLimitError(msg)
    return _solve_enumerate(instance)


def approximation_ratio(instance: PackingInstance, candidate: Iterable[int]) -> float:
    """Returns OPT / u(candidate), with 0/0 -> 1 and positive/0 -> inf.

    Raises:
        ValueError: If ``candidate`` leaves the ground set or is dependent.
    """
    mask = mask_of(candidate)
    if mask & ~instance.ground_mask:
        foreign = sorted(iter_bits(mask & ~instance.ground_mask))
        msg = f"foreign doctor(s) {foreign}: candidate leaves the ground set"
        raise ValueError(msg)
    if not instance.system.accepts(mask):
        msg = f"Candidate {sorted(iter_bits(mask))} is not independent"
        raise ValueError(msg)
    optimum = solve_exact(instance).value
    return utility_ratio(optimum, instance.utility.value(mask))
