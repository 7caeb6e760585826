"""Online packing algorithms with cancellation.

Doctors arrive one at a time. After each arrival the algorithm reports a
selection that is independent and contained in the previous selection plus
the newcomer, so a doctor that was rejected or canceled never comes back.
"""

import math
from abc import ABC, abstractmethod
from collections.abc import Iterable
from dataclasses import dataclass
from typing import ClassVar

from ._bitset import check_ground, iter_bits, members
from ._config import KNAPSACK_TOLERANCE
from ._constraint import IndependenceSystem, knapsack_of, matroid_count, slack_epsilon
from ._packing import PackingInstance, solve_exact, utility_ratio
from ._utility import Cardinality, Utility, is_additive


class ContractViolationError(RuntimeError):
    """Raised when an online algorithm breaks the online packing contract."""


@dataclass(frozen=True)
class OnlineRun:
    """Snapshot of an online algorithm after some prefix of arrivals.

    Attributes:
        arrivals: Doctors in arrival order.
        selection: The current selection.
        rejected: Arrived doctors outside the selection (never accepted or
            canceled later).
    """

    arrivals: tuple[int, ...]
    selection: frozenset[int]
    rejected: frozenset[int]


class OnlineAlgorithm(ABC):
    """Base class for an online (utility, constraint) packing algorithm.

    Subclasses implement ``_select``; the base class tracks arrivals and
    rejects repeated or foreign doctors.
    """

    name: ClassVar[str] = "custom"

    def __init__(self, utility: Utility, system: IndependenceSystem) -> None:
        if utility.size != system.size:
            msg = (
                f"Utility has {utility.size} doctors but the system has "
                f"{system.size}"
            )
            raise ValueError(msg)
        self.utility = utility
        self.system = system
        self._arrivals: list[int] = []
        self._arrived = 0
        self._selection = 0

    @abstractmethod
    def _select(self, doctor: int) -> int:
        """Returns the selection bitmask after ``doctor`` arrives."""

    def arrive(self, doctor: int) -> frozenset[int]:
        """Feeds the next arrival and returns the new selection.

        Raises:
            ValueError: If the doctor already arrived ("repeated arrival") or
                is outside the ground set.
        """
        bit = 1 << doctor
        check_ground(bit, self.system.size)
        if self._arrived & bit:
            msg = f"repeated arrival of doctor {doctor}"
            raise ValueError(msg)
        self._selection = self._select(doctor)
        self._arrivals.append(doctor)
        self._arrived |= bit
        return self.selection

    @property
    def selection(self) -> frozenset[int]:
        """The current selection."""
        return members(self._selection)

    @property
    def selection_mask(self) -> int:
        """The current selection as a bitmask."""
        return self._selection

    def snapshot(self) -> OnlineRun:
        """Returns the arrivals, selection and rejected set so far."""
        return OnlineRun(
            tuple(self._arrivals),
            self.selection,
            members(self._arrived & ~self._selection),
        )


class KMatroidGreedy(OnlineAlgorithm):
    """Accepts a newcomer iff it keeps the selection independent; never cancels."""

    name = "greedy_matroid"

    def _select(self, doctor: int) -> int:
        extended = self._selection | (1 << doctor)
        return extended if self.system.accepts(extended) else self._selection


class KnapsackGreedy(OnlineAlgorithm):
    """Density greedy with removal for knapsack constraints.

    The newcomer joins the selection; while the total of per-doctor maximum
    weights exceeds 1, the member with the lowest utility per maximum weight
    is dropped. Ties drop the most recent arrival. Density 0/0 counts as
    -inf and v/0 for v > 0 as +inf.
    """

    name = "greedy_knapsack"

    def __init__(self, utility: Utility, system: IndependenceSystem) -> None:
        if not is_additive(utility):
            msg = f"unsupported utility class '{utility.kind}' for {self.name}"
            raise ValueError(msg)
        knapsack = knapsack_of(system)
        if knapsack is None:
            msg = f"{self.name} needs a knapsack constraint, got '{system.kind}'"
            raise ValueError(msg)
        super().__init__(utility, system)
        self._knapsack = knapsack
        self._load = 0.0
        self._order: dict[int, int] = {}

    def _density(self, doctor: int) -> float:
        value = self.utility.singleton(doctor)
        weight = self._knapsack.max_weight(doctor)
        if weight <= 0:
            return -math.inf if value <= 0 else math.inf
        return value / weight

    def _select(self, doctor: int) -> int:
        self._order[doctor] = len(self._order)
        # Doctors that are infeasible on their own never enter.
        if not self.system.accepts(1 << doctor):
            return self._selection
        kept = self._selection | (1 << doctor)
        load = self._load + self._knapsack.max_weight(doctor)
        while load > 1 + KNAPSACK_TOLERANCE:
            victim = min(
                iter_bits(kept), key=lambda d: (self._density(d), -self._order[d])
            )
            kept &= ~(1 << victim)
            load -= self._knapsack.max_weight(victim)
        self._load = max(load, 0.0)
        return kept


class OfflineExact(OnlineAlgorithm):
    """Keeps the exact optimum over the previous selection plus the newcomer.

    Restricting the optimum to that set keeps the online contract. On
    additive utilities over a single matroid this equals the optimum over
    every arrival so far.
    """

    name = "offline_exact"

    def _select(self, doctor: int) -> int:
        candidates = members(self._selection | (1 << doctor))
        solution = solve_exact(PackingInstance(candidates, self.utility, self.system))
        return sum(1 << d for d in solution.chosen)


ALGORITHMS: dict[str, type[OnlineAlgorithm]] = {
    algorithm.name: algorithm
    for algorithm in (KMatroidGreedy, KnapsackGreedy, OfflineExact)
}


def make_algorithm(
    name: str, utility: Utility, system: IndependenceSystem
) -> OnlineAlgorithm:
    """Instantiates an online algorithm by its registered name.

    Raises:
        ValueError: If the name is unknown or the algorithm does not support
            the utility or constraint class.
    """
    try:
        algorithm = ALGORITHMS[name]
    except KeyError as e:
        msg = f"unknown algorithm '{name}'. Choose from {sorted(ALGORITHMS)}"
        raise ValueError(msg) from e
    return algorithm(utility, system)


def check_contract(
    previous: int, current: int, doctor: int, system: IndependenceSystem, step: int
) -> None:
    """Checks one online step: current within previous + doctor, independent.

    Raises:
        ContractViolationError: On a non-subset or dependent selection.
    """
    extra = current & ~(previous | (1 << doctor))
    if extra:
        msg = (
            f"contract violation in round {step}: selection gained "
            f"{sorted(iter_bits(extra))} beyond the previous selection and "
            f"arrival {doctor}"
        )
        raise ContractViolationError(msg)
    if not system.accepts(current):
        msg = (
            f"contract violation in round {step}: selection "
            f"{sorted(iter_bits(current))} is not independent"
        )
        raise ContractViolationError(msg)


def replay(
    algorithm: str | type[OnlineAlgorithm],
    system: IndependenceSystem,
    utility: Utility,
    arrivals: Iterable[int],
) -> list[frozenset[int]]:
    """Runs a fresh algorithm over ``arrivals``, returning every prefix selection.

    Args:
        algorithm: A registered algorithm name or an OnlineAlgorithm subclass.
        system: The constraint.
        utility: The objective.
        arrivals: Distinct doctors in arrival order.

    Returns:
        The selection after each arrival.

    Raises:
        ValueError: On a repeated arrival or unsupported class combination.
        ContractViolationError: If the algorithm breaks the online contract.
    """
    if isinstance(algorithm, str):
        instance = make_algorithm(algorithm, utility, system)
    else:
        instance = algorithm(utility, system)
    selections: list[frozenset[int]] = []
    for step, doctor in enumerate(arrivals, start=1):
        previous = instance.selection_mask
        instance.arrive(doctor)
        check_contract(previous, instance.selection_mask, doctor, system, step)
        selections.append(instance.selection)
    return selections


def prefix_ratios(
    algorithm: str | type[OnlineAlgorithm],
    system: IndependenceSystem,
    utility: Utility,
    arrivals: Iterable[int],
) -> list[float]:
    """Returns OPT(prefix) / u(selection) after every arrival."""
    order = list(arrivals)
    selections = replay(algorithm, system, utility, order)
    ratios: list[float] = []
    for step, selection in enumerate(selections, start=1):
        prefix = PackingInstance(frozenset(order[:step]), utility, system)
        current = utility.value(sum(1 << d for d in selection))
        ratios.append(utility_ratio(solve_exact(prefix).value, current))
    return ratios


def claimed_ratio(
    algorithm: str, utility: Utility, system: IndependenceSystem
) -> float:
    """Returns the competitive ratio guaranteed for this class combination.

    greedy_matroid on a cardinality utility over a k-matroid intersection is
    k-competitive. greedy_knapsack on a rho-dimensional knapsack with slack
    eps is rho-competitive for cardinality and rho/eps-competitive for
    additive utilities. offline_exact is 1-competitive on additive utilities
    over a single matroid. Every other combination has no guarantee (inf).

    Raises:
        ValueError: If the algorithm name is unknown.
    """
    if algorithm not in ALGORITHMS:
        msg = f"unknown algorithm '{algorithm}'. Choose from {sorted(ALGORITHMS)}"
        raise ValueError(msg)
    k = matroid_count(system)
    if algorithm == KMatroidGreedy.name:
        if isinstance(utility, Cardinality) and k is not None:
            return float(k)
        return math.inf
    if algorithm == KnapsackGreedy.name:
        knapsack = knapsack_of(system)
        if knapsack is None or not is_additive(utility):
            return math.inf
        if isinstance(utility, Cardinality):
            return float(knapsack.dimension)
        epsilon = slack_epsilon(knapsack)
        return knapsack.dimension / epsilon if epsilon > 0 else math.inf
    return 1.0 if k == 1 and is_additive(utility) else math.inf
