"""Alpha-stability checking through the per-hospital packing reduction.

A feasible matching mu is alpha-stable iff for every hospital h

    alpha * u_h(mu(h)) >= max { u_h(S) | S independent for h, S within D_h }

where D_h holds the doctors who weakly prefer h to their current match.
"""

import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass

from ._bitset import iter_bits, members
from ._config import TOLERANCE, check_limit, current_limits
from ._constraint import iter_independent, restrict
from ._market import (
    Market,
    Matching,
    assigned_masks,
    is_feasible,
    numbered,
)
from ._packing import PackingInstance, solve_exact, utility_ratio

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlockingCoalition:
    """Doctors who would all rather join ``hospital``, which prefers them.

    Attributes:
        hospital: The blocking hospital.
        coalition: An independent set of doctors weakly preferring it.
        coalition_value: The hospital's utility for the coalition.
        current_value: The hospital's utility for its current match.
    """

    hospital: int
    coalition: frozenset[int]
    coalition_value: float
    current_value: float


@dataclass(frozen=True)
class HospitalCheck:
    """Per-hospital data behind a stability verdict.

    Attributes:
        hospital: The hospital.
        candidates: D_h, the doctors weakly preferring the hospital.
        optimum: The best independent subset of ``candidates``.
        optimum_value: Its utility.
        current_value: Utility of the hospital's current match.
    """

    hospital: int
    candidates: frozenset[int]
    optimum: frozenset[int]
    optimum_value: float
    current_value: float

    @property
    def ratio(self) -> float:
        """optimum_value / current_value with 0/0 -> 1 and positive/0 -> inf."""
        return utility_ratio(self.optimum_value, self.current_value)

    def blocks(self, alpha: float) -> bool:
        """True iff the optimum beats alpha times the current value."""
        return self.optimum_value > alpha * self.current_value + TOLERANCE


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of an alpha-stability check.

    Attributes:
        alpha: The tested factor.
        hospitals: Data for every hospital in index order.
        blocking: The first blocking coalition in hospital order, if any.
    """

    alpha: float
    hospitals: tuple[HospitalCheck, ...]
    blocking: BlockingCoalition | None

    @property
    def stable(self) -> bool:
        """True iff no hospital blocks."""
        return self.blocking is None


def candidate_mask(market: Market, assignment: list[int | None], hospital: int) -> int:
    """Returns D_h as a bitmask: doctors for whom h is at least as good as mu(d).

    Unmatched doctors qualify iff h is acceptable to them, and doctors
    matched to h always qualify.
    """
    mask = 0
    for doctor, held in enumerate(assignment):
        if market.weakly_prefers(doctor, hospital, held):
            mask |= 1 << doctor
    return mask


def _check_hospital(
    market: Market, hospital: int, candidates: int, current: int
) -> HospitalCheck:
    utility = market.utilities[hospital]
    system = restrict(market.constraints[hospital], iter_bits(candidates))
    solution = solve_exact(PackingInstance(members(candidates), utility, system))
    return HospitalCheck(
        hospital=hospital,
        candidates=members(candidates),
        optimum=solution.chosen,
        optimum_value=solution.value,
        current_value=utility.value(current),
    )


def hospital_checks(market: Market, mu: Matching) -> tuple[HospitalCheck, ...]:
    """Solves the packing instance behind every hospital's stability condition.

    Raises:
        ValueError: If ``mu`` is infeasible or does not fit the market.
        OracleLimitError: If a packing instance is too large.
    """
    if not is_feasible(market, mu):
        msg = "Matching is infeasible: some hospital's assigned set is dependent"
        raise ValueError(msg)
    assignment = mu.assignment(market.n_doctors)
    return tuple(
        _check_hospital(market, h, candidate_mask(market, assignment, h), current)
        for h, current in enumerate(assigned_masks(market, mu))
    )


def _report(alpha: float, checks: tuple[HospitalCheck, ...]) -> StabilityReport:
    """Builds a report whose blocking coalition is the first in hospital order."""
    blocking = next(
        (
            BlockingCoalition(
                check.hospital,
                check.optimum,
                check.optimum_value,
                check.current_value,
            )
            for check in checks
            if check.blocks(alpha)
        ),
        None,
    )
    return StabilityReport(alpha=alpha, hospitals=checks, blocking=blocking)


def alpha_stability_check(
    market: Market, mu: Matching, alpha: float
) -> StabilityReport:
    """Decides whether ``mu`` is alpha-stable.

    Args:
        market: The market.
        mu: A feasible matching.
        alpha: The stability factor, at least 1.

    Returns:
        The report, naming the first blocking hospital in index order with
        its optimal coalition, or no coalition when stable.

    Raises:
        ValueError: If ``alpha`` < 1 or ``mu`` is infeasible.
        OracleLimitError: If a packing instance is too large.
    """
    if not alpha >= 1:
        msg = f"alpha must be >= 1, got {alpha}"
        raise ValueError(msg)
    report = _report(alpha, hospital_checks(market, mu))
    if report.blocking is None:
        logger.info("Matching is %s-stable", alpha)
    else:
        logger.info(
            "Matching is not %s-stable: hospital %s blocks with %s",
            alpha,
            market.hospitals[report.blocking.hospital],
            sorted(market.doctors[d] for d in report.blocking.coalition),
        )
    return report


def min_alpha(market: Market, mu: Matching) -> float:
    """Returns the smallest alpha at which ``mu`` is stable, possibly inf.

    This is max(1, max_h OPT_h / u_h(mu(h))) with 0/0 -> 1 and
    positive/0 -> inf.

    Raises:
        ValueError: If ``mu`` is infeasible.
        OracleLimitError: If a packing instance is too large.
    """
    return max([1.0, *(check.ratio for check in hospital_checks(market, mu))])


def blocking_coalitions(
    market: Market, mu: Matching, alpha: float
) -> list[BlockingCoalition]:
    """Lists every alpha-blocking coalition by direct enumeration.

    No packing reduction: walks every independent subset of every D_h.

    Raises:
        ValueError: If ``mu`` is infeasible.
        OracleLimitError: If some D_h exceeds the packing limit.
    """
    if not is_feasible(market, mu):
        msg = "Matching is infeasible: some hospital's assigned set is dependent"
        raise ValueError(msg)
    assignment = mu.assignment(market.n_doctors)
    limit = current_limits().packing
    coalitions: list[BlockingCoalition] = []
    for h, current in enumerate(assigned_masks(market, mu)):
        utility, system = market.utilities[h], market.constraints[h]
        candidates = candidate_mask(market, assignment, h)
        check_limit("stability", "candidate set", candidates.bit_count(), limit)
        current_value = utility.value(current)
        coalitions.extend(
            BlockingCoalition(h, members(subset), value, current_value)
            for subset in iter_independent(system, candidates)
            if (value := utility.value(subset)) > alpha * current_value + TOLERANCE
        )
    return coalitions


@dataclass(frozen=True)
class BruteForceResult:
    """Outcome of the exhaustive search over feasible matchings.

    Attributes:
        alpha: The tested factor.
        witness: The first alpha-stable matching found, if any.
        best_alpha: min over feasible matchings of min_alpha.
        best_matching: The first matching attaining best_alpha.
        feasible_count: How many feasible matchings were examined.
    """

    alpha: float
    witness: Matching | None
    best_alpha: float
    best_matching: Matching
    feasible_count: int


def assignment_space(market: Market) -> int:
    """Returns the product over doctors of (acceptable hospitals + 1)."""
    return math.prod(len(ranked) + 1 for ranked in market.preferences)


def _feasible_assignments(market: Market) -> Iterator[list[int | None]]:
    """Yields feasible assignments, each doctor trying hospitals in preference
    order before staying unmatched. Dependent partial assignments are pruned.
    """
    n = market.n_doctors
    assignment: list[int | None] = [None] * n
    loads = [0] * market.n_hospitals

    def extend(doctor: int) -> Iterator[list[int | None]]:
        if doctor == n:
            yield assignment
            return
        bit = 1 << doctor
        for hospital in market.preferences[doctor]:
            if market.constraints[hospital].accepts(loads[hospital] | bit):
                loads[hospital] |= bit
                assignment[doctor] = hospital
                yield from extend(doctor + 1)
                loads[hospital] &= ~bit
        assignment[doctor] = None
        yield from extend(doctor + 1)

    yield from extend(0)


def exists_stable_bruteforce(market: Market, alpha: float) -> BruteForceResult:
    """Searches every feasible matching for an alpha-stable one.

    Args:
        market: The market.
        alpha: The stability factor, at least 1.

    Returns:
        The first alpha-stable matching in enumeration order (or None), plus
        the smallest min_alpha over all feasible matchings.

    Raises:
        ValueError: If ``alpha`` < 1.
        OracleLimitError: If the assignment space exceeds the enumeration
            limit or a packing instance is too large.
    """
    if not alpha >= 1:
        msg = f"alpha must be >= 1, got {alpha}"
        raise ValueError(msg)
    check_limit(
        "stability",
        "assignment space",
        assignment_space(market),
        current_limits().enumeration,
    )

    optima: dict[tuple[int, int], tuple[frozenset[int], float]] = {}

    def check(hospital: int, candidates: int, current: int) -> HospitalCheck:
        key = (hospital, candidates)
        if key not in optima:
            solved = _check_hospital(market, hospital, candidates, 0)
            optima[key] = (solved.optimum, solved.optimum_value)
        optimum, value = optima[key]
        return HospitalCheck(
            hospital,
            members(candidates),
            optimum,
            value,
            market.utilities[hospital].value(current),
        )

    witness: Matching | None = None
    best_alpha, best_matching = math.inf, Matching()
    feasible_count = 0
    for assignment in _feasible_assignments(market):
        feasible_count += 1
        current = [0] * market.n_hospitals
        for doctor, hospital in enumerate(assignment):
            if hospital is not None:
                current[hospital] |= 1 << doctor
        checks = [
            check(h, candidate_mask(market, assignment, h), current[h])
            for h in range(market.n_hospitals)
        ]
        ratio = max((c.ratio for c in checks), default=1.0)
        if witness is None and not any(c.blocks(alpha) for c in checks):
            witness = Matching.from_assignment(assignment)
        if ratio < best_alpha or feasible_count == 1:
            best_alpha, best_matching = ratio, Matching.from_assignment(assignment)

    best_alpha = max(best_alpha, 1.0)
    logger.info(
        "Examined %d feasible matchings: best alpha %s, %s-stable matching %s",
        feasible_count,
        best_alpha,
        alpha,
        "found" if witness is not None else "absent",
    )
    return BruteForceResult(alpha, witness, best_alpha, best_matching, feasible_count)


def single_hospital_market(instance: PackingInstance) -> Market:
    """Builds the one-hospital market for a packing instance.

    Doctors in the ground set find the hospital acceptable; the rest do not.
    A set S is an alpha-approximate packing iff matching S to the hospital
    is alpha-stable.
    """
    size = instance.system.size
    return Market(
        doctors=numbered("d", size),
        hospitals=("h",),
        preferences=tuple((0,) if d in instance.ground else () for d in range(size)),
        utilities=(instance.utility,),
        constraints=(instance.system,),
    )
