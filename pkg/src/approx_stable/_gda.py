"""Generalized deferred acceptance driven by per-hospital online algorithms."""

import logging
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np

from ._bitset import iter_bits
from ._market import Market, Matching
from ._online import (
    OnlineAlgorithm,
    check_contract,
    claimed_ratio,
    make_algorithm,
)

logger = logging.getLogger(__name__)

type AlgorithmChoice = str | type[OnlineAlgorithm]


@dataclass(frozen=True)
class TieBreak:
    """Order in which active doctors are picked to propose.

    Attributes:
        mode: "fifo" (queue seeded by doctor index, re-activated doctors go to
            the back), "lifo" (stack) or "seeded" (uniform pick from a seeded
            generator).
        seed: Generator seed for "seeded".
    """

    mode: Literal["fifo", "lifo", "seeded"] = "fifo"
    seed: int | None = None

    @classmethod
    def from_text(cls, text: str) -> "TieBreak":
        """Parses "fifo", "lifo" or "seeded:<n>".

        Raises:
            ValueError: If the text is not one of those forms.
        """
        if text == "fifo":
            return cls("fifo")
        if text == "lifo":
            return cls("lifo")
        prefix, sep, seed = text.partition(":")
        if prefix == "seeded" and sep:
            try:
                return cls(mode="seeded", seed=int(seed))
            except ValueError as e:
                msg = f"Invalid tie-break seed in '{text}'"
                raise ValueError(msg) from e
        msg = f"Invalid tie-break '{text}'. Use fifo, lifo or seeded:<n>"
        raise ValueError(msg)

    def __str__(self) -> str:
        """Returns the textual form accepted by from_text."""
        return f"seeded:{self.seed}" if self.mode == "seeded" else self.mode


class _ActiveDoctors:
    """The active set L, ordered by a tie-break rule."""

    def __init__(self, tie_break: TieBreak, doctors: Iterable[int]) -> None:
        self._mode = tie_break.mode
        self._queue: deque[int] = deque(doctors)
        self._rng = np.random.default_rng(tie_break.seed)

    def __bool__(self) -> bool:
        return bool(self._queue)

    def __contains__(self, doctor: int) -> bool:
        return doctor in self._queue

    def push(self, doctor: int) -> None:
        self._queue.append(doctor)

    def pop(self) -> int:
        match self._mode:
            case "fifo":
                return self._queue.popleft()
            case "lifo":
                return self._queue.pop()
            case "seeded":
                position = int(self._rng.integers(len(self._queue)))
                self._queue.rotate(-position)
                return self._queue.popleft()


@dataclass(frozen=True)
class GdaTrace:
    """Record of a deferred acceptance run.

    Attributes:
        proposals: (doctor, hospital) in proposal order.
        arrivals: For each hospital, the doctors fed to its algorithm in order.
        cancellations: For each round, doctors the receiving hospital dropped
            from its selection (not counting a rejected proposer).
        matching: The final matching.
    """

    proposals: tuple[tuple[int, int], ...]
    arrivals: tuple[tuple[int, ...], ...]
    cancellations: tuple[tuple[int, ...], ...]
    matching: Matching

    @property
    def rounds(self) -> int:
        """Number of proposals made."""
        return len(self.proposals)


def _bind_algorithms(
    market: Market, algorithms: AlgorithmChoice | Sequence[AlgorithmChoice]
) -> list[OnlineAlgorithm]:
    """Instantiates one online algorithm per hospital."""
    if isinstance(algorithms, str | type):
        choices: Sequence[AlgorithmChoice] = [algorithms] * market.n_hospitals
    else:
        choices = algorithms
    if len(choices) != market.n_hospitals:
        msg = f"Got {len(choices)} algorithms for {market.n_hospitals} hospitals"
        raise ValueError(msg)
    bound: list[OnlineAlgorithm] = []
    for h, choice in enumerate(choices):
        utility, system = market.utilities[h], market.constraints[h]
        if isinstance(choice, str):
            bound.append(make_algorithm(choice, utility, system))
        else:
            bound.append(choice(utility, system))
    return bound


def _literal_active_set(
    market: Market, algorithms: Sequence[OnlineAlgorithm], pointers: Sequence[int]
) -> set[int]:
    """Recomputes L = {d | max(R_d + mu(d)) != mu(d)} from scratch."""
    current: dict[int, int] = {}
    for h, algorithm in enumerate(algorithms):
        for doctor in algorithm.selection:
            current[doctor] = h
    active: set[int] = set()
    for doctor, ranked in enumerate(market.preferences):
        held = current.get(doctor)
        # Hospitals still in R_d sit at positions pointers[doctor] and later.
        if held is None:
            better = pointers[doctor] < len(ranked)
        else:
            better = pointers[doctor] < ranked.index(held)
        if better:
            active.add(doctor)
    return active


def run_gda(
    market: Market,
    algorithms: AlgorithmChoice | Sequence[AlgorithmChoice] = "greedy_matroid",
    tie_break: TieBreak | str = "fifo",
    *,
    audit: bool = False,
) -> tuple[Matching, GdaTrace]:
    """Runs generalized deferred acceptance.

    Each doctor proposes down their preference list. The receiving hospital
    feeds the proposer to its online algorithm and keeps exactly the
    algorithm's selection; doctors it drops become unmatched and propose
    again later.

    Args:
        market: A valid market.
        algorithms: One algorithm name or class for every hospital, or one per
            hospital. Each is bound to its hospital's utility and constraint.
        tie_break: Which active doctor proposes next.
        audit: Recompute the active set from its definition every round and
            fail if the incremental bookkeeping disagrees.

    Returns:
        The final matching and the run trace.

    Raises:
        ContractViolationError: If an algorithm's selection is not within its
            previous selection plus the proposer, or is dependent.
        RuntimeError: If ``audit`` finds a mismatch.
    """
    if isinstance(tie_break, str):
        tie_break = TieBreak.from_text(tie_break)
    bound = _bind_algorithms(market, algorithms)
    pointers = [0] * market.n_doctors
    assignment: list[int | None] = [None] * market.n_doctors
    active = _ActiveDoctors(
        tie_break, (d for d, ranked in enumerate(market.preferences) if ranked)
    )
    proposals: list[tuple[int, int]] = []
    cancellations: list[tuple[int, ...]] = []

    while active:
        doctor = active.pop()
        hospital = market.preferences[doctor][pointers[doctor]]
        pointers[doctor] += 1
        proposals.append((doctor, hospital))
        step = len(proposals)

        algorithm = bound[hospital]
        previous = algorithm.selection_mask
        algorithm.arrive(doctor)
        selection = algorithm.selection_mask
        check_contract(
            previous, selection, doctor, market.constraints[hospital], step
        )

        canceled = tuple(iter_bits(previous & ~selection))
        cancellations.append(canceled)
        for dropped in canceled:
            assignment[dropped] = None
            if pointers[dropped] < len(market.preferences[dropped]):
                active.push(dropped)
        if selection >> doctor & 1:
            assignment[doctor] = hospital
        elif pointers[doctor] < len(market.preferences[doctor]):
            active.push(doctor)
        logger.debug(
            "Round %d: doctor %d -> hospital %d, accepted=%s, canceled=%s",
            step,
            doctor,
            hospital,
            assignment[doctor] == hospital,
            list(canceled),
        )

        if audit:
            literal = _literal_active_set(market, bound, pointers)
            incremental = {d for d in range(market.n_doctors) if d in active}
            if literal != incremental:
                msg = (
                    f"Active set mismatch in round {step}: incremental "
                    f"{sorted(incremental)}, recomputed {sorted(literal)}"
                )
                raise RuntimeError(msg)

    matching = Matching.from_assignment(assignment)
    trace = GdaTrace(
        proposals=tuple(proposals),
        arrivals=tuple(algorithm.snapshot().arrivals for algorithm in bound),
        cancellations=tuple(cancellations),
        matching=matching,
    )
    logger.info(
        "Deferred acceptance finished after %d rounds with %d pairs",
        trace.rounds,
        len(matching.pairs),
    )
    return matching, trace


def gda_alpha_guarantee(alphas: Iterable[float]) -> float:
    """Returns the stability factor certified by per-hospital ratios.

    If every hospital's online algorithm is alpha_h-competitive, the
    deferred acceptance output is max_h alpha_h-stable. No hospitals gives 1.

    This takes the ratios alone. ``certified_alpha`` derives them from a
    market and the algorithm each hospital runs, then calls this.

    Args:
        alphas: The competitive ratio of each hospital's algorithm, one per
            hospital in index order.

    Returns:
        The largest ratio, or 1 for an empty market.
    """
    return max(alphas, default=1.0)


def certified_alpha(
    market: Market, algorithms: str | Sequence[str] = "greedy_matroid"
) -> float:
    """Returns the certified stability factor for named algorithms on ``market``."""
    names = (
        [algorithms] * market.n_hospitals
        if isinstance(algorithms, str)
        else list(algorithms)
    )
    return gda_alpha_guarantee(
        claimed_ratio(name, market.utilities[h], market.constraints[h])
        for h, name in enumerate(names)
    )
