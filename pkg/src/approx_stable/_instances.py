"""Market generators: fixed gadgets, lower-bound constructions, application
encodings and seeded random markets.
"""

import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Literal, cast

import numpy as np

from ._bitset import full_mask, mask_of, members
from ._config import TOLERANCE, check_limit, current_limits
from ._constraint import (
    Capacity,
    Explicit,
    IndependenceSystem,
    Intersection,
    Knapsack,
    PartitionMatroid,
    iter_independent,
    restrict,
)
from ._market import Market, numbered
from ._packing import PackingInstance, solve_exact
from ._utility import Additive, Cardinality, Utility, WeightedCoverage

type Rendering = Literal["explicit", "matroid_pair", "knapsack"]


def _d(*doctors: int) -> int:
    return mask_of(doctors)


def _crossing_constraint(
    pairs: tuple[tuple[int, int], tuple[int, int]],
    rendering: Rendering,
    epsilon: float,
) -> IndependenceSystem:
    """One hospital of the crossing market: independent sets are the subsets
    of either of two disjoint doctor pairs.
    """
    (a, b), (c, d) = pairs
    match rendering:
        case "explicit":
            return Explicit(4, (_d(a, b), _d(c, d)))
        case "matroid_pair":
            # At most one doctor from each of {a, c}, {b, d}, {a, d} and {b, c}.
            return Intersection(
                4,
                (
                    PartitionMatroid(4, (_d(a, c), _d(b, d)), (1, 1)),
                    PartitionMatroid(4, (_d(a, d), _d(b, c)), (1, 1)),
                ),
            )
        case "knapsack":
            weights: list[tuple[float, ...]] = [(0.5, 0.5)] * 4
            weights[a] = (1 - epsilon, 0.0)
            weights[b] = (0.0, 1 - epsilon)
            return Knapsack(tuple(weights))


def gen_crossing_market(
    rendering: Rendering = "explicit", epsilon: float = 0.25
) -> Market:
    """Builds the four-doctor, two-hospital market without a stable matching.

    d1 and d2 rank h1 over h2, d3 and d4 rank h2 over h1, utilities count
    doctors. h1 can hold {d1, d3} or {d2, d4}; h2 can hold {d1, d4} or
    {d2, d3}. No matching is alpha-stable for alpha < 2.

    Args:
        rendering: How the constraints are represented. "explicit" lists the
            maximal sets, "matroid_pair" intersects two partition matroids,
            "knapsack" uses a 2-dimensional knapsack with slack ``epsilon``.
            All three accept the same sets.
        epsilon: Knapsack slack, in (0, 1/2).

    Raises:
        ValueError: If the rendering is unknown or epsilon is out of range.
    """
    if rendering not in {"explicit", "matroid_pair", "knapsack"}:
        msg = f"Unknown rendering '{rendering}'"
        raise ValueError(msg)
    if rendering == "knapsack" and not 0 < epsilon < 0.5:  # noqa: PLR2004
        msg = f"Knapsack rendering needs 0 < epsilon < 1/2, got {epsilon}"
        raise ValueError(msg)
    d1, d2, d3, d4 = range(4)
    return Market(
        doctors=numbered("d", 4),
        hospitals=numbered("h", 2),
        preferences=((0, 1), (0, 1), (1, 0), (1, 0)),
        utilities=(Cardinality(4), Cardinality(4)),
        constraints=(
            _crossing_constraint(((d1, d3), (d2, d4)), rendering, epsilon),
            _crossing_constraint(((d1, d4), (d2, d3)), rendering, epsilon),
        ),
    )


def gen_coverage_market() -> Market:
    """Builds the four-doctor market whose best stability factor is (1+sqrt17)/4.

    h1 has capacity 2 and a weighted coverage utility; h2 has capacity 1 and
    values d3 at 1 and d4 at 2. d1 and d2 only accept h1, d3 ranks h2 over
    h1 and d4 ranks h1 over h2.
    """
    heavy = math.sqrt(17) - 1
    coverage = WeightedCoverage(
        element_weights={"a1": 4.0, "a2": 4.0, "a3": heavy, "a4": heavy, "a5": 4.0},
        covers=(
            frozenset({"a1", "a3"}),
            frozenset({"a2", "a4"}),
            frozenset({"a3", "a4", "a5"}),
            frozenset({"a1", "a2"}),
        ),
    )
    return Market(
        doctors=numbered("d", 4),
        hospitals=numbered("h", 2),
        preferences=((0,), (0,), (1, 0), (0, 1)),
        utilities=(coverage, Additive((0.0, 0.0, 1.0, 2.0))),
        constraints=(Capacity(4, 2), Capacity(4, 1)),
    )


@dataclass(frozen=True)
class LowerBoundSpec:
    """Inputs of the lower-bound market construction.

    Attributes:
        utility: The utility of the central hospital h*.
        system: The constraint of h*.
        parts: Disjoint doctor tuples D_1 ... D_s covering the ground set; the
            order inside a part is the doctors' positions 1 ... r_t.
        quotas: q_t <= r_t for every part.
        alpha: The factor the construction defeats.
    """

    utility: Utility
    system: IndependenceSystem
    parts: tuple[tuple[int, ...], ...]
    quotas: tuple[int, ...]
    alpha: float

    def __post_init__(self) -> None:
        """Rejects malformed partitions and quotas."""
        size = self.system.size
        if self.utility.size != size:
            msg = f"Utility has {self.utility.size} doctors, system has {size}"
            raise ValueError(msg)
        if len(self.parts) != len(self.quotas):
            msg = f"{len(self.parts)} parts but {len(self.quotas)} quotas"
            raise ValueError(msg)
        flat = [d for part in self.parts for d in part]
        if sorted(flat) != list(range(size)):
            msg = f"Parts must partition the {size} doctors, got {self.parts}"
            raise ValueError(msg)
        for part, quota in zip(self.parts, self.quotas, strict=True):
            if not 0 <= quota <= len(part):
                msg = f"Quota {quota} outside [0, {len(part)}] for part {part}"
                raise ValueError(msg)
        if not self.alpha >= 1:
            msg = f"alpha must be >= 1, got {self.alpha}"
            raise ValueError(msg)

    @property
    def size(self) -> int:
        """Number of doctors."""
        return self.system.size


def closure(spec: LowerBoundSpec, doctors: Iterable[int]) -> frozenset[int]:
    """Returns cl(D') of the lower-bound construction.

    Per part D_t: all of D_t when D' holds fewer than q_t of its doctors,
    otherwise every doctor up to the last position D' occupies.
    """
    chosen = set(doctors)
    result: set[int] = set()
    for part, quota in zip(spec.parts, spec.quotas, strict=True):
        positions = [i for i, d in enumerate(part) if d in chosen]
        if len(positions) < quota:
            result.update(part)
        elif positions:
            result.update(part[: max(positions) + 1])
    return frozenset(result)


def within_quotas(spec: LowerBoundSpec, doctors: Iterable[int]) -> bool:
    """True iff D' holds at most q_t doctors of every part D_t (the family A)."""
    chosen = set(doctors)
    return all(
        len(chosen.intersection(part)) <= quota
        for part, quota in zip(spec.parts, spec.quotas, strict=True)
    )


def lower_bound_counterexample(spec: LowerBoundSpec) -> frozenset[int] | None:
    """Searches for an independent D' within quotas that breaks

        alpha * u(D') < max { u(S) | S independent, S within cl(D') }.

    Returns:
        The first failing D', or None when the inequality holds throughout.

    Raises:
        OracleLimitError: If the ground set exceeds the packing limit.
    """
    check_limit("instances", "ground set", spec.size, current_limits().packing)
    for mask in iter_independent(spec.system, full_mask(spec.size)):
        chosen = members(mask)
        if not within_quotas(spec, chosen):
            continue
        closed = closure(spec, chosen)
        best = solve_exact(
            PackingInstance(closed, spec.utility, restrict(spec.system, closed))
        )
        if not spec.alpha * spec.utility.value(mask) + TOLERANCE < best.value:
            return chosen
    return None


def verify_lower_bound_inequality(spec: LowerBoundSpec) -> bool:
    """True iff the construction's inequality holds for every D' it quantifies."""
    return lower_bound_counterexample(spec) is None


def _lower_bound_hospitals(spec: LowerBoundSpec) -> list[tuple[int, int]]:
    """Returns (t, i) for every hospital h^t_i, i from q_t + 1 to r_t."""
    return [
        (t, i)
        for t, (part, quota) in enumerate(zip(spec.parts, spec.quotas, strict=True))
        for i in range(quota + 1, len(part) + 1)
    ]


def gen_lower_bound_market(spec: LowerBoundSpec) -> Market:
    """Builds the market in which no alpha-stable matching exists.

    Hospitals are h* plus h^t_i for every part t and q_t < i <= r_t. Doctor
    d^t_i with i <= q_t ranks h*, then h^t_{q_t+1} ... h^t_{r_t}; with
    i > q_t it ranks h^t_i, h*, then h^t_{i+1} ... h^t_{r_t}. Hospital h^t_i
    has capacity 1 and values d^t_j at (alpha + 1)^-j. h* uses the
    utility and constraint of ``spec``.

    Raises:
        ValueError: If ``spec`` is malformed.
    """
    size = spec.size
    side = _lower_bound_hospitals(spec)
    index = {key: h for h, key in enumerate(side, start=1)}
    doctor_names = [""] * size
    preferences: list[tuple[int, ...]] = [()] * size
    for t, (part, quota) in enumerate(zip(spec.parts, spec.quotas, strict=True)):
        tail = len(part)
        for i, doctor in enumerate(part, start=1):
            doctor_names[doctor] = f"d{t + 1}_{i}"
            if i <= quota:
                ranked = [0, *(index[t, j] for j in range(quota + 1, tail + 1))]
            else:
                later = (index[t, j] for j in range(i + 1, tail + 1))
                ranked = [index[t, i], 0, *later]
            preferences[doctor] = tuple(ranked)

    utilities: list[Utility] = [spec.utility]
    constraints: list[IndependenceSystem] = [spec.system]
    for t, _ in side:
        values = [0.0] * size
        for j, doctor in enumerate(spec.parts[t], start=1):
            values[doctor] = (spec.alpha + 1) ** -j
        utilities.append(Additive(tuple(values)))
        constraints.append(Capacity(size, 1))

    return Market(
        doctors=tuple(doctor_names),
        hospitals=("h*", *(f"h{t + 1}_{i}" for t, i in side)),
        preferences=tuple(preferences),
        utilities=tuple(utilities),
        constraints=tuple(constraints),
    )


def _checked_market(spec: LowerBoundSpec) -> Market:
    """Builds the lower-bound market, refusing specs whose inequality fails."""
    counterexample = lower_bound_counterexample(spec)
    if counterexample is not None:
        msg = (
            f"Lower-bound inequality fails at alpha={spec.alpha} for "
            f"D'={sorted(counterexample)}"
        )
        raise ValueError(msg)
    return gen_lower_bound_market(spec)


def matroid_lower_bound_spec(k: int = 2, alpha: float | None = None) -> LowerBoundSpec:
    """The two-part construction defeating every alpha < k on k-matroids.

    D_1 and D_2 have k doctors each, both quotas are 1, and h* counts doctors
    from a single part: its independent sets are 2^{D_1} and 2^{D_2}.

    Args:
        k: Part size, at least 2.
        alpha: The defeated factor, default k - 0.1.

    Raises:
        ValueError: If k < 2.
    """
    if k < 2:  # noqa: PLR2004
        msg = f"k must be >= 2, got {k}"
        raise ValueError(msg)
    first, second = tuple(range(k)), tuple(range(k, 2 * k))
    return LowerBoundSpec(
        utility=Cardinality(2 * k),
        system=Explicit(2 * k, (mask_of(first), mask_of(second))),
        parts=(first, second),
        quotas=(1, 1),
        alpha=k - 0.1 if alpha is None else alpha,
    )


def gen_matroid_lower_bound(k: int = 2, alpha: float | None = None) -> Market:
    """Builds the k-matroid lower-bound market after verifying its inequality.

    Raises:
        ValueError: If k < 2 or the inequality fails for ``alpha``.
    """
    return _checked_market(matroid_lower_bound_spec(k, alpha))


@dataclass(frozen=True)
class KnapsackLowerBound:
    """The knapsack lower-bound construction and its block structure.

    Attributes:
        spec: The lower-bound spec for h*.
        r: ceil(1/epsilon) - 1, the number of doctors per block.
        m: Number of utility levels.
        blocks: For every (dimension a, level b), both 1-based, the doctors
            of block D^{a,b}.
    """

    spec: LowerBoundSpec
    r: int
    m: int
    blocks: Mapping[tuple[int, int], tuple[int, ...]] = field(repr=False)


# Largest number of utility levels tried when searching for the minimal m.
_MAX_LEVELS = 64


def _levels_suffice(r: int, rho: int, epsilon: float, m: int) -> bool:
    """True iff m utility levels satisfy (r*rho)^(1 - 1/m) > rho / (2 eps)."""
    return (r * rho) ** (1 - 1 / m) > rho / (2 * epsilon)


def knapsack_lower_bound(
    rho: int = 1, epsilon: float = 0.3, m: int | None = None
) -> KnapsackLowerBound:
    """The construction defeating every alpha < rho/(2 eps) on knapsacks.

    Doctor d0 has utility r*rho and weight 1 - eps in every dimension. The
    other m*r*rho doctors form blocks D^{a,b}: r doctors of utility
    (r*rho)^(b/m) weighing 1/r in dimension a and 0 elsewhere.

    Args:
        rho: Knapsack dimension, at least 1.
        epsilon: Slack, in (0, 1/2).
        m: Number of utility levels; defaults to the smallest m with
            (r*rho)^(1 - 1/m) > rho / (2 eps).

    Raises:
        ValueError: If the parameters violate those bounds.
    """
    if rho < 1 or not 0 < epsilon < 0.5:  # noqa: PLR2004
        msg = f"Need rho >= 1 and 0 < epsilon < 1/2, got rho={rho}, eps={epsilon}"
        raise ValueError(msg)
    r = math.ceil(1 / epsilon) - 1
    if m is None:
        m = next(
            (
                levels
                for levels in range(1, _MAX_LEVELS + 1)
                if _levels_suffice(r, rho, epsilon, levels)
            ),
            None,
        )
        if m is None:
            msg = f"No m <= {_MAX_LEVELS} satisfies the level bound"
            raise ValueError(msg)
    elif m < 1 or not _levels_suffice(r, rho, epsilon, m):
        msg = f"m={m} does not satisfy (r*rho)^(1-1/m) > rho/(2*eps)"
        raise ValueError(msg)

    size = m * r * rho + 1
    values = [float(r * rho)] + [0.0] * (size - 1)
    weights: list[tuple[float, ...]] = [(1 - epsilon,) * rho] + [()] * (size - 1)
    blocks: dict[tuple[int, int], tuple[int, ...]] = {}
    for b in range(1, m + 1):
        for a in range(1, rho + 1):
            start = r * (a - 1) + r * rho * (b - 1)
            block = tuple(start + t for t in range(1, r + 1))
            blocks[a, b] = block
            for doctor in block:
                values[doctor] = float((r * rho) ** (b / m))
                weights[doctor] = tuple(
                    1 / r if dim == a else 0.0 for dim in range(1, rho + 1)
                )

    spec = LowerBoundSpec(
        utility=Additive(tuple(values)),
        system=Knapsack(tuple(weights)),
        parts=((0,), tuple(range(1, size))),
        quotas=(1, 1),
        alpha=rho / (2 * epsilon),
    )
    return KnapsackLowerBound(spec=spec, r=r, m=m, blocks=blocks)


def gen_knapsack_lower_bound(
    rho: int = 1, epsilon: float = 0.3, m: int | None = None
) -> Market:
    """Builds the knapsack lower-bound market after verifying its inequality.

    Raises:
        ValueError: If the parameters are infeasible.
    """
    return _checked_market(knapsack_lower_bound(rho, epsilon, m).spec)


def _assemble(
    n_doctors: int,
    constraints: Sequence[IndependenceSystem],
    preferences: Sequence[Sequence[int]] | None,
    utilities: Sequence[Utility] | None,
) -> Market:
    """Wraps per-hospital constraints into a market.

    Every doctor ranks all hospitals in index order and every hospital counts
    doctors unless preferences or utilities are given.
    """
    m = len(constraints)
    ranked = (
        tuple(tuple(range(m)) for _ in range(n_doctors))
        if preferences is None
        else tuple(tuple(p) for p in preferences)
    )
    return Market(
        doctors=numbered("d", n_doctors),
        hospitals=numbered("h", m),
        preferences=ranked,
        utilities=(
            tuple(Cardinality(n_doctors) for _ in range(m))
            if utilities is None
            else tuple(utilities)
        ),
        constraints=tuple(constraints),
    )


def gen_typed_quotas(
    n_doctors: int,
    types: Sequence[Sequence[int]],
    type_quotas: Sequence[Sequence[int]],
    capacities: Sequence[int | None],
    preferences: Sequence[Sequence[int]] | None = None,
    utilities: Sequence[Utility] | None = None,
) -> Market:
    """Hospitals with an overall capacity and per-type quotas (a matroid).

    Args:
        n_doctors: Number of doctors.
        types: Disjoint doctor groups shared by all hospitals.
        type_quotas: For each hospital, the quota of every type.
        capacities: For each hospital, the overall capacity (None: no cap).
        preferences: Doctor preference lists; default all hospitals in order.
        utilities: Hospital utilities; default cardinality.
    """
    parts = tuple(mask_of(group) for group in types)
    constraints = [
        PartitionMatroid(n_doctors, parts, tuple(quotas), capacity)
        for quotas, capacity in zip(type_quotas, capacities, strict=True)
    ]
    return _assemble(n_doctors, constraints, preferences, utilities)


def gen_overlapping_types(
    n_doctors: int,
    type_families: Sequence[Sequence[Sequence[int]]],
    type_quotas: Sequence[Sequence[Sequence[int]]],
    preferences: Sequence[Sequence[int]] | None = None,
    utilities: Sequence[Utility] | None = None,
) -> Market:
    """Hospitals with quotas over k overlapping type partitions.

    Each family partitions (part of) the doctors; a hospital's constraint is
    the intersection of one partition matroid per family.

    Args:
        n_doctors: Number of doctors.
        type_families: k families of disjoint doctor groups.
        type_quotas: For each hospital and family, the quota of every group.
        preferences: Doctor preference lists; default all hospitals in order.
        utilities: Hospital utilities; default cardinality.
    """
    constraints = [
        Intersection(
            n_doctors,
            tuple(
                PartitionMatroid(
                    n_doctors, tuple(mask_of(g) for g in family), tuple(quotas)
                )
                for family, quotas in zip(type_families, per_family, strict=True)
            ),
        )
        for per_family in type_quotas
    ]
    return _assemble(n_doctors, constraints, preferences, utilities)


def _normalized_weights(
    demands: Sequence[Sequence[float]], budgets: Sequence[float]
) -> tuple[tuple[float, ...], ...]:
    for budget in budgets:
        if not budget > 0:
            msg = f"Budgets must be > 0, got {budget}"
            raise ValueError(msg)
    rows = []
    for doctor, demand in enumerate(demands):
        if any(not math.isfinite(w) or w < 0 for w in demand):
            msg = f"Weights of doctor {doctor} must be >= 0, got {list(demand)}"
            raise ValueError(msg)
        rows.append(tuple(w / b for w, b in zip(demand, budgets, strict=True)))
    return tuple(rows)


def gen_budget(
    wages: Sequence[Sequence[float]],
    budgets: Sequence[float],
    preferences: Sequence[Sequence[int]] | None = None,
    utilities: Sequence[Utility] | None = None,
) -> Market:
    """Hospitals with a wage budget: a 1-dimensional knapsack of wage/budget.

    Args:
        wages: For each hospital, the wage of every doctor.
        budgets: The budget of each hospital.
        preferences: Doctor preference lists; default all hospitals in order.
        utilities: Hospital utilities; default cardinality.

    Raises:
        ValueError: On negative wages or nonpositive budgets.
    """
    n_doctors = len(wages[0]) if wages else 0
    constraints = [
        Knapsack(_normalized_weights([(w,) for w in row], (budget,)))
        for row, budget in zip(wages, budgets, strict=True)
    ]
    return _assemble(n_doctors, constraints, preferences, utilities)


def gen_refugee(
    demands: Sequence[Sequence[Sequence[float]]],
    capacities: Sequence[Sequence[float]],
    preferences: Sequence[Sequence[int]] | None = None,
    utilities: Sequence[Utility] | None = None,
) -> Market:
    """Localities with per-service capacities: a |services|-dimensional knapsack.

    Args:
        demands: For each locality and family, the need for every service.
        capacities: For each locality, the capacity of every service.
        preferences: Family preference lists; default all localities in order.
        utilities: Locality utilities; default cardinality.

    Raises:
        ValueError: On negative demands or nonpositive capacities.
    """
    n_doctors = len(demands[0]) if demands else 0
    constraints = [
        Knapsack(_normalized_weights(rows, services))
        for rows, services in zip(demands, capacities, strict=True)
    ]
    return _assemble(n_doctors, constraints, preferences, utilities)


type UtilityClass = Literal["cardinality", "additive", "coverage"]
type ConstraintClass = Literal["capacity", "matroid", "knapsack", "explicit"]

UTILITY_CLASSES: tuple[UtilityClass, ...] = ("cardinality", "additive", "coverage")
CONSTRAINT_CLASSES: tuple[ConstraintClass, ...] = (
    "capacity",
    "matroid",
    "knapsack",
    "explicit",
)

# Largest market gen_random builds; the exhaustive oracles stop around here.
MAX_RANDOM_DOCTORS = 24


@dataclass(frozen=True)
class RandomMarketParams:
    """Knobs for gen_random.

    Attributes:
        k: Number of partition matroids intersected for "matroid".
        rho: Knapsack dimension for "knapsack".
        epsilon: Knapsack slack; weights are drawn from [0, 1 - epsilon).
        acceptance: Probability that a doctor finds a hospital acceptable.
        max_value: Additive values and element weights are drawn from
            1 ... max_value.
        elements: Number of coverage elements.
    """

    k: int = 1
    rho: int = 1
    epsilon: float = 0.3
    acceptance: float = 0.8
    max_value: int = 10
    elements: int = 6

    def __post_init__(self) -> None:
        """Rejects out-of-range knobs."""
        if self.k < 1 or self.rho < 1 or self.max_value < 1 or self.elements < 1:
            msg = "k, rho, max_value and elements must be >= 1"
            raise ValueError(msg)
        if not 0 < self.epsilon <= 1 or not 0 <= self.acceptance <= 1:
            msg = "epsilon must be in (0, 1] and acceptance in [0, 1]"
            raise ValueError(msg)


def _random_utility(
    rng: np.random.Generator, n: int, kind: UtilityClass, params: RandomMarketParams
) -> Utility:
    """Draws a utility of class ``kind`` with integer values and weights."""
    match kind:
        case "cardinality":
            return Cardinality(n)
        case "additive":
            values = rng.integers(1, params.max_value + 1, size=n)
            return Additive(tuple(float(v) for v in values))
        case "coverage":
            names = [f"e{i}" for i in range(1, params.elements + 1)]
            weights = rng.integers(1, params.max_value + 1, size=len(names))
            covered = rng.random((n, len(names))) < 0.4  # noqa: PLR2004
            return WeightedCoverage(
                element_weights={
                    e: float(w) for e, w in zip(names, weights, strict=True)
                },
                covers=tuple(
                    frozenset(e for e, hit in zip(names, row, strict=True) if hit)
                    for row in covered
                ),
            )


def _random_partition(rng: np.random.Generator, n: int) -> PartitionMatroid:
    """Splits the doctors into random groups with random quotas."""
    groups = int(rng.integers(1, max(n, 1) + 1))
    labels = rng.integers(0, groups, size=n)
    parts = tuple(
        mask_of(d for d in range(n) if labels[d] == g) for g in range(groups)
    )
    quotas = tuple(int(q) for q in rng.integers(1, 3, size=groups))
    return PartitionMatroid(n, parts, quotas)


def _random_constraint(
    rng: np.random.Generator, n: int, kind: ConstraintClass, params: RandomMarketParams
) -> IndependenceSystem:
    """Draws an independence system of class ``kind``."""
    match kind:
        case "capacity":
            return Capacity(n, int(rng.integers(1, max(n // 2, 1) + 1)))
        case "matroid":
            children = tuple(_random_partition(rng, n) for _ in range(params.k))
            return children[0] if params.k == 1 else Intersection(n, children)
        case "knapsack":
            weights = rng.uniform(0, 1 - params.epsilon, size=(n, params.rho))
            return Knapsack(tuple(tuple(float(w) for w in row) for row in weights))
        case "explicit":
            count = int(rng.integers(1, 4))
            return Explicit(
                n,
                tuple(
                    mask_of(d for d in range(n) if rng.random() < 0.5)  # noqa: PLR2004
                    for _ in range(count)
                ),
            )


def gen_random(
    seed: int,
    n: int,
    m: int,
    utility_class: str = "cardinality",
    constraint_class: str = "capacity",
    params: RandomMarketParams | None = None,
) -> Market:
    """Draws a market from a seeded generator.

    Every hospital gets a fresh utility and constraint of the requested
    classes; each doctor accepts each hospital with probability
    ``params.acceptance`` and ranks the accepted ones in random order.

    Args:
        seed: Generator seed; equal seeds give equal markets.
        n: Number of doctors, at most 24.
        m: Number of hospitals.
        utility_class: "cardinality", "additive" or "coverage".
        constraint_class: "capacity", "matroid" (intersection of ``params.k``
            partition matroids), "knapsack" or "explicit".
        params: Further knobs.

    Raises:
        ValueError: On an unsupported class combination or size.
    """
    if (
        utility_class not in UTILITY_CLASSES
        or constraint_class not in CONSTRAINT_CLASSES
    ):
        msg = (
            f"unsupported class combination ({utility_class}, {constraint_class}). "
            f"Utilities: {list(UTILITY_CLASSES)}; constraints: "
            f"{list(CONSTRAINT_CLASSES)}"
        )
        raise ValueError(msg)
    if not 0 <= n <= MAX_RANDOM_DOCTORS or m < 0:
        msg = f"Need 0 <= n <= {MAX_RANDOM_DOCTORS} and m >= 0, got n={n}, m={m}"
        raise ValueError(msg)
    params = params or RandomMarketParams()
    rng = np.random.default_rng(seed)
    utility_kind = cast("UtilityClass", utility_class)
    constraint_kind = cast("ConstraintClass", constraint_class)

    utilities = [_random_utility(rng, n, utility_kind, params) for _ in range(m)]
    constraints = [
        _random_constraint(rng, n, constraint_kind, params) for _ in range(m)
    ]
    preferences = []
    for _ in range(n):
        order = rng.permutation(m)
        accepted = rng.random(m) < params.acceptance
        preferences.append(tuple(int(h) for h in order if accepted[h]))
    return _assemble(n, constraints, preferences, utilities)
