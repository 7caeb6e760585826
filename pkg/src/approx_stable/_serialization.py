"""JSON documents for markets, matchings, reports and traces."""

import json
import math
from collections.abc import Mapping, Sequence
from typing import Annotated, Any, Literal

from pydantic import BaseModel, ConfigDict, Field

from ._bitset import iter_bits, mask_of
from ._constraint import (
    Capacity,
    Explicit,
    IndependenceSystem,
    Intersection,
    Knapsack,
    PartitionMatroid,
)
from ._gda import GdaTrace
from ._market import Market, Matching, validate_market
from ._packing import PackingSolution
from ._stability import BruteForceResult, StabilityReport
from ._utility import Additive, Cardinality, Utility, WeightedCoverage


class _Document(BaseModel):
    """Base for every document: unknown fields are errors."""

    model_config = ConfigDict(extra="forbid", frozen=True)


class CardinalityDoc(_Document):
    """{"kind": "cardinality"}."""

    kind: Literal["cardinality"] = "cardinality"


class AdditiveDoc(_Document):
    """Per-doctor values; missing doctors are worth 0."""

    kind: Literal["additive"] = "additive"
    values: dict[str, Annotated[float, Field(ge=0)]] = Field(default_factory=dict)


class CoverageDoc(_Document):
    """Element weights and the elements each doctor covers."""

    kind: Literal["coverage"] = "coverage"
    elements: dict[str, Annotated[float, Field(ge=0)]]
    covers: dict[str, list[str]] = Field(default_factory=dict)


UtilityDoc = Annotated[
    CardinalityDoc | AdditiveDoc | CoverageDoc, Field(discriminator="kind")
]


class CapacityDoc(_Document):
    """At most ``rank`` doctors."""

    kind: Literal["capacity"] = "capacity"
    rank: Annotated[int, Field(ge=0)]


class PartitionMatroidDoc(_Document):
    """Disjoint parts with quotas and an optional overall rank."""

    kind: Literal["partition_matroid"] = "partition_matroid"
    parts: list[list[str]]
    quotas: list[Annotated[int, Field(ge=0)]]
    rank: Annotated[int, Field(ge=0)] | None = None


class ExplicitDoc(_Document):
    """The maximal independent sets."""

    kind: Literal["explicit"] = "explicit"
    maximal_sets: list[list[str]]


class KnapsackDoc(_Document):
    """Per-doctor weight vectors; missing doctors weigh nothing."""

    kind: Literal["knapsack"] = "knapsack"
    weights: dict[str, list[Annotated[float, Field(ge=0, le=1)]]]


class IntersectionDoc(_Document):
    """Sets independent in every child."""

    kind: Literal["intersection"] = "intersection"
    of: list["ConstraintDoc"]


ConstraintDoc = Annotated[
    CapacityDoc | PartitionMatroidDoc | ExplicitDoc | KnapsackDoc | IntersectionDoc,
    Field(discriminator="kind"),
]
IntersectionDoc.model_rebuild()


class MarketDoc(_Document):
    """A whole market keyed by display names."""

    doctors: list[str]
    hospitals: list[str]
    preferences: dict[str, list[str]] = Field(default_factory=dict)
    utilities: dict[str, UtilityDoc]
    constraints: dict[str, ConstraintDoc]


class MatchingDoc(_Document):
    """{"pairs": [[doctor, hospital], ...]}."""

    pairs: list[tuple[str, str]]


def _dumps(document: BaseModel) -> str:
    """Canonical text: document field order, indent 2, shortest float repr."""
    return json.dumps(document.model_dump(), indent=2) + "\n"


def _number(value: float) -> float | str:
    """JSON-safe float: non-finite values become "inf", "-inf" or "nan"."""
    return value if math.isfinite(value) else str(value)


class _Names:
    """Name <-> index lookups for one market."""

    def __init__(self, doctors: Sequence[str], hospitals: Sequence[str]) -> None:
        self.doctors = {name: i for i, name in enumerate(doctors)}
        self.hospitals = {name: i for i, name in enumerate(hospitals)}
        for kind, names, index in (
            ("doctor", doctors, self.doctors),
            ("hospital", hospitals, self.hospitals),
        ):
            if len(index) != len(names):
                msg = f"duplicate {kind} names in {list(names)}"
                raise ValueError(msg)

    def doctor(self, name: str) -> int:
        try:
            return self.doctors[name]
        except KeyError as e:
            msg = f"foreign doctor '{name}'"
            raise ValueError(msg) from e

    def hospital(self, name: str) -> int:
        try:
            return self.hospitals[name]
        except KeyError as e:
            msg = f"unknown hospital '{name}'"
            raise ValueError(msg) from e

    def mask(self, names: Sequence[str]) -> int:
        return mask_of(self.doctor(name) for name in names)


def _utility_from_doc(doc: UtilityDoc, names: _Names) -> Utility:
    """Converts a parsed utility document, resolving doctor names."""
    n = len(names.doctors)
    match doc:
        case CardinalityDoc():
            return Cardinality(n)
        case AdditiveDoc():
            values = [0.0] * n
            for name, value in doc.values.items():
                values[names.doctor(name)] = value
            return Additive(tuple(values))
        case CoverageDoc():
            covers: list[frozenset[str]] = [frozenset()] * n
            for name, elements in doc.covers.items():
                covers[names.doctor(name)] = frozenset(elements)
            return WeightedCoverage(dict(doc.elements), tuple(covers))


def _constraint_from_doc(
    doc: ConstraintDoc, names: _Names
) -> IndependenceSystem:
    """Converts a parsed constraint document, resolving doctor names."""
    n = len(names.doctors)
    match doc:
        case CapacityDoc():
            return Capacity(n, doc.rank)
        case PartitionMatroidDoc():
            parts = tuple(names.mask(part) for part in doc.parts)
            return PartitionMatroid(n, parts, tuple(doc.quotas), doc.rank)
        case ExplicitDoc():
            return Explicit(n, tuple(names.mask(s) for s in doc.maximal_sets))
        case KnapsackDoc():
            dimension = max((len(w) for w in doc.weights.values()), default=1)
            rows: list[tuple[float, ...]] = [(0.0,) * dimension] * n
            for name, weights in doc.weights.items():
                rows[names.doctor(name)] = tuple(weights)
            return Knapsack(tuple(rows))
        case IntersectionDoc():
            return Intersection(
                n, tuple(_constraint_from_doc(child, names) for child in doc.of)
            )


def market_from_json(text: str) -> Market:
    """Parses and validates a market document.

    Raises:
        ValueError: On malformed JSON, unknown names, missing hospital
            entries or any broken market invariant.
    """
    doc = MarketDoc.model_validate_json(text)
    names = _Names(doc.doctors, doc.hospitals)
    preferences: list[tuple[int, ...]] = [()] * len(doc.doctors)
    for doctor, ranked in doc.preferences.items():
        preferences[names.doctor(doctor)] = tuple(names.hospital(h) for h in ranked)
    sections: tuple[tuple[str, Mapping[str, object]], ...] = (
        ("utility", doc.utilities),
        ("constraint", doc.constraints),
    )
    for section, entries in sections:
        for hospital in entries:
            names.hospital(hospital)
        missing = [h for h in doc.hospitals if h not in entries]
        if missing:
            msg = f"missing {section} for hospital(s) {missing}"
            raise ValueError(msg)

    market = Market(
        doctors=tuple(doc.doctors),
        hospitals=tuple(doc.hospitals),
        preferences=tuple(preferences),
        utilities=tuple(
            _utility_from_doc(doc.utilities[h], names) for h in doc.hospitals
        ),
        constraints=tuple(
            _constraint_from_doc(doc.constraints[h], names) for h in doc.hospitals
        ),
    )
    violations = validate_market(market)
    if violations:
        msg = "Invalid market: " + "; ".join(violations)
        raise ValueError(msg)
    return market


def _doctor_names(market: Market, mask: int) -> list[str]:
    return [market.doctors[d] for d in iter_bits(mask)]


def _utility_to_doc(market: Market, utility: Utility) -> UtilityDoc:
    match utility:
        case Cardinality():
            return CardinalityDoc()
        case Additive():
            values = zip(market.doctors, utility.values, strict=True)
            return AdditiveDoc(values=dict(values))
        case WeightedCoverage():
            order = {e: i for i, e in enumerate(utility.element_weights)}
            return CoverageDoc(
                elements=dict(utility.element_weights),
                covers={
                    name: sorted(covered, key=order.__getitem__)
                    for name, covered in zip(
                        market.doctors, utility.covers, strict=True
                    )
                },
            )


def _constraint_to_doc(market: Market, system: IndependenceSystem) -> ConstraintDoc:
    match system:
        case Capacity():
            return CapacityDoc(rank=system.rank)
        case PartitionMatroid():
            return PartitionMatroidDoc(
                parts=[_doctor_names(market, part) for part in system.parts],
                quotas=list(system.quotas),
                rank=system.rank,
            )
        case Explicit():
            return ExplicitDoc(
                maximal_sets=[_doctor_names(market, s) for s in system.maximal_sets]
            )
        case Knapsack():
            return KnapsackDoc(
                weights={
                    name: list(row)
                    for name, row in zip(market.doctors, system.weights, strict=True)
                }
            )
        case Intersection():
            return IntersectionDoc(
                of=[_constraint_to_doc(market, child) for child in system.children]
            )
        case _:
            msg = f"'{system.kind}' constraints are not serializable"
            raise ValueError(msg)


def market_to_json(market: Market) -> str:
    """Renders a market as canonical JSON.

    Raises:
        ValueError: If a hospital's constraint is a restriction.
    """
    doc = MarketDoc(
        doctors=list(market.doctors),
        hospitals=list(market.hospitals),
        preferences={
            name: [market.hospitals[h] for h in ranked]
            for name, ranked in zip(market.doctors, market.preferences, strict=True)
        },
        utilities={
            name: _utility_to_doc(market, utility)
            for name, utility in zip(market.hospitals, market.utilities, strict=True)
        },
        constraints={
            name: _constraint_to_doc(market, system)
            for name, system in zip(market.hospitals, market.constraints, strict=True)
        },
    )
    return _dumps(doc)


def matching_from_json(text: str, market: Market) -> Matching:
    """Parses a matching document against ``market``'s names.

    Raises:
        ValueError: On malformed JSON, unknown names or a doctor in two pairs.
    """
    doc = MatchingDoc.model_validate_json(text)
    names = _Names(market.doctors, market.hospitals)
    return Matching.of((names.doctor(d), names.hospital(h)) for d, h in doc.pairs)


def matching_to_json(market: Market, mu: Matching) -> str:
    """Renders a matching with pairs ordered by doctor."""
    doc = MatchingDoc(
        pairs=[(market.doctors[d], market.hospitals[h]) for d, h in mu.sorted_pairs()]
    )
    return _dumps(doc)


def _pairs(market: Market, mu: Matching | None) -> list[list[str]] | None:
    """Lists a matching as sorted [doctor, hospital] name pairs."""
    if mu is None:
        return None
    return [[market.doctors[d], market.hospitals[h]] for d, h in mu.sorted_pairs()]


def report_to_json(market: Market, report: StabilityReport) -> str:
    """Renders a stability report."""
    blocking = report.blocking
    payload: dict[str, Any] = {
        "alpha": _number(report.alpha),
        "verdict": "stable" if blocking is None else "blocked",
        "blocking": None
        if blocking is None
        else {
            "hospital": market.hospitals[blocking.hospital],
            "coalition": _doctor_names(market, mask_of(blocking.coalition)),
            "coalition_value": blocking.coalition_value,
            "current_value": blocking.current_value,
        },
        "hospitals": [
            {
                "hospital": market.hospitals[check.hospital],
                "candidates": len(check.candidates),
                "optimum": _doctor_names(market, mask_of(check.optimum)),
                "optimum_value": check.optimum_value,
                "current_value": check.current_value,
                "ratio": _number(check.ratio),
            }
            for check in report.hospitals
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def brute_force_to_json(market: Market, result: BruteForceResult) -> str:
    """Renders an exhaustive search result; a missing witness is "none"."""
    payload = {
        "alpha": _number(result.alpha),
        "witness": "none"
        if result.witness is None
        else _pairs(market, result.witness),
        "best_alpha": _number(result.best_alpha),
        "best_matching": _pairs(market, result.best_matching),
        "feasible_matchings": result.feasible_count,
    }
    return json.dumps(payload, indent=2) + "\n"


def packing_solution_to_json(market: Market, solution: PackingSolution) -> str:
    """Renders a packing solution with doctor names."""
    payload = {
        "chosen": _doctor_names(market, mask_of(solution.chosen)),
        "value": solution.value,
    }
    return json.dumps(payload, indent=2) + "\n"


def trace_to_json(market: Market, trace: GdaTrace) -> str:
    """Renders a deferred acceptance trace; proposals are listed in order."""
    payload = {
        "rounds": trace.rounds,
        "proposals": [
            {
                "round": step,
                "doctor": market.doctors[d],
                "hospital": market.hospitals[h],
                "canceled": [market.doctors[c] for c in canceled],
            }
            for step, ((d, h), canceled) in enumerate(
                zip(trace.proposals, trace.cancellations, strict=True), start=1
            )
        ],
        "arrivals": {
            market.hospitals[h]: [market.doctors[d] for d in arrived]
            for h, arrived in enumerate(trace.arrivals)
        },
        "matching": _pairs(market, trace.matching),
    }
    return json.dumps(payload, indent=2) + "\n"
