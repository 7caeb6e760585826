"""Markets (D, H, preferences, utilities, constraints) and matchings."""

from collections.abc import Iterable
from dataclasses import dataclass, field

from ._constraint import IndependenceSystem
from ._utility import Utility

type DoctorId = int
type HospitalId = int


@dataclass(frozen=True)
class Market:
    """A two-sided market with hospital-side utilities and constraints.

    Doctors and hospitals are dense indices; ``doctors`` and ``hospitals``
    hold their display names. A hospital absent from a doctor's preference
    list is unacceptable to that doctor.

    Attributes:
        doctors: Display name of each doctor.
        hospitals: Display name of each hospital.
        preferences: For each doctor, acceptable hospitals, most preferred first.
        utilities: Utility of each hospital.
        constraints: Independence system of each hospital.
    """

    doctors: tuple[str, ...]
    hospitals: tuple[str, ...]
    preferences: tuple[tuple[HospitalId, ...], ...]
    utilities: tuple[Utility, ...]
    constraints: tuple[IndependenceSystem, ...]
    _ranks: tuple[dict[HospitalId, int], ...] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        """Caches each doctor's rank of every acceptable hospital."""
        ranks = tuple(
            {h: position for position, h in reversed(list(enumerate(ranked)))}
            for ranked in self.preferences
        )
        object.__setattr__(self, "_ranks", ranks)

    @property
    def n_doctors(self) -> int:
        """Number of doctors."""
        return len(self.doctors)

    @property
    def n_hospitals(self) -> int:
        """Number of hospitals."""
        return len(self.hospitals)

    def rank(self, doctor: DoctorId, hospital: HospitalId) -> int | None:
        """Position of ``hospital`` in the doctor's list, None if unacceptable."""
        return self._ranks[doctor].get(hospital)

    def is_acceptable(self, doctor: DoctorId, hospital: HospitalId) -> bool:
        """True iff the doctor prefers ``hospital`` to being unmatched."""
        return hospital in self._ranks[doctor]

    def weakly_prefers(
        self, doctor: DoctorId, hospital: HospitalId, current: HospitalId | None
    ) -> bool:
        """True iff ``hospital`` is at least as good as ``current`` for the doctor.

        ``current`` None stands for being unmatched, which only acceptable
        hospitals beat.
        """
        rank = self.rank(doctor, hospital)
        if rank is None:
            return False
        if current is None:
            return True
        current_rank = self.rank(doctor, current)
        return current_rank is None or rank <= current_rank

    def doctor_index(self, name: str) -> DoctorId:
        """Looks up a doctor by display name.

        Raises:
            ValueError: If no doctor has that name.
        """
        try:
            return self.doctors.index(name)
        except ValueError as e:
            msg = f"unknown doctor '{name}'"
            raise ValueError(msg) from e

    def hospital_index(self, name: str) -> HospitalId:
        """Looks up a hospital by display name.

        Raises:
            ValueError: If no hospital has that name.
        """
        try:
            return self.hospitals.index(name)
        except ValueError as e:
            msg = f"unknown hospital '{name}'"
            raise ValueError(msg) from e


@dataclass(frozen=True)
class Matching:
    """A set of (doctor, hospital) pairs with every doctor in at most one pair."""

    pairs: frozenset[tuple[DoctorId, HospitalId]] = frozenset()

    def __post_init__(self) -> None:
        """Rejects doctors that appear in more than one pair."""
        seen: set[DoctorId] = set()
        for doctor, _ in self.pairs:
            if doctor in seen:
                msg = f"Doctor {doctor} appears in more than one pair"
                raise ValueError(msg)
            seen.add(doctor)

    @classmethod
    def of(cls, pairs: Iterable[tuple[DoctorId, HospitalId]]) -> "Matching":
        """Builds a matching from any iterable of pairs."""
        return cls(frozenset(pairs))

    @classmethod
    def from_assignment(
        cls, assignment: Iterable[HospitalId | None]
    ) -> "Matching":
        """Builds a matching from a per-doctor hospital (None for unmatched)."""
        return cls(
            frozenset(
                (d, h) for d, h in enumerate(assignment) if h is not None
            )
        )

    def assignment(self, n_doctors: int) -> list[HospitalId | None]:
        """Returns the hospital of every doctor, None when unmatched."""
        result: list[HospitalId | None] = [None] * n_doctors
        for doctor, hospital in self.pairs:
            result[doctor] = hospital
        return result

    def sorted_pairs(self) -> list[tuple[DoctorId, HospitalId]]:
        """Returns the pairs ordered by doctor."""
        return sorted(self.pairs)


def assigned_set(mu: Matching, hospital: HospitalId) -> frozenset[DoctorId]:
    """Returns mu(h), the doctors matched to ``hospital``."""
    return frozenset(d for d, h in mu.pairs if h == hospital)


def assigned_hospital(mu: Matching, doctor: DoctorId) -> HospitalId | None:
    """Returns mu(d), or None when the doctor is unmatched."""
    return next((h for d, h in mu.pairs if d == doctor), None)


def assigned_masks(market: Market, mu: Matching) -> list[int]:
    """Returns mu(h) as a bitmask for every hospital."""
    masks = [0] * market.n_hospitals
    for doctor, hospital in mu.pairs:
        masks[hospital] |= 1 << doctor
    return masks


def validate_market(market: Market) -> list[str]:
    """Lists every broken market invariant; an empty list means valid."""
    violations: list[str] = []
    n, m = market.n_doctors, market.n_hospitals

    for kind, names in (("doctor", market.doctors), ("hospital", market.hospitals)):
        duplicates = sorted({name for name in names if names.count(name) > 1})
        violations.extend(f"duplicate {kind} name '{name}'" for name in duplicates)

    if len(market.preferences) != n:
        violations.append(
            f"{len(market.preferences)} preference lists for {n} doctors"
        )
    for doctor, ranked in enumerate(market.preferences):
        for hospital in ranked:
            if not 0 <= hospital < m:
                violations.append(
                    f"unknown hospital {hospital} in preferences of doctor {doctor}"
                )
        duplicates = sorted({h for h in ranked if ranked.count(h) > 1})
        violations.extend(
            f"duplicate preference entry {h} for doctor {doctor}" for h in duplicates
        )

    if len(market.utilities) != m:
        violations.append(f"{len(market.utilities)} utilities for {m} hospitals")
    violations.extend(
        f"utility ground-set mismatch for hospital {h}: "
        f"{utility.size} doctors, expected {n}"
        for h, utility in enumerate(market.utilities)
        if utility.size != n
    )
    if len(market.constraints) != m:
        violations.append(f"{len(market.constraints)} constraints for {m} hospitals")
    violations.extend(
        f"constraint ground-set mismatch for hospital {h}: "
        f"{constraint.size} doctors, expected {n}"
        for h, constraint in enumerate(market.constraints)
        if constraint.size != n
    )
    return violations


def check_matching(market: Market, mu: Matching) -> None:
    """Checks that ``mu`` only uses known doctors and acceptable hospitals.

    Raises:
        ValueError: On an unknown doctor or hospital or an unacceptable pair.
    """
    for doctor, hospital in mu.pairs:
        if not 0 <= doctor < market.n_doctors:
            msg = f"foreign doctor {doctor} in matching"
            raise ValueError(msg)
        if not 0 <= hospital < market.n_hospitals:
            msg = f"unknown hospital {hospital} in matching"
            raise ValueError(msg)
        if not market.is_acceptable(doctor, hospital):
            msg = (
                f"Hospital {market.hospitals[hospital]} is unacceptable to "
                f"doctor {market.doctors[doctor]}"
            )
            raise ValueError(msg)


def is_feasible(market: Market, mu: Matching) -> bool:
    """True iff every hospital's assigned set is independent.

    Raises:
        ValueError: If ``mu`` does not fit the market.
    """
    check_matching(market, mu)
    return all(
        market.constraints[h].accepts(mask)
        for h, mask in enumerate(assigned_masks(market, mu))
    )


def numbered(prefix: str, count: int) -> tuple[str, ...]:
    """Returns display names ``prefix1`` ... ``prefix<count>``."""
    return tuple(f"{prefix}{i}" for i in range(1, count + 1))
