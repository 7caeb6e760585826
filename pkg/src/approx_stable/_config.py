"""Tolerances and exhaustive-oracle limits."""

import os
from collections.abc import Mapping
from dataclasses import dataclass, fields, replace

# Strict comparisons in stability logic: x > y means x > y + TOLERANCE.
TOLERANCE = 1e-9

# Knapsack loads are feasible while they stay within 1 + KNAPSACK_TOLERANCE.
KNAPSACK_TOLERANCE = 1e-12

ORACLE_LIMIT_ENV = "APPROX_STABLE_ORACLE_LIMIT"


class OracleLimitError(RuntimeError):
    """Raised when an exhaustive oracle would exceed its configured cap."""


@dataclass(frozen=True)
class OracleLimits:
    """Caps on the brute-force oracles.

    Attributes:
        packing: Largest ground set solve_exact enumerates without a fast path.
        verification: Largest ground set for monotonicity and axiom checks.
        submodular: Largest ground set for the submodularity check.
        exchange: Largest ground set for the matroid exchange check.
        enumeration: Largest number of doctor-to-hospital assignments that
            exists_stable_bruteforce walks.
    """

    packing: int = 24
    verification: int = 20
    submodular: int = 16
    exchange: int = 16
    enumeration: int = 10**7

    @classmethod
    def from_env(cls, environ: Mapping[str, str] | None = None) -> "OracleLimits":
        """Builds limits from the APPROX_STABLE_ORACLE_LIMIT variable.

        The variable is either a bare integer, which replaces the assignment
        enumeration cap, or comma-separated ``key=value`` pairs naming fields.

        Args:
            environ: The environment to read. Defaults to ``os.environ``.

        Returns:
            The default limits with the overrides applied.

        Raises:
            ValueError: If the variable cannot be parsed.
        """
        raw = (os.environ if environ is None else environ).get(ORACLE_LIMIT_ENV)
        limits = cls()
        if raw is None or not raw.strip():
            return limits

        raw = raw.strip()
        if "=" not in raw:
            return replace(limits, enumeration=_parse_limit(raw))

        known = {field.name for field in fields(cls)}
        overrides: dict[str, int] = {}
        for item in raw.split(","):
            key, sep, value = item.partition("=")
            key = key.strip()
            if not sep or key not in known:
                msg = (
                    f"Invalid {ORACLE_LIMIT_ENV} entry '{item}'. "
                    f"Known limits: {sorted(known)}"
                )
                raise ValueError(msg)
            overrides[key] = _parse_limit(value)
        return replace(limits, **overrides)


def _parse_limit(value: str) -> int:
    """Parses a positive integer limit, accepting forms such as ``1e8``."""
    try:
        number = float(value)
    except ValueError as e:
        msg = f"{ORACLE_LIMIT_ENV} value '{value}' is not a number"
        raise ValueError(msg) from e
    if number < 0 or number != int(number):
        msg = f"{ORACLE_LIMIT_ENV} value '{value}' is not a nonnegative integer"
        raise ValueError(msg)
    return int(number)


def current_limits() -> OracleLimits:
    """Returns the limits in effect for the current process environment."""
    return OracleLimits.from_env()


def check_limit(module: str, what: str, size: int, limit: int) -> None:
    """Raises OracleLimitError if ``size`` exceeds ``limit``.

    Args:
        module: The module enforcing the limit, used in the message.
        what: A description of the measured quantity.
        size: The measured size.
        limit: The configured cap.

    Raises:
        OracleLimitError: If the cap is exceeded.
    """
    if size > limit:
        msg = f"{module}: {what} of {size} exceeds the exhaustive limit of {limit}"
        raise OracleLimitError(msg)
