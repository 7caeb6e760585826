"""Doctor sets as integer bitmasks over dense doctor indices."""

from collections.abc import Iterable, Iterator


def mask_of(doctors: Iterable[int]) -> int:
    """Returns the bitmask with one bit set per doctor index.

    Raises:
        ValueError: If an index is negative.
    """
    mask = 0
    for doctor in doctors:
        if doctor < 0:
            msg = f"foreign doctor {doctor}: indices are nonnegative"
            raise ValueError(msg)
        mask |= 1 << doctor
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    """Yields the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def members(mask: int) -> frozenset[int]:
    """Returns the doctor indices in ``mask``."""
    return frozenset(iter_bits(mask))


def full_mask(size: int) -> int:
    """Returns the mask of the ground set ``{0, ..., size - 1}``."""
    return (1 << size) - 1


def iter_submasks(mask: int) -> Iterator[int]:
    """Yields every submask of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def check_ground(mask: int, size: int) -> None:
    """Raises ValueError if ``mask`` names doctors outside ``range(size)``."""
    if mask >> size:
        foreign = sorted(d for d in iter_bits(mask) if d >= size)
        msg = f"foreign doctor(s) {foreign}: ground set has {size} doctors"
        raise ValueError(msg)
