"""Tests for doctor bitmask helpers."""

import pytest

from approx_stable._bitset import (
    check_ground,
    full_mask,
    iter_bits,
    iter_submasks,
    mask_of,
    members,
)


def test_mask_of_and_members() -> None:
    """Verifies conversions between index sets and masks."""
    assert mask_of([0, 2, 5]) == 0b100101
    assert members(0b100101) == frozenset({0, 2, 5})
    assert list(iter_bits(0b1010)) == [1, 3]


def test_mask_of_rejects_negative_index() -> None:
    """Verifies that negative indices are foreign."""
    with pytest.raises(ValueError, match="foreign doctor -1"):
        mask_of([-1])


def test_iter_submasks_counts_every_subset() -> None:
    """Verifies that a 3-bit mask has 8 submasks, each distinct."""
    subs = list(iter_submasks(0b10110))
    assert len(subs) == 8
    assert len(set(subs)) == 8
    assert all(sub & ~0b10110 == 0 for sub in subs)


def test_check_ground() -> None:
    """Verifies that bits beyond the ground set are reported."""
    check_ground(full_mask(4), 4)
    with pytest.raises(ValueError, match=r"foreign doctor\(s\) \[4\]"):
        check_ground(full_mask(5), 4)
