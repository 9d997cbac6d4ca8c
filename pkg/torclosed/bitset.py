"""Subsets of dense element indices stored as python ints."""

from typing import Iterable, Iterator, List


def to_mask(members: Iterable[int]) -> int:
    mask = 0
    for m in members:
        if m < 0:
            raise ValueError(f"bit not greater than or equal to 0, bit == {m}")
        mask |= 1 << m
    return mask


def members(mask: int) -> Iterator[int]:
    """Iterate over the set bits of `mask` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_list(mask: int) -> List[int]:
    return list(members(mask))


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def count(mask: int) -> int:
    return bin(mask).count("1")


def full(n: int) -> int:
    return (1 << n) - 1


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0
