"""
Helper utilities for the line geometry toolkit.
"""

import json
from typing import Any, Iterable, Iterator, List

import logging

logger = logging.getLogger(__name__)


# ============================================================================
# Bitsets (Python ints, bit i set <=> member i)
# ============================================================================

def to_mask(members: Iterable[int]) -> int:
    """Pack identifiers into an integer bitset."""
    mask = 0
    for i in members:
        mask |= 1 << i
    return mask


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the set bits of a bitset in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits(mask: int) -> List[int]:
    """Return the set bits of a bitset as an ascending list."""
    return list(iter_bits(mask))


def popcount(mask: int) -> int:
    """Count the set bits of a bitset."""
    return bin(mask).count("1")


# ============================================================================
# Arithmetic
# ============================================================================

def gaussian_binomial(n: int, k: int, q: int) -> int:
    """
    Number of k-dimensional subspaces of an n-dimensional space over GF(q).

    Args:
        n: Ambient dimension
        k: Subspace dimension
        q: Field order

    Returns:
        The Gaussian binomial coefficient [n, k]_q
    """
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


# ============================================================================
# Canonical JSON
# ============================================================================

def dumps_canonical(data: Any) -> str:
    """
    Serialize to canonical JSON: sorted keys, compact separators, LF ending.

    Args:
        data: JSON-compatible data (no floats)

    Returns:
        Canonical JSON text
    """
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"
