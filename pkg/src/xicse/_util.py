"""Shared numeric helpers: deterministic seed derivation and log-space sums."""

from __future__ import annotations

import math
import struct
from fractions import Fraction

_MASK64 = (1 << 64) - 1


def mix64(*values: int) -> int:
    """Fold integers into one 64-bit stream id (splitmix64 finalizer per word).

    Stable across platforms and runs; used to derive independent RNG keys
    from a root seed plus structural coordinates (multi-index, grid index).
    """
    acc = 0x9E3779B97F4A7C15
    for v in values:
        acc = (acc ^ (v & _MASK64)) & _MASK64
        acc = (acc * 0xBF58476D1CE4E5B9) & _MASK64
        acc ^= acc >> 27
        acc = (acc * 0x94D049BB133111EB) & _MASK64
        acc ^= acc >> 31
    return acc


def float_bits(x: float) -> int:
    """Bit pattern of a double, for hashing grid values deterministically."""
    return struct.unpack(">Q", struct.pack(">d", float(x)))[0]


def logsumexp(values: list[float]) -> float:
    """log(sum(exp(v))) with the usual max shift; empty sum gives -inf."""
    if not values:
        return -math.inf
    m = max(values)
    if m == -math.inf:
        return -math.inf
    if m == math.inf:
        return math.inf
    acc = 0.0
    for v in values:
        acc += math.exp(v - m)
    return m + math.log(acc)


def as_fraction(value) -> Fraction:
    """Exact rational view of an input scalar.

    Floats convert exactly (every finite float is a dyadic rational), so the
    exact arithmetic paths accept the same inputs as the float paths.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a numeric weight entry")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


def fmt17(x: float) -> str:
    """17 significant digits, round-trip exact for doubles (CSV cells)."""
    return f"{x:.17g}"
