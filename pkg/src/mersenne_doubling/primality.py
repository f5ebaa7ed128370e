"""Deterministic primality via a sieved table of odd primes.

A table sieved up to B decides primality for every n <= B*B: table lookup
below B, trial division by table primes up to sqrt(n) above it.  The default
bound of two million gives capacity 4e12 in well under a second of startup.
"""

from __future__ import annotations

import struct
from bisect import bisect_right
from dataclasses import dataclass, field
from math import isqrt
from pathlib import Path

import numpy as np

from .errors import CapacityError

DEFAULT_PRIME_BOUND = 2_000_000

_PTAB_MAGIC = b"PTAB"
_PTAB_VERSION = 1
_PTAB_HEADER = struct.Struct("<4sIQQ")  # magic, version, count, bound


@dataclass(frozen=True)
class PrimeTable:
    """All odd primes in [3, bound], ascending; decides primality up to bound**2."""

    bound: int
    primes: list[int] = field(repr=False)

    @property
    def capacity(self) -> int:
        return self.bound * self.bound

    def __len__(self) -> int:
        return len(self.primes)

    def __contains__(self, n: int) -> bool:
        i = bisect_right(self.primes, n)
        return i > 0 and self.primes[i - 1] == n


def build_prime_table(bound: int = DEFAULT_PRIME_BOUND) -> PrimeTable:
    """Sieve of Eratosthenes over the odd numbers up to bound."""
    if not 3 <= bound <= 2**32:
        raise ValueError(f"sieve bound must lie in [3, 2**32], got {bound}")
    half = (bound - 1) // 2  # index i <-> odd number 2i + 1
    composite = bytearray(half + 1)
    i = 1
    while (2 * i + 1) ** 2 <= bound:
        if not composite[i]:
            p = 2 * i + 1
            first = (p * p - 1) // 2
            composite[first::p] = b"\x01" * len(range(first, half + 1, p))
        i += 1
    return PrimeTable(bound, [2 * i + 1 for i in range(1, half + 1) if not composite[i]])


def is_prime(n: int, table: PrimeTable) -> bool:
    """Three-case primality check for 2 <= n <= table.bound**2.

    Even n are prime only for n = 2; odd n up to the bound are found by
    binary search; odd n above it are composite exactly when some table
    prime up to sqrt(n) divides them.
    """
    if n < 2:
        raise ValueError(f"primality is decided for n >= 2, got {n}")
    if n % 2 == 0:
        return n == 2
    if n <= table.bound:
        return n in table
    if n > table.capacity:
        raise CapacityError(
            f"{n} exceeds the table capacity {table.capacity}; "
            f"rebuild with bound >= {isqrt(n) + 1}"
        )
    root = isqrt(n)
    primes = table.primes
    for p in primes[: bisect_right(primes, root)]:
        if n % p == 0:
            return False
    return True


def save_prime_table(table: PrimeTable, path: str | Path) -> None:
    """Write the table as little-endian 64-bit values with a PTAB header."""
    payload = np.asarray(table.primes, dtype="<u8").tobytes()
    header = _PTAB_HEADER.pack(_PTAB_MAGIC, _PTAB_VERSION, len(table.primes), table.bound)
    Path(path).write_bytes(header + payload)


def load_prime_table(path: str | Path) -> PrimeTable:
    """Read a table written by save_prime_table, validating header and length."""
    raw = Path(path).read_bytes()
    if len(raw) < _PTAB_HEADER.size:
        raise ValueError(f"{path}: truncated prime table file")
    magic, version, count, bound = _PTAB_HEADER.unpack_from(raw)
    if magic != _PTAB_MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}, expected {_PTAB_MAGIC!r}")
    if version != _PTAB_VERSION:
        raise ValueError(f"{path}: unsupported version {version}")
    body = raw[_PTAB_HEADER.size:]
    if len(body) != 8 * count:
        raise ValueError(f"{path}: expected {count} primes, file holds {len(body) // 8}")
    primes = [int(p) for p in np.frombuffer(body, dtype="<u8")]
    return PrimeTable(int(bound), primes)
