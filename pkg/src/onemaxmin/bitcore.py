"""Bitstrings, seeded random streams and the two mutation operators.

Every random draw in the package goes through :class:`RngStream`, which wraps
numpy's PCG64 bit generator and derives bounded integers and uniforms from its
raw 64-bit output with fixed recipes. The compiled kernels read the very same
raw stream through numpy's ``bitgen_t`` interface and apply the same recipes,
so a pure-Python run and a compiled run with equal seeds consume identical
draws.

Positions are 1-based in the public helpers (``bit``, ``flip``,
``count_ones``), matching the usual ``x_1 .. x_n`` notation. Internal storage
is a ``bytes`` object of 0/1 values.
"""
from __future__ import annotations

import math
from typing import Iterable, Iterator

import numpy as np

MASK64 = (1 << 64) - 1
_TWO_M53 = 1.0 / 9007199254740992.0  # 2**-53


# -- seeds -----------------------------------------------------------------

def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(master: int, *keys: int) -> int:
    """Deterministically split ``master`` into a child seed.

    The state starts at ``splitmix64(master)`` and absorbs each key as
    ``state = splitmix64(state ^ splitmix64(key))``. Distinct key tuples give
    statistically independent 64-bit seeds.
    """
    state = _splitmix64(master & MASK64)
    for key in keys:
        state = _splitmix64(state ^ _splitmix64(key & MASK64))
    return state


class RngStream:
    """Single-owner random stream seeded by a 64-bit integer."""

    def __init__(self, seed: int):
        if not 0 <= seed <= MASK64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = int(seed)
        self.bitgen = np.random.PCG64(self.seed)

    @classmethod
    def derive(cls, master: int, *keys: int) -> "RngStream":
        return cls(derive_seed(master, *keys))

    def raw(self) -> int:
        return int(self.bitgen.random_raw())

    def randbelow(self, m: int) -> int:
        """Uniform integer in ``[0, m)`` by rejection on the raw 64-bit output."""
        if m <= 0:
            raise ValueError("m must be positive")
        threshold = (1 << 64) % m
        while True:
            r = self.raw()
            if r >= threshold:
                return r % m

    def uniform(self) -> float:
        """Uniform double in ``(0, 1]`` with 53 random bits."""
        return ((self.raw() >> 11) + 1) * _TWO_M53

    def flip_positions(self, n: int) -> list[int]:
        """0-based positions hit by independent rate-1/n flips.

        Uses geometric gaps between consecutive flips, which has exactly the
        law of ``n`` independent Bernoulli(1/n) trials but costs one draw per
        flip plus one.
        """
        if n == 1:
            return [0]
        log_q = math.log1p(-1.0 / n)
        out = []
        pos = -1
        while True:
            gap = math.log(self.uniform()) / log_q
            if pos + 1 + gap >= n:
                return out
            pos += 1 + int(gap)
            out.append(pos)


# -- bitstrings ------------------------------------------------------------

class BitString:
    """Immutable fixed-length binary vector."""

    __slots__ = ("_bits",)

    def __init__(self, bits: Iterable[int] | bytes):
        data = bytes(bits)
        if not data:
            raise ValueError("a bitstring needs at least one position")
        if data.translate(None, b"\x00\x01"):
            raise ValueError("bits must be 0 or 1")
        self._bits = data

    @classmethod
    def from_str(cls, text: str) -> "BitString":
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a bitstring: {text!r}")
        return cls(bytes(1 if c == "1" else 0 for c in text))

    @classmethod
    def ones(cls, n: int) -> "BitString":
        return cls(b"\x01" * n)

    @classmethod
    def zeros(cls, n: int) -> "BitString":
        return cls(b"\x00" * n)

    @property
    def bits(self) -> bytes:
        return self._bits

    def __len__(self) -> int:
        return len(self._bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self._bits)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BitString) and self._bits == other._bits

    def __hash__(self) -> int:
        return hash(self._bits)

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self._bits)

    def __repr__(self) -> str:
        return f"BitString('{self}')"

    def bit(self, i: int) -> int:
        """Value of position ``i`` (1-based)."""
        if not 1 <= i <= len(self._bits):
            raise IndexError(f"position {i} outside [1, {len(self._bits)}]")
        return self._bits[i - 1]

    def flip(self, *positions: int) -> "BitString":
        """Copy with the given 1-based positions flipped."""
        buf = bytearray(self._bits)
        for i in positions:
            if not 1 <= i <= len(buf):
                raise IndexError(f"position {i} outside [1, {len(buf)}]")
            buf[i - 1] ^= 1
        return BitString(bytes(buf))

    def hamming(self, other: "BitString") -> int:
        if len(other) != len(self):
            raise ValueError("length mismatch")
        return sum(a != b for a, b in zip(self._bits, other._bits))


def count_ones(x: BitString, a: int, b: int) -> int:
    """Number of ones in positions ``a..b`` inclusive (1-based)."""
    n = len(x)
    if not 1 <= a <= b <= n:
        raise IndexError(f"need 1 <= a <= b <= {n}, got a={a}, b={b}")
    return sum(x.bits[a - 1:b])


def random_bits(n: int, rng: RngStream) -> bytes:
    """``n`` uniform bits, taken from consecutive raw words, low bit first."""
    out = bytearray(n)
    word = 0
    for i in range(n):
        if i % 64 == 0:
            word = rng.raw()
        out[i] = (word >> (i % 64)) & 1
    return bytes(out)


def random_bitstring(n: int, rng: RngStream) -> BitString:
    if n < 1:
        raise ValueError("n must be >= 1")
    return BitString(random_bits(n, rng))


def one_bit_mutation(x: BitString, rng: RngStream, index: int | None = None) -> BitString:
    """Flip exactly one uniformly chosen position.

    ``index`` (1-based) forces the position and skips the draw.
    """
    if index is None:
        index = rng.randbelow(len(x)) + 1
    return x.flip(index)


def standard_bitwise_mutation(x: BitString, rng: RngStream) -> BitString:
    """Flip every position independently with probability ``1/n``."""
    positions = rng.flip_positions(len(x))
    if not positions:
        return x
    return x.flip(*(p + 1 for p in positions))
