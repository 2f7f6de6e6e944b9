"""Packed binary vectors over the n-qubit index space and control-string algebra.

A length-2^n bit vector is stored as a single Python int (bit nu of the int is
vector entry nu), so XOR / AND / popcount run word-parallel. Index convention:
nu = sum_q nu_q * 2^(n-1-q), i.e. qubit 0 is the most significant bit of the
basis index. Control strings are plain ``str`` over the alphabet '0', '1', 'I'
('I' = unconditioned position); their character ordering '0' < '1' < 'I' is
the tie-break order used everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator

import numpy as np

CONTROL_SYMBOLS = "01I"


@dataclass(frozen=True)
class BinaryVector:
    """Immutable bit vector of length 2^n, packed into an int."""

    n: int
    value: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"qubit count must be >= 1, got {self.n}")
        if not 0 <= self.value < 1 << (1 << self.n):
            raise ValueError("packed value out of range for length 2^n")

    @classmethod
    def zeros(cls, n: int) -> "BinaryVector":
        return cls(n, 0)

    @classmethod
    def ones(cls, n: int) -> "BinaryVector":
        return cls(n, (1 << (1 << n)) - 1)

    @classmethod
    def from_string(cls, bits: str) -> "BinaryVector":
        """Parse the textual form: '0'/'1' characters, index 0 leftmost."""
        size = len(bits)
        n = size.bit_length() - 1
        if size != 1 << n or n < 1:
            raise ValueError(f"bit string length must be 2^n with n >= 1, got {size}")
        value = 0
        for nu, ch in enumerate(bits):
            if ch == "1":
                value |= 1 << nu
            elif ch != "0":
                raise ValueError(f"invalid character {ch!r} in bit string")
        return cls(n, value)

    @classmethod
    def from_hex(cls, hexdigits: str, n: int) -> "BinaryVector":
        """Hex form of the packed value; needs n since leading zeros are ambiguous."""
        return cls(n, int(hexdigits, 16))

    @classmethod
    def from_bits(cls, bits: np.ndarray) -> "BinaryVector":
        size = len(bits)
        n = size.bit_length() - 1
        if size != 1 << n:
            raise ValueError("bit array length must be a power of two")
        packed = np.packbits(np.asarray(bits, dtype=np.uint8), bitorder="little")
        return cls(n, int.from_bytes(packed.tobytes(), "little"))

    def to_string(self) -> str:
        size = 1 << self.n
        return "".join("1" if (self.value >> nu) & 1 else "0" for nu in range(size))

    def to_bits(self) -> np.ndarray:
        """Entries as a uint8 array indexed by nu."""
        size = 1 << self.n
        nbytes = max(1, (size + 7) // 8)
        raw = np.frombuffer(self.value.to_bytes(nbytes, "little"), dtype=np.uint8)
        return np.unpackbits(raw, bitorder="little")[:size].copy()

    def bit(self, nu: int) -> int:
        return (self.value >> nu) & 1

    @property
    def popcount(self) -> int:
        return self.value.bit_count()

    def __xor__(self, other: "BinaryVector") -> "BinaryVector":
        self._check_same(other)
        return BinaryVector(self.n, self.value ^ other.value)

    def __and__(self, other: "BinaryVector") -> "BinaryVector":
        self._check_same(other)
        return BinaryVector(self.n, self.value & other.value)

    def __or__(self, other: "BinaryVector") -> "BinaryVector":
        self._check_same(other)
        return BinaryVector(self.n, self.value | other.value)

    def __bool__(self) -> bool:
        return self.value != 0

    def _check_same(self, other: "BinaryVector") -> None:
        if self.n != other.n:
            raise ValueError(f"length mismatch: 2^{self.n} vs 2^{other.n}")

    def __str__(self) -> str:
        return self.to_string()


def validate_control(c: str, n: int | None = None) -> None:
    if n is not None and len(c) != n:
        raise ValueError(f"control string must have length {n}, got {len(c)}")
    if not c or any(sym not in CONTROL_SYMBOLS for sym in c):
        raise ValueError(f"control string may only contain '0', '1', 'I': {c!r}")


def all_control_strings(n: int) -> Iterator[str]:
    """All 3^n control strings, lexicographic in '0' < '1' < 'I'."""
    for syms in product(CONTROL_SYMBOLS, repeat=n):
        yield "".join(syms)


def num_free(c: str) -> int:
    """Number of unconditioned positions (the '#I' of a control string)."""
    return c.count("I")


def expand_value(c: str) -> int:
    """Packed form of expand(c) without the BinaryVector wrapper."""
    val = 1
    size = 1
    for sym in reversed(c):
        if sym == "1":
            val <<= size
        elif sym == "I":
            val |= val << size
        elif sym != "0":
            raise ValueError(f"invalid control symbol {sym!r}")
        size <<= 1
    return val


def expand(c: str) -> BinaryVector:
    """Indicator vector of the subcube selected by c.

    Kronecker product of per-qubit tuples t('0')=(1,0), t('1')=(0,1),
    t('I')=(1,1); entry nu is 1 iff nu_q = c_q on every controlled position q.
    """
    validate_control(c)
    return BinaryVector(len(c), expand_value(c))


def fullness(b: BinaryVector, c: str) -> Fraction:
    """Fraction of the subcube of c covered by ones of b. Exact rational."""
    validate_control(c, b.n)
    cover = expand_value(c)
    return Fraction((cover & b.value).bit_count(), cover.bit_count())


def try_join(c: str, other: str) -> str | None:
    """Join two control strings differing at exactly one position.

    Group rules {0,1}->I, {0,I}->1, {1,I}->0; the result r satisfies
    expand(r) = expand(c) XOR expand(other). Returns None when the strings
    differ at zero or more than one position.
    """
    if len(c) != len(other):
        raise ValueError("control strings must have equal length")
    pos = -1
    for q, (a, bch) in enumerate(zip(c, other)):
        if a != bch:
            if pos >= 0:
                return None
            pos = q
    if pos < 0:
        return None
    joined = _JOIN_TABLE[frozenset((c[pos], other[pos]))]
    return c[:pos] + joined + c[pos + 1 :]


_JOIN_TABLE = {
    frozenset("01"): "I",
    frozenset("0I"): "1",
    frozenset("1I"): "0",
}


def is_complementary_cut(b: BinaryVector, c0: str, c1: str) -> bool:
    """True iff the bi-partition (c0, c1) has mutually complementary 1-patterns.

    c0 and c1 must be identical except at one position p where c0 has '0' and
    c1 has '1'. The check pairs each cell nu of subcube(c0) with its partner
    nu XOR 2^(n-1-p) in subcube(c1) and requires b to differ on every pair.
    """
    validate_control(c0, b.n)
    validate_control(c1, b.n)
    diff = [q for q, (x, y) in enumerate(zip(c0, c1)) if x != y]
    if len(diff) != 1 or c0[diff[0]] != "0" or c1[diff[0]] != "1":
        raise ValueError("not a single-position 0/1 bi-partition")
    p = diff[0]
    offset = 1 << (b.n - 1 - p)
    mismatch = b.value ^ (b.value >> offset)
    cover0 = expand_value(c0)
    return cover0 & mismatch == cover0
