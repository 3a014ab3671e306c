"""Qubit multi-indices on subsets of the parties {1, ..., n}.

Parties are numbered from 1.  Both :class:`PartySet` and :class:`MultiIndex`
keep a bitmask in which bit ``k - 1`` stands for party ``k``.  The dense
(row/column) position of a full index is its binary expansion read with
party 1 as the most significant bit, which is the lexicographic order used
for every matrix in this package.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .exceptions import InvalidBipartitionError, ValidationError

MAX_PARTIES = 10


@dataclass(frozen=True)
class PartySet:
    """A subset of ``{1, ..., n}`` stored as a bitmask."""

    n: int
    mask: int = 0

    def __post_init__(self):
        if not 1 <= self.n <= MAX_PARTIES:
            raise ValidationError(f"party count must be in [1, {MAX_PARTIES}], got {self.n}")
        if self.mask < 0 or self.mask >> self.n:
            raise InvalidBipartitionError(f"mask {self.mask:#b} has parties outside [1, {self.n}]")

    @classmethod
    def of(cls, n: int, parties: Iterable[int]) -> "PartySet":
        mask = 0
        for k in parties:
            k = int(k)
            if not 1 <= k <= n:
                raise InvalidBipartitionError(f"party {k} outside [1, {n}]")
            mask |= 1 << (k - 1)
        return cls(n, mask)

    @classmethod
    def full(cls, n: int) -> "PartySet":
        return cls(n, (1 << n) - 1)

    @classmethod
    def empty(cls, n: int) -> "PartySet":
        return cls(n, 0)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(k for k in range(1, self.n + 1) if self.mask >> (k - 1) & 1)

    def complement(self) -> "PartySet":
        return PartySet(self.n, ((1 << self.n) - 1) & ~self.mask)

    @property
    def is_trivial(self) -> bool:
        return self.mask == 0 or self.mask == (1 << self.n) - 1

    @property
    def dense_mask(self) -> int:
        """XOR mask flipping these parties in a dense (lexicographic) position."""
        return sum(1 << (self.n - k) for k in self.members)

    def __contains__(self, k: int) -> bool:
        return 1 <= k <= self.n and bool(self.mask >> (k - 1) & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.members)) + "}"

    def to_list(self) -> list[int]:
        return list(self.members)


@functools.total_ordering
@dataclass(frozen=True)
class MultiIndex:
    """A {0,1}-valued function on ``support``.

    ``bits`` uses the same party bitmask convention as :class:`PartySet` and
    must vanish outside the support.
    """

    support: PartySet
    bits: int = 0

    def __post_init__(self):
        if self.bits & ~self.support.mask:
            raise ValidationError("index bits set outside its support")

    @classmethod
    def from_string(cls, text: str, support: PartySet | None = None) -> "MultiIndex":
        """Parse ``"010"``; characters are assigned to the support in party order."""
        if support is None:
            if not text:
                raise ValidationError("empty string needs an explicit (empty) support")
            support = PartySet.full(len(text))
        members = support.members
        if len(text) != len(members) or any(c not in "01" for c in text):
            raise ValidationError(f"{text!r} is not a bit string for support {support}")
        bits = 0
        for c, k in zip(text, members):
            if c == "1":
                bits |= 1 << (k - 1)
        return cls(support, bits)

    @classmethod
    def from_position(cls, n: int, position: int) -> "MultiIndex":
        if not 0 <= position < 1 << n:
            raise ValidationError(f"position {position} out of range for n={n}")
        bits = 0
        for k in range(1, n + 1):
            if position >> (n - k) & 1:
                bits |= 1 << (k - 1)
        return cls(PartySet.full(n), bits)

    @property
    def n(self) -> int:
        return self.support.n

    def bit(self, party: int) -> int:
        if party not in self.support:
            raise ValidationError(f"party {party} not in support {self.support}")
        return self.bits >> (party - 1) & 1

    @property
    def position(self) -> int:
        """Dense lexicographic position; defined for full-support indices only."""
        if self.support.mask != (1 << self.n) - 1:
            raise ValidationError("position is only defined on the full party set")
        return sum(1 << (self.n - k) for k in range(1, self.n + 1) if self.bits >> (k - 1) & 1)

    def restrict(self, subset: PartySet) -> "MultiIndex":
        if subset.mask & ~self.support.mask:
            raise InvalidBipartitionError(f"{subset} is not inside support {self.support}")
        return MultiIndex(subset, self.bits & subset.mask)

    def _key(self) -> tuple[int, ...]:
        return tuple(self.bits >> (k - 1) & 1 for k in self.support.members)

    def __lt__(self, other: "MultiIndex") -> bool:
        if self.support != other.support:
            return NotImplemented
        return self._key() < other._key()

    def __str__(self) -> str:
        return "".join(str(b) for b in self._key())


def diamond(i: MultiIndex, k: MultiIndex) -> MultiIndex:
    """Compose indices on disjoint supports into one index on their union."""
    if i.n != k.n:
        raise InvalidBipartitionError("indices live on different party counts")
    if i.support.mask & k.support.mask:
        raise InvalidBipartitionError(
            f"supports {i.support} and {k.support} overlap; not a valid split")
    return MultiIndex(PartySet(i.n, i.support.mask | k.support.mask), i.bits | k.bits)


def flip_on(i: MultiIndex, subset: PartySet) -> MultiIndex:
    """Flip the bits of ``i`` on ``subset`` (the full flip when subset is everything)."""
    if subset.mask & ~i.support.mask:
        raise InvalidBipartitionError(f"{subset} is not inside support {i.support}")
    return MultiIndex(i.support, i.bits ^ subset.mask)


def bar(i: MultiIndex) -> MultiIndex:
    return flip_on(i, i.support)


def canonical_rep(i: MultiIndex) -> tuple[MultiIndex, bool]:
    """Representative beginning with 0, and whether a full flip was needed."""
    if i.bit(1) == 0:
        return i, False
    return bar(i), True


def enumerate_b0(n: int) -> list[MultiIndex]:
    """Indices beginning with 0 in lexicographic order; list position == dense position."""
    return [MultiIndex.from_position(n, p) for p in range(1 << (n - 1))]


def enumerate_bipartitions(n: int) -> list[tuple[PartySet, PartySet]]:
    """Every nontrivial split ``(S, T)`` once, oriented so that party 1 is in ``T``."""
    if n < 2:
        raise InvalidBipartitionError("a bipartition needs at least two parties")
    out = []
    for mask in range(2, 1 << n, 2):
        s = PartySet(n, mask)
        out.append((s, s.complement()))
    return out


# Dense-position helpers used by the X-matrix code.

def complement_position(n: int, position: int) -> int:
    return ((1 << n) - 1) ^ position


def position_string(n: int, position: int) -> str:
    return format(position, f"0{n}b") if n else ""


def parse_position(text: str, n: int) -> int:
    if len(text) != n or any(c not in "01" for c in text):
        raise ValidationError(f"{text!r} is not an {n}-bit index")
    return int(text, 2)
