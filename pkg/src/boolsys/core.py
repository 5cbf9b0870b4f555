"""Bit-exact states, update masks, truth tables and the masked-update calculus.

A system state is a point of {0,1}^n.  Coordinates are 1-based (i = 1..n) and
the integer encoding is little-endian: coordinate 1 is the least significant
bit, so a state mu encodes to sum(mu_i * 2**(i-1)).  Bit strings are written
coordinate 1 first ("10" is the state with coordinate 1 set, encoding 1).
Every operation in this module is a pure function over immutable values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

MAX_WIDTH = 16


class WidthMismatchError(ValueError):
    """Operands of one operation must share the same width."""


class CapabilityError(ValueError):
    """The requested width exceeds what this analysis supports."""


@dataclass(frozen=True, order=True)
class Bits:
    """An n-bit vector: a state of {0,1}^n or a coordinate-selection mask.

    Ordering and equality follow (width, integer encoding), so sorting a set
    of same-width values sorts by encoding.
    """

    width: int
    value: int

    def __post_init__(self):
        if not 1 <= self.width <= MAX_WIDTH:
            raise CapabilityError(f"width must be in 1..{MAX_WIDTH}, got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value} out of range for width {self.width}")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "Bits":
        """Build from coordinate values (coordinate 1 first)."""
        seq = list(bits)
        value = 0
        for i, b in enumerate(seq):
            if b not in (0, 1):
                raise ValueError(f"bit must be 0 or 1, got {b!r}")
            value |= b << i
        return cls(len(seq), value)

    @classmethod
    def from_string(cls, text: str) -> "Bits":
        """Parse a bit string written coordinate 1 first, e.g. '01'."""
        if not text or any(c not in "01" for c in text):
            raise ValueError(f"not a bit string: {text!r}")
        return cls.from_bits(int(c) for c in text)

    @classmethod
    def zero(cls, width: int) -> "Bits":
        return cls(width, 0)

    @classmethod
    def full(cls, width: int) -> "Bits":
        return cls(width, (1 << width) - 1)

    def bit(self, i: int) -> int:
        """Value of coordinate i (1-based)."""
        if not 1 <= i <= self.width:
            raise IndexError(f"coordinate {i} out of range 1..{self.width}")
        return (self.value >> (i - 1)) & 1

    def bits(self) -> tuple[int, ...]:
        return tuple((self.value >> i) & 1 for i in range(self.width))

    def union(self, other: "Bits") -> "Bits":
        check_same_width(self, other)
        return Bits(self.width, self.value | other.value)

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    @property
    def is_full(self) -> bool:
        return self.value == (1 << self.width) - 1

    def to01(self) -> str:
        return "".join(str((self.value >> i) & 1) for i in range(self.width))

    def __str__(self) -> str:
        return self.to01()


# States and masks are both plain points of {0,1}^n; the aliases keep
# signatures readable.
State = Bits
Mask = Bits


def check_same_width(*items) -> int:
    widths = {x.width for x in items}
    if len(widths) != 1:
        raise WidthMismatchError(f"mixed widths: {sorted(widths)}")
    return widths.pop()


def all_states(width: int) -> Iterator[Bits]:
    """All points of {0,1}^width in increasing integer encoding."""
    return (Bits(width, v) for v in range(1 << width))


all_masks = all_states


def union_states(mus: Sequence[Bits]) -> Bits:
    """Coordinatewise OR of a nonempty list of same-width vectors."""
    if not mus:
        raise ValueError("union_states requires a nonempty list")
    width = check_same_width(*mus)
    value = 0
    for mu in mus:
        value |= mu.value
    return Bits(width, value)


@dataclass(frozen=True)
class TruthTable:
    """A total map {0,1}^n -> {0,1}^n stored densely.

    outputs[k] is the image of the state with integer encoding k; the table
    is total by construction, with exactly 2^n rows.
    """

    width: int
    outputs: tuple[Bits, ...]

    def __post_init__(self):
        if not 1 <= self.width <= MAX_WIDTH:
            raise CapabilityError(f"width must be in 1..{MAX_WIDTH}, got {self.width}")
        if len(self.outputs) != 1 << self.width:
            raise ValueError(
                f"need {1 << self.width} rows for width {self.width}, got {len(self.outputs)}"
            )
        for out in self.outputs:
            if out.width != self.width:
                raise WidthMismatchError(
                    f"row width {out.width} differs from table width {self.width}"
                )

    @classmethod
    def from_ints(cls, width: int, outputs: Iterable[int]) -> "TruthTable":
        return cls(width, tuple(Bits(width, v) for v in outputs))

    @classmethod
    def from_function(cls, width: int, fn) -> "TruthTable":
        """Tabulate fn over all states (fn maps Bits -> Bits)."""
        return cls(width, tuple(fn(mu) for mu in all_states(width)))

    @classmethod
    def identity(cls, width: int) -> "TruthTable":
        return cls.from_ints(width, range(1 << width))

    @classmethod
    def complement(cls, width: int) -> "TruthTable":
        top = (1 << width) - 1
        return cls.from_ints(width, (top ^ v for v in range(1 << width)))

    @classmethod
    def constant(cls, mu: Bits) -> "TruthTable":
        return cls(mu.width, tuple(mu for _ in range(1 << mu.width)))

    def apply(self, mu: Bits) -> Bits:
        if mu.width != self.width:
            raise WidthMismatchError(f"state width {mu.width} vs table width {self.width}")
        return self.outputs[mu.value]

    def coordinate(self, i: int, mu: Bits) -> int:
        """The i-th output coordinate on input mu."""
        return self.apply(mu).bit(i)

    @property
    def is_identity(self) -> bool:
        return all(out.value == k for k, out in enumerate(self.outputs))


def apply_masked(phi: TruthTable, nu: Mask, mu: State) -> State:
    """One masked update step: compute the selected coordinates, copy the rest.

    The result r has r_i = phi_i(mu) where nu_i = 1 and r_i = mu_i where
    nu_i = 0.
    """
    check_same_width(nu, mu)
    if phi.width != mu.width:
        raise WidthMismatchError(f"state width {mu.width} vs table width {phi.width}")
    computed = phi.outputs[mu.value].value & nu.value
    kept = mu.value & ~nu.value
    return Bits(mu.width, computed | kept)


def iterate(phi: TruthTable, prefix: Sequence[Mask], mu: State) -> State:
    """Left fold of apply_masked over a nonempty finite mask sequence."""
    if not prefix:
        raise ValueError("iterate requires a nonempty mask sequence")
    state = mu
    for nu in prefix:
        state = apply_masked(phi, nu, state)
    return state


def nullclin(phi: TruthTable, i: int) -> frozenset[State]:
    """States where coordinate i is stable: phi_i(mu) = mu_i."""
    if not 1 <= i <= phi.width:
        raise IndexError(f"coordinate {i} out of range 1..{phi.width}")
    bit = 1 << (i - 1)
    return frozenset(
        Bits(phi.width, v)
        for v in range(1 << phi.width)
        if (phi.outputs[v].value & bit) == (v & bit)
    )


def unstable_coordinates(phi: TruthTable, mu: State) -> tuple[int, ...]:
    """Coordinates i with phi_i(mu) != mu_i (the enabled/excited ones)."""
    out = phi.apply(mu)
    return tuple(i for i in range(1, phi.width + 1) if out.bit(i) != mu.bit(i))


def is_fixed_point(phi: TruthTable, mu: State) -> bool:
    return phi.apply(mu) == mu


def fixed_points(phi: TruthTable) -> frozenset[State]:
    return frozenset(
        Bits(phi.width, v) for v, out in enumerate(phi.outputs) if out.value == v
    )


def all_tables(width: int) -> Iterator[TruthTable]:
    """Every generator function on {0,1}^width; 2^(n*2^n) of them, so keep
    width tiny (the exhaustive sweeps use width 2)."""
    size = 1 << width
    for outs in itertools.product(range(size), repeat=size):
        yield TruthTable.from_ints(width, outs)
