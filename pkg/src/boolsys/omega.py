"""The group of mask recodings: bijections of {0,1}^n that fix bottom and top
and preserve the covers-all-coordinates relation.

Membership condition (iii) quantifies over arbitrary finite tuples, but the
coordinatewise union is idempotent, commutative and associative, so a tuple's
union only depends on the set of its members: deciding over subsets of size
at least two is equivalent and takes 2^(2^n) checks.  That pins the practical
membership cap at n <= 4 and the enumeration cap at n <= 3.

Members of this group are the legal recodings of update masks: they map
progressive mask sequences to progressive mask sequences (the set of masks a
progressive sequence fires forever has full union, and condition (iii) keeps
that union full).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional

from .core import Bits, CapabilityError, State, check_same_width
from .runs import LassoMaskSequence, ProgressiveFunction

OMEGA_MEMBERSHIP_MAX_WIDTH = 4
OMEGA_ENUMERATION_MAX_WIDTH = 3


@dataclass(frozen=True)
class StateBijection:
    """A bijection of {0,1}^n stored as its forward table.

    forward[k] is the image of the state with encoding k; the inverse is
    derived.  Construction rejects non-permutations.
    """

    width: int
    forward: tuple[Bits, ...]

    def __post_init__(self):
        if len(self.forward) != 1 << self.width:
            raise ValueError(
                f"need {1 << self.width} rows for width {self.width}, got {len(self.forward)}"
            )
        values = [h.value for h in self.forward]
        if any(h.width != self.width for h in self.forward):
            raise ValueError("bijection rows must match the declared width")
        if sorted(values) != list(range(1 << self.width)):
            raise ValueError("not a bijection: outputs are not a permutation")

    @classmethod
    def from_ints(cls, width: int, forward) -> "StateBijection":
        return cls(width, tuple(Bits(width, v) for v in forward))

    @classmethod
    def identity(cls, width: int) -> "StateBijection":
        return cls.from_ints(width, range(1 << width))

    @classmethod
    def coordinate_swap(cls) -> "StateBijection":
        """(m1, m2) -> (m2, m1) on two coordinates."""
        return cls.from_ints(2, (0, 2, 1, 3))

    def apply(self, mu: State) -> State:
        if mu.width != self.width:
            check_same_width(self.forward[0], mu)
        return self.forward[mu.value]

    @cached_property
    def inverse_forward(self) -> tuple[Bits, ...]:
        inverse: list = [None] * len(self.forward)
        for k, image in enumerate(self.forward):
            inverse[image.value] = Bits(self.width, k)
        return tuple(inverse)

    def apply_inverse(self, mu: State) -> State:
        if mu.width != self.width:
            check_same_width(self.forward[0], mu)
        return self.inverse_forward[mu.value]

    @property
    def fixes_bottom_and_top(self) -> bool:
        top = (1 << self.width) - 1
        return self.forward[0].value == 0 and self.forward[top].value == top


def compose(h1: StateBijection, h2: StateBijection) -> StateBijection:
    """Function composition: compose(h1, h2)(x) = h1(h2(x))."""
    check_same_width(h1.forward[0], h2.forward[0])
    return StateBijection(h1.width, tuple(h1.apply(v) for v in h2.forward))


def invert(h: StateBijection) -> StateBijection:
    return StateBijection(h.width, h.inverse_forward)


@dataclass(frozen=True)
class OmegaMembership:
    """A membership verdict; on condition-(iii) failures the witness is a set
    whose union covers all coordinates on exactly one side of the bijection."""

    subject: StateBijection
    verdict: bool
    witness: Optional[frozenset[State]] = None


def _covering_violation(width: int, images: tuple[int, ...]) -> Optional[tuple[int, ...]]:
    """First subset (size order, then lexicographic over encodings) whose
    union covers everything while its image union does not."""
    top = (1 << width) - 1
    coverage = [images[v] for v in range(1 << width)]
    universe = range(1 << width)
    for size in range(2, (1 << width) + 1):
        for subset in itertools.combinations(universe, size):
            union = 0
            for v in subset:
                union |= v
            if union != top:
                continue
            image_union = 0
            for v in subset:
                image_union |= coverage[v]
            if image_union != top:
                return subset
    return None


@lru_cache(maxsize=4096)
def is_in_omega(h: StateBijection) -> OmegaMembership:
    """Decide group membership: bijectivity is structural, fixing bottom/top
    is a table check, and the covering condition is checked over subsets in
    both directions (each direction yields one half of the biconditional)."""
    if h.width > OMEGA_MEMBERSHIP_MAX_WIDTH:
        raise CapabilityError(
            f"membership checking supports width <= {OMEGA_MEMBERSHIP_MAX_WIDTH}")
    if not h.fixes_bottom_and_top:
        return OmegaMembership(h, False)
    forward = tuple(x.value for x in h.forward)
    violation = _covering_violation(h.width, forward)
    if violation is not None:
        return OmegaMembership(
            h, False, frozenset(Bits(h.width, v) for v in violation))
    backward = tuple(x.value for x in h.inverse_forward)
    violation = _covering_violation(h.width, backward)
    if violation is not None:
        # Report in terms of h: the preimage set covers on the image side only.
        witness = frozenset(Bits(h.width, backward[v]) for v in violation)
        return OmegaMembership(h, False, witness)
    return OmegaMembership(h, True)


def enumerate_omega(width: int) -> list[StateBijection]:
    """All group members for tiny widths, ordered by their forward tables.

    Only bijections fixing bottom and top are candidates, so the middle
    layer's permutations are filtered through the membership test.
    """
    if width > OMEGA_ENUMERATION_MAX_WIDTH:
        raise CapabilityError(
            f"enumeration supports width <= {OMEGA_ENUMERATION_MAX_WIDTH}")
    top = (1 << width) - 1
    middle = list(range(1, top))
    members = []
    for perm in itertools.permutations(middle):
        forward = (0, *perm, top)
        h = StateBijection.from_ints(width, forward)
        if is_in_omega(h).verdict:
            members.append(h)
    return members


def map_sequence(h: StateBijection, alpha: LassoMaskSequence) -> LassoMaskSequence:
    """Apply a recoding elementwise to a lasso; progressiveness is preserved
    for group members and asserted."""
    if not is_in_omega(h).verdict:
        raise ValueError("mask recoding must be a group member")
    mapped = LassoMaskSequence(
        tuple(h.apply(nu) for nu in alpha.prefix),
        tuple(h.apply(nu) for nu in alpha.cycle),
    )
    if alpha.is_progressive:
        assert mapped.is_progressive, "group member broke progressiveness"
    return mapped


def map_progressive_function(h: StateBijection, rho: ProgressiveFunction) -> ProgressiveFunction:
    """Recode a schedule's masks; instants and period are untouched (zero
    masks map to zero, so the support structure is preserved)."""
    return ProgressiveFunction(map_sequence(h, rho.masks), rho.times, rho.period)
