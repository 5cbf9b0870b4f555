"""Parameterized families: structural stability, bifurcations, diagrams.

A family indexes one generator function per Boolean parameter vector.  The
family is structurally stable when all its slices are pairwise equivalent;
an inequivalent pair is a dynamic bifurcation.  Two diagram notions coexist
deliberately: the partition of parameter space into equivalence classes with
representative portraits, and the fixed-points-per-parameter table.  The
second is known to go blind on families that bifurcate without any fixed
points, and that condition is surfaced rather than reconciled.

Equivalence is an equivalence relation (witnesses compose and invert), which
justifies building the partition incrementally: each new slice is searched
against the existing class representatives only; witnesses for other
within-class pairs are composed along the representative and re-verified.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .core import Bits, CapabilityError, State, TruthTable, fixed_points
from .conjugacy import (
    ConjugacyWitness,
    EquivalenceVerdict,
    check_conjugacy,
    compose_witnesses,
    find_equivalence,
    invert_witness,
)
from .graph import export_portrait
from .omega import StateBijection

FAMILY_SEARCH_MAX_WIDTH = 3
PARAM_MAX_WIDTH = 3


@dataclass(frozen=True)
class ParamFamily:
    """2^m generator functions of one width, indexed by the parameter's
    integer encoding."""

    state_width: int
    param_width: int
    tables: tuple[TruthTable, ...]

    def __post_init__(self):
        if not 1 <= self.param_width <= 16:
            raise ValueError(f"parameter width must be in 1..16, got {self.param_width}")
        if len(self.tables) != 1 << self.param_width:
            raise ValueError(
                f"need {1 << self.param_width} member tables, got {len(self.tables)}")
        for table in self.tables:
            if table.width != self.state_width:
                raise ValueError("member table width differs from the family's state width")

    @classmethod
    def of(cls, tables, param_width: Optional[int] = None) -> "ParamFamily":
        tables = tuple(tables)
        if param_width is None:
            param_width = max(1, (len(tables) - 1).bit_length())
        return cls(tables[0].width, param_width, tables)

    def member(self, lam: Bits) -> TruthTable:
        if lam.width != self.param_width:
            raise ValueError(f"parameter width {lam.width}, expected {self.param_width}")
        return self.tables[lam.value]

    def lambdas(self):
        return (Bits(self.param_width, v) for v in range(1 << self.param_width))


@dataclass(frozen=True)
class BifurcationDiagram:
    """Partition of parameter space by system equivalence.

    classes are ordered by their smallest member; the representative is that
    member.  Every within-class pair carries a verified witness and every
    pair of class representatives carries an exhausted-search certificate.
    """

    classes: tuple[tuple[Bits, ...], ...]
    representatives: tuple[Bits, ...]
    portraits: tuple[str, ...]
    witnesses: dict[tuple[Bits, Bits], ConjugacyWitness]
    exhausted: frozenset[tuple[Bits, Bits]]

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def class_of(self, lam: Bits) -> int:
        for idx, members in enumerate(self.classes):
            if lam in members:
                return idx
        raise KeyError(lam)


def _check_capability(family: ParamFamily):
    if family.state_width > FAMILY_SEARCH_MAX_WIDTH:
        raise CapabilityError(
            f"family equivalence analysis supports state width <= {FAMILY_SEARCH_MAX_WIDTH}")


def bifurcation_diagram(
    family: ParamFamily,
    precomputed: Optional[dict[tuple[TruthTable, TruthTable], "EquivalenceVerdict"]] = None,
) -> BifurcationDiagram:
    """Group the parameter values by equivalence of their systems.

    Parameters are processed in encoding order; each one is searched against
    existing class representatives in order, so the output is deterministic.
    precomputed may carry find_equivalence results for table pairs (computed
    in parallel elsewhere); missing pairs are searched here.
    """
    _check_capability(family)
    precomputed = precomputed or {}

    def search(table_a: TruthTable, table_b: TruthTable):
        hit = precomputed.get((table_a, table_b))
        return hit if hit is not None else find_equivalence(table_a, table_b)

    class_members: list[list[Bits]] = []
    reps: list[Bits] = []
    to_rep: dict[Bits, ConjugacyWitness] = {}  # witness carrying rep's table to lam's
    witnesses: dict[tuple[Bits, Bits], ConjugacyWitness] = {}
    exhausted: set[tuple[Bits, Bits]] = set()
    for lam in family.lambdas():
        placed = False
        for idx, rep in enumerate(reps):
            verdict = search(family.member(rep), family.member(lam))
            if verdict.equivalent:
                class_members[idx].append(lam)
                to_rep[lam] = verdict.witness
                placed = True
                break
            exhausted.add((rep, lam))
        if not placed:
            class_members.append([lam])
            reps.append(lam)
            to_rep[lam] = _identity_witness(family.state_width)
    for members in class_members:
        for lam_a, lam_b in itertools.combinations(members, 2):
            w = compose_witnesses(to_rep[lam_b], invert_witness(to_rep[lam_a]))
            verdict = check_conjugacy(family.member(lam_a), family.member(lam_b), w)
            assert verdict.equivalent, "composed witness failed re-verification"
            witnesses[(lam_a, lam_b)] = w
    portraits = tuple(export_portrait(family.member(rep)) for rep in reps)
    return BifurcationDiagram(
        classes=tuple(tuple(m) for m in class_members),
        representatives=tuple(reps),
        portraits=portraits,
        witnesses=witnesses,
        exhausted=frozenset(exhausted),
    )


def _identity_witness(width: int) -> ConjugacyWitness:
    ident = StateBijection.identity(width)
    return ConjugacyWitness(ident, ident)


def family_structurally_stable(family: ParamFamily) -> bool:
    """All parameter slices pairwise equivalent; False means the family has a
    dynamic bifurcation."""
    return bifurcation_diagram(family).class_count == 1


@dataclass(frozen=True)
class FixedPointDiagram:
    """Fixed points per parameter value.

    uninformative is set when the family bifurcates but no member has any
    fixed point: the table then shows nothing although the dynamics change.
    It is None when the family is too wide for the equivalence analysis.
    """

    entries: tuple[tuple[Bits, tuple[State, ...]], ...]
    uninformative: Optional[bool]

    def as_dict(self) -> dict[Bits, tuple[State, ...]]:
        return dict(self.entries)


def fixed_point_diagram(family: ParamFamily) -> FixedPointDiagram:
    entries = tuple(
        (lam, tuple(sorted(fixed_points(family.member(lam)))))
        for lam in family.lambdas()
    )
    uninformative: Optional[bool] = False
    if all(not fps for _, fps in entries):
        if family.state_width <= FAMILY_SEARCH_MAX_WIDTH:
            uninformative = not family_structurally_stable(family)
        else:
            uninformative = None
    return FixedPointDiagram(entries, uninformative)


def families_equivalent(f: ParamFamily, g: ParamFamily) -> Optional[StateBijection]:
    """Search for a parameter relabelling h'' making each slice of f
    equivalent to the matching slice of g; None when the search exhausts.

    Pruned by comparing the class-size multisets of the two diagrams: a
    relabelling must carry equivalence classes onto equivalence classes.
    """
    if (f.state_width, f.param_width) != (g.state_width, g.param_width):
        raise ValueError("families must share state and parameter widths")
    _check_capability(f)
    if f.param_width > PARAM_MAX_WIDTH:
        raise CapabilityError(
            f"parameter relabelling search supports width <= {PARAM_MAX_WIDTH}")
    diagram_f = bifurcation_diagram(f)
    diagram_g = bifurcation_diagram(g)
    sizes_f = sorted(len(c) for c in diagram_f.classes)
    sizes_g = sorted(len(c) for c in diagram_g.classes)
    if sizes_f != sizes_g:
        return None
    pair_ok: dict[tuple[int, int], bool] = {}

    def slices_equivalent(i: int, j: int) -> bool:
        if (i, j) not in pair_ok:
            pair_ok[(i, j)] = find_equivalence(f.tables[i], g.tables[j]).equivalent
        return pair_ok[(i, j)]

    size = 1 << f.param_width
    for perm in itertools.permutations(range(size)):
        if all(slices_equivalent(i, perm[i]) for i in range(size)):
            return StateBijection.from_ints(f.param_width, perm)
    return None
