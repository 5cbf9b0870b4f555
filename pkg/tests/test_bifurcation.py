"""Families, structural stability, diagrams, family equivalence."""

from __future__ import annotations

import pytest

from boolsys.core import Bits, TruthTable
from boolsys.bifurcation import (
    ParamFamily,
    bifurcation_diagram,
    families_equivalent,
    family_structurally_stable,
    fixed_point_diagram,
)
from boolsys.conjugacy import check_conjugacy
from boolsys.omega import StateBijection
from conftest import DEMO2, CONJ_PHI, CONJ_PSI, b

IDENT1 = TruthTable.identity(1)
NOT1 = TruthTable.complement(1)

ID_NOT = ParamFamily.of([IDENT1, NOT1])            # bifurcating, with fixed points
CONST_DEMO = ParamFamily.of([DEMO2, DEMO2])        # stable by duplication
CONJ_FAMILY = ParamFamily.of([CONJ_PHI, CONJ_PSI])  # stable by conjugacy
# Bifurcating family with no fixed points anywhere: the complement map is not
# conjugate to a four-cycle (their full-update permutation orders differ).
NO_FP_BIF = ParamFamily.of([TruthTable.complement(2), CONJ_PHI])


class TestParamFamily:
    def test_member_lookup(self):
        assert ID_NOT.member(Bits(1, 0)) == IDENT1
        assert ID_NOT.member(Bits(1, 1)) == NOT1

    def test_member_count_enforced(self):
        with pytest.raises(ValueError):
            ParamFamily(1, 1, (IDENT1,))

    def test_width_consistency_enforced(self):
        with pytest.raises(ValueError):
            ParamFamily(1, 1, (IDENT1, DEMO2))


class TestStructuralStability:
    def test_duplicated_table_stable(self):
        assert family_structurally_stable(CONST_DEMO)

    def test_identity_negation_bifurcates(self):
        assert not family_structurally_stable(ID_NOT)

    def test_conjugate_pair_stable(self):
        assert family_structurally_stable(CONJ_FAMILY)

    def test_fixed_point_free_bifurcation(self):
        assert not family_structurally_stable(NO_FP_BIF)


class TestBifurcationDiagram:
    def test_identity_negation_two_classes(self):
        diagram = bifurcation_diagram(ID_NOT)
        assert diagram.classes == ((Bits(1, 0),), (Bits(1, 1),))
        assert diagram.representatives == (Bits(1, 0), Bits(1, 1))
        assert len(diagram.portraits) == 2
        assert diagram.exhausted == {(Bits(1, 0), Bits(1, 1))}

    def test_constant_family_one_class(self):
        diagram = bifurcation_diagram(CONST_DEMO)
        assert diagram.class_count == 1
        assert diagram.classes == ((Bits(1, 0), Bits(1, 1)),)

    def test_four_member_two_classes_of_two(self):
        family = ParamFamily.of([IDENT1, NOT1, IDENT1, NOT1], param_width=2)
        diagram = bifurcation_diagram(family)
        assert [len(c) for c in diagram.classes] == [2, 2]
        assert diagram.class_of(Bits(2, 0)) == diagram.class_of(Bits(2, 2))
        assert diagram.class_of(Bits(2, 1)) == diagram.class_of(Bits(2, 3))

    def test_stored_witnesses_reverify(self):
        family = ParamFamily.of([CONJ_PHI, CONJ_PSI, CONJ_PHI, CONJ_PSI], param_width=2)
        diagram = bifurcation_diagram(family)
        assert diagram.class_count == 1
        assert len(diagram.witnesses) == 6  # all pairs within the single class
        for (lam_a, lam_b), w in diagram.witnesses.items():
            verdict = check_conjugacy(family.member(lam_a), family.member(lam_b), w)
            assert verdict.equivalent

    def test_stable_iff_one_class(self):
        for family in (ID_NOT, CONST_DEMO, CONJ_FAMILY, NO_FP_BIF):
            assert family_structurally_stable(family) == (
                bifurcation_diagram(family).class_count == 1)

    def test_representative_portraits_match_members(self):
        from boolsys.graph import export_portrait

        diagram = bifurcation_diagram(ID_NOT)
        assert diagram.portraits[0] == export_portrait(IDENT1)
        assert diagram.portraits[1] == export_portrait(NOT1)


class TestFixedPointDiagram:
    def test_identity_negation_entries(self):
        diagram = fixed_point_diagram(ID_NOT)
        assert diagram.as_dict() == {
            Bits(1, 0): (Bits(1, 0), Bits(1, 1)),
            Bits(1, 1): (),
        }
        assert diagram.uninformative is False

    def test_constant_demo_entries(self):
        diagram = fixed_point_diagram(CONST_DEMO)
        assert diagram.as_dict() == {
            Bits(1, 0): (b("00"), b("11")),
            Bits(1, 1): (b("00"), b("11")),
        }

    def test_fixed_point_free_bifurcation_flagged(self):
        diagram = fixed_point_diagram(NO_FP_BIF)
        assert all(not fps for _, fps in diagram.entries)
        assert diagram.uninformative is True

    def test_all_negation_family_flagged_stable(self):
        # No fixed points, but no bifurcation either: table empty yet honest.
        family = ParamFamily.of([NOT1, NOT1])
        diagram = fixed_point_diagram(family)
        assert all(not fps for _, fps in diagram.entries)
        assert diagram.uninformative is False


class TestFamiliesEquivalent:
    def test_family_vs_itself(self):
        got = families_equivalent(ID_NOT, ID_NOT)
        assert got == StateBijection.identity(1)

    def test_relabelled_family(self):
        swapped = ParamFamily.of([NOT1, IDENT1])
        got = families_equivalent(ID_NOT, swapped)
        assert got == StateBijection.from_ints(1, (1, 0))

    def test_mismatched_class_structure(self):
        all_not = ParamFamily.of([NOT1, NOT1])
        assert families_equivalent(ID_NOT, all_not) is None

    def test_symmetry(self):
        swapped = ParamFamily.of([NOT1, IDENT1])
        fwd = families_equivalent(ID_NOT, swapped)
        back = families_equivalent(swapped, ID_NOT)
        assert fwd is not None and back is not None
        # The returned relabellings invert each other here.
        assert [x.value for x in back.forward] == [1, 0]

    def test_width_checks(self):
        with pytest.raises(ValueError):
            families_equivalent(ID_NOT, CONST_DEMO)


class TestWidth3Families:
    def test_relabelled_members_are_one_class(self):
        import random

        from test_conjugacy import coordinate_permutation
        from boolsys.conjugacy import recode

        rng = random.Random(66)
        phi = TruthTable.from_ints(3, [rng.randrange(8) for _ in range(8)])
        h = coordinate_permutation(3, (2, 3, 1))
        family = ParamFamily.of([phi, recode(phi, h)])
        assert family_structurally_stable(family)

    def test_identity_vs_rotation_bifurcates(self):
        ident = TruthTable.identity(3)
        rotate = TruthTable.from_ints(3, [(v + 1) % 8 for v in range(8)])
        family = ParamFamily.of([ident, rotate])
        diagram = bifurcation_diagram(family)
        assert diagram.class_count == 2
