"""Tests for colimits of local systems and the decompositions built on them."""

from fractions import Fraction

import pytest

from extlin.core import fingrpd, groups
from extlin.core.colimits import (
    BGDiagram,
    borel_comparison,
    borel_diagram,
    colimit_tensor_comparison,
    loc_colimit,
    quotient_isomorphism,
    skeletal_decomposition,
)
from extlin.core.errors import NaturalityError, UnsupportedShapeError
from extlin.core.finvect import VectorSpace, identity, scale_map
from extlin.core.locsys import (
    LocMorphism,
    bundle_over_set,
    character_representation,
    constant_system,
    identity_loc,
    is_invertible_loc,
    regular_representation,
    same_components,
    unit_system,
)


@pytest.fixture
def z2():
    return groups.cyclic(2)


def constant_diagram(group, scalar):
    """``EG · K`` where every group element acts by ``scalar``."""
    eg = fingrpd.e_groupoid(group)
    system = unit_system(eg.groupoid)
    action = fingrpd.eg_right_action(eg, group)
    morphisms = {
        g: LocMorphism(
            system,
            system,
            action.functor(g),
            {x: scale_map(Fraction(scalar), identity(system.fiber(x))) for x in eg.groupoid.objects},
        )
        for g in group.elements
    }
    return BGDiagram(group, system, action, morphisms)


class TestDiscreteColimits:
    """Tests for colimits over discrete shapes."""

    def test_is_coproduct(self):
        a = constant_system(fingrpd.codiscrete([0, 1]), VectorSpace.of_dim(2))
        b = unit_system(fingrpd.terminal())
        colim = loc_colimit([a, b])
        assert colim.shape == "discrete"
        assert colim.system.total_dim() == 5
        assert len(colim.cocone) == 2

    def test_induced_from_coprojections(self):
        a = unit_system(fingrpd.terminal())
        colim = loc_colimit([a, a])
        induced = colim.induced(colim.cocone)
        assert induced == identity_loc(colim.system)

    def test_unsupported_shape(self):
        with pytest.raises(UnsupportedShapeError):
            loc_colimit("pushout")


class TestBGColimits:
    """Tests for colimits of group actions."""

    def test_borel_colimit_recovers_representation(self, z2):
        rho = regular_representation(z2)
        colim = loc_colimit(borel_diagram(z2, rho))
        assert colim.shape == "BG"
        assert colim.system.dims() == {0: 2}
        assert is_invertible_loc(borel_comparison(colim, z2, rho))

    def test_borel_for_sign(self):
        s3 = groups.symmetric(3)
        sign = character_representation(s3, groups.sign_character(s3))
        colim = loc_colimit(borel_diagram(s3, sign))
        assert colim.system.total_dim() == 1
        assert is_invertible_loc(borel_comparison(colim, s3, sign))

    def test_cocone_induces_identity(self, z2):
        colim = loc_colimit(borel_diagram(z2, regular_representation(z2)))
        induced = colim.induced(colim.cocone)
        assert same_components(induced, identity_loc(colim.system))

    def test_tensor_comparison(self, z2):
        diagram = borel_diagram(z2, regular_representation(z2))
        w = bundle_over_set(["a", "b"], {"a": VectorSpace.of_dim(1, "u"), "b": VectorSpace.of_dim(2, "w")})
        assert is_invertible_loc(colimit_tensor_comparison(diagram, w))

    def test_unit_must_act_trivially(self, z2):
        with pytest.raises(NaturalityError) as info:
            constant_diagram(z2, 2)
        assert info.value.location == ("morphisms", 0)

    def test_trivial_action(self, z2):
        colim = loc_colimit(constant_diagram(z2, 1))
        assert colim.system.dims() == {0: 1}

    def test_non_free_action_rejected(self, z2):
        pt = fingrpd.terminal()
        action = fingrpd.GroupAction(
            z2,
            pt,
            {(g, fingrpd.POINT): fingrpd.POINT for g in z2.elements},
            {(g, m): m for g in z2.elements for m in pt.morphisms},
        )
        system = unit_system(pt)
        morphisms = {
            g: LocMorphism(system, system, action.functor(g), identity_loc(system).components)
            for g in z2.elements
        }
        with pytest.raises(UnsupportedShapeError):
            loc_colimit(BGDiagram(z2, system, action, morphisms))


class TestDecompositions:
    """Tests for skeletal decompositions and balanced products."""

    def test_skeletal_decomposition(self):
        z2 = groups.cyclic(2)
        acted = fingrpd.action_groupoid(z2, [0, 1, 2], lambda g, w: w ^ g if w < 2 else w)
        system = constant_system(acted.groupoid, VectorSpace.of_dim(2))
        dec = skeletal_decomposition(system)
        assert len(dec.representations) == 2
        assert [rep.total_dim() for rep in dec.representations] == [2, 2]
        assert is_invertible_loc(dec.iso)

    @pytest.mark.parametrize("generator", [(1, 0, 2), (1, 2, 0)])
    def test_quotient_isomorphism(self, generator):
        s3 = groups.symmetric(3)
        members = groups.generated_subgroup(s3, [generator])
        sub = groups.subgroup(s3, members)
        rho = regular_representation(sub)
        iso = quotient_isomorphism(s3, members, rho)
        assert len(iso.cosets) == 6 // len(members)
        assert iso.round_trips()
