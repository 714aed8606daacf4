"""Tests for local systems, base change and external tensor products."""

from fractions import Fraction

import pytest

from extlin.core import fingrpd, groups
from extlin.core.errors import (
    CompositionError,
    FunctorialityError,
    NaturalityError,
    UnsupportedBaseError,
    UnsupportedShapeError,
)
from extlin.core.finvect import LinearMap, VectorSpace, compose, identity
from extlin.core.locsys import (
    LocalSystem,
    LocMorphism,
    adjunct,
    ambidexterity_witness,
    beck_chevalley_witness,
    bundle_over_set,
    character_representation,
    compose_loc,
    constant_system,
    distributivity_comparison,
    external_hom,
    external_hom_adjunction,
    external_tensor,
    external_tensor_reconstruction,
    frobenius_witnesses,
    identity_loc,
    internal_hom_loc,
    inverse_loc,
    is_invertible_loc,
    morphism_space,
    product_iso_delooping,
    pullback,
    push_external_comparison,
    pull_external_comparison,
    pushforward,
    pushforward_skeletal_comparison,
    regular_representation,
    representation,
    restrict_to_components,
    sections,
    sections_skeletal_comparison,
    tensor_loc,
    tensor_representation,
    unadjunct,
    unit_system,
)

STAR = fingrpd.POINT


def line(c, label="v") -> LinearMap:
    v = VectorSpace((label,))
    return LinearMap(v, v, ((Fraction(c),),))


@pytest.fixture
def s3():
    return groups.symmetric(3)


@pytest.fixture
def z2():
    return groups.cyclic(2)


@pytest.fixture
def sign(s3):
    return character_representation(s3, groups.sign_character(s3), name="sign")


class TestLocalSystem:
    """Tests for construction-time validation."""

    def test_regular_representation(self, s3):
        reg = regular_representation(s3)
        assert reg.dims() == {STAR: 6}
        assert reg.along(s3.unit) == identity(reg.fiber(STAR))

    def test_non_functorial_transport(self, z2):
        with pytest.raises(FunctorialityError) as info:
            representation(z2, VectorSpace(("v",)), {0: line(1), 1: line(2)})
        assert info.value.location == ("transport", 1, 1)

    def test_missing_transport(self, z2):
        with pytest.raises(FunctorialityError) as info:
            representation(z2, VectorSpace(("v",)), {0: line(1)})
        assert info.value.location == ("transport", 1)

    def test_missing_fiber(self):
        base = fingrpd.discrete([0, 1])
        with pytest.raises(FunctorialityError):
            LocalSystem(base, {0: VectorSpace.zero()}, {})

    def test_structural_equality(self, s3):
        assert regular_representation(s3) == regular_representation(s3)

    def test_naturality_is_checked(self, z2):
        reg = regular_representation(z2)
        swap = LinearMap(reg.fiber(STAR), reg.fiber(STAR), ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(2))))
        with pytest.raises(NaturalityError):
            LocMorphism(reg, reg, fingrpd.identity_functor(reg.base), {STAR: swap})

    def test_inverse_loc(self, z2):
        reg = regular_representation(z2)
        twice = LocMorphism(
            reg,
            reg,
            fingrpd.identity_functor(reg.base),
            {STAR: LinearMap(reg.fiber(STAR), reg.fiber(STAR), ((Fraction(2), Fraction(0)), (Fraction(0), Fraction(2))))},
        )
        assert compose_loc(inverse_loc(twice), twice) == identity_loc(reg)


class TestPullback:
    """Tests for precomposition."""

    def test_pullback_to_point_is_restriction(self, s3):
        reg = regular_representation(s3)
        pick = fingrpd.point_functor(reg.base, STAR)
        pulled = pullback(pick, reg)
        assert pulled.dims() == {STAR: 6}

    def test_pullback_requires_matching_base(self, s3, z2):
        with pytest.raises(CompositionError):
            pullback(fingrpd.terminal_functor(fingrpd.delooping(z2)), regular_representation(s3))


class TestKanExtensions:
    """Tests for pushforward and sections by coends and ends."""

    def test_coinvariants_of_regular(self, s3):
        reg = regular_representation(s3)
        p = fingrpd.terminal_functor(reg.base)
        assert pushforward(p, reg).system.dims() == {STAR: 1}
        assert sections(p, reg).system.dims() == {STAR: 1}

    def test_sign_has_no_invariants(self, s3, sign):
        p = fingrpd.terminal_functor(sign.base)
        assert pushforward(p, sign).system.total_dim() == 0
        assert sections(p, sign).system.total_dim() == 0

    def test_induction_from_point(self, s3):
        bg = fingrpd.delooping(s3)
        pick = fingrpd.point_functor(bg, STAR)
        induced = pushforward(pick, unit_system(pick.source)).system
        assert induced.dims() == {STAR: 6}

    def test_pushforward_along_eg_quotient(self, s3):
        eg = fingrpd.e_groupoid(s3)
        pushed = pushforward(eg.quotient, unit_system(eg.groupoid)).system
        assert pushed.dims() == {STAR: 6}

    def test_adjunct_round_trip(self, z2):
        reg = regular_representation(z2)
        pf = pushforward(fingrpd.terminal_functor(reg.base), reg)
        psi = identity_loc(pf.system)
        assert adjunct(unadjunct(pf, psi), pf) == psi

    def test_unit_is_natural(self, s3):
        reg = regular_representation(s3)
        pf = pushforward(fingrpd.terminal_functor(reg.base), reg)
        assert pf.unit.target == pullback(pf.functor, pf.system)

    def test_skeletal_comparisons_invertible(self, s3):
        eg = fingrpd.e_groupoid(s3)
        system = unit_system(eg.groupoid)
        assert is_invertible_loc(pushforward_skeletal_comparison(eg.quotient, system))
        assert is_invertible_loc(sections_skeletal_comparison(eg.quotient, system))

    def test_wrong_base(self, s3, z2):
        with pytest.raises(CompositionError):
            pushforward(fingrpd.terminal_functor(fingrpd.delooping(z2)), regular_representation(s3))


class TestAmbidexterity:
    """Tests for the norm map over finite sets."""

    def test_norm_is_invertible(self):
        bundle = bundle_over_set([0, 1], {0: VectorSpace.of_dim(1, "a"), 1: VectorSpace.of_dim(2, "b")})
        witness = ambidexterity_witness(bundle)
        assert is_invertible_loc(witness.norm)
        assert compose_loc(witness.inverse, witness.norm) == identity_loc(witness.norm.source)

    def test_requires_discrete_base(self, z2):
        with pytest.raises(UnsupportedBaseError):
            ambidexterity_witness(regular_representation(z2))


class TestExternalTensor:
    """Tests for the external tensor product."""

    def test_fiber_dimensions(self):
        v = bundle_over_set([0, 1], {0: VectorSpace.of_dim(1, "a"), 1: VectorSpace.of_dim(2, "b")})
        w = bundle_over_set(["a"], {"a": VectorSpace.of_dim(3, "c")})
        assert external_tensor(v, w).dims() == {(0, "a"): 3, (1, "a"): 6}

    def test_reconstruction_over_sets(self):
        v = bundle_over_set([0, 1], {0: VectorSpace.of_dim(1, "a"), 1: VectorSpace.of_dim(2, "b")})
        w = bundle_over_set(["x", "y"], {"x": VectorSpace.of_dim(2, "c"), "y": VectorSpace.zero()})
        assert is_invertible_loc(external_tensor_reconstruction(v, w))

    def test_matches_tensor_representation(self, z2, sign, s3):
        reg = regular_representation(z2)
        pulled = pullback(product_iso_delooping(z2, s3), tensor_representation(reg, sign, z2, s3))
        assert pulled == external_tensor(reg, sign)

    @pytest.mark.parametrize("side", ["right", "left"])
    def test_distributes_over_coproducts(self, z2, side):
        v = regular_representation(z2)
        ws = [unit_system(fingrpd.codiscrete([0, 1])), constant_system(fingrpd.terminal(), VectorSpace.of_dim(2))]
        assert is_invertible_loc(distributivity_comparison(v, ws, side=side))

    def test_push_comparison_invertible(self, z2, s3):
        f = fingrpd.terminal_functor(fingrpd.delooping(z2))
        g = fingrpd.terminal_functor(fingrpd.delooping(s3))
        comparison = push_external_comparison(f, g, regular_representation(z2), regular_representation(s3))
        assert comparison.target.dims() == {(STAR, STAR): 1}
        assert is_invertible_loc(comparison)

    def test_pull_comparison_is_identity(self, z2, s3):
        f = fingrpd.point_functor(fingrpd.delooping(z2), STAR)
        g = fingrpd.point_functor(fingrpd.delooping(s3), STAR)
        comparison = pull_external_comparison(f, g, regular_representation(z2), regular_representation(s3))
        assert comparison.source == comparison.target


class TestFiberwiseStructure:
    """Tests for the fiberwise tensor, hom and the projection formula."""

    def test_tensor_and_hom_dims(self, s3, sign):
        reg = regular_representation(s3)
        assert tensor_loc(reg, sign).dims() == {STAR: 6}
        assert internal_hom_loc(sign, reg).dims() == {STAR: 6}

    def test_tensor_requires_common_base(self, z2, sign):
        with pytest.raises(CompositionError):
            tensor_loc(regular_representation(z2), sign)

    def test_frobenius(self, z2):
        bz2 = fingrpd.delooping(z2)
        f = fingrpd.terminal_functor(bz2)
        pt = f.target
        v = constant_system(pt, VectorSpace.of_dim(2, "v"))
        w = unit_system(pt)
        witnesses = frobenius_witnesses(f, v, w, regular_representation(z2))
        assert witnesses.all_invertible()

    def test_beck_chevalley_product(self, z2):
        reg = regular_representation(z2)
        witness = beck_chevalley_witness(
            "product", fingrpd.terminal_functor(reg.base), reg, other=fingrpd.codiscrete([0, 1])
        )
        assert witness.is_invertible()

    def test_beck_chevalley_unsupported_shape(self, z2):
        reg = regular_representation(z2)
        with pytest.raises(UnsupportedShapeError):
            beck_chevalley_witness("pushout", fingrpd.terminal_functor(reg.base), reg)

    def test_components(self):
        x = fingrpd.coproduct([fingrpd.codiscrete([0, 1]), fingrpd.terminal()]).groupoid
        system = constant_system(x, VectorSpace.of_dim(2))
        decomposition = restrict_to_components(system)
        assert len(decomposition.pieces) == 2
        assert is_invertible_loc(decomposition.comparison)


class TestExternalHom:
    """Tests for the external hom and its adjunction."""

    def test_requires_discrete_base(self, z2):
        reg = regular_representation(z2)
        with pytest.raises(UnsupportedBaseError):
            external_hom(reg, reg)

    def test_fiber_is_sum_of_homs(self, z2):
        r = bundle_over_set([0, 1], {0: VectorSpace.of_dim(1, "a"), 1: VectorSpace.of_dim(2, "b")})
        system, exp = external_hom(r, regular_representation(z2))
        assert system.dims() == {(STAR, STAR): 6}
        assert set(exp.evaluations) == {0, 1}

    def test_morphism_space_of_regular(self, z2, s3, sign):
        reg = regular_representation(z2)
        assert morphism_space(reg, reg, fingrpd.identity_functor(reg.base)).space.dim == 2
        trivial = unit_system(sign.base)
        assert morphism_space(trivial, sign, fingrpd.identity_functor(sign.base)).space.dim == 0

    def test_curry_uncurry_inverse(self, z2):
        v = regular_representation(z2)
        r = bundle_over_set([0], {0: VectorSpace.of_dim(1, "r")})
        w = regular_representation(z2)
        functor = fingrpd.product(v.base, r.base).projections[0]
        curry, uncurry = external_hom_adjunction(v, r, w, functor)
        assert curry.domain.dim == 2
        assert compose(uncurry, curry) == identity(curry.domain)
        assert compose(curry, uncurry) == identity(curry.codomain)
