"""Tests for chain-complex-valued local systems and the integral model structure."""

from fractions import Fraction

import pytest

from extlin.core import fingrpd, groups
from extlin.core.chaincx import ChainComplex, ChainMap, compose_cc, disk, homology, identity_cc, sphere, zero_cc_map
from extlin.core.dglocsys import (
    DgLocalSystem,
    DgLocMorphism,
    adjunct_dg,
    base_pushout,
    check_homotopical,
    classify,
    concentrated,
    constant_dg,
    covered_generating_cofibrations,
    external_pushout_product,
    external_tensor_dg,
    identity_dg,
    is_iso_dg,
    pushforward_dg,
    solve_lifting_dg,
)
from extlin.core.errors import ExtlinError, FunctorialityError, LiftingInputError, UnsupportedShapeError
from extlin.core.finvect import LinearMap, identity, scale_map
from extlin.core.locsys import regular_representation, unit_system

STAR = fingrpd.POINT


@pytest.fixture
def covered():
    return {gen.name: gen for gen in covered_generating_cofibrations([1])}


@pytest.fixture
def reg_z2():
    return concentrated(regular_representation(groups.cyclic(2)), 0)


class TestDgLocalSystem:
    """Tests for validation and degreewise views."""

    def test_missing_transport(self):
        x = fingrpd.codiscrete([0, 1])
        s = sphere(0)
        with pytest.raises(FunctorialityError) as info:
            DgLocalSystem(x, {0: s, 1: s}, {(0, 0): identity_cc(s), (1, 1): identity_cc(s)})
        assert info.value.location[0] == "transport"

    def test_non_functorial_transport(self):
        bz2 = fingrpd.delooping(groups.cyclic(2))
        s = sphere(0)
        twice = ChainMap(s, s, {0: scale_map(Fraction(2), identity(s.component(0)))})
        with pytest.raises(FunctorialityError) as info:
            DgLocalSystem(bz2, {STAR: s}, {0: identity_cc(s), 1: twice})
        assert info.value.location == ("transport", 1, 1)

    def test_degree_views(self, reg_z2):
        assert reg_z2.support == [0]
        assert reg_z2.degree(0).dims() == {STAR: 2}
        assert reg_z2.degree(1).total_dim() == 0

    def test_external_tensor_fibers(self, reg_z2):
        shifted = constant_dg(fingrpd.terminal(), sphere(1))
        product = external_tensor_dg(reg_z2, shifted)
        assert product.fiber((STAR, STAR)).dims() == {1: 2}


class TestPushforward:
    """Tests for degreewise pushforward and its adjunct."""

    def test_constant_disk_stays_acyclic(self):
        bz2 = fingrpd.delooping(groups.cyclic(2))
        pushed = pushforward_dg(fingrpd.terminal_functor(bz2), constant_dg(bz2, disk(1)))
        fiber = pushed.system.fiber(STAR)
        assert fiber.dims() == {0: 1, 1: 1}
        assert homology(fiber).is_zero()

    def test_adjunct_of_augmentation_is_iso(self, reg_z2):
        f = fingrpd.terminal_functor(reg_z2.base)
        point = concentrated(unit_system(f.target), 0)
        source_fiber = reg_z2.fiber(STAR)
        target_fiber = point.fiber(STAR)
        augmentation = LinearMap(source_fiber.component(0), target_fiber.component(0), ((Fraction(1), Fraction(1)),))
        phi = DgLocMorphism(reg_z2, point, f, {STAR: ChainMap(source_fiber, target_fiber, {0: augmentation})})
        assert is_iso_dg(adjunct_dg(phi))


class TestIntegralClasses:
    """Tests for weak equivalences, fibrations and cofibrations."""

    def test_identity_is_in_every_class(self, reg_z2):
        classes = classify(identity_dg(reg_z2))
        assert classes.weq and classes.fib and classes.cof

    @pytest.mark.parametrize(
        "name,weq",
        [("i_1", False), ("j_1", True), ("pt->interval", True), ("boundary->interval", False)],
    )
    def test_generators(self, covered, name, weq):
        gen = covered[name]
        classes = classify(gen.morphism)
        assert classes.cof
        assert classes.weq == weq == gen.acyclic

    def test_homotopical(self, covered):
        j = covered["j_1"].morphism
        assert check_homotopical(j, j)

    def test_homotopical_needs_weak_equivalences(self, covered):
        with pytest.raises(ExtlinError):
            check_homotopical(covered["i_1"].morphism, covered["j_1"].morphism)


class TestPushoutProduct:
    """Tests for the external pushout-product."""

    def test_acyclic_cofibration_with_cofibration(self, covered):
        pp = external_pushout_product(covered["j_1"].morphism, covered["i_1"].morphism)
        assert pp.base.regime == "right-identity"
        classes = classify(pp.morphism)
        assert classes.cof
        assert classes.weq

    def test_discrete_base(self):
        fold = fingrpd.terminal_functor(fingrpd.discrete([0, 1]))
        empty_to_point = {g.name: g.morphism for g in fingrpd.groupoid_generating_cofibrations()}["empty->pt"]
        base = base_pushout(fold, empty_to_point)
        assert base.regime == "discrete"
        assert len(base.groupoid.objects) == 2

    def test_unsupported_base(self):
        f = fingrpd.terminal_functor(fingrpd.delooping(groups.cyclic(2)))
        with pytest.raises(UnsupportedShapeError):
            base_pushout(f, f)


class TestLifting:
    """Tests for solve_lifting_dg."""

    def test_boundary_lifts_against_disk_to_zero(self, covered):
        i = covered["i_1"].morphism
        pt = fingrpd.terminal()
        ident = fingrpd.identity_functor(pt)
        d, zero = i.target.fiber(STAR), ChainComplex.zero()
        p = DgLocMorphism(constant_dg(pt, d), constant_dg(pt, zero), ident, {STAR: zero_cc_map(d, zero)})
        top = DgLocMorphism(i.source, p.source, ident, {STAR: i.component(STAR)})
        bottom = DgLocMorphism(i.target, p.target, ident, {STAR: zero_cc_map(d, zero)})
        h = solve_lifting_dg(i, p, top, bottom)
        assert h is not None
        assert compose_cc(h.component(STAR), i.component(STAR)) == i.component(STAR)

    def test_square_must_commute(self, covered):
        i = covered["i_1"].morphism
        pt = fingrpd.terminal()
        ident = fingrpd.identity_functor(pt)
        s = i.source.fiber(STAR)
        with pytest.raises(LiftingInputError):
            solve_lifting_dg(
                i,
                identity_dg(i.source),
                identity_dg(i.source),
                DgLocMorphism(i.target, i.source, ident, {STAR: zero_cc_map(i.target.fiber(STAR), s)}),
            )
