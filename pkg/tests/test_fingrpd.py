"""Tests for finite groupoids and functors."""

import pytest

from extlin.core import groups
from extlin.core.errors import (
    ActionLawError,
    CompositionError,
    FunctorialityError,
    GroupoidLawError,
    NaturalityError,
    UnsupportedExponentError,
    UnsupportedQuotientError,
)
from extlin.core.fingrpd import (
    POINT,
    FinGroupoid,
    GroupAction,
    GroupoidFunctor,
    NaturalTransformation,
    SetMap,
    action_groupoid,
    codiscrete,
    compose_functors,
    connected_components,
    connected_decomposition,
    coproduct,
    curry_functor,
    delooping,
    discrete,
    e_groupoid,
    eg_right_action,
    empty,
    exponential,
    groupoid_generating_cofibrations,
    homomorphism_functor,
    identity_functor,
    inverse_functor,
    is_acyclic_cofibration,
    is_cofibration,
    is_equivalence,
    is_isofibration,
    is_isomorphism,
    lift_functor,
    orbit_groupoid,
    point_functor,
    product,
    set_pushout_product,
    skeletize,
    terminal,
    terminal_functor,
)


@pytest.fixture
def bs3():
    return delooping(groups.symmetric(3))


@pytest.fixture
def generators():
    return {g.name: g.morphism for g in groupoid_generating_cofibrations()}


class TestFinGroupoid:
    """Tests for groupoid construction and validation."""

    def test_delooping(self, bs3):
        assert bs3.objects == (POINT,)
        assert len(bs3.morphisms) == 6
        assert bs3.identity(POINT) == (0, 1, 2)
        assert bs3.inverse((1, 2, 0)) == (2, 0, 1)

    def test_codiscrete_homs(self):
        x = codiscrete(["a", "b"])
        assert x.hom("a", "b") == [("a", "b")]
        assert x.compose(("b", "a"), ("a", "b")) == ("a", "a")

    def test_compose_all(self):
        x = codiscrete([0, 1, 2])
        assert x.compose_all((1, 2), (0, 1), (2, 0)) == (2, 2)

    def test_not_composable(self):
        x = codiscrete(["a", "b"])
        with pytest.raises(CompositionError):
            x.compose(("a", "b"), ("a", "b"))

    def test_missing_identity(self):
        with pytest.raises(GroupoidLawError) as info:
            FinGroupoid(["x"], [("f", "x", "x")], {}, {("f", "f"): "f"})
        assert info.value.location == ("identities", "x")

    def test_missing_composite(self):
        with pytest.raises(GroupoidLawError) as info:
            FinGroupoid(
                ["x"],
                [("e", "x", "x"), ("a", "x", "x")],
                {"x": "e"},
                {("e", "e"): "e", ("e", "a"): "a", ("a", "e"): "a"},
            )
        assert info.value.location == ("compose", "a", "a")

    def test_non_invertible_morphism(self):
        # A monoid {e, z} with z·z = z is a category but not a groupoid.
        with pytest.raises(GroupoidLawError):
            FinGroupoid(
                ["x"],
                [("e", "x", "x"), ("z", "x", "x")],
                {"x": "e"},
                {("e", "e"): "e", ("e", "z"): "z", ("z", "e"): "z", ("z", "z"): "z"},
            )

    def test_structural_equality(self):
        assert codiscrete([0, 1]) == codiscrete([0, 1])
        assert codiscrete([0, 1]) != discrete([0, 1])

    def test_empty(self):
        assert empty().objects == ()
        assert connected_components(empty()) == []


class TestActionGroupoid:
    """Tests for action groupoids and EG."""

    def test_morphisms_are_group_point_pairs(self):
        z2 = groups.cyclic(2)
        acted = action_groupoid(z2, ["u", "v"], lambda g, w: w if g == 0 else {"u": "v", "v": "u"}[w])
        x = acted.groupoid
        assert x.src[(1, "u")] == "u"
        assert x.dst[(1, "u")] == "v"
        assert x.compose((1, "v"), (1, "u")) == (0, "u")
        assert acted.projection.mor((1, "u")) == 1

    def test_action_law_failure(self):
        z3 = groups.cyclic(3)
        with pytest.raises(ActionLawError):
            action_groupoid(z3, [0, 1], lambda g, w: (w + g) % 2)

    def test_action_leaving_the_set(self):
        with pytest.raises(ActionLawError) as info:
            action_groupoid(groups.cyclic(2), [0], lambda g, w: g)
        assert info.value.location == ("action", 1, 0)

    def test_eg_is_codiscrete(self):
        eg = e_groupoid(groups.symmetric(3))
        assert is_isomorphism(eg.to_codiscrete)
        assert len(eg.groupoid.hom((0, 1, 2), (1, 0, 2))) == 1
        assert eg.quotient.target == delooping(groups.symmetric(3))


class TestFunctors:
    """Tests for functor validation and composition."""

    def test_homomorphism_accepted(self):
        z4, z2 = groups.cyclic(4), groups.cyclic(2)
        f = homomorphism_functor(z4, z2, {a: a % 2 for a in z4.elements})
        assert f.mor(3) == 1

    def test_non_homomorphism_rejected(self):
        z3, z2 = groups.cyclic(3), groups.cyclic(2)
        with pytest.raises(FunctorialityError) as info:
            homomorphism_functor(z3, z2, {0: 0, 1: 1, 2: 1})
        assert info.value.location[0] == "compose"

    def test_wrong_hom_set(self):
        x, y = codiscrete([0, 1]), discrete([0, 1])
        with pytest.raises(FunctorialityError):
            GroupoidFunctor(x, y, {0: 0, 1: 1}, {m: (m[0], m[0]) for m in x.morphisms})

    def test_compose_and_inverse(self):
        eg = e_groupoid(groups.cyclic(3))
        iso = eg.to_codiscrete
        assert compose_functors(inverse_functor(iso), iso) == identity_functor(eg.groupoid)

    def test_compose_mismatch(self):
        f = terminal_functor(codiscrete([0, 1]))
        with pytest.raises(CompositionError):
            compose_functors(f, f)

    def test_naturality_failure(self):
        x = codiscrete([0, 1])
        f = identity_functor(x)
        with pytest.raises(NaturalityError):
            NaturalTransformation(f, f, {0: (0, 0), 1: (1, 0)})


class TestLimits:
    """Tests for products, coproducts and exponentials."""

    def test_product_sizes(self, bs3):
        p = product(bs3, codiscrete([0, 1]))
        assert len(p.groupoid.objects) == 2
        assert len(p.groupoid.morphisms) == 24
        assert p.projections[1].obj((POINT, 1)) == 1

    def test_product_pairing(self):
        x = codiscrete(["a", "b"])
        p = product(x, x)
        diagonal = p.pair([identity_functor(x), identity_functor(x)])
        assert compose_functors(p.projections[0], diagonal) == identity_functor(x)

    def test_coproduct(self):
        c = coproduct([terminal(), codiscrete([0, 1])])
        assert c.groupoid.objects == ((0, POINT), (1, 0), (1, 1))
        assert len(connected_components(c.groupoid)) == 2

    def test_exponential_needs_discrete_exponent(self):
        with pytest.raises(UnsupportedExponentError):
            exponential(terminal(), codiscrete([0, 1]))

    def test_curry_agrees_with_evaluation(self):
        x, y = codiscrete(["a", "b"]), discrete([0, 1])
        p = product(x, y)
        f = p.projections[0]
        exp = exponential(x, y)
        curried = curry_functor(f, x, y, exp)
        for point in y.objects:
            assert compose_functors(exp.evaluations[point], curried) == identity_functor(x)


class TestSkeleta:
    """Tests for skeletization and connected decomposition."""

    def test_skeleton_of_codiscrete(self):
        skl = skeletize(codiscrete(["a", "b", "c"]))
        assert skl.skeleton.objects == ("a",)
        assert skl.connecting("c") == ("a", "c")

    def test_retraction_is_section_of_inclusion(self):
        z2 = groups.cyclic(2)
        x = action_groupoid(z2, [0, 1, 2, 3], lambda g, w: w ^ g if w < 2 else w).groupoid
        skl = skeletize(x)
        assert skl.skeleton.objects == (0, 2, 3)
        assert compose_functors(skl.retraction, skl.inclusion) == identity_functor(skl.skeleton)

    def test_connected_decomposition(self):
        eg = e_groupoid(groups.cyclic(3)).groupoid
        dec = connected_decomposition(eg)
        assert dec.group.order == 1
        assert is_isomorphism(dec.iso)

    def test_disconnected_rejected(self):
        with pytest.raises(GroupoidLawError):
            connected_decomposition(discrete([0, 1]))


class TestModelStructure:
    """Tests for equivalences, fibrations and lifting."""

    def test_generators(self, generators):
        assert set(generators) == {"empty->pt", "boundary->interval", "pt->interval"}
        assert all(is_cofibration(f) for f in generators.values())
        assert is_acyclic_cofibration(generators["pt->interval"])
        assert not is_equivalence(generators["boundary->interval"])

    def test_isofibrations(self, bs3):
        assert is_isofibration(terminal_functor(bs3))
        assert not is_isofibration(point_functor(codiscrete([0, 1]), 0))

    def test_lift_exists_against_isofibration(self, generators):
        i = generators["pt->interval"]
        bz2 = delooping(groups.cyclic(2))
        p = terminal_functor(bz2)
        top = point_functor(bz2, POINT)
        bottom = terminal_functor(i.target)
        h = lift_functor(i, p, top, bottom)
        assert h is not None
        assert compose_functors(h, i) == top

    def test_no_lift_for_boundary_inclusion(self, generators):
        i = generators["boundary->interval"]
        target = discrete([0, 1])
        p = terminal_functor(target)
        top = GroupoidFunctor(i.source, target, {0: 0, 1: 1}, {(0, 0): (0, 0), (1, 1): (1, 1)})
        bottom = terminal_functor(i.target)
        assert lift_functor(i, p, top, bottom) is None


class TestOrbitQuotient:
    """Tests for group actions and orbit groupoids."""

    def test_eg_quotient_is_delooping_sized(self):
        z3 = groups.cyclic(3)
        eg = e_groupoid(z3)
        quotient = orbit_groupoid(eg_right_action(eg, z3))
        assert len(quotient.groupoid.objects) == 1
        assert len(quotient.groupoid.morphisms) == 3

    def test_non_free_action_rejected(self):
        z2 = groups.cyclic(2)
        x = terminal()
        action = GroupAction(
            z2,
            x,
            {(g, POINT): POINT for g in z2.elements},
            {(g, (POINT, POINT)): (POINT, POINT) for g in z2.elements},
        )
        with pytest.raises(UnsupportedQuotientError):
            orbit_groupoid(action)

    def test_action_must_be_functorial(self):
        z2 = groups.cyclic(2)
        x = codiscrete([0, 1])
        with pytest.raises(ActionLawError):
            GroupAction(
                z2,
                x,
                {(g, o): o for g in z2.elements for o in x.objects},
                {(g, m): (m[1], m[0]) if g else m for g in z2.elements for m in x.morphisms},
            )


class TestSetPushoutProduct:
    """Tests for pushout-products of finite sets."""

    def test_injections_give_injection(self):
        f = SetMap((0,), (0, 1), {0: 0})
        g = SetMap(("a",), ("a", "b"), {"a": "a"})
        pp = set_pushout_product(f, g)
        assert pp.matches_formula()
        assert pp.is_injective()
        assert len(pp.points) == 3

    def test_fold_map(self):
        f = SetMap((0, 1), ("*",), {0: "*", 1: "*"})
        g = SetMap((), ("a",), {})
        pp = set_pushout_product(f, g)
        assert pp.matches_formula()
        assert len(pp.fibers[("*", "a")]) == 2
        assert not pp.is_injective()
