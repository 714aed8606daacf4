"""Tests for JSON documents and the compute operations built on them."""

import pytest
from pydantic import ValidationError

from extlin.core.chaincx import disk, homology, sphere
from extlin.core.compute import COMPUTATIONS, compute
from extlin.core.errors import ChainComplexError, ExtlinError, GroupLawError, InvariantError
from extlin.core.finvect import identity
from extlin.core.scalars import Gaussian
from extlin.core.serialization import (
    detect_kind,
    dump_chain_complex,
    dump_local_system,
    id_text,
    load_any,
    load_chain_complex,
    load_groupoid,
    load_local_system,
)

Z2 = {"elements": ["e", "a"], "table": [["e", "a"], ["a", "e"]], "name": "Z2"}
SWAP = [["0", "1"], ["1", "0"]]
IDENTITY = [["1", "0"], ["0", "1"]]


def regular_z2():
    return {"base": {"group": Z2}, "fibers": {"*": {"dim": 2}}, "transport": {"a": SWAP}}


def bundle(dims):
    return {"base": {"discrete": list(dims)}, "fibers": {k: {"dim": d} for k, d in dims.items()}}


def constant_s0(levels):
    return {"levels": [{"components": {"0": {"dim": 1}}}] * levels}


class TestGroupoids:
    """Tests for groupoid documents."""

    def test_group_sugar(self):
        x = load_groupoid({"group": Z2})
        assert x.objects == ("*",)
        assert set(x.morphisms) == {"e", "a"}

    def test_corrupted_table(self):
        bad = dict(Z2, table=[["e", "a"], ["a", "a"]])
        with pytest.raises(GroupLawError):
            load_groupoid({"group": bad})

    def test_one_form_only(self):
        with pytest.raises(ValidationError):
            load_groupoid({"discrete": ["0"], "codiscrete": ["1"]})

    def test_unknown_keys_rejected(self):
        with pytest.raises(ValidationError):
            load_groupoid({"discrete": ["0"], "colour": "red"})

    def test_explicit_form(self):
        x = load_groupoid(
            {
                "objects": ["x"],
                "morphisms": [{"id": "1", "src": "x", "dst": "x"}],
                "identities": {"x": "1"},
                "compose": [["1", "1", "1"]],
            }
        )
        assert x.identity("x") == "1"


class TestLocalSystems:
    """Tests for local system documents."""

    def test_identity_transport_may_be_omitted(self):
        system = load_local_system(regular_z2())
        assert system.dims() == {"*": 2}
        assert system.along("e") == identity(system.fiber("*"))

    def test_missing_transport(self):
        doc = regular_z2()
        doc["transport"] = {}
        with pytest.raises(InvariantError) as info:
            load_local_system(doc)
        assert info.value.location == ("transport", "a")

    def test_unknown_transport_key(self):
        doc = regular_z2()
        doc["transport"]["b"] = SWAP
        with pytest.raises(InvariantError) as info:
            load_local_system(doc)
        assert info.value.location == ("transport", "b")

    def test_bad_scalar_has_a_path(self):
        doc = regular_z2()
        doc["transport"]["a"] = [["0", "1"], ["1", "one"]]
        with pytest.raises(ValidationError) as info:
            load_local_system(doc)
        assert info.value.errors()[0]["loc"] == ("transport", "a", 1, 1)

    def test_non_functorial_transport(self):
        doc = regular_z2()
        doc["transport"]["a"] = [["2", "0"], ["0", "1"]]
        with pytest.raises(InvariantError):
            load_local_system(doc)

    def test_gaussian_entries(self):
        doc = {"base": {"group": Z2}, "fibers": {"*": {"dim": 1}}, "transport": {"a": [["-1+0i"]]}}
        assert load_local_system(doc).along("a").matrix == ((-1,),)

    def test_declared_field_embeds_entries(self):
        system = load_local_system(dict(regular_z2(), field="Q(i)"))
        assert all(isinstance(x, Gaussian) for row in system.along("a").matrix for x in row)
        assert system.along("a").matrix == ((0, 1), (1, 0))

    def test_rational_field_rejects_gaussian_entries(self):
        doc = {"base": {"group": Z2}, "fibers": {"*": {"dim": 1}}, "transport": {"a": [["-1+0i"]]}, "field": "Q"}
        with pytest.raises(InvariantError) as info:
            load_local_system(doc)
        assert info.value.location == ("transport", "a", 0, 0)
        assert "is not in Q" in info.value.message

    def test_unknown_field(self):
        with pytest.raises(InvariantError) as info:
            load_local_system(dict(regular_z2(), field="F2"))
        assert info.value.location == ("field",)

    def test_dg_field_reaches_fibers_and_transport(self):
        doc = {
            "base": {"group": Z2},
            "fibers": {"*": {"components": {"0": {"dim": 1}, "1": {"dim": 1}}, "differentials": {"1": [["0"]]}}},
            "transport": {"a": {"0": [["-1"]], "1": [["1"]]}},
            "field": "Q(i)",
        }
        system = load_any(doc)
        assert isinstance(system.fiber("*").differential(1).matrix[0][0], Gaussian)
        assert isinstance(system.along("a").map(0).matrix[0][0], Gaussian)

    def test_dump_uses_canonical_ids(self):
        dumped = dump_local_system(load_local_system(bundle({"0": 1, "1": 2})))
        assert dumped["transport"]["(1,1)"] == IDENTITY
        assert dumped["fibers"]["0"]["dim"] == 1


class TestChainComplexes:
    """Tests for chain complex documents."""

    def test_disk(self):
        c = load_chain_complex({"components": {"0": {"dim": 1}, "1": {"dim": 1}}, "differentials": {"1": [["1"]]}})
        assert homology(c).is_zero()

    def test_square_zero(self):
        doc = {
            "components": {"0": {"dim": 1}, "1": {"dim": 1}, "2": {"dim": 1}},
            "differentials": {"1": [["1"]], "2": [["1"]]},
        }
        with pytest.raises(ChainComplexError):
            load_chain_complex(doc)

    def test_support_must_match(self):
        with pytest.raises(InvariantError) as info:
            load_chain_complex({"support": [0, 1], "components": {"0": {"dim": 1}}})
        assert info.value.location == ("support",)

    def test_rational_field_rejects_i(self):
        doc = {
            "field": "Q",
            "components": {"0": {"dim": 1}, "1": {"dim": 1}},
            "differentials": {"1": [["0+1i"]]},
        }
        with pytest.raises(InvariantError) as info:
            load_chain_complex(doc)
        assert info.value.location == ("differentials", 1, 0, 0)

    def test_dump(self):
        assert dump_chain_complex(sphere(2)) == {
            "support": [2],
            "components": {"2": {"dim": 1, "labels": ["s"]}},
            "differentials": {},
        }
        assert dump_chain_complex(disk(1))["differentials"] == {"1": [["1"]]}


class TestDetectKind:
    """Tests for document classification."""

    @pytest.mark.parametrize(
        "doc,kind",
        [
            ({"group": Z2}, "groupoid"),
            (regular_z2(), "local_system"),
            ({"components": {"0": {"dim": 1}}}, "chain_complex"),
            (constant_s0(1), "simplicial"),
            ({"base": {"discrete": ["0"]}, "fibers": {"0": {"components": {}}}}, "dg_local_system"),
            ({"source": regular_z2(), "target": regular_z2(), "components": {}}, "loc_morphism"),
        ],
    )
    def test_kinds(self, doc, kind):
        assert detect_kind(doc) == kind

    def test_unrecognized(self):
        with pytest.raises(ExtlinError):
            detect_kind({"colour": "red"})

    def test_load_any(self):
        assert load_any({"components": {"3": {"dim": 2}}}).dims() == {3: 2}

    def test_id_text(self):
        assert id_text(("a", ("b", 1))) == "(a,(b,1))"

    def test_id_text_escapes_tuple_parts(self):
        assert id_text(("a,b", "c")) == "(a\\,b,c)"
        assert id_text(("a", "b,c")) == "(a,b\\,c)"
        assert id_text(("(x)",)) == "(\\(x\\))"
        assert id_text("a,b") == "a,b"


class TestCompute:
    """Tests for document-in, document-out operations."""

    def test_operations(self):
        assert set(COMPUTATIONS) == {
            "exttensor",
            "pushforward",
            "sections",
            "homology",
            "totalize",
            "classify",
            "externalhom",
        }

    def test_exttensor_of_bundles(self):
        out = compute("exttensor", {"left": bundle({"0": 1, "1": 2}), "right": bundle({"a": 3})})
        assert out["fibers"]["(0,a)"]["dim"] == 3
        assert out["fibers"]["(1,a)"]["dim"] == 6

    def test_exttensor_keeps_every_fiber(self):
        out = compute("exttensor", {"left": bundle({"a": 1, "a,b": 1}), "right": bundle({"b,c": 1, "c": 1})})
        assert set(out["fibers"]) == {"(a,b\\,c)", "(a,c)", "(a\\,b,b\\,c)", "(a\\,b,c)"}
        again = dump_local_system(load_local_system(out))
        assert again["fibers"] == out["fibers"]
        assert again["transport"] == out["transport"]

    def test_exttensor_of_tensor_shaped_labels(self):
        left = {"base": {"discrete": ["0"]}, "fibers": {"0": {"dim": 2, "labels": ["x⊗y", "x"]}}}
        right = {"base": {"discrete": ["1"]}, "fibers": {"1": {"dim": 2, "labels": ["z", "y⊗z"]}}}
        out = compute("exttensor", {"left": left, "right": right})
        assert out["fibers"]["(0,1)"]["dim"] == 4

    def test_exttensor_needs_matching_kinds(self):
        dg = {"base": {"discrete": ["0"]}, "fibers": {"0": {"components": {"0": {"dim": 1}}}}}
        with pytest.raises(ExtlinError):
            compute("exttensor", {"left": bundle({"0": 1}), "right": dg})

    def test_exttensor_needs_both_sides(self):
        with pytest.raises(ExtlinError):
            compute("exttensor", {"left": bundle({"0": 1})})

    def test_homology_of_sphere(self):
        assert compute("homology", {"components": {"2": {"dim": 1}}}) == {"2": 1}

    @pytest.mark.parametrize("op", ["pushforward", "sections"])
    def test_base_change_to_point(self, op):
        functor = {
            "target": {"codiscrete": ["pt"]},
            "objects": {"*": "pt"},
            "morphisms": {"e": "(pt,pt)", "a": "(pt,pt)"},
        }
        out = compute(op, {"system": regular_z2(), "functor": functor})
        assert out["fibers"]["pt"]["dim"] == 1

    def test_classify_identity(self):
        doc = {"source": regular_z2(), "target": regular_z2(), "components": {"*": IDENTITY}}
        assert compute("classify", doc) == {"weq": True, "fib": True, "cof": True}

    def test_classify_needs_a_morphism(self):
        with pytest.raises(ExtlinError):
            compute("classify", regular_z2())

    def test_totalize(self):
        doc = constant_s0(2)
        doc["faces"] = [{"level": 1, "index": i, "maps": {"0": [["1"]]}} for i in (0, 1)]
        doc["degeneracies"] = [{"level": 0, "index": 0, "maps": {"0": [["1"]]}}]
        assert compute("totalize", doc)["support"] == [0, 1]

    def test_externalhom(self):
        out = compute("externalhom", {"left": bundle({"0": 1, "1": 2}), "right": regular_z2()})
        assert sum(f["dim"] for f in out["fibers"].values()) == 6

    def test_unknown_operation(self):
        with pytest.raises(ExtlinError):
            compute("transmogrify", {})
