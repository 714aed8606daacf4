"""Tests for measurement and preparation over finite outcome sets."""

from fractions import Fraction

import pytest

from extlin.core import fingrpd
from extlin.core.errors import BranchError
from extlin.core.finvect import VectorSpace, identity
from extlin.core.locsys import constant_system
from extlin.core.quantum import (
    branch_set,
    bundle_of_dims,
    measure_comonad,
    measure_prepared,
    measurement_projection,
    prepare,
    qubit_demo,
)


@pytest.fixture
def spin():
    return branch_set(["up", "down"])


@pytest.fixture
def plane():
    return constant_system(fingrpd.terminal(), VectorSpace.of_dim(2, "q"))


class TestMeasurement:
    """Tests for the measurement comonad."""

    def test_needs_an_outcome(self):
        with pytest.raises(BranchError):
            measure_comonad([])

    def test_boxed_fibers_hold_every_branch(self, spin):
        bundle = bundle_of_dims(spin, {"up": 1, "down": 2})
        boxed = measure_comonad(spin.points).apply(bundle)
        assert boxed.dims() == {"up": 3, "down": 3}

    def test_comonad_laws(self, spin):
        bundle = bundle_of_dims(spin, {"up": 1, "down": 2})
        assert measure_comonad(spin.points).check_laws(bundle).all_hold()

    def test_projection_shape(self, spin):
        bundle = bundle_of_dims(spin, {"up": 1, "down": 2})
        assert measurement_projection(spin, "down", bundle).shape == (2, 3)

    def test_unknown_outcome(self, spin):
        bundle = bundle_of_dims(spin, {"up": 1, "down": 1})
        with pytest.raises(BranchError) as info:
            measurement_projection(spin, "sideways", bundle)
        assert info.value.payload["outcome"] == "'sideways'"

    def test_bundle_over_other_base(self, spin):
        other = bundle_of_dims(branch_set([0, 1]), {0: 1, 1: 1})
        with pytest.raises(BranchError):
            measure_comonad(spin.points).counit(other)


class TestPreparation:
    """Tests for conditioned state preparation."""

    def test_prepare_lands_in_the_sum(self, spin, plane):
        prepared = prepare(spin, "down", plane)
        assert prepared.target.dims() == {fingrpd.POINT: 4}

    def test_prepare_needs_a_point_base(self, spin):
        with pytest.raises(BranchError):
            prepare(spin, "up", bundle_of_dims(spin, {"up": 1, "down": 1}))

    @pytest.mark.parametrize("outcome", ["up", "down"])
    def test_measure_after_prepare(self, spin, plane, outcome):
        readouts = measure_prepared(spin, outcome, plane)
        assert readouts[outcome] == identity(plane.fiber(fingrpd.POINT))
        other = "down" if outcome == "up" else "up"
        assert readouts[other].is_zero()


class TestQubitDemo:
    """Tests for the worked qubit example."""

    def test_default_qubit(self):
        report = qubit_demo()
        assert report.verified
        assert report.field == "Q(i)"
        assert report.amplitudes == {"0": "3/5", "1": "0+4/5i"}
        assert report.readouts["1"] == "0+4/5i"
        assert report.counit_rows == {"0": ["1", "0"], "1": ["0", "1"]}
        assert report.preparation_columns == {"0": ["1", "0"], "1": ["0", "1"]}

    def test_rational_qubit(self):
        report = qubit_demo(Fraction(1), Fraction(0))
        assert report.verified
        assert report.prepared_readouts["0"] == {"0": "1", "1": "0"}

    def test_dump_includes_verdict(self):
        dumped = qubit_demo().model_dump()
        assert dumped["verified"] is True
        assert set(dumped["checks"]) >= {"comonad_laws", "ambidexterity", "measure_after_prepare"}
