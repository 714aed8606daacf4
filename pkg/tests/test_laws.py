"""Tests for the law suites and their runner."""

import pytest

from extlin.core import laws
from extlin.core.chaincx import unsigned_sign
from extlin.core.errors import ExtlinError, SuiteNotFoundError, UnsupportedShapeError
from extlin.core.laws import MUTATIONS, Suite, list_suites, make_context, run_all, run_suite

SUITES = [
    "adjunctions",
    "chain_model",
    "characterization_sets",
    "colimit_preservation",
    "distributivity",
    "hq_coproducts",
    "integral_classes",
    "motivic_yoga",
    "pullpush_external",
    "quantum_laws",
    "quotient_iso",
]


class TestRegistry:
    """Tests for suite lookup."""

    def test_list_suites(self):
        assert list_suites() == SUITES

    def test_unknown_suite(self):
        with pytest.raises(SuiteNotFoundError) as info:
            run_suite("nosuch")
        assert "distributivity" in info.value.registered
        assert "nosuch" in str(info.value)

    def test_unknown_mutation(self):
        with pytest.raises(ExtlinError):
            make_context(0, 1, mutation="flip-everything")

    def test_koszul_mutation_swaps_sign_rule(self):
        assert make_context(0, 1, mutation="koszul-sign").sign is unsigned_sign
        assert len(make_context(0, 1, mutation="corrupt-composition").hooks.post_hooks) == 1


class TestRuns:
    """Tests for running suites."""

    def test_zero_cases_pass_vacuously(self):
        report = run_suite("distributivity", seed=0, cases=0)
        assert report.cases == 0
        assert report.passed

    def test_distributivity(self):
        report = run_suite("distributivity", seed=1, cases=50)
        assert report.failures == []

    @pytest.mark.parametrize("name", SUITES)
    def test_every_suite_passes(self, name):
        report = run_suite(name, seed=0, cases=5)
        assert report.passed, report.failures

    def test_reports_are_deterministic(self):
        first = run_suite("chain_model", seed=5, cases=4).model_dump(exclude={"elapsed_ms"})
        second = run_suite("chain_model", seed=5, cases=4).model_dump(exclude={"elapsed_ms"})
        assert first == second

    def test_library_errors_are_recorded(self, monkeypatch):
        def unsupported(corpus, ctx):
            raise UnsupportedShapeError("no finite model", payload={"shape": "loop"})

        monkeypatch.setitem(laws._SUITES, "unsupported", Suite("unsupported", "Always refused.", unsupported))
        report = run_suite("unsupported", seed=0, cases=2)
        assert [f.case for f in report.failures] == [0, 1]
        assert report.failures[0].detail == "UnsupportedShapeError: no finite model"
        assert report.failures[0].input == {"payload": {"shape": "loop"}}

    def test_run_all(self):
        reports = run_all(seed=2, cases=1)
        assert [r.suite for r in reports] == SUITES


class TestMutations:
    """Each mutation is caught by a suite that depends on the broken law."""

    def test_mutation_names(self):
        assert set(MUTATIONS) == {"transpose-transport", "corrupt-composition", "koszul-sign"}

    def test_koszul_sign(self):
        report = run_suite("chain_model", seed=0, cases=3, mutation="koszul-sign")
        assert len(report.failures) >= 1

    def test_transpose_transport(self):
        report = run_suite("distributivity", seed=0, cases=20, mutation="transpose-transport")
        assert len(report.failures) >= 1
        assert report.failures[0].detail.startswith("FunctorialityError")

    def test_corrupt_composition(self):
        report = run_suite("distributivity", seed=0, cases=20, mutation="corrupt-composition")
        assert len(report.failures) >= 1
        assert report.failures[0].detail.startswith("GroupoidLawError")
