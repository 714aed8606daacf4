"""Tests for post-build hooks."""

import random

import pytest

from extlin.core import fingrpd, groups
from extlin.core.corpus import Corpus
from extlin.core.errors import FunctorialityError, GroupoidLawError
from extlin.core.hooks import CorruptCompositionHook, HookRunner, PostBuildHook, TransposeTransportHook
from extlin.core.locsys import regular_representation


def corpus_with(*hooks) -> Corpus:
    runner = HookRunner()
    for hook in hooks:
        runner.add_post_hook(hook)
    return Corpus(random.Random(0), runner)


class Rename:
    def __init__(self, suffix):
        self.suffix = suffix

    def post_build(self, kind, payload):
        payload["name"] = payload["name"] + self.suffix
        return payload


class TestHookRunner:
    """Tests for HookRunner."""

    def test_protocol(self):
        assert isinstance(Rename("!"), PostBuildHook)
        assert isinstance(TransposeTransportHook(), PostBuildHook)

    def test_runs_in_order(self):
        runner = HookRunner()
        runner.add_post_hook(Rename("-a"))
        runner.add_post_hook(Rename("-b"))
        assert runner.run_post_hooks("groupoid", {"name": "x"}) == {"name": "x-a-b"}

    def test_hooks_see_generated_groupoids(self):
        corpus = corpus_with(Rename("!"))
        grpd = corpus.emit_groupoid(fingrpd.codiscrete([0, 1]))
        assert grpd.name.endswith("!")
        assert grpd == fingrpd.codiscrete([0, 1])


class TestCorruptCompositionHook:
    """Tests for CorruptCompositionHook."""

    def test_breaks_the_first_groupoid(self):
        hook = CorruptCompositionHook()
        corpus = corpus_with(hook)
        with pytest.raises(GroupoidLawError):
            corpus.emit_groupoid(fingrpd.delooping(groups.cyclic(3)))
        assert hook.fired

    def test_fires_once(self):
        hook = CorruptCompositionHook()
        corpus = corpus_with(hook)
        with pytest.raises(GroupoidLawError):
            corpus.emit_groupoid(fingrpd.delooping(groups.cyclic(3)))
        assert corpus.emit_groupoid(fingrpd.delooping(groups.cyclic(3))).objects == (fingrpd.POINT,)

    def test_skips_tables_without_rivals(self):
        hook = CorruptCompositionHook()
        corpus_with(hook).emit_groupoid(fingrpd.discrete([0, 1]))
        assert not hook.fired


class TestTransposeTransportHook:
    """Tests for TransposeTransportHook."""

    def test_breaks_a_non_abelian_representation(self):
        hook = TransposeTransportHook()
        with pytest.raises(FunctorialityError):
            corpus_with(hook).emit_system(regular_representation(groups.symmetric(3)))
        assert hook.fired

    def test_involutions_are_left_alone(self):
        hook = TransposeTransportHook()
        system = regular_representation(groups.cyclic(2))
        assert corpus_with(hook).emit_system(system) == system
        assert not hook.fired
