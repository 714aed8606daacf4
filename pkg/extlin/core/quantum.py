"""Quantum measurement and state preparation over a finite outcome set.

Bundles of state spaces over a finite set ``B`` of classical outcomes are
local systems over the discrete groupoid on ``B``. With ``p: B -> pt``:

- measurement is the counit of the comonad ``□_B = p* p_*``; its
  component at ``b`` reads off the ``b``-branch of a superposition,
- preparation conditioned on ``b`` is the unit of ``p_! ⊣ p*``, selecting
  the ``b``-summand of ``⊕_{b'} V``.

Ambidexterity over finite sets identifies ``p_!`` with ``p_*``, so both
live on the same direct sum.

Example usage:
    from extlin.core.quantum import qubit_demo

    report = qubit_demo()
    report.verified         # True
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Hashable, List, Mapping, Sequence

from pydantic import BaseModel, computed_field

from . import fingrpd
from .errors import BranchError
from .fingrpd import FinGroupoid, GroupoidFunctor
from .finvect import LinearMap, VectorSpace, compose, compose_all, identity, unit_space, zero_map
from .locsys import (
    LocalSystem,
    LocMorphism,
    ambidexterity_witness,
    bundle_over_set,
    compose_loc,
    identity_loc,
    pullback,
    pullback_mor,
    pushforward,
    sections,
    sections_mor,
    sections_unit,
    unit_system,
)
from .scalars import ONE, ZERO, FieldElement, Gaussian, format_scalar

logger = logging.getLogger(__name__)

# A bundle of state spaces over a discrete base.
QuantumBundle = LocalSystem


@dataclass
class BranchSet:
    """A finite set of measurement outcomes with its map ``p: B -> pt``."""

    points: tuple
    groupoid: FinGroupoid
    projection: GroupoidFunctor

    def __contains__(self, b: Hashable) -> bool:
        return b in self.points

    def require(self, b: Hashable):
        if b not in self.points:
            raise BranchError(
                f"Outcome {b!r} is not one of {list(self.points)}",
                payload={"outcome": repr(b), "branches": [repr(x) for x in self.points]},
            )


def branch_set(points: Sequence[Hashable]) -> BranchSet:
    points = tuple(points)
    if not points:
        raise BranchError("A measurement needs at least one outcome")
    grpd = fingrpd.discrete(points)
    grpd.name = f"B{list(points)}"
    return BranchSet(points, grpd, fingrpd.terminal_functor(grpd))


# =============================================================================
# Measurement comonad
# =============================================================================


@dataclass
class ComonadLaws:
    left_counit: bool
    right_counit: bool
    coassociative: bool

    def all_hold(self) -> bool:
        return self.left_counit and self.right_counit and self.coassociative


class MeasurementComonad:
    """``□_B = p* p_*`` on bundles over ``B`` with counit and comultiplication."""

    def __init__(self, branches: BranchSet):
        self.branches = branches
        self.p = branches.projection

    def _check_base(self, bundle: QuantumBundle):
        if bundle.base != self.branches.groupoid:
            raise BranchError("Bundle does not live over the outcome set of this measurement")

    def apply(self, bundle: QuantumBundle) -> QuantumBundle:
        """The constant bundle on ``p_*V``, whose fiber is ``⊕_b V_b``."""
        self._check_base(bundle)
        return pullback(self.p, sections(self.p, bundle).system)

    def map(self, phi: LocMorphism) -> LocMorphism:
        """``□φ`` for ``φ`` over the identity of ``B``."""
        return pullback_mor(self.p, sections_mor(self.p, phi))

    def counit(self, bundle: QuantumBundle) -> LocMorphism:
        """``ε: □V -> V``; the component at ``b`` projects onto the ``b``-branch."""
        self._check_base(bundle)
        return sections(self.p, bundle).counit

    def comultiplication(self, bundle: QuantumBundle) -> LocMorphism:
        """``δ = p*(η_{p_*V}): □V -> □□V``."""
        self._check_base(bundle)
        return pullback_mor(self.p, sections_unit(self.p, sections(self.p, bundle).system))

    def check_laws(self, bundle: QuantumBundle) -> ComonadLaws:
        boxed = self.apply(bundle)
        delta = self.comultiplication(bundle)
        ident = identity_loc(boxed)
        left = compose_loc(self.counit(boxed), delta) == ident
        right = compose_loc(self.map(self.counit(bundle)), delta) == ident
        coassoc = compose_loc(self.comultiplication(boxed), delta) == compose_loc(self.map(delta), delta)
        logger.debug("comonad laws over %s: %s %s %s", self.branches.groupoid.name, left, right, coassoc)
        return ComonadLaws(left, right, coassoc)


def measure_comonad(points: Sequence[Hashable]) -> MeasurementComonad:
    """The measurement comonad for outcome set ``points``.

    Raises:
        BranchError: If ``points`` is empty.
    """
    return MeasurementComonad(branch_set(points))


def measurement_projection(branches: BranchSet, b: Hashable, bundle: QuantumBundle) -> LinearMap:
    """``ε_b: (□V)_b -> V_b``."""
    branches.require(b)
    return MeasurementComonad(branches).counit(bundle).component(b)


# =============================================================================
# Preparation
# =============================================================================


def preparation_unit(branches: BranchSet, system: LocalSystem) -> LocMorphism:
    """``p*V -> p_!p*V`` over ``p``: at ``b`` the inclusion of the ``b``-summand.

    This is the unit of ``p_! ⊣ p*`` read as a single morphism of bundles
    over the map ``B -> pt``.
    """
    pulled = pullback(branches.projection, system)
    pushed = pushforward(branches.projection, pulled)
    return LocMorphism(
        pulled,
        pushed.system,
        branches.projection,
        {b: pushed.unit.component(b) for b in branches.points},
    )


def prepare(branches: BranchSet, b: Hashable, system: LocalSystem) -> LocMorphism:
    """The state preparation ``V -> ⊕_{b'} V`` over ``pt`` conditioned on ``b``.

    Raises:
        BranchError: If ``b`` is not an outcome.
    """
    branches.require(b)
    if system.base != branches.projection.target:
        raise BranchError("Preparation starts from a bundle over the point")
    unit = preparation_unit(branches, system)
    return LocMorphism(
        system,
        unit.target,
        fingrpd.identity_functor(system.base),
        {fingrpd.POINT: unit.component(b)},
    )


def measure_prepared(branches: BranchSet, b: Hashable, system: LocalSystem) -> Dict[Hashable, LinearMap]:
    """Every read-out ``ε_{b'}`` of the state prepared on ``b``, through ambidexterity.

    The result at ``b`` is the identity of ``V`` and zero elsewhere.
    """
    prepared = prepare(branches, b, system)
    pulled = pullback(branches.projection, system)
    norm = ambidexterity_witness(pulled).norm
    counit = MeasurementComonad(branches).counit(pulled)
    return {
        b2: compose_all(counit.component(b2), norm.component(fingrpd.POINT), prepared.component(fingrpd.POINT))
        for b2 in branches.points
    }


# =============================================================================
# Qubit example
# =============================================================================


class QubitReport(BaseModel):
    """The verified measurement and preparation diagrams for one qubit."""

    field: str
    branches: List[str]
    amplitudes: Dict[str, str]
    counit_rows: Dict[str, List[str]]
    projectors: Dict[str, List[List[str]]]
    preparation_columns: Dict[str, List[str]]
    readouts: Dict[str, str]
    prepared_readouts: Dict[str, Dict[str, str]]
    preparation_adjunction: str
    checks: Dict[str, bool]

    @computed_field
    @property
    def verified(self) -> bool:
        return all(self.checks.values())


def _rows(f: LinearMap) -> List[List[str]]:
    return [[format_scalar(x) for x in row] for row in f.matrix]


def _basis_row(n: int, k: int) -> List[FieldElement]:
    return [ONE if j == k else ZERO for j in range(n)]


def qubit_demo(
    q0: FieldElement = Fraction(3, 5),
    q1: FieldElement = Gaussian(Fraction(0), Fraction(4, 5)),
) -> QubitReport:
    """Measure and prepare the qubit ``q0|0⟩ + q1|1⟩`` over ``Q(i)``."""
    branches = branch_set([0, 1])
    comonad = MeasurementComonad(branches)
    line = unit_system(branches.groupoid)
    counit = comonad.counit(line)
    superposed = counit.source.fiber(0)
    psi = LinearMap(unit_space(), superposed, ((q0,), (q1,)))
    amplitudes = {0: q0, 1: q1}

    readouts = {b: compose(counit.component(b), psi).matrix[0][0] for b in branches.points}
    point_line = unit_system(branches.projection.target)
    preparations = {b: prepare(branches, b, point_line).component(fingrpd.POINT) for b in branches.points}
    prepared = {b: measure_prepared(branches, b, point_line) for b in branches.points}

    end = sections(branches.projection, line).ends[fingrpd.POINT]
    projectors = {
        b: compose(_branch_inclusion(end, line, b), counit.component(b))
        for b in branches.points
    }

    delta = comonad.comultiplication(line)
    twice = {
        b: compose_all(counit.component(b), comonad.counit(comonad.apply(line)).component(b), delta.component(b))
        for b in branches.points
    }
    checks = {
        "counit_rows_are_basis_covectors": all(
            list(counit.component(b).matrix[0]) == _basis_row(2, k) for k, b in enumerate(branches.points)
        ),
        "readout_gives_amplitudes": all(readouts[b] == amplitudes[b] for b in branches.points),
        "preparation_columns_are_basis_vectors": all(
            list(preparations[b].column(0)) == _basis_row(2, k) for k, b in enumerate(branches.points)
        ),
        "measure_after_prepare": all(
            prepared[b][b2] == (identity(unit_space()) if b == b2 else zero_map(unit_space(), unit_space()))
            for b in branches.points
            for b2 in branches.points
        ),
        "comonad_laws": comonad.check_laws(line).all_hold(),
        "repeated_readout_is_idempotent": all(twice[b] == counit.component(b) for b in branches.points),
        "ambidexterity": _ambidextrous(branches),
    }
    report = QubitReport(
        field="Q(i)",
        branches=[str(b) for b in branches.points],
        amplitudes={str(b): format_scalar(a) for b, a in amplitudes.items()},
        counit_rows={str(b): _rows(counit.component(b))[0] for b in branches.points},
        projectors={str(b): _rows(projectors[b]) for b in branches.points},
        preparation_columns={str(b): [format_scalar(x) for x in preparations[b].column(0)] for b in branches.points},
        readouts={str(b): format_scalar(v) for b, v in readouts.items()},
        prepared_readouts={
            str(b): {str(b2): format_scalar(m.matrix[0][0]) for b2, m in prepared[b].items()}
            for b in branches.points
        },
        preparation_adjunction="unit of p_! ⊣ p*",
        checks=checks,
    )
    logger.info("qubit demo verified: %s", report.verified)
    return report


def _branch_inclusion(end, bundle: QuantumBundle, b: Hashable) -> LinearMap:
    """The ket ``|b⟩``: ``V_b`` into the ``b``-factor of ``p_*V``."""
    return end.lift(
        lambda x, a: identity(bundle.fiber(b)) if x == b else zero_map(bundle.fiber(b), bundle.fiber(x)),
        bundle.fiber(b),
    )


def _ambidextrous(branches: BranchSet) -> bool:
    witness = ambidexterity_witness(unit_system(branches.groupoid))
    ident = identity_loc(witness.norm.source)
    return compose_loc(witness.inverse, witness.norm) == ident


def bundle_of_dims(branches: BranchSet, dims: Mapping[Hashable, int]) -> QuantumBundle:
    """A bundle with fiber ``K^{dims[b]}`` over each outcome."""
    return bundle_over_set(
        branches.points,
        {b: VectorSpace.of_dim(dims[b], prefix=f"{b}.") for b in branches.points},
    )
