"""Colimits of local systems and the decompositions built from them.

Two diagram shapes are supported:

- discrete shapes, whose colimit is :func:`~extlin.core.locsys.coproduct_loc`,
- ``BG``-shaped diagrams, i.e. a finite group acting on one local system
  by morphisms over an action on the base that is free on objects.

For the second shape the base colimit is the orbit groupoid ``X/G`` and
the fiber over ``q`` is the space of ``G``-coinvariants of ``(π_!V)_q``,
where ``π: X -> X/G`` is the quotient functor.

Example usage:
    from extlin.core import groups, locsys
    from extlin.core.colimits import borel_diagram, loc_colimit

    rho = locsys.regular_representation(groups.cyclic(2))
    colim = loc_colimit(borel_diagram(groups.cyclic(2), rho))
    colim.system.dims()      # {0: 2}
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Union

from . import fingrpd
from .errors import (
    CompositionError,
    NaturalityError,
    UnsupportedQuotientError,
    UnsupportedShapeError,
)
from .fingrpd import FinGroupoid, GroupAction, GroupoidFunctor, ObjectId, OrbitQuotient
from .finvect import (
    DirectSum,
    LinearMap,
    cokernel,
    compose,
    direct_sum,
    identity,
    left_unitor,
    right_inverse,
    sub_maps,
)
from .groups import FiniteGroup, left_cosets, subgroup
from .locsys import (
    LocalSystem,
    LocCoproduct,
    LocMorphism,
    Pushforward,
    compose_loc,
    coproduct_loc,
    external_tensor,
    external_tensor_mor,
    grpd_tensoring,
    identity_loc,
    pushforward,
)

logger = logging.getLogger(__name__)


# =============================================================================
# BG-shaped diagrams
# =============================================================================


class BGDiagram:
    """A finite group acting on a local system.

    ``morphisms[g]`` is a morphism ``V -> V`` over the functor by which ``g``
    acts on the base; composition must follow the group law.

    Raises:
        NaturalityError: If the morphisms do not form an action.
    """

    def __init__(
        self,
        group: FiniteGroup,
        system: LocalSystem,
        action: GroupAction,
        morphisms: Dict[Hashable, LocMorphism],
    ):
        self.group = group
        self.system = system
        self.action = action
        self.morphisms = dict(morphisms)
        self._validate()

    def _validate(self):
        if self.action.groupoid != self.system.base:
            raise CompositionError("The base action does not act on the base of the system")
        for g in self.group.elements:
            phi = self.morphisms.get(g)
            if phi is None or phi.functor != self.action.functor(g):
                raise NaturalityError(f"Element {g!r} does not act over its base functor", location=("morphisms", g))
        unit = self.morphisms[self.group.unit]
        if unit.components != identity_loc(self.system).components:
            raise NaturalityError("The unit does not act by the identity", location=("morphisms", self.group.unit))
        for g in self.group.elements:
            for h in self.group.elements:
                gh = compose_loc(self.morphisms[g], self.morphisms[h])
                if gh.components != self.morphisms[self.group.mul(g, h)].components:
                    raise NaturalityError(
                        f"Action law fails on ({g!r}, {h!r})",
                        location=("morphisms", g, h),
                    )


def borel_diagram(group: FiniteGroup, rho: LocalSystem) -> BGDiagram:
    """``EG · V`` with ``g`` acting on ``EG`` by ``x ↦ x g⁻¹`` and on ``V`` by ``ρ(g)``.

    Its colimit recovers ``ρ`` as a local system over ``EG/G ≅ BG``.
    """
    eg = fingrpd.e_groupoid(group)
    space = rho.fiber(fingrpd.POINT)
    base = eg.groupoid
    system = LocalSystem(
        base,
        {x: space for x in base.objects},
        {m: identity(space) for m in base.morphisms},
        name=f"E{group.name}·{rho.name}",
        validate=False,
    )
    action = fingrpd.eg_right_action(eg, group)
    morphisms = {
        g: LocMorphism(system, system, action.functor(g), {x: rho.along(g) for x in base.objects})
        for g in group.elements
    }
    return BGDiagram(group, system, action, morphisms)


def external_tensor_diagram(diagram: BGDiagram, other: LocalSystem) -> BGDiagram:
    """``D ⊠ W``: ``G`` acts on the first factor only."""
    system = external_tensor(diagram.system, other)
    functors = {
        g: fingrpd.product_functor(diagram.action.functor(g), fingrpd.identity_functor(other.base))
        for g in diagram.group.elements
    }
    action = GroupAction.from_functors(diagram.group, system.base, functors)
    ident = identity_loc(other)
    morphisms = {g: external_tensor_mor(diagram.morphisms[g], ident) for g in diagram.group.elements}
    return BGDiagram(diagram.group, system, action, morphisms)


# =============================================================================
# Colimits
# =============================================================================


@dataclass
class Colimit:
    """A colimit with its cocone.

    For discrete shapes ``cocone`` holds one coprojection per summand; for
    ``BG`` shapes it holds the single leg ``V -> colim`` over ``π``.
    """

    shape: str
    system: LocalSystem
    cocone: List[LocMorphism]
    coproduct: Optional[LocCoproduct] = None
    quotient: Optional[OrbitQuotient] = None
    pushed: Optional[Pushforward] = None
    projections: Dict[ObjectId, LinearMap] = field(default_factory=dict)
    sections: Dict[ObjectId, LinearMap] = field(default_factory=dict)

    def induced(self, cocone: Sequence[LocMorphism], base_functor: Optional[GroupoidFunctor] = None) -> LocMorphism:
        """The morphism out of the colimit determined by a cocone into ``W``.

        Args:
            cocone: One leg per summand (discrete) or a single invariant leg (``BG``)
            base_functor: The induced functor out of the base colimit; derived
                from the cocone when omitted
        """
        if self.shape == "discrete":
            return self.coproduct.copair(list(cocone), cocone[0].target)
        (leg,) = cocone
        target = leg.target
        functor = base_functor if base_functor is not None else descend_functor(self.quotient, leg.functor, target.base)
        pushed = self.pushed
        components = {}
        for q in self.quotient.groupoid.objects:
            raw = pushed.coends[q].descend(
                lambda x, a: compose(target.along(functor.mor(a)), leg.component(x)),
                target.fiber(functor.obj(q)),
            )
            components[q] = compose(raw, self.sections[q])
        return LocMorphism(self.system, target, functor, components)


def descend_functor(quotient: OrbitQuotient, functor: GroupoidFunctor, target: FinGroupoid) -> GroupoidFunctor:
    """The functor ``X/G -> Y`` through which an invariant ``F: X -> Y`` factors."""
    q = quotient.groupoid
    return GroupoidFunctor(
        q,
        target,
        {r: functor.obj(r) for r in q.objects},
        {m: functor.mor(m) for m in q.morphisms},
        name=f"{functor.name}/G",
    )


def loc_colimit(diagram: Union[BGDiagram, Sequence[LocalSystem]]) -> Colimit:
    """Colimit of a discrete or ``BG``-shaped diagram of local systems.

    Raises:
        UnsupportedShapeError: For any other diagram, or a ``BG`` diagram
            whose base action is not free on objects.
    """
    if isinstance(diagram, BGDiagram):
        return _bg_colimit(diagram)
    if isinstance(diagram, (list, tuple)) and all(isinstance(s, LocalSystem) for s in diagram):
        coprod = coproduct_loc(diagram)
        return Colimit("discrete", coprod.system, list(coprod.coprojections), coproduct=coprod)
    raise UnsupportedShapeError(f"Colimits are only formed over discrete or BG shapes, got {type(diagram).__name__}")


def _bg_colimit(diagram: BGDiagram) -> Colimit:
    try:
        quotient = fingrpd.orbit_groupoid(diagram.action)
    except UnsupportedQuotientError as exc:
        raise UnsupportedShapeError(f"BG-shaped colimit needs a free action on objects: {exc}") from exc
    pi = quotient.quotient
    pushed = pushforward(pi, diagram.system)
    q_grpd = quotient.groupoid
    projections, sections = {}, {}
    for q in q_grpd.objects:
        coend = pushed.coends[q]
        fiber = pushed.system.fiber(q)
        moves = []
        for g in diagram.group.elements:
            phi = diagram.morphisms[g]
            # π ∘ g = π, so g moves generator (x, a) to (g·x, a).
            rho_g = coend.descend(
                lambda x, a: compose(coend.inject(diagram.action.act(g, x), a), phi.component(x)),
                fiber,
            )
            moves.append(sub_maps(rho_g, identity(fiber)))
        summed = direct_sum([fiber] * len(moves), tags=[f"g{i}" for i in range(len(moves))])
        _, proj = cokernel(summed.copair(moves, fiber), prefix=f"{q}:inv")
        projections[q] = proj
        sections[q] = right_inverse(proj)
        logger.debug("coinvariants at %r: %d -> %d", q, fiber.dim, proj.codomain.dim)
    transport = {
        b: compose(
            projections[q_grpd.dst[b]],
            compose(pushed.system.along(b), sections[q_grpd.src[b]]),
        )
        for b in q_grpd.morphisms
    }
    system = LocalSystem(
        q_grpd,
        {q: projections[q].codomain for q in q_grpd.objects},
        transport,
        name=f"colim({diagram.system.name})",
    )
    leg = LocMorphism(
        diagram.system,
        system,
        pi,
        {
            x: compose(projections[pi.obj(x)], pushed.unit.component(x))
            for x in diagram.system.base.objects
        },
    )
    return Colimit("BG", system, [leg], quotient=quotient, pushed=pushed, projections=projections, sections=sections)


def borel_comparison(colimit: Colimit, group: FiniteGroup, rho: LocalSystem) -> LocMorphism:
    """The isomorphism ``colim(EG · V) -> ρ`` over ``EG/G ≅ BG``.

    ``[k, h, v]`` goes to ``ρ(h·k) v``.
    """
    q_grpd = colimit.quotient.groupoid
    bg = rho.base
    functor = GroupoidFunctor(
        q_grpd,
        bg,
        {r: fingrpd.POINT for r in q_grpd.objects},
        {m: m[0] for m in q_grpd.morphisms},
        name="to-delooping",
    )
    space = rho.fiber(fingrpd.POINT)
    (r,) = q_grpd.objects
    raw = colimit.pushed.coends[r].descend(lambda k, a: rho.along(group.mul(a[0], k)), space)
    return LocMorphism(colimit.system, rho, functor, {r: compose(raw, colimit.sections[r])})


def colimit_tensor_comparison(diagram: BGDiagram, other: LocalSystem) -> LocMorphism:
    """``colim(D ⊠ W) -> colim(D) ⊠ W`` induced by the cocone ``c ⊠ id``."""
    tensored = loc_colimit(external_tensor_diagram(diagram, other))
    colim = loc_colimit(diagram)
    leg = external_tensor_mor(colim.cocone[0], identity_loc(other))
    return tensored.induced([leg])


# =============================================================================
# Decompositions
# =============================================================================


@dataclass
class SkeletalDecomposition:
    """``V ≅ ⊔_C CoDisc(C) · V_{b_C}`` with ``V_{b_C}`` a representation of ``Aut(b_C)``."""

    representations: List[LocalSystem]
    pieces: List[LocalSystem]
    coproduct: LocCoproduct
    iso: LocMorphism


def skeletal_decomposition(system: LocalSystem) -> SkeletalDecomposition:
    """Split a system into Grpd-tensorings of group representations.

    The representation of component ``C`` lives over the full subgroupoid on
    its basepoint; the iso uses the transports along the connecting morphisms.
    """
    x = system.base
    skl = fingrpd.skeletize(x)
    gamma = skl.gamma.components
    reps, pieces = [], []
    for block in fingrpd.connected_components(x):
        b = block[0]
        point = fingrpd.full_subgroupoid(x, [b], name=f"BAut({b!r})")
        rep = LocalSystem(
            point,
            {b: system.fiber(b)},
            {m: system.along(m) for m in point.morphisms},
            name=f"{system.name}|{b!r}",
            validate=False,
        )
        reps.append(rep)
        pieces.append(grpd_tensoring(fingrpd.codiscrete(block), rep))
    coprod = coproduct_loc(pieces)
    base = coprod.system.base
    functor = GroupoidFunctor(
        base,
        x,
        {(i, (o, b)): o for (i, (o, b)) in base.objects},
        {
            (i, ((s, t), g)): x.compose_all(gamma[t], g, x.inverse(gamma[s]))
            for (i, ((s, t), g)) in base.morphisms
        },
        name="assemble",
    )
    components = {
        (i, (o, b)): compose(system.along(gamma[o]), left_unitor(system.fiber(b)))
        for (i, (o, b)) in base.objects
    }
    iso = LocMorphism(coprod.system, system, functor, components)
    logger.debug("skeletal decomposition of %r: %d pieces", system, len(pieces))
    return SkeletalDecomposition(reps, pieces, coprod, iso)


@dataclass
class QuotientIsomorphism:
    """``G ×_H V ≅ (G/H) · V`` realised with coset representatives.

    Attributes:
        lhs: The balanced product as a cokernel, with its projection
        rhs: One copy of ``V`` per left coset
        forward: ``[g, v] ↦ [gH, ρ(σ(gH)⁻¹ g) v]``
        backward: ``[gH, v] ↦ [σ(gH), v]``
    """

    lhs_projection: LinearMap
    rhs: DirectSum
    forward: LinearMap
    backward: LinearMap
    cosets: List[tuple]

    def round_trips(self) -> bool:
        lhs = self.lhs_projection.codomain
        return compose(self.backward, self.forward) == identity(lhs) and compose(
            self.forward, self.backward
        ) == identity(self.rhs.space)


def quotient_isomorphism(group: FiniteGroup, members: Sequence[Hashable], rho: LocalSystem) -> QuotientIsomorphism:
    """The balanced product of ``G`` with an ``H``-representation over ``BH``.

    Args:
        group: ``G``
        members: Elements of the subgroup ``H``
        rho: A representation of ``H`` (ids are elements of ``G``)
    """
    h_group = subgroup(group, members)
    space = rho.fiber(fingrpd.POINT)
    elements = list(group.elements)
    summed = direct_sum([space] * len(elements), tags=[str(g) for g in elements])
    index = {g: i for i, g in enumerate(elements)}
    relations = []
    for g in elements:
        for h in h_group.elements:
            left = summed.injection(index[g])
            right = compose(summed.injection(index[group.mul(g, group.inv(h))]), rho.along(h))
            relations.append(sub_maps(left, right))
    rel_sum = direct_sum([r.domain for r in relations], tags=[f"r{i}" for i in range(len(relations))])
    _, proj = cokernel(rel_sum.copair(relations, summed.space), prefix="GxV")
    section = right_inverse(proj)

    cosets = left_cosets(group, h_group.elements)
    coset_of = {g: k for k, c in enumerate(cosets) for g in c}
    rhs = direct_sum([space] * len(cosets), tags=[f"[{c[0]}]" for c in cosets])
    raw_forward = summed.copair(
        [
            compose(
                rhs.injection(coset_of[g]),
                rho.along(group.mul(group.inv(cosets[coset_of[g]][0]), g)),
            )
            for g in elements
        ],
        rhs.space,
    )
    forward = compose(raw_forward, section)
    backward = rhs.copair(
        [compose(proj, summed.injection(index[c[0]])) for c in cosets],
        proj.codomain,
    )
    return QuotientIsomorphism(proj, rhs, forward, backward, cosets)
