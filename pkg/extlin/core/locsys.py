"""Local systems of vector spaces over finite groupoids.

A :class:`LocalSystem` assigns a vector space to each object of its base
and an invertible linear map to each morphism, functorially. A
:class:`LocMorphism` ``V_X -> W_Y`` consists of a base functor
``f: X -> Y`` and components ``φ_x: V_x -> W_{f(x)}``.

Base change along ``f`` comes in three flavours:

- ``pullback(f, W)`` is precomposition,
- ``pushforward(f, V)`` is the left Kan extension, computed at each
  ``y`` as the cokernel of the relations of a finite coend,
- ``sections(f, V)`` is the right Kan extension, computed as the kernel
  of the constraints of a finite end.

Canonical comparison maps are built explicitly and their invertibility
is decided by rank, never by comparing dimensions.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Hashable, List, Mapping, Optional, Sequence, Tuple

from . import fingrpd
from .errors import (
    CompositionError,
    FunctorialityError,
    NaturalityError,
    UnsupportedBaseError,
    UnsupportedShapeError,
)
from .fingrpd import FinGroupoid, GroupoidFunctor, MorphismId, ObjectId
from .finvect import (
    DirectSum,
    LinearMap,
    VectorSpace,
    cokernel,
    compose,
    devectorize,
    direct_sum,
    hom_adjunction_witness,
    hom_map,
    identity,
    internal_hom,
    inverse,
    is_invertible,
    kernel,
    map_from_columns,
    right_inverse,
    solve,
    solve_left,
    sub_maps,
    tensor_map,
    tensor_space,
    unit_space,
    vectorize,
    zero_map,
)
from .groups import FiniteGroup, direct_product

logger = logging.getLogger(__name__)


class LocalSystem:
    """A functor from a finite groupoid into finite-dimensional vector spaces.

    Args:
        base: The base groupoid
        fibers: Object id to its fiber
        transport: Morphism id to a linear map between the fibers of its endpoints
        name: Display name
        validate: Check shapes and functoriality
    """

    def __init__(
        self,
        base: FinGroupoid,
        fibers: Mapping[ObjectId, VectorSpace],
        transport: Mapping[MorphismId, LinearMap],
        name: str = "",
        validate: bool = True,
    ):
        self.base = base
        self.fibers: Dict[ObjectId, VectorSpace] = dict(fibers)
        self.transport: Dict[MorphismId, LinearMap] = dict(transport)
        self.name = name
        if validate:
            self._validate()

    def _validate(self):
        b = self.base
        for x in b.objects:
            if x not in self.fibers:
                raise FunctorialityError(f"Missing fiber over {x!r}", location=("fibers", x))
        for m in b.morphisms:
            t = self.transport.get(m)
            if t is None:
                raise FunctorialityError(f"Missing transport along {m!r}", location=("transport", m))
            if t.domain != self.fibers[b.src[m]] or t.codomain != self.fibers[b.dst[m]]:
                raise FunctorialityError(
                    f"Transport along {m!r} has the wrong domain or codomain",
                    location=("transport", m),
                )
        for x in b.objects:
            if self.transport[b.identity(x)] != identity(self.fibers[x]):
                raise FunctorialityError(
                    f"Transport along the identity of {x!r} is not the identity",
                    location=("transport", b.identity(x)),
                )
        for g, f in b.composable_pairs():
            if self.transport[b.compose(g, f)] != compose(self.transport[g], self.transport[f]):
                raise FunctorialityError(
                    f"Transport is not functorial on ({g!r}, {f!r})",
                    location=("transport", g, f),
                    payload={"pair": [repr(g), repr(f)]},
                )

    def fiber(self, x: ObjectId) -> VectorSpace:
        return self.fibers[x]

    def along(self, m: MorphismId) -> LinearMap:
        return self.transport[m]

    def dims(self) -> Dict[ObjectId, int]:
        return {x: self.fibers[x].dim for x in self.base.objects}

    def total_dim(self) -> int:
        return sum(self.fibers[x].dim for x in self.base.objects)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalSystem):
            return NotImplemented
        return self.base == other.base and self.fibers == other.fibers and self.transport == other.transport

    def __hash__(self) -> int:
        return hash((self.base, tuple(self.fibers.get(x) for x in self.base.objects)))

    def __repr__(self) -> str:
        return f"<LocalSystem {self.name} over {self.base!r} dims={list(self.dims().values())}>"


class LocMorphism:
    """A morphism of local systems over a base functor.

    Components follow the contravariant convention ``φ_x: V_x -> W_{f(x)}``;
    naturality means ``W(f(m)) ∘ φ_x = φ_{x'} ∘ V(m)`` for ``m: x -> x'``.
    """

    def __init__(
        self,
        source: LocalSystem,
        target: LocalSystem,
        functor: GroupoidFunctor,
        components: Mapping[ObjectId, LinearMap],
        validate: bool = True,
    ):
        self.source = source
        self.target = target
        self.functor = functor
        self.components: Dict[ObjectId, LinearMap] = dict(components)
        if validate:
            self._validate()

    def _validate(self):
        f = self.functor
        if f.source != self.source.base or f.target != self.target.base:
            raise CompositionError("Base functor does not match the bases of the systems")
        for x in self.source.base.objects:
            c = self.components.get(x)
            if c is None or c.domain != self.source.fiber(x) or c.codomain != self.target.fiber(f.obj(x)):
                raise NaturalityError(f"Component at {x!r} has the wrong type", location=("components", x))
        b = self.source.base
        for m in b.morphisms:
            x, y = b.src[m], b.dst[m]
            left = compose(self.target.along(f.mor(m)), self.components[x])
            right = compose(self.components[y], self.source.along(m))
            if left != right:
                raise NaturalityError(
                    f"Naturality fails along {m!r}",
                    location=("components", m),
                    payload={"morphism": repr(m)},
                )

    def component(self, x: ObjectId) -> LinearMap:
        return self.components[x]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocMorphism):
            return NotImplemented
        return (
            self.functor == other.functor
            and self.source == other.source
            and self.target == other.target
            and self.components == other.components
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target))

    def __repr__(self) -> str:
        return f"<LocMorphism {self.source!r} -> {self.target!r}>"


# =============================================================================
# Constructors
# =============================================================================


def constant_system(base: FinGroupoid, space: VectorSpace, name: str = "") -> LocalSystem:
    """The system with fiber ``space`` everywhere and identity transports."""
    return LocalSystem(
        base,
        {x: space for x in base.objects},
        {m: identity(space) for m in base.morphisms},
        name=name or f"const({space.dim})",
        validate=False,
    )


def unit_system(base: FinGroupoid) -> LocalSystem:
    return constant_system(base, unit_space(), name="1")


def zero_system(base: FinGroupoid) -> LocalSystem:
    return constant_system(base, VectorSpace.zero(), name="0")


def bundle_over_set(points: Sequence[ObjectId], spaces: Mapping[ObjectId, VectorSpace]) -> LocalSystem:
    """A vector bundle over a finite set: a system over the discrete groupoid."""
    base = fingrpd.discrete(points)
    return LocalSystem(
        base,
        {x: spaces[x] for x in points},
        {base.identity(x): identity(spaces[x]) for x in points},
        name="bundle",
    )


def representation(
    group: FiniteGroup,
    space: VectorSpace,
    matrices: Mapping[Hashable, LinearMap],
    base: Optional[FinGroupoid] = None,
    name: str = "",
) -> LocalSystem:
    """A group representation as a local system over ``BG``."""
    base = base if base is not None else fingrpd.delooping(group)
    return LocalSystem(base, {fingrpd.POINT: space}, dict(matrices), name=name or f"rep({group.name})")


def permutation_representation(
    group: FiniteGroup,
    points: Sequence[Hashable],
    action: Callable[[Hashable, Hashable], Hashable],
    name: str = "",
) -> LocalSystem:
    """``K[S]`` with ``g`` sending basis vector ``s`` to ``g·s``."""
    space = VectorSpace(tuple(str(p) for p in points))
    index = {p: i for i, p in enumerate(points)}
    matrices = {}
    for g in group.elements:
        columns = []
        for p in points:
            col = [0] * len(points)
            col[index[action(g, p)]] = 1
            columns.append(col)
        matrices[g] = _fraction_map(space, space, columns)
    return representation(group, space, matrices, name=name or f"perm({group.name})")


def regular_representation(group: FiniteGroup) -> LocalSystem:
    return permutation_representation(group, group.elements, group.mul, name=f"K[{group.name}]")


def character_representation(group: FiniteGroup, character: Mapping[Hashable, int], name: str = "") -> LocalSystem:
    """A one-dimensional representation from a ``±1``-valued character."""
    space = VectorSpace(("v",))
    matrices = {g: _fraction_map(space, space, [[character[g]]]) for g in group.elements}
    return representation(group, space, matrices, name=name or "chi")


def _fraction_map(domain: VectorSpace, codomain: VectorSpace, columns) -> LinearMap:
    return map_from_columns(domain, codomain, [[Fraction(v) for v in col] for col in columns])


# =============================================================================
# Morphism algebra
# =============================================================================


def identity_loc(system: LocalSystem) -> LocMorphism:
    return LocMorphism(
        system,
        system,
        fingrpd.identity_functor(system.base),
        {x: identity(system.fiber(x)) for x in system.base.objects},
        validate=False,
    )


def compose_loc(psi: LocMorphism, phi: LocMorphism) -> LocMorphism:
    """``ψ ∘ φ`` with components ``ψ_{f(x)} ∘ φ_x`` over ``g ∘ f``."""
    if phi.target != psi.source:
        raise CompositionError(f"Cannot compose {psi!r} after {phi!r}: systems differ")
    f = phi.functor
    return LocMorphism(
        phi.source,
        psi.target,
        fingrpd.compose_functors(psi.functor, f),
        {x: compose(psi.component(f.obj(x)), phi.component(x)) for x in phi.source.base.objects},
        validate=False,
    )


def is_invertible_loc(phi: LocMorphism) -> bool:
    """Isomorphism of bases and invertibility of every component."""
    return fingrpd.is_isomorphism(phi.functor) and all(
        is_invertible(c) for c in phi.components.values()
    )


def inverse_loc(phi: LocMorphism) -> LocMorphism:
    if not is_invertible_loc(phi):
        raise NaturalityError(f"{phi!r} is not invertible")
    f_inv = fingrpd.inverse_functor(phi.functor)
    return LocMorphism(
        phi.target,
        phi.source,
        f_inv,
        {y: inverse(phi.component(f_inv.obj(y))) for y in phi.target.base.objects},
    )


def same_components(phi: LocMorphism, psi: LocMorphism) -> bool:
    """Equality of component matrices, ignoring basis labels."""
    return phi.functor.object_map == psi.functor.object_map and all(
        phi.component(x).matrix == psi.component(x).matrix for x in phi.source.base.objects
    )


# =============================================================================
# Pullback
# =============================================================================


def pullback(f: GroupoidFunctor, system: LocalSystem) -> LocalSystem:
    """``f*W``: fiber ``W_{f(x)}`` over ``x``."""
    if f.target != system.base:
        raise CompositionError("Pullback functor does not land in the base of the system")
    return LocalSystem(
        f.source,
        {x: system.fiber(f.obj(x)) for x in f.source.objects},
        {m: system.along(f.mor(m)) for m in f.source.morphisms},
        name=f"{f.name}*{system.name}",
        validate=False,
    )


def pullback_mor(f: GroupoidFunctor, psi: LocMorphism) -> LocMorphism:
    """``f*ψ`` for ``ψ`` over the identity of the target of ``f``."""
    return LocMorphism(
        pullback(f, psi.source),
        pullback(f, psi.target),
        fingrpd.identity_functor(f.source),
        {x: psi.component(f.obj(x)) for x in f.source.objects},
        validate=False,
    )


def cartesian_lift(f: GroupoidFunctor, system: LocalSystem) -> LocMorphism:
    """The morphism ``f*W -> W`` over ``f`` with identity components."""
    pulled = pullback(f, system)
    return LocMorphism(
        pulled, system, f, {x: identity(pulled.fiber(x)) for x in f.source.objects}, validate=False
    )


# =============================================================================
# Pushforward (left Kan extension)
# =============================================================================


@dataclass
class Coend:
    """``(f_!V)_y`` as a quotient of ``⊕_{(x, a: f(x) -> y)} V_x``."""

    generators: List[Tuple[ObjectId, MorphismId]]
    index: Dict[Tuple[ObjectId, MorphismId], int]
    summed: DirectSum
    projection: LinearMap
    section: LinearMap

    def inject(self, x: ObjectId, a: MorphismId) -> LinearMap:
        return compose(self.projection, self.summed.injection(self.index[(x, a)]))

    def descend(self, blocks: Callable[[ObjectId, MorphismId], LinearMap], codomain: VectorSpace) -> LinearMap:
        """The map out of the coend given generator-wise; must kill the relations."""
        raw = self.summed.copair([blocks(x, a) for x, a in self.generators], codomain)
        return compose(raw, self.section)


def _coend_at(
    f: GroupoidFunctor,
    system: LocalSystem,
    y: ObjectId,
    objects: Sequence[ObjectId],
) -> Coend:
    x_grpd, y_grpd = f.source, f.target
    generators = [(x, a) for x in objects for a in y_grpd.hom(f.obj(x), y)]
    index = {g: i for i, g in enumerate(generators)}
    summed = direct_sum([system.fiber(x) for x, _ in generators], tags=[f"g{i}" for i in range(len(generators))])
    keep = set(objects)
    columns: List[List] = []
    for m in x_grpd.morphisms:
        x, x2 = x_grpd.src[m], x_grpd.dst[m]
        if x not in keep or x2 not in keep:
            continue
        vm = system.along(m)
        for a in y_grpd.hom(f.obj(x2), y):
            left = summed.injection(index[(x, y_grpd.compose(a, f.mor(m)))])
            right = compose(summed.injection(index[(x2, a)]), vm)
            rel = sub_maps(left, right)
            for j in range(system.fiber(x).dim):
                columns.append(list(rel.column(j)))
    relations = map_from_columns(VectorSpace.of_dim(len(columns), "r"), summed.space, columns)
    space, projection = cokernel(relations, prefix=f"{y}:c")
    section = right_inverse(projection)
    logger.debug("coend at %r: %d generators, %d relations, dim %d", y, summed.space.dim, len(columns), space.dim)
    return Coend(generators, index, summed, projection, section)


@dataclass
class Pushforward:
    """``f_!V`` with its coends and the unit ``η: V -> f*f_!V`` (over ``id``)."""

    functor: GroupoidFunctor
    source: LocalSystem
    system: LocalSystem
    coends: Dict[ObjectId, Coend]
    unit: LocMorphism


def _pushforward_system(f: GroupoidFunctor, system: LocalSystem, objects: Sequence[ObjectId]) -> Tuple[LocalSystem, Dict]:
    y_grpd = f.target
    coends = {y: _coend_at(f, system, y, objects) for y in y_grpd.objects}
    fibers = {y: coends[y].projection.codomain for y in y_grpd.objects}
    transport = {}
    for b in y_grpd.morphisms:
        y, y2 = y_grpd.src[b], y_grpd.dst[b]
        target = coends[y2]
        transport[b] = coends[y].descend(lambda x, a: target.inject(x, y_grpd.compose(b, a)), fibers[y2])
    pushed = LocalSystem(y_grpd, fibers, transport, name=f"{f.name}!{system.name}")
    return pushed, coends


def pushforward(f: GroupoidFunctor, system: LocalSystem) -> Pushforward:
    """Left Kan extension ``f_!V`` by the generic coend formula."""
    if f.source != system.base:
        raise CompositionError("Pushforward functor does not start at the base of the system")
    pushed, coends = _pushforward_system(f, system, f.source.objects)
    unit = LocMorphism(
        system,
        pullback(f, pushed),
        fingrpd.identity_functor(f.source),
        {x: coends[f.obj(x)].inject(x, f.target.identity(f.obj(x))) for x in f.source.objects},
    )
    return Pushforward(f, system, pushed, coends, unit)


def pushforward_counit(f: GroupoidFunctor, system: LocalSystem) -> LocMorphism:
    """``ε: f_!f*W -> W`` over ``id``: ``[x, a, w] ↦ W(a) w``."""
    pf = pushforward(f, pullback(f, system))
    return LocMorphism(
        pf.system,
        system,
        fingrpd.identity_functor(f.target),
        {
            y: pf.coends[y].descend(lambda x, a: system.along(a), system.fiber(y))
            for y in f.target.objects
        },
    )


def pushforward_mor(f: GroupoidFunctor, phi: LocMorphism) -> LocMorphism:
    """``f_!φ`` for ``φ`` over the identity of the source of ``f``."""
    src = pushforward(f, phi.source)
    tgt = pushforward(f, phi.target)
    return LocMorphism(
        src.system,
        tgt.system,
        fingrpd.identity_functor(f.target),
        {
            y: src.coends[y].descend(
                lambda x, a: compose(tgt.coends[y].inject(x, a), phi.component(x)),
                tgt.system.fiber(y),
            )
            for y in f.target.objects
        },
    )


def adjunct(phi: LocMorphism, pushed: Optional[Pushforward] = None) -> LocMorphism:
    """``φ̃: f_!V -> W`` over ``id``, ``[x, a, v] ↦ W(a) φ_x v``."""
    f = phi.functor
    pf = pushed if pushed is not None else pushforward(f, phi.source)
    target = phi.target
    return LocMorphism(
        pf.system,
        target,
        fingrpd.identity_functor(f.target),
        {
            y: pf.coends[y].descend(
                lambda x, a: compose(target.along(a), phi.component(x)), target.fiber(y)
            )
            for y in f.target.objects
        },
    )


def unadjunct(pf: Pushforward, psi: LocMorphism) -> LocMorphism:
    """Inverse of :func:`adjunct`: ``φ_x = ψ_{f(x)} ∘ η_x``.

    Args:
        pf: The pushforward ``f_!V`` that ``psi`` starts from
        psi: A morphism ``f_!V -> W`` over the identity
    """
    f = pf.functor
    return LocMorphism(
        pf.source,
        psi.target,
        f,
        {x: compose(psi.component(f.obj(x)), pf.unit.component(x)) for x in f.source.objects},
    )


# =============================================================================
# Sections (right Kan extension)
# =============================================================================


@dataclass
class End:
    """``(f_*V)_y`` as a subspace of ``⊕_{(x, a: y -> f(x))} V_x``."""

    factors: List[Tuple[ObjectId, MorphismId]]
    index: Dict[Tuple[ObjectId, MorphismId], int]
    summed: DirectSum
    inclusion: LinearMap
    retraction: LinearMap

    def evaluate(self, x: ObjectId, a: MorphismId) -> LinearMap:
        return compose(self.summed.projection(self.index[(x, a)]), self.inclusion)

    def lift(self, blocks: Callable[[ObjectId, MorphismId], LinearMap], domain: VectorSpace) -> LinearMap:
        """The map into the end given factor-wise; must satisfy the constraints."""
        raw = self.summed.pair([blocks(x, a) for x, a in self.factors], domain)
        return compose(self.retraction, raw)


def _end_at(
    f: GroupoidFunctor,
    system: LocalSystem,
    y: ObjectId,
    objects: Sequence[ObjectId],
) -> End:
    x_grpd, y_grpd = f.source, f.target
    factors = [(x, a) for x in objects for a in y_grpd.hom(y, f.obj(x))]
    index = {g: i for i, g in enumerate(factors)}
    summed = direct_sum([system.fiber(x) for x, _ in factors], tags=[f"p{i}" for i in range(len(factors))])
    keep = set(objects)
    rows: List[LinearMap] = []
    for m in x_grpd.morphisms:
        x, x2 = x_grpd.src[m], x_grpd.dst[m]
        if x not in keep or x2 not in keep:
            continue
        vm = system.along(m)
        for a in y_grpd.hom(y, f.obj(x)):
            left = compose(vm, summed.projection(index[(x, a)]))
            right = summed.projection(index[(x2, y_grpd.compose(f.mor(m), a))])
            rows.append(sub_maps(left, right))
    constraint_space = direct_sum([r.codomain for r in rows], tags=[f"q{i}" for i in range(len(rows))])
    constraints = constraint_space.pair(rows, summed.space)
    space, inclusion = kernel(constraints, prefix=f"{y}:k")
    retraction = solve_left(inclusion, identity(space))
    logger.debug("end at %r: %d factors, %d constraints, dim %d", y, summed.space.dim, len(rows), space.dim)
    return End(factors, index, summed, inclusion, retraction)


@dataclass
class Sections:
    """``f_*V`` with its ends and the counit ``ε: f*f_*V -> V`` (over ``id``)."""

    functor: GroupoidFunctor
    source: LocalSystem
    system: LocalSystem
    ends: Dict[ObjectId, End]
    counit: LocMorphism


def _sections_system(f: GroupoidFunctor, system: LocalSystem, objects: Sequence[ObjectId]) -> Tuple[LocalSystem, Dict]:
    y_grpd = f.target
    ends = {y: _end_at(f, system, y, objects) for y in y_grpd.objects}
    fibers = {y: ends[y].inclusion.domain for y in y_grpd.objects}
    transport = {}
    for b in y_grpd.morphisms:
        y, y2 = y_grpd.src[b], y_grpd.dst[b]
        source = ends[y]
        transport[b] = ends[y2].lift(lambda x, a: source.evaluate(x, y_grpd.compose(a, b)), fibers[y])
    return LocalSystem(y_grpd, fibers, transport, name=f"{f.name}*{system.name}"), ends


def sections(f: GroupoidFunctor, system: LocalSystem) -> Sections:
    """Right Kan extension ``f_*V`` by the generic end formula."""
    if f.source != system.base:
        raise CompositionError("Sections functor does not start at the base of the system")
    pushed, ends = _sections_system(f, system, f.source.objects)
    counit = LocMorphism(
        pullback(f, pushed),
        system,
        fingrpd.identity_functor(f.source),
        {x: ends[f.obj(x)].evaluate(x, f.target.identity(f.obj(x))) for x in f.source.objects},
    )
    return Sections(f, system, pushed, ends, counit)


def sections_unit(f: GroupoidFunctor, system: LocalSystem) -> LocMorphism:
    """``η: W -> f_*f*W`` over ``id``: ``w ↦ (W(a) w)_{(x, a)}``."""
    sec = sections(f, pullback(f, system))
    return LocMorphism(
        system,
        sec.system,
        fingrpd.identity_functor(f.target),
        {
            y: sec.ends[y].lift(lambda x, a: system.along(a), system.fiber(y))
            for y in f.target.objects
        },
    )


def sections_mor(f: GroupoidFunctor, phi: LocMorphism) -> LocMorphism:
    """``f_*φ`` for ``φ`` over the identity of the source of ``f``."""
    src = sections(f, phi.source)
    tgt = sections(f, phi.target)
    return LocMorphism(
        src.system,
        tgt.system,
        fingrpd.identity_functor(f.target),
        {
            y: tgt.ends[y].lift(
                lambda x, a: compose(phi.component(x), src.ends[y].evaluate(x, a)),
                src.system.fiber(y),
            )
            for y in f.target.objects
        },
    )


def sections_adjunct(f: GroupoidFunctor, psi: LocMorphism, target: LocalSystem) -> LocMorphism:
    """Transpose ``ψ: f*W -> V`` (over ``id``) to ``W -> f_*V``; ``target`` is ``W``."""
    sec = sections(f, psi.target)
    return LocMorphism(
        target,
        sec.system,
        fingrpd.identity_functor(f.target),
        {
            y: sec.ends[y].lift(
                lambda x, a: compose(psi.component(x), target.along(a)), target.fiber(y)
            )
            for y in f.target.objects
        },
    )


# =============================================================================
# Skeletal cross-checks
# =============================================================================


def pushforward_skeletal_comparison(f: GroupoidFunctor, system: LocalSystem) -> LocMorphism:
    """The canonical map from the coend over basepoints to the full coend.

    Restricting the coend to a skeleton of the source computes ``f_!V`` as
    coinvariants at basepoints; this map compares the two computations.
    """
    skl = fingrpd.skeletize(f.source)
    basepoints = skl.skeleton.objects
    small, small_coends = _pushforward_system(f, system, basepoints)
    full = pushforward(f, system)
    return LocMorphism(
        small,
        full.system,
        fingrpd.identity_functor(f.target),
        {y: small_coends[y].descend(full.coends[y].inject, full.system.fiber(y)) for y in f.target.objects},
    )


def sections_skeletal_comparison(f: GroupoidFunctor, system: LocalSystem) -> LocMorphism:
    """Restriction from the full end to the end over basepoints."""
    skl = fingrpd.skeletize(f.source)
    small, small_ends = _sections_system(f, system, skl.skeleton.objects)
    full = sections(f, system)
    return LocMorphism(
        full.system,
        small,
        fingrpd.identity_functor(f.target),
        {y: small_ends[y].lift(full.ends[y].evaluate, full.system.fiber(y)) for y in f.target.objects},
    )


# =============================================================================
# Ambidexterity over finite sets
# =============================================================================


@dataclass
class AmbidexterityWitness:
    norm: LocMorphism
    inverse: LocMorphism


def ambidexterity_witness(system: LocalSystem) -> AmbidexterityWitness:
    """The canonical ``p_!V -> p_*V`` for ``p: X -> pt`` over a finite set ``X``.

    Raises:
        UnsupportedBaseError: If the base is not discrete.
    """
    if not system.base.is_discrete():
        raise UnsupportedBaseError(f"Ambidexterity is only formed over discrete bases, got {system.base!r}")
    p = fingrpd.terminal_functor(system.base)
    push = pushforward(p, system)
    sec = sections(p, system)
    star = p.target.objects[0]
    coend, end = push.coends[star], sec.ends[star]

    def block(x: ObjectId, a: MorphismId) -> LinearMap:
        return end.lift(
            lambda x2, a2: identity(system.fiber(x)) if x2 == x else zero_map(system.fiber(x), system.fiber(x2)),
            system.fiber(x),
        )

    norm = LocMorphism(
        push.system,
        sec.system,
        fingrpd.identity_functor(p.target),
        {star: coend.descend(block, sec.system.fiber(star))},
    )
    return AmbidexterityWitness(norm, inverse_loc(norm))


# =============================================================================
# Coproducts
# =============================================================================


@dataclass
class LocCoproduct:
    system: LocalSystem
    coprojections: Tuple[LocMorphism, ...]
    base: fingrpd.Coproduct

    def copair(self, morphisms: Sequence[LocMorphism], target: LocalSystem) -> LocMorphism:
        functor = self.base.copair([m.functor for m in morphisms], target.base)
        return LocMorphism(
            self.system,
            target,
            functor,
            {(i, x): morphisms[i].component(x) for (i, x) in self.system.base.objects},
        )


def coproduct_loc(systems: Sequence[LocalSystem]) -> LocCoproduct:
    base = fingrpd.coproduct([s.base for s in systems])
    fibers = {(i, x): s.fiber(x) for i, s in enumerate(systems) for x in s.base.objects}
    transport = {(i, m): s.along(m) for i, s in enumerate(systems) for m in s.base.morphisms}
    system = LocalSystem(base.groupoid, fibers, transport, name=" + ".join(s.name for s in systems), validate=False)
    coprojections = tuple(
        LocMorphism(
            s,
            system,
            base.coprojections[i],
            {x: identity(s.fiber(x)) for x in s.base.objects},
            validate=False,
        )
        for i, s in enumerate(systems)
    )
    return LocCoproduct(system, coprojections, base)


def restrict(system: LocalSystem, sub: FinGroupoid) -> LocalSystem:
    return pullback(fingrpd.inclusion_functor(sub, system.base), system)


@dataclass
class ComponentDecomposition:
    """A system as the coproduct of its restrictions to connected components."""

    pieces: List[LocalSystem]
    coproduct: LocCoproduct
    comparison: LocMorphism


def restrict_to_components(system: LocalSystem) -> ComponentDecomposition:
    blocks = fingrpd.connected_components(system.base)
    subs = [fingrpd.full_subgroupoid(system.base, b) for b in blocks]
    pieces = [restrict(system, s) for s in subs]
    coprod = coproduct_loc(pieces)
    comparison = coprod.copair(
        [cartesian_lift(fingrpd.inclusion_functor(s, system.base), system) for s in subs],
        system,
    )
    return ComponentDecomposition(pieces, coprod, comparison)


# =============================================================================
# Tensor products
# =============================================================================


def tensor_loc(v: LocalSystem, w: LocalSystem) -> LocalSystem:
    """Fiberwise tensor product over a common base."""
    if v.base != w.base:
        raise CompositionError("Fiberwise tensor needs a common base")
    return LocalSystem(
        v.base,
        {x: tensor_space(v.fiber(x), w.fiber(x)) for x in v.base.objects},
        {m: tensor_map(v.along(m), w.along(m)) for m in v.base.morphisms},
        name=f"{v.name}⊗{w.name}",
        validate=False,
    )


def internal_hom_loc(v: LocalSystem, w: LocalSystem) -> LocalSystem:
    """Fiberwise ``[V, W]`` with transport ``M ↦ W(m) M V(m)⁻¹``."""
    if v.base != w.base:
        raise CompositionError("Fiberwise hom needs a common base")
    b = v.base
    return LocalSystem(
        b,
        {x: internal_hom(v.fiber(x), w.fiber(x)) for x in b.objects},
        {m: hom_map(v.along(b.inverse(m)), w.along(m)) for m in b.morphisms},
        name=f"[{v.name},{w.name}]",
        validate=False,
    )


def external_tensor(v: LocalSystem, w: LocalSystem) -> LocalSystem:
    """``V ⊠ W`` over ``X × Y`` with fiber ``V_x ⊗ W_y``."""
    base = fingrpd.product(v.base, w.base).groupoid
    return LocalSystem(
        base,
        {(x, y): tensor_space(v.fiber(x), w.fiber(y)) for (x, y) in base.objects},
        {(f, g): tensor_map(v.along(f), w.along(g)) for (f, g) in base.morphisms},
        name=f"{v.name}⊠{w.name}",
        validate=False,
    )


def external_tensor_mor(phi: LocMorphism, gamma: LocMorphism) -> LocMorphism:
    """``φ ⊠ γ`` over ``f × g`` with components ``φ_x ⊗ γ_y``."""
    source = external_tensor(phi.source, gamma.source)
    target = external_tensor(phi.target, gamma.target)
    functor = fingrpd.product_functor(phi.functor, gamma.functor)
    return LocMorphism(
        source,
        target,
        functor,
        {(x, y): tensor_map(phi.component(x), gamma.component(y)) for (x, y) in source.base.objects},
        validate=False,
    )


def grpd_tensoring(x: FinGroupoid, system: LocalSystem) -> LocalSystem:
    """``X · W``: the external tensor of the unit system over ``X`` with ``W``."""
    result = external_tensor(unit_system(x), system)
    result.name = f"{x.name}·{system.name}"
    return result


def external_tensor_reconstruction(v: LocalSystem, w: LocalSystem) -> LocMorphism:
    """``⊔_{(x,y)} (V_x ⊗ W_y)`` over points compared with ``V ⊠ W``, for discrete bases."""
    if not (v.base.is_discrete() and w.base.is_discrete()):
        raise UnsupportedBaseError("Reconstruction over sets needs discrete bases")
    target = external_tensor(v, w)
    lifts = [cartesian_lift(fingrpd.point_functor(target.base, pt), target) for pt in target.base.objects]
    return coproduct_loc([lift.source for lift in lifts]).copair(lifts, target)


def distributivity_comparison(v: LocalSystem, ws: Sequence[LocalSystem], side: str = "right") -> LocMorphism:
    """The canonical ``⊔_i (V ⊠ W_i) -> V ⊠ (⊔_i W_i)`` (or the mirrored form).

    Built as the copair of ``id ⊠ in_i``; ``side="left"`` gives
    ``⊔_i (W_i ⊠ V) -> (⊔_i W_i) ⊠ V``.
    """
    total = coproduct_loc(ws)
    idv = identity_loc(v)
    if side == "right":
        legs = [external_tensor_mor(idv, c) for c in total.coprojections]
    else:
        legs = [external_tensor_mor(c, idv) for c in total.coprojections]
    terms = coproduct_loc([leg.source for leg in legs])
    return terms.copair(legs, legs[0].target if legs else external_tensor(v, total.system))


def product_iso_delooping(g: FiniteGroup, h: FiniteGroup) -> GroupoidFunctor:
    """``BG × BH ≅ B(G × H)``."""
    prod = fingrpd.product(fingrpd.delooping(g), fingrpd.delooping(h))
    return GroupoidFunctor(
        prod.groupoid,
        fingrpd.delooping(direct_product(g, h)),
        {(fingrpd.POINT, fingrpd.POINT): fingrpd.POINT},
        {m: m for m in prod.groupoid.morphisms},
        name="BGxBH",
    )


def tensor_representation(v: LocalSystem, w: LocalSystem, g: FiniteGroup, h: FiniteGroup) -> LocalSystem:
    """``V ⊗ W`` as a representation of ``G × H`` over ``B(G × H)``."""
    gh = direct_product(g, h)
    space = tensor_space(v.fiber(fingrpd.POINT), w.fiber(fingrpd.POINT))
    return representation(
        gh,
        space,
        {(a, b): tensor_map(v.along(a), w.along(b)) for (a, b) in gh.elements},
    )


# =============================================================================
# Adjunctions and the projection formula
# =============================================================================


@dataclass
class FrobeniusWitnesses:
    """Strong monoidal / strong closed pullback and the projection formula."""

    monoidal: LocMorphism
    closed: LocMorphism
    projection: LocMorphism

    def all_invertible(self) -> bool:
        return all(is_invertible_loc(w) for w in (self.monoidal, self.closed, self.projection))


def frobenius_witnesses(f: GroupoidFunctor, v: LocalSystem, w: LocalSystem, r: LocalSystem) -> FrobeniusWitnesses:
    """Witnesses for ``f`` with ``V, W`` over the target and ``R`` over the source.

    - monoidal: ``f*V ⊗ f*W -> f*(V ⊗ W)``
    - closed: ``f*[V, W] -> [f*V, f*W]``
    - projection: ``f_!(R ⊗ f*V) -> f_!R ⊗ V``
    """
    idx = fingrpd.identity_functor(f.source)
    lhs = tensor_loc(pullback(f, v), pullback(f, w))
    rhs = pullback(f, tensor_loc(v, w))
    monoidal = LocMorphism(lhs, rhs, idx, {x: identity(lhs.fiber(x)) for x in f.source.objects})
    hom_l = pullback(f, internal_hom_loc(v, w))
    hom_r = internal_hom_loc(pullback(f, v), pullback(f, w))
    closed = LocMorphism(hom_l, hom_r, idx, {x: identity(hom_l.fiber(x)) for x in f.source.objects})

    pushed_mixed = pushforward(f, tensor_loc(r, pullback(f, v)))
    pushed_r = pushforward(f, r)
    target = tensor_loc(pushed_r.system, v)
    projection = LocMorphism(
        pushed_mixed.system,
        target,
        fingrpd.identity_functor(f.target),
        {
            y: pushed_mixed.coends[y].descend(
                lambda x, a: tensor_map(pushed_r.coends[y].inject(x, a), v.along(a)),
                target.fiber(y),
            )
            for y in f.target.objects
        },
    )
    return FrobeniusWitnesses(monoidal, closed, projection)


@dataclass
class BeckChevalleyWitness:
    kind: str
    comparison: LocMorphism

    def is_invertible(self) -> bool:
        return is_invertible_loc(self.comparison)


def beck_chevalley_witness(kind: str, f: GroupoidFunctor, system: LocalSystem, other: Optional[FinGroupoid] = None, sub_objects: Optional[Sequence[ObjectId]] = None) -> BeckChevalleyWitness:
    """Mate of a pullback square, for product-projection or full-subgroupoid squares.

    ``kind="product"``: ``(f × id_Y)_! pr* V -> pr* f_! V`` with ``Y = other``.
    ``kind="embedding"``: ``f'_! i* V -> j* f_! V`` for the full subgroupoid of the
    target of ``f`` on ``sub_objects`` and its preimage.

    Raises:
        UnsupportedShapeError: For other square shapes, or an embedding whose
            preimage misses components that map into its isomorphism closure.
    """
    if kind == "product":
        if other is None:
            raise UnsupportedShapeError("Product squares need the second factor")
        return _beck_chevalley_product(f, system, other)
    if kind == "embedding":
        if sub_objects is None:
            raise UnsupportedShapeError("Embedding squares need the subgroupoid objects")
        return _beck_chevalley_embedding(f, system, sub_objects)
    raise UnsupportedShapeError(f"Unsupported square shape {kind!r}")


def _beck_chevalley_product(f: GroupoidFunctor, system: LocalSystem, y: FinGroupoid) -> BeckChevalleyWitness:
    src = fingrpd.product(f.source, y)
    tgt = fingrpd.product(f.target, y)
    fy = fingrpd.product_functor(f, fingrpd.identity_functor(y), src, tgt)
    pr = src.projections[0]
    pr_t = tgt.projections[0]
    left = pushforward(fy, pullback(pr, system))
    inner = pushforward(f, system)
    right = pullback(pr_t, inner.system)
    comparison = LocMorphism(
        left.system,
        right,
        fingrpd.identity_functor(tgt.groupoid),
        {
            (x2, y2): left.coends[(x2, y2)].descend(
                lambda xy, a: inner.coends[x2].inject(xy[0], a[0]), right.fiber((x2, y2))
            )
            for (x2, y2) in tgt.groupoid.objects
        },
    )
    return BeckChevalleyWitness("product", comparison)


def _beck_chevalley_embedding(f: GroupoidFunctor, system: LocalSystem, sub_objects: Sequence[ObjectId]) -> BeckChevalleyWitness:
    x_grpd, y_grpd = f.source, f.target
    sub_y = fingrpd.full_subgroupoid(y_grpd, sub_objects)
    keep = set(sub_y.objects)
    sub_x_objects = [x for x in x_grpd.objects if f.obj(x) in keep]
    closure = {o for block in fingrpd.connected_components(y_grpd) if keep.intersection(block) for o in block}
    hit = {o for block in fingrpd.connected_components(x_grpd) if set(block).intersection(sub_x_objects) for o in block}
    for x in x_grpd.objects:
        if f.obj(x) in closure and x not in hit:
            raise UnsupportedShapeError(
                f"Object {x!r} maps into the isomorphism closure of the subgroupoid "
                "but its component misses the preimage"
            )
    sub_x = fingrpd.full_subgroupoid(x_grpd, sub_x_objects)
    i = fingrpd.inclusion_functor(sub_x, x_grpd)
    j = fingrpd.inclusion_functor(sub_y, y_grpd)
    f_sub = GroupoidFunctor(
        sub_x,
        sub_y,
        {x: f.obj(x) for x in sub_x.objects},
        {m: f.mor(m) for m in sub_x.morphisms},
        validate=False,
    )
    left = pushforward(f_sub, pullback(i, system))
    inner = pushforward(f, system)
    right = pullback(j, inner.system)
    comparison = LocMorphism(
        left.system,
        right,
        fingrpd.identity_functor(sub_y),
        {
            y: left.coends[y].descend(inner.coends[y].inject, right.fiber(y))
            for y in sub_y.objects
        },
    )
    return BeckChevalleyWitness("embedding", comparison)


def push_external_comparison(f: GroupoidFunctor, g: GroupoidFunctor, v: LocalSystem, w: LocalSystem) -> LocMorphism:
    """``(f × g)_!(V ⊠ W) -> f_!V ⊠ g_!W`` over ``id``."""
    fg = fingrpd.product_functor(f, g)
    left = pushforward(fg, external_tensor(v, w))
    pv, pw = pushforward(f, v), pushforward(g, w)
    right = external_tensor(pv.system, pw.system)
    return LocMorphism(
        left.system,
        right,
        fingrpd.identity_functor(right.base),
        {
            (y1, y2): left.coends[(y1, y2)].descend(
                lambda xx, aa: tensor_map(pv.coends[y1].inject(xx[0], aa[0]), pw.coends[y2].inject(xx[1], aa[1])),
                right.fiber((y1, y2)),
            )
            for (y1, y2) in right.base.objects
        },
    )


def pull_external_comparison(f: GroupoidFunctor, g: GroupoidFunctor, v: LocalSystem, w: LocalSystem) -> LocMorphism:
    """``f*V ⊠ g*W -> (f × g)*(V ⊠ W)`` over ``id``; identity components."""
    left = external_tensor(pullback(f, v), pullback(g, w))
    right = pullback(fingrpd.product_functor(f, g), external_tensor(v, w))
    return LocMorphism(
        left,
        right,
        fingrpd.identity_functor(left.base),
        {xy: identity(left.fiber(xy)) for xy in left.base.objects},
    )


# =============================================================================
# External hom
# =============================================================================


def external_hom(r: LocalSystem, w: LocalSystem) -> Tuple[LocalSystem, fingrpd.Exponential]:
    """``R ⊟ W`` over ``Z^Y`` for ``R`` over a discrete ``Y``.

    The fiber over ``(z_y)_y`` is ``⊕_y [R_y, W_{z_y}]``.

    Raises:
        UnsupportedBaseError: If the base of ``R`` is not discrete.
    """
    if not r.base.is_discrete():
        raise UnsupportedBaseError(f"External hom needs a discrete base, got {r.base!r}")
    ys = r.base.objects
    exp = fingrpd.exponential(w.base, r.base)
    sums: Dict[ObjectId, DirectSum] = {}
    for zs in exp.groupoid.objects:
        sums[zs] = _hom_sum(r, w, zs)
    transport = {}
    for ms in exp.groupoid.morphisms:
        src, dst = exp.groupoid.src[ms], exp.groupoid.dst[ms]
        transport[ms] = sums[src].diagonal(
            [hom_map(identity(r.fiber(y)), w.along(m)) for y, m in zip(ys, ms)],
            sums[dst],
        )
    system = LocalSystem(
        exp.groupoid,
        {zs: sums[zs].space for zs in exp.groupoid.objects},
        transport,
        name=f"{r.name}⊟{w.name}",
    )
    return system, exp


def _hom_sum(r: LocalSystem, w: LocalSystem, zs: Tuple) -> DirectSum:
    return direct_sum(
        [internal_hom(r.fiber(y), w.fiber(z)) for y, z in zip(r.base.objects, zs)],
        tags=[str(y) for y in r.base.objects],
    )


def external_hom_point_comparison(r: LocalSystem, w: LocalSystem, point: Tuple) -> LinearMap:
    """Fiber of ``R ⊟ W`` at ``f = (z_y)`` compared with ``(p_Y)_*[R, f*W]``."""
    system, exp = external_hom(r, w)
    f = GroupoidFunctor(
        r.base,
        w.base,
        dict(zip(r.base.objects, point)),
        {r.base.identity(y): w.base.identity(z) for y, z in zip(r.base.objects, point)},
    )
    homs = internal_hom_loc(r, pullback(f, w))
    p = fingrpd.terminal_functor(r.base)
    sec = sections(p, homs)
    star = p.target.objects[0]
    summed = _hom_sum(r, w, point)
    end = sec.ends[star]
    return end.lift(lambda y, a: summed.projection(r.base.objects.index(y)), system.fiber(point))


@dataclass
class MorphismSpace:
    """The vector space of local-system morphisms over a fixed base functor."""

    source: LocalSystem
    target: LocalSystem
    functor: GroupoidFunctor
    summed: DirectSum
    inclusion: LinearMap

    @property
    def space(self) -> VectorSpace:
        return self.inclusion.domain

    def to_morphism(self, coords) -> LocMorphism:
        full = self.inclusion.apply(coords)
        comps = {}
        for k, x in enumerate(self.source.base.objects):
            src, tgt = self.source.fiber(x), self.target.fiber(self.functor.obj(x))
            block = full[self.summed.offsets[k]:self.summed.offsets[k] + src.dim * tgt.dim]
            comps[x] = devectorize(block, src, tgt)
        return LocMorphism(self.source, self.target, self.functor, comps)

    def coordinates(self, phi: LocMorphism):
        flat = [c for x in self.source.base.objects for c in vectorize(phi.component(x))]
        b = map_from_columns(VectorSpace.of_dim(1, "u"), self.summed.space, [flat])
        x = solve(self.inclusion, b)
        if x is None:
            raise NaturalityError("Morphism does not lie in the morphism space")
        return x.column(0)


def morphism_space(source: LocalSystem, target: LocalSystem, functor: GroupoidFunctor) -> MorphismSpace:
    """Kernel of the naturality constraints inside ``⊕_x [V_x, W_{f(x)}]``."""
    objs = source.base.objects
    summed = direct_sum(
        [internal_hom(source.fiber(x), target.fiber(functor.obj(x))) for x in objs],
        tags=[f"m{k}" for k in range(len(objs))],
    )
    index = {x: k for k, x in enumerate(objs)}
    rows = []
    for m in source.base.morphisms:
        x, x2 = source.base.src[m], source.base.dst[m]
        left = compose(hom_map(identity(source.fiber(x)), target.along(functor.mor(m))), summed.projection(index[x]))
        right = compose(hom_map(source.along(m), identity(target.fiber(functor.obj(x2)))), summed.projection(index[x2]))
        rows.append(sub_maps(left, right))
    constraint_space = direct_sum([r.codomain for r in rows], tags=[f"n{i}" for i in range(len(rows))])
    _, inclusion = kernel(constraint_space.pair(rows, summed.space), prefix="h")
    return MorphismSpace(source, target, functor, summed, inclusion)


def curry_morphism(psi: LocMorphism, v: LocalSystem, r: LocalSystem) -> LocMorphism:
    """``ψ: V ⊠ R -> W`` over ``F`` to ``V -> R ⊟ W`` over ``curry(F)``."""
    w = psi.target
    hom_sys, exp = external_hom(r, w)
    cf = fingrpd.curry_functor(psi.functor, v.base, r.base, exp)
    comps = {}
    for x in v.base.objects:
        zs = cf.obj(x)
        summed = _hom_sum(r, w, zs)
        blocks = []
        for y in r.base.objects:
            piece = psi.component((x, y))
            curry, _ = hom_adjunction_witness(v.fiber(x), r.fiber(y), piece.codomain)
            coords = curry.apply(vectorize(piece))
            blocks.append(devectorize(coords, v.fiber(x), internal_hom(r.fiber(y), piece.codomain)))
        comps[x] = summed.pair(blocks, v.fiber(x))
    return LocMorphism(v, hom_sys, cf, comps)


def uncurry_morphism(phi: LocMorphism, r: LocalSystem, w: LocalSystem) -> LocMorphism:
    """Inverse of :func:`curry_morphism`."""
    v = phi.source
    tensor = external_tensor(v, r)
    ys = list(r.base.objects)
    functor = GroupoidFunctor(
        tensor.base,
        w.base,
        {(x, y): phi.functor.obj(x)[ys.index(y)] for (x, y) in tensor.base.objects},
        {(m, e): phi.functor.mor(m)[ys.index(r.base.src[e])] for (m, e) in tensor.base.morphisms},
    )
    comps = {}
    for (x, y) in tensor.base.objects:
        zs = phi.functor.obj(x)
        summed = _hom_sum(r, w, zs)
        k = ys.index(y)
        block = compose(summed.projection(k), phi.component(x))
        target = w.fiber(zs[k])
        _, uncurry = hom_adjunction_witness(v.fiber(x), r.fiber(y), target)
        coords = uncurry.apply(vectorize(block))
        comps[(x, y)] = devectorize(coords, tensor.fiber((x, y)), target)
    return LocMorphism(tensor, w, functor, comps)


def external_hom_adjunction(v: LocalSystem, r: LocalSystem, w: LocalSystem, functor: GroupoidFunctor) -> Tuple[LinearMap, LinearMap]:
    """Mutually inverse linear maps between the two morphism spaces of ``⊠ ⊣ ⊟``."""
    left = morphism_space(external_tensor(v, r), w, functor)
    hom_sys, exp = external_hom(r, w)
    cf = fingrpd.curry_functor(functor, v.base, r.base, exp)
    right = morphism_space(v, hom_sys, cf)
    curry_cols = [
        right.coordinates(curry_morphism(left.to_morphism(e), v, r))
        for e in _basis(left.space.dim)
    ]
    uncurry_cols = [
        left.coordinates(uncurry_morphism(right.to_morphism(e), r, w))
        for e in _basis(right.space.dim)
    ]
    return (
        map_from_columns(left.space, right.space, curry_cols),
        map_from_columns(right.space, left.space, uncurry_cols),
    )


def _basis(n: int):
    for i in range(n):
        yield tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))
