"""Finite groupoids, functors and natural transformations.

A :class:`FinGroupoid` stores its full composition table. Object and
morphism ids are arbitrary hashables; the constructors here use

- ``"*"`` for the single object of a delooping,
- ``(src, dst)`` for the morphisms of codiscrete and discrete groupoids,
- ``(g, w)`` for the morphism ``w -> g·w`` of an action groupoid,
- tuples for products and ``(i, x)`` pairs for coproducts.

Every public constructor validates the groupoid laws by enumeration.

Example usage:
    from extlin.core import groups
    from extlin.core.fingrpd import delooping, skeletize, codiscrete

    bg = delooping(groups.symmetric(3))
    len(bg.morphisms)                 # 6
    skeletize(codiscrete(["a", "b", "c"])).skeleton.objects    # ("a",)
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import (
    ActionLawError,
    CompositionError,
    FunctorialityError,
    GroupoidLawError,
    NaturalityError,
    UnsupportedExponentError,
    UnsupportedQuotientError,
)
from .groups import FiniteGroup

logger = logging.getLogger(__name__)

ObjectId = Hashable
MorphismId = Hashable

POINT = "*"


class FinGroupoid:
    """A finite groupoid given by objects, morphisms and a composition table.

    Args:
        objects: Object ids in a fixed order
        morphisms: ``(id, src, dst)`` triples in a fixed order
        identities: Object id to its identity morphism id
        compose: ``(g, f) -> g∘f`` for every composable pair
        name: Display name
        validate: Check the groupoid laws (disable only for derived groupoids)
    """

    def __init__(
        self,
        objects: Iterable[ObjectId],
        morphisms: Iterable[Tuple[MorphismId, ObjectId, ObjectId]],
        identities: Mapping[ObjectId, MorphismId],
        compose: Mapping[Tuple[MorphismId, MorphismId], MorphismId],
        name: str = "",
        validate: bool = True,
    ):
        self.name = name
        self.objects: Tuple[ObjectId, ...] = tuple(objects)
        triples = list(morphisms)
        self.morphisms: Tuple[MorphismId, ...] = tuple(m for m, _, _ in triples)
        self.src: Dict[MorphismId, ObjectId] = {m: s for m, s, _ in triples}
        self.dst: Dict[MorphismId, ObjectId] = {m: d for m, _, d in triples}
        self.identities: Dict[ObjectId, MorphismId] = dict(identities)
        self.table: Dict[Tuple[MorphismId, MorphismId], MorphismId] = dict(compose)
        self._homs: Dict[Tuple[ObjectId, ObjectId], List[MorphismId]] = {}
        for m in self.morphisms:
            self._homs.setdefault((self.src[m], self.dst[m]), []).append(m)
        if validate:
            self._check_shape()
        self.inverses: Dict[MorphismId, MorphismId] = self._find_inverses()
        if validate:
            self._check_laws()

    # -------------------------------------------------------------------------
    # Validation
    # -------------------------------------------------------------------------

    def _check_shape(self):
        if len(set(self.objects)) != len(self.objects):
            raise GroupoidLawError("Object ids must be distinct", location=("objects",))
        if len(self.src) != len(self.morphisms):
            raise GroupoidLawError("Morphism ids must be distinct", location=("morphisms",))
        objects = set(self.objects)
        for m in self.morphisms:
            if self.src[m] not in objects or self.dst[m] not in objects:
                raise GroupoidLawError(
                    f"Morphism {m!r} has an unknown endpoint", location=("morphisms", m)
                )
        for x in self.objects:
            e = self.identities.get(x)
            if e not in self.src or self.src[e] != x or self.dst[e] != x:
                raise GroupoidLawError(
                    f"Object {x!r} has no valid identity", location=("identities", x)
                )
        for f in self.morphisms:
            for g in self.hom_from(self.dst[f]):
                gf = self.table.get((g, f))
                if gf not in self.src:
                    raise GroupoidLawError(
                        f"Composite of {g!r} after {f!r} is missing",
                        location=("compose", g, f),
                    )
                if self.src[gf] != self.src[f] or self.dst[gf] != self.dst[g]:
                    raise GroupoidLawError(
                        f"Composite of {g!r} after {f!r} has the wrong endpoints",
                        location=("compose", g, f),
                    )

    def _find_inverses(self) -> Dict[MorphismId, MorphismId]:
        inverses = {}
        for f in self.morphisms:
            x, y = self.src[f], self.dst[f]
            candidates = [
                g for g in self._homs.get((y, x), [])
                if self.table.get((g, f)) == self.identities.get(x)
                and self.table.get((f, g)) == self.identities.get(y)
            ]
            if not candidates:
                raise GroupoidLawError(f"Morphism {f!r} is not invertible", location=("inverse", f))
            inverses[f] = candidates[0]
        return inverses

    def _check_laws(self):
        for f in self.morphisms:
            if self.table[(self.identities[self.dst[f]], f)] != f or self.table[(f, self.identities[self.src[f]])] != f:
                raise GroupoidLawError(f"Unit law fails at {f!r}", location=("compose", f))
        for f in self.morphisms:
            for g in self.hom_from(self.dst[f]):
                gf = self.table[(g, f)]
                for h in self.hom_from(self.dst[g]):
                    if self.table[(h, gf)] != self.table[(self.table[(h, g)], f)]:
                        raise GroupoidLawError(
                            f"Associativity fails on ({h!r}, {g!r}, {f!r})",
                            location=("compose", h, g, f),
                            payload={"triple": [repr(h), repr(g), repr(f)]},
                        )

    # -------------------------------------------------------------------------
    # Access
    # -------------------------------------------------------------------------

    def hom(self, x: ObjectId, y: ObjectId) -> List[MorphismId]:
        return self._homs.get((x, y), [])

    def hom_from(self, x: ObjectId) -> List[MorphismId]:
        return [m for y in self.objects for m in self.hom(x, y)]

    def compose(self, g: MorphismId, f: MorphismId) -> MorphismId:
        try:
            return self.table[(g, f)]
        except KeyError:
            raise CompositionError(f"Morphisms {g!r} and {f!r} are not composable in {self.name}") from None

    def compose_all(self, *morphisms: MorphismId) -> MorphismId:
        result = morphisms[-1]
        for m in reversed(morphisms[:-1]):
            result = self.compose(m, result)
        return result

    def identity(self, x: ObjectId) -> MorphismId:
        return self.identities[x]

    def inverse(self, f: MorphismId) -> MorphismId:
        return self.inverses[f]

    def is_discrete(self) -> bool:
        return len(self.morphisms) == len(self.objects)

    def composable_pairs(self) -> Iterable[Tuple[MorphismId, MorphismId]]:
        for f in self.morphisms:
            for g in self.hom_from(self.dst[f]):
                yield g, f

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinGroupoid):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.morphisms == other.morphisms
            and self.src == other.src
            and self.dst == other.dst
            and self.identities == other.identities
            and self.table == other.table
        )

    def __hash__(self) -> int:
        return hash((self.objects, self.morphisms))

    def __repr__(self) -> str:
        label = self.name or "FinGroupoid"
        return f"<{label}: {len(self.objects)} objects, {len(self.morphisms)} morphisms>"


class GroupoidFunctor:
    """A functor between finite groupoids, validated by enumeration."""

    def __init__(
        self,
        source: FinGroupoid,
        target: FinGroupoid,
        object_map: Mapping[ObjectId, ObjectId],
        morphism_map: Mapping[MorphismId, MorphismId],
        name: str = "",
        validate: bool = True,
    ):
        self.source = source
        self.target = target
        self.object_map: Dict[ObjectId, ObjectId] = dict(object_map)
        self.morphism_map: Dict[MorphismId, MorphismId] = dict(morphism_map)
        self.name = name
        if validate:
            self._validate()

    def _validate(self):
        s, t = self.source, self.target
        for x in s.objects:
            if self.object_map.get(x) not in t.identities:
                raise FunctorialityError(f"Object {x!r} is not sent to an object", location=("objects", x))
        for f in s.morphisms:
            image = self.morphism_map.get(f)
            if image not in t.src:
                raise FunctorialityError(f"Morphism {f!r} is not sent to a morphism", location=("morphisms", f))
            if t.src[image] != self.object_map[s.src[f]] or t.dst[image] != self.object_map[s.dst[f]]:
                raise FunctorialityError(f"Morphism {f!r} is sent to the wrong hom-set", location=("morphisms", f))
        for x in s.objects:
            if self.morphism_map[s.identity(x)] != t.identity(self.object_map[x]):
                raise FunctorialityError(f"Identity at {x!r} is not preserved", location=("identities", x))
        for g, f in s.composable_pairs():
            if self.morphism_map[s.compose(g, f)] != t.compose(self.morphism_map[g], self.morphism_map[f]):
                raise FunctorialityError(
                    f"Composition of {g!r} after {f!r} is not preserved",
                    location=("compose", g, f),
                )

    def obj(self, x: ObjectId) -> ObjectId:
        return self.object_map[x]

    def mor(self, f: MorphismId) -> MorphismId:
        return self.morphism_map[f]

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupoidFunctor):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.object_map == other.object_map
            and self.morphism_map == other.morphism_map
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target))

    def __repr__(self) -> str:
        return f"<GroupoidFunctor {self.name or ''} {self.source!r} -> {self.target!r}>"


class NaturalTransformation:
    """``alpha: F => G`` with ``components[x]: F(x) -> G(x)`` in the target."""

    def __init__(
        self,
        source: GroupoidFunctor,
        target: GroupoidFunctor,
        components: Mapping[ObjectId, MorphismId],
        validate: bool = True,
    ):
        if source.source != target.source or source.target != target.target:
            raise CompositionError("Natural transformations need parallel functors")
        self.source = source
        self.target = target
        self.components: Dict[ObjectId, MorphismId] = dict(components)
        if validate:
            self._validate()

    def _validate(self):
        base, cod = self.source.source, self.source.target
        for x in base.objects:
            a = self.components.get(x)
            if a not in cod.src or cod.src[a] != self.source.obj(x) or cod.dst[a] != self.target.obj(x):
                raise NaturalityError(f"Component at {x!r} has the wrong type", location=("components", x))
        for f in base.morphisms:
            x, y = base.src[f], base.dst[f]
            left = cod.compose(self.target.mor(f), self.components[x])
            right = cod.compose(self.components[y], self.source.mor(f))
            if left != right:
                raise NaturalityError(f"Naturality square fails at {f!r}", location=("morphisms", f))


# =============================================================================
# Basic constructors
# =============================================================================


def _pair_table(objects: Sequence[ObjectId], pairs: Iterable[Tuple[ObjectId, ObjectId]]) -> Dict:
    """Composition for groupoids whose morphisms are ``(src, dst)`` pairs."""
    present = set(pairs)
    table = {}
    for (x, y) in present:
        for (y2, z) in present:
            if y2 == y:
                table[((y, z), (x, y))] = (x, z)
    return table


def codiscrete(points: Iterable[ObjectId]) -> FinGroupoid:
    """The pair groupoid: exactly one morphism ``(x, y)`` from each ``x`` to each ``y``."""
    points = tuple(points)
    pairs = [(x, y) for x in points for y in points]
    return FinGroupoid(
        points,
        [((x, y), x, y) for x, y in pairs],
        {x: (x, x) for x in points},
        _pair_table(points, pairs),
        name=f"CoDisc{list(points)}",
    )


def discrete(points: Iterable[ObjectId]) -> FinGroupoid:
    points = tuple(points)
    pairs = [(x, x) for x in points]
    return FinGroupoid(
        points,
        [((x, x), x, x) for x in points],
        {x: (x, x) for x in points},
        _pair_table(points, pairs),
        name=f"Disc{list(points)}",
    )


def terminal() -> FinGroupoid:
    """The point groupoid ``pt``."""
    g = codiscrete([POINT])
    g.name = "pt"
    return g


def empty() -> FinGroupoid:
    return FinGroupoid((), (), {}, {}, name="empty")


def delooping(group: FiniteGroup) -> FinGroupoid:
    """``BG``: one object ``"*"``; composition ``g∘f = g·f``."""
    return FinGroupoid(
        (POINT,),
        [(g, POINT, POINT) for g in group.elements],
        {POINT: group.unit},
        {(g, f): group.mul(g, f) for g in group.elements for f in group.elements},
        name=f"B{group.name}",
    )


@dataclass
class ActionGroupoid:
    """An action groupoid with its canonical functor to the delooping."""

    groupoid: FinGroupoid
    projection: GroupoidFunctor


def action_groupoid(
    group: FiniteGroup,
    points: Sequence[ObjectId],
    action: Callable[[Hashable, ObjectId], ObjectId],
    name: str = "",
) -> ActionGroupoid:
    """``W//G`` with morphisms ``(g, w): w -> g·w``.

    Raises:
        ActionLawError: If ``action`` is not a left action on ``points``.
    """
    points = tuple(points)
    members = set(points)
    for g in group.elements:
        for w in points:
            if action(g, w) not in members:
                raise ActionLawError(f"{g!r}·{w!r} leaves the set", location=("action", g, w))
    for w in points:
        if action(group.unit, w) != w:
            raise ActionLawError(f"The unit moves {w!r}", location=("action", group.unit, w))
    for g, h in itertools.product(group.elements, repeat=2):
        for w in points:
            if action(g, action(h, w)) != action(group.mul(g, h), w):
                raise ActionLawError(
                    f"Action law fails on ({g!r}, {h!r}, {w!r})",
                    location=("action", g, h, w),
                )
    morphisms = [((g, w), w, action(g, w)) for w in points for g in group.elements]
    table = {
        ((h, action(g, w)), (g, w)): (group.mul(h, g), w)
        for w in points
        for g in group.elements
        for h in group.elements
    }
    grpd = FinGroupoid(
        points,
        morphisms,
        {w: (group.unit, w) for w in points},
        table,
        name=name or f"{list(points)}//{group.name}",
    )
    bg = delooping(group)
    projection = GroupoidFunctor(
        grpd,
        bg,
        {w: POINT for w in points},
        {m: m[0] for m in grpd.morphisms},
        name="to-delooping",
    )
    return ActionGroupoid(grpd, projection)


@dataclass
class EGroupoid:
    """``EG`` with its quotient ``q: EG -> BG`` and the isomorphism to ``CoDisc(G)``."""

    groupoid: FinGroupoid
    quotient: GroupoidFunctor
    to_codiscrete: GroupoidFunctor


def e_groupoid(group: FiniteGroup) -> EGroupoid:
    """The action groupoid of left multiplication; ``q(h, g) = h``."""
    acted = action_groupoid(group, group.elements, group.mul, name=f"E{group.name}")
    eg = acted.groupoid
    cod = codiscrete(group.elements)
    iso = GroupoidFunctor(
        eg,
        cod,
        {g: g for g in group.elements},
        {(h, g): (g, group.mul(h, g)) for (h, g) in eg.morphisms},
        name="EG-to-CoDisc",
    )
    return EGroupoid(eg, acted.projection, iso)


# =============================================================================
# Functors
# =============================================================================


def identity_functor(x: FinGroupoid) -> GroupoidFunctor:
    return GroupoidFunctor(
        x, x, {o: o for o in x.objects}, {m: m for m in x.morphisms}, name="id", validate=False
    )


def compose_functors(g: GroupoidFunctor, f: GroupoidFunctor) -> GroupoidFunctor:
    """``g ∘ f``."""
    if f.target != g.source:
        raise CompositionError(f"Cannot compose {g!r} after {f!r}")
    return GroupoidFunctor(
        f.source,
        g.target,
        {x: g.obj(f.obj(x)) for x in f.source.objects},
        {m: g.mor(f.mor(m)) for m in f.source.morphisms},
        validate=False,
    )


def terminal_functor(x: FinGroupoid, pt: Optional[FinGroupoid] = None) -> GroupoidFunctor:
    pt = pt if pt is not None else terminal()
    star = pt.objects[0]
    return GroupoidFunctor(
        x, pt, {o: star for o in x.objects}, {m: pt.identity(star) for m in x.morphisms}, name="!"
    )


def point_functor(x: FinGroupoid, obj: ObjectId, pt: Optional[FinGroupoid] = None) -> GroupoidFunctor:
    """The functor ``pt -> X`` picking out ``obj``."""
    pt = pt if pt is not None else terminal()
    star = pt.objects[0]
    return GroupoidFunctor(pt, x, {star: obj}, {pt.identity(star): x.identity(obj)}, name=f"pick {obj!r}")


def homomorphism_functor(
    source: FiniteGroup,
    target: FiniteGroup,
    hom: Mapping[Hashable, Hashable],
    source_grpd: Optional[FinGroupoid] = None,
    target_grpd: Optional[FinGroupoid] = None,
) -> GroupoidFunctor:
    """``B(hom): BH -> BG``; validation rejects maps that are not homomorphisms."""
    return GroupoidFunctor(
        source_grpd if source_grpd is not None else delooping(source),
        target_grpd if target_grpd is not None else delooping(target),
        {POINT: POINT},
        dict(hom),
        name="B(hom)",
    )


def is_isomorphism(f: GroupoidFunctor) -> bool:
    objs = list(f.object_map.values())
    mors = list(f.morphism_map.values())
    return (
        len(set(objs)) == len(objs) == len(f.target.objects)
        and len(set(mors)) == len(mors) == len(f.target.morphisms)
    )


def inverse_functor(f: GroupoidFunctor) -> GroupoidFunctor:
    if not is_isomorphism(f):
        raise FunctorialityError(f"{f!r} is not an isomorphism")
    return GroupoidFunctor(
        f.target,
        f.source,
        {v: k for k, v in f.object_map.items()},
        {v: k for k, v in f.morphism_map.items()},
        validate=False,
    )


# =============================================================================
# Products, coproducts, exponentials
# =============================================================================


@dataclass
class Product:
    """A finite product groupoid with its projection functors."""

    groupoid: FinGroupoid
    projections: Tuple[GroupoidFunctor, ...]
    factors: Tuple[FinGroupoid, ...]

    def pair(self, functors: Sequence[GroupoidFunctor]) -> GroupoidFunctor:
        """The functor into the product with the given components."""
        source = functors[0].source
        return GroupoidFunctor(
            source,
            self.groupoid,
            {x: tuple(f.obj(x) for f in functors) for x in source.objects},
            {m: tuple(f.mor(m) for f in functors) for m in source.morphisms},
            validate=False,
        )


def product_all(factors: Sequence[FinGroupoid], name: str = "") -> Product:
    """Product of ``n`` groupoids with tuple ids of length ``n``."""
    factors = tuple(factors)
    objects = list(itertools.product(*(x.objects for x in factors)))
    morphisms = []
    for ms in itertools.product(*(x.morphisms for x in factors)):
        morphisms.append(
            (
                tuple(ms),
                tuple(x.src[m] for x, m in zip(factors, ms)),
                tuple(x.dst[m] for x, m in zip(factors, ms)),
            )
        )
    identities = {o: tuple(x.identity(c) for x, c in zip(factors, o)) for o in objects}
    table = {}
    for fs in itertools.product(*(list(x.composable_pairs()) for x in factors)):
        g = tuple(pair[0] for pair in fs)
        f = tuple(pair[1] for pair in fs)
        table[(g, f)] = tuple(x.compose(gi, fi) for x, gi, fi in zip(factors, g, f))
    grpd = FinGroupoid(
        objects,
        morphisms,
        identities,
        table,
        name=name or " x ".join(x.name for x in factors),
        validate=False,
    )
    projections = tuple(
        GroupoidFunctor(
            grpd,
            x,
            {o: o[i] for o in objects},
            {m: m[i] for m, _, _ in morphisms},
            name=f"pr{i}",
            validate=False,
        )
        for i, x in enumerate(factors)
    )
    return Product(grpd, projections, factors)


def product(x: FinGroupoid, y: FinGroupoid) -> Product:
    """Binary product ``X × Y``; objects ``(x, y)``, morphisms ``(f, g)``."""
    return product_all([x, y])


def product_functor(f: GroupoidFunctor, g: GroupoidFunctor, source: Optional[Product] = None, target: Optional[Product] = None) -> GroupoidFunctor:
    """``f × g : X × Y -> X' × Y'``."""
    source = source if source is not None else product(f.source, g.source)
    target = target if target is not None else product(f.target, g.target)
    return GroupoidFunctor(
        source.groupoid,
        target.groupoid,
        {(a, b): (f.obj(a), g.obj(b)) for (a, b) in source.groupoid.objects},
        {(a, b): (f.mor(a), g.mor(b)) for (a, b) in source.groupoid.morphisms},
        name=f"{f.name} x {g.name}",
        validate=False,
    )


@dataclass
class Coproduct:
    """A finite coproduct with its coprojections; ids are ``(i, x)``."""

    groupoid: FinGroupoid
    coprojections: Tuple[GroupoidFunctor, ...]
    summands: Tuple[FinGroupoid, ...]

    def copair(self, functors: Sequence[GroupoidFunctor], target: FinGroupoid) -> GroupoidFunctor:
        return GroupoidFunctor(
            self.groupoid,
            target,
            {(i, x): functors[i].obj(x) for (i, x) in self.groupoid.objects},
            {(i, m): functors[i].mor(m) for (i, m) in self.groupoid.morphisms},
            validate=False,
        )


def coproduct(summands: Sequence[FinGroupoid], name: str = "") -> Coproduct:
    summands = tuple(summands)
    objects = [(i, x) for i, s in enumerate(summands) for x in s.objects]
    morphisms = [((i, m), (i, s.src[m]), (i, s.dst[m])) for i, s in enumerate(summands) for m in s.morphisms]
    identities = {(i, x): (i, s.identity(x)) for i, s in enumerate(summands) for x in s.objects}
    table = {
        ((i, g), (i, f)): (i, s.compose(g, f))
        for i, s in enumerate(summands)
        for g, f in s.composable_pairs()
    }
    grpd = FinGroupoid(
        objects, morphisms, identities, table,
        name=name or " + ".join(s.name for s in summands),
        validate=False,
    )
    coprojections = tuple(
        GroupoidFunctor(
            s,
            grpd,
            {x: (i, x) for x in s.objects},
            {m: (i, m) for m in s.morphisms},
            name=f"in{i}",
            validate=False,
        )
        for i, s in enumerate(summands)
    )
    return Coproduct(grpd, coprojections, summands)


@dataclass
class Exponential:
    """``Z^Y`` for discrete ``Y``: the ``|Y|``-fold product with evaluations."""

    groupoid: FinGroupoid
    exponent: FinGroupoid
    base: FinGroupoid
    evaluations: Dict[ObjectId, GroupoidFunctor]
    product: Product


def exponential(z: FinGroupoid, y: FinGroupoid) -> Exponential:
    """Objects of ``Z^Y`` are tuples ``(z_y)`` indexed by ``Y.objects``."""
    if not y.is_discrete():
        raise UnsupportedExponentError(f"Exponent {y!r} is not discrete")
    prod = product_all([z] * len(y.objects), name=f"({z.name})^{len(y.objects)}")
    evaluations = {point: prod.projections[i] for i, point in enumerate(y.objects)}
    return Exponential(prod.groupoid, y, z, evaluations, prod)


def curry_functor(f: GroupoidFunctor, x: FinGroupoid, y: FinGroupoid, exp: Optional[Exponential] = None) -> GroupoidFunctor:
    """Transpose ``f: X × Y -> Z`` (``Y`` discrete) to ``X -> Z^Y``."""
    exp = exp if exp is not None else exponential(f.target, y)
    return GroupoidFunctor(
        x,
        exp.groupoid,
        {a: tuple(f.obj((a, b)) for b in y.objects) for a in x.objects},
        {m: tuple(f.mor((m, y.identity(b))) for b in y.objects) for m in x.morphisms},
        name=f"curry({f.name})",
    )


# =============================================================================
# Components and skeleta
# =============================================================================


class UnionFind:
    def __init__(self, items: Iterable[Hashable]):
        self.parent = {x: x for x in items}

    def find(self, x: Hashable) -> Hashable:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: Hashable, y: Hashable):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


def connected_components(x: FinGroupoid) -> List[Tuple[ObjectId, ...]]:
    """Partition of the objects, ordered by first object in input order."""
    uf = UnionFind(x.objects)
    for m in x.morphisms:
        uf.union(x.src[m], x.dst[m])
    blocks: Dict[Hashable, List[ObjectId]] = {}
    for o in x.objects:
        blocks.setdefault(uf.find(o), []).append(o)
    return sorted((tuple(b) for b in blocks.values()), key=lambda b: x.objects.index(b[0]))


def full_subgroupoid(x: FinGroupoid, objects: Iterable[ObjectId], name: str = "") -> FinGroupoid:
    keep = [o for o in x.objects if o in set(objects)]
    keep_set = set(keep)
    mors = [m for m in x.morphisms if x.src[m] in keep_set and x.dst[m] in keep_set]
    mor_set = set(mors)
    return FinGroupoid(
        keep,
        [(m, x.src[m], x.dst[m]) for m in mors],
        {o: x.identity(o) for o in keep},
        {(g, f): h for (g, f), h in x.table.items() if g in mor_set and f in mor_set},
        name=name or f"{x.name}|{keep}",
        validate=False,
    )


def inclusion_functor(sub: FinGroupoid, x: FinGroupoid) -> GroupoidFunctor:
    return GroupoidFunctor(
        sub, x, {o: o for o in sub.objects}, {m: m for m in sub.morphisms}, name="incl", validate=False
    )


def automorphism_group(x: FinGroupoid, obj: ObjectId) -> FiniteGroup:
    """``Aut(obj)`` with elements the morphism ids and ``a·b = a∘b``."""
    auts = tuple(x.hom(obj, obj))
    return FiniteGroup(
        f"Aut({obj!r})",
        auts,
        {(a, b): x.compose(a, b) for a in auts for b in auts},
    )


@dataclass
class Skeleton:
    """A skeleton with ``p∘ι = id`` and ``γ: ι∘p ⇒ id``.

    Attributes:
        skeleton: Full subgroupoid on the basepoints (a union of deloopings)
        inclusion: ι
        retraction: p, with ``p(f) = γ_y⁻¹ ∘ f ∘ γ_x``
        gamma: Components ``γ_x: basepoint(x) -> x``; identities at basepoints
        basepoint: Object to the basepoint of its component
    """

    skeleton: FinGroupoid
    inclusion: GroupoidFunctor
    retraction: GroupoidFunctor
    gamma: NaturalTransformation
    basepoint: Dict[ObjectId, ObjectId]

    def connecting(self, obj: ObjectId) -> MorphismId:
        return self.gamma.components[obj]


def skeletize(x: FinGroupoid) -> Skeleton:
    """Deformation retraction onto the first object of each component."""
    components = connected_components(x)
    basepoint: Dict[ObjectId, ObjectId] = {}
    gamma: Dict[ObjectId, MorphismId] = {}
    for block in components:
        b = block[0]
        for o in block:
            basepoint[o] = b
            gamma[o] = x.identity(b) if o == b else x.hom(b, o)[0]
    skl = full_subgroupoid(x, [block[0] for block in components], name=f"skl({x.name})")
    incl = inclusion_functor(skl, x)
    retraction = GroupoidFunctor(
        x,
        skl,
        basepoint,
        {
            m: x.compose_all(x.inverse(gamma[x.dst[m]]), m, gamma[x.src[m]])
            for m in x.morphisms
        },
        name="p",
        validate=False,
    )
    ip = compose_functors(incl, retraction)
    nat = NaturalTransformation(ip, identity_functor(x), gamma, validate=False)
    logger.debug("skeletized %r into %d components", x, len(components))
    return Skeleton(skl, incl, retraction, nat, basepoint)


@dataclass
class ConnectedDecomposition:
    """An isomorphism ``X ≅ B Aut(b) × CoDisc(Obj X)`` for connected ``X``."""

    group: FiniteGroup
    product: Product
    iso: GroupoidFunctor


def connected_decomposition(x: FinGroupoid) -> ConnectedDecomposition:
    components = connected_components(x)
    if len(components) != 1:
        raise GroupoidLawError(f"{x!r} is not connected", location=("objects",))
    skl = skeletize(x)
    b = x.objects[0]
    group = automorphism_group(x, b)
    prod = product(delooping(group), codiscrete(x.objects))
    iso = GroupoidFunctor(
        x,
        prod.groupoid,
        {o: (POINT, o) for o in x.objects},
        {m: (skl.retraction.mor(m), (x.src[m], x.dst[m])) for m in x.morphisms},
        name="decompose",
    )
    return ConnectedDecomposition(group, prod, iso)


# =============================================================================
# Canonical model structure
# =============================================================================


def is_equivalence(f: GroupoidFunctor) -> bool:
    """Essentially surjective and fully faithful."""
    s, t = f.source, f.target
    reached = {f.obj(x) for x in s.objects}
    for block in connected_components(t):
        if not reached.intersection(block):
            return False
    for x in s.objects:
        for y in s.objects:
            images = [f.mor(m) for m in s.hom(x, y)]
            if len(set(images)) != len(images) or len(images) != len(t.hom(f.obj(x), f.obj(y))):
                return False
    return True


def is_isofibration(f: GroupoidFunctor) -> bool:
    """Every morphism out of ``f(x)`` lifts to a morphism out of ``x``."""
    s, t = f.source, f.target
    for x in s.objects:
        lifted = {f.mor(m) for m in s.hom_from(x)}
        if any(g not in lifted for g in t.hom_from(f.obj(x))):
            return False
    return True


def is_cofibration(f: GroupoidFunctor) -> bool:
    """Injective on objects."""
    images = [f.obj(x) for x in f.source.objects]
    return len(set(images)) == len(images)


def is_acyclic_cofibration(f: GroupoidFunctor) -> bool:
    return is_cofibration(f) and is_equivalence(f)


def lift_functor(
    i: GroupoidFunctor,
    p: GroupoidFunctor,
    top: GroupoidFunctor,
    bottom: GroupoidFunctor,
) -> Optional[GroupoidFunctor]:
    """A diagonal ``h: B -> E`` with ``h∘i = top`` and ``p∘h = bottom``, or None.

    ``i: A -> B``, ``p: E -> X``, ``top: A -> E``, ``bottom: B -> X``.
    Backtracking over object assignments; each object choice fixes the
    morphisms by a spanning tree of its component.
    """
    a, b, e = i.source, i.target, p.source
    for x in a.objects:
        if p.obj(top.obj(x)) != bottom.obj(i.obj(x)):
            return None
    fixed: Dict[ObjectId, ObjectId] = {}
    for x in a.objects:
        fixed.setdefault(i.obj(x), top.obj(x))
    objects = list(b.objects)

    def candidates(obj: ObjectId) -> List[ObjectId]:
        if obj in fixed:
            return [fixed[obj]]
        return [c for c in e.objects if p.obj(c) == bottom.obj(obj)]

    def morphism_choices(assign: Dict[ObjectId, ObjectId]) -> Optional[Dict[MorphismId, MorphismId]]:
        # Search morphism images hom-set by hom-set; verify functoriality at the end.
        pools: List[Tuple[MorphismId, List[MorphismId]]] = []
        for m in b.morphisms:
            pool = [
                c for c in e.hom(assign[b.src[m]], assign[b.dst[m]])
                if p.mor(c) == bottom.mor(m)
            ]
            pools.append((m, pool))
        forced: Dict[MorphismId, MorphismId] = {}
        for xa in a.morphisms:
            forced[i.mor(xa)] = top.mor(xa)
        pools = [(m, [forced[m]] if m in forced else pool) for m, pool in pools]
        for choice in itertools.product(*(pool for _, pool in pools)):
            mapping = {m: c for (m, _), c in zip(pools, choice)}
            try:
                GroupoidFunctor(b, e, assign, mapping)
            except FunctorialityError:
                continue
            return mapping
        return None

    for choice in itertools.product(*(candidates(o) for o in objects)):
        assign = dict(zip(objects, choice))
        mapping = morphism_choices(assign)
        if mapping is not None:
            return GroupoidFunctor(b, e, assign, mapping, name="lift")
    return None


@dataclass
class GroupoidGenerator:
    name: str
    morphism: GroupoidFunctor


def groupoid_generating_cofibrations() -> List[GroupoidGenerator]:
    """``∅ -> pt``, ``{0,1} -> CoDisc{0,1}`` and ``pt -> CoDisc{0,1}``.

    The last is also the generating acyclic cofibration. The parallel-pair
    generator is omitted: its source has infinitely many morphisms.
    """
    pt = terminal()
    pair = codiscrete([0, 1])
    boundary = discrete([0, 1])
    empty_to_pt = GroupoidFunctor(empty(), pt, {}, {}, name="empty->pt")
    boundary_to_pair = GroupoidFunctor(
        boundary, pair, {0: 0, 1: 1}, {(0, 0): (0, 0), (1, 1): (1, 1)}, name="{0,1}->CoDisc"
    )
    pt_to_pair = GroupoidFunctor(pt, pair, {POINT: 0}, {(POINT, POINT): (0, 0)}, name="pt->CoDisc")
    return [
        GroupoidGenerator("empty->pt", empty_to_pt),
        GroupoidGenerator("boundary->interval", boundary_to_pair),
        GroupoidGenerator("pt->interval", pt_to_pair),
    ]


# =============================================================================
# Group actions and orbit quotients
# =============================================================================


class GroupAction:
    """A left action of a finite group on a groupoid by functors.

    Args:
        group: The acting group
        groupoid: The groupoid acted on
        on_objects: ``(g, x) -> g·x``
        on_morphisms: ``(g, m) -> g·m``
    """

    def __init__(
        self,
        group: FiniteGroup,
        groupoid: FinGroupoid,
        on_objects: Mapping[Tuple[Hashable, ObjectId], ObjectId],
        on_morphisms: Mapping[Tuple[Hashable, MorphismId], MorphismId],
    ):
        self.group = group
        self.groupoid = groupoid
        self.on_objects = dict(on_objects)
        self.on_morphisms = dict(on_morphisms)
        self._validate()

    @classmethod
    def from_functors(cls, group: FiniteGroup, groupoid: FinGroupoid, functors: Mapping[Hashable, GroupoidFunctor]) -> "GroupAction":
        return cls(
            group,
            groupoid,
            {(g, x): functors[g].obj(x) for g in group.elements for x in groupoid.objects},
            {(g, m): functors[g].mor(m) for g in group.elements for m in groupoid.morphisms},
        )

    def functor(self, g: Hashable) -> GroupoidFunctor:
        return GroupoidFunctor(
            self.groupoid,
            self.groupoid,
            {x: self.on_objects[(g, x)] for x in self.groupoid.objects},
            {m: self.on_morphisms[(g, m)] for m in self.groupoid.morphisms},
            name=f"act {g!r}",
        )

    def _validate(self):
        grp, x = self.group, self.groupoid
        for g in grp.elements:
            try:
                self.functor(g)
            except (FunctorialityError, KeyError) as exc:
                raise ActionLawError(f"Element {g!r} does not act by a functor: {exc}", location=("action", g)) from exc
        for x_obj in x.objects:
            if self.on_objects[(grp.unit, x_obj)] != x_obj:
                raise ActionLawError(f"The unit moves {x_obj!r}", location=("action", grp.unit, x_obj))
        for g, h in itertools.product(grp.elements, repeat=2):
            gh = grp.mul(g, h)
            for m in x.morphisms:
                if self.on_morphisms[(g, self.on_morphisms[(h, m)])] != self.on_morphisms[(gh, m)]:
                    raise ActionLawError(f"Action law fails on ({g!r}, {h!r}, {m!r})", location=("action", g, h, m))

    def act(self, g: Hashable, x: ObjectId) -> ObjectId:
        return self.on_objects[(g, x)]

    def act_morphism(self, g: Hashable, m: MorphismId) -> MorphismId:
        return self.on_morphisms[(g, m)]

    def is_free_on_objects(self) -> bool:
        return all(
            self.on_objects[(g, x)] != x
            for g in self.group.elements
            if g != self.group.unit
            for x in self.groupoid.objects
        )

    def translator(self, x: ObjectId, y: ObjectId) -> Hashable:
        """The unique ``g`` with ``g·x = y`` (free actions only)."""
        for g in self.group.elements:
            if self.on_objects[(g, x)] == y:
                return g
        raise UnsupportedQuotientError(f"{y!r} is not in the orbit of {x!r}")


@dataclass
class OrbitQuotient:
    """The orbit groupoid ``X/G`` with its quotient functor.

    Objects are orbit representatives (first in input order); morphisms are
    the representatives of morphism orbits starting at a representative.
    """

    groupoid: FinGroupoid
    quotient: GroupoidFunctor
    action: GroupAction
    representative: Dict[ObjectId, ObjectId]


def orbit_groupoid(action: GroupAction) -> OrbitQuotient:
    if not action.is_free_on_objects():
        raise UnsupportedQuotientError("Orbit groupoids are only formed for actions free on objects")
    x, grp = action.groupoid, action.group
    rep: Dict[ObjectId, ObjectId] = {}
    reps: List[ObjectId] = []
    for o in x.objects:
        if o in rep:
            continue
        reps.append(o)
        for g in grp.elements:
            rep[action.act(g, o)] = o
    rep_set = set(reps)
    mors = [m for m in x.morphisms if x.src[m] in rep_set]

    def normalize(m: MorphismId) -> MorphismId:
        g = action.translator(x.src[m], rep[x.src[m]])
        return action.act_morphism(g, m)

    table = {}
    for f in mors:
        for g in mors:
            if rep[x.dst[f]] != x.src[g]:
                continue
            h = action.translator(x.src[g], x.dst[f])
            table[(g, f)] = x.compose(action.act_morphism(h, g), f)
    quotient_grpd = FinGroupoid(
        reps,
        [(m, x.src[m], rep[x.dst[m]]) for m in mors],
        {o: x.identity(o) for o in reps},
        table,
        name=f"{x.name}/{grp.name}",
    )
    quotient = GroupoidFunctor(
        x,
        quotient_grpd,
        rep,
        {m: normalize(m) for m in x.morphisms},
        name="quotient",
    )
    return OrbitQuotient(quotient_grpd, quotient, action, rep)


def eg_right_action(eg: EGroupoid, group: FiniteGroup) -> GroupAction:
    """``g`` acts on ``EG`` by right multiplication with ``g⁻¹``."""
    return GroupAction(
        group,
        eg.groupoid,
        {(g, x): group.mul(x, group.inv(g)) for g in group.elements for x in group.elements},
        {
            (g, (h, x)): (h, group.mul(x, group.inv(g)))
            for g in group.elements
            for (h, x) in eg.groupoid.morphisms
        },
    )


# =============================================================================
# Pushout-products of finite sets
# =============================================================================


@dataclass
class SetMap:
    source: Tuple[Hashable, ...]
    target: Tuple[Hashable, ...]
    mapping: Dict[Hashable, Hashable]

    def __call__(self, x: Hashable) -> Hashable:
        return self.mapping[x]

    def image(self) -> set:
        return {self.mapping[x] for x in self.source}

    def preimage(self, y: Hashable) -> List[Hashable]:
        return [x for x in self.source if self.mapping[x] == y]


@dataclass
class SetPushoutProduct:
    """``f ×̂ g : X' × Y ⊔_{X × Y} X × Y' -> X' × Y'``.

    Attributes:
        points: Class representatives of the pushout, in order
        map: The pushout-product map
        fibers: Target point to the list of classes over it
        expected: Fiber sizes from the case-by-case formula
        cases: Which case of the formula applied at each target point
        representative: Every element of ``X' × Y ⊔ X × Y'`` to its class representative
    """

    points: List[Tuple[str, Tuple[Hashable, Hashable]]]
    map: Dict[Tuple[str, Tuple[Hashable, Hashable]], Tuple[Hashable, Hashable]]
    fibers: Dict[Tuple[Hashable, Hashable], List[Tuple[str, Tuple[Hashable, Hashable]]]]
    expected: Dict[Tuple[Hashable, Hashable], int]
    cases: Dict[Tuple[Hashable, Hashable], str]
    representative: Dict[Tuple[str, Tuple[Hashable, Hashable]], Tuple[str, Tuple[Hashable, Hashable]]]

    def matches_formula(self) -> bool:
        return all(len(self.fibers[k]) == self.expected[k] for k in self.expected)

    def is_injective(self) -> bool:
        return all(len(v) <= 1 for v in self.fibers.values())


def set_pushout_product(f: SetMap, g: SetMap) -> SetPushoutProduct:
    """Brute-force pushout of ``f: X -> X'`` and ``g: Y -> Y'`` with a fiber report."""
    left = [("L", (xp, y)) for xp in f.target for y in g.source]
    right = [("R", (x, yp)) for x in f.source for yp in g.target]
    uf = UnionFind(left + right)
    for x in f.source:
        for y in g.source:
            uf.union(("L", (f(x), y)), ("R", (x, g(y))))
    classes: Dict[Hashable, Tuple[str, Tuple[Hashable, Hashable]]] = {}
    for item in left + right:
        classes.setdefault(uf.find(item), item)
    points = list(classes.values())

    def image(point):
        side, (a, b) = point
        return (a, g(b)) if side == "L" else (f(a), b)

    mapping = {p: image(p) for p in points}
    fibers: Dict[Tuple[Hashable, Hashable], List] = {(xp, yp): [] for xp in f.target for yp in g.target}
    for p in points:
        fibers[mapping[p]].append(p)
    im_f, im_g = f.image(), g.image()
    expected, cases = {}, {}
    for xp in f.target:
        for yp in g.target:
            if xp in im_f and yp in im_g:
                expected[(xp, yp)], cases[(xp, yp)] = 1, "image"
            elif yp not in im_g:
                expected[(xp, yp)], cases[(xp, yp)] = len(f.preimage(xp)), "f-preimage"
            else:
                expected[(xp, yp)], cases[(xp, yp)] = len(g.preimage(yp)), "g-preimage"
    representative = {item: classes[uf.find(item)] for item in left + right}
    return SetPushoutProduct(points, mapping, fibers, expected, cases, representative)
