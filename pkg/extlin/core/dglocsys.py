"""Chain-complex-valued local systems over finite groupoids.

A :class:`DgLocalSystem` is a functor from a finite groupoid into chain
complexes; a :class:`DgLocMorphism` pairs a base functor with objectwise
chain maps. Degree ``n`` of either is an ordinary local system (morphism),
so base change is computed degree by degree through :mod:`locsys`.

The integral classes combine the canonical model structure on groupoids
with the projective one on chain complexes. Over a field every complex is
cofibrant and fibrant, so the weak equivalences reduce to "equivalence of
bases and objectwise quasi-isomorphism".

Example usage:
    from extlin.core.dglocsys import concentrated, identity_dg, classify

    v = concentrated(some_local_system, 0)
    classify(identity_dg(v))     # IntegralClasses(weq=True, fib=True, cof=True)
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from pydantic import BaseModel

from . import fingrpd
from .chaincx import (
    ChainComplex,
    ChainMap,
    SignRule,
    active_degrees,
    compose_cc,
    generators,
    identity_cc,
    is_cofibration_cc,
    is_fibration_cc,
    is_iso_cc,
    is_quasi_iso,
    koszul_sign,
    pushout_cc,
    tensor_cc,
    tensor_ccmap,
)
from .errors import (
    CompositionError,
    ExtlinError,
    FunctorialityError,
    LiftingInputError,
    NaturalityError,
    UnsupportedBaseError,
    UnsupportedShapeError,
)
from .fingrpd import FinGroupoid, GroupoidFunctor, ObjectId, SetMap
from .finvect import (
    LinearMap,
    VectorSpace,
    add_maps,
    compose,
    devectorize,
    direct_sum,
    hom_map,
    identity,
    internal_hom,
    map_from_columns,
    scale_map,
    solve,
    vectorize,
)
from .locsys import (
    LocalSystem,
    LocMorphism,
    Pushforward,
    adjunct,
    pushforward,
    pushforward_mor,
)

logger = logging.getLogger(__name__)


class DgLocalSystem:
    """A functor from a finite groupoid into chain complexes.

    Args:
        base: The base groupoid
        fibers: Object id to its chain complex
        transport: Morphism id to a chain map between fibers
        name: Display name
        validate: Check types and functoriality
    """

    def __init__(
        self,
        base: FinGroupoid,
        fibers: Mapping[ObjectId, ChainComplex],
        transport: Mapping,
        name: str = "",
        validate: bool = True,
    ):
        self.base = base
        self.fibers: Dict[ObjectId, ChainComplex] = dict(fibers)
        self.transport: Dict = dict(transport)
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
            if self.transport[b.identity(x)] != identity_cc(self.fibers[x]):
                raise FunctorialityError(
                    f"Transport along the identity of {x!r} is not the identity",
                    location=("transport", b.identity(x)),
                )
        for g, f in b.composable_pairs():
            if self.transport[b.compose(g, f)] != compose_cc(self.transport[g], self.transport[f]):
                raise FunctorialityError(
                    f"Transport is not functorial on ({g!r}, {f!r})",
                    location=("transport", g, f),
                    payload={"pair": [repr(g), repr(f)]},
                )

    def fiber(self, x: ObjectId) -> ChainComplex:
        return self.fibers[x]

    def along(self, m) -> ChainMap:
        return self.transport[m]

    @property
    def support(self) -> List[int]:
        """Degrees where some fiber is nonzero."""
        return sorted({n for c in self.fibers.values() for n in c.support})

    def degree(self, n: int) -> LocalSystem:
        """The local system of degree-``n`` components."""
        return LocalSystem(
            self.base,
            {x: self.fibers[x].component(n) for x in self.base.objects},
            {m: self.transport[m].map(n) for m in self.base.morphisms},
            name=f"{self.name}[{n}]",
            validate=False,
        )

    def differential(self, n: int) -> LocMorphism:
        """``∂_n`` as a morphism of local systems over the identity."""
        return LocMorphism(
            self.degree(n),
            self.degree(n - 1),
            fingrpd.identity_functor(self.base),
            {x: self.fibers[x].differential(n) for x in self.base.objects},
            validate=False,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, DgLocalSystem):
            return NotImplemented
        return self.base == other.base and self.fibers == other.fibers and self.transport == other.transport

    def __hash__(self) -> int:
        return hash((self.base, tuple(self.fibers.get(x) for x in self.base.objects)))

    def __repr__(self) -> str:
        return f"<DgLocalSystem {self.name} over {self.base!r}>"


class DgLocMorphism:
    """Objectwise chain maps ``φ_x: V_x -> W_{f(x)}`` natural over ``f``."""

    def __init__(
        self,
        source: DgLocalSystem,
        target: DgLocalSystem,
        functor: GroupoidFunctor,
        components: Mapping[ObjectId, ChainMap],
        validate: bool = True,
    ):
        self.source = source
        self.target = target
        self.functor = functor
        self.components: Dict[ObjectId, ChainMap] = dict(components)
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
            left = compose_cc(self.target.along(f.mor(m)), self.components[x])
            right = compose_cc(self.components[y], self.source.along(m))
            if left != right:
                raise NaturalityError(
                    f"Naturality fails along {m!r}",
                    location=("components", m),
                    payload={"morphism": repr(m)},
                )

    def component(self, x: ObjectId) -> ChainMap:
        return self.components[x]

    def degree(self, n: int) -> LocMorphism:
        return LocMorphism(
            self.source.degree(n),
            self.target.degree(n),
            self.functor,
            {x: c.map(n) for x, c in self.components.items()},
            validate=False,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, DgLocMorphism):
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
        return f"<DgLocMorphism {self.source!r} -> {self.target!r}>"


# =============================================================================
# Constructors and basic maps
# =============================================================================


def constant_dg(base: FinGroupoid, complex_: ChainComplex, name: str = "") -> DgLocalSystem:
    ident = identity_cc(complex_)
    return DgLocalSystem(
        base,
        {x: complex_ for x in base.objects},
        {m: ident for m in base.morphisms},
        name=name or "const",
        validate=False,
    )


def concentrated(system: LocalSystem, n: int = 0) -> DgLocalSystem:
    """A local system placed in degree ``n``."""
    fibers = {x: ChainComplex({n: system.fiber(x)}) for x in system.base.objects}
    transport = {
        m: ChainMap(
            fibers[system.base.src[m]],
            fibers[system.base.dst[m]],
            {n: system.along(m)},
            validate=False,
        )
        for m in system.base.morphisms
    }
    return DgLocalSystem(system.base, fibers, transport, name=f"{system.name}[{n}]", validate=False)


def identity_dg(system: DgLocalSystem) -> DgLocMorphism:
    return DgLocMorphism(
        system,
        system,
        fingrpd.identity_functor(system.base),
        {x: identity_cc(system.fiber(x)) for x in system.base.objects},
        validate=False,
    )


def compose_dg(psi: DgLocMorphism, phi: DgLocMorphism) -> DgLocMorphism:
    """``ψ ∘ φ`` over ``g ∘ f``."""
    if phi.target != psi.source:
        raise CompositionError(f"Cannot compose {psi!r} after {phi!r}")
    f = phi.functor
    return DgLocMorphism(
        phi.source,
        psi.target,
        fingrpd.compose_functors(psi.functor, f),
        {x: compose_cc(psi.component(f.obj(x)), phi.component(x)) for x in phi.source.base.objects},
        validate=False,
    )


def pullback_dg(f: GroupoidFunctor, system: DgLocalSystem) -> DgLocalSystem:
    if f.target != system.base:
        raise CompositionError("Pullback functor does not land in the base of the system")
    return DgLocalSystem(
        f.source,
        {x: system.fiber(f.obj(x)) for x in f.source.objects},
        {m: system.along(f.mor(m)) for m in f.source.morphisms},
        name=f"{f.name}*{system.name}",
        validate=False,
    )


# =============================================================================
# Pushforward
# =============================================================================


@dataclass
class DgPushforward:
    """``f_!V`` computed degree by degree, with the unit ``V -> f*f_!V``."""

    functor: GroupoidFunctor
    source: DgLocalSystem
    system: DgLocalSystem
    degrees: Dict[int, Pushforward]
    unit: DgLocMorphism


def pushforward_dg(f: GroupoidFunctor, system: DgLocalSystem) -> DgPushforward:
    if f.source != system.base:
        raise CompositionError("Pushforward functor does not start at the base of the system")
    support = system.support
    pushed = {n: pushforward(f, system.degree(n)) for n in support}
    diffs = {
        n: pushforward_mor(f, system.differential(n))
        for n in support
        if n - 1 in pushed
    }
    y_grpd = f.target
    fibers = {
        y: ChainComplex(
            {n: pf.system.fiber(y) for n, pf in pushed.items()},
            {n: d.component(y) for n, d in diffs.items()},
        )
        for y in y_grpd.objects
    }
    transport = {
        b: ChainMap(
            fibers[y_grpd.src[b]],
            fibers[y_grpd.dst[b]],
            {n: pf.system.along(b) for n, pf in pushed.items()},
        )
        for b in y_grpd.morphisms
    }
    result = DgLocalSystem(y_grpd, fibers, transport, name=f"{f.name}!{system.name}", validate=False)
    unit = DgLocMorphism(
        system,
        pullback_dg(f, result),
        fingrpd.identity_functor(f.source),
        {
            x: ChainMap(
                system.fiber(x),
                fibers[f.obj(x)],
                {n: pf.unit.component(x) for n, pf in pushed.items()},
            )
            for x in f.source.objects
        },
        validate=False,
    )
    logger.debug("pushed %s along %s in %d degrees", system.name, f.name, len(pushed))
    return DgPushforward(f, system, result, pushed, unit)


def adjunct_dg(phi: DgLocMorphism, pushed: Optional[DgPushforward] = None) -> DgLocMorphism:
    """``φ̃: f_!V -> W`` over the identity, degree by degree."""
    f = phi.functor
    pf = pushed if pushed is not None else pushforward_dg(f, phi.source)
    per_degree = {n: adjunct(phi.degree(n), p) for n, p in pf.degrees.items()}
    target = phi.target
    return DgLocMorphism(
        pf.system,
        target,
        fingrpd.identity_functor(f.target),
        {
            y: ChainMap(
                pf.system.fiber(y),
                target.fiber(y),
                {n: a.component(y) for n, a in per_degree.items()},
            )
            for y in f.target.objects
        },
        validate=False,
    )


# =============================================================================
# External tensor
# =============================================================================


def external_tensor_dg(v: DgLocalSystem, w: DgLocalSystem, sign: SignRule = koszul_sign) -> DgLocalSystem:
    """``V ⊠ W`` over ``X × Y`` with fiber ``V_x ⊗ W_y``."""
    base = fingrpd.product(v.base, w.base).groupoid
    return DgLocalSystem(
        base,
        {(x, y): tensor_cc(v.fiber(x), w.fiber(y), sign) for (x, y) in base.objects},
        {(f, g): tensor_ccmap(v.along(f), w.along(g), sign) for (f, g) in base.morphisms},
        name=f"{v.name}⊠{w.name}",
        validate=False,
    )


def external_tensor_dg_mor(phi: DgLocMorphism, gamma: DgLocMorphism, sign: SignRule = koszul_sign) -> DgLocMorphism:
    source = external_tensor_dg(phi.source, gamma.source, sign)
    target = external_tensor_dg(phi.target, gamma.target, sign)
    return DgLocMorphism(
        source,
        target,
        fingrpd.product_functor(phi.functor, gamma.functor),
        {
            (x, y): tensor_ccmap(phi.component(x), gamma.component(y), sign)
            for (x, y) in source.base.objects
        },
        validate=False,
    )


# =============================================================================
# Integral classes
# =============================================================================


class IntegralClasses(BaseModel):
    """Membership of a morphism in the three classes of the integral model structure."""

    weq: bool
    fib: bool
    cof: bool


def is_weq(phi: DgLocMorphism) -> bool:
    if not fingrpd.is_equivalence(phi.functor):
        return False
    return all(is_quasi_iso(c) for c in phi.components.values())


def is_fib(phi: DgLocMorphism) -> bool:
    if not fingrpd.is_isofibration(phi.functor):
        return False
    return all(is_fibration_cc(c) for c in phi.components.values())


def is_cof(phi: DgLocMorphism) -> bool:
    if not fingrpd.is_cofibration(phi.functor):
        return False
    tilde = adjunct_dg(phi)
    return all(is_cofibration_cc(c) for c in tilde.components.values())


def classify(phi: DgLocMorphism) -> IntegralClasses:
    classes = IntegralClasses(weq=is_weq(phi), fib=is_fib(phi), cof=is_cof(phi))
    logger.debug("classified %r over %s: %s", phi, phi.functor.name, classes)
    return classes


def check_homotopical(phi: DgLocMorphism, gamma: DgLocMorphism, sign: SignRule = koszul_sign) -> bool:
    """Whether ``φ ⊠ γ`` is a weak equivalence, for weak equivalences ``φ`` and ``γ``.

    Raises:
        ExtlinError: If either argument is not a weak equivalence.
    """
    if not is_weq(phi) or not is_weq(gamma):
        raise ExtlinError("check_homotopical expects two weak equivalences")
    return is_weq(external_tensor_dg_mor(phi, gamma, sign))


# =============================================================================
# External pushout-product
# =============================================================================


def set_level_base(f: GroupoidFunctor) -> SetMap:
    """The map of object sets underlying a functor between discrete groupoids.

    Raises:
        UnsupportedBaseError: If either groupoid has a non-identity morphism.
    """
    if not f.source.is_discrete() or not f.target.is_discrete():
        raise UnsupportedBaseError(f"{f.name} is not a map of sets")
    return SetMap(tuple(f.source.objects), tuple(f.target.objects), {x: f.obj(x) for x in f.source.objects})


@dataclass
class BasePushout:
    """The base square of a pushout-product: ``q_l``, ``q_r`` into ``P`` and ``d: P -> X' × Y'``."""

    groupoid: FinGroupoid
    left: GroupoidFunctor
    right: GroupoidFunctor
    dashed: GroupoidFunctor
    regime: str


def _identity_regime(f: GroupoidFunctor, g: GroupoidFunctor) -> Optional[BasePushout]:
    if g == fingrpd.identity_functor(g.source):
        target = fingrpd.product(f.target, g.target).groupoid
        return BasePushout(
            target,
            fingrpd.identity_functor(target),
            fingrpd.product_functor(f, g),
            fingrpd.identity_functor(target),
            "right-identity",
        )
    if f == fingrpd.identity_functor(f.source):
        target = fingrpd.product(f.target, g.target).groupoid
        return BasePushout(
            target,
            fingrpd.product_functor(f, g),
            fingrpd.identity_functor(target),
            fingrpd.identity_functor(target),
            "left-identity",
        )
    return None


def _discrete_regime(f: GroupoidFunctor, g: GroupoidFunctor) -> BasePushout:
    report = fingrpd.set_pushout_product(set_level_base(f), set_level_base(g))
    p = fingrpd.discrete(report.points)
    p.name = f"{f.name} ×̂ {g.name}"
    left_src = fingrpd.product(f.target, g.source).groupoid
    right_src = fingrpd.product(f.source, g.target).groupoid
    target = fingrpd.product(f.target, g.target).groupoid

    def to_point(side: str, grpd: FinGroupoid) -> GroupoidFunctor:
        objects = {o: report.representative[(side, o)] for o in grpd.objects}
        morphisms = {grpd.identity(o): p.identity(objects[o]) for o in grpd.objects}
        return GroupoidFunctor(grpd, p, objects, morphisms, name=f"q_{side}")

    dashed = GroupoidFunctor(
        p,
        target,
        {pt: report.map[pt] for pt in p.objects},
        {p.identity(pt): target.identity(report.map[pt]) for pt in p.objects},
        name="f ×̂ g",
    )
    return BasePushout(p, to_point("L", left_src), to_point("R", right_src), dashed, "discrete")


def base_pushout(f: GroupoidFunctor, g: GroupoidFunctor) -> BasePushout:
    """The pushout of ``f × id`` and ``id × g`` with its map to ``X' × Y'``.

    Computed when one factor is an identity functor or both bases are
    discrete.

    Raises:
        UnsupportedShapeError: For every other pair of base functors.
    """
    found = _identity_regime(f, g)
    if found is not None:
        return found
    discrete = all(
        x.is_discrete() for x in (f.source, f.target, g.source, g.target)
    )
    if discrete:
        return _discrete_regime(f, g)
    raise UnsupportedShapeError(
        f"Base pushout of {f.name} and {g.name} is not finitely computed here",
        payload={"f": f.name, "g": g.name},
    )


@dataclass
class ExternalPushoutProduct:
    """``φ ⊠̂ γ`` together with the pieces it was glued from.

    Attributes:
        base: The base square over which the pushout was formed
        corner: The pushforward of ``V ⊠ W`` to the base pushout
        left: ``(q_l)_!(V' ⊠ W)``
        right: ``(q_r)_!(V ⊠ W')``
        pushout: The glued system over the base pushout
        morphism: The pushout-product, over the dashed base map
    """

    base: BasePushout
    corner: DgPushforward
    left: DgPushforward
    right: DgPushforward
    pushout: DgLocalSystem
    morphism: DgLocMorphism


def _over(functor: GroupoidFunctor, source: DgLocalSystem, target: DgLocalSystem, components) -> DgLocMorphism:
    return DgLocMorphism(source, target, functor, components, validate=False)


def external_pushout_product(
    phi: DgLocMorphism,
    gamma: DgLocMorphism,
    sign: SignRule = koszul_sign,
) -> ExternalPushoutProduct:
    """The pushout-product of ``φ_f: V_X -> V'_X'`` and ``γ_g: W_Y -> W'_Y'`` under ``⊠``.

    The base is the pushout ``P`` of ``f × id`` and ``id × g``. Over ``P``
    the linear part is the objectwise pushout of the two adjuncts out of
    the pushed-forward corner ``V ⊠ W``; the result maps it to ``V' ⊠ W'``
    over the dashed functor ``P -> X' × Y'``.

    Raises:
        UnsupportedShapeError: If the base pushout is outside the supported regime.
    """
    f, g = phi.functor, gamma.functor
    base = base_pushout(f, g)
    v, v2, w, w2 = phi.source, phi.target, gamma.source, gamma.target
    vw = external_tensor_dg(v, w, sign)
    v2w = external_tensor_dg(v2, w, sign)
    vw2 = external_tensor_dg(v, w2, sign)
    v2w2 = external_tensor_dg(v2, w2, sign)

    corner_functor = fingrpd.compose_functors(base.left, fingrpd.product_functor(f, fingrpd.identity_functor(g.source)))
    corner = pushforward_dg(corner_functor, vw)
    left = pushforward_dg(base.left, v2w)
    right = pushforward_dg(base.right, vw2)

    to_left = _over(
        corner_functor,
        vw,
        left.system,
        {
            (x, y): compose_cc(
                left.unit.component((f.obj(x), y)),
                tensor_ccmap(phi.component(x), identity_cc(w.fiber(y)), sign),
            )
            for (x, y) in vw.base.objects
        },
    )
    to_right = _over(
        corner_functor,
        vw,
        right.system,
        {
            (x, y): compose_cc(
                right.unit.component((x, g.obj(y))),
                tensor_ccmap(identity_cc(v.fiber(x)), gamma.component(y), sign),
            )
            for (x, y) in vw.base.objects
        },
    )
    glue_left = adjunct_dg(to_left, corner)
    glue_right = adjunct_dg(to_right, corner)

    p = base.groupoid
    pushouts = {o: pushout_cc(glue_left.component(o), glue_right.component(o)) for o in p.objects}
    transport = {
        m: pushouts[p.src[m]].induced(
            compose_cc(pushouts[p.dst[m]].left, left.system.along(m)),
            compose_cc(pushouts[p.dst[m]].right, right.system.along(m)),
        )
        for m in p.morphisms
    }
    glued = DgLocalSystem(p, {o: po.complex for o, po in pushouts.items()}, transport, name="pushout")

    pulled = pullback_dg(base.dashed, v2w2)
    out_left = adjunct_dg(
        _over(
            base.left,
            v2w,
            pulled,
            {
                (x2, y): tensor_ccmap(identity_cc(v2.fiber(x2)), gamma.component(y), sign)
                for (x2, y) in v2w.base.objects
            },
        ),
        left,
    )
    out_right = adjunct_dg(
        _over(
            base.right,
            vw2,
            pulled,
            {
                (x, y2): tensor_ccmap(phi.component(x), identity_cc(w2.fiber(y2)), sign)
                for (x, y2) in vw2.base.objects
            },
        ),
        right,
    )
    morphism = DgLocMorphism(
        glued,
        v2w2,
        base.dashed,
        {
            o: pushouts[o].induced(out_left.component(o), out_right.component(o))
            for o in p.objects
        },
    )
    logger.debug("pushout-product over %s regime: %d base objects", base.regime, len(p.objects))
    return ExternalPushoutProduct(base, corner, left, right, glued, morphism)


# =============================================================================
# Generating cofibrations and lifting
# =============================================================================


@dataclass
class CoveredGenerator:
    """A generating (acyclic) cofibration of the integral model structure."""

    name: str
    morphism: DgLocMorphism
    acyclic: bool


def _zero_over(x: FinGroupoid) -> DgLocalSystem:
    return constant_dg(x, ChainComplex.zero(), name="0")


def covered_generating_cofibrations(degrees: Sequence[int]) -> List[CoveredGenerator]:
    """Groupoid generators covered by ``0 -> 0`` and chain generators over ``pt``.

    Args:
        degrees: The ``n`` for which ``i_n`` and ``j_n`` are included
    """
    result = []
    for gen in fingrpd.groupoid_generating_cofibrations():
        f = gen.morphism
        result.append(
            CoveredGenerator(
                gen.name,
                DgLocMorphism(
                    _zero_over(f.source),
                    _zero_over(f.target),
                    f,
                    {x: identity_cc(ChainComplex.zero()) for x in f.source.objects},
                ),
                acyclic=fingrpd.is_equivalence(f),
            )
        )
    pt = fingrpd.terminal()
    ident = fingrpd.identity_functor(pt)
    for n in degrees:
        gen = generators(n)
        for label, cmap, acyclic in (("i", gen.i, False), ("j", gen.j, True)):
            result.append(
                CoveredGenerator(
                    f"{label}_{n}",
                    DgLocMorphism(
                        constant_dg(pt, cmap.domain),
                        constant_dg(pt, cmap.codomain),
                        ident,
                        {fingrpd.POINT: cmap},
                    ),
                    acyclic=acyclic,
                )
            )
    return result


def solve_lifting_dg(
    i: DgLocMorphism,
    p: DgLocMorphism,
    top: DgLocMorphism,
    bottom: DgLocMorphism,
) -> Optional[DgLocMorphism]:
    """A diagonal ``h: B -> E`` with ``h ∘ i = top`` and ``p ∘ h = bottom``, or None.

    The base functor is found by :func:`fingrpd.lift_functor`; the
    components then solve one linear system covering chain-map, lifting and
    naturality constraints at every object of the base of ``B``.

    Raises:
        LiftingInputError: If the square does not commute.
    """
    if compose_dg(p, top) != compose_dg(bottom, i):
        raise LiftingInputError("Lifting square does not commute")
    h = fingrpd.lift_functor(i.functor, p.functor, top.functor, bottom.functor)
    if h is None:
        logger.debug("no base lift for %s against %s", i.functor.name, p.functor.name)
        return None
    b_sys, e_sys = i.target, p.source
    b_grpd = b_sys.base
    degrees = active_degrees(
        *(b_sys.fiber(y) for y in b_grpd.objects),
        *(e_sys.fiber(z) for z in e_sys.base.objects),
    )
    slots: List[Tuple[ObjectId, int]] = [(y, n) for y in b_grpd.objects for n in degrees]
    unknowns = direct_sum(
        [internal_hom(b_sys.fiber(y).component(n), e_sys.fiber(h.obj(y)).component(n)) for y, n in slots],
        tags=[f"{k}" for k in range(len(slots))],
    )
    index = {s: k for k, s in enumerate(slots)}
    rows: List[LinearMap] = []
    rhs: List = []

    def unknown(y, n) -> LinearMap:
        return unknowns.projection(index[(y, n)])

    def b_comp(y, n) -> VectorSpace:
        return b_sys.fiber(y).component(n)

    def e_comp(y, n) -> VectorSpace:
        return e_sys.fiber(h.obj(y)).component(n)

    for y in b_grpd.objects:
        b_c, e_c = b_sys.fiber(y), e_sys.fiber(h.obj(y))
        for n in degrees:
            rows.append(compose(hom_map(identity(b_comp(y, n)), p.component(h.obj(y)).map(n)), unknown(y, n)))
            rhs.extend(vectorize(bottom.component(y).map(n)))
            if n - 1 in degrees:
                post = compose(hom_map(identity(b_comp(y, n)), e_c.differential(n)), unknown(y, n))
                pre = compose(hom_map(b_c.differential(n), identity(e_comp(y, n - 1))), unknown(y, n - 1))
                rows.append(add_maps(post, scale_map(Fraction(-1), pre)))
                rhs.extend([Fraction(0)] * post.codomain.dim)
    for a in i.source.base.objects:
        y = i.functor.obj(a)
        for n in degrees:
            rows.append(compose(hom_map(i.component(a).map(n), identity(e_comp(y, n))), unknown(y, n)))
            rhs.extend(vectorize(top.component(a).map(n)))
    for m in b_grpd.morphisms:
        y, y2 = b_grpd.src[m], b_grpd.dst[m]
        for n in degrees:
            post = compose(hom_map(identity(b_comp(y, n)), e_sys.along(h.mor(m)).map(n)), unknown(y, n))
            pre = compose(hom_map(b_sys.along(m).map(n), identity(e_comp(y2, n))), unknown(y2, n))
            rows.append(add_maps(post, scale_map(Fraction(-1), pre)))
            rhs.extend([Fraction(0)] * post.codomain.dim)

    coords: Tuple = ()
    if rows:
        stacked = direct_sum([r.codomain for r in rows], tags=[f"e{k}" for k in range(len(rows))])
        system = stacked.pair(rows, unknowns.space)
        target = map_from_columns(VectorSpace(("rhs",)), stacked.space, [rhs])
        solution = solve(system, target)
        if solution is None:
            logger.debug("fiber lifting system with %d unknowns is inconsistent", unknowns.space.dim)
            return None
        coords = solution.column(0)
    components = {}
    for y in b_grpd.objects:
        maps = {}
        for n in degrees:
            start = unknowns.offsets[index[(y, n)]]
            size = b_comp(y, n).dim * e_comp(y, n).dim
            maps[n] = devectorize(coords[start:start + size], b_comp(y, n), e_comp(y, n))
        components[y] = ChainMap(b_sys.fiber(y), e_sys.fiber(h.obj(y)), maps)
    return DgLocMorphism(b_sys, e_sys, h, components)


def is_iso_dg(phi: DgLocMorphism) -> bool:
    return fingrpd.is_isomorphism(phi.functor) and all(is_iso_cc(c) for c in phi.components.values())
