"""Seeded generators of small test instances.

Every generator draws from the ``random.Random`` it was given, so a corpus
built from the same seed yields the same instances in the same order.
Groupoids and local systems are first assembled as payload dicts and run
through the post-build hooks before they are constructed and validated.

Example usage:
    import random
    from extlin.core.corpus import Corpus

    corpus = Corpus(random.Random(7))
    x = corpus.groupoid()
    v = corpus.local_system(x)
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from . import fingrpd, groups
from .chaincx import (
    ChainComplex,
    ChainMap,
    DirectSumCC,
    compose_cc,
    direct_sum_cc,
    disk,
    generators,
    homology,
    identity_cc,
    sphere,
    zero_cc_map,
)
from .dglocsys import (
    DgLocalSystem,
    DgLocMorphism,
    concentrated,
    constant_dg,
    external_tensor_dg,
    pullback_dg,
)
from .fingrpd import FinGroupoid, GroupoidFunctor
from .finvect import (
    LinearMap,
    VectorSpace,
    block_diagonal,
    compose_all,
    direct_sum,
    inverse,
)
from .groups import FiniteGroup
from .hooks import HookRunner
from .locsys import LocalSystem, bundle_over_set, representation
from .simplicial import TruncatedSimplicialMap, const_map, simplex_map_tensoring

logger = logging.getLogger(__name__)

GROUP_FAMILY: Dict[str, Callable[[], FiniteGroup]] = {
    "Z1": groups.trivial_group,
    "Z2": lambda: groups.cyclic(2),
    "Z3": lambda: groups.cyclic(3),
    "Z4": lambda: groups.cyclic(4),
    "Z5": lambda: groups.cyclic(5),
    "Z6": lambda: groups.cyclic(6),
    "V4": groups.klein_four,
    "S3": lambda: groups.symmetric(3),
}


@dataclass
class RandomComplex:
    """A generated complex with its homology dimensions known in advance."""

    complex: ChainComplex
    homology: Dict[int, int]


@dataclass
class LiftingCase:
    """A commuting square ``top: A -> E``, ``bottom: B -> X`` against ``i`` and ``p``."""

    i: ChainMap
    p: ChainMap
    top: ChainMap
    bottom: ChainMap


class Corpus:
    """Deterministic generators for groups, groupoids, functors and systems.

    Args:
        rng: The source of randomness
        hooks: Post-build hooks applied to generated groupoids and systems
    """

    def __init__(self, rng: random.Random, hooks: Optional[HookRunner] = None):
        self.rng = rng
        self.hooks = hooks if hooks is not None else HookRunner()

    # -------------------------------------------------------------------------
    # Emission through hooks
    # -------------------------------------------------------------------------

    def emit_groupoid(self, grpd: FinGroupoid) -> FinGroupoid:
        payload = {
            "objects": list(grpd.objects),
            "morphisms": [(m, grpd.src[m], grpd.dst[m]) for m in grpd.morphisms],
            "identities": dict(grpd.identities),
            "table": dict(grpd.table),
            "name": grpd.name,
        }
        payload = self.hooks.run_post_hooks("groupoid", payload)
        return FinGroupoid(
            payload["objects"],
            payload["morphisms"],
            payload["identities"],
            payload["table"],
            name=payload["name"],
        )

    def emit_system(self, system: LocalSystem) -> LocalSystem:
        payload = {
            "base": system.base,
            "fibers": dict(system.fibers),
            "transport": dict(system.transport),
            "name": system.name,
        }
        payload = self.hooks.run_post_hooks("local_system", payload)
        return LocalSystem(payload["base"], payload["fibers"], payload["transport"], name=payload["name"])

    # -------------------------------------------------------------------------
    # Groups and groupoids
    # -------------------------------------------------------------------------

    def group(self, max_order: int = 6) -> FiniteGroup:
        candidates = [make() for make in GROUP_FAMILY.values()]
        return self.rng.choice([g for g in candidates if g.order <= max_order])

    def subgroup_members(self, group: FiniteGroup) -> Tuple:
        return self.rng.choice(groups.subgroups(group))

    def groupoid(self, max_objects: int = 3, kinds: Optional[Sequence[str]] = None) -> FinGroupoid:
        """A groupoid from the fixed family.

        Args:
            max_objects: Upper bound on the number of objects (at most 4)
            kinds: Restrict to some of ``delooping``, ``codiscrete``,
                ``discrete``, ``action``, ``product``, ``coproduct``
        """
        kind = self.rng.choice(list(kinds or ("delooping", "codiscrete", "discrete", "action", "product", "coproduct")))
        if kind == "delooping":
            grpd = fingrpd.delooping(self.group())
        elif kind == "codiscrete":
            grpd = fingrpd.codiscrete(range(self.rng.randint(1, min(4, max_objects))))
        elif kind == "discrete":
            grpd = fingrpd.discrete(range(self.rng.randint(1, min(4, max_objects))))
        elif kind == "action":
            grpd = self._coset_groupoid(max_objects)
        elif kind == "product":
            k = self.rng.randint(1, max(1, min(2, max_objects)))
            grpd = fingrpd.product(fingrpd.delooping(self.group(max_order=3)), fingrpd.codiscrete(range(k))).groupoid
        else:
            left = fingrpd.delooping(self.group(max_order=4))
            right = fingrpd.codiscrete(range(self.rng.randint(1, max(1, min(2, max_objects - 1)))))
            grpd = fingrpd.coproduct([left, right]).groupoid
        logger.debug("generated %s groupoid %r", kind, grpd)
        return self.emit_groupoid(grpd)

    def _coset_groupoid(self, max_objects: int) -> FinGroupoid:
        group = self.group()
        options = [h for h in groups.subgroups(group) if group.order // len(h) <= max_objects]
        cosets = groups.left_cosets(group, self.rng.choice(options))
        return coset_action(group, cosets).groupoid

    # -------------------------------------------------------------------------
    # Functors
    # -------------------------------------------------------------------------

    def functor(self, max_objects: int = 3) -> GroupoidFunctor:
        """A functor of one of the shapes the law suites quantify over."""
        kind = self.rng.choice(
            ["terminal", "subgroup", "projection", "quotient", "skeleton", "codiagonal", "product", "point", "collapse"]
        )
        if kind == "subgroup":
            group = self.group()
            sub = groups.subgroup(group, self.subgroup_members(group))
            f = fingrpd.homomorphism_functor(sub, group, {h: h for h in sub.elements})
        elif kind == "projection":
            group = self.group()
            options = [h for h in groups.subgroups(group) if group.order // len(h) <= max_objects]
            f = coset_action(group, groups.left_cosets(group, self.rng.choice(options))).projection
        elif kind == "quotient":
            f = fingrpd.e_groupoid(self.group(max_order=3)).quotient
        elif kind == "skeleton":
            skl = fingrpd.skeletize(self.groupoid(max_objects))
            f = self.rng.choice([skl.retraction, skl.inclusion])
        elif kind == "codiagonal":
            x = self.groupoid(max(1, max_objects // 2), kinds=("delooping", "codiscrete", "discrete"))
            ident = fingrpd.identity_functor(x)
            f = fingrpd.coproduct([x, x]).copair([ident, ident], x)
        elif kind == "product":
            x = fingrpd.delooping(self.group(max_order=3))
            y = fingrpd.codiscrete(range(self.rng.randint(1, max(1, min(2, max_objects)))))
            f = fingrpd.product(x, y).projections[self.rng.randint(0, 1)]
        elif kind == "point":
            x = self.groupoid(max_objects)
            f = fingrpd.point_functor(x, self.rng.choice(x.objects))
        elif kind == "collapse":
            f = self.set_functor(max_objects, codiscrete=True)
        else:
            f = fingrpd.terminal_functor(self.groupoid(max_objects))
        logger.debug("generated %s functor %r", kind, f)
        return f

    def set_functor(self, max_objects: int = 3, codiscrete: bool = False) -> GroupoidFunctor:
        """A map of finite sets, as a functor of discrete (or codiscrete) groupoids."""
        source = list(range(self.rng.randint(1, max_objects)))
        target = [chr(ord("a") + k) for k in range(self.rng.randint(1, max_objects))]
        mapping = {x: self.rng.choice(target) for x in source}
        make = fingrpd.codiscrete if codiscrete else fingrpd.discrete
        s, t = make(source), make(target)
        return GroupoidFunctor(
            s,
            t,
            mapping,
            {m: (mapping[s.src[m]], mapping[s.dst[m]]) for m in s.morphisms},
            name="set-map",
        )

    # -------------------------------------------------------------------------
    # Linear data
    # -------------------------------------------------------------------------

    def unipotent(self, domain: VectorSpace, codomain: VectorSpace) -> LinearMap:
        """An upper unitriangular matrix with small random entries."""
        n = domain.dim
        rows = tuple(
            tuple(
                Fraction(1) if i == j else (Fraction(self.rng.randint(-1, 2)) if j > i else Fraction(0))
                for j in range(n)
            )
            for i in range(n)
        )
        return LinearMap(domain, codomain, rows)

    def vector(self, dim: int) -> Tuple[Fraction, ...]:
        return tuple(Fraction(self.rng.randint(-2, 2)) for _ in range(dim))

    def representation_maps(self, group: FiniteGroup, space_prefix: str, max_dim: int = 2) -> Tuple[VectorSpace, Dict[Hashable, LinearMap]]:
        """Matrices of a random representation, conjugated into a random basis.

        The building blocks are the trivial character, characters that are
        ``-1`` off an index-two subgroup, permutation representations on
        left cosets, and direct sums of two of these.
        """
        parts = [self._irreducible_part(group, max_dim)]
        if parts[0][0] < max_dim and self.rng.random() < 0.4:
            parts.append(self._irreducible_part(group, max_dim - parts[0][0]))
        dim = sum(d for d, _ in parts)
        space = VectorSpace.of_dim(dim, prefix=space_prefix)
        if len(parts) == 1:
            raw = {g: LinearMap(space, space, parts[0][1][g]) for g in group.elements}
        else:
            spaces = [VectorSpace.of_dim(d, prefix=f"{space_prefix}{k}.") for k, (d, _) in enumerate(parts)]
            summed = direct_sum(spaces)
            raw = {}
            for g in group.elements:
                block = block_diagonal(
                    [LinearMap(s, s, m[g]) for s, (_, m) in zip(spaces, parts)], summed, summed
                )
                raw[g] = LinearMap(space, space, block.matrix)
        change = self.unipotent(space, space)
        back = inverse(change)
        return space, {g: compose_all(change, raw[g], back) for g in group.elements}

    def _irreducible_part(self, group: FiniteGroup, max_dim: int):
        choices = ["trivial"]
        halves = [h for h in groups.subgroups(group) if 2 * len(h) == group.order]
        if halves:
            choices.append("character")
        cosets_ok = [h for h in groups.subgroups(group) if 1 < group.order // len(h) <= max_dim]
        if cosets_ok:
            choices.append("permutation")
        kind = self.rng.choice(choices)
        if kind == "character":
            members = set(self.rng.choice(halves))
            return 1, {g: ((Fraction(1 if g in members else -1),),) for g in group.elements}
        if kind == "permutation":
            cosets = groups.left_cosets(group, self.rng.choice(cosets_ok))
            where = {x: k for k, c in enumerate(cosets) for x in c}
            n = len(cosets)
            matrices = {}
            for g in group.elements:
                image = [where[group.mul(g, c[0])] for c in cosets]
                matrices[g] = tuple(
                    tuple(Fraction(1) if image[j] == i else Fraction(0) for j in range(n)) for i in range(n)
                )
            return n, matrices
        return 1, {g: ((Fraction(1),),) for g in group.elements}

    def representation(self, group: FiniteGroup, max_dim: int = 2) -> LocalSystem:
        space, maps = self.representation_maps(group, "r", max_dim)
        return self.emit_system(representation(group, space, maps, name=f"rep({group.name})"))

    def local_system(self, base: FinGroupoid, max_dim: int = 2) -> LocalSystem:
        """A random representation per component, transported along the skeleton.

        Each object ``o`` gets its own random basis ``T_o``; the transport
        along ``m: x -> y`` is ``T_y ρ(p(m)) T_x⁻¹`` where ``p`` is the
        skeletal retraction.
        """
        skl = fingrpd.skeletize(base)
        reps: Dict[Hashable, Tuple[VectorSpace, Dict]] = {}
        for b in skl.skeleton.objects:
            aut = fingrpd.automorphism_group(base, b)
            reps[b] = self.representation_maps(aut, f"{b}.", max_dim)
        fibers, twists = {}, {}
        for o in base.objects:
            space, _ = reps[skl.basepoint[o]]
            fibers[o] = VectorSpace.of_dim(space.dim, prefix=f"{o}.")
            twists[o] = self.unipotent(space, fibers[o])
        transport = {}
        for m in base.morphisms:
            x, y = base.src[m], base.dst[m]
            _, maps = reps[skl.basepoint[x]]
            transport[m] = compose_all(twists[y], maps[skl.retraction.mor(m)], inverse(twists[x]))
        system = LocalSystem(base, fibers, transport, name=f"L({base.name})", validate=False)
        return self.emit_system(system)

    def bundle(self, points: Optional[Sequence[Hashable]] = None, max_points: int = 4, max_dim: int = 3) -> LocalSystem:
        if points is None:
            points = list(range(self.rng.randint(1, max_points)))
        spaces = {p: VectorSpace.of_dim(self.rng.randint(0, max_dim), prefix=f"{p}.") for p in points}
        return self.emit_system(bundle_over_set(points, spaces))

    # -------------------------------------------------------------------------
    # Chain complexes
    # -------------------------------------------------------------------------

    def chain_complex(self, low: int = -1, high: int = 2, max_dim: int = 2) -> RandomComplex:
        """``V_n = B_n ⊕ H_n ⊕ C_n`` with ``∂`` mapping ``C_n`` onto ``B_{n-1}``.

        Each degree is then written in a random unitriangular basis, so the
        differentials are dense but the homology dimensions stay ``dim H_n``.
        """
        degrees = list(range(low, high + 1))
        b = {n: (self.rng.randint(0, max_dim) if n < high else 0) for n in degrees}
        h = {n: self.rng.randint(0, max_dim) for n in degrees}
        c = {n: b.get(n - 1, 0) for n in degrees}
        spaces = {n: VectorSpace.of_dim(b[n] + h[n] + c[n], prefix=f"v{n}.") for n in degrees}
        bases = {n: self.unipotent(spaces[n], spaces[n]) for n in degrees}
        differentials = {}
        for n in degrees:
            if n - 1 not in spaces:
                continue
            rows = []
            for i in range(spaces[n - 1].dim):
                row = []
                for j in range(spaces[n].dim):
                    hit = i < b[n - 1] and j == b[n] + h[n] + i
                    row.append(Fraction(1) if hit else Fraction(0))
                rows.append(tuple(row))
            raw = LinearMap(spaces[n], spaces[n - 1], tuple(rows))
            differentials[n] = compose_all(bases[n - 1], raw, inverse(bases[n]))
        complex_ = ChainComplex(spaces, differentials)
        return RandomComplex(complex_, {n: d for n, d in h.items() if d > 0})

    def quasi_iso(self, v: ChainComplex) -> ChainMap:
        """The inclusion of ``V`` into ``V ⊕ 𝔻^k``."""
        k = self.rng.randint(-1, 2)
        summed = direct_sum_cc([v, disk(k)])
        return summed.injection(0, v)

    def non_quasi_iso(self, v: ChainComplex) -> ChainMap:
        """The inclusion of ``V`` into ``V ⊕ 𝕊^k``."""
        summed = direct_sum_cc([v, sphere(self.rng.randint(-1, 2))])
        return summed.injection(0, v)

    def disk_map(self, n: int, target: ChainComplex) -> ChainMap:
        """A random chain map ``𝔻^n -> X``, fixed by the image of the top generator."""
        d = disk(n)
        top = LinearMap(d.component(n), target.component(n), tuple((x,) for x in self.vector(target.component(n).dim)))
        below = compose_all(target.differential(n), top)
        return ChainMap(d, target, {n: top, n - 1: LinearMap(d.component(n - 1), target.component(n - 1), below.matrix)})

    def lifting_case(self, n: int, acyclic: bool) -> LiftingCase:
        """``i_n`` against an acyclic fibration, or ``j_n`` against a fibration.

        The fibration is the projection ``X ⊕ Z -> X``; ``Z`` is a disk in
        the acyclic case and a random complex otherwise.
        """
        x = self.chain_complex().complex
        gen = generators(n)
        bottom = self.disk_map(n, x)
        if not acyclic:
            summed, p = split_projection(x, self.chain_complex().complex)
            return LiftingCase(gen.j, p, zero_cc_map(gen.j.domain, p.domain), bottom)
        summed, p = split_projection(x, disk(self.rng.randint(-1, 2)))
        boundary = compose_cc(bottom, gen.i)
        maps = {}
        if n - 1 in summed.sums:
            maps[n - 1] = compose_all(summed.sums[n - 1].injection(0), boundary.map(n - 1))
        top = ChainMap(gen.sphere, summed.complex, maps)
        return LiftingCase(gen.i, p, top, bottom)

    def simplicial_map(self, truncation: int = 2) -> Tuple[TruncatedSimplicialMap, bool]:
        """A truncated simplicial map and whether it is a levelwise quasi-isomorphism."""
        v = self.chain_complex(low=0, high=1, max_dim=1).complex
        choice = self.rng.choice(["quasi", "plain", "vertex"])
        if choice == "quasi":
            return const_map(self.quasi_iso(v), truncation), True
        if choice == "plain":
            return const_map(self.non_quasi_iso(v), truncation), False
        # Every level of the target holds at least two copies of V.
        return simplex_map_tensoring([0], 0, 1, v, truncation), homology(v).is_zero()

    # -------------------------------------------------------------------------
    # Chain-complex-valued systems
    # -------------------------------------------------------------------------

    def dg_system(self, base: Optional[FinGroupoid] = None, max_dim: int = 1) -> DgLocalSystem:
        """``L ⊠ C`` for a random local system ``L`` and a random complex ``C``."""
        base = base if base is not None else self.groupoid(max_objects=2)
        local = self.local_system(base, max_dim=max_dim)
        complex_ = self.chain_complex(low=0, high=1, max_dim=max_dim).complex
        return external_tensor_dg(concentrated(local, 0), constant_dg(fingrpd.terminal(), complex_))

    def dg_weq(self, system: Optional[DgLocalSystem] = None) -> DgLocMorphism:
        """A weak equivalence into or out of ``system``.

        Either the cartesian lift along a skeleton inclusion, or the
        objectwise inclusion into ``V ⊕ 𝔻^k``.
        """
        system = system if system is not None else self.dg_system()
        if self.rng.random() < 0.5:
            skl = fingrpd.skeletize(system.base)
            pulled = pullback_dg(skl.inclusion, system)
            return DgLocMorphism(
                pulled,
                system,
                skl.inclusion,
                {x: identity_cc(pulled.fiber(x)) for x in pulled.base.objects},
            )
        return stabilize(system, self.rng.randint(-1, 2))


# =============================================================================
# Shared constructions
# =============================================================================


def coset_action(group: FiniteGroup, cosets: List[Tuple]) -> fingrpd.ActionGroupoid:
    """``G/H // G`` with objects the coset indices."""
    where = {x: k for k, c in enumerate(cosets) for x in c}
    return fingrpd.action_groupoid(
        group,
        list(range(len(cosets))),
        lambda g, k: where[group.mul(g, cosets[k][0])],
        name=f"{group.name}/{len(cosets)}",
    )


def split_projection(x: ChainComplex, extra: ChainComplex) -> Tuple[DirectSumCC, ChainMap]:
    """``X ⊕ Z`` with its projection onto ``X``, a fibration; acyclic when ``Z`` is."""
    summed = direct_sum_cc([x, extra])
    projection = ChainMap(
        summed.complex,
        x,
        {n: summed.sums[n].projection(0) for n in summed.sums if n in x.components},
    )
    return summed, projection


def stabilize(system: DgLocalSystem, k: int) -> DgLocMorphism:
    """The objectwise inclusion ``V -> V ⊕ 𝔻^k`` over the identity."""
    base = system.base
    sums = {x: direct_sum_cc([system.fiber(x), disk(k)]) for x in base.objects}
    disk_id = identity_cc(disk(k))
    transport = {}
    for m in base.morphisms:
        src, dst = sums[base.src[m]], sums[base.dst[m]]
        along = system.along(m)
        transport[m] = ChainMap(
            src.complex,
            dst.complex,
            {
                n: src.sums[n].diagonal([along.map(n), disk_id.map(n)], dst.sums[n])
                for n in src.sums
                if n in dst.sums
            },
        )
    target = DgLocalSystem(base, {x: s.complex for x, s in sums.items()}, transport, name=f"{system.name}+D{k}")
    return DgLocMorphism(
        system,
        target,
        fingrpd.identity_functor(base),
        {x: sums[x].injection(0, system.fiber(x)) for x in base.objects},
    )
