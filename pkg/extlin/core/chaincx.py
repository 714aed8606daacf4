"""Finitely supported chain complexes over the scalar field.

Degrees are integers; a complex stores only the degrees where its
component is nonzero and every other component is the zero space.
Differentials lower degree by one: ``∂_n: V_n -> V_{n-1}``.

Inside tensor, hom and pushout degrees the summands are ordered by
increasing first index, so expected matrices are bit-exact.

Example usage:
    from extlin.core.chaincx import generators, tensor_cc, homology

    gen = generators(1)
    homology(tensor_cc(gen.disk, gen.sphere)).dims()    # {}
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import ChainComplexError, CompositionError, LiftingInputError
from .finvect import (
    DirectSum,
    LinearMap,
    VectorSpace,
    add_maps,
    cokernel,
    compose,
    compose_all,
    devectorize,
    direct_sum,
    hom_map,
    identity,
    internal_hom,
    is_injective,
    is_invertible,
    is_surjective,
    kernel,
    map_from_columns,
    right_inverse,
    scale_map,
    solve,
    tensor_map,
    tensor_space,
    unit_space,
    vectorize,
    zero_map,
)

logger = logging.getLogger(__name__)

SignRule = Callable[[int], int]


def koszul_sign(p: int) -> int:
    """``(-1)^p`` for the second factor's differential."""
    return -1 if p % 2 else 1


def unsigned_sign(p: int) -> int:
    return 1


class ChainComplex:
    """A chain complex with finitely many nonzero components.

    Args:
        components: Degree to vector space; zero spaces are dropped
        differentials: Degree ``n`` to ``∂_n: V_n -> V_{n-1}``; missing ones are zero
        validate: Check shapes and ``∂∘∂ = 0``

    Raises:
        ChainComplexError: On a shape mismatch or ``∂_{n-1}∘∂_n != 0``,
            with ``location=("differential", n)``.
    """

    def __init__(
        self,
        components: Mapping[int, VectorSpace],
        differentials: Optional[Mapping[int, LinearMap]] = None,
        validate: bool = True,
    ):
        self.components: Dict[int, VectorSpace] = {
            n: v for n, v in sorted(components.items()) if v.dim > 0
        }
        differentials = dict(differentials or {})
        self.differentials: Dict[int, LinearMap] = {}
        for n in self.support:
            d = differentials.get(n)
            self.differentials[n] = d if d is not None else zero_map(self.component(n), self.component(n - 1))
        if validate:
            self._validate(differentials)

    def _validate(self, given: Mapping[int, LinearMap]):
        for n, d in given.items():
            if d.is_zero() and (n not in self.components or (n - 1) not in self.components):
                continue
            if d.domain != self.component(n) or d.codomain != self.component(n - 1):
                raise ChainComplexError(
                    f"Differential in degree {n} has the wrong domain or codomain",
                    location=("differential", n),
                )
        for n in self.support:
            if (n - 1) not in self.components:
                continue
            dd = compose(self.differential(n - 1), self.differential(n))
            if not dd.is_zero():
                raise ChainComplexError(
                    f"∂∘∂ is not zero from degree {n}",
                    location=("differential", n),
                    payload={"degree": n},
                )

    @property
    def support(self) -> List[int]:
        return list(self.components)

    def component(self, n: int) -> VectorSpace:
        return self.components.get(n, VectorSpace.zero())

    def differential(self, n: int) -> LinearMap:
        d = self.differentials.get(n)
        return d if d is not None else zero_map(self.component(n), self.component(n - 1))

    def dims(self) -> Dict[int, int]:
        return {n: v.dim for n, v in self.components.items()}

    def degree_range(self) -> List[int]:
        """Every degree where a component or a differential can be nonzero."""
        if not self.components:
            return []
        return list(range(min(self.components), max(self.components) + 2))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainComplex):
            return NotImplemented
        return self.components == other.components and all(
            self.differential(n) == other.differential(n) for n in self.support
        )

    def __hash__(self) -> int:
        return hash(tuple(self.components.items()))

    def __repr__(self) -> str:
        return f"ChainComplex({self.dims()})"

    @classmethod
    def zero(cls) -> "ChainComplex":
        return cls({})

    @classmethod
    def unit(cls) -> "ChainComplex":
        return cls({0: unit_space()})


class ChainMap:
    """Degreewise linear maps commuting with the differentials."""

    def __init__(
        self,
        domain: ChainComplex,
        codomain: ChainComplex,
        maps: Mapping[int, LinearMap],
        validate: bool = True,
    ):
        self.domain = domain
        self.codomain = codomain
        self.maps: Dict[int, LinearMap] = {}
        for n in active_degrees(domain, codomain):
            m = maps.get(n)
            self.maps[n] = m if m is not None else zero_map(domain.component(n), codomain.component(n))
        if validate:
            self._validate()

    def _validate(self):
        for n, m in self.maps.items():
            if m.domain != self.domain.component(n) or m.codomain != self.codomain.component(n):
                raise ChainComplexError(f"Chain map component in degree {n} has the wrong type", location=("map", n))
        for n in active_degrees(self.domain, self.codomain):
            left = compose(self.codomain.differential(n), self.map(n))
            right = compose(self.map(n - 1), self.domain.differential(n))
            if left != right:
                raise ChainComplexError(
                    f"Chain map does not commute with the differential in degree {n}",
                    location=("map", n),
                    payload={"degree": n},
                )

    def map(self, n: int) -> LinearMap:
        m = self.maps.get(n)
        return m if m is not None else zero_map(self.domain.component(n), self.codomain.component(n))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ChainMap):
            return NotImplemented
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and all(self.map(n) == other.map(n) for n in active_degrees(self.domain, self.codomain))
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain))

    def __repr__(self) -> str:
        return f"ChainMap({self.domain!r} -> {self.codomain!r})"


def active_degrees(*complexes: ChainComplex) -> List[int]:
    degrees = set()
    for c in complexes:
        degrees.update(c.degree_range())
    return sorted(degrees)


def assemble_blocks(domain: DirectSum, codomain: DirectSum, blocks: Iterable[Tuple[int, int, LinearMap]]) -> LinearMap:
    """``Σ inj_i ∘ block ∘ proj_j`` over ``(j, i, block)`` triples."""
    total = zero_map(domain.space, codomain.space)
    for j, i, block in blocks:
        total = add_maps(total, compose_all(codomain.injection(i), block, domain.projection(j)))
    return total


# =============================================================================
# Maps
# =============================================================================


def identity_cc(v: ChainComplex) -> ChainMap:
    return ChainMap(v, v, {n: identity(v.component(n)) for n in v.support}, validate=False)


def zero_cc_map(v: ChainComplex, w: ChainComplex) -> ChainMap:
    return ChainMap(v, w, {}, validate=False)


def compose_cc(g: ChainMap, f: ChainMap) -> ChainMap:
    if f.codomain != g.domain:
        raise CompositionError(f"Cannot compose {g!r} after {f!r}")
    return ChainMap(
        f.domain,
        g.codomain,
        {n: compose(g.map(n), f.map(n)) for n in active_degrees(f.domain, g.codomain)},
        validate=False,
    )


def is_iso_cc(f: ChainMap) -> bool:
    return all(is_invertible(f.map(n)) for n in active_degrees(f.domain, f.codomain))


def is_cofibration_cc(f: ChainMap) -> bool:
    """Degreewise injective."""
    return all(is_injective(f.map(n)) for n in active_degrees(f.domain, f.codomain))


def is_fibration_cc(f: ChainMap) -> bool:
    """Degreewise surjective."""
    return all(is_surjective(f.map(n)) for n in active_degrees(f.domain, f.codomain))


@dataclass
class DirectSumCC:
    complex: ChainComplex
    sums: Dict[int, DirectSum]

    def injection(self, k: int, source: ChainComplex) -> ChainMap:
        return ChainMap(
            source,
            self.complex,
            {n: self.sums[n].injection(k) for n in source.support},
            validate=False,
        )


def direct_sum_cc(complexes: Sequence[ChainComplex]) -> DirectSumCC:
    degrees = active_degrees(*complexes)
    sums = {
        n: direct_sum([c.component(n) for c in complexes], tags=[f"s{k}" for k in range(len(complexes))])
        for n in degrees
    }
    differentials = {
        n: sums[n].diagonal([c.differential(n) for c in complexes], sums[n - 1])
        for n in degrees
        if n - 1 in sums
    }
    return DirectSumCC(
        ChainComplex({n: s.space for n, s in sums.items()}, differentials, validate=False), sums
    )


# =============================================================================
# Tensor and hom
# =============================================================================


@dataclass
class TensorDegree:
    """``(V ⊗ W)_n`` as a direct sum over ``p + q = n`` with ``p`` increasing."""

    sum: DirectSum
    index: Dict[Tuple[int, int], int]


def _tensor_degree(v: ChainComplex, w: ChainComplex, n: int) -> TensorDegree:
    pairs = [(p, n - p) for p in v.support if (n - p) in w.components]
    summed = direct_sum(
        [tensor_space(v.component(p), w.component(q)) for p, q in pairs],
        tags=[f"{p}|{q}" for p, q in pairs],
    )
    return TensorDegree(summed, {pq: k for k, pq in enumerate(pairs)})


def _tensor_degrees(v: ChainComplex, w: ChainComplex) -> Dict[int, TensorDegree]:
    if not v.support or not w.support:
        return {}
    low = min(v.support) + min(w.support)
    high = max(v.support) + max(w.support)
    return {n: _tensor_degree(v, w, n) for n in range(low - 1, high + 2)}


def tensor_cc(v: ChainComplex, w: ChainComplex, sign: SignRule = koszul_sign) -> ChainComplex:
    """``V ⊗ W`` with ``∂(a ⊗ b) = ∂a ⊗ b + sign(p) a ⊗ ∂b`` for ``a`` in degree ``p``.

    Raises:
        ChainComplexError: If ``sign`` does not give a square-zero differential.
    """
    degrees = _tensor_degrees(v, w)
    differentials = {}
    for n, deg in degrees.items():
        if n - 1 not in degrees:
            continue
        lower = degrees[n - 1]
        blocks = []
        for (p, q), k in deg.index.items():
            if (p - 1, q) in lower.index:
                blocks.append((k, lower.index[(p - 1, q)], tensor_map(v.differential(p), identity(w.component(q)))))
            if (p, q - 1) in lower.index:
                piece = tensor_map(identity(v.component(p)), w.differential(q))
                blocks.append((k, lower.index[(p, q - 1)], scale_map(Fraction(sign(p)), piece)))
        differentials[n] = assemble_blocks(deg.sum, lower.sum, blocks)
    return ChainComplex({n: d.sum.space for n, d in degrees.items()}, differentials)


def tensor_ccmap(f: ChainMap, g: ChainMap, sign: SignRule = koszul_sign) -> ChainMap:
    """``f ⊗ g`` acting summand by summand."""
    source = tensor_cc(f.domain, g.domain, sign)
    target = tensor_cc(f.codomain, g.codomain, sign)
    src_deg = _tensor_degrees(f.domain, g.domain)
    dst_deg = _tensor_degrees(f.codomain, g.codomain)
    maps = {}
    for n in source.support:
        sd, dd = src_deg[n], dst_deg.get(n)
        if dd is None:
            continue
        blocks = [
            (k, dd.index[(p, q)], tensor_map(f.map(p), g.map(q)))
            for (p, q), k in sd.index.items()
            if (p, q) in dd.index
        ]
        maps[n] = assemble_blocks(sd.sum, dd.sum, blocks)
    return ChainMap(source, target, maps)


def tensor_unitor(v: ChainComplex) -> ChainMap:
    """The canonical iso ``V ⊗ 𝟙 -> V``."""
    source = tensor_cc(v, ChainComplex.unit())
    return ChainMap(
        source,
        v,
        {n: LinearMap(source.component(n), v.component(n), identity(v.component(n)).matrix) for n in v.support},
    )


def _hom_degree(v: ChainComplex, w: ChainComplex, n: int) -> TensorDegree:
    ks = [k for k in v.support if (k + n) in w.components]
    summed = direct_sum(
        [internal_hom(v.component(k), w.component(k + n)) for k in ks],
        tags=[f"{k}>{k + n}" for k in ks],
    )
    return TensorDegree(summed, {(k, k + n): i for i, k in enumerate(ks)})


def hom_cc(v: ChainComplex, w: ChainComplex) -> ChainComplex:
    """The mapping complex with ``(Df)_k = ∂f_k - (-1)^n f_{k-1}∂`` in degree ``n``."""
    if not v.support or not w.support:
        return ChainComplex.zero()
    low = min(w.support) - max(v.support)
    high = max(w.support) - min(v.support)
    degrees = {n: _hom_degree(v, w, n) for n in range(low - 1, high + 2)}
    differentials = {}
    for n, deg in degrees.items():
        if n - 1 not in degrees:
            continue
        lower = degrees[n - 1]
        blocks = []
        for (k, target), idx in deg.index.items():
            if (k, target - 1) in lower.index:
                post = hom_map(identity(v.component(k)), w.differential(target))
                blocks.append((idx, lower.index[(k, target - 1)], post))
            if (k + 1, target) in lower.index:
                pre = hom_map(v.differential(k + 1), identity(w.component(target)))
                blocks.append((idx, lower.index[(k + 1, target)], scale_map(Fraction(-koszul_sign(n)), pre)))
        differentials[n] = assemble_blocks(deg.sum, lower.sum, blocks)
    return ChainComplex({n: d.sum.space for n, d in degrees.items()}, differentials)


def chain_map_space(v: ChainComplex, w: ChainComplex) -> Tuple[VectorSpace, LinearMap]:
    """Chain maps ``V -> W`` as the kernel of the commutation constraints."""
    degrees = active_degrees(v, w)
    unknowns = direct_sum(
        [internal_hom(v.component(n), w.component(n)) for n in degrees],
        tags=[str(n) for n in degrees],
    )
    index = {n: i for i, n in enumerate(degrees)}
    rows = []
    for n in degrees:
        if n - 1 not in index:
            continue
        post = compose(hom_map(identity(v.component(n)), w.differential(n)), unknowns.projection(index[n]))
        pre = compose(hom_map(v.differential(n), identity(w.component(n - 1))), unknowns.projection(index[n - 1]))
        rows.append(add_maps(post, scale_map(Fraction(-1), pre)))
    constraints = direct_sum([r.codomain for r in rows], tags=[f"c{i}" for i in range(len(rows))])
    return kernel(constraints.pair(rows, unknowns.space), prefix="f")


# =============================================================================
# Homology
# =============================================================================


@dataclass
class HomologyDegree:
    """``H_n`` with cycle inclusion ``Z_n -> V_n`` and quotient ``Z_n -> H_n``."""

    cycles: LinearMap
    quotient: LinearMap
    representatives: LinearMap

    @property
    def dim(self) -> int:
        return self.quotient.codomain.dim

    def classify(self, vector: LinearMap) -> LinearMap:
        """Class of cycles given as the columns of a map into ``V_n``."""
        z = solve(self.cycles, vector)
        if z is None:
            raise ChainComplexError("Vector is not a cycle")
        return compose(self.quotient, z)


@dataclass
class Homology:
    complex: ChainComplex
    degrees: Dict[int, HomologyDegree]

    def dims(self) -> Dict[int, int]:
        """Nonzero homology dimensions by degree."""
        return {n: h.dim for n, h in self.degrees.items() if h.dim > 0}

    def dim(self, n: int) -> int:
        h = self.degrees.get(n)
        return h.dim if h is not None else 0

    def is_zero(self) -> bool:
        return not self.dims()


def homology(v: ChainComplex) -> Homology:
    """``H_n = ker ∂_n / im ∂_{n+1}`` in every supported degree."""
    degrees = {}
    for n in v.support:
        _, cycles = kernel(v.differential(n), prefix=f"z{n}_")
        boundaries = solve(cycles, v.differential(n + 1))
        assert boundaries is not None
        _, quotient = cokernel(boundaries, prefix=f"h{n}_")
        reps = compose(cycles, right_inverse(quotient))
        degrees[n] = HomologyDegree(cycles, quotient, reps)
        logger.debug("H_%d: %d cycles, %d classes", n, cycles.domain.dim, quotient.codomain.dim)
    return Homology(v, degrees)


def induced_on_homology(f: ChainMap, n: int, source: Optional[Homology] = None, target: Optional[Homology] = None) -> LinearMap:
    source = source if source is not None else homology(f.domain)
    target = target if target is not None else homology(f.codomain)
    hs, ht = source.degrees.get(n), target.degrees.get(n)
    if hs is None or ht is None:
        return zero_map(
            hs.quotient.codomain if hs is not None else VectorSpace.zero(),
            ht.quotient.codomain if ht is not None else VectorSpace.zero(),
        )
    return ht.classify(compose(f.map(n), hs.representatives))


def is_quasi_iso(f: ChainMap) -> bool:
    hs, ht = homology(f.domain), homology(f.codomain)
    return all(
        is_invertible(induced_on_homology(f, n, hs, ht))
        for n in sorted(set(f.domain.support) | set(f.codomain.support))
    )


# =============================================================================
# Generators of the model structure
# =============================================================================


def sphere(n: int) -> ChainComplex:
    """``𝕊^n``: one dimension in degree ``n``."""
    return ChainComplex({n: VectorSpace(("s",))})


def disk(n: int) -> ChainComplex:
    """``𝔻^n``: degrees ``n`` and ``n - 1`` joined by the identity."""
    top, bottom = VectorSpace(("d",)), VectorSpace(("b",))
    return ChainComplex({n: top, n - 1: bottom}, {n: LinearMap(top, bottom, ((Fraction(1),),))})


@dataclass
class Generators:
    """``i_n: 𝕊^{n-1} -> 𝔻^n`` and ``j_n: 0 -> 𝔻^n``."""

    n: int
    sphere: ChainComplex
    disk: ChainComplex
    i: ChainMap
    j: ChainMap


def generators(n: int) -> Generators:
    s, d = sphere(n - 1), disk(n)
    i = ChainMap(s, d, {n - 1: LinearMap(s.component(n - 1), d.component(n - 1), ((Fraction(1),),))})
    j = ChainMap(ChainComplex.zero(), d, {})
    return Generators(n, s, d, i, j)


# =============================================================================
# Pushouts and pushout-products
# =============================================================================


@dataclass
class Pushout:
    """``B ⊔_A C`` with coprojections and the degreewise projection from ``B ⊕ C``."""

    complex: ChainComplex
    left: ChainMap
    right: ChainMap
    sums: Dict[int, DirectSum]
    projections: Dict[int, LinearMap]
    sections: Dict[int, LinearMap]

    def induced(self, u: ChainMap, v: ChainMap) -> ChainMap:
        """The map out of the pushout restricting to ``u`` and ``v``."""
        target = u.codomain
        maps = {
            n: compose(self.sums[n].copair([u.map(n), v.map(n)], target.component(n)), self.sections[n])
            for n in self.complex.support
        }
        return ChainMap(self.complex, target, maps)


def pushout_cc(f: ChainMap, g: ChainMap) -> Pushout:
    """Degreewise cokernel of ``(f, -g): A -> B ⊕ C``."""
    if f.domain != g.domain:
        raise CompositionError("Pushout needs maps out of a common complex")
    b, c = f.codomain, g.codomain
    degrees = active_degrees(f.domain, b, c)
    sums, projections, sections = {}, {}, {}
    for n in degrees:
        summed = direct_sum([b.component(n), c.component(n)], tags=["L", "R"])
        glue = summed.pair([f.map(n), scale_map(Fraction(-1), g.map(n))], f.domain.component(n))
        _, proj = cokernel(glue, prefix=f"p{n}_")
        sums[n], projections[n], sections[n] = summed, proj, right_inverse(proj)
    differentials = {}
    for n in degrees:
        if n - 1 not in sums:
            continue
        total = sums[n].diagonal([b.differential(n), c.differential(n)], sums[n - 1])
        differentials[n] = compose_all(projections[n - 1], total, sections[n])
    complex_ = ChainComplex({n: p.codomain for n, p in projections.items()}, differentials)
    left = ChainMap(
        b,
        complex_,
        {n: compose(projections[n], sums[n].injection(0)) for n in degrees if n in complex_.components},
    )
    right = ChainMap(
        c,
        complex_,
        {n: compose(projections[n], sums[n].injection(1)) for n in degrees if n in complex_.components},
    )
    return Pushout(complex_, left, right, sums, projections, sections)


@dataclass
class PushoutProduct:
    """``f ⊗̂ g: (B ⊗ C) ⊔_{A ⊗ C} (A ⊗ D) -> B ⊗ D``."""

    pushout: Pushout
    map: ChainMap


def pushout_product_cc(f: ChainMap, g: ChainMap, sign: SignRule = koszul_sign) -> PushoutProduct:
    corner = pushout_cc(
        tensor_ccmap(f, identity_cc(g.domain), sign),
        tensor_ccmap(identity_cc(f.domain), g, sign),
    )
    result = corner.induced(
        tensor_ccmap(identity_cc(f.codomain), g, sign),
        tensor_ccmap(f, identity_cc(g.codomain), sign),
    )
    return PushoutProduct(corner, result)


# =============================================================================
# Lifting
# =============================================================================


def solve_lifting(i: ChainMap, p: ChainMap, top: ChainMap, bottom: ChainMap) -> Optional[ChainMap]:
    """A chain map ``h: B -> E`` with ``h∘i = top`` and ``p∘h = bottom``, or None.

    ``i: A -> B``, ``p: E -> X``, ``top: A -> E``, ``bottom: B -> X``. The
    degreewise unknowns are solved for in one linear system.

    Raises:
        LiftingInputError: If the square does not commute.
    """
    if compose_cc(p, top) != compose_cc(bottom, i):
        raise LiftingInputError("Lifting square does not commute")
    b, e = i.codomain, p.domain
    degrees = active_degrees(i.domain, b, e, p.codomain)
    unknowns = direct_sum(
        [internal_hom(b.component(n), e.component(n)) for n in degrees],
        tags=[str(n) for n in degrees],
    )
    index = {n: k for k, n in enumerate(degrees)}
    rows: List[LinearMap] = []
    rhs: List[Fraction] = []
    for n in degrees:
        h_n = unknowns.projection(index[n])
        rows.append(compose(hom_map(i.map(n), identity(e.component(n))), h_n))
        rhs.extend(vectorize(top.map(n)))
        rows.append(compose(hom_map(identity(b.component(n)), p.map(n)), h_n))
        rhs.extend(vectorize(bottom.map(n)))
        if n - 1 in index:
            post = compose(hom_map(identity(b.component(n)), e.differential(n)), h_n)
            pre = compose(
                hom_map(b.differential(n), identity(e.component(n - 1))),
                unknowns.projection(index[n - 1]),
            )
            rows.append(add_maps(post, scale_map(Fraction(-1), pre)))
            rhs.extend([Fraction(0)] * post.codomain.dim)
    stacked = direct_sum([r.codomain for r in rows], tags=[f"e{k}" for k in range(len(rows))])
    system = stacked.pair(rows, unknowns.space)
    target = map_from_columns(VectorSpace(("rhs",)), stacked.space, [rhs])
    solution = solve(system, target)
    if solution is None:
        logger.debug("lifting system with %d unknowns is inconsistent", unknowns.space.dim)
        return None
    coords = solution.column(0)
    maps = {}
    for n in degrees:
        start = unknowns.offsets[index[n]]
        size = b.component(n).dim * e.component(n).dim
        maps[n] = devectorize(coords[start:start + size], b.component(n), e.component(n))
    return ChainMap(b, e, maps)
