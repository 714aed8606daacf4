"""Simplicial chain complexes truncated at a fixed level.

Level ``s`` holds a chain complex; faces ``d_i`` go from level ``s`` to
``s - 1`` and degeneracies ``s_i`` from ``s`` to ``s + 1``. Only the
simplicial identities whose every term lives at levels ``0..N`` are
checked.

The total complex has ``⊕_{s+t=n} V_{s,t}`` in degree ``n`` with
``D = Σ_i (-1)^i d_i + (-1)^s ∂`` on the ``(s, t)`` summand.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from .chaincx import (
    ChainComplex,
    ChainMap,
    assemble_blocks,
    compose_cc,
    direct_sum_cc,
    identity_cc,
    is_quasi_iso,
    koszul_sign,
)
from .errors import SimplicialIdentityError
from .finvect import DirectSum, LinearMap, direct_sum, identity, scale_map

logger = logging.getLogger(__name__)


class TruncatedSimplicialComplex:
    """Levels ``0..N`` with faces ``faces[(s, i)]`` and degeneracies ``degeneracies[(s, i)]``.

    Raises:
        SimplicialIdentityError: If a map is missing, has the wrong ends, or
            an expressible simplicial identity fails.
    """

    def __init__(
        self,
        levels: Sequence[ChainComplex],
        faces: Mapping[Tuple[int, int], ChainMap],
        degeneracies: Mapping[Tuple[int, int], ChainMap],
        validate: bool = True,
    ):
        self.levels: List[ChainComplex] = list(levels)
        self.faces: Dict[Tuple[int, int], ChainMap] = dict(faces)
        self.degeneracies: Dict[Tuple[int, int], ChainMap] = dict(degeneracies)
        if validate:
            self._validate()

    @property
    def truncation(self) -> int:
        return len(self.levels) - 1

    def face(self, s: int, i: int) -> ChainMap:
        return self.faces[(s, i)]

    def degeneracy(self, s: int, i: int) -> ChainMap:
        return self.degeneracies[(s, i)]

    def _validate(self):
        top = self.truncation
        for s in range(1, top + 1):
            for i in range(s + 1):
                d = self.faces.get((s, i))
                if d is None or d.domain != self.levels[s] or d.codomain != self.levels[s - 1]:
                    raise SimplicialIdentityError(f"Face d_{i} at level {s} is missing or misplaced", location=("face", s, i))
        for s in range(top):
            for i in range(s + 1):
                g = self.degeneracies.get((s, i))
                if g is None or g.domain != self.levels[s] or g.codomain != self.levels[s + 1]:
                    raise SimplicialIdentityError(
                        f"Degeneracy s_{i} at level {s} is missing or misplaced", location=("degeneracy", s, i)
                    )
        # d_i d_j = d_{j-1} d_i for i < j
        for s in range(2, top + 1):
            for j in range(s + 1):
                for i in range(j):
                    if compose_cc(self.face(s - 1, i), self.face(s, j)) != compose_cc(self.face(s - 1, j - 1), self.face(s, i)):
                        raise SimplicialIdentityError(
                            f"d_{i} d_{j} != d_{j - 1} d_{i} at level {s}", location=("face", s, i, j)
                        )
        # s_i s_j = s_{j+1} s_i for i <= j
        for s in range(top - 1):
            for j in range(s + 1):
                for i in range(j + 1):
                    if compose_cc(self.degeneracy(s + 1, i), self.degeneracy(s, j)) != compose_cc(
                        self.degeneracy(s + 1, j + 1), self.degeneracy(s, i)
                    ):
                        raise SimplicialIdentityError(
                            f"s_{i} s_{j} != s_{j + 1} s_{i} at level {s}", location=("degeneracy", s, i, j)
                        )
        for s in range(top):
            for j in range(s + 1):
                for i in range(s + 2):
                    left = compose_cc(self.face(s + 1, i), self.degeneracy(s, j))
                    if i == j or i == j + 1:
                        right = identity_cc(self.levels[s])
                    elif i < j:
                        right = compose_cc(self.degeneracy(s - 1, j - 1), self.face(s, i))
                    else:
                        right = compose_cc(self.degeneracy(s - 1, j), self.face(s, i - 1))
                    if left != right:
                        raise SimplicialIdentityError(
                            f"d_{i} s_{j} identity fails at level {s}", location=("mixed", s, i, j)
                        )

    def __repr__(self) -> str:
        return f"TruncatedSimplicialComplex(N={self.truncation}, levels={[l.dims() for l in self.levels]})"


class TruncatedSimplicialMap:
    """Levelwise chain maps commuting with faces and degeneracies."""

    def __init__(
        self,
        source: TruncatedSimplicialComplex,
        target: TruncatedSimplicialComplex,
        maps: Sequence[ChainMap],
        validate: bool = True,
    ):
        self.source = source
        self.target = target
        self.maps = list(maps)
        if validate:
            self._validate()

    def _validate(self):
        if self.source.truncation != self.target.truncation or len(self.maps) != len(self.source.levels):
            raise SimplicialIdentityError("Simplicial map needs one chain map per level", location=("levels",))
        for (s, i), d in self.source.faces.items():
            if compose_cc(self.target.face(s, i), self.maps[s]) != compose_cc(self.maps[s - 1], d):
                raise SimplicialIdentityError(f"Map does not commute with d_{i} at level {s}", location=("face", s, i))
        for (s, i), g in self.source.degeneracies.items():
            if compose_cc(self.target.degeneracy(s, i), self.maps[s]) != compose_cc(self.maps[s + 1], g):
                raise SimplicialIdentityError(
                    f"Map does not commute with s_{i} at level {s}", location=("degeneracy", s, i)
                )


def const_simplicial(v: ChainComplex, truncation: int) -> TruncatedSimplicialComplex:
    """The constant simplicial object: every face and degeneracy is the identity."""
    ident = identity_cc(v)
    return TruncatedSimplicialComplex(
        [v] * (truncation + 1),
        {(s, i): ident for s in range(1, truncation + 1) for i in range(s + 1)},
        {(s, i): ident for s in range(truncation) for i in range(s + 1)},
    )


def zero_simplicial(truncation: int) -> TruncatedSimplicialComplex:
    return const_simplicial(ChainComplex.zero(), truncation)


# =============================================================================
# Tensoring with standard simplices
# =============================================================================


def _monotone(s: int, k: int) -> List[Tuple[int, ...]]:
    """Non-decreasing maps ``[s] -> [k]`` as value tuples, lexicographically."""
    return list(itertools.combinations_with_replacement(range(k + 1), s + 1))


def _copy_map(v: ChainComplex, source: DirectSum, target: DirectSum, send: Sequence[int], n: int) -> LinearMap:
    return assemble_blocks(source, target, [(a, b, identity(v.component(n))) for a, b in enumerate(send)])


def _level_sums(v: ChainComplex, k: int, truncation: int):
    simplices = [_monotone(s, k) for s in range(truncation + 1)]
    levels = [direct_sum_cc([v] * len(simps)) for simps in simplices]
    return simplices, levels


def _transport_level(v: ChainComplex, src, dst, send: Sequence[int]) -> ChainMap:
    maps = {n: _copy_map(v, src.sums[n], dst.sums[n], send, n) for n in src.complex.support if n in dst.sums}
    return ChainMap(src.complex, dst.complex, maps)


def simplex_tensoring(k: int, v: ChainComplex, truncation: int) -> TruncatedSimplicialComplex:
    """``𝕂[Δ[k]] · V``: one copy of ``V`` per ``s``-simplex of ``Δ[k]`` at level ``s``."""
    simplices, levels = _level_sums(v, k, truncation)
    index = [{sigma: a for a, sigma in enumerate(simps)} for simps in simplices]
    faces, degeneracies = {}, {}
    for s in range(1, truncation + 1):
        for i in range(s + 1):
            send = [index[s - 1][sigma[:i] + sigma[i + 1:]] for sigma in simplices[s]]
            faces[(s, i)] = _transport_level(v, levels[s], levels[s - 1], send)
    for s in range(truncation):
        for i in range(s + 1):
            send = [index[s + 1][sigma[:i + 1] + sigma[i:]] for sigma in simplices[s]]
            degeneracies[(s, i)] = _transport_level(v, levels[s], levels[s + 1], send)
    return TruncatedSimplicialComplex([lvl.complex for lvl in levels], faces, degeneracies)


def simplex_map_tensoring(delta: Sequence[int], k: int, l: int, v: ChainComplex, truncation: int) -> TruncatedSimplicialMap:
    """``𝕂[δ] · V: 𝕂[Δ[k]] · V -> 𝕂[Δ[l]] · V`` for a monotone ``δ: [k] -> [l]``."""
    if len(delta) != k + 1 or any(a > b for a, b in zip(delta, delta[1:])) or max(delta, default=0) > l:
        raise SimplicialIdentityError(f"{list(delta)} is not a monotone map [{k}] -> [{l}]", location=("delta",))
    source = simplex_tensoring(k, v, truncation)
    target = simplex_tensoring(l, v, truncation)
    src_simplices, src_levels = _level_sums(v, k, truncation)
    dst_simplices, dst_levels = _level_sums(v, l, truncation)
    maps = []
    for s in range(truncation + 1):
        index = {sigma: a for a, sigma in enumerate(dst_simplices[s])}
        send = [index[tuple(delta[x] for x in sigma)] for sigma in src_simplices[s]]
        maps.append(_transport_level(v, src_levels[s], dst_levels[s], send))
    return TruncatedSimplicialMap(source, target, maps)


# =============================================================================
# Totalization
# =============================================================================


@dataclass
class TotalDegree:
    sum: DirectSum
    index: Dict[Tuple[int, int], int]


def _total_degrees(x: TruncatedSimplicialComplex) -> Dict[int, TotalDegree]:
    supports = [(s, t) for s, level in enumerate(x.levels) for t in level.support]
    if not supports:
        return {}
    low = min(s + t for s, t in supports)
    high = max(s + t for s, t in supports)
    degrees = {}
    for n in range(low - 1, high + 2):
        pairs = [(s, n - s) for s in range(len(x.levels)) if (n - s) in x.levels[s].components]
        summed = direct_sum(
            [x.levels[s].component(t) for s, t in pairs],
            tags=[f"{s}|{t}" for s, t in pairs],
        )
        degrees[n] = TotalDegree(summed, {st: k for k, st in enumerate(pairs)})
    return degrees


def totalize(x: TruncatedSimplicialComplex) -> ChainComplex:
    """The total complex; ``∂∘∂ = 0`` is re-verified on construction."""
    degrees = _total_degrees(x)
    differentials = {}
    for n, deg in degrees.items():
        if n - 1 not in degrees:
            continue
        lower = degrees[n - 1]
        blocks = []
        for (s, t), k in deg.index.items():
            if (s, t - 1) in lower.index:
                inner = x.levels[s].differential(t)
                blocks.append((k, lower.index[(s, t - 1)], scale_map(Fraction(koszul_sign(s)), inner)))
            if (s - 1, t) in lower.index:
                for i in range(s + 1):
                    face = x.face(s, i).map(t)
                    blocks.append((k, lower.index[(s - 1, t)], scale_map(Fraction(koszul_sign(i)), face)))
        differentials[n] = assemble_blocks(deg.sum, lower.sum, blocks)
    total = ChainComplex({n: d.sum.space for n, d in degrees.items()}, differentials)
    logger.debug("totalized N=%d into %r", x.truncation, total)
    return total


def totalize_map(f: TruncatedSimplicialMap) -> ChainMap:
    source, target = totalize(f.source), totalize(f.target)
    src_deg, dst_deg = _total_degrees(f.source), _total_degrees(f.target)
    maps = {}
    for n in source.support:
        dd = dst_deg.get(n)
        if dd is None:
            continue
        blocks = [
            (k, dd.index[(s, t)], f.maps[s].map(t))
            for (s, t), k in src_deg[n].index.items()
            if (s, t) in dd.index
        ]
        maps[n] = assemble_blocks(src_deg[n].sum, dd.sum, blocks)
    return ChainMap(source, target, maps)


def is_levelwise_quasi_iso(f: TruncatedSimplicialMap) -> bool:
    return all(is_quasi_iso(m) for m in f.maps)


def is_total_quasi_iso(f: TruncatedSimplicialMap) -> bool:
    return is_quasi_iso(totalize_map(f))


def const_map(f: ChainMap, truncation: int) -> TruncatedSimplicialMap:
    """A chain map applied at every level of two constant objects."""
    return TruncatedSimplicialMap(
        const_simplicial(f.domain, truncation),
        const_simplicial(f.codomain, truncation),
        [f] * (truncation + 1),
    )
