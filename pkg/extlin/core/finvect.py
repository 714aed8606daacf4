"""Finite-dimensional vector spaces and exact linear maps.

Matrices are tuples of row tuples of field elements. A ``LinearMap`` from
``V`` to ``W`` has ``W.dim`` rows and ``V.dim`` columns, so composition is
the ordinary matrix product. Tensor products order their basis
lexicographically with the left factor major; internal homs ``[V, W]``
order their basis ``e_{ij}`` (sending ``v_j`` to ``w_i``) with the ``W``
index major, so a map's coordinates are its matrix flattened row by row.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import CompositionError, InvariantError
from .scalars import FieldElement, format_scalar

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[FieldElement, ...], ...]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class VectorSpace:
    """A based vector space, identified by its ordered basis labels."""

    labels: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(str(label) for label in self.labels))
        if len(set(self.labels)) != len(self.labels):
            raise InvariantError(
                f"Basis labels must be distinct: {list(self.labels)}",
                location=("labels",),
            )

    @property
    def dim(self) -> int:
        return len(self.labels)

    @classmethod
    def of_dim(cls, n: int, prefix: str = "e") -> "VectorSpace":
        return cls(tuple(f"{prefix}{i}" for i in range(n)))

    @classmethod
    def zero(cls) -> "VectorSpace":
        return cls(())

    def __repr__(self) -> str:
        return f"VectorSpace({list(self.labels)})"


def _shape_ok(matrix: Matrix, rows: int, cols: int) -> bool:
    return len(matrix) == rows and all(len(row) == cols for row in matrix)


@dataclass(frozen=True)
class LinearMap:
    """A matrix with typed domain and codomain."""

    domain: VectorSpace
    codomain: VectorSpace
    matrix: Matrix

    def __post_init__(self):
        matrix = tuple(tuple(row) for row in self.matrix)
        object.__setattr__(self, "matrix", matrix)
        if not _shape_ok(matrix, self.codomain.dim, self.domain.dim):
            raise InvariantError(
                f"Matrix shape does not match {self.codomain.dim}x{self.domain.dim}",
                location=("matrix",),
            )

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.codomain.dim, self.domain.dim)

    def column(self, j: int) -> Tuple[FieldElement, ...]:
        return tuple(row[j] for row in self.matrix)

    def apply(self, vector: Sequence[FieldElement]) -> Tuple[FieldElement, ...]:
        return tuple(sum((a * b for a, b in zip(row, vector)), _ZERO) for row in self.matrix)

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.matrix for x in row)

    def transpose_matrix(self) -> Matrix:
        return transpose(self.matrix, self.domain.dim)

    def __repr__(self) -> str:
        rows = ["[" + ", ".join(format_scalar(x) for x in row) + "]" for row in self.matrix]
        return f"LinearMap({self.domain.dim}->{self.codomain.dim}: [{', '.join(rows)}])"


# =============================================================================
# Raw matrix helpers
# =============================================================================


def transpose(matrix: Matrix, cols: int) -> Matrix:
    return tuple(tuple(row[j] for row in matrix) for j in range(cols))


def matmul(a: Matrix, b: Matrix, inner: int, cols: int) -> Matrix:
    # Zero entries of a row are skipped.
    result = []
    for row in a:
        terms = [(row[k], b[k]) for k in range(inner) if row[k]]
        result.append(tuple(sum((x * other[j] for x, other in terms), _ZERO) for j in range(cols)))
    return tuple(result)


def zero_matrix(rows: int, cols: int) -> Matrix:
    return tuple(tuple(_ZERO for _ in range(cols)) for _ in range(rows))


def identity_matrix(n: int) -> Matrix:
    return tuple(tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n))


def kron(a: Matrix, b: Matrix, b_rows: int, b_cols: int, a_cols: int) -> Matrix:
    """Kronecker product, rows/columns ordered left-factor major."""
    zeros = (_ZERO,) * b_cols
    rows: List[Tuple[FieldElement, ...]] = []
    for a_row in a:
        for k in range(b_rows):
            row: List[FieldElement] = []
            for j in range(a_cols):
                x = a_row[j]
                if x:
                    row.extend(x * y for y in b[k])
                else:
                    row.extend(zeros)
            rows.append(tuple(row))
    return tuple(rows)


def block_matrix(blocks: Sequence[Sequence[Matrix]], row_sizes: Sequence[int], col_sizes: Sequence[int]) -> Matrix:
    rows: List[Tuple[FieldElement, ...]] = []
    for bi, height in enumerate(row_sizes):
        for r in range(height):
            row: List[FieldElement] = []
            for bj, width in enumerate(col_sizes):
                block = blocks[bi][bj]
                row.extend(block[r] if block is not None else [_ZERO] * width)
            rows.append(tuple(row))
    return tuple(rows)


def rref(matrix: Matrix, cols: int) -> Tuple[List[List[FieldElement]], List[int]]:
    """Reduced row echelon form; pivots are the first nonzero entry in column order."""
    rows = [list(row) for row in matrix]
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][c]
        if lead != 1:
            rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def nullspace(matrix: Matrix, cols: int) -> List[Tuple[FieldElement, ...]]:
    """Basis of ``{x : matrix·x = 0}``, one vector per free column in order."""
    reduced, pivots = rref(matrix, cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        vec = [_ZERO] * cols
        vec[free] = _ONE
        for row_idx, pc in enumerate(pivots):
            vec[pc] = -reduced[row_idx][free]
        basis.append(tuple(vec))
    return basis


def solve_matrix(a: Matrix, b: Matrix, a_cols: int, b_cols: int) -> Optional[Matrix]:
    """A particular solution X of ``a·X = b``, or None when inconsistent."""
    n_rows = len(a)
    augmented = tuple(tuple(a[i]) + tuple(b[i]) for i in range(n_rows))
    reduced, pivots = rref(augmented, a_cols + b_cols)
    for row_idx, pc in enumerate(pivots):
        if pc >= a_cols:
            return None
    x = [[_ZERO] * b_cols for _ in range(a_cols)]
    for row_idx, pc in enumerate(pivots):
        for j in range(b_cols):
            x[pc][j] = reduced[row_idx][a_cols + j]
    return tuple(tuple(row) for row in x)


def matrix_rank(matrix: Matrix, cols: int) -> int:
    return len(rref(matrix, cols)[1])


# =============================================================================
# Maps
# =============================================================================


def identity(space: VectorSpace) -> LinearMap:
    return LinearMap(space, space, identity_matrix(space.dim))


def zero_map(domain: VectorSpace, codomain: VectorSpace) -> LinearMap:
    return LinearMap(domain, codomain, zero_matrix(codomain.dim, domain.dim))


def compose(g: LinearMap, f: LinearMap) -> LinearMap:
    """``g ∘ f``; the inner spaces must be identical."""
    if f.codomain != g.domain:
        raise CompositionError(
            f"Cannot compose: codomain {f.codomain!r} of the first map "
            f"differs from domain {g.domain!r} of the second"
        )
    return LinearMap(f.domain, g.codomain, matmul(g.matrix, f.matrix, f.codomain.dim, f.domain.dim))


def compose_all(*maps: LinearMap) -> LinearMap:
    """``compose_all(h, g, f) = h ∘ g ∘ f``."""
    result = maps[-1]
    for m in reversed(maps[:-1]):
        result = compose(m, result)
    return result


def add_maps(f: LinearMap, g: LinearMap) -> LinearMap:
    if f.domain != g.domain or f.codomain != g.codomain:
        raise CompositionError(f"Cannot add maps of different types: {f!r}, {g!r}")
    return LinearMap(
        f.domain,
        f.codomain,
        tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(f.matrix, g.matrix)),
    )


def scale_map(c: FieldElement, f: LinearMap) -> LinearMap:
    return LinearMap(f.domain, f.codomain, tuple(tuple(c * x for x in row) for row in f.matrix))


def sub_maps(f: LinearMap, g: LinearMap) -> LinearMap:
    return add_maps(f, scale_map(-_ONE, g))


def rank(f: LinearMap) -> int:
    return matrix_rank(f.matrix, f.domain.dim)


def is_injective(f: LinearMap) -> bool:
    return rank(f) == f.domain.dim


def is_surjective(f: LinearMap) -> bool:
    return rank(f) == f.codomain.dim


def is_invertible(f: LinearMap) -> bool:
    return f.domain.dim == f.codomain.dim and rank(f) == f.domain.dim


def solve(a: LinearMap, b: LinearMap) -> Optional[LinearMap]:
    """A map X with ``a ∘ X = b`` (same domain as ``b``), or None."""
    if a.codomain != b.codomain:
        raise CompositionError(f"solve needs a common codomain: {a.codomain!r} vs {b.codomain!r}")
    x = solve_matrix(a.matrix, b.matrix, a.domain.dim, b.domain.dim)
    if x is None:
        return None
    return LinearMap(b.domain, a.domain, x)


def solve_left(a: LinearMap, b: LinearMap) -> Optional[LinearMap]:
    """A map X with ``X ∘ a = b`` (same codomain as ``b``), or None."""
    if a.domain != b.domain:
        raise CompositionError(f"solve_left needs a common domain: {a.domain!r} vs {b.domain!r}")
    xt = solve_matrix(
        a.transpose_matrix(), b.transpose_matrix(), a.codomain.dim, b.codomain.dim
    )
    if xt is None:
        return None
    return LinearMap(a.codomain, b.codomain, transpose(xt, b.codomain.dim))


def inverse(f: LinearMap) -> LinearMap:
    if not is_invertible(f):
        raise InvariantError(f"Map is not invertible: {f!r}", location=("matrix",))
    result = solve(f, identity(f.codomain))
    assert result is not None
    return result


def right_inverse(p: LinearMap) -> LinearMap:
    """A section ``s`` with ``p ∘ s = id`` of a surjective map."""
    s = solve(p, identity(p.codomain))
    if s is None:
        raise InvariantError(f"Map is not surjective: {p!r}", location=("matrix",))
    return s


def relabel(f: LinearMap, domain: VectorSpace, codomain: VectorSpace) -> LinearMap:
    """The same matrix between spaces of matching dimensions."""
    return LinearMap(domain, codomain, f.matrix)


# =============================================================================
# Kernels, cokernels, images
# =============================================================================


def kernel(f: LinearMap, prefix: str = "k") -> Tuple[VectorSpace, LinearMap]:
    """``(ker f, inclusion)`` with a basis from the reduced row echelon form."""
    basis = nullspace(f.matrix, f.domain.dim)
    space = VectorSpace.of_dim(len(basis), prefix)
    inclusion = LinearMap(space, f.domain, transpose(tuple(basis), f.domain.dim) if basis else zero_matrix(f.domain.dim, 0))
    return space, inclusion


def cokernel(f: LinearMap, prefix: str = "c") -> Tuple[VectorSpace, LinearMap]:
    """``(coker f, projection)``; the projection rows span the left kernel of ``f``."""
    rows = nullspace(f.transpose_matrix(), f.codomain.dim)
    space = VectorSpace.of_dim(len(rows), prefix)
    projection = LinearMap(f.codomain, space, tuple(rows))
    return space, projection


# =============================================================================
# Monoidal structure
# =============================================================================


_SPECIAL = frozenset("⊗←·:()\\")


def _factor(label: str) -> str:
    """``label`` as one factor of a compound label.

    Labels holding a separator or a bracket are wrapped in parentheses with
    inner brackets and backslashes escaped, so a compound label splits back
    into its factors in exactly one way.
    """
    if _SPECIAL.isdisjoint(label):
        return label
    escaped = label.replace("\\", "\\\\").replace("(", "\\(").replace(")", "\\)")
    return f"({escaped})"


def compound_label(sep: str, a: str, b: str) -> str:
    return f"{_factor(a)}{sep}{_factor(b)}"


def tensor_label(a: str, b: str) -> str:
    return compound_label("⊗", a, b)


def tensor_space(v: VectorSpace, w: VectorSpace) -> VectorSpace:
    return VectorSpace(tuple(tensor_label(a, b) for a in v.labels for b in w.labels))


def tensor_map(f: LinearMap, g: LinearMap) -> LinearMap:
    """Kronecker product ``f ⊗ g`` in the left-major basis order."""
    return LinearMap(
        tensor_space(f.domain, g.domain),
        tensor_space(f.codomain, g.codomain),
        kron(f.matrix, g.matrix, g.codomain.dim, g.domain.dim, f.domain.dim),
    )


def unit_space() -> VectorSpace:
    return VectorSpace(("1",))


def permutation_map(domain: VectorSpace, codomain: VectorSpace, perm: Sequence[int]) -> LinearMap:
    """The map sending basis vector ``j`` of the domain to basis vector ``perm[j]``."""
    rows = [[_ZERO] * domain.dim for _ in range(codomain.dim)]
    for j, i in enumerate(perm):
        rows[i][j] = _ONE
    return LinearMap(domain, codomain, tuple(tuple(r) for r in rows))


def associator(u: VectorSpace, v: VectorSpace, w: VectorSpace) -> LinearMap:
    """``(U⊗V)⊗W → U⊗(V⊗W)``; a permutation matrix relabelling the basis."""
    src = tensor_space(tensor_space(u, v), w)
    dst = tensor_space(u, tensor_space(v, w))
    return permutation_map(src, dst, range(src.dim))


def braiding(v: VectorSpace, w: VectorSpace) -> LinearMap:
    """``V⊗W → W⊗V``."""
    perm = [j * v.dim + i for i in range(v.dim) for j in range(w.dim)]
    return permutation_map(tensor_space(v, w), tensor_space(w, v), perm)


def left_unitor(v: VectorSpace) -> LinearMap:
    """``1⊗V → V``."""
    return permutation_map(tensor_space(unit_space(), v), v, range(v.dim))


@dataclass(frozen=True)
class DirectSum:
    """A finite biproduct with its coprojections and projections."""

    space: VectorSpace
    summands: Tuple[VectorSpace, ...]
    offsets: Tuple[int, ...]

    def injection(self, k: int) -> LinearMap:
        summand = self.summands[k]
        return permutation_map(summand, self.space, [self.offsets[k] + j for j in range(summand.dim)])

    def projection(self, k: int) -> LinearMap:
        summand = self.summands[k]
        rows = [[_ZERO] * self.space.dim for _ in range(summand.dim)]
        for j in range(summand.dim):
            rows[j][self.offsets[k] + j] = _ONE
        return LinearMap(self.space, summand, tuple(tuple(r) for r in rows))

    def copair(self, maps: Sequence[LinearMap], codomain: VectorSpace) -> LinearMap:
        """The map out of the sum restricting to ``maps[k]`` on summand ``k``."""
        cols = [zero_matrix(codomain.dim, s.dim) if m is None else m.matrix for s, m in zip(self.summands, maps)]
        rows = tuple(
            tuple(x for block in cols for x in block[r]) for r in range(codomain.dim)
        )
        return LinearMap(self.space, codomain, rows)

    def pair(self, maps: Sequence[LinearMap], domain: VectorSpace) -> LinearMap:
        """The map into the sum with components ``maps[k]``."""
        rows: List[Tuple[FieldElement, ...]] = []
        for s, m in zip(self.summands, maps):
            rows.extend(zero_matrix(s.dim, domain.dim) if m is None else m.matrix)
        return LinearMap(domain, self.space, tuple(rows))

    def diagonal(self, maps: Sequence[LinearMap], other: "DirectSum") -> LinearMap:
        """Block-diagonal map between two sums with matching summand counts."""
        blocks = [
            [maps[i].matrix if i == j else None for j in range(len(self.summands))]
            for i in range(len(other.summands))
        ]
        return LinearMap(
            self.space,
            other.space,
            block_matrix(blocks, [s.dim for s in other.summands], [s.dim for s in self.summands]),
        )


def direct_sum(spaces: Sequence[VectorSpace], tags: Optional[Sequence[str]] = None) -> DirectSum:
    """``V_0 ⊕ ... ⊕ V_k`` with labels ``tag:label``."""
    tags = list(tags) if tags is not None else [str(k) for k in range(len(spaces))]
    labels: List[str] = []
    offsets: List[int] = []
    for tag, space in zip(tags, spaces):
        offsets.append(len(labels))
        labels.extend(compound_label(":", str(tag), label) for label in space.labels)
    return DirectSum(VectorSpace(tuple(labels)), tuple(spaces), tuple(offsets))


def set_tensoring(points: Sequence[str], v: VectorSpace) -> DirectSum:
    """``S·V``: one copy of ``V`` per element of ``S``, labelled ``s·v``."""
    labels = tuple(compound_label("·", str(s), label) for s in points for label in v.labels)
    offsets = tuple(k * v.dim for k in range(len(points)))
    return DirectSum(VectorSpace(labels), tuple(v for _ in points), offsets)


def free_space(points: Sequence[str]) -> VectorSpace:
    """``K[S]`` with basis labelled by the elements of ``S``."""
    return VectorSpace(tuple(str(s) for s in points))


def set_tensoring_witness(points: Sequence[str], v: VectorSpace) -> LinearMap:
    """The canonical isomorphism ``S·V → K[S] ⊗ V``."""
    source = set_tensoring(points, v).space
    target = tensor_space(free_space(points), v)
    return permutation_map(source, target, range(source.dim))


# =============================================================================
# Closed structure
# =============================================================================


def hom_label(w: str, v: str) -> str:
    return compound_label("←", w, v)


def internal_hom(v: VectorSpace, w: VectorSpace) -> VectorSpace:
    """``[V, W]`` with basis ``e_{ij}``: ``v_j ↦ w_i``, ``W`` index major."""
    return VectorSpace(tuple(hom_label(b, a) for b in w.labels for a in v.labels))


def vectorize(f: LinearMap, space: Optional[VectorSpace] = None) -> Tuple[FieldElement, ...]:
    """Coordinates of ``f`` in ``[dom f, cod f]``."""
    return tuple(x for row in f.matrix for x in row)


def devectorize(coords: Sequence[FieldElement], v: VectorSpace, w: VectorSpace) -> LinearMap:
    return LinearMap(v, w, tuple(tuple(coords[i * v.dim:(i + 1) * v.dim]) for i in range(w.dim)))


def hom_map(f: LinearMap, g: LinearMap) -> LinearMap:
    """``[f, g] : [V, W] → [V', W']``, ``M ↦ g ∘ M ∘ f`` for ``f: V' → V``, ``g: W → W'``."""
    ft = LinearMap(f.codomain, f.domain, f.transpose_matrix())
    result = tensor_map(g, ft)
    return LinearMap(
        internal_hom(f.codomain, g.domain),
        internal_hom(f.domain, g.codomain),
        result.matrix,
    )


def evaluation(v: VectorSpace, w: VectorSpace) -> LinearMap:
    """``[V, W] ⊗ V → W``."""
    hom = internal_hom(v, w)
    src = tensor_space(hom, v)
    rows = [[_ZERO] * src.dim for _ in range(w.dim)]
    for i in range(w.dim):
        for j in range(v.dim):
            rows[i][(i * v.dim + j) * v.dim + j] = _ONE
    return LinearMap(src, w, tuple(tuple(r) for r in rows))


def hom_adjunction_witness(t: VectorSpace, v: VectorSpace, w: VectorSpace) -> Tuple[LinearMap, LinearMap]:
    """Mutually inverse ``(curry, uncurry)`` between ``[T⊗V, W]`` and ``[T, [V, W]]``."""
    left = internal_hom(tensor_space(t, v), w)
    right = internal_hom(t, internal_hom(v, w))
    # A coefficient at (w_i ← t_a⊗v_b) moves to ((w_i ← v_b) ← t_a).
    perm = []
    for i in range(w.dim):
        for a in range(t.dim):
            for b in range(v.dim):
                perm.append(((i * v.dim + b) * t.dim) + a)
    curry = permutation_map(left, right, perm)
    uncurry = LinearMap(right, left, curry.transpose_matrix())
    return curry, uncurry


def maps_equal(f: LinearMap, g: LinearMap) -> bool:
    """Equality of matrices, ignoring basis labels."""
    return f.shape == g.shape and f.matrix == g.matrix


def block_diagonal(maps: Sequence[LinearMap], domain: DirectSum, codomain: DirectSum) -> LinearMap:
    return domain.diagonal(maps, codomain)


def map_from_columns(domain: VectorSpace, codomain: VectorSpace, columns: Iterable[Sequence[FieldElement]]) -> LinearMap:
    cols = [tuple(c) for c in columns]
    return LinearMap(domain, codomain, transpose(tuple(cols), codomain.dim) if cols else zero_matrix(codomain.dim, 0))
