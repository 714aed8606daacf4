"""Finite groups given by multiplication tables.

Example usage:
    from extlin.core.groups import cyclic, symmetric, direct_product

    g = direct_product(cyclic(2), symmetric(3))
    g.order                      # 12
    g.mul((1, (1, 0, 2)), (1, (0, 2, 1)))
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, List, Sequence, Tuple

from .errors import GroupLawError

logger = logging.getLogger(__name__)

Element = Hashable


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group; ``table[(a, b)]`` is the product ``a·b``.

    Construction checks closure, associativity, the unit and inverses
    exhaustively and raises GroupLawError naming the failing elements.
    """

    name: str
    elements: Tuple[Element, ...]
    table: Dict[Tuple[Element, Element], Element] = field(compare=False, repr=False)
    unit: Element = field(init=False, compare=False, repr=False)
    inverses: Dict[Element, Element] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        elements = tuple(self.elements)
        object.__setattr__(self, "elements", elements)
        if not elements:
            raise GroupLawError("A group needs at least one element", location=("elements",))
        members = set(elements)
        if len(members) != len(elements):
            raise GroupLawError("Group elements must be distinct", location=("elements",))
        for a, b in itertools.product(elements, repeat=2):
            if self.table.get((a, b)) not in members:
                raise GroupLawError(
                    f"Product {a!r}·{b!r} is missing or not an element",
                    location=("table", a, b),
                    payload={"pair": [repr(a), repr(b)]},
                )
        units = [e for e in elements if all(self.table[(e, a)] == a == self.table[(a, e)] for a in elements)]
        if not units:
            raise GroupLawError("No two-sided unit", location=("table",))
        unit = units[0]
        for a, b, c in itertools.product(elements, repeat=3):
            if self.table[(self.table[(a, b)], c)] != self.table[(a, self.table[(b, c)])]:
                raise GroupLawError(
                    f"Associativity fails on ({a!r}, {b!r}, {c!r})",
                    location=("table", a, b, c),
                    payload={"triple": [repr(a), repr(b), repr(c)]},
                )
        inverses = {}
        for a in elements:
            inv = next((b for b in elements if self.table[(a, b)] == unit), None)
            if inv is None:
                raise GroupLawError(f"Element {a!r} has no inverse", location=("table", a))
            inverses[a] = inv
        object.__setattr__(self, "unit", unit)
        object.__setattr__(self, "inverses", inverses)

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a: Element, b: Element) -> Element:
        return self.table[(a, b)]

    def inv(self, a: Element) -> Element:
        return self.inverses[a]

    def is_abelian(self) -> bool:
        return all(self.mul(a, b) == self.mul(b, a) for a, b in itertools.combinations(self.elements, 2))

    def __hash__(self) -> int:
        return hash((self.name, self.elements))


def from_table(elements: Sequence[Element], table: Sequence[Sequence[Element]], name: str = "G") -> FiniteGroup:
    """Build a group from a Cayley table with ``table[i][j] = elements[i]·elements[j]``."""
    products = {
        (a, b): table[i][j]
        for i, a in enumerate(elements)
        for j, b in enumerate(elements)
    }
    return FiniteGroup(name, tuple(elements), products)


def cyclic(n: int) -> FiniteGroup:
    elements = tuple(range(n))
    return FiniteGroup(f"Z{n}", elements, {(a, b): (a + b) % n for a in elements for b in elements})


def klein_four() -> FiniteGroup:
    return direct_product(cyclic(2), cyclic(2), name="V4")


def _compose_perm(p: Tuple[int, ...], q: Tuple[int, ...]) -> Tuple[int, ...]:
    # (p·q)(i) = p(q(i))
    return tuple(p[q[i]] for i in range(len(q)))


def symmetric(n: int) -> FiniteGroup:
    elements = tuple(itertools.permutations(range(n)))
    return FiniteGroup(
        f"S{n}",
        elements,
        {(p, q): _compose_perm(p, q) for p in elements for q in elements},
    )


def direct_product(g: FiniteGroup, h: FiniteGroup, name: str = "") -> FiniteGroup:
    elements = tuple(itertools.product(g.elements, h.elements))
    table = {
        (a, b): (g.mul(a[0], b[0]), h.mul(a[1], b[1]))
        for a in elements
        for b in elements
    }
    return FiniteGroup(name or f"{g.name}x{h.name}", elements, table)


def trivial_group() -> FiniteGroup:
    return cyclic(1)


# =============================================================================
# Subgroups and cosets
# =============================================================================


def generated_subgroup(group: FiniteGroup, generators: Sequence[Element]) -> Tuple[Element, ...]:
    """Elements of the subgroup generated by ``generators``, in group order."""
    found = {group.unit}
    frontier = [group.unit]
    while frontier:
        a = frontier.pop()
        for s in generators:
            b = group.mul(a, s)
            if b not in found:
                found.add(b)
                frontier.append(b)
    return tuple(e for e in group.elements if e in found)


def cyclic_subgroups(group: FiniteGroup) -> List[Tuple[Element, ...]]:
    seen: List[Tuple[Element, ...]] = []
    for a in group.elements:
        sub = generated_subgroup(group, [a])
        if sub not in seen:
            seen.append(sub)
    return seen


def subgroups(group: FiniteGroup) -> List[Tuple[Element, ...]]:
    """All subgroups, found as joins of cyclic subgroups (fine for small orders)."""
    result = cyclic_subgroups(group)
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(result), 2):
            joined = generated_subgroup(group, list(a) + list(b))
            if joined not in result:
                result.append(joined)
                changed = True
    return sorted(result, key=len)


def subgroup(group: FiniteGroup, members: Sequence[Element], name: str = "") -> FiniteGroup:
    members = tuple(e for e in group.elements if e in set(members))
    return FiniteGroup(
        name or f"{group.name}<{len(members)}>",
        members,
        {(a, b): group.mul(a, b) for a in members for b in members},
    )


def left_cosets(group: FiniteGroup, members: Sequence[Element]) -> List[Tuple[Element, ...]]:
    """Left cosets ``gH`` listed by first appearance; each coset in group order."""
    members = set(members)
    cosets: List[Tuple[Element, ...]] = []
    covered = set()
    for g in group.elements:
        if g in covered:
            continue
        coset = tuple(x for x in group.elements if group.mul(group.inv(g), x) in members)
        covered.update(coset)
        cosets.append(coset)
    return cosets


def sign_character(group: FiniteGroup) -> Dict[Element, int]:
    """The sign of each permutation for symmetric groups; trivial otherwise.

    For cyclic groups of even order the character sends generators to ``-1``.
    """
    if all(_is_permutation(e) for e in group.elements):
        return {p: _perm_sign(p) for p in group.elements}
    if all(isinstance(e, int) for e in group.elements) and group.order % 2 == 0:
        return {e: (-1) ** e for e in group.elements}
    return {e: 1 for e in group.elements}


def _perm_sign(p: Tuple[int, ...]) -> int:
    inversions = sum(1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j])
    return -1 if inversions % 2 else 1


def describe(group: FiniteGroup) -> Dict[str, Any]:
    return {"name": group.name, "order": group.order, "abelian": group.is_abelian()}


def _is_permutation(e: Element) -> bool:
    return isinstance(e, tuple) and sorted(e) == list(range(len(e))) and all(isinstance(i, int) for i in e)
