"""Seeded law suites over generated instances.

Each suite checks one family of statements about external tensor products
and base change on every instance a :class:`~extlin.core.corpus.Corpus`
generates for it. A case fails when a canonical comparison map is not
invertible, an identity does not hold on the nose, or a generated object
is rejected by construction-time validation; the failing case is recorded
with a JSON description of its input.

Example usage:
    from extlin.core.laws import run_suite, list_suites

    list_suites()                               # ['adjunctions', ...]
    report = run_suite("distributivity", seed=1, cases=50)
    report.passed                               # True
"""

import logging
import random
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from pydantic import BaseModel

from . import fingrpd, groups
from .chaincx import (
    ChainComplex,
    ChainMap,
    SignRule,
    compose_cc,
    disk,
    generators,
    homology,
    identity_cc,
    is_cofibration_cc,
    is_quasi_iso,
    koszul_sign,
    pushout_product_cc,
    solve_lifting,
    sphere,
    tensor_cc,
    unsigned_sign,
    zero_cc_map,
)
from .colimits import borel_comparison, borel_diagram, colimit_tensor_comparison, loc_colimit, quotient_isomorphism, skeletal_decomposition
from .corpus import Corpus
from .dglocsys import (
    check_homotopical,
    classify,
    covered_generating_cofibrations,
    external_pushout_product,
    identity_dg,
    is_cof,
    is_iso_dg,
    is_weq,
)
from .errors import ExtlinError, InvariantError, LawViolation, SuiteNotFoundError
from .fingrpd import GroupoidFunctor
from .finvect import identity, map_from_columns, maps_equal, tensor_map, tensor_space, unit_space, zero_map
from .hooks import CorruptCompositionHook, HookRunner, TransposeTransportHook
from .locsys import (
    LocalSystem,
    LocMorphism,
    adjunct,
    ambidexterity_witness,
    beck_chevalley_witness,
    compose_loc,
    distributivity_comparison,
    external_tensor,
    external_tensor_mor,
    external_tensor_reconstruction,
    frobenius_witnesses,
    identity_loc,
    is_invertible_loc,
    product_iso_delooping,
    pull_external_comparison,
    pullback,
    pullback_mor,
    push_external_comparison,
    pushforward,
    pushforward_counit,
    pushforward_mor,
    pushforward_skeletal_comparison,
    regular_representation,
    restrict_to_components,
    sections,
    sections_mor,
    sections_skeletal_comparison,
    sections_unit,
    tensor_representation,
    unit_system,
)
from .quantum import MeasurementComonad, branch_set, measure_prepared
from .simplicial import const_simplicial, is_levelwise_quasi_iso, is_total_quasi_iso, totalize

logger = logging.getLogger(__name__)

MUTATIONS = ("transpose-transport", "corrupt-composition", "koszul-sign")


# =============================================================================
# Reports
# =============================================================================


class Failure(BaseModel):
    """One failing case: its index, a description of its input and what went wrong."""

    case: int
    input: Dict[str, Any]
    detail: str


class Report(BaseModel):
    suite: str
    seed: int
    cases: int
    failures: List[Failure]
    elapsed_ms: float

    @property
    def passed(self) -> bool:
        return not self.failures


# =============================================================================
# Registry
# =============================================================================


@dataclass
class SuiteContext:
    """Per-run configuration shared by every case of a suite."""

    seed: int = 0
    cases: int = 50
    hooks: HookRunner = field(default_factory=HookRunner)
    sign: SignRule = koszul_sign
    mutation: Optional[str] = None


Checker = Callable[[Corpus, SuiteContext], None]


@dataclass
class Suite:
    name: str
    description: str
    check: Checker


_SUITES: Dict[str, Suite] = {}


def register_suite(name: str, description: str = ""):
    """Decorator registering a checker under ``name``.

    The checker receives a fresh corpus per case and raises
    :class:`LawViolation` when the law fails.
    """

    def decorator(check: Checker) -> Checker:
        doc = description or (check.__doc__ or "").strip().splitlines()[0]
        _SUITES[name] = Suite(name, doc, check)
        return check

    return decorator


def list_suites() -> List[str]:
    return sorted(_SUITES)


def get_suite(name: str) -> Suite:
    try:
        return _SUITES[name]
    except KeyError:
        raise SuiteNotFoundError(name, list_suites()) from None


def make_context(seed: int, cases: int, mutation: Optional[str] = None) -> SuiteContext:
    """A context with the hooks or sign rule a mutation calls for.

    Raises:
        ExtlinError: For an unknown mutation name.
    """
    ctx = SuiteContext(seed=seed, cases=cases, mutation=mutation)
    if mutation is None:
        return ctx
    if mutation == "transpose-transport":
        ctx.hooks.add_post_hook(TransposeTransportHook())
    elif mutation == "corrupt-composition":
        ctx.hooks.add_post_hook(CorruptCompositionHook())
    elif mutation == "koszul-sign":
        ctx.sign = unsigned_sign
    else:
        raise ExtlinError(f"Unknown mutation {mutation!r}", payload={"mutations": list(MUTATIONS)})
    return ctx


def run_suite(name: str, seed: int = 0, cases: int = 50, mutation: Optional[str] = None) -> Report:
    """Run ``cases`` seeded cases of suite ``name``.

    Case ``k`` draws from ``random.Random("name:seed:k")``, so a report
    depends only on its arguments apart from ``elapsed_ms``.

    Raises:
        SuiteNotFoundError: If ``name`` is not registered.
    """
    suite = get_suite(name)
    ctx = make_context(seed, cases, mutation)
    return _run(suite, ctx)


def run_all(seed: int = 0, cases: int = 50, mutation: Optional[str] = None) -> List[Report]:
    return [_run(get_suite(name), make_context(seed, cases, mutation)) for name in list_suites()]


def _run(suite: Suite, ctx: SuiteContext) -> Report:
    logger.info("running suite %s (seed=%d, cases=%d)", suite.name, ctx.seed, ctx.cases)
    start = time.perf_counter()
    failures: List[Failure] = []
    for case in range(ctx.cases):
        corpus = Corpus(random.Random(f"{suite.name}:{ctx.seed}:{case}"), ctx.hooks)
        try:
            suite.check(corpus, ctx)
        except LawViolation as exc:
            failures.append(Failure(case=case, input=_plain(exc.payload or {}), detail=exc.message))
        except InvariantError as exc:
            failures.append(
                Failure(
                    case=case,
                    input={"location": [repr(p) for p in exc.location], "payload": _plain(exc.payload)},
                    detail=f"{type(exc).__name__}: {exc.message}",
                )
            )
        except ExtlinError as exc:
            failures.append(
                Failure(case=case, input={"payload": _plain(exc.payload)}, detail=f"{type(exc).__name__}: {exc.message}")
            )
    elapsed = (time.perf_counter() - start) * 1000
    report = Report(suite=suite.name, seed=ctx.seed, cases=ctx.cases, failures=failures, elapsed_ms=round(elapsed, 3))
    logger.info("suite %s: %d/%d failed", suite.name, len(failures), ctx.cases)
    return report


# =============================================================================
# Helpers
# =============================================================================


def _plain(value: Any) -> Any:
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_plain(v) for v in value]
    return repr(value)


def require(condition: bool, detail: str, **inputs: Any):
    if not condition:
        raise LawViolation(detail, payload=inputs)


def describe_system(v: LocalSystem) -> Dict[str, Any]:
    return {
        "name": v.name,
        "base": v.base.name,
        "objects": [repr(x) for x in v.base.objects],
        "morphisms": len(v.base.morphisms),
        "dims": [v.fiber(x).dim for x in v.base.objects],
    }


def describe_functor(f: GroupoidFunctor) -> Dict[str, Any]:
    return {
        "name": f.name,
        "source": f.source.name,
        "target": f.target.name,
        "objects": {repr(x): repr(f.obj(x)) for x in f.source.objects},
    }


def describe_complex(c: ChainComplex) -> Dict[str, Any]:
    return {str(n): d for n, d in c.dims().items()}


def is_identity(phi: LocMorphism) -> bool:
    return phi.source == phi.target and all(
        phi.component(x) == identity(phi.source.fiber(x)) for x in phi.source.base.objects
    ) and all(phi.functor.mor(m) == m for m in phi.source.base.morphisms)


def _maps_match(h: ChainMap, i: ChainMap, p: ChainMap, top: ChainMap, bottom: ChainMap) -> bool:
    return compose_cc(h, i) == top and compose_cc(p, h) == bottom


# =============================================================================
# Suites
# =============================================================================


@register_suite("characterization_sets")
def check_characterization_sets(corpus: Corpus, ctx: SuiteContext):
    """Over finite sets, ``⊠`` is the coproduct of fiberwise tensors."""
    v = corpus.bundle(max_points=4, max_dim=3)
    w = corpus.bundle(points=["a", "b", "c"][: corpus.rng.randint(1, 3)], max_dim=3)
    info = {"v": describe_system(v), "w": describe_system(w)}
    recon = external_tensor_reconstruction(v, w)
    require(is_invertible_loc(recon), "reconstruction map is not invertible", **info)
    require(
        all(maps_equal(c, identity(c.domain)) for c in recon.components.values()),
        "reconstruction differs from the external tensor after relabeling",
        **info,
    )
    p, q = v.base.objects[0], w.base.objects[0]
    single_v = corpus.bundle(points=[p], max_dim=3)
    single_w = corpus.bundle(points=[q], max_dim=3)
    single = external_tensor(single_v, single_w)
    require(
        single.fiber((p, q)) == tensor_space(single_v.fiber(p), single_w.fiber(q)),
        "singleton clause: fiber over a point pair is not the tensor product",
        **info,
    )
    extra = corpus.bundle(points=["z"], max_dim=3)
    for side in ("right", "left"):
        require(
            is_invertible_loc(distributivity_comparison(v, [w, extra], side=side)),
            f"coproduct clause fails on the {side}",
            **info,
        )


@register_suite("distributivity")
def check_distributivity(corpus: Corpus, ctx: SuiteContext):
    """``V ⊠ (⊔ W_i) ≅ ⊔ (V ⊠ W_i)`` on both sides, by the canonical map."""
    v = corpus.local_system(corpus.groupoid(max_objects=2))
    ws = [corpus.local_system(corpus.groupoid(max_objects=2)) for _ in range(corpus.rng.randint(0, 2) + 1)]
    info = {"v": describe_system(v), "ws": [describe_system(w) for w in ws]}
    for side in ("right", "left"):
        comparison = distributivity_comparison(v, ws, side=side)
        require(is_invertible_loc(comparison), f"{side} distributivity comparison is not invertible", **info)


@register_suite("hq_coproducts")
def check_hq_coproducts(corpus: Corpus, ctx: SuiteContext):
    """``⊠`` on homotopy quotients, coproduct decompositions and skeletal pieces."""
    g, h = corpus.group(max_order=4), corpus.group(max_order=3)
    rho, sigma = corpus.representation(g), corpus.representation(h)
    info = {"rho": describe_system(rho), "sigma": describe_system(sigma)}
    lhs = external_tensor(rho, sigma)
    rhs = tensor_representation(rho, sigma, g, h)
    point = (fingrpd.POINT, fingrpd.POINT)
    comparison = LocMorphism(lhs, rhs, product_iso_delooping(g, h), {point: identity(lhs.fiber(point))})
    require(is_invertible_loc(comparison), "V//G ⊠ W//H is not (V ⊗ W)//(G × H)", **info)

    v = corpus.local_system(corpus.groupoid(max_objects=3))
    w = corpus.local_system(corpus.groupoid(max_objects=2))
    info = {"v": describe_system(v), "w": describe_system(w)}
    components = restrict_to_components(v)
    require(is_invertible_loc(components.comparison), "component decomposition is not invertible", **info)
    dec_v, dec_w = skeletal_decomposition(v), skeletal_decomposition(w)
    require(is_invertible_loc(dec_v.iso), "skeletal decomposition is not invertible", **info)
    require(
        is_invertible_loc(external_tensor_mor(dec_v.iso, dec_w.iso)),
        "external tensor of skeletal decompositions is not invertible",
        **info,
    )


@register_suite("adjunctions")
def check_adjunctions(corpus: Corpus, ctx: SuiteContext):
    """Triangle identities for ``f_! ⊣ f* ⊣ f_*`` and the skeletal cross-checks."""
    f = corpus.functor(max_objects=3)
    v = corpus.local_system(f.source)
    w = corpus.local_system(f.target)
    info = {"f": describe_functor(f), "v": describe_system(v), "w": describe_system(w)}

    pushed = pushforward(f, v)
    counit = pushforward_counit(f, pushed.system)
    require(is_identity(compose_loc(counit, pushforward_mor(f, pushed.unit))), "ε f_! ∘ f_! η is not the identity", **info)
    unit_w = pushforward(f, pullback(f, w)).unit
    require(
        is_identity(compose_loc(pullback_mor(f, pushforward_counit(f, w)), unit_w)),
        "f* ε ∘ η f* is not the identity",
        **info,
    )

    sec = sections(f, v)
    require(
        is_identity(compose_loc(sections_mor(f, sec.counit), sections_unit(f, sec.system))),
        "f_* ε ∘ η f_* is not the identity",
        **info,
    )
    pulled = pullback(f, w)
    require(
        is_identity(compose_loc(sections(f, pulled).counit, pullback_mor(f, sections_unit(f, w)))),
        "ε f* ∘ f* η is not the identity",
        **info,
    )
    require(is_invertible_loc(pushforward_skeletal_comparison(f, v)), "skeletal f_! disagrees with the coend", **info)
    require(is_invertible_loc(sections_skeletal_comparison(f, v)), "skeletal f_* disagrees with the end", **info)


@register_suite("motivic_yoga")
def check_motivic_yoga(corpus: Corpus, ctx: SuiteContext):
    """Frobenius reciprocity, the projection formula and Beck–Chevalley squares."""
    f = corpus.functor(max_objects=3)
    v, w = corpus.local_system(f.target), corpus.local_system(f.target)
    r = corpus.local_system(f.source)
    info = {"f": describe_functor(f), "v": describe_system(v), "w": describe_system(w), "r": describe_system(r)}
    witnesses = frobenius_witnesses(f, v, w, r)
    require(is_invertible_loc(witnesses.monoidal), "pullback is not strong monoidal", **info)
    require(is_invertible_loc(witnesses.closed), "pullback is not strong closed", **info)
    require(is_invertible_loc(witnesses.projection), "projection formula comparison is not invertible", **info)

    other = corpus.groupoid(max_objects=2)
    product_square = beck_chevalley_witness("product", f, r, other=other)
    require(product_square.is_invertible(), "Beck–Chevalley fails for a product square", other=other.name, **info)

    block = corpus.rng.choice(fingrpd.connected_components(f.target))
    embedding = beck_chevalley_witness("embedding", f, r, sub_objects=block)
    require(
        embedding.is_invertible(),
        "Beck–Chevalley fails for a full subgroupoid square",
        sub_objects=[repr(x) for x in block],
        **info,
    )


@register_suite("pullpush_external")
def check_pullpush_external(corpus: Corpus, ctx: SuiteContext):
    """Pullback and pushforward commute with ``⊠``; the push map is the mate of the pull map."""
    f, g = corpus.functor(max_objects=2), corpus.functor(max_objects=2)
    v, w = corpus.local_system(f.source), corpus.local_system(g.source)
    info = {"f": describe_functor(f), "g": describe_functor(g), "v": describe_system(v), "w": describe_system(w)}
    push = push_external_comparison(f, g, v, w)
    require(is_invertible_loc(push), "(f × g)_!(V ⊠ W) -> f_!V ⊠ g_!W is not invertible", **info)

    v2, w2 = corpus.local_system(f.target), corpus.local_system(g.target)
    pull = pull_external_comparison(f, g, v2, w2)
    require(is_invertible_loc(pull), "f*V ⊠ g*W -> (f × g)*(V ⊠ W) is not invertible", **info)

    pv, pw = pushforward(f, v), pushforward(g, w)
    source = external_tensor(v, w)
    mate = LocMorphism(
        source,
        external_tensor(pv.system, pw.system),
        fingrpd.product_functor(f, g),
        {(x, y): tensor_map(pv.unit.component(x), pw.unit.component(y)) for (x, y) in source.base.objects},
    )
    require(adjunct(mate).components == push.components, "push comparison is not the adjunct of η ⊠ η", **info)


@register_suite("colimit_preservation")
def check_colimit_preservation(corpus: Corpus, ctx: SuiteContext):
    """``− ⊠ W`` preserves homotopy quasi-coproducts for ``W`` over a set."""
    group = corpus.group(max_order=6)
    rho = corpus.representation(group)
    w = corpus.bundle(max_points=3, max_dim=2)
    info = {"rho": describe_system(rho), "w": describe_system(w)}
    diagram = borel_diagram(group, rho)
    colimit = loc_colimit(diagram)
    require(is_invertible_loc(borel_comparison(colimit, group, rho)), "colimit of EG · V is not V", **info)
    require(
        is_invertible_loc(colimit_tensor_comparison(diagram, w)),
        "colim(D ⊠ W) -> colim(D) ⊠ W is not invertible",
        **info,
    )

    eg = fingrpd.e_groupoid(group)
    pushed = pushforward(eg.quotient, unit_system(eg.groupoid))
    regular = regular_representation(group)
    coend = pushed.coends[fingrpd.POINT]
    space = regular.fiber(fingrpd.POINT)
    component = map_from_columns(
        space,
        pushed.system.fiber(fingrpd.POINT),
        [coend.inject(g, group.unit).column(0) for g in group.elements],
    )
    comparison = LocMorphism(regular, pushed.system, fingrpd.identity_functor(regular.base), {fingrpd.POINT: component})
    require(is_invertible_loc(comparison), "q_! of the unit on EG is not the regular representation", group=group.name)


@register_suite("quotient_iso")
def check_quotient_iso(corpus: Corpus, ctx: SuiteContext):
    """``G ×_H V ≅ (G/H) · V`` through coset representatives."""
    group = corpus.group(max_order=6)
    members = corpus.subgroup_members(group)
    sub = groups.subgroup(group, members)
    rho = corpus.representation(sub)
    iso = quotient_isomorphism(group, members, rho)
    require(
        iso.round_trips(),
        "section-built maps do not compose to identities",
        group=group.name,
        subgroup=[repr(h) for h in members],
        rho=describe_system(rho),
    )


@register_suite("chain_model")
def check_chain_model(corpus: Corpus, ctx: SuiteContext):
    """Homology oracles, Künneth, the pushout-product axiom, lifting and totalization."""
    a, b = corpus.chain_complex(), corpus.chain_complex()
    info = {"a": describe_complex(a.complex), "b": describe_complex(b.complex)}
    require(homology(a.complex).dims() == a.homology, "homology disagrees with the generated oracle", **info)
    expected: Dict[int, int] = {}
    for p, x in a.homology.items():
        for q, y in b.homology.items():
            expected[p + q] = expected.get(p + q, 0) + x * y
    require(homology(tensor_cc(a.complex, b.complex, ctx.sign)).dims() == expected, "Künneth formula fails", **info)

    n = corpus.rng.randint(-2, 2)
    require(homology(sphere(n - 1)).dims() == {n - 1: 1}, "sphere homology is wrong", n=n)
    require(homology(disk(n)).is_zero(), "disk is not acyclic", n=n)

    m, k = corpus.rng.randint(-2, 2), corpus.rng.randint(-2, 2)
    gm, gk = generators(m), generators(k)
    left_name, left = corpus.rng.choice([(f"i_{m}", gm.i), (f"j_{m}", gm.j)])
    right_name, right = corpus.rng.choice([(f"i_{k}", gk.i), (f"j_{k}", gk.j)])
    product = pushout_product_cc(left, right, ctx.sign).map
    pair = {"left": left_name, "right": right_name}
    require(is_cofibration_cc(product), "pushout-product of cofibrations is not a cofibration", **pair)
    if left_name.startswith("j") or right_name.startswith("j"):
        require(is_quasi_iso(product), "pushout-product with an acyclic cofibration is not acyclic", **pair)

    case = corpus.lifting_case(corpus.rng.randint(0, 2), acyclic=corpus.rng.random() < 0.5)
    lift = solve_lifting(case.i, case.p, case.top, case.bottom)
    square = {"i": repr(case.i), "p": repr(case.p)}
    require(lift is not None, "no lift for a generating cofibration against a fibration", **square)
    require(_maps_match(lift, case.i, case.p, case.top, case.bottom), "lift does not fill the square", **square)

    gen = generators(1)
    s0 = gen.sphere
    negative = solve_lifting(gen.i, zero_cc_map(s0, ChainComplex.zero()), identity_cc(s0), zero_cc_map(gen.disk, ChainComplex.zero()))
    require(negative is None, "i_1 lifted against the non-acyclic fibration S^0 -> 0")

    total = homology(totalize(const_simplicial(sphere(0), 2))).dims()
    require(total == {0: 1}, "totalization of the constant S^0 is not K in degree 0", homology=total)
    f, levelwise = corpus.simplicial_map()
    require(levelwise == is_levelwise_quasi_iso(f), "levelwise quasi-isomorphism detection is wrong")
    direct = homology(totalize(f.source)).dims() == homology(totalize(f.target)).dims()
    require(
        is_total_quasi_iso(f) == direct,
        "total quasi-isomorphism disagrees with homology of the totalizations",
        levelwise=levelwise,
    )
    if levelwise:
        require(is_total_quasi_iso(f), "levelwise quasi-isomorphism is not a total one")


@register_suite("integral_classes")
def check_integral_classes(corpus: Corpus, ctx: SuiteContext):
    """Classification of the generators and ``⊠`` of weak equivalences."""
    system = corpus.dg_system()
    classes = classify(identity_dg(system))
    require(classes.weq and classes.fib and classes.cof, "identity is not in all three classes", base=system.base.name)

    n = corpus.rng.randint(0, 2)
    for gen in covered_generating_cofibrations([n]):
        classes = classify(gen.morphism)
        require(classes.cof, f"generator {gen.name} is not a cofibration")
        require(classes.weq == gen.acyclic, f"generator {gen.name} has the wrong acyclicity")

    phi, gamma = corpus.dg_weq(), corpus.dg_weq()
    info = {"phi": phi.functor.name or repr(phi), "gamma": gamma.functor.name or repr(gamma)}
    require(is_weq(phi) and is_weq(gamma), "generated weak equivalence is not one", **info)
    require(check_homotopical(phi, gamma, ctx.sign), "⊠ of weak equivalences is not a weak equivalence", **info)

    pool = [
        g for g in covered_generating_cofibrations([0, 1])
        if g.morphism.source.base.is_discrete() and g.morphism.target.base.is_discrete()
    ]
    first, second = corpus.rng.choice(pool), corpus.rng.choice(pool)
    product = external_pushout_product(first.morphism, second.morphism, ctx.sign).morphism
    pair = {"left": first.name, "right": second.name}
    require(is_cof(product), "external pushout-product of cofibrations is not a cofibration", **pair)
    if first.acyclic or second.acyclic:
        require(is_weq(product), "external pushout-product with an acyclic cofibration is not acyclic", **pair)

    ident = identity_dg(corpus.dg_system())
    with_identity = external_pushout_product(phi, ident, ctx.sign).morphism
    require(is_iso_dg(with_identity), "pushout-product with an identity is not invertible", phi=info["phi"])


@register_suite("quantum_laws")
def check_quantum_laws(corpus: Corpus, ctx: SuiteContext):
    """Comonad laws of measurement, ambidexterity and measure-after-prepare."""
    points = list(range(corpus.rng.randint(1, 4)))
    bundle = corpus.bundle(points=points, max_dim=2)
    branches = branch_set(points)
    info = {"bundle": describe_system(bundle)}
    laws = MeasurementComonad(branches).check_laws(bundle)
    require(laws.left_counit, "left counit law fails", **info)
    require(laws.right_counit, "right counit law fails", **info)
    require(laws.coassociative, "coassociativity fails", **info)

    witness = ambidexterity_witness(bundle)
    require(
        compose_loc(witness.inverse, witness.norm) == identity_loc(witness.norm.source),
        "ambidexterity witness is not invertible",
        **info,
    )

    line = unit_system(branches.projection.target)
    b = corpus.rng.choice(points)
    for b2, m in measure_prepared(branches, b, line).items():
        expected = identity(unit_space()) if b2 == b else zero_map(unit_space(), unit_space())
        require(m == expected, "measuring a prepared state reads the wrong branch", prepared=b, measured=b2)
