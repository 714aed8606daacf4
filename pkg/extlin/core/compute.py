"""Document-in, document-out operations behind ``extlin compute``.

Each operation takes a parsed JSON document and returns a JSON-able
result, so the command line and library callers get identical output.

Example usage:
    from extlin.core.compute import compute

    compute("homology", {"components": {"2": {"dim": 1}}})     # {"2": 1}
"""

import logging
from typing import Any, Callable, Dict, Mapping

from .chaincx import ChainMap, homology, koszul_sign
from .dglocsys import DgLocMorphism, classify, concentrated, external_tensor_dg
from .errors import ExtlinError
from .locsys import LocMorphism, external_hom, external_tensor, pushforward, sections
from .serialization import (
    FunctorModel,
    LocalSystemModel,
    detect_kind,
    dump_chain_complex,
    dump_dg_local_system,
    dump_local_system,
    load_chain_complex,
    load_dg_local_system,
    load_dg_loc_morphism,
    load_local_system,
    load_loc_morphism,
    load_simplicial,
)
from .simplicial import totalize

logger = logging.getLogger(__name__)

Operation = Callable[[Mapping[str, Any]], Any]


def _part(data: Mapping[str, Any], key: str) -> Any:
    if not isinstance(data, Mapping) or key not in data:
        raise ExtlinError(f"Input needs a {key!r} entry", payload={"missing": key})
    return data[key]


def _exttensor(data: Mapping[str, Any]) -> Dict[str, Any]:
    left, right = _part(data, "left"), _part(data, "right")
    kinds = {detect_kind(left), detect_kind(right)}
    if kinds == {"dg_local_system"}:
        return dump_dg_local_system(
            external_tensor_dg(load_dg_local_system(left), load_dg_local_system(right), koszul_sign)
        )
    if kinds == {"local_system"}:
        return dump_local_system(external_tensor(load_local_system(left), load_local_system(right)))
    raise ExtlinError("exttensor needs two local systems of the same kind", payload={"kinds": sorted(kinds)})


def _base_change(data: Mapping[str, Any]):
    system = LocalSystemModel.model_validate(_part(data, "system")).to_system()
    f = FunctorModel.model_validate(_part(data, "functor")).to_functor(source=system.base)
    return f, system


def _pushforward(data: Mapping[str, Any]) -> Dict[str, Any]:
    f, system = _base_change(data)
    return dump_local_system(pushforward(f, system).system)


def _sections(data: Mapping[str, Any]) -> Dict[str, Any]:
    f, system = _base_change(data)
    return dump_local_system(sections(f, system).system)


def _homology(data: Mapping[str, Any]) -> Dict[str, int]:
    return {str(n): d for n, d in homology(load_chain_complex(data)).dims().items()}


def _totalize(data: Mapping[str, Any]) -> Dict[str, Any]:
    return dump_chain_complex(totalize(load_simplicial(data)))


def as_dg_morphism(phi: LocMorphism) -> DgLocMorphism:
    """A morphism of local systems as a morphism of complexes in degree 0."""
    source, target = concentrated(phi.source, 0), concentrated(phi.target, 0)
    return DgLocMorphism(
        source,
        target,
        phi.functor,
        {
            x: ChainMap(source.fiber(x), target.fiber(phi.functor.obj(x)), {0: phi.component(x)})
            for x in phi.source.base.objects
        },
    )


def _classify(data: Mapping[str, Any]) -> Dict[str, bool]:
    kind = detect_kind(data)
    if kind == "loc_morphism":
        phi = as_dg_morphism(load_loc_morphism(data))
    elif kind == "dg_loc_morphism":
        phi = load_dg_loc_morphism(data)
    else:
        raise ExtlinError(f"classify needs a morphism, got a {kind}", payload={"kind": kind})
    return classify(phi).model_dump()


def _externalhom(data: Mapping[str, Any]) -> Dict[str, Any]:
    r, w = load_local_system(_part(data, "left")), load_local_system(_part(data, "right"))
    system, _ = external_hom(r, w)
    return dump_local_system(system)


COMPUTATIONS: Dict[str, Operation] = {
    "exttensor": _exttensor,
    "pushforward": _pushforward,
    "sections": _sections,
    "homology": _homology,
    "totalize": _totalize,
    "classify": _classify,
    "externalhom": _externalhom,
}


def compute(op: str, data: Mapping[str, Any]) -> Any:
    """Run operation ``op`` on a parsed document.

    Raises:
        ExtlinError: For an unknown operation or a document of the wrong kind.
        pydantic.ValidationError: For a document with the wrong shape.
    """
    try:
        operation = COMPUTATIONS[op]
    except KeyError:
        raise ExtlinError(f"Unknown operation {op!r}", payload={"operations": sorted(COMPUTATIONS)}) from None
    logger.debug("computing %s", op)
    return operation(data)
