"""JSON forms of groupoids, local systems and chain complexes.

Every document is validated twice: pydantic checks its shape (and parses
every matrix entry with the scalar grammar, so a bad entry is reported
with its full path), then the domain constructors check the algebraic
laws. Ids of computed objects such as products are tuples; they are
written as canonical strings ``"(a,b)"`` and every id in a document is
addressed through that text.

Example usage:
    from extlin.core.serialization import load_local_system, dump_local_system

    system = load_local_system({
        "base": {"discrete": ["0", "1"]},
        "fibers": {"0": {"dim": 1}, "1": {"dim": 2}},
        "transport": {},
    })
    dump_local_system(system)["transport"]["(1,1)"]   # [["1", "0"], ["0", "1"]]
"""

import logging
import re
from fractions import Fraction
from typing import Annotated, Any, Dict, Hashable, List, Mapping, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, model_validator

from . import fingrpd, groups
from .chaincx import ChainComplex, ChainMap
from .dglocsys import DgLocalSystem, DgLocMorphism
from .errors import ExtlinError, InvariantError, VariantMismatchError
from .fingrpd import FinGroupoid, GroupoidFunctor
from .finvect import LinearMap, Matrix, VectorSpace, identity
from .locsys import LocalSystem, LocMorphism
from .scalars import FieldElement, FieldRegistry, ScalarField, format_scalar, parse
from .simplicial import TruncatedSimplicialComplex

logger = logging.getLogger(__name__)

FIELDS = FieldRegistry()


def _to_scalar(value: Any) -> FieldElement:
    if isinstance(value, bool):
        raise ValueError("Booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse(value)
    raise ValueError(f"Expected scalar text, got {type(value).__name__}")


Scalar = Annotated[Any, BeforeValidator(_to_scalar)]
MatrixRows = List[List[Scalar]]


_ID_SPECIAL = re.compile(r"([\\(),])")


def id_text(value: Hashable) -> str:
    """Canonical text of an object or morphism id; tuples become ``"(a,b)"``.

    Inside a tuple the characters ``\\ ( ) ,`` of a plain part are escaped
    with a backslash, so ``("a,b", "c")`` and ``("a", "b,c")`` get different
    texts. A plain id is written as is, which keeps the text of an id read
    from a document stable when it is dumped again.
    """
    if isinstance(value, tuple):
        return "(" + ",".join(_part_text(v) for v in value) + ")"
    return str(value)


def _part_text(value: Hashable) -> str:
    if isinstance(value, tuple):
        return id_text(value)
    return _ID_SPECIAL.sub(r"\\\1", str(value))


def dump_matrix(f: LinearMap) -> List[List[str]]:
    return [[format_scalar(x) for x in row] for row in f.matrix]


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


# =============================================================================
# Models
# =============================================================================


class SpaceModel(_Model):
    dim: int = Field(ge=0)
    labels: Optional[List[str]] = None

    @model_validator(mode="after")
    def _labels_match(self):
        if self.labels is not None and len(self.labels) != self.dim:
            raise ValueError(f"{len(self.labels)} labels given for dimension {self.dim}")
        return self

    def to_space(self, prefix: str) -> VectorSpace:
        if self.labels is not None:
            return VectorSpace(tuple(self.labels))
        return VectorSpace.of_dim(self.dim, prefix=prefix)


class MorphismModel(_Model):
    id: str
    src: str
    dst: str


class GroupModel(_Model):
    elements: List[str]
    table: List[List[str]]
    name: str = "G"

    def to_group(self) -> groups.FiniteGroup:
        return groups.from_table(self.elements, self.table, name=self.name)


class ActionModel(_Model):
    """A left action: ``act[g][x]`` is ``g·x``."""

    group: GroupModel
    points: List[str]
    act: Dict[str, Dict[str, str]]


class GroupoidModel(_Model):
    """The explicit form or exactly one of the sugar forms."""

    name: str = ""
    objects: Optional[List[str]] = None
    morphisms: Optional[List[MorphismModel]] = None
    identities: Optional[Dict[str, str]] = None
    compose: Optional[List[List[str]]] = None
    group: Optional[GroupModel] = None
    codiscrete: Optional[List[str]] = None
    discrete: Optional[List[str]] = None
    action: Optional[ActionModel] = None

    @model_validator(mode="after")
    def _one_form(self):
        sugar = [k for k in ("group", "codiscrete", "discrete", "action") if getattr(self, k) is not None]
        explicit = [k for k in ("objects", "morphisms", "identities", "compose") if getattr(self, k) is not None]
        if len(sugar) > 1 or (sugar and explicit):
            raise ValueError(f"Give exactly one groupoid form, got {sugar + explicit}")
        if not sugar and len(explicit) != 4:
            raise ValueError("The explicit form needs objects, morphisms, identities and compose")
        for triple in self.compose or []:
            if len(triple) != 3:
                raise ValueError(f"Composition entries are [g, f, g∘f], got {triple}")
        return self

    def to_groupoid(self) -> FinGroupoid:
        if self.group is not None:
            g = self.group.to_group()
            return fingrpd.delooping(g)
        if self.codiscrete is not None:
            return fingrpd.codiscrete(self.codiscrete)
        if self.discrete is not None:
            return fingrpd.discrete(self.discrete)
        if self.action is not None:
            a = self.action
            return fingrpd.action_groupoid(
                a.group.to_group(), a.points, lambda g, x: a.act.get(g, {}).get(x), name=self.name
            ).groupoid
        return FinGroupoid(
            self.objects,
            [(m.id, m.src, m.dst) for m in self.morphisms],
            self.identities,
            {(g, f): gf for g, f, gf in self.compose},
            name=self.name,
        )


class FunctorModel(_Model):
    """A functor; ``source``/``target`` may be omitted inside a morphism document."""

    name: str = ""
    source: Optional[GroupoidModel] = None
    target: Optional[GroupoidModel] = None
    objects: Dict[str, str]
    morphisms: Dict[str, str]

    def to_functor(self, source: Optional[FinGroupoid] = None, target: Optional[FinGroupoid] = None) -> GroupoidFunctor:
        source = source if source is not None else _required(self.source, "source").to_groupoid()
        target = target if target is not None else _required(self.target, "target").to_groupoid()
        src_objects, src_morphisms = _ids(source.objects), _ids(source.morphisms)
        tgt_objects, tgt_morphisms = _ids(target.objects), _ids(target.morphisms)
        return GroupoidFunctor(
            source,
            target,
            {_lookup(src_objects, k, "objects"): _lookup(tgt_objects, v, "objects") for k, v in self.objects.items()},
            {
                _lookup(src_morphisms, k, "morphisms"): _lookup(tgt_morphisms, v, "morphisms")
                for k, v in self.morphisms.items()
            },
            name=self.name,
        )


class LocalSystemModel(_Model):
    name: str = ""
    field: Optional[str] = None
    base: GroupoidModel
    fibers: Dict[str, SpaceModel]
    transport: Dict[str, MatrixRows] = Field(default_factory=dict)

    def to_system(self) -> LocalSystem:
        base = self.base.to_groupoid()
        field = _ground_field(self.field)
        fibers = _fibers(base, self.fibers)
        transport = {}
        morphisms = _ids(base.morphisms)
        for m in base.morphisms:
            rows = self.transport.get(id_text(m))
            domain, codomain = fibers[base.src[m]], fibers[base.dst[m]]
            if rows is None and m == base.identity(base.src[m]):
                transport[m] = identity(domain)
                continue
            if rows is None:
                raise InvariantError(f"Missing transport along {id_text(m)}", location=("transport", id_text(m)))
            transport[m] = _linear(domain, codomain, rows, "transport", id_text(m), field=field)
        for key in self.transport:
            _lookup(morphisms, key, "transport")
        return LocalSystem(base, fibers, transport, name=self.name)


class LocMorphismModel(_Model):
    source: LocalSystemModel
    target: LocalSystemModel
    map: Optional[FunctorModel] = None
    components: Dict[str, MatrixRows]

    def to_morphism(self) -> LocMorphism:
        v, w = self.source.to_system(), self.target.to_system()
        f = _base_functor(self.map, v.base, w.base)
        return LocMorphism(
            v,
            w,
            f,
            {
                x: _linear(v.fiber(x), w.fiber(f.obj(x)), _component(self.components, x), "components", id_text(x))
                for x in v.base.objects
            },
        )


class ChainComplexModel(_Model):
    field: Optional[str] = None
    support: Optional[List[int]] = None
    components: Dict[int, SpaceModel]
    differentials: Dict[int, MatrixRows] = Field(default_factory=dict)

    def to_complex(self, prefix: str = "", field: Optional[ScalarField] = None) -> ChainComplex:
        """The complex, with entries embedded in its own field or else in the enclosing ``field``."""
        if self.field is not None:
            field = _ground_field(self.field)
        spaces = {n: s.to_space(f"{prefix}c{n}.") for n, s in self.components.items()}
        if self.support is not None and sorted(self.support) != sorted(n for n, v in spaces.items() if v.dim > 0):
            raise InvariantError("Support does not list the nonzero components", location=("support",))
        zero = VectorSpace.zero()
        differentials = {
            n: _linear(spaces.get(n, zero), spaces.get(n - 1, zero), rows, "differentials", n, field=field)
            for n, rows in self.differentials.items()
        }
        return ChainComplex(spaces, differentials)


def _chain_map(
    domain: ChainComplex,
    codomain: ChainComplex,
    maps: Mapping[int, MatrixRows],
    *where,
    field: Optional[ScalarField] = None,
) -> ChainMap:
    return ChainMap(
        domain,
        codomain,
        {
            n: _linear(domain.component(n), codomain.component(n), rows, *where, n, field=field)
            for n, rows in maps.items()
        },
    )


class ChainMapModel(_Model):
    domain: ChainComplexModel
    codomain: ChainComplexModel
    maps: Dict[int, MatrixRows]

    def to_chain_map(self) -> ChainMap:
        return _chain_map(self.domain.to_complex("s"), self.codomain.to_complex("t"), self.maps, "maps")


class SimplicialMapModel(_Model):
    level: int = Field(ge=0)
    index: int = Field(ge=0)
    maps: Dict[int, MatrixRows]


class SimplicialModel(_Model):
    levels: List[ChainComplexModel]
    faces: List[SimplicialMapModel] = Field(default_factory=list)
    degeneracies: List[SimplicialMapModel] = Field(default_factory=list)

    def to_simplicial(self) -> TruncatedSimplicialComplex:
        levels = [c.to_complex(f"l{s}.") for s, c in enumerate(self.levels)]
        faces, degeneracies = {}, {}
        for d in self.faces:
            if not 1 <= d.level < len(levels):
                raise InvariantError(f"Face at level {d.level} is out of range", location=("face", d.level, d.index))
            faces[(d.level, d.index)] = _chain_map(levels[d.level], levels[d.level - 1], d.maps, "face", d.level, d.index)
        for s in self.degeneracies:
            if not 0 <= s.level < len(levels) - 1:
                raise InvariantError(
                    f"Degeneracy at level {s.level} is out of range", location=("degeneracy", s.level, s.index)
                )
            degeneracies[(s.level, s.index)] = _chain_map(
                levels[s.level], levels[s.level + 1], s.maps, "degeneracy", s.level, s.index
            )
        return TruncatedSimplicialComplex(levels, faces, degeneracies)


class DgLocalSystemModel(_Model):
    name: str = ""
    field: Optional[str] = None
    base: GroupoidModel
    fibers: Dict[str, ChainComplexModel]
    transport: Dict[str, Dict[int, MatrixRows]] = Field(default_factory=dict)

    def to_system(self) -> DgLocalSystem:
        base = self.base.to_groupoid()
        field = _ground_field(self.field)
        objects = _ids(base.objects)
        for key in self.fibers:
            _lookup(objects, key, "fibers")
        fibers = {x: _component(self.fibers, x).to_complex(f"{id_text(x)}:", field) for x in base.objects}
        transport = {}
        for m in base.morphisms:
            maps = self.transport.get(id_text(m))
            domain, codomain = fibers[base.src[m]], fibers[base.dst[m]]
            if maps is None and m == base.identity(base.src[m]):
                maps = {n: identity(domain.component(n)).matrix for n in domain.support}
            if maps is None:
                raise InvariantError(f"Missing transport along {id_text(m)}", location=("transport", id_text(m)))
            transport[m] = _chain_map(domain, codomain, maps, "transport", id_text(m), field=field)
        return DgLocalSystem(base, fibers, transport, name=self.name)


class DgLocMorphismModel(_Model):
    source: DgLocalSystemModel
    target: DgLocalSystemModel
    map: Optional[FunctorModel] = None
    components: Dict[str, Dict[int, MatrixRows]]

    def to_morphism(self) -> DgLocMorphism:
        v, w = self.source.to_system(), self.target.to_system()
        f = _base_functor(self.map, v.base, w.base)
        return DgLocMorphism(
            v,
            w,
            f,
            {
                x: _chain_map(v.fiber(x), w.fiber(f.obj(x)), _component(self.components, x), "components", id_text(x))
                for x in v.base.objects
            },
        )


# =============================================================================
# Helpers
# =============================================================================


def _ids(values, where: str = "ids") -> Dict[str, Hashable]:
    ids: Dict[str, Hashable] = {}
    for v in values:
        key = id_text(v)
        if key in ids and ids[key] != v:
            raise InvariantError(f"Ids {ids[key]!r} and {v!r} are both written {key!r}", location=(where, key))
        ids[key] = v
    return ids


def _lookup(ids: Mapping[str, Hashable], key: str, where: str) -> Hashable:
    try:
        return ids[key]
    except KeyError:
        raise InvariantError(f"Unknown id {key!r}", location=(where, key)) from None


def _required(value, name: str):
    if value is None:
        raise InvariantError(f"A standalone functor needs its {name}", location=(name,))
    return value


def _component(values: Mapping[str, Any], x: Hashable) -> Any:
    try:
        return values[id_text(x)]
    except KeyError:
        raise InvariantError(f"Missing entry for {id_text(x)}", location=("components", id_text(x))) from None


def _fibers(base: FinGroupoid, fibers: Mapping[str, SpaceModel]) -> Dict[Hashable, VectorSpace]:
    objects = _ids(base.objects)
    for key in fibers:
        _lookup(objects, key, "fibers")
    result = {}
    for x in base.objects:
        model = fibers.get(id_text(x))
        if model is None:
            raise InvariantError(f"Missing fiber over {id_text(x)}", location=("fibers", id_text(x)))
        result[x] = model.to_space(f"{id_text(x)}:")
    return result


def _ground_field(name: Optional[str]) -> Optional[ScalarField]:
    if name is None:
        return None
    field = FIELDS.get(name)
    if field is None:
        raise InvariantError(f"Unknown field {name!r}", location=("field",))
    return field


def _embed(field: ScalarField, rows: Matrix, where: tuple) -> Matrix:
    result = []
    for i, row in enumerate(rows):
        embedded = []
        for j, x in enumerate(row):
            try:
                embedded.append(field.embed(x))
            except VariantMismatchError:
                raise InvariantError(f"{format_scalar(x)} is not in {field.name}", location=where + (i, j)) from None
        result.append(embedded)
    return result


def _linear(
    domain: VectorSpace, codomain: VectorSpace, rows: Matrix, *where, field: Optional[ScalarField] = None
) -> LinearMap:
    """A matrix from a document; an empty list stands for any matrix with zero rows.

    With a ``field`` every entry is embedded in it first.
    """
    if field is not None:
        rows = _embed(field, rows, where)
    try:
        if not rows and codomain.dim == 0:
            return LinearMap(domain, codomain, ())
        return LinearMap(domain, codomain, rows)
    except InvariantError as exc:
        raise InvariantError(exc.message, location=where + exc.location) from None


def _base_functor(model: Optional[FunctorModel], source: FinGroupoid, target: FinGroupoid) -> GroupoidFunctor:
    if model is not None:
        return model.to_functor(source, target)
    if source != target:
        raise InvariantError("A morphism between different bases needs a map", location=("map",))
    return fingrpd.identity_functor(source)


# =============================================================================
# Load / dump
# =============================================================================


def load_groupoid(data: Mapping) -> FinGroupoid:
    return GroupoidModel.model_validate(data).to_groupoid()


def load_functor(data: Mapping) -> GroupoidFunctor:
    return FunctorModel.model_validate(data).to_functor()


def load_local_system(data: Mapping) -> LocalSystem:
    return LocalSystemModel.model_validate(data).to_system()


def load_loc_morphism(data: Mapping) -> LocMorphism:
    return LocMorphismModel.model_validate(data).to_morphism()


def load_chain_complex(data: Mapping) -> ChainComplex:
    return ChainComplexModel.model_validate(data).to_complex()


def load_chain_map(data: Mapping) -> ChainMap:
    return ChainMapModel.model_validate(data).to_chain_map()


def load_simplicial(data: Mapping) -> TruncatedSimplicialComplex:
    return SimplicialModel.model_validate(data).to_simplicial()


def load_dg_local_system(data: Mapping) -> DgLocalSystem:
    return DgLocalSystemModel.model_validate(data).to_system()


def load_dg_loc_morphism(data: Mapping) -> DgLocMorphism:
    return DgLocMorphismModel.model_validate(data).to_morphism()


LOADERS = {
    "groupoid": load_groupoid,
    "functor": load_functor,
    "local_system": load_local_system,
    "loc_morphism": load_loc_morphism,
    "chain_complex": load_chain_complex,
    "chain_map": load_chain_map,
    "simplicial": load_simplicial,
    "dg_local_system": load_dg_local_system,
    "dg_loc_morphism": load_dg_loc_morphism,
}


def _is_dg_system(data: Any) -> bool:
    fibers = data.get("fibers") if isinstance(data, Mapping) else None
    return isinstance(fibers, Mapping) and any(
        isinstance(f, Mapping) and "components" in f for f in fibers.values()
    )


def detect_kind(data: Any) -> str:
    """Classify a JSON document by its keys.

    Raises:
        ExtlinError: If the document matches no known form.
    """
    if not isinstance(data, Mapping):
        raise ExtlinError("A document must be a JSON object", payload={"type": type(data).__name__})
    keys = set(data)
    if "levels" in keys:
        return "simplicial"
    if {"source", "target", "components"} <= keys:
        return "dg_loc_morphism" if _is_dg_system(data["source"]) else "loc_morphism"
    if {"source", "target", "objects"} <= keys:
        return "functor"
    if {"domain", "codomain", "maps"} <= keys:
        return "chain_map"
    if {"base", "fibers"} <= keys:
        return "dg_local_system" if _is_dg_system(data) else "local_system"
    if "components" in keys:
        return "chain_complex"
    if keys & {"objects", "group", "codiscrete", "discrete", "action"}:
        return "groupoid"
    raise ExtlinError("Unrecognized document", payload={"keys": sorted(keys)})


def load_any(data: Mapping) -> Any:
    kind = detect_kind(data)
    logger.debug("loading document of kind %s", kind)
    return LOADERS[kind](data)


def dump_space(v: VectorSpace) -> Dict[str, Any]:
    return {"dim": v.dim, "labels": list(v.labels)}


def dump_groupoid(x: FinGroupoid) -> Dict[str, Any]:
    _ids(x.objects, "objects")
    _ids(x.morphisms, "morphisms")
    return {
        "name": x.name,
        "objects": [id_text(o) for o in x.objects],
        "morphisms": [{"id": id_text(m), "src": id_text(x.src[m]), "dst": id_text(x.dst[m])} for m in x.morphisms],
        "identities": {id_text(o): id_text(x.identity(o)) for o in x.objects},
        "compose": [[id_text(g), id_text(f), id_text(gf)] for (g, f), gf in x.table.items()],
    }


def dump_functor(f: GroupoidFunctor) -> Dict[str, Any]:
    return {
        "name": f.name,
        "source": dump_groupoid(f.source),
        "target": dump_groupoid(f.target),
        "objects": {id_text(x): id_text(f.obj(x)) for x in f.source.objects},
        "morphisms": {id_text(m): id_text(f.mor(m)) for m in f.source.morphisms},
    }


def dump_local_system(v: LocalSystem) -> Dict[str, Any]:
    return {
        "name": v.name,
        "base": dump_groupoid(v.base),
        "fibers": {id_text(x): dump_space(v.fiber(x)) for x in v.base.objects},
        "transport": {id_text(m): dump_matrix(v.along(m)) for m in v.base.morphisms},
    }


def _dump_map(f: GroupoidFunctor) -> Dict[str, Any]:
    data = dump_functor(f)
    del data["source"], data["target"]
    return data


def dump_loc_morphism(phi: LocMorphism) -> Dict[str, Any]:
    return {
        "source": dump_local_system(phi.source),
        "target": dump_local_system(phi.target),
        "map": _dump_map(phi.functor),
        "components": {id_text(x): dump_matrix(phi.component(x)) for x in phi.source.base.objects},
    }


def dump_chain_complex(c: ChainComplex) -> Dict[str, Any]:
    return {
        "support": c.support,
        "components": {str(n): dump_space(v) for n, v in c.components.items()},
        "differentials": {
            str(n): dump_matrix(c.differential(n)) for n in c.support if (n - 1) in c.components
        },
    }


def _dump_maps(f: ChainMap) -> Dict[str, Any]:
    return {str(n): dump_matrix(m) for n, m in f.maps.items()}


def dump_chain_map(f: ChainMap) -> Dict[str, Any]:
    return {"domain": dump_chain_complex(f.domain), "codomain": dump_chain_complex(f.codomain), "maps": _dump_maps(f)}


def dump_simplicial(x: TruncatedSimplicialComplex) -> Dict[str, Any]:
    return {
        "levels": [dump_chain_complex(level) for level in x.levels],
        "faces": [{"level": s, "index": i, "maps": _dump_maps(d)} for (s, i), d in sorted(x.faces.items())],
        "degeneracies": [
            {"level": s, "index": i, "maps": _dump_maps(g)} for (s, i), g in sorted(x.degeneracies.items())
        ],
    }


def dump_dg_local_system(v: DgLocalSystem) -> Dict[str, Any]:
    return {
        "name": v.name,
        "base": dump_groupoid(v.base),
        "fibers": {id_text(x): dump_chain_complex(v.fiber(x)) for x in v.base.objects},
        "transport": {id_text(m): _dump_maps(v.along(m)) for m in v.base.morphisms},
    }


def dump_dg_loc_morphism(phi: DgLocMorphism) -> Dict[str, Any]:
    return {
        "source": dump_dg_local_system(phi.source),
        "target": dump_dg_local_system(phi.target),
        "map": _dump_map(phi.functor),
        "components": {id_text(x): _dump_maps(phi.component(x)) for x in phi.source.base.objects},
    }
