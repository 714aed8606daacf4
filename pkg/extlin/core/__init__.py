"""Core modules for computing with local systems over finite groupoids."""

from .errors import (
    CompositionError,
    ExtlinError,
    InvariantError,
    LawViolation,
    SuiteNotFoundError,
    UnsupportedError,
)
from .scalars import Gaussian, format_scalar, parse
from .finvect import LinearMap, VectorSpace, compose, identity, rank, tensor_map, tensor_space
from .groups import FiniteGroup, cyclic, klein_four, symmetric
from .fingrpd import (
    FinGroupoid,
    GroupoidFunctor,
    codiscrete,
    delooping,
    discrete,
    product,
    skeletize,
    terminal,
)
from .locsys import (
    LocalSystem,
    LocMorphism,
    external_tensor,
    pullback,
    pushforward,
    sections,
)
from .chaincx import ChainComplex, ChainMap, disk, homology, sphere, tensor_cc
from .simplicial import TruncatedSimplicialComplex, totalize
from .dglocsys import DgLocalSystem, DgLocMorphism, classify, external_tensor_dg
from .quantum import MeasurementComonad, QubitReport, qubit_demo
from .hooks import CorruptCompositionHook, HookRunner, PostBuildHook, TransposeTransportHook
from .corpus import Corpus
from .laws import Report, list_suites, register_suite, run_all, run_suite
from .serialization import detect_kind, load_any

__all__ = [
    # Errors
    "ExtlinError",
    "CompositionError",
    "InvariantError",
    "UnsupportedError",
    "SuiteNotFoundError",
    "LawViolation",
    # Scalars and linear algebra
    "Gaussian",
    "parse",
    "format_scalar",
    "VectorSpace",
    "LinearMap",
    "compose",
    "identity",
    "rank",
    "tensor_space",
    "tensor_map",
    # Groups and groupoids
    "FiniteGroup",
    "cyclic",
    "klein_four",
    "symmetric",
    "FinGroupoid",
    "GroupoidFunctor",
    "codiscrete",
    "delooping",
    "discrete",
    "product",
    "skeletize",
    "terminal",
    # Local systems
    "LocalSystem",
    "LocMorphism",
    "external_tensor",
    "pullback",
    "pushforward",
    "sections",
    # Chain complexes
    "ChainComplex",
    "ChainMap",
    "disk",
    "sphere",
    "homology",
    "tensor_cc",
    "TruncatedSimplicialComplex",
    "totalize",
    "DgLocalSystem",
    "DgLocMorphism",
    "classify",
    "external_tensor_dg",
    # Quantum
    "MeasurementComonad",
    "QubitReport",
    "qubit_demo",
    # Hooks and suites
    "PostBuildHook",
    "HookRunner",
    "TransposeTransportHook",
    "CorruptCompositionHook",
    "Corpus",
    "Report",
    "list_suites",
    "register_suite",
    "run_suite",
    "run_all",
    # Serialization
    "detect_kind",
    "load_any",
]
