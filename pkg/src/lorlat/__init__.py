"""lorlat: set representations of finite join-semilattices, certified
submultiplicative weight families, and weight-level order-isomorphism checks."""

from .errors import LorlatError
from .family import GLFFamily, build_family, ratio_report, sup_weights, verify_family
from .glf import (
    CertificationResult,
    PiecewiseWeight,
    certify_glf,
    extend_high,
    extend_low,
    prefix_integral,
)
from .lorentz import (
    LorentzSeq,
    check_submultiplicative,
    domination_ratio,
    join_equivalence_check,
    lorentz_norm,
    sample_weights,
)
from .model import ModelReport, OrderIsoReport, build_model, verify_order_iso
from .corpus import generate_corpus, random_corpus, random_semilattice
from .representation import (
    RepMap,
    RepTrace,
    build_representation,
    check_interval_identity,
    verify_representation,
)
from .semilattice import (
    Enumeration,
    JoinTable,
    LayerDecomposition,
    SemilatticeSpec,
    enumerate_elements,
    layer_decomposition,
    parse_lattice_spec,
    validate_join_semilattice,
)

__version__ = "0.1.0"

__all__ = [
    "CertificationResult",
    "Enumeration",
    "GLFFamily",
    "JoinTable",
    "LayerDecomposition",
    "LorentzSeq",
    "LorlatError",
    "ModelReport",
    "OrderIsoReport",
    "PiecewiseWeight",
    "RepMap",
    "RepTrace",
    "SemilatticeSpec",
    "build_family",
    "build_model",
    "build_representation",
    "certify_glf",
    "check_interval_identity",
    "check_submultiplicative",
    "domination_ratio",
    "enumerate_elements",
    "extend_high",
    "extend_low",
    "generate_corpus",
    "join_equivalence_check",
    "layer_decomposition",
    "lorentz_norm",
    "parse_lattice_spec",
    "prefix_integral",
    "random_corpus",
    "random_semilattice",
    "ratio_report",
    "sample_weights",
    "sup_weights",
    "validate_join_semilattice",
    "verify_family",
    "verify_order_iso",
    "verify_representation",
]
