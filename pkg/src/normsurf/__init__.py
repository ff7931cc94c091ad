"""Exact intersection theory on normal surfaces presented by a resolution."""
from .cones import (
    FaceKind,
    FaceReport,
    NumericalClass,
    hodge_check,
    is_extremal_negdef_face,
    numerical_class,
    support_function,
)
from .contract import (
    Condition,
    ConditionReport,
    ContractionVerdict,
    Hypothesis,
    Status,
    TraceLine,
    ample_on_itself,
    anti_ample_on,
    check_complementary_conditions,
    contraction_certificate,
    criteria_engine,
    is_almost_affine_complement,
    is_negative_definite,
    positive_square_witness,
)
from .errors import (
    InvalidModel,
    NoDecomposition,
    NormsurfError,
    NoSeed,
    NotSymmetric,
    NoWitness,
    ParseError,
    PreconditionError,
    SingularSystem,
    UnknownDivisor,
)
from .exactmath import Inertia, LPCertificate, inverse, ldlt_inertia, lp_feasible, solve_linear
from .fixtures import fixture_names, fixture_path, load_fixture
from .models import (
    ModelClass,
    ModelKind,
    MovableFixedData,
    Properness,
    classify_model,
    split_check,
    zariski_decompose,
)
from .mumford import cartier_index, mumford_gram, pair, pullback, unibranched_pair
from .surface import (
    Divisor,
    FieldFacts,
    Level,
    NormalSurfaceModel,
    RegularSurfaceModel,
    SingularPoint,
    adjacency_components,
    load_model,
    parse_model,
    serialize_model,
    validate,
)

__version__ = "0.1.0"
