"""wittlab: exact computer algebra for big Witt vectors, de Rham forms over
function-field towers, residues and local symbols on the projective line,
and the symbol calculus tying them together."""

from .errors import (
    WittLabError,
    ValidationError,
    DescriptorMismatch,
    NotIntegral,
    NotAFiniteExtension,
    NotSubTruncation,
    EmptyTruncation,
    CharacteristicObstruction,
    InsufficientPrecision,
    InsufficientFactorization,
    UncoveredPole,
    ModulusViolation,
    DegenerateParameter,
    ZeroArgument,
)
from .fields import (
    QQ,
    PrimeField,
    FunctionField,
    SimpleExtension,
    FieldElement,
    number_field,
    embed,
    field_trace,
    field_norm,
    generators,
    var_element,
    map_element,
)
from .witt import (
    ZZ,
    TruncationSet,
    WittVector,
    witt_op_char_p,
    witt_trace,
    p_typical_decompose,
    p_typical_recompose,
)
from .forms import (
    DifferentialForm,
    differential,
    dlog,
    wedge,
    trace_form,
    embed_form,
    pullback_form,
)
from .ghost import GhostForm, dlog_teich, milnor_dlog
from .laurent import LaurentSeries
from .places import (
    Place,
    LocalForm,
    FactoredFunction,
    local_expand,
    valuation,
    evaluate_at,
    witt_evaluate,
    to_local_form,
    refined_residue,
    witt_local_symbol,
    residue_formula_g,
    residue_formula_g_series,
    residue_theorem_sum,
    ramified_pullback_check,
    trace_residue_square_check,
)
from .milnor import MilnorSymbol, tame_symbol, boundary, weil_reciprocity_product
from .somekawa import (
    SomekawaSymbol,
    psi,
    phi,
    dlog_presentation,
    dlog_lift,
    gamma_ghost,
    pf_generator_eval,
    m_P,
    WRDatum,
    modulus_check,
    wr_generator_eval,
    cathelineau_instance,
)

__version__ = "0.1.0"
