"""Exact reasoning with conditional events: coherence, p-entailment, trivalent validity
and previsions of compound and iterated conditionals."""

from .events import (
    TOP,
    BOTTOM,
    Atom,
    ConditionalEvent,
    Event,
    LogicError,
    TrivalentValue,
    Undefined,
    Universe,
    World,
    atoms,
    df_conjunction,
    df_iterated,
    equivalent,
    eval_trivalent,
    evaluate,
    gn_implies,
    implies,
    negate,
    quasi_conjunction,
)
from .coherence import (
    Assessment,
    CoherenceError,
    CoherenceVerdict,
    build_points,
    check_coherence,
    constituents,
    extension_interval,
)
from .compound import (
    Distribution,
    IncoherentInput,
    IteratedTable,
    Undetermined,
    ValueTable,
    biconditional_values,
    conjunction_table,
    decomposition_check,
    frechet_bounds,
    iterated_negation_check,
    iterated_table,
    previsions_from_distribution,
    reduce_pair_special,
)
from .entailment import (
    EntailmentError,
    EntailmentVerdict,
    PdtReport,
    classify_case,
    converse_check,
    deduction_theorem,
    deduction_theorem_generalized,
    general_import_export,
    p_consistent,
    p_entails,
    weak_deduction,
)
from .rational import Interval, fmt
from .trivalent import JeffreyParams, ValidityMode, check_validity

__version__ = "0.1.0"
