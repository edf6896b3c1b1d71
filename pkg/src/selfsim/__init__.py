"""Self-similar groups acting on rooted trees: automata, level quotients,
iterated monodromy groups of quadratic portraits and orbifold data."""

__version__ = "0.1.0"

from importlib import resources as _resources


def data_path(name):
    """Filesystem path of a bundled ``.grp`` or portrait file."""
    return str(_resources.files(__name__).joinpath("data", name))


BUNDLED_SPECS = ("adding", "basilica", "chebyshev", "grigorchuk", "rabbit")
BUNDLED_PORTRAITS = ("power", "basilica", "chebyshev", "z2_plus_i")

from .errors import *  # noqa: F401,F403
from .automaton import (
    AtLeast,
    Automorphism,
    Finite,
    act,
    compose,
    evaluate,
    generator_machines,
    inverse,
    is_identity,
    order_bounded,
    power,
    section,
)
from .groupspec import (
    CycleDiagram,
    Generator,
    GroupSpec,
    ValidationReport,
    cycle_diagram,
    is_tree_like,
    load_spec,
    make_spec,
    parse_spec,
    print_spec,
    validate,
)
from .portrait import (
    ExceptionalResult,
    OrbifoldSignature,
    Periodic,
    PostCriticalPortrait,
    Preperiodic,
    build_img,
    critical_orbit_type,
    is_critically_exceptional,
    load_portrait,
    maximal_exceptional_set,
    orbifold,
    post_critical_set,
    quadratic_corpus,
    quadratic_portrait,
    validate_portrait,
)
from .quotient import (
    HdimEstimate,
    LevelQuotient,
    Subgroup,
    abelianization_data,
    derived_subgroup,
    hdim_sequence,
    is_level_transitive,
    level_quotient,
    normal_closure,
    order,
    pointwise_stabilizer,
    rigid_level_stabilizer,
    rigid_stabilizer,
    subgroup_from_words,
    subgroup_hdim_sequence,
)
from .analysis import (
    BranchEvidence,
    LrVerdict,
    WitnessReport,
    branch_evidence,
    lemma_rist_closure_check,
    predict_lr,
    section_surjectivity_witness,
    torsion_retract_witness,
)
