"""Analysis toolkit for asynchronous Boolean dynamical systems.

Generator functions over {0,1}^n, updated coordinate-subset-wise under
unbounded delay: simulation by exact piecewise-constant signals, fixed-point
and nullclin analysis, state portraits, both transitivity notions, system
equivalence by change of coordinates, and Boolean-parameter bifurcations.
"""

from .core import (
    Bits,
    CapabilityError,
    Mask,
    State,
    TruthTable,
    WidthMismatchError,
    all_masks,
    all_states,
    apply_masked,
    fixed_points,
    is_fixed_point,
    iterate,
    nullclin,
    union_states,
    unstable_coordinates,
)
from .runs import (
    ConstantTail,
    LassoMaskSequence,
    PeriodicTail,
    ProgressiveFunction,
    Signal,
    canonical_surjection,
    continuous_run,
    detect_period,
    discrete_run,
    eval_signal,
    final_value,
    full_update_sequence,
    runs_agree,
    signal_values,
)
from .graph import (
    OrbitSet,
    TransitionGraph,
    accessible,
    build_graph,
    export_portrait,
    is_transitive_exists,
    is_transitive_forall,
    orbit,
)
from .omega import (
    OmegaMembership,
    StateBijection,
    compose,
    enumerate_omega,
    invert,
    is_in_omega,
    map_progressive_function,
    map_sequence,
)
from .conjugacy import (
    ConjugacyWitness,
    EquivalenceVerdict,
    check_conjugacy,
    check_conjugacy_runs,
    check_invariants_transfer,
    find_equivalence,
    has_nontrivial_conjugate,
    recode,
)
from .bifurcation import (
    BifurcationDiagram,
    FixedPointDiagram,
    ParamFamily,
    bifurcation_diagram,
    families_equivalent,
    family_structurally_stable,
    fixed_point_diagram,
)

__version__ = "0.1.0"
