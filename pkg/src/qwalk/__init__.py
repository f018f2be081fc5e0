"""
qwalk
=====

Discrete-time coined quantum walk search on the n-dimensional hypercube.

Submodules
----------
statevec_full       exact simulation on the n * 2**n coin-node space
statevec_collapsed  the same walk restricted to the 2n bit-swap symmetric states
spectral            eigendecomposition of the collapsed operators, arc diagnostics
search              end-to-end search, probability curves, Grover baseline
verify              aggregated checks used by ``qwalk verify``
cli                 command-line front end
"""

from .errors import (
    CapacityError,
    DimensionError,
    NormalizationError,
    QWalkError,
    SolverError,
    StructuralError,
)
from .search import (
    SearchOutcome,
    amplified_success,
    grover_reference,
    probability_curve,
    run_search,
    t_final,
)
from .spectral import (
    EigenPair,
    SpectralSummary,
    arc_members,
    eigendecompose,
    spectral_summary,
    unperturbed_eigenvalue,
)
from .statevec_collapsed import (
    CollapsedOperator,
    CollapsedState,
    build_collapsed_unitary,
    collapse,
    collapsed_initial_state,
    collapsed_step,
    marked_probability,
    psi1_state,
)
from .statevec_full import (
    FullState,
    WalkConfig,
    apply_bit_swap,
    apply_coin,
    apply_shift,
    evolve,
    grover_coin,
    node_distribution,
    sample_measurement,
    step,
    uniform_state,
)

__version__ = "0.1.0"
