"""Information gain, classical correlations and entanglement in a quantum
measurement performed with an initially mixed apparatus."""

from .correlations import (
    OptimizerConfig,
    OptResult,
    Povm,
    SeparableAnsatz,
    classical_correlations,
    entanglement_lower_bound,
    relative_entropy_of_entanglement_ub,
)
from .entropy import (
    INF,
    Ensemble,
    holevo,
    is_infinite,
    mutual_information,
    relative_entropy,
    shannon_entropy,
    von_neumann_entropy,
)
from .linalg import (
    DensityMatrix,
    PureState,
    hermitian_eig,
    is_unitary,
    partial_trace,
    purify,
    tensor_product,
)
from .measurement import (
    MeasurementModel,
    MeasurementOutcome,
    build_measurement_unitary,
    check_uncertainty,
    disturbance,
    information_gain,
    run_measurement,
)
from .tripartite import (
    Check,
    Interval,
    TripartiteOutcome,
    check_efficiency_bounds,
    check_tripartite_bounds,
    purified_measurement,
)

__version__ = "0.1.0"
