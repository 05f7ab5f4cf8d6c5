"""Zero-probability measurements on independently prepared qubits, and the
overlap bounds they impose on ontological models."""
__version__ = "0.1.0"

from ._backend import BACKEND, use_backend
from .bounds import (
    RegionPoint,
    optimal_sigma,
    omega_upper_bound,
    random_povm_search,
    region_data,
    sigma_min,
    sigma_parametric,
)
from .circuit import (
    CircuitParams,
    MeasurementSpec,
    build_povm,
    f_beta,
    forbidden_amplitude,
    min_n,
    solve_params,
)
from .errors import DomainError, InfeasibleError, NumericalError, PsionticError, ResourceError
from .ontology import (
    DeviationReport,
    OntModel,
    ResponseTable,
    make_reference_model,
    max_deviation,
    overlap,
    overlap_region_mass,
    predicted_probabilities,
    product_model,
    tv_distance,
)
from .qcore import (
    HadamardAll,
    PreparationPair,
    ProbabilityVector,
    RAlpha,
    StateVector,
    ZBeta,
    apply_gate,
    born_probabilities,
    inner_product,
    prep_states,
    product_state,
)
from .verifier import NogoReport, twobox_check, verify_nogo
