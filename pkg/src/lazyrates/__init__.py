"""Entropy rates of subsystems, lazy states and their concentration under Haar sampling."""

from ._version import __version__
from .bounds import (
    Bound,
    BoundParameters,
    bounds_report,
    lemma1_params,
    lemma2_bound,
    lemma2_exact_bound,
    main_result_params,
    purity_bound,
    universal_bound,
)
from .errors import (
    ConfigError,
    DegenerateInputError,
    LazyRatesError,
    NumericalConsistencyError,
    ParameterError,
    SolverError,
    StructuralError,
)
from .hamiltonian import (
    HamiltonianDecomposition,
    canonical_decompose,
    delta_sdp_check,
    delta_strength,
    interaction_strength,
)
from .harness import ExperimentConfig, ThresholdSpec, run_concentration, sweep
from .linop import BipartiteSpace, partial_trace, tensor
from .rates import (
    RateReport,
    entropy_rate,
    finite_difference_rate,
    is_lazy,
    purity_rate,
    rate_report,
    worst_case_entropy_rate,
    worst_case_entropy_rate_pure,
    worst_case_purity_rate,
    worst_case_purity_rate_pure,
)
from .sampler import SeededRng, Spectrum
from .stats import ConcentrationResult
