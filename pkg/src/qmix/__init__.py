"""Density-matrix simulation of measurement as system-apparatus interaction."""

from .analysis import (
    AuditResult,
    Observable,
    composite_witness,
    ensemble_mix,
    expectation,
    proper_improper_audit,
    rotated_pair,
    trace_distance,
)
from .channels import (
    Gate,
    MeasurementBasis,
    Projector,
    apply_unitary,
    build_cnot,
    build_h,
    build_x,
    computational_basis,
    epistemic_collapse,
    lift,
    measurement_circuit,
    ontic_collapse,
    plus_minus_basis,
)
from .core import dagger, hermitian_eigenvalues, matmul, partial_trace, tensor_product, trace
from .errors import DimensionError, QmixError, SpecError, ValidationError, ZeroProbabilityError
from .scenarios import (
    ObserverRecord,
    ScenarioReport,
    scenario_ambiguity,
    scenario_audit,
    scenario_fig1,
    scenario_fig2,
    scenario_fig3,
    scenario_mixed_input,
    scenario_wigner,
)
from .states import (
    DensityMatrix,
    Ensemble,
    PureState,
    SubsystemLabel,
    ensemble_to_density,
    pure_to_density,
    purity,
    reduce,
    register,
)

__version__ = "0.1.0"
