"""Quantum-correlation dynamics of two spin qubits on a resonator bus.

Simulates concurrence and quantum discord of two double-quantum-dot
singlet/triplet qubits coupled through a transmission-line resonator,
with an analytic X-state evolution cross-checked against exact
Fock-space engines, feature detectors for sudden death and discord
plateaus, and a device-parameter calculator.
"""
from .analysis import (
    AnalysisReport,
    DeathInterval,
    Plateau,
    SyncResult,
    TimeSeries,
    detect_death_intervals,
    detect_plateaus,
    period_empirical,
    period_theory,
    plateau_death_overlap,
    sync_classify,
)
from .correlations import (
    CorrelationSample,
    MeasurementAngles,
    binary_entropy_f,
    classical_correlation_bruteforce,
    classical_correlation_x,
    concurrence_general,
    concurrence_x,
    discord,
    mutual_information_x,
    project_to_x,
    sample_from_state,
    x_eigenvalues,
    x_series,
)
from .device import (
    DEFAULT_GEOMETRY,
    DeviceGeometry,
    RegimeReport,
    coupling_g,
    current_amplitude,
    regime_check,
    switch_field,
)
from .dynamics import (
    Eigensystem,
    ModelParams,
    chi,
    closed_abs_c0,
    closed_c0,
    eigensystem,
    evolve_full,
    evolve_full_series,
    evolve_x_closed,
    kappa_eta,
    omega_eff,
    partial_trace_resonator,
    period_closed,
    propagator,
)
from .errors import (
    ConfigError,
    DegenerateError,
    DegenerateSeriesError,
    DimensionMismatchError,
    DomainError,
    GridTooCoarse,
    InvalidGeometryError,
    NoPeriodError,
    NonIdenticalQubitsError,
    NotXStateError,
    NumericalError,
    PhysicalityError,
    SpinBusError,
    TruncationError,
    ZeroCouplingError,
    ZeroDetuningError,
)
from .qstate import (
    CoherentState,
    ValidationReport,
    XStateParams,
    coherent_amplitudes,
    coherent_state_fixed,
    make_x_state,
    validate_density,
    x_eigenvalues_t0,
)

__version__ = "0.1.0"
