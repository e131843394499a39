"""Ferroelectric capacitor stack simulator and analysis toolkit."""

from .constants import EPS0, Q_E
from .materials import (
    StackValidationError,
    FerroMaterial,
    DielectricLayer,
    StackConfig,
    calibrate_landau,
    validate_stack,
)
from .units import UnitError, convert_units
from .electrostatics import (
    FieldSolution,
    solve_fields,
    depolarization_field,
    displacement_current,
)
from .dynamics import (
    StiffnessError,
    PolarizationGrid,
    SolverOptions,
    Trace,
    uniform_grid,
    apply_disorder,
    free_energy_density,
    variational_derivative,
    total_energy,
    step_dynamics,
    simulate,
    run_transient,
)
from .waveforms import (
    WaveformError,
    PresetPulse,
    Triangle,
    StepPulse,
    Hold,
    WaveformSpec,
    Waveform,
    make_waveform,
)
from .experiments import (
    LoopMetrics,
    HysteresisResult,
    ReversalCurve,
    SCurve,
    NcCheckResult,
    loop_waveform_spec,
    integrate_current,
    hysteresis_experiment,
    reversal_experiment,
    switching_time,
    scurve,
    nc_hysteresis_check,
)
from .kinetics import (
    FitError,
    KaiParams,
    NlsParams,
    ModelSelection,
    kai_model,
    nls_model,
    fit_kai,
    fit_nls,
    model_select,
)

__version__ = "0.1.0"
