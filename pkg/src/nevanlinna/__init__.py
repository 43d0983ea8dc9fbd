"""Arc-restricted Nevanlinna characteristics of disk-algebra functions."""

from .errors import DomainError, ToleranceNotMet
from .series import (
    CoefficientSeries,
    TailTerm,
    axpy,
    differentiate,
    evaluate,
    evaluate_circle,
    rotate,
    tail_bound_at,
    truncate,
    truncate_for,
)
from .logplus import (
    LOG2,
    InequalityResidual,
    log_plus,
    minimal_constant_scan,
    product_inequality_residual,
    sum_inequality_residual,
)
from .characteristic import (
    ArcWindow,
    CharacteristicCurve,
    GrowthReport,
    QuadratureConfig,
    RadialSchedule,
    Verdict,
    arc_log_integral,
    continuity_check,
    full_characteristic,
    growth_fit,
    radial_scan,
    subadditivity_check,
    window_monotonicity_check,
)
from .witness import WitnessSpec, genericity_perturbation, lacunary_witness, rotated_witness

__version__ = "0.1.0"
