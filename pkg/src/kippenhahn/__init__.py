"""Higher-rank numerical ranges and Kippenhahn curves of complex matrices."""

from .geometry import ConvexRegion, RegionKind
from .linalg import (
    HermitianEigenSystem,
    hermitian_eig,
    imag_part,
    rayleigh,
    rotated_real,
    tridiag_charpoly,
)
from .numerical_range import (
    CurveComponent,
    DegenerateEigenvalueError,
    GenericityReport,
    SupportSample,
    classify_3x3,
    curve_intersections,
    ellipse_fit,
    envelope_point,
    is_generic,
    kippenhahn_component,
    kippenhahn_components,
    normal_range,
    rank_k_range,
    rank_k_ranges,
    sample_support,
)
from .reciprocal import ReciprocalSpec, build, conjecture_probe, elliptical_components, golden_test, symmetry_check, zeta
from .tridiagonal import (
    ClosedFormSpectrum,
    TwoPeriodicTridiagonal,
    aas_condition,
    alpha,
    beta,
    closed_form_spectrum,
    normalize_superdiagonal,
    q_roots,
    to_dense,
)

__version__ = "0.1.0"
