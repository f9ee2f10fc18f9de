"""Probabilistic frames in the 2-Wasserstein space.

Frame operators and bounds, transport duals with LP feasibility
certificates, discrete and Gaussian optimal transport, geodesic
interpolation with frame certification, and semi-discrete power-diagram
couplings realizing probabilistic analysis and synthesis.
"""

from .duality import (
    FarkasCertificate,
    TransportPlan,
    canonical_dual,
    dual_family_member,
    find_transport_dual,
    psi_h_dual,
    verify_transport_dual,
    zero_centroid_obstruction,
)
from .errors import NotAFrameError, NumericError
from .geodesics import (
    GaussianPath,
    GeodesicProfile,
    coherence_identity_test,
    gaussian_path,
    gaussian_w2,
    geodesic_measure,
    geodesic_profile,
    szulc_condition,
)
from .measures import (
    DiscreteMeasure,
    FrameReport,
    GaussianMeasure,
    frame_operator,
    frame_report,
    pushforward_linear,
    second_moment,
)
from .transport import OtSolution, is_cyclically_monotone, optimal_permutation, wasserstein2

__version__ = "0.1.0"

__all__ = [
    "DiscreteMeasure",
    "FarkasCertificate",
    "FrameReport",
    "GaussianMeasure",
    "GaussianPath",
    "GeodesicProfile",
    "NotAFrameError",
    "NumericError",
    "OtSolution",
    "TransportPlan",
    "canonical_dual",
    "coherence_identity_test",
    "dual_family_member",
    "find_transport_dual",
    "frame_operator",
    "frame_report",
    "gaussian_path",
    "gaussian_w2",
    "geodesic_measure",
    "geodesic_profile",
    "is_cyclically_monotone",
    "optimal_permutation",
    "psi_h_dual",
    "pushforward_linear",
    "second_moment",
    "szulc_condition",
    "verify_transport_dual",
    "wasserstein2",
    "zero_centroid_obstruction",
]
