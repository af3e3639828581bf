"""Diffraction of twisted matter waves by circular and triangular apertures.

Three cross-validating propagation routes (direct Kirchhoff-Fresnel
quadrature, a Fraunhofer FFT fast path, and paraxial split-step Fourier
propagation), analytic aperture spectra, detector count budgets, and
beamline design calculators.
"""

from .aperture import (
    CircleAperture,
    ReciprocalBasis,
    TriangleAperture,
    detector_pitch,
    highlighted_nodes,
    reciprocal_basis,
    transmission,
    triangle_ft,
    triangle_ft_bruteforce,
)
from .beams import (
    BesselBeam,
    CustomProfile,
    LGPacket,
    bessel_beam_from_kinematics,
    bessel_field,
    coherence_ok,
    far_field_rms,
    gouy_phase,
    lg_field,
    lg_width,
    plane_wave,
    rms_radius,
)
from .detector import (
    BeamBudget,
    DetectorImage,
    bin_field,
    expected_counts,
    poisson_sample,
    time_to_counts,
    total_rate,
)
from .design import (
    DesignConstraint,
    DesignRow,
    design_row,
    fraunhofer_distance,
    generate_design_table,
    node_intensity,
    node_intensity_at_pitch,
    optimize_geometry,
    triangle_fraunhofer_distance,
)
from .fields import ComplexField2D, ObservationPlane, aperture_field, correlation
from .kinematics import (
    CARBON12_6PLUS,
    ELECTRON,
    PROTON,
    Kinematics,
    ParticleSpecies,
    de_broglie,
    kinematics_for,
    momentum_from_kinetic,
)
from .kirchhoff import (
    QuadratureSpec,
    fraunhofer_fft,
    kirchhoff_circular,
    kirchhoff_triangular,
    required_order,
)
from .ssfm import FreeDrift, Mask, PropagationPlan, apply_mask, drift, run_plan

__version__ = "0.1.0"

__all__ = [
    "BeamBudget", "BesselBeam", "CARBON12_6PLUS", "CircleAperture",
    "CustomProfile",
    "ComplexField2D", "DesignConstraint", "DesignRow", "DetectorImage",
    "ELECTRON", "FreeDrift", "Kinematics", "LGPacket", "Mask",
    "ObservationPlane", "PROTON", "ParticleSpecies", "PropagationPlan",
    "QuadratureSpec", "ReciprocalBasis", "TriangleAperture",
    "aperture_field", "apply_mask", "bessel_beam_from_kinematics",
    "bessel_field", "bin_field", "coherence_ok", "correlation", "de_broglie",
    "design_row", "detector_pitch", "drift", "expected_counts",
    "far_field_rms", "fraunhofer_distance", "fraunhofer_fft",
    "generate_design_table", "gouy_phase", "highlighted_nodes",
    "kinematics_for", "kirchhoff_circular", "kirchhoff_triangular",
    "lg_field", "lg_width", "momentum_from_kinetic", "node_intensity",
    "node_intensity_at_pitch", "optimize_geometry", "plane_wave", "poisson_sample",
    "reciprocal_basis", "required_order", "rms_radius", "run_plan",
    "time_to_counts", "total_rate", "transmission",
    "triangle_fraunhofer_distance", "triangle_ft", "triangle_ft_bruteforce",
]
