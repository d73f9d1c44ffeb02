"""Amplitude/phase relaxation of quantum gates, Choi matrices, negativity and
dispersive phase-plate decoherence of polarization qubits."""

__version__ = "0.1.0"

from .channels import (
    KrausChannel,
    RelaxationParams,
    amplitude_damping,
    apply_channel,
    compose,
    phase_damping,
    relaxation_params,
    tensor_channel,
    unitary_channel,
)
from .errors import NumericalError, QRelaxError, StructureError, ValidationError
from .kernels import BACKEND
from .plate import (
    PlateParams,
    analytic_chi,
    linearize,
    monte_carlo_chi,
    optical_length,
    plate_purity,
    plate_unitary,
    purity_vs_thickness,
)
from .process import (
    ChiMatrix,
    NoisyGateSpec,
    chi_from_channel,
    chi_trace_distance,
    gate_fraction,
    negativity_dynamics,
    noisy_gate_channel,
    noisy_gate_chi,
    sqisw,
)
from .spectra import FourierCoeffs, SpectralDistribution, fourier_coeffs
from .state import (
    DensityMatrix,
    PureState,
    density_from_pure,
    hermitian_eigenvalues,
    kron,
    max_entangled,
    negativity,
    partial_transpose,
    purity,
)
