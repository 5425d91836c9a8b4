"""Storage and retrieval of photonic states in a levitated nanoparticle:
moment dynamics, Gaussian-state transfer, photon statistics and scattering."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConfigError,
    IntegrationError,
    LevmemError,
    NotFoundError,
    NumericalError,
    PoleError,
    UndefinedCorrelationError,
)
from .params import DerivedRates, PhysicalParams, coupling_g, derive_rates  # noqa: E402
from .pulses import PulseSpec, envelope, pulse_area  # noqa: E402
from .dynamics import MomentRates, MomentTrace, integrate_moments, storage_retrieval_trace  # noqa: E402
from .gaussian import (  # noqa: E402
    CovMatrix,
    GaussianInputState,
    ProtocolSpec,
    attenuation_factors,
    fidelity,
    propagate_quadratures,
    wigner_grid,
)
from .correlations import G2Inputs, g2_zero, g_integrals, mean_photon_retrieved  # noqa: E402
from .scattering import (  # noqa: E402
    ScatterParams,
    TransmissionSpectrum,
    half_width,
    pulse_fidelity,
    spectrum,
    t31_dc,
    transmission_at,
)
from .config import RunConfig, load_config  # noqa: E402

__all__ = [
    "__version__",
    "ConfigError", "IntegrationError", "LevmemError", "NotFoundError", "NumericalError",
    "PoleError", "UndefinedCorrelationError",
    "DerivedRates", "PhysicalParams", "coupling_g", "derive_rates",
    "PulseSpec", "envelope", "pulse_area",
    "MomentRates", "MomentTrace", "integrate_moments", "storage_retrieval_trace",
    "CovMatrix", "GaussianInputState", "ProtocolSpec", "attenuation_factors", "fidelity",
    "propagate_quadratures", "wigner_grid",
    "G2Inputs", "g2_zero", "g_integrals", "mean_photon_retrieved",
    "ScatterParams", "TransmissionSpectrum", "half_width", "pulse_fidelity", "spectrum",
    "t31_dc", "transmission_at",
    "RunConfig", "load_config",
]
