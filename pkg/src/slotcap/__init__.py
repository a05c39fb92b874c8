"""
slotcap: capacity-oriented modeling of connected slot arrays.

Spectral-domain impedance of a connected slot array (free space or backed
by a dielectric half-space), finite-array truncation, a multiport
rich-scattering channel with physical noise, and band-wide waterfilling
capacity.
"""

__version__ = "0.1.0"

from .capacity import CapacityReport, FrequencyGrid, WaterfillResult, eigen_snr, monte_carlo_capacity, waterfill
from .channel import (
    LinkConfig,
    assemble_channel,
    conjugate_match_load,
    noise_covariance,
    resistance,
    sample_coupling,
    scattering_draw,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    LinearAlgebraError,
    PassivityError,
    RangeError,
    SingularityError,
    SlotCapError,
)
from .network import (
    Impedance,
    Open,
    Short,
    chu_array_impedance,
    chu_impedance,
    load_matrix,
    psd_sqrt,
    truncate_by_admittance,
    truncate_by_termination,
)
from .specfun import bessel_j0, bessel_y0, hankel1_0, hankel2_0, j0_h2_product
from .spectral import (
    C0,
    ZETA0,
    ArrayGeometry,
    MediumSpec,
    SpectralContext,
    infinite_array_impedance,
    spectral_function,
    voltage_profile,
)
