"""Resonant wave growth in a point-driven square mass lattice.

Three independent routes to the displacement field are provided and
cross-checked: direct leapfrog simulation (:mod:`.lattice_sim`), numerical
evaluation of the Laplace-Fourier representation (:mod:`.transforms` on top
of :mod:`.quadrature`), and closed-form small-s asymptotics
(:mod:`.asymptotics`).
"""

from .asymptotics import (
    EULER_GAMMA,
    AsymptoticValue,
    ParityClass,
    asym_basic_integral,
    asym_u_time,
    asym_uL,
    boundary_layer_pieces,
    classify,
    h_split,
    substitutions,
)
from .lattice_sim import (
    LatticeConfig,
    TimeSeries,
    WaveField,
    extract_envelope,
    fit_log_growth,
    simulate,
    step,
)
from .quadrature import QuadratureResult, integrate
from .transforms import (
    LoadSpec,
    SpectralPoint,
    dispersion_sq,
    full_transform,
    half_inverted_transform,
    resonant_limit_integrand,
    uL_numeric,
)

__version__ = "0.1.0"
