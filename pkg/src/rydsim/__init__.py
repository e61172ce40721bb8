"""
rydsim: steady-state, spectral and fluorescence analysis of a microwave-
dressed four-level Rydberg ladder (EIT and EIA regimes).

Units: angular frequencies in rad/us, times in us. See :mod:`rydsim.model`.
"""

from .errors import *  # noqa: F401,F403
from .model import (AtomParams, DriveParams, Superoperator, build_hamiltonian,
                    build_liouvillian, khz, mhz, to_mhz)
from .steadystate import (EvolutionConfig, evolve, ground_state, relaxation_time,
                          relaxation_time_scan, steady_state, steady_states)
from .spectral import approx_im_eigenvalues, decompose, inner_branch_frequency
from .analytics import (coherence_rho12_eit, coherence_rho12_weak_probe,
                        coherence_rho13_eia, eia_effective, eia_peak_positions, saturation)
from .spectra import (ScanGrid, estimate_mw_rabi, find_peaks, scan_absorption,
                      visibility)
from .doppler import DopplerParams, doppler_average_scan, velocity_quadrature
from .fluorescence import (correlation_series, peak_spacing_vs_mw, stationary_spectrum,
                           time_dependent_spectrum)

__version__ = "0.1.0"
