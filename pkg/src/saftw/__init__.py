"""Special affine Fourier transform (SAFT) and its wavelet transform on sampled signals."""
from .errors import *  # noqa: F401,F403
from .numerics import FrequencyGrid, SampledSignal, ScaleGrid, Spectrum
from .params import (SaftMatrix, fourier, fractional, fresnel, inverse_matrix, kernel_constant,
                     parse_matrix, reduction_presets, validate)
from .saft import isaft, saft, saft_direct, saft_fast
from .convolution import convolution_theorem_residual, saft_convolve
from .signals import MotherWavelet, generate
from .nsawt import (AdmissibilityReport, Scalogram, admissibility, admissibility_for,
                    capital_psi, daughter_wavelet, moyal_residual, nsawt_direct, nsawt_invert,
                    nsawt_spectral, range_projection_residual, reproducing_kernel)
from .localization import WindowStats, daughter_window_law, q_factor, safd_window, tf_box, window_stats
from .uncertainty import (InequalityReport, generalized_saft, heisenberg_nsawt, heisenberg_saft,
                          pitt_saft)

__version__ = "0.1.0"
