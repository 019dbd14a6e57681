"""Capacity regions of the two-user asynchronous MAC with faster-than-Nyquist signalling."""

from .errors import (BudgetExceeded, CapRegionError, DegenerateMatrix, NotPSD,
                     OptimizerStalled, PreconditionViolated, SpectrumOnDeadBand)
from .pulse import PulseSpec, cross_spectrum, folded_spectrum, rc_autocorr, rc_spectrum
from .rates_freq import SpectralAllocation, orthogonal_special_case, rate_integrals, spectral_grid
from .rates_time import (ModeAllocation, RateTriple, iid_baseline_sum_rate, power_used,
                         rate_triple_from_modes, single_user_rate, sum_rate_logdet)
from .region import (RateRegion, RegionRequest, comparison_suite, convergence_study,
                     tau_sweep, trace_boundary)
from .toeplitz import (ChannelSpec, InterferenceMatrices, build_interference, dft_eigen_residual,
                       generating_function, hermitian_sqrt, szego_check)

__version__ = "0.1.0"
