"""Channelized biphoton source, partial-BSM and memory-loading simulator for ZALM links."""
from .bsm import (BsmKernels, KernelEigensystem, bsm_fidelity_and_error, bsm_herald_probability,
                  bsm_heralding_efficiency, bsm_kernels, bsm_purity, kernel_eigensystem)
from .errors import (ChannelRangeError, DegenerateInputError, DomainError, NormalizationError,
                     ShapeError, ZalmError)
from .grid import QuadratureGrid, channel_grid, integrate_2d, signal_window
from .linkbudget import (EfficiencyBudget, channel_rate, cross_channel_probability,
                         guard_band_channels, interference_ratio, total_rate, two_pair_probability)
from .memory import (CoincidenceClass, ConstantReflectivities, MemoryParams, ModeConversionParams,
                     broadband_fidelities, cavity_efficiency, class_fidelities, cooperativity_pi,
                     ideal_loading_fidelity, mode_convert_phi, narrowband_fidelities, reflectivity)
from .metrics import (PhiKernel, heralding_efficiency, heralding_probability, joint_probability,
                      phi_kernel, purity_direct)
from .pipeline import RunConfig, emit, preset, run, sweep
from .schmidt import SchmidtDecomposition, decompose, purity_from_schmidt, schmidt_number
from .source import (Biphoton, ChannelPlan, SourceParams, SpectralAmplitude2D, channelize,
                     gaussian_wavefunction, generic_wavefunction)

__version__ = "0.1.0"
