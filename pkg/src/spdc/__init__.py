"""Kernel sparse subspace clustering of SPD matrices."""
from .errors import DegenerateInputError, DimensionError, NumericError, SpdcError, UsageError
from .spd import geodesic_airm, make_spd, spd_exp, spd_log, stein_divergence
from .kernels import KernelSpec, gram
from .solver import SolverConfig, solve
from .clustering import affinity, kmeans, spectral_cluster
from .metrics import accuracy, nmi
from .pipeline import ksscr, run_method
from .synth import SynthSpec, generate

__version__ = "0.1.0"
