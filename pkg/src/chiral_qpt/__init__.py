"""Exact chirality transition of the 2D Dirac oscillator in a magnetic field.

The closed-form solution (spectra, squeezed eigenstates, order parameter,
fluctuations, Mandel statistics, entanglement) is paired with a brute-force
truncated-Fock exact-diagonalization oracle that checks it.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ChiralQPTError,
    ConfigError,
    CriticalPointSingularity,
    CutoffCeiling,
    InsufficientGrid,
    InvalidParams,
    InvalidWeights,
    MixedSides,
    NonHermitianInput,
    SolverFailure,
    TailTooHeavy,
    TruncationLeakage,
    UnnormalizedState,
    ZeroSqueeze,
)
from .fock import FockBasis  # noqa: E402
from .model import (  # noqa: E402
    ModelParams,
    Regime,
    analytic_energy,
    analytic_levels,
    derive_couplings,
    energy_gap,
    fit_gap_exponent,
    ground_energy,
)
from .observables import mandel_q, momentum_fluctuation, order_parameter, position_fluctuation  # noqa: E402
from .su11 import StateLabel, build_eigenstate, coherent_coefficients, describe_eigenstate  # noqa: E402
