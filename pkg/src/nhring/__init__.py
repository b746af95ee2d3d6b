"""Quantum particle on a magnetic-flux-threaded ring with a complex potential.

All quantities are dimensionless: energies in units of hbar^2/(2 m R^2),
time rescaled accordingly, flux in units of the flux quantum.  The package
covers static complex band structures and exceptional points versus flux,
time-dependent multilevel Landau-Zener dynamics under a linearly ramped
flux, flux-reversal asymmetry, and the delayed-transparency protocol.
"""

__version__ = "0.1.0"

from .errors import (
    BoundaryMassExceeded,
    BracketError,
    ConfigError,
    InvalidParameterError,
    NhringError,
    NumericalError,
    SolverFailure,
    StepUnderflow,
)
from .model import (
    FluxProgram,
    ModeWindow,
    Picture,
    RingPotential,
    WaveState,
    chain_couplings,
    free_energy,
    is_pt_symmetric,
    make_reference_potential,
    sample_potential,
)
from .spectrum import (
    BandStructure,
    EigenSolution,
    EPReport,
    HamiltonianMatrix,
    band_sweep,
    build_hamiltonian,
    eigensolve,
    estimate_alpha_c,
    locate_exceptional_points,
    verify_window_convergence,
)
from .dynamics import (
    PropagatorConfig,
    Trajectory,
    auto_window,
    delta_state,
    evolve,
    from_interaction_picture,
    gaussian_state,
    reconstruct_wavefunction,
    to_interaction_picture,
    triangular_oracle,
)
from .lz import (
    GaugeDirection,
    LZEvent,
    TransparencyPlan,
    asymmetry_residual,
    asymptotic_amplitudes,
    crossing_times,
    gauge_map,
    lz_probability,
    lz_transition_probability,
    plan_transparency,
    two_level_lz,
)

__all__ = [name for name in dir() if not name.startswith("_")]
