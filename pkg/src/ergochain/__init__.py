"""Ergotropy and bound energy of blocks of critical 1D quantum chains.

Exact free-fermion machinery, small-chain exact diagonalization, closed-form
finite-size predictions, and fits tying the bound energy of a block to its
entanglement entropy.
"""

__version__ = "0.1.0"

from .cftpredict import CftConstants
from .errors import (ConvergenceError, DegeneracyError, FitError, InputError,
                     ParseError, SizeError)
from .fitkit import FitParams, Series, fit_log_gamma, linear_fit, shared_fit
from .freefermion import (ChainSpec, EnergyDecomposition, SpectralData,
                          block_energies, block_mode_energies, block_spectral,
                          chain_state, correlation_matrix, decompose,
                          evolve_block, ground_energy, manybody_passive_oracle)
from .manybody import (GroundState, InteractionCheck, ManyBodyDecomposition,
                       SchmidtData, SectorBasis, SpinModel, apply_hamiltonian,
                       decomposition, ground_state, interaction_check,
                       schmidt_spectrum, subsystem_spectrum)
from .numkern import EigenSystem, LinearOperator, eigh, lanczos_ground, schmidt_values
from .records import ScanRecord, parse_records, write_records

__all__ = [
    "CftConstants", "ChainSpec", "ConvergenceError", "DegeneracyError",
    "EigenSystem", "EnergyDecomposition", "FitError", "FitParams",
    "GroundState", "InputError", "InteractionCheck", "LinearOperator",
    "ManyBodyDecomposition", "ParseError", "ScanRecord", "SchmidtData",
    "SectorBasis", "Series", "SizeError", "SpectralData", "SpinModel",
    "apply_hamiltonian", "block_energies", "block_mode_energies",
    "block_spectral", "chain_state", "correlation_matrix", "decompose",
    "decomposition", "eigh", "evolve_block", "fit_log_gamma", "ground_energy",
    "ground_state", "interaction_check", "lanczos_ground", "linear_fit",
    "manybody_passive_oracle", "parse_records", "schmidt_spectrum",
    "schmidt_values", "shared_fit", "subsystem_spectrum", "write_records",
]
