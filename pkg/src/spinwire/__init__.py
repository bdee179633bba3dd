"""Superintegrable planar spin-orbit models: solvers and verification.

Constructs the anti-diagonal interaction family mu(s, n) for arbitrary
spin, solves the coupled-channel radial bound-state problem at fixed J_z,
and verifies the model's claimed structure numerically: the conserved
integrals A_i, the closed-form spectrum, cross-sector degeneracy, the
Casimir relation, and the ladder action between sectors.
"""

from .spin_algebra import SpinRep, build_spin_rep
from .interaction import (
    BetaSpec,
    ConditionReport,
    InteractionSpec,
    MuMatrix,
    betas_to_alphas,
    check_conditions,
    mu_difference,
    mu_from_alphas,
    mu_from_betas,
    mu_squared_diagonal,
    preset,
)
from .radial_solver import (
    DegeneracyReport,
    Multiplet,
    RadialGrid,
    Sector,
    SectorHamiltonian,
    Spectrum,
    assemble,
    build_sector,
    default_eps_cont,
    default_r_max,
    degeneracy_report,
    predicted_energy,
    predicted_spectrum,
    solve_bound,
)
from .operator_lattice import (
    COMMUTATOR_PAIRS,
    CasimirReport,
    CommutatorReport,
    LadderReport,
    LadderStep,
    PacketRecipe,
    PlaneGrid,
    SpinorField,
    apply_A,
    apply_H,
    apply_Jz,
    apply_p,
    casimir_check,
    commutator_residual,
    fit_commutator_constant,
    ladder_check,
    ladder_grid,
    lift_to_plane,
    make_gaussian_packet,
)

__version__ = "0.1.0"

__all__ = [
    "SpinRep",
    "build_spin_rep",
    "BetaSpec",
    "ConditionReport",
    "InteractionSpec",
    "MuMatrix",
    "betas_to_alphas",
    "check_conditions",
    "mu_difference",
    "mu_from_alphas",
    "mu_from_betas",
    "mu_squared_diagonal",
    "preset",
    "DegeneracyReport",
    "Multiplet",
    "RadialGrid",
    "Sector",
    "SectorHamiltonian",
    "Spectrum",
    "assemble",
    "build_sector",
    "default_eps_cont",
    "default_r_max",
    "degeneracy_report",
    "predicted_energy",
    "predicted_spectrum",
    "solve_bound",
    "COMMUTATOR_PAIRS",
    "CasimirReport",
    "CommutatorReport",
    "LadderReport",
    "LadderStep",
    "PacketRecipe",
    "PlaneGrid",
    "SpinorField",
    "apply_A",
    "apply_H",
    "apply_Jz",
    "apply_p",
    "casimir_check",
    "commutator_residual",
    "fit_commutator_constant",
    "ladder_check",
    "ladder_grid",
    "lift_to_plane",
    "make_gaussian_packet",
    "__version__",
]
