"""
核心计算模块
"""

from .errors import (
    DegenerateDenominator,
    DegenerateShape,
    InvalidMasses,
    InvalidShape,
    InvalidTranslation,
    NoPositiveEigenvector,
    NonPositiveNu,
    NoRoot,
    RepulsivePotential,
    RotatorError,
    RotatorRejected,
    SingularPotential,
    SingularState,
    StepFailure,
)
from .geometry import Configuration, Masses, Shape, triangle_feasible, temporal_placement
from .inertia import build_I_temporal, build_J, characteristic_polynomial, eigen_decompose, shape_to_configuration
from .potentials import CotangentPotential, HarmonicTestPotential, get_potential
from .rotator import (
    Classification,
    RotatorVerdict,
    check_rotator,
    gamma_identity_residual,
    hemisphere_and_sign_conditions,
    reduced_equation_residuals,
)
from .families import (
    FamilyBranch,
    FamilyTracer,
    count_two_equal_mass_solutions,
    q_function,
    solve_equal_mass_isosceles,
    solve_two_equal_mass,
    special_points,
    symmetry_map,
)
from .dynamics import State, angular_momentum, equations_of_motion, integrate, verify_relative_equilibrium

__all__ = [
    "RotatorError",
    "InvalidMasses",
    "InvalidShape",
    "DegenerateShape",
    "SingularPotential",
    "RepulsivePotential",
    "NoPositiveEigenvector",
    "InvalidTranslation",
    "NoRoot",
    "DegenerateDenominator",
    "NonPositiveNu",
    "RotatorRejected",
    "SingularState",
    "StepFailure",
    "Configuration",
    "Masses",
    "Shape",
    "triangle_feasible",
    "temporal_placement",
    "build_I_temporal",
    "build_J",
    "characteristic_polynomial",
    "eigen_decompose",
    "shape_to_configuration",
    "CotangentPotential",
    "HarmonicTestPotential",
    "get_potential",
    "Classification",
    "RotatorVerdict",
    "check_rotator",
    "gamma_identity_residual",
    "hemisphere_and_sign_conditions",
    "reduced_equation_residuals",
    "FamilyBranch",
    "FamilyTracer",
    "count_two_equal_mass_solutions",
    "q_function",
    "solve_equal_mass_isosceles",
    "solve_two_equal_mass",
    "special_points",
    "symmetry_map",
    "State",
    "angular_momentum",
    "equations_of_motion",
    "integrate",
    "verify_relative_equilibrium",
]
