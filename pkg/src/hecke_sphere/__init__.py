"""Hecke-Laplace eigenform experiments on the 3-sphere via integral quaternions."""

from .gon import (
    Box,
    CountRecord,
    CylinderSpec,
    a_of_x,
    dyadic_class_count,
    fit_constant,
    in_cylinder_class,
    minkowski_sandwich,
    product_bound_check,
    shell_class_count,
    successive_minima,
)
from .hecke import (
    DegeneracyError,
    EigenSpace,
    HeckeMatrix,
    SpectralDecomposition,
    decompose,
    hecke_matrix,
    hecke_matrix_float,
    hecke_relations_check,
    joint_eigenspaces,
    selfadjoint_check,
    t1_vanishing,
)
from .moments import MomentReport, growth_fit, moment_sweep, pretrace_residual, sphere_grid
from .poly import HarmonicBasis, Poly4, fischer_dot, harmonic_basis, sphere_integral
from .quat import CapacityError, NormShell, Quaternion, enumerate_shell, m1_profile, r4_count
from .theta import (
    ModularityResult,
    PeterssonEstimate,
    ThetaCoefficient,
    coset_coefficient,
    modularity_check,
    petersson_estimate,
    spectral_coefficient,
    theta_coefficient,
)
from .zonal import chebyshev_U, chebyshev_U_vec, kernel_cap, pretrace_kernel

__version__ = "0.1.0"
