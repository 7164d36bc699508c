from .kernel import KernelParams, vqe_kernel, gram, feature_map, fourier_basis, cosine_sums
from .trig import TrigPoly1D, fit_trig_1d, minimize_trig_1d
from .model import (
    Dataset, GPModel, posterior, core_contains, subspace_in_core, line_points,
    line_variance_profile, minimize_gp_on_line, gamma_grid, loo_gamma_search, compress,
    pivot_observations,
)
from .theory import equidistant_shifts, uniform_posterior_variance, asymptotic_variance_ratio, regularized_dft

__all__ = [
    "KernelParams", "vqe_kernel", "gram", "feature_map", "fourier_basis", "cosine_sums",
    "TrigPoly1D", "fit_trig_1d", "minimize_trig_1d",
    "Dataset", "GPModel", "posterior", "core_contains", "subspace_in_core", "line_points",
    "line_variance_profile", "minimize_gp_on_line", "gamma_grid", "loo_gamma_search", "compress",
    "pivot_observations",
    "equidistant_shifts", "uniform_posterior_variance", "asymptotic_variance_ratio", "regularized_dft",
]
