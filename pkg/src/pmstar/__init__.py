"""Peschl-Minda derivatives and the Wick star product on Omega = {zw != 1}."""
from .gaussian import GaussianRational
from .geometry import (Domain, ProjectiveCoord, ExtPoint2, MoebiusMap, point, in_domain, apply_map,
                       compose_maps, inverse_map, decompose_map, recompose_map, invariance_prefactor,
                       identity_map, flip_map, phi_map, dilation_map, inversion_map, swap_map)
from .algebra import (OmegaFunction, parse_expression, parse_function, format_function, evaluate,
                      arithmetic, wirtinger_derivative, pullback_transform, moebius_pullback,
                      homogeneity_degree)
from .jets import Jet2, taylor_jet, compose_with_phi, OmegaProvider, FunctionProvider, PullbackProvider
from .operators import (PMethod, pm_derive, pm_tilde, pure_z, pure_w, laplace_poly, diag_poly,
                        kernel_basis, basis_function, check_invariance)
from .star import (StarParams, StarResult, AsymptoticSeries, falling_factorial, stirling2, alpha_for,
                   bidiff, star_eval, star_eval_jets, asym_coeffs, poisson_bracket,
                   check_star_invariance, truncated_star, check_associativity)
from .restrict import (SmoothPolyFunction, classical_derive, diagonal_restrict, star_disk,
                       star_sphere, hat_d_iterate)
from .verify import verify_suite
from .errors import *  # noqa: F401,F403

__version__ = "0.1.0"
