"""Symbolic-numeric toolkit for an isochronous quadratic-damping oscillator
family: classical structure checks (Lagrangian, point symmetries, last
multiplier, isochrony) and the Noether-preserving quantization with
closed-form spectra, ladder operators, and an independent grid eigensolver.
"""

from .classical import Trajectory, estimate_period, hidden_linearity_residual, integrate_orbit
from .expr import Expression, differentiate, evaluate, parse, simplify, to_text
from .model import (LienardModel, build_model, energy, jacobi_last_multiplier, lagrangian,
                    ode_rhs, potential, to_isotonic)
from .polyspec import (QuasiPolynomial, assoc_laguerre, gamma_fn, hermite, inner_product,
                       quasi_inner)
from .quantum import (DiscreteHamiltonian, Spectrum, StationaryState, apply_characteristic,
                      build_hamiltonian, closed_form_eigenfunction, closed_form_eigenvalue,
                      compute_spectrum, eigenvector, ladder_generate, lowest_eigenvalues,
                      pde_generators, pde_residual, vonroos_residual)
from .symmetry import (Generator, algebra_closure_check, delta78, lie_symmetry_residual,
                       noether_classify, standard_generators)

__version__ = "0.1.0"

__all__ = [
    "Expression", "parse", "evaluate", "differentiate", "simplify", "to_text",
    "LienardModel", "build_model", "ode_rhs", "lagrangian", "potential", "energy",
    "jacobi_last_multiplier", "to_isotonic",
    "Trajectory", "integrate_orbit", "estimate_period", "hidden_linearity_residual",
    "Generator", "standard_generators", "lie_symmetry_residual", "noether_classify",
    "delta78", "algebra_closure_check",
    "QuasiPolynomial", "hermite", "assoc_laguerre", "gamma_fn", "inner_product", "quasi_inner",
    "StationaryState", "DiscreteHamiltonian", "Spectrum", "closed_form_eigenvalue",
    "closed_form_eigenfunction", "build_hamiltonian", "lowest_eigenvalues", "eigenvector",
    "compute_spectrum", "pde_residual", "pde_generators", "apply_characteristic",
    "ladder_generate", "vonroos_residual",
    "__version__",
]
