"""Exact algebra of words, quasi-symmetric functions and multiple harmonic sums,
with a floating-point verification harness for multiple zeta value identities."""

from .algebra import NCPoly, TensorPoly, TruncSeries, format_poly, parse_poly
from .words import (Composition, DomainError, ParseError, Word, composition_of_word,
                    parse_composition, parse_word, tau, word_of_composition)
from .shuffle import shuffle
from .qsym import QSymExpr, E, F, M, antipode, convert_basis, phi, phi_inv, psi, star
from .action import C, D_n, dot, kaneko_partial, sigma_t, sigma_t_inv
from .finite_sums import A, S, A_modp, S_modp, chi_p
from .numeric import ApproxValue, mzv, verify, zeta_hat_poly, zeta_poly

__all__ = [
    "NCPoly", "TensorPoly", "TruncSeries", "format_poly", "parse_poly",
    "Composition", "DomainError", "ParseError", "Word", "composition_of_word",
    "parse_composition", "parse_word", "tau", "word_of_composition",
    "shuffle", "QSymExpr", "E", "F", "M", "antipode", "convert_basis", "phi", "phi_inv",
    "psi", "star", "C", "D_n", "dot", "kaneko_partial", "sigma_t", "sigma_t_inv",
    "A", "S", "A_modp", "S_modp", "chi_p", "ApproxValue", "mzv", "verify",
    "zeta_hat_poly", "zeta_poly",
]
