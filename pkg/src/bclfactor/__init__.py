"""Dilation and degree-one factorization of commuting contraction pairs."""

from .bcl import BCLDilationBundle, BCLTriple, bcl_pencils, construct_bcl, dilate_pair, make_triple
from .dilation import DilationMap, build_pi, build_pi_v, choose_truncation_degree
from .factor import FactorizationResult, pull_back, verify_factorization
from .hardy import HardyVector, LinearPencil
from .opcore import DefectData, defect, extend_to_unitary, psqrt
from .random_pairs import random_commuting_pair
from .variety import BivariatePolynomial, sample_boundary_variety, vn_certificate

__all__ = [
    "BCLDilationBundle",
    "BCLTriple",
    "BivariatePolynomial",
    "DefectData",
    "DilationMap",
    "FactorizationResult",
    "HardyVector",
    "LinearPencil",
    "bcl_pencils",
    "build_pi",
    "build_pi_v",
    "choose_truncation_degree",
    "construct_bcl",
    "defect",
    "dilate_pair",
    "extend_to_unitary",
    "make_triple",
    "psqrt",
    "pull_back",
    "random_commuting_pair",
    "sample_boundary_variety",
    "verify_factorization",
    "vn_certificate",
]

__version__ = "0.1.0"
