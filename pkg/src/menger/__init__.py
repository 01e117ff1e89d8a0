"""PGM spaces built from crisp kernels, axiom checkers, and an iteration
engine that searches for a point fixed by six maps at once."""

from . import analysis, ddf, fixpoint, maps, pgm_space, tnorm
from .ddf import DDF, dirac, ratio, table
from .fixpoint import Sextuple, build_sequences, check_contraction, proof_chain_monitor, run, uniqueness_probe
from .maps import SelfMap, affine, composite, constant, function_map, identity, table_map
from .pgm_space import FinitePoints, Interval, PerimeterKernel, PGMSpace, TableKernel
from .tnorm import TNorm

__all__ = [
    "analysis", "ddf", "fixpoint", "maps", "pgm_space", "tnorm",
    "DDF", "dirac", "ratio", "table",
    "Sextuple", "build_sequences", "check_contraction", "proof_chain_monitor", "run", "uniqueness_probe",
    "SelfMap", "affine", "composite", "constant", "function_map", "identity", "table_map",
    "FinitePoints", "Interval", "PerimeterKernel", "PGMSpace", "TableKernel",
    "TNorm",
]

__version__ = "0.1.0"
