"""Quantum Paldus transform: construction, simulation and verification toolkit."""

from .combinatorics import (
    AbcTriple,
    ShavittNode,
    StepVector,
    UgaLabel,
    apply_step,
    dim_irrep,
    dimension_identities,
    enumerate_step_vectors,
    step_vector_labels,
    validate_step_vector,
)
from .errors import PaldusError, ValidationError, VerificationError

__version__ = "0.1.0"

__all__ = [
    "AbcTriple",
    "ShavittNode",
    "StepVector",
    "UgaLabel",
    "apply_step",
    "dim_irrep",
    "dimension_identities",
    "enumerate_step_vectors",
    "step_vector_labels",
    "validate_step_vector",
    "PaldusError",
    "ValidationError",
    "VerificationError",
]
