"""Alternating cycles through the middle layers of a subspace lattice.

Builds Hamiltonian cycles on the k- and (k+1)-dimensional subspaces of
GF(q)^n (n = 2k + 1, k in {1, 2}) ordered by inclusion, emits them as
JSON certificates, and re-checks those certificates with an independent
rank-based verifier.
"""

from .builder import (CycleCertificate, build_cycle_k1, build_cycle_k2,
                      find_class_path)
from .certio import dumps, load, loads, parse_dict, write
from .errors import (CertificateFormatError, ConstructionError,
                     DegenerateSpanError, FieldSizeError, InvariantViolation,
                     NonPrimitiveError, UsageError)
from .fields import FieldTable, build_field, field_for_q
from .geometry import Subspace, gaussian_coefficient, span_pair, span_triple
from .orbits import ClassTable, class_table, enumerate_classes
from .verifier import run_property_suite, verify_certificate

__version__ = "0.1.0"

__all__ = [
    "CycleCertificate", "build_cycle_k1", "build_cycle_k2",
    "find_class_path", "dumps", "load", "loads", "parse_dict", "write",
    "CertificateFormatError", "ConstructionError", "DegenerateSpanError",
    "FieldSizeError", "InvariantViolation", "NonPrimitiveError",
    "UsageError", "FieldTable", "build_field", "field_for_q", "Subspace",
    "gaussian_coefficient", "span_pair", "span_triple", "ClassTable",
    "class_table", "enumerate_classes", "run_property_suite",
    "verify_certificate", "__version__",
]
