"""Zero modes of Pauli and Dirac operators: field families, identities, sharp constants."""

from . import clifford, fields, identities, integralops, norms, spectral
from .clifford import CliffordRep, gamma_rep
from .exceptions import ZeroModeError
from .fields import FieldFamily, build_family

__all__ = ["clifford", "fields", "identities", "integralops", "norms", "spectral",
           "CliffordRep", "gamma_rep", "ZeroModeError", "FieldFamily", "build_family"]
__version__ = "0.1.0"
