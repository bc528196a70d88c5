"""Permissioned vector commitments and permissioned proofs of liabilities."""

from .curve import use_backend
from .srs import SRS, setup
from .pvc import Auditor, EpochBundle, Provider, ProtocolError, SignedUpdate, User

__all__ = ["Auditor", "EpochBundle", "Provider", "ProtocolError", "SRS", "SignedUpdate",
           "User", "setup", "use_backend"]
