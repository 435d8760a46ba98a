"""Construction and exact verification of plus-type orthogonal group factorizations."""

from .ff import make_field, FieldDescriptor, FieldElt, find_mu, find_lambda
from .quadspace import QuadSpace, DistinguishedVectors
from .grpcore import GroupElt, GroupHandle
from .verifier import ClaimRecord, VerificationReport, run_claim_suite
from .catalog import VerifierEnv, load_desk_catalog

__all__ = [
    "make_field", "FieldDescriptor", "FieldElt", "find_mu", "find_lambda",
    "QuadSpace", "DistinguishedVectors", "GroupElt", "GroupHandle",
    "ClaimRecord", "VerificationReport", "run_claim_suite",
    "VerifierEnv", "load_desk_catalog",
]
