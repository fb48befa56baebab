"""Command-line surface: point enumeration, the approximation audit harness,
and the proof-step inequality checks."""

from .audit import AuditConfig, AuditReport, AuditRow, audit
from .points import enumerate_points
from .proofcheck import ProofCheckConfig, ProofCheckReport, proof_inequality_report

__all__ = [
    "AuditConfig",
    "AuditReport",
    "AuditRow",
    "audit",
    "enumerate_points",
    "ProofCheckConfig",
    "ProofCheckReport",
    "proof_inequality_report",
]
