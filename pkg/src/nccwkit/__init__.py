"""Exact-arithmetic toolkit for 1-dimensional NCCW complexes.

Modules: intlinalg (integer linear algebra), nccw (complexes, moves,
K-theory), reduction (certified reduction to pure multiplicities), cuntz
(rank-data Cuntz-semigroup model), cu_tilde (formal differences), gallery
(worked examples), jsonio (canonical JSON codecs), suite (numbered
acceptance checks), cli (batch front end).
"""

__all__ = [
    "cli",
    "cu_tilde",
    "cuntz",
    "gallery",
    "intlinalg",
    "jsonio",
    "nccw",
    "reduction",
    "suite",
]
