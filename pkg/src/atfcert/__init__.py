"""Exact rational certificates for almost toric fibrations of CP^2.

Modules:

* :mod:`atfcert.markov` Markov triples and their tree
* :mod:`atfcert.affine` exact integral affine geometry
* :mod:`atfcert.polytope` weighted projective triangles P(a^2, b^2, c^2)
* :mod:`atfcert.atf` base diagrams, nodal trades, slides and mutations
* :mod:`atfcert.packing` triangle and diamond placements with a verifier
* :mod:`atfcert.momentmap` floating-point moment map checks
* :mod:`atfcert.serialize`, :mod:`atfcert.svg`, :mod:`atfcert.cli` documents, drawings, command line
"""

from .markov import MarkovError, MarkovTriple, enumerate_triples, mutate
from .atf import BaseDiagram, mutate_diagram, seed_diagram
from .packing import capacity_report, verify, verify_packing

__version__ = "0.1.0"

__all__ = [
    "BaseDiagram",
    "MarkovError",
    "MarkovTriple",
    "capacity_report",
    "enumerate_triples",
    "mutate",
    "mutate_diagram",
    "seed_diagram",
    "verify",
    "verify_packing",
]
