"""Entropy growth under doubly stochastic quantum evolution.

The package proves by computation that the expectation of the
level-counting entropy ln(N + 1/2) can only grow when decreasing
populations evolve through any doubly stochastic transition matrix, and
works the exactly solvable driven harmonic oscillator end to end:
classical phase-space kernel, Charlier-polynomial transition
probabilities, an independent Schrodinger-propagator oracle, and a CLI
that emits the reference figure data as CSV.
"""

from . import classical, majorization, quadrature, quantum, schrodinger, verify
from .majorization import (
    DoublyStochasticError,
    EntropyReport,
    ProbabilityVector,
    TransitionMatrix,
    check_doubly_stochastic,
    diagonal_entropy,
    entropy_change,
    evolve_distribution,
    random_unistochastic,
    von_neumann_entropy,
)

__version__ = "0.1.0"

__all__ = [
    "classical",
    "majorization",
    "quadrature",
    "quantum",
    "schrodinger",
    "verify",
    "DoublyStochasticError",
    "EntropyReport",
    "ProbabilityVector",
    "TransitionMatrix",
    "check_doubly_stochastic",
    "diagonal_entropy",
    "entropy_change",
    "evolve_distribution",
    "random_unistochastic",
    "von_neumann_entropy",
    "__version__",
]
