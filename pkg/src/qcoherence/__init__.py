"""Coherence information of a discrete observable in a quantum state."""

from .coherence import (
    coherence_chain,
    coherence_information,
    entropy_decomposition,
    incompatible_reduction,
    interference_witness,
    skew_information,
    uncertainty,
)
from .entropy import quantum_rel_entropy, shannon, von_neumann
from .numlin import ValidationError
from .qobj import (
    DensityMatrix,
    DiscreteObservable,
    Partition,
    UndetectableOutcome,
    coarsen,
    luders_state,
    make_density,
    make_observable,
)

__version__ = "0.1.0"
