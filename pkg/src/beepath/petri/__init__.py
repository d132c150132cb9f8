from .net import (
    FiringError,
    FiringSequence,
    PetriNet,
    StateBudgetExceeded,
    enabled,
    enumerate_complete_traces,
    fire,
    replay,
)
from .translate import NetFragment, fragment_net, translate_fragment_pn, translate_spec_pn

__all__ = [
    "FiringError",
    "FiringSequence",
    "NetFragment",
    "PetriNet",
    "StateBudgetExceeded",
    "enabled",
    "enumerate_complete_traces",
    "fire",
    "fragment_net",
    "replay",
    "translate_fragment_pn",
    "translate_spec_pn",
]
