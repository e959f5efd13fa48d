"""Construction, verification and exhaustive search of 1-cross intersecting set pair systems."""

__version__ = "0.1.0"

from .core import (
    A_SIDE,
    B_SIDE,
    CanonicalForm,
    ContradictionError,
    Element,
    InvalidArgumentError,
    ResourceLimitError,
    SetPair,
    SetPairSystem,
    avoiding_indices,
    binomial,
    canonical_form,
    is_cross_intersecting,
    is_one_cross_intersecting,
    pair_weight,
    remove,
    restrict,
    safe_removal,
    sigma,
)
from .constructions import (
    CompositionSpec,
    bollobas_family,
    compose,
    figure1_fixture,
    five_cycle,
    power_construction,
    singleton_swap,
    triangle,
)
