"""Authentication capacity regions and small-blocklength authentication codes.

Computes the achievable (message rate, authentication rate, key rate) region
of a discrete memoryless channel pair with an interloping adversary, and
constructs, transforms, and attacks concrete codes to verify the theory by
exact enumeration and Monte Carlo simulation.
"""

from .channels import ChannelPair, DiscreteChannel, JointLaw, Pmf, bsc, product_extension, push_joint
from .codes import (
    CodeParams,
    TabularCode,
    TransformSpec,
    check_lai_strategy,
    check_mapping_spread,
    key_expansion_transform,
    key_guess_success,
    lai_toy_code,
    message_error,
    simmons_noiseless_code,
)
from .errors import AuthcapError, ConvergenceError, SizeCapError, ValidationError
from .measures import (
    binary_entropy,
    channel_capacity,
    conditional_entropy,
    entropy,
    mutual_information,
)
from .region import (
    AuxiliaryChain,
    RateTriple,
    RegionConstraints,
    SearchParams,
    boundary_sweep,
    bsc_region_constraints,
    evaluate_constraints,
    fm_equivalence_check,
    is_achievable,
    lai_inner_constraints,
    satisfies_lai_region,
    satisfies_region,
    simmons_shift,
)

__version__ = "0.1.0"

__all__ = [
    "AuthcapError",
    "AuxiliaryChain",
    "ChannelPair",
    "CodeParams",
    "ConvergenceError",
    "DiscreteChannel",
    "JointLaw",
    "Pmf",
    "RateTriple",
    "RegionConstraints",
    "SearchParams",
    "SizeCapError",
    "TabularCode",
    "TransformSpec",
    "ValidationError",
    "binary_entropy",
    "boundary_sweep",
    "bsc",
    "bsc_region_constraints",
    "channel_capacity",
    "check_lai_strategy",
    "check_mapping_spread",
    "conditional_entropy",
    "entropy",
    "evaluate_constraints",
    "fm_equivalence_check",
    "is_achievable",
    "key_expansion_transform",
    "key_guess_success",
    "lai_inner_constraints",
    "lai_toy_code",
    "message_error",
    "mutual_information",
    "product_extension",
    "push_joint",
    "satisfies_lai_region",
    "satisfies_region",
    "simmons_noiseless_code",
    "simmons_shift",
]
