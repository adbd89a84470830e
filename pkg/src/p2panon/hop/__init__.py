from .dandelion import dandelion_likelihoods, dandelion_posterior, partition_of
from .dandelion_pp import (dpp_forward_probability, dpp_likelihoods, dpp_posterior,
                           enumerate_stem_paths, path_contribution)
from .stem import (PathEnumerationBounds, StemObservation, StemOutcome, simulate_stem_phase,
                   stem_walk)
from .experiment import run_hop_by_hop_experiment, run_hop_by_hop_once
