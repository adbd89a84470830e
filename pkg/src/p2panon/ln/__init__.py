from .anonymity import (MATCH_MODES, LnObservation, PathSet, build_path_set, ln_likelihoods,
                        ln_posterior, observations_from_route, route_matches)
from .experiment import ln_topology, run_ln_experiment, run_ln_once
from .routing import (DEFAULT_AMOUNT, DEFAULT_RF, CostModel, Route, best_k_paths, best_path,
                      edge_cost, path_cost, shortest_path_tree)
