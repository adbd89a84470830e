from .generators import (derive_privacy_subgraph, generate_k_regular, generate_line_graph,
                         generate_quasi_4_regular, generate_scale_free_graph,
                         generate_weighted_random_graph)
from .ops import (AdversaryStrategy, adversary_count, assign_adversaries, betweenness_centrality,
                  filter_by_amount, largest_connected_component, weak_components)
from .snapshot import (LoadReport, dump_ln_snapshot, dump_topology, load_ln_snapshot,
                       load_topology, parse_ln_snapshot, topology_document)
from .topology import ChannelPolicy, Edge, NodeRole, Topology, TopologyKind, relabel
