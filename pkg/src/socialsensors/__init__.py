"""Social sensors in contact networks: FOS / EV / NEV sensor selection, network SIR
simulation, peak and lead-time analysis."""

__version__ = "0.1.0"

from .epidemic import EpidemicParams, NodeState, Seeding, SimulationTrace, group_incidence, simulate, step
from .graph import (
    DegreeHistogram,
    Graph,
    degree_distribution,
    from_edge_list,
    generate_chung_lu,
    generate_er,
    is_bipartite,
    largest_connected_component,
    power_law_weights,
    read_edge_list,
    write_edge_list,
)
from .sensors import (
    SensorSet,
    ev_select,
    fos_inclusion_probability,
    fos_select,
    matched_sensor_suite,
    nev_select,
)
from .spectral import CentralityScores, SpectralDiagnostic, ev_centrality, growth_diagnostic, nev_centrality

__all__ = [
    "CentralityScores",
    "DegreeHistogram",
    "EpidemicParams",
    "Graph",
    "NodeState",
    "Seeding",
    "SensorSet",
    "SimulationTrace",
    "SpectralDiagnostic",
    "degree_distribution",
    "ev_centrality",
    "ev_select",
    "fos_inclusion_probability",
    "fos_select",
    "from_edge_list",
    "generate_chung_lu",
    "generate_er",
    "group_incidence",
    "growth_diagnostic",
    "is_bipartite",
    "largest_connected_component",
    "matched_sensor_suite",
    "nev_centrality",
    "nev_select",
    "power_law_weights",
    "read_edge_list",
    "simulate",
    "step",
    "write_edge_list",
]
