"""Simulator for history-driven proactive entanglement distribution and
connection setup in quantum networks."""

from .baseline import (
    BaselineOutcome,
    CostComparison,
    compare_costs,
    ietf_reactive_setup,
    shortest_physical_path,
)
from .experiments import (
    ExperimentConfig,
    MetricsRow,
    run_multi_connection_sweep,
    run_replicate,
    run_single_connection_sweep,
    run_sparsity_comparison,
    summarize,
)
from .proactive import (
    EntanglementOverlay,
    HcStats,
    build_proactive_overlay,
    hc_stats,
    mean_hc,
    select_proactive_partner,
    squared_deviation,
    swap_closure,
)
from .protocol import (
    AttemptOutcome,
    ConnectionResult,
    Decision,
    SetupAttemptState,
    attempt_connection,
    next_hop,
    overlay_degree,
    record_data_transfer,
    setup_connection,
    swap_cascade,
)
from .sampledata import ten_node_demo
from .topology import (
    GraphFormatError,
    PhysicalLink,
    QNetGraph,
    SparsityError,
    degree,
    generate_graph,
    load_graph,
    save_graph,
)

__version__ = "0.1.0"
