"""Stabilizing consensus over time-varying digraphs with MinMax algorithms."""

from .digraph import (
    Digraph,
    ParseError,
    SizeMismatchError,
    central_roots,
    condensation_sources,
    is_non_split,
    is_rooted,
    parse_digraph,
    product,
    roots,
    strongly_connected_components,
    transitive_closure,
)
from .dynamic_graph import (
    Schedule,
    bounded_reach_check,
    cumulative,
    graph_at,
    integral_at,
    integral_limit,
    is_rooted_with_delay,
    kernel,
    limit_superior,
    min_delay,
    parse_schedule,
    restrict_to_active,
)
from .minmax import (
    INF,
    AgentState,
    CutoffFamily,
    Oracle,
    ValueDomain,
    agent_init,
    agent_round,
    min_agent_round,
)
from .simulator import RunConfig, Simulation, Trace, check_stabilization, run

__version__ = "0.1.0"
