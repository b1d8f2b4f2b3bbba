"""Contextual vulnerability scoring over a two-layer dependency graph.

The package re-exports the compiled core. Typical flow: parse or generate a
topology, mine software and network dependencies, assemble the dependency
graph, rank node importances, match a vulnerability feed, and score it;
``run_pipeline`` strings all of that together from one config.
"""

from _ctxvuln import (  # noqa: F401
    Aggregator,
    ArgumentError,
    AssociationRule,
    Cdg,
    CdgEdge,
    CdgNode,
    DirectedGraph,
    DroppedEdge,
    EdgeKind,
    FixPlan,
    FixPlanResult,
    FlowRecord,
    ImportanceTriple,
    Layer,
    LogEvent,
    MatchReport,
    NetworkDependency,
    NodeKind,
    ParseError,
    PipelineConfig,
    PipelineResult,
    PlanComparison,
    Proto,
    Projection,
    RankConfig,
    ReportFormat,
    ServiceEndpoint,
    SoftwareDependency,
    TopoFormat,
    TopologyGraph,
    TopologyLink,
    Transaction,
    ValidationError,
    VulnMatch,
    VulnerabilityRecord,
    VulnerabilityScore,
    Weights,
    aggregator_from_string,
    apriori_rules,
    base_score_plan,
    build_cdg,
    compare_plans,
    compute_importances,
    contextual_plan,
    extract_events,
    generate_bcube,
    generate_fat_tree,
    generate_topology,
    generator_models,
    group_transactions,
    load_pipeline_config,
    load_vulndb,
    match_vulnerabilities,
    mine_network_dependencies,
    mine_software_dependencies,
    pagerank,
    parse_cdg,
    parse_endpoint_map,
    parse_events,
    parse_flows,
    parse_host_map,
    parse_pipeline_config,
    parse_report,
    parse_topology,
    project,
    render_report,
    render_steps_csv,
    run_pipeline,
    score_vulnerabilities,
    serialize_cdg,
    serialize_topology,
    serialize_vulndb,
    simulate_fix,
    software_node_id,
    validate_topology,
)

__version__ = "1.0.0"
