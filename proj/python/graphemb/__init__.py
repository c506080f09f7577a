"""Graph embeddings with tensor and Hadamard binding."""

from ._graphemb import (
    BindingScheme,
    Codebook,
    CodeVector,
    EdgeEmbedding,
    GraphEmbedding,
    GraphembError,
    GraphSpec,
    bind,
    bind_via_fft,
    capacity_memory_ratio,
    cleanup,
    compose_edges,
    default_workers,
    dot,
    edge_compose,
    edge_query,
    embed_graph,
    max_connectivity,
    parse_edge_list,
    parse_k_grid,
    parse_sweep_csv,
    read_edge_list,
    recovery_lower_bound,
    render_svg,
    run_sweep,
    sample_code,
    similarity,
    snr_full_expansion,
    snr_theory,
    theoretical_dot_moments,
    theory_report_json,
    unbind,
    vertex_query,
    verify_theory,
)

__all__ = [name for name in dir() if not name.startswith("_")]
