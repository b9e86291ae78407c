"""mvfuse: fuse per-view similarity or distance graphs into one consistent
graph by jointly learning what the views agree and disagree on, then cluster
the fused graph spectrally.

Submodules are imported lazily so the CLI can cap BLAS threads before numpy
loads.
"""

__version__ = "0.1.0"

_EXPORTS = {
    # graphs
    "SparseViewGraph": "graphs",
    "EdgeIndexSet": "graphs",
    "MultiViewDenseGraph": "graphs",
    "build_shared_knn": "graphs",
    "normalize_knn_distances": "graphs",
    "gaussian_kernel": "graphs",
    "build_mvdr": "graphs",
    "row_normalize": "graphs",
    "scatter_to_sparse": "graphs",
    "pairwise_distances": "graphs",
    # qpsolvers
    "SimplexQP": "qpsolvers",
    "BatchBoxQP": "qpsolvers",
    "largest_eigenvalue": "qpsolvers",
    "afw_solve": "qpsolvers",
    "exact_line_search": "qpsolvers",
    "dca_solve": "qpsolvers",
    # fusion
    "FusionParams": "fusion",
    "FusionState": "fusion",
    "FusionResult": "fusion",
    "objective_value": "fusion",
    "assemble_alpha_qp": "fusion",
    "update_s": "fusion",
    "assemble_A_qp": "fusion",
    "learn_consistent_graph": "fusion",
    # spectral
    "Embedding": "spectral",
    "Labels": "spectral",
    "normalized_affinity": "spectral",
    "spectral_embed": "spectral",
    "kmeans": "spectral",
    # metrics
    "ContingencyTable": "metrics",
    "contingency_table": "metrics",
    "nmi": "metrics",
    "ari": "metrics",
    "acc": "metrics",
    "purity": "metrics",
    "all_scores": "metrics",
    # datagen
    "SyntheticSpec": "datagen",
    "generate_multiview": "datagen",
    "generate_blobs": "datagen",
    "similarity_to_distance_views": "datagen",
    # pipeline
    "PipelineConfig": "pipeline",
    "PipelineRun": "pipeline",
    "run_pipeline": "pipeline",
    "run_sgf": "pipeline",
    "run_dgf": "pipeline",
}

__all__ = sorted(_EXPORTS) + ["__version__"]


def __getattr__(name):
    module_name = _EXPORTS.get(name)
    if module_name is None:
        raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
    import importlib

    module = importlib.import_module(f".{module_name}", __name__)
    value = getattr(module, name)
    globals()[name] = value
    return value
