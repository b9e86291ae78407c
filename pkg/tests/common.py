"""Shared helpers for the test suite."""


from mvfuse.datagen import SyntheticSpec, generate_multiview, similarity_to_distance_views
from mvfuse.fusion import FusionParams
from mvfuse.pipeline import PipelineConfig, run_pipeline


def corrupted_suite_spec(seed, n=200, n_c=4, v=4):
    """The corrupted-view robustness setting used across tests."""
    return SyntheticSpec(
        n=n, n_c=n_c, v=v, p_in=0.9, p_out=0.05,
        corrupt_views=(v - 1,), corrupt_rate=0.5, noise_scale=0.9, seed=seed,
    )


def pipeline_config(mode, n_c, seed=0, **fusion_kwargs):
    fusion = FusionParams(**fusion_kwargs) if fusion_kwargs else FusionParams()
    return PipelineConfig(
        mode=mode, k=6, n_c=n_c, views_are="distances", fusion=fusion, seed=seed
    )


def single_view_sc(dist_mat, n_c, seed=0):
    """Single-view spectral clustering via the same kNN pipeline (v = 1)."""
    cfg = pipeline_config("sgf", n_c, seed=seed)
    return run_pipeline([dist_mat], cfg).labels


def corrupted_run(seed, mode="sgf", n=200):
    """Generate the corrupted suite, fuse it, and cluster every single view.

    Returns (fused labels, per-view labels, truth, fusion result).
    """
    spec = corrupted_suite_spec(seed, n=n)
    views, truth = generate_multiview(spec)
    dists = similarity_to_distance_views(views)
    cfg = pipeline_config(mode, spec.n_c, seed=seed)
    run = run_pipeline(dists, cfg)
    per_view = [single_view_sc(d, spec.n_c, seed=seed) for d in dists]
    return run, per_view, truth
