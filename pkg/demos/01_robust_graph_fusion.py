"""Headline demo: fusing four views of which one is badly corrupted.

Three views carry the same planted 4-cluster structure; the fourth has half
of its cross-cluster entries inflated with positive noise, which destroys its
own nearest-neighbor graph. The fusion learns per-view scalings alpha and
splits each view into a consistent part plus an inconsistent remainder, so
the fused graph clusters perfectly while the corrupted view alone does not.
"""

import numpy as np

from mvfuse import (
    FusionParams,
    PipelineConfig,
    SyntheticSpec,
    all_scores,
    generate_multiview,
    nmi,
    run_pipeline,
    similarity_to_distance_views,
)

spec = SyntheticSpec(
    n=200, n_c=4, v=4,
    p_in=0.9, p_out=0.05,
    corrupt_views=(3,), corrupt_rate=0.5, noise_scale=0.9,
    seed=0,
)
views, truth = generate_multiview(spec)
dists = similarity_to_distance_views(views)

cfg = PipelineConfig(
    mode="sgf", k=6, n_c=4, views_are="distances",
    fusion=FusionParams(beta=1.0, gamma=1e4), seed=0,
)

print("single-view spectral clustering (same kNN pipeline, one view at a time):")
for i, dist in enumerate(dists):
    labels = run_pipeline([dist], cfg).labels
    tag = "corrupted" if i in spec.corrupt_views else "clean"
    print(f"  view {i} ({tag:9s}): NMI = {nmi(labels, truth):.4f}")

run = run_pipeline(dists, cfg)
print("\nfused graph:")
for name, value in all_scores(run.labels, truth).items():
    print(f"  {name:7s}= {value:.4f}")

print("\nlearned view scalings alpha (the corrupted view gets the least):")
print(" ", np.round(run.fusion.state.alpha, 4))
print(f"converged after {run.fusion.iterations} sweep(s); "
      f"objective trace: {[f'{f:.3e}' for f in run.fusion.objective_trace]}")
print(f"eigengap of the fused graph at n_c={spec.n_c}: {run.eigengap:.4f}")
