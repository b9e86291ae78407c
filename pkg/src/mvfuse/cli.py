"""Command-line front end.

Subcommands:

- fuse:  read one CSV per view, run a fusion pipeline, write a JSON report
         and optionally the fused graph as a TSV edge list;
- eval:  score a report's labels against ground truth;
- synth: write a synthetic corrupted multi-view dataset to disk.

Exit codes: 0 success, 2 malformed input, 3 shape mismatch.

The environment variable MVFUSE_THREADS caps internal (BLAS) parallelism;
it is applied before numpy is first imported, which is why the heavy
imports in this module happen inside main().
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_SHAPE = 3


class ShapeMismatchError(ValueError):
    """Inputs parsed fine but their shapes disagree."""


@dataclass
class RunReport:
    """Everything one fuse run produced, JSON-serializable.

    Deterministic for a fixed command and seed except for `timings`, which
    lives under its own key so reports can be compared with it stripped.
    """

    config: dict
    alpha: list[float]
    objective_trace: list[float]
    iterations: int
    converged: bool
    eigengap: float | None
    isolated_nodes: list[int]
    labels: list[int]
    metrics: dict | None = None
    timings: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))


def _apply_thread_cap() -> None:
    cap = os.environ.get("MVFUSE_THREADS")
    if not cap:
        return
    for var in (
        "OMP_NUM_THREADS",
        "OPENBLAS_NUM_THREADS",
        "MKL_NUM_THREADS",
        "NUMEXPR_NUM_THREADS",
    ):
        os.environ.setdefault(var, cap)


def _load_csv(path: str, skip_header: bool):
    import numpy as np

    if not os.path.exists(path):
        raise FileNotFoundError(f"no such file: {path}")
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1 if skip_header else 0, ndmin=2)
    except Exception as exc:
        raise ValueError(f"could not parse {path}: {exc}") from exc
    return data


def _load_labels_csv(path: str):
    import numpy as np

    data = _load_csv(path, skip_header=False)
    if data.shape[1] != 1:
        raise ValueError(f"{path}: expected one label per line")
    labels = data.ravel()
    if np.any(labels != np.round(labels)):
        raise ValueError(f"{path}: labels must be integers")
    return labels.astype(np.int64)


def _parse_lambda(text: str | None, v: int):
    import numpy as np

    if text is None:
        return None
    try:
        values = np.array([float(x) for x in text.split(",")])
    except ValueError as exc:
        raise ValueError(f"bad --lambda list: {text!r}") from exc
    if len(values) != v:
        raise ShapeMismatchError(
            f"--lambda has {len(values)} entries but there are {v} views"
        )
    return values


def cmd_fuse(args) -> int:
    import numpy as np

    from .metrics import all_scores
    from .fusion import FusionParams
    from .pipeline import PipelineConfig, run_pipeline

    views = [_load_csv(p, args.header) for p in args.views]
    n = views[0].shape[0]
    for path, view in zip(args.views, views):
        if view.shape[0] != n:
            raise ShapeMismatchError(
                f"{path} has {view.shape[0]} rows, expected {n}"
            )
        if args.views_are == "distances" and view.shape[1] != view.shape[0]:
            raise ShapeMismatchError(f"{path}: distance matrix must be square")

    lam = _parse_lambda(getattr(args, "lambda"), len(views))
    truth = _load_labels_csv(args.truth) if args.truth else None
    if truth is not None and len(truth) != n:
        raise ShapeMismatchError(
            f"truth has {len(truth)} labels but views have {n} rows"
        )

    cfg = PipelineConfig(
        mode=args.mode,
        k=args.k,
        n_c=args.clusters,
        metric=args.metric,
        views_are=args.views_are,
        fusion=FusionParams(
            beta=args.beta,
            gamma=args.gamma,
            lam=lam,
            max_outer=args.max_outer,
            rel_tol=args.tol,
        ),
        seed=args.seed,
    )
    t0 = time.perf_counter()
    run = run_pipeline(views, cfg)
    total = time.perf_counter() - t0

    labels = run.labels.assignment
    metrics = all_scores(labels, truth) if truth is not None else None
    report = RunReport(
        config={
            "mode": args.mode,
            "k": args.k,
            "clusters": args.clusters,
            "beta": args.beta,
            "gamma": args.gamma,
            "lambda": None if lam is None else [float(x) for x in lam],
            "metric": args.metric,
            "views_are": args.views_are,
            "seed": args.seed,
            "max_outer": args.max_outer,
            "tol": args.tol,
            "views": list(args.views),
        },
        alpha=[float(a) for a in run.fusion.state.alpha],
        objective_trace=[float(f) for f in run.fusion.objective_trace],
        iterations=run.fusion.iterations,
        converged=run.fusion.converged,
        eigengap=run.eigengap,
        isolated_nodes=run.isolated_nodes,
        labels=[int(x) for x in labels],
        metrics=metrics,
        timings={**run.timings, "total": total},
    )
    with open(args.out, "w") as fh:
        fh.write(report.to_json() + "\n")

    if args.graph_out:
        with open(args.graph_out, "w") as fh:
            for (i, j), w in sorted(run.fused.edges.items()):
                fh.write(f"{i}\t{j}\t{w!r}\n")

    print(f"wrote {args.out}" + (f" and {args.graph_out}" if args.graph_out else ""))
    return EXIT_OK


def cmd_eval(args) -> int:
    from .metrics import all_scores

    with open(args.pred) as fh:
        payload = json.load(fh)
    if isinstance(payload, dict):
        if "labels" not in payload:
            raise ValueError(f"{args.pred}: no 'labels' field")
        pred = payload["labels"]
    else:
        pred = payload
    truth = _load_labels_csv(args.truth)
    if len(pred) != len(truth):
        raise ShapeMismatchError(
            f"{len(pred)} predicted labels vs {len(truth)} true labels"
        )
    print(json.dumps(all_scores(pred, truth), indent=2, sort_keys=True))
    return EXIT_OK


def _synth_spec_from_args(args):
    from .datagen import SyntheticSpec

    values = {
        "n": args.n,
        "n_c": args.clusters,
        "v": args.views,
        "p_in": args.p_in,
        "p_out": args.p_out,
        "corrupt_views": tuple(args.corrupt_views or ()),
        "corrupt_rate": args.corrupt_rate,
        "noise_scale": args.noise_scale,
        "seed": args.seed,
    }
    if args.spec:
        try:
            import tomllib  # Python >= 3.11
        except ModuleNotFoundError:
            import tomli as tomllib
        with open(args.spec, "rb") as fh:
            doc = tomllib.load(fh)
        section = doc.get("synth", doc)
        rename = {"clusters": "n_c", "views": "v"}
        for key, value in section.items():
            key = rename.get(key, key)
            if key not in values:
                raise ValueError(f"unknown synth option {key!r}")
            values[key] = tuple(value) if key == "corrupt_views" else value
    return SyntheticSpec(**values)


def cmd_synth(args) -> int:
    import numpy as np

    from .datagen import generate_multiview, similarity_to_distance_views

    spec = _synth_spec_from_args(args)
    views, truth = generate_multiview(spec)
    os.makedirs(args.out_dir, exist_ok=True)
    paths = []
    for i, dist in enumerate(similarity_to_distance_views(views)):
        path = os.path.join(args.out_dir, f"view_{i}.csv")
        np.savetxt(path, dist, delimiter=",")
        paths.append(path)
    truth_path = os.path.join(args.out_dir, "truth.csv")
    np.savetxt(truth_path, truth.assignment, fmt="%d")
    print("wrote " + ", ".join(paths + [truth_path]))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mvfuse",
        description="Fuse multi-view graphs into one consistent graph and cluster it.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fuse = sub.add_parser("fuse", help="fuse views and cluster the result")
    fuse.add_argument("views", nargs="+", help="one CSV per view")
    fuse.add_argument("--mode", choices=["sgf", "dgf"], default="sgf")
    fuse.add_argument("--k", type=int, default=6, help="kNN neighbor count")
    fuse.add_argument("--clusters", type=int, required=True)
    fuse.add_argument("--beta", type=float, default=1.0)
    fuse.add_argument("--gamma", type=float, default=1e4)
    fuse.add_argument("--lambda", default=None, help="comma list of per-view weights")
    fuse.add_argument("--metric", choices=["euclidean", "cosine"], default="euclidean")
    fuse.add_argument(
        "--views-are", choices=["features", "distances"], default="features"
    )
    fuse.add_argument("--seed", type=int, default=0)
    fuse.add_argument("--max-outer", type=int, default=50)
    fuse.add_argument("--tol", type=float, default=1e-6)
    fuse.add_argument("--header", action="store_true", help="skip one header line")
    fuse.add_argument("--truth", default=None, help="optional true labels CSV")
    fuse.add_argument("--out", default="report.json")
    fuse.add_argument("--graph-out", default=None, help="fused graph TSV path")
    fuse.set_defaults(func=cmd_fuse)

    ev = sub.add_parser("eval", help="score predicted labels against truth")
    ev.add_argument("pred", help="report JSON (or bare JSON list of labels)")
    ev.add_argument("truth", help="true labels CSV, one per line")
    ev.set_defaults(func=cmd_eval)

    synth = sub.add_parser("synth", help="generate a synthetic multi-view dataset")
    synth.add_argument("--spec", default=None, help="TOML file with a [synth] section")
    synth.add_argument("--n", type=int, default=200)
    synth.add_argument("--clusters", type=int, default=4)
    synth.add_argument("--views", type=int, default=4)
    synth.add_argument("--p-in", type=float, default=0.9)
    synth.add_argument("--p-out", type=float, default=0.05)
    synth.add_argument("--corrupt-views", type=int, nargs="*", default=None)
    synth.add_argument("--corrupt-rate", type=float, default=0.0)
    synth.add_argument("--noise-scale", type=float, default=0.0)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out-dir", default=".")
    synth.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    _apply_thread_cap()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ShapeMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
