"""Command-line entry point: ``potfuse benchmark`` and ``potfuse toy``.

Options can also come from a ``key=value`` file passed with ``--config``;
keys use the long flag names without dashes (``members=11``). Flags given on
the command line win over the file.
"""
import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import reporting
from .ensemble import BaggingConfig
from .errors import InputError
from .evaluation import CRITERIA, cross_validate_many
from .io_data import load_csv, load_dataset
from .linear_models import TRAINERS
from .scoring import DEFAULT_ZETA, STRATEGIES

log = logging.getLogger("potfuse")

EXIT_OK, EXIT_FATAL, EXIT_SKIPPED = 0, 1, 2

DEFAULTS = {
    "trainers": "nc",
    "strategies": ",".join(STRATEGIES),
    "members": 11,
    "fraction": 0.8,
    "folds": 10,
    "seed": 0,
    "pca_variance": 0.95,
    "no_pca": False,
    "zeta": DEFAULT_ZETA,
    "jobs": 1,
    "out": "results",
    "label_column": "-1",
}
_TYPES = {"members": int, "fraction": float, "folds": int, "seed": int,
          "pca_variance": float, "zeta": float, "jobs": int}


def read_config_file(path):
    cfg = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.replace("-", "_")
        if key != "data" and key not in DEFAULTS:
            raise InputError(f"{path}:{lineno}: unknown key {key!r}")
        cfg[key] = value
    return cfg


def _coerce(key, value):
    if key == "no_pca" and isinstance(value, str):
        return value.lower() in ("1", "true", "yes", "on")
    if key == "data" and isinstance(value, str):
        return value.split()
    return _TYPES[key](value) if key in _TYPES else value


def _split_names(text, allowed, what, parser):
    names = [s.strip() for s in text.split(",") if s.strip()]
    bad = [s for s in names if s not in allowed]
    if bad or not names:
        parser.error(f"unknown {what}: {', '.join(bad) or '(none)'}; choose from {', '.join(allowed)}")
    return names


def build_parser():
    p = argparse.ArgumentParser(prog="potfuse", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("benchmark", help="cross-validate trainers x strategies over datasets")
    b.add_argument("--config", help="key=value file with defaults for the flags below")
    b.add_argument("--data", nargs="+", help="CSV, ARFF or KEEL .dat files")
    b.add_argument("--trainers", help="comma list from: " + ",".join(TRAINERS))
    b.add_argument("--strategies", help="comma list from: " + ",".join(STRATEGIES))
    b.add_argument("--members", type=int, help="bagging ensemble size (default 11)")
    b.add_argument("--fraction", type=float, help="bag size as a fraction of the training set (default 0.8)")
    b.add_argument("--folds", type=int, help="cross-validation folds (default 10)")
    b.add_argument("--seed", type=int, help="master seed (default 0)")
    b.add_argument("--pca-variance", type=float, help="PCA covered variance (default 0.95)")
    b.add_argument("--no-pca", action="store_true", default=None, help="skip PCA")
    b.add_argument("--zeta", type=float, help="parameter of the param baseline (default 0.5)")
    b.add_argument("--jobs", type=int, help="worker processes (default 1)")
    b.add_argument("--label-column", help="CSV label column name or index (default -1)")
    b.add_argument("--out", help="output directory (default ./results)")

    t = sub.add_parser("toy", help="write the 2-D toy figures as SVG")
    t.add_argument("--data", help="2-D, two-class CSV (default: generated banana data)")
    t.add_argument("--label-column", default="-1")
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--out", default="toy")
    return p


def resolve_config(args):
    """Merge defaults < config file < command-line flags."""
    cfg = dict(DEFAULTS)
    cfg["data"] = []
    if args.config:
        cfg.update({k: _coerce(k, v) for k, v in read_config_file(args.config).items()})
    for key in list(DEFAULTS) + ["data"]:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    return cfg


def _run_task(task):
    data, trainer, strategies, cfg = task
    reports = cross_validate_many(
        data, trainer, strategies, folds=cfg["folds"], seed=cfg["seed"],
        bagging=BaggingConfig(cfg["members"], cfg["fraction"], cfg["seed"]),
        use_pca=not cfg["no_pca"], pca_variance=cfg["pca_variance"], zeta=cfg["zeta"],
    )
    return [reports[s] for s in strategies]


def config_echo(cfg, trainers, strategies, datasets):
    return {
        "datasets": ",".join(d.name for d in datasets),
        "trainers": ",".join(trainers),
        "strategies": ",".join(strategies),
        "members": cfg["members"],
        "fraction": cfg["fraction"],
        "folds": cfg["folds"],
        "seed": cfg["seed"],
        "pca": "off" if cfg["no_pca"] else "on",
        "pca_variance": cfg["pca_variance"],
        "standardize": "zero-mean-unit-variance",
        "kernel": "gaussian",
        "bandwidth": "silverman",
        "bagging": "with-replacement",
        "multiclass": "one-vs-one",
        "zeta": cfg["zeta"],
    }


def cmd_benchmark(args, parser):
    cfg = resolve_config(args)
    trainers = _split_names(cfg["trainers"], list(TRAINERS), "trainer", parser)
    strategies = _split_names(cfg["strategies"], list(STRATEGIES), "strategy", parser)
    if not cfg["data"]:
        parser.error("benchmark needs at least one --data file")
    try:
        BaggingConfig(cfg["members"], cfg["fraction"], cfg["seed"])
    except InputError as exc:
        parser.error(str(exc))
    if cfg["folds"] < 2 or not 0 < cfg["pca_variance"] <= 1 or cfg["zeta"] <= 0 or cfg["jobs"] < 1:
        parser.error("need folds >= 2, 0 < pca-variance <= 1, zeta > 0 and jobs >= 1")

    label = cfg["label_column"]
    datasets = [load_dataset(p, label_column=label) for p in cfg["data"]]
    names = [d.name for d in datasets]
    if len(set(names)) != len(names):
        raise InputError(f"dataset names must be unique, got {names}")

    tasks = [(d, tr, strategies, cfg) for d in datasets for tr in trainers]
    if cfg["jobs"] > 1:
        with ProcessPoolExecutor(max_workers=cfg["jobs"]) as pool:
            chunks = list(pool.map(_run_task, tasks))
    else:
        chunks = [_run_task(t) for t in tasks]
    reports = [r for chunk in chunks for r in chunk]

    tables = reporting.rank_tables(reports, trainers, strategies)
    files = {
        "config.txt": reporting.config_text(config_echo(cfg, trainers, strategies, datasets)),
        "datasets.txt": reporting.datasets_text(datasets),
        "results.csv": reporting.results_csv(reports),
        "summary.txt": reporting.summary_text(reports),
        "stats.txt": reporting.stats_text(tables),
    }
    for crit in CRITERIA:
        files[f"ranks_{crit}.txt"] = reporting.rank_text(crit, tables[crit], strategies)

    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        reporting.atomic_write(out / name, text)
    skipped = sorted({r.dataset for r in reports if r.skipped})
    for name in skipped:
        log.warning("dataset %s was skipped", name)
    print(f"wrote {len(files)} files to {out} ({len(reports)} runs)")
    return EXIT_SKIPPED if skipped else EXIT_OK


def cmd_toy(args, parser):
    from .toy import write_toy

    data = None
    if args.data:
        data = load_csv(args.data, label_column=args.label_column)
        if data.X.shape[1] != 2:
            parser.error(f"toy needs 2-D data, {args.data} has {data.X.shape[1]} features")
        if data.n_classes != 2:
            parser.error(f"toy needs two classes, {args.data} has {data.n_classes}")
    res = write_toy(args.out, data, seed=args.seed)
    print(f"wrote {len(res.svgs)} SVG files to {args.out}")
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "benchmark":
            return cmd_benchmark(args, parser)
        return cmd_toy(args, parser)
    except (InputError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
