"""Benchmark output files: results CSV, rank tables, statistics, config echo."""
import csv
import io
import os
import tempfile
from pathlib import Path

import numpy as np

from .evaluation import CRITERIA, rank_table


def _umask():
    mask = os.umask(0)
    os.umask(mask)
    return mask


def atomic_write(path, text):
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.chmod(tmp, 0o666 & ~_umask())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def fmt(v):
    return repr(float(v))


def results_csv(reports):
    """One row per dataset x trainer x strategy x fold x criterion.

    Fold rows are numbered from 0; the pooled confusion matrix gets
    ``fold = pooled``.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["dataset", "trainer", "strategy", "fold", "criterion", "value"])
    for rep in reports:
        if rep.skipped:
            continue
        rows = list(enumerate(rep.fold_criteria)) + [("pooled", rep.pooled_criteria)]
        for fold, crit in rows:
            for name, value in crit.as_dict().items():
                w.writerow([rep.dataset, rep.trainer, rep.strategy, fold, name, fmt(value)])
    return buf.getvalue()


def summary_text(reports):
    lines = ["# pooled criteria (lower is better)"]
    head = ["dataset", "trainer", "strategy", "accuracy", *CRITERIA]
    lines.append("\t".join(head))
    for rep in reports:
        if rep.skipped:
            lines.append(f"{rep.dataset}\t{rep.trainer}\t{rep.strategy}\tSKIPPED\t{'; '.join(rep.notes)}")
            continue
        vals = [f"{rep.accuracy:.4f}"] + [f"{v:.4f}" for v in rep.pooled_criteria.as_dict().values()]
        lines.append("\t".join([rep.dataset, rep.trainer, rep.strategy, *vals]))
    notes = [(rep, n) for rep in reports for n in rep.notes]
    degenerate = [rep for rep in reports if rep.degenerate_pairs]
    if notes or degenerate:
        lines.append("")
        lines.append("# notes")
        for rep, n in notes:
            lines.append(f"{rep.dataset}/{rep.trainer}/{rep.strategy}: {n}")
        for rep in degenerate:
            pairs = ", ".join(f"fold {f}: ({i},{j})" for f, i, j in rep.degenerate_pairs)
            lines.append(f"{rep.dataset}/{rep.trainer}/{rep.strategy}: degenerate pairs {pairs}")
    return "\n".join(lines) + "\n"


def _score_matrix(reports, trainer, strategies, criterion):
    """Datasets x strategies matrix of pooled scores for one trainer."""
    by_key = {(r.dataset, r.strategy): r for r in reports if r.trainer == trainer and not r.skipped}
    datasets = sorted({d for d, _ in by_key}, key=lambda d: [r.dataset for r in reports].index(d))
    datasets = [d for d in datasets if all((d, s) in by_key for s in strategies)]
    S = np.array([[getattr(by_key[d, s].pooled_criteria, criterion) for s in strategies]
                  for d in datasets]).reshape(len(datasets), len(strategies))
    return datasets, S


def rank_tables(reports, trainers, strategies):
    """``{criterion: {trainer: (datasets, RankTable or None)}}``."""
    out = {}
    for crit in CRITERIA:
        out[crit] = {}
        for tr in trainers:
            datasets, S = _score_matrix(reports, tr, strategies, crit)
            table = rank_table(S) if len(datasets) >= 1 and len(strategies) >= 2 else None
            out[crit][tr] = (datasets, table)
    return out


def _p(v):
    return "n/a" if v is None or np.isnan(v) else f"{v:.3e}"


def rank_text(criterion, per_trainer, strategies):
    lines = [f"# average ranks for {criterion} (1 = best)"]
    for tr, (datasets, table) in per_trainer.items():
        lines.append("")
        lines.append(f"[trainer {tr}]")
        lines.append("\t".join(["dataset", *strategies]))
        if table is None:
            lines.append("(ranks need at least one dataset and two strategies)")
            continue
        for d, row in zip(datasets, table.ranks):
            lines.append("\t".join([d, *(f"{v:.3f}" for v in row)]))
        lines.append("\t".join(["ImD.p", _p(table.p_value), *[""] * (len(strategies) - 1)]).rstrip("\t"))
        lines.append("\t".join(["Rank", *(f"{v:.3f}" for v in table.average)]))
    return "\n".join(lines) + "\n"


def stats_text(tables):
    lines = ["# Friedman / Iman-Davenport tests per trainer and criterion",
             "\t".join(["trainer", "criterion", "datasets", "chi2", "F", "p_value", "note"])]
    for crit, per_trainer in tables.items():
        for tr, (datasets, table) in per_trainer.items():
            if table is None or len(datasets) < 2:
                lines.append("\t".join([tr, crit, str(len(datasets)), "n/a", "n/a", "n/a",
                                        "needs >= 2 datasets and >= 2 strategies"]))
                continue
            note = "chi2 >= N(k-1): F undefined, p reported as 0" if table.flagged else ""
            lines.append("\t".join([tr, crit, str(len(datasets)), f"{table.chi2:.6g}",
                                    f"{table.f_stat:.6g}", _p(table.p_value), note]).rstrip("\t"))
    return "\n".join(lines) + "\n"


def datasets_text(datasets):
    lines = ["\t".join(["dataset", "n", "d", "C", "IR"])]
    for d in datasets:
        lines.append(f"{d.name}\t{d.X.shape[0]}\t{d.X.shape[1]}\t{d.n_classes}\t{d.imbalance_ratio:.2f}")
    return "\n".join(lines) + "\n"


def config_text(cfg):
    """Sorted ``key=value`` echo of the effective run configuration."""
    return "".join(f"{k}={cfg[k]}\n" for k in sorted(cfg))
