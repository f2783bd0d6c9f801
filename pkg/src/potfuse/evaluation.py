"""Quality criteria, stratified cross-validation and rank statistics."""
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.special import betainc
from scipy.stats import rankdata

from . import ensemble, preprocessing
from .ensemble import BaggingConfig
from .errors import InputError
from .scoring import DEFAULT_ZETA, STRATEGIES

log = logging.getLogger(__name__)

CRITERIA = ("macro_fdr", "macro_fnr", "macro_mcc", "micro_fdr", "micro_fnr", "micro_mcc")


def confusion_matrix(y_true, y_pred, n_classes):
    """Rows are true classes, columns predicted classes."""
    cm = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(cm, (np.asarray(y_true), np.asarray(y_pred)), 1)
    return cm


@dataclass(frozen=True)
class CriterionScores:
    macro_fdr: float
    macro_fnr: float
    macro_mcc: float
    micro_fdr: float
    micro_fnr: float
    micro_mcc: float

    def as_dict(self):
        return {c: getattr(self, c) for c in CRITERIA}


def _ratio(num, den):
    # 0/0 counts as a perfect score.
    den = np.asarray(den, dtype=float)
    return np.where(den > 0, np.asarray(num, dtype=float) / np.where(den > 0, den, 1.0), 0.0)


def mcc(tp, fp, fn, tn):
    """Binary Matthews correlation; 0 when any marginal is empty."""
    tp, fp, fn, tn = (np.asarray(v, dtype=float) for v in (tp, fp, fn, tn))
    den = np.sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn))
    num = tp * tn - fp * fn
    return np.where(den > 0, num / np.where(den > 0, den, 1.0), 0.0)


def binarized_counts(cm):
    cm = np.asarray(cm, dtype=np.int64)
    tp = np.diag(cm)
    fp = cm.sum(axis=0) - tp
    fn = cm.sum(axis=1) - tp
    tn = cm.sum() - tp - fp - fn
    return tp, fp, fn, tn


def compute_criteria(cm):
    """Six criteria in ``[0, 1]``, 0 best. MCC is reported as ``(1 - MCC)/2``."""
    cm = np.asarray(cm)
    if cm.ndim != 2 or cm.shape[0] != cm.shape[1] or cm.shape[0] < 1 or cm.sum() < 1:
        raise InputError("confusion matrix must be square with a positive total")
    tp, fp, fn, tn = binarized_counts(cm)
    TP, FP, FN, TN = tp.sum(), fp.sum(), fn.sum(), tn.sum()
    return CriterionScores(
        macro_fdr=float(np.mean(_ratio(fp, tp + fp))),
        macro_fnr=float(np.mean(_ratio(fn, tp + fn))),
        macro_mcc=float((1.0 - np.mean(mcc(tp, fp, fn, tn))) / 2.0),
        micro_fdr=float(_ratio(FP, TP + FP)),
        micro_fnr=float(_ratio(FN, TP + FN)),
        micro_mcc=float((1.0 - mcc(TP, FP, FN, TN)) / 2.0),
    )


def stratified_folds(y, folds, seed=0):
    """Fold index per sample; every class is spread round-robin over folds.

    Class members are shuffled with a generator seeded by ``seed``, and each
    class continues the round-robin where the previous one stopped so fold
    sizes differ by at most one.
    """
    y = np.asarray(y)
    rng = np.random.default_rng(seed)
    assign = np.empty(y.shape[0], dtype=int)
    start = 0
    for c in np.unique(y):
        idx = rng.permutation(np.flatnonzero(y == c))
        assign[idx] = (start + np.arange(idx.size)) % folds
        start = (start + idx.size) % folds
    return assign


@dataclass(frozen=True)
class Pipeline:
    trainer: str = "nc"
    strategy: str = "ke"
    bagging: BaggingConfig = field(default_factory=BaggingConfig)
    use_pca: bool = True
    pca_variance: float = 0.95
    zeta: float = DEFAULT_ZETA

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise InputError(f"unknown strategy {self.strategy!r}")


@dataclass
class EvaluationReport:
    dataset: str
    trainer: str
    strategy: str
    folds: int = 0
    fold_matrices: list = field(default_factory=list)
    pooled_matrix: np.ndarray = None
    fold_criteria: list = field(default_factory=list)
    pooled_criteria: CriterionScores = None
    degenerate_pairs: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    skipped: bool = False

    @property
    def accuracy(self):
        cm = self.pooled_matrix
        return float(np.trace(cm) / cm.sum())


def _plan_folds(data, folds):
    counts = data.class_counts
    notes = []
    if counts.min() < 2:
        return None, [f"class with {counts.min()} instance(s); dataset skipped"]
    if counts.min() < folds:
        notes.append(f"folds reduced from {folds} to {counts.min()} (smallest class)")
        folds = int(counts.min())
    return folds, notes


def cross_validate_many(data, trainer, strategies, folds=10, seed=0,
                        bagging=None, use_pca=True, pca_variance=0.95, zeta=DEFAULT_ZETA):
    """Cross-validate several fusion strategies over shared base models.

    Bags and trained hyperplanes depend only on the data, trainer and seed,
    so they are built once per fold and every strategy is fitted on top of
    them. Returns ``{strategy: EvaluationReport}``.
    """
    bagging = bagging or BaggingConfig(seed=seed)
    reports = {s: EvaluationReport(data.name, trainer, s) for s in strategies}
    n_folds, notes = _plan_folds(data, folds)
    for r in reports.values():
        r.notes.extend(notes)
    if n_folds is None:
        log.warning("%s: %s", data.name, notes[-1])
        for r in reports.values():
            r.skipped = True
        return reports

    C = data.n_classes
    assign = stratified_folds(data.y, n_folds, seed)
    pooled = {s: np.zeros((C, C), dtype=np.int64) for s in strategies}
    for f in range(n_folds):
        train, test = assign != f, assign == f
        Xtr, Xte = data.X[train], data.X[test]
        scaler = preprocessing.fit_standardizer(Xtr)
        Xtr, Xte = scaler.transform(Xtr), scaler.transform(Xte)
        if use_pca:
            pca = preprocessing.fit_pca(Xtr, pca_variance)
            if pca.degenerate:
                for r in reports.values():
                    r.notes.append(f"fold {f}: zero-variance training data, PCA kept one fixed axis")
            Xtr, Xte = pca.transform(Xtr), pca.transform(Xte)
        fold_cfg = BaggingConfig(bagging.n_members, bagging.sample_fraction,
                                 ensemble.derive_seed(bagging.seed, f))
        ytr = data.y[train]
        _, _, classes = ensemble._check_classes(Xtr, ytr)
        pair_models = ensemble.train_pair_models(Xtr, ytr, classes, trainer, fold_cfg)
        for s in strategies:
            ovo = ensemble.build_ovo(classes, pair_models, s, zeta)
            cm = confusion_matrix(data.y[test], ovo.predict(Xte), C)
            rep = reports[s]
            rep.fold_matrices.append(cm)
            rep.fold_criteria.append(compute_criteria(cm))
            rep.degenerate_pairs.extend((f, i, j) for i, j in ovo.degenerate_pairs)
            pooled[s] += cm
    for s, rep in reports.items():
        rep.folds = n_folds
        rep.pooled_matrix = pooled[s]
        rep.pooled_criteria = compute_criteria(pooled[s])
    return reports


def cross_validate(data, pipeline=None, folds=10, seed=0):
    """Stratified k-fold evaluation of one pipeline; returns an EvaluationReport."""
    p = pipeline or Pipeline()
    return cross_validate_many(
        data, p.trainer, [p.strategy], folds=folds, seed=seed, bagging=p.bagging,
        use_pca=p.use_pca, pca_variance=p.pca_variance, zeta=p.zeta,
    )[p.strategy]


# --- rank statistics -------------------------------------------------------

@dataclass
class RankTable:
    ranks: np.ndarray
    average: np.ndarray
    chi2: float = float("nan")
    f_stat: float = float("nan")
    p_value: float = float("nan")
    flagged: bool = False


def rank_rows(scores):
    """Per-row ranks, 1 = lowest score, ties share their mean position."""
    S = np.asarray(scores, dtype=float)
    if S.ndim == 1:
        S = S[None, :]
    if S.ndim != 2 or S.shape[1] < 2 or S.shape[0] < 1:
        raise InputError("need a datasets x algorithms matrix with >= 2 algorithms")
    if not np.all(np.isfinite(S)):
        raise InputError("scores must be finite")
    return rankdata(S, method="average", axis=1)


def average_ranks(scores):
    return rank_rows(scores).mean(axis=0)


def f_sf(x, d1, d2):
    """Upper tail of the F distribution via the regularised incomplete beta."""
    if x <= 0:
        return 1.0
    if np.isinf(x):
        return 0.0
    return float(betainc(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * x)))


def f_cdf(x, d1, d2):
    if x <= 0:
        return 0.0
    return float(betainc(d1 / 2.0, d2 / 2.0, d1 * x / (d1 * x + d2)))


def friedman_chi2(ranks):
    R = np.asarray(ranks, dtype=float)
    N, k = R.shape
    avg = R.mean(axis=0)
    return float(12.0 * N / (k * (k + 1)) * (np.sum(avg ** 2) - k * (k + 1) ** 2 / 4.0))


def iman_davenport(ranks):
    """Friedman chi-square and its Iman-Davenport F correction.

    ``ranks`` is an ``N x k`` rank matrix or a RankTable. Returns
    ``(F, p_value)`` and fills the table's statistics when one is given. When
    ``chi2 >= N (k - 1)`` the F statistic is infinite and the p-value is
    reported as 0 with ``flagged`` set.
    """
    table = ranks if isinstance(ranks, RankTable) else None
    R = np.asarray(table.ranks if table else ranks, dtype=float)
    N, k = R.shape
    if N < 2 or k < 2:
        raise InputError("need at least two datasets and two algorithms")
    chi2 = friedman_chi2(R)
    if abs(chi2) < 1e-12:
        chi2 = 0.0
    den = N * (k - 1) - chi2
    flagged = den <= 0
    if flagged:
        f_stat, p = float("inf"), 0.0
    else:
        f_stat = (N - 1) * chi2 / den
        p = f_sf(f_stat, k - 1, (k - 1) * (N - 1))
    if table is not None:
        table.chi2, table.f_stat, table.p_value, table.flagged = float(chi2), f_stat, p, flagged
    return f_stat, p


def rank_table(scores):
    """Ranks, average ranks and (for N >= 2) the Iman-Davenport test."""
    R = rank_rows(scores)
    table = RankTable(R, R.mean(axis=0))
    if R.shape[0] >= 2:
        iman_davenport(table)
    return table
