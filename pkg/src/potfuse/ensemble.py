"""Bagging, score fusion and One-vs-One multiclass decomposition."""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import linear_models
from .errors import FitError, InputError, TrainingError
from .linear_models import TrainSet
from .scoring import DEFAULT_ZETA, fit_member

log = logging.getLogger(__name__)

MAX_REDRAWS = 100


@dataclass(frozen=True)
class BaggingConfig:
    n_members: int = 11
    sample_fraction: float = 0.8
    seed: int = 0

    def __post_init__(self):
        if self.n_members < 1:
            raise InputError("n_members must be positive")
        if not 0 < self.sample_fraction <= 1:
            raise InputError("sample_fraction must lie in (0, 1]")


def bag_size(n, fraction):
    # round() guards against products like 0.8 * 35 = 28.000000000000004
    return max(1, math.ceil(round(fraction * n, 9)))


def derive_seed(*keys):
    """Counter-based child seed from an integer key path."""
    return int(np.random.SeedSequence([int(k) for k in keys]).generate_state(1)[0])


def make_bags(t, cfg):
    """Bootstrap samples, one per ensemble member.

    Each member ``i`` draws from its own generator seeded by ``(seed, i)``.
    A bag missing a class is redrawn up to ``MAX_REDRAWS`` times, after which
    the full training set is used. Returns one ``TrainSet`` per member.
    """
    n = len(t)
    if n == 0:
        raise InputError("cannot bag an empty training set")
    size = bag_size(n, cfg.sample_fraction)
    need_both = t.has_both_classes()
    bags = []
    for i in range(cfg.n_members):
        rng = np.random.default_rng([cfg.seed, i])
        for _ in range(MAX_REDRAWS + 1):
            idx = rng.integers(0, n, size=size)
            labels = t.labels[idx]
            if not need_both or (np.any(labels == 1) and np.any(labels == -1)):
                break
        else:
            log.info("bag %d kept missing a class; using the full set", i)
            idx = np.arange(n)
        bags.append(t.subset(idx))
    return bags


@dataclass(frozen=True, eq=False)
class BinaryEnsemble:
    members: tuple
    strategy: str

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if not self.members:
            raise InputError("an ensemble needs at least one member")
        if any(m.strategy != self.strategy for m in self.members):
            raise InputError("all members must share the ensemble strategy")
        if len({m.model.dim for m in self.members}) != 1:
            raise InputError("all members must share the input dimension")

    def fuse(self, x):
        return fuse(self, x)


def fuse(e, x):
    """Mean member score and its sign (ties go to ``+1``)."""
    scores = np.mean([m.score(x) for m in e.members], axis=0)
    labels = np.where(scores >= 0, 1, -1)
    if np.ndim(scores) == 0:
        return float(scores), int(labels)
    return scores, labels


@dataclass(frozen=True, eq=False)
class PairModels:
    """Trained base models for one class pair, before any strategy is fitted.

    ``models`` holds ``(LinearModel, bag TrainSet)`` tuples. An empty tuple
    marks a degenerate pair, predicted by ``fallback_label``.
    """

    pos_class: int
    neg_class: int
    models: tuple
    fallback_label: int
    failures: int = 0

    @property
    def degenerate(self):
        return not self.models


@dataclass(frozen=True, eq=False)
class PairEnsemble:
    pos_class: int
    neg_class: int
    ensemble: BinaryEnsemble = None
    fallback_label: int = 1

    @property
    def degenerate(self):
        return self.ensemble is None

    def fuse(self, x):
        if self.ensemble is not None:
            return fuse(self.ensemble, x)
        m = np.asarray(x).shape[0] if np.ndim(x) == 2 else None
        if m is None:
            return 0.0, self.fallback_label
        return np.zeros(m), np.full(m, self.fallback_label)


@dataclass(frozen=True, eq=False)
class OvoEnsemble:
    classes: tuple
    pairs: tuple
    strategy: str
    degenerate_pairs: tuple = field(default=())

    def predict(self, x):
        return predict_ovo(self, x)


def _pair_trainset(X, y, i, j):
    mask = (y == i) | (y == j)
    return TrainSet(X[mask], np.where(y[mask] == i, 1, -1))


def train_pair_models(X, y, classes, trainer, cfg):
    """Bag and train base models for every unordered class pair.

    Members whose trainer raises are dropped; a pair with no surviving
    member becomes degenerate and predicts its larger class.
    """
    out = []
    for a in range(len(classes)):
        for b in range(a + 1, len(classes)):
            i, j = classes[a], classes[b]
            t = _pair_trainset(X, y, i, j)
            pair_cfg = BaggingConfig(cfg.n_members, cfg.sample_fraction, derive_seed(cfg.seed, i, j))
            models, failures = [], 0
            for k, bag in enumerate(make_bags(t, pair_cfg)):
                try:
                    model = linear_models.train(trainer, bag, seed=derive_seed(pair_cfg.seed, k))
                except TrainingError as exc:
                    failures += 1
                    log.info("pair (%d, %d) member %d failed: %s", i, j, k, exc)
                    continue
                models.append((model, bag))
            n_pos = int(np.sum(t.labels == 1))
            fallback = 1 if n_pos >= len(t) - n_pos else -1
            out.append(PairModels(i, j, tuple(models), fallback, failures))
    return out


def fit_pair_ensembles(pair_models, strategy, zeta=DEFAULT_ZETA):
    pairs = []
    for pm in pair_models:
        members = []
        for model, bag in pm.models:
            try:
                members.append(fit_member(model, bag, strategy, zeta=zeta))
            except FitError as exc:
                log.info("pair (%d, %d): member dropped: %s", pm.pos_class, pm.neg_class, exc)
        ens = BinaryEnsemble(tuple(members), strategy) if members else None
        pairs.append(PairEnsemble(pm.pos_class, pm.neg_class, ens, pm.fallback_label))
    return pairs


def _check_classes(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y).astype(int)
    classes = tuple(int(c) for c in np.unique(y))
    if len(classes) < 2:
        raise InputError("One-vs-One needs at least two classes")
    counts = np.bincount(y - min(classes))
    if np.any(counts[counts > 0] < 2):
        raise InputError("every class needs at least two instances")
    return X, y, classes


def train_ovo(X, y, trainer, strategy, cfg=None, zeta=DEFAULT_ZETA):
    """One bagged binary ensemble per class pair ``(i, j)``, ``i`` as ``+1``."""
    cfg = cfg or BaggingConfig()
    X, y, classes = _check_classes(X, y)
    pm = train_pair_models(X, y, classes, trainer, cfg)
    return build_ovo(classes, pm, strategy, zeta)


def build_ovo(classes, pair_models, strategy, zeta=DEFAULT_ZETA):
    pairs = fit_pair_ensembles(pair_models, strategy, zeta)
    degenerate = tuple((p.pos_class, p.neg_class) for p in pairs if p.degenerate)
    return OvoEnsemble(tuple(classes), tuple(pairs), strategy, degenerate)


def predict_ovo(e, x):
    """Pairwise voting with ties broken by summed ``|score|``, then class order."""
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    X = X[None, :] if single else X
    index = {c: k for k, c in enumerate(e.classes)}
    C = len(e.classes)
    votes = np.zeros((X.shape[0], C))
    strength = np.zeros((X.shape[0], C))
    for pair in e.pairs:
        scores, labels = pair.fuse(X)
        a, b = index[pair.pos_class], index[pair.neg_class]
        votes[:, a] += labels == 1
        votes[:, b] += labels != 1
        mag = np.abs(scores)
        strength[:, a] += mag
        strength[:, b] += mag
    best = votes == votes.max(axis=1, keepdims=True)
    masked = np.where(best, strength, -np.inf)
    top = masked == masked.max(axis=1, keepdims=True)
    winner = np.argmax(top, axis=1)
    labels = np.asarray(e.classes)[winner]
    return int(labels[0]) if single else labels
