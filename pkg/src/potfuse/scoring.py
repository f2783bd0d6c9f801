"""Member scoring: fusion baselines and the probability-driven potentials.

Every scoring function maps a fitted ``ScoredMember`` and point(s) ``x`` to a
real score; an ensemble averages member scores and takes the sign. The
potentials ``ke``, ``ka``, ``kb`` and ``kc`` stay inside ``[-0.5, 0.5]`` and
shrink towards zero where the member's training data is sparse.

Softmax-of-two expressions ``exp(a)/(exp(a)+exp(c)) - 0.5`` are evaluated as
``0.5 * tanh((a - c) / 2)``. The two forms are equal, but the second cannot
overflow and is exactly odd under swapping ``a`` and ``c``.
"""
from dataclasses import dataclass, field

import numpy as np

from .density import GaussianMle, Kde1D, NaiveKde, fit_gaussian_mle
from .errors import FitError, InputError

STRATEGIES = ("avg", "vote", "sigmoid", "param", "ke", "ka", "kb", "kc")
POTENTIAL_STRATEGIES = ("ke", "ka", "kb", "kc")
DEFAULT_ZETA = 0.5
_UNDERFLOW = 1e-300


@dataclass(frozen=True)
class ClassPriors:
    p_pos: float
    p_neg: float

    def __post_init__(self):
        if self.p_pos < 0 or self.p_neg < 0 or abs(self.p_pos + self.p_neg - 1.0) > 1e-12:
            raise InputError(f"invalid priors ({self.p_pos}, {self.p_neg})")

    @classmethod
    def from_labels(cls, labels):
        labels = np.asarray(labels)
        n_pos = int(np.sum(labels == 1))
        return cls(n_pos / labels.size, (labels.size - n_pos) / labels.size)

    def swapped(self):
        return ClassPriors(self.p_neg, self.p_pos)


@dataclass(frozen=True, eq=False)
class ScoredMember:
    """One base model with whatever density estimates its strategy needs."""

    model: object
    strategy: str
    priors: ClassPriors = None
    w_pos: Kde1D = None
    w_neg: Kde1D = None
    y_global: GaussianMle = None
    y_pos: object = None
    y_neg: object = None
    zeta: float = DEFAULT_ZETA
    _y_mu: float = field(default=None, repr=False)

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise InputError(f"unknown strategy {self.strategy!r}")
        if self.y_global is not None and self._y_mu is None:
            object.__setattr__(self, "_y_mu", float(self.y_global(self.y_global.mean)))

    def swapped(self):
        """The same member with the roles of the two classes exchanged."""
        return ScoredMember(
            self.model, self.strategy, self.priors.swapped(), self.w_neg, self.w_pos,
            self.y_global, self.y_neg, self.y_pos, self.zeta, self._y_mu,
        )

    def score(self, x):
        return score(self, x)


# --- baselines -------------------------------------------------------------

def score_average(member, x):
    return member.model.discriminant(x)


def score_vote(member, x):
    w = member.model.discriminant(x)
    out = np.where(np.asarray(w) >= 0, 1.0, -1.0)
    return float(out) if out.ndim == 0 else out


def sigmoid_centered(omega):
    """Logistic sigmoid shifted down by 0.5."""
    return 0.5 * np.tanh(0.5 * np.asarray(omega, dtype=float))


def score_sigmoid(member, x):
    out = sigmoid_centered(member.model.discriminant(x))
    return float(out) if out.ndim == 0 else out


def parametric_g(omega, zeta):
    """Non-monotonic transform peaking at +/-1 for ``omega = +/-1/sqrt(2 zeta)``."""
    if not zeta > 0:
        raise InputError(f"zeta must be positive, got {zeta}")
    omega = np.asarray(omega, dtype=float)
    return omega * np.exp(-zeta * omega * omega + 0.5) * np.sqrt(2.0 * zeta)


def score_parametric(member, x, zeta=None):
    out = parametric_g(member.model.discriminant(x), member.zeta if zeta is None else zeta)
    return float(out) if out.ndim == 0 else out


# --- potentials ------------------------------------------------------------

def softmax_potential(a_pos, a_neg):
    """``exp(a_pos) / (exp(a_pos) + exp(a_neg)) - 0.5``."""
    return 0.5 * np.tanh(0.5 * (np.asarray(a_pos, dtype=float) - np.asarray(a_neg, dtype=float)))


def _log_odds(dens_pos, dens_neg, priors):
    # log of the Bayes posterior odds, falling back to prior odds when both
    # weighted densities underflow.
    a_pos = np.asarray(dens_pos, dtype=float) * priors.p_pos
    a_neg = np.asarray(dens_neg, dtype=float) * priors.p_neg
    fallback = (a_pos + a_neg) < _UNDERFLOW
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.log(a_pos) - np.log(a_neg)
        r_prior = np.log(priors.p_pos) - np.log(priors.p_neg)
    return np.where(fallback, r_prior, r)


def posterior(dens_pos, dens_neg, priors):
    """Bayes posterior of the positive class from class densities and priors."""
    a_pos = np.asarray(dens_pos, dtype=float) * priors.p_pos
    a_neg = np.asarray(dens_neg, dtype=float) * priors.p_neg
    den = a_pos + a_neg
    safe = np.where(den < _UNDERFLOW, 1.0, den)
    return np.where(den < _UNDERFLOW, priors.p_pos, a_pos / safe)


def posterior_from_omega(member, omega):
    out = posterior(member.w_pos(omega), member.w_neg(omega), member.priors)
    return float(out) if out.ndim == 0 else out


def density_weight(y_x, y_mu):
    """Softmax weight ``exp(y_x) / (exp(y_x) + exp(y_mu))`` in ``(0, 1)``."""
    return 0.5 + 0.5 * np.tanh(0.5 * (np.asarray(y_x, dtype=float) - y_mu))


def tempered_potential(log_odds, t):
    """``P**t / (P**t + Q**t) - 0.5`` written in terms of ``log(P/Q)``.

    ``t == 0`` gives 0 regardless of the odds (including infinite odds).
    """
    log_odds = np.asarray(log_odds, dtype=float)
    t = np.asarray(t, dtype=float)
    with np.errstate(invalid="ignore"):
        z = t * log_odds
    return 0.5 * np.tanh(0.5 * np.where(t == 0, 0.0, z))


def ka_from_posterior(p, t):
    """Tempered potential for a given posterior ``p`` and exponent ``t``."""
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore"):
        return tempered_potential(np.log(p) - np.log1p(-p), t)


def _out(a):
    return float(a) if np.ndim(a) == 0 else a


def potential_ke(member, x):
    omega = member.model.discriminant(x)
    a_pos = member.w_pos(omega) * member.priors.p_pos
    a_neg = member.w_neg(omega) * member.priors.p_neg
    return _out(softmax_potential(a_pos, a_neg))


def potential_ka(member, x):
    omega = member.model.discriminant(x)
    t = density_weight(member.y_global(member.model.project(x)), member._y_mu)
    r = _log_odds(member.w_pos(omega), member.w_neg(omega), member.priors)
    return _out(tempered_potential(r, t))


def potential_kb_kc(member, x):
    omega = member.model.discriminant(x)
    proj = member.model.project(x)
    a_pos = member.w_pos(omega) * member.y_pos(proj) * member.priors.p_pos
    a_neg = member.w_neg(omega) * member.y_neg(proj) * member.priors.p_neg
    return _out(softmax_potential(a_pos, a_neg))


_SCORERS = {
    "avg": score_average,
    "vote": score_vote,
    "sigmoid": score_sigmoid,
    "param": score_parametric,
    "ke": potential_ke,
    "ka": potential_ka,
    "kb": potential_kb_kc,
    "kc": potential_kb_kc,
}


def score(member, x):
    return _SCORERS[member.strategy](member, x)


def fit_member(model, bag, strategy, zeta=DEFAULT_ZETA):
    """Attach the density estimates ``strategy`` needs, fitted on ``bag``."""
    if strategy not in STRATEGIES:
        raise InputError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    if len(bag) == 0:
        raise FitError("empty bag")
    if strategy == "param" and not zeta > 0:
        raise InputError(f"zeta must be positive, got {zeta}")
    priors = ClassPriors.from_labels(bag.labels)
    if strategy not in POTENTIAL_STRATEGIES:
        return ScoredMember(model, strategy, priors, zeta=zeta)
    if not bag.has_both_classes():
        raise FitError("potential strategies need both classes in the bag")

    pos, neg = bag.labels == 1, bag.labels == -1
    omega = model.discriminant(bag.points)
    fields = dict(w_pos=Kde1D.fit(omega[pos]), w_neg=Kde1D.fit(omega[neg]))
    if strategy in ("ka", "kb", "kc"):
        proj = model.project(bag.points)
        if strategy == "ka":
            fields["y_global"] = fit_gaussian_mle(proj)
        else:
            fit = fit_gaussian_mle if strategy == "kb" else NaiveKde.fit
            fields["y_pos"] = fit(proj[pos])
            fields["y_neg"] = fit(proj[neg])
    return ScoredMember(model, strategy, priors, zeta=zeta, **fields)
