"""Dataset container, CSV/ARFF readers and synthetic generators."""
import csv
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InputError

log = logging.getLogger(__name__)

MISSING = {"", "?"}


@dataclass(frozen=True, eq=False)
class Dataset:
    name: str
    X: np.ndarray
    y: np.ndarray
    class_names: tuple
    feature_names: tuple = field(default=())

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        y = np.asarray(self.y).astype(int)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise InputError(f"{self.name}: feature matrix must be n x d with n, d >= 1, got {X.shape}")
        if y.shape != (X.shape[0],):
            raise InputError(f"{self.name}: {X.shape[0]} rows but {y.shape} labels")
        if not np.all(np.isfinite(X)):
            raise InputError(f"{self.name}: features contain missing or non-finite values")
        C = len(self.class_names)
        if C < 2:
            raise InputError(f"{self.name}: need at least two classes, found {C}")
        present = np.unique(y)
        if present.size != C or present[0] != 0 or present[-1] != C - 1:
            raise InputError(f"{self.name}: labels must cover 0..{C - 1}, found {present.tolist()}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "class_names", tuple(self.class_names))
        object.__setattr__(self, "feature_names", tuple(self.feature_names))

    @property
    def n_classes(self):
        return len(self.class_names)

    @property
    def class_counts(self):
        return np.bincount(self.y, minlength=self.n_classes)

    @property
    def imbalance_ratio(self):
        """Largest class count over smallest class count."""
        counts = self.class_counts
        return float(counts.max() / counts.min())


def _is_number(s):
    try:
        float(s)
    except ValueError:
        return False
    return True


def _encode(name, header, rows, label_idx, nominal_values=None):
    """Turn string rows into a Dataset.

    Numeric columns become floats; any other column is one-hot encoded with
    categories in ``nominal_values[col]`` order when given, else in order of
    first appearance. Rows containing a missing cell are dropped.
    """
    nominal_values = nominal_values or {}
    kept = [r for r in rows if not any(c.strip() in MISSING for c in r)]
    dropped = len(rows) - len(kept)
    if dropped:
        log.warning("%s: dropped %d row(s) with missing values", name, dropped)
    if not kept:
        raise InputError(f"{name}: no complete rows left")

    labels_raw = [r[label_idx].strip() for r in kept]
    class_names = list(dict.fromkeys(labels_raw))
    lookup = {c: k for k, c in enumerate(class_names)}
    y = np.array([lookup[v] for v in labels_raw])

    columns, names = [], []
    for j, col_name in enumerate(header):
        if j == label_idx:
            continue
        values = [r[j].strip() for r in kept]
        if j not in nominal_values and all(_is_number(v) for v in values):
            columns.append(np.array(values, dtype=float)[:, None])
            names.append(col_name)
            continue
        cats = list(nominal_values.get(j, ())) or list(dict.fromkeys(values))
        unknown = set(values) - set(cats)
        if unknown:
            raise InputError(f"{name}: column {col_name!r} has undeclared values {sorted(unknown)}")
        onehot = np.array([[v == c for c in cats] for v in values], dtype=float)
        columns.append(onehot)
        names.extend(f"{col_name}={c}" for c in cats)
    if not columns:
        raise InputError(f"{name}: no feature columns")
    return Dataset(name, np.hstack(columns), y, tuple(class_names), tuple(names))


def load_csv(path, label_column=-1, header=True, delimiter=","):
    """Read a delimited text file into a Dataset.

    ``label_column`` is a column name (requires ``header``) or an index;
    negative indices count from the end.
    """
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh, delimiter=delimiter) if r and any(c.strip() for c in r)]
    except (OSError, UnicodeDecodeError, csv.Error) as exc:
        raise InputError(f"{path}: cannot read CSV: {exc}") from exc
    if not rows:
        raise InputError(f"{path}: file is empty")
    if header:
        names, rows = [c.strip() for c in rows[0]], rows[1:]
    else:
        names = [f"x{j}" for j in range(len(rows[0]))]
    width = len(names)
    for k, r in enumerate(rows):
        if len(r) != width:
            line = k + (2 if header else 1)
            raise InputError(f"{path}:{line}: expected {width} fields, got {len(r)}")

    if isinstance(label_column, str) and not _is_int(label_column):
        if label_column not in names:
            raise InputError(f"{path}: no column named {label_column!r}")
        label_idx = names.index(label_column)
    else:
        label_idx = int(label_column)
        if not -width <= label_idx < width:
            raise InputError(f"{path}: label column {label_idx} out of range for {width} columns")
        label_idx %= width
    return _encode(path.stem, names, rows, label_idx)


def _is_int(s):
    return bool(re.fullmatch(r"-?\d+", s.strip()))


_ATTR_RE = re.compile(r"@attribute\s+('[^']*'|\"[^\"]*\"|\S+)\s+(.+)$", re.IGNORECASE)


def _unquote(s):
    s = s.strip()
    if len(s) >= 2 and s[0] == s[-1] and s[0] in "'\"":
        return s[1:-1]
    return s


def load_arff(path):
    """Read a dense ARFF (or KEEL-style .dat) file into a Dataset.

    The label is the attribute named by ``@outputs``, else one named
    ``class`` (any case), else the last attribute.
    """
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"{path}: cannot read ARFF: {exc}") from exc

    names, nominal, outputs = [], {}, None
    data_start = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        low = line.lower()
        if low.startswith("@relation"):
            continue
        if low.startswith("@attribute"):
            m = _ATTR_RE.match(line)
            if not m:
                raise InputError(f"{path}:{lineno}: malformed attribute line: {line!r}")
            attr, kind = _unquote(m.group(1)), m.group(2).strip()
            if kind.startswith("{"):
                if not kind.endswith("}"):
                    raise InputError(f"{path}:{lineno}: unterminated nominal list: {line!r}")
                values = next(csv.reader([kind[1:-1]], skipinitialspace=True, quotechar="'"))
                nominal[len(names)] = [_unquote(v) for v in values]
            elif not re.match(r"(numeric|real|integer)\b", kind, re.IGNORECASE):
                raise InputError(f"{path}:{lineno}: unsupported attribute type: {line!r}")
            names.append(attr)
        elif low.startswith("@inputs"):
            continue
        elif low.startswith("@output"):
            outputs = line.split(None, 1)[1].strip() if " " in line else None
        elif low.startswith("@data"):
            data_start = lineno
            break
        else:
            raise InputError(f"{path}:{lineno}: unexpected header line: {line!r}")
    if data_start is None:
        raise InputError(f"{path}: missing @data section")
    if len(names) < 2:
        raise InputError(f"{path}: need at least one feature and a class attribute")

    rows = []
    for lineno, raw in enumerate(lines[data_start:], start=data_start + 1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("{"):
            raise InputError(f"{path}:{lineno}: sparse ARFF rows are not supported")
        row = [_unquote(v) for v in next(csv.reader([line], skipinitialspace=True, quotechar="'"))]
        if len(row) != len(names):
            raise InputError(f"{path}:{lineno}: expected {len(names)} values, got {len(row)}")
        rows.append(row)

    lowered = [n.lower() for n in names]
    if outputs and outputs in names:
        label_idx = names.index(outputs)
    elif "class" in lowered:
        label_idx = lowered.index("class")
    else:
        label_idx = len(names) - 1
    nominal.pop(label_idx, None)
    return _encode(path.stem, names, rows, label_idx, nominal)


def load_dataset(path, **kwargs):
    """Pick the reader from the file extension (``.arff``/``.dat`` or CSV).

    Keyword arguments go to ``load_csv`` and are ignored for ARFF files.
    """
    path = Path(path)
    if path.suffix.lower() in (".arff", ".dat"):
        return load_arff(path)
    return load_csv(path, **kwargs)


def sample_path(name):
    """Path of a bundled sample dataset, e.g. ``sample_path("banana.csv")``."""
    return Path(__file__).with_name("data") / name


def make_banana(n=200, noise=0.15, seed=0):
    """Two interleaved crescents with ``n`` points each.

    Class ``"a"`` lies on the upper unit half-circle centred at
    ``(-0.5, -0.25)``, class ``"b"`` on the lower one centred at
    ``(0.5, 0.25)``, so the point cloud is centred near the origin. Isotropic
    Gaussian noise of scale ``noise`` is added.
    """
    if n < 1 or noise < 0:
        raise InputError("need n >= 1 and noise >= 0")
    rng = np.random.default_rng(seed)
    t_a = rng.uniform(0.0, np.pi, n)
    t_b = rng.uniform(0.0, np.pi, n)
    a = np.column_stack([np.cos(t_a) - 0.5, np.sin(t_a) - 0.25])
    b = np.column_stack([0.5 - np.cos(t_b), 0.25 - np.sin(t_b)])
    X = np.vstack([a, b]) + rng.normal(0.0, noise, (2 * n, 2))
    y = np.repeat([0, 1], n)
    return Dataset("banana", X, y, ("a", "b"), ("x1", "x2"))


def make_blobs(n=400, n_classes=2, separation=4.0, sigma=1.0, dim=2, seed=0):
    """Isotropic Gaussian classes with centres ``separation * sigma`` apart.

    Centres sit at ``k * separation * sigma`` along the first axis, and the
    ``n`` points are split as evenly as possible between classes.
    """
    if n < n_classes or n_classes < 2:
        raise InputError("need n >= n_classes >= 2")
    rng = np.random.default_rng(seed)
    y = np.arange(n) % n_classes
    centres = np.zeros((n_classes, dim))
    centres[:, 0] = np.arange(n_classes) * separation * sigma
    X = centres[y] + rng.normal(0.0, sigma, (n, dim))
    names = tuple(f"c{k}" for k in range(n_classes))
    return Dataset(f"blobs{n_classes}", X, y, names, tuple(f"x{j + 1}" for j in range(dim)))
