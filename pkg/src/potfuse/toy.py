"""Two-dimensional walk-through of potential construction, rendered as SVG."""
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .density import kde1d_pdf
from .errors import InputError
from .io_data import make_banana
from .linear_models import TrainSet, train_nearest_centroid
from .reporting import atomic_write
from .scoring import fit_member, score
from .svgplot import COLORS, Figure

GRID = 60

FILES = (
    "toy_scatter.svg",
    "toy_ke_densities.svg",
    "toy_projected_density.svg",
    "toy_potential_ka.svg",
    "toy_potential_kb.svg",
    "toy_potential_kc.svg",
)


@dataclass
class ToyResult:
    model: object
    members: dict
    omega_grid: np.ndarray = None
    density_curves: dict = field(default_factory=dict)
    grid_x: np.ndarray = None
    grid_y: np.ndarray = None
    potentials: dict = field(default_factory=dict)
    svgs: dict = field(default_factory=dict)


def build_toy(data=None, seed=0, grid=GRID):
    """Fit one nearest-centroid model and its KE/KA/KB/KC members on 2-D data.

    The first class is the positive one. Returns the fitted objects, the
    curves and grids that were drawn, and the SVG texts keyed by file name.
    """
    data = data if data is not None else make_banana(seed=seed)
    if data.X.shape[1] != 2:
        raise InputError(f"toy example needs 2-D data, got {data.X.shape[1]} features")
    if data.n_classes != 2:
        raise InputError(f"toy example needs two classes, got {data.n_classes}")
    t = TrainSet(data.X, np.where(data.y == 0, 1, -1))
    model = train_nearest_centroid(t)
    members = {s: fit_member(model, t, s) for s in ("ke", "ka", "kb", "kc")}
    res = ToyResult(model, members)
    pos, neg = t.labels == 1, t.labels == -1
    names = [str(c) for c in data.class_names]

    # decision boundary
    lo, hi = data.X.min(axis=0), data.X.max(axis=0)
    pad = 0.15 * (hi - lo)
    xlim, ylim = (lo[0] - pad[0], hi[0] + pad[0]), (lo[1] - pad[1], hi[1] + pad[1])
    fig = Figure(xlim, ylim, "Nearest-centroid decision boundary", "x1", "x2")
    fig.points(data.X[pos, 0], data.X[pos, 1], COLORS[0], "circle")
    fig.points(data.X[neg, 0], data.X[neg, 1], COLORS[1], "triangle")
    n, b = model.hyperplane.normal, model.hyperplane.offset
    foot = -b * n
    span = np.linalg.norm(hi - lo) * 2
    direction = model.basis[0]
    ends = np.array([foot - span * direction, foot + span * direction])
    fig.line(ends[:, 0], ends[:, 1], "black", 2.0)
    centre = data.X.mean(axis=0)
    centre = centre - (centre @ n + b) * n
    arrow = np.array([centre, centre + 0.5 * n])
    fig.line(arrow[:, 0], arrow[:, 1], COLORS[2], 2.0)
    fig.legend(names, COLORS[:2])
    res.svgs[FILES[0]] = fig.render()

    # class-conditional densities of the discriminant
    ke = members["ke"]
    hs = max(ke.w_pos.bandwidth, ke.w_neg.bandwidth)
    omega = model.discriminant(t.points)
    og = np.linspace(omega.min() - 6 * hs, omega.max() + 6 * hs, 801)
    curves = {names[0]: kde1d_pdf(ke.w_pos, og), names[1]: kde1d_pdf(ke.w_neg, og)}
    res.omega_grid, res.density_curves = og, curves
    top = max(c.max() for c in curves.values()) * 1.1
    fig = Figure((og[0], og[-1]), (0.0, top), "Class-conditional discriminant densities (KDE)",
                 "discriminant", "density")
    for k, (lab, c) in enumerate(curves.items()):
        fig.line(og, c, COLORS[k])
    fig.legend(names, COLORS[:2])
    res.svgs[FILES[1]] = fig.render()

    # density of the projections onto the plane basis (1-D for 2-D data)
    ka = members["ka"]
    proj = model.project(t.points)[:, 0]
    sd = np.sqrt(ka.y_global.covariance[0, 0])
    pg = np.linspace(proj.min() - 3 * sd, proj.max() + 3 * sd, 401)
    pdf = ka.y_global(pg[:, None])
    heights, edges = np.histogram(proj, bins=20, density=True)
    fig = Figure((pg[0], pg[-1]), (0.0, max(pdf.max(), heights.max()) * 1.1),
                 "Projection onto the plane basis: Gaussian fit", "basis coordinate", "density")
    fig.bars(edges, heights, COLORS[2])
    fig.line(pg, pdf, "black", 2.0)
    res.svgs[FILES[2]] = fig.render()

    # potential maps
    gx = np.linspace(*xlim, grid)
    gy = np.linspace(*ylim, grid)
    pts = np.array([(xv, yv) for yv in gy for xv in gx])
    res.grid_x, res.grid_y = gx, gy
    titles = {"ka": "Potential KA", "kb": "Potential KB (Gaussian)", "kc": "Potential KC (naive KDE)"}
    for fname, s in zip(FILES[3:], ("ka", "kb", "kc")):
        vals = np.asarray(score(members[s], pts)).reshape(grid, grid)
        res.potentials[s] = vals
        fig = Figure(xlim, ylim, titles[s], "x1", "x2")
        fig.heatmap(gx, gy, vals)
        fig.points(data.X[pos, 0], data.X[pos, 1], "#222222", "circle", r=1.5)
        fig.points(data.X[neg, 0], data.X[neg, 1], "#222222", "triangle", r=1.5)
        fig.line(ends[:, 0], ends[:, 1], "black", 1.5, dash="4 3")
        res.svgs[fname] = fig.render()
    return res


def write_toy(out_dir, data=None, seed=0):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    res = build_toy(data, seed)
    for name, text in res.svgs.items():
        atomic_write(out / name, text)
    return res
