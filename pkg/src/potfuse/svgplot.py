"""Tiny dependency-free SVG figures for the 2-D toy example.

Output is deterministic text: coordinates are printed with fixed precision
so identical inputs give byte-identical files.
"""
from xml.sax.saxutils import escape

import numpy as np

W, H = 480, 360
MARGIN = 50
COLORS = ("#d62728", "#2ca02c", "#1f77b4", "#ff7f0e")


def _f(v):
    return f"{v:.2f}"


class Figure:
    def __init__(self, xlim, ylim, title="", xlabel="", ylabel=""):
        self.xlim, self.ylim = xlim, ylim
        self.parts = []
        self.title, self.xlabel, self.ylabel = title, xlabel, ylabel

    def sx(self, x):
        lo, hi = self.xlim
        return MARGIN + (np.asarray(x) - lo) / (hi - lo) * (W - 2 * MARGIN)

    def sy(self, y):
        lo, hi = self.ylim
        return H - MARGIN - (np.asarray(y) - lo) / (hi - lo) * (H - 2 * MARGIN)

    def points(self, x, y, color, marker="circle", r=2.5):
        for px, py in zip(self.sx(x), self.sy(y)):
            if marker == "circle":
                self.parts.append(f'<circle cx="{_f(px)}" cy="{_f(py)}" r="{r}" fill="none" stroke="{color}"/>')
            else:
                pts = f"{_f(px)},{_f(py - r)} {_f(px - r)},{_f(py + r)} {_f(px + r)},{_f(py + r)}"
                self.parts.append(f'<polygon points="{pts}" fill="none" stroke="{color}"/>')

    def line(self, x, y, color, width=1.5, dash=None):
        pts = " ".join(f"{_f(a)},{_f(b)}" for a, b in zip(self.sx(x), self.sy(y)))
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="{width}"{extra}/>')

    def bars(self, edges, heights, color):
        base = self.sy(0.0)
        for lo, hi, h in zip(edges[:-1], edges[1:], heights):
            x0, x1, top = self.sx(lo), self.sx(hi), self.sy(h)
            self.parts.append(
                f'<rect x="{_f(x0)}" y="{_f(top)}" width="{_f(x1 - x0)}" height="{_f(base - top)}" '
                f'fill="{color}" fill-opacity="0.3" stroke="{color}"/>'
            )

    def heatmap(self, xs, ys, values, vmin=-0.5, vmax=0.5):
        """``values[i, j]`` is drawn at ``(xs[j], ys[i])`` with a diverging map."""
        dx = (xs[1] - xs[0]) if len(xs) > 1 else 1.0
        dy = (ys[1] - ys[0]) if len(ys) > 1 else 1.0
        for i, yv in enumerate(ys):
            for j, xv in enumerate(xs):
                x0, x1 = self.sx(xv - dx / 2), self.sx(xv + dx / 2)
                y0, y1 = self.sy(yv + dy / 2), self.sy(yv - dy / 2)
                self.parts.append(
                    f'<rect x="{_f(x0)}" y="{_f(y0)}" width="{_f(x1 - x0 + 0.3)}" '
                    f'height="{_f(y1 - y0 + 0.3)}" fill="{diverging(values[i, j], vmin, vmax)}"/>'
                )

    def legend(self, labels, colors):
        for k, (lab, col) in enumerate(zip(labels, colors)):
            y = MARGIN + 14 * k
            self.parts.append(f'<rect x="{W - MARGIN - 90}" y="{y - 8}" width="10" height="10" fill="{col}"/>')
            self.parts.append(f'<text x="{W - MARGIN - 75}" y="{y + 1}" font-size="11">{escape(lab)}</text>')

    def render(self):
        x0, y0, x1, y1 = MARGIN, MARGIN, W - MARGIN, H - MARGIN
        head = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
            '<rect width="100%" height="100%" fill="white"/>',
            f'<clipPath id="plot"><rect x="{x0}" y="{y0}" width="{x1 - x0}" height="{y1 - y0}"/></clipPath>',
            '<g clip-path="url(#plot)">',
        ]
        tail = [
            "</g>",
            f'<rect x="{x0}" y="{y0}" width="{x1 - x0}" height="{y1 - y0}" fill="none" stroke="black"/>',
            f'<text x="{W / 2}" y="25" font-size="14" text-anchor="middle">{escape(self.title)}</text>',
            f'<text x="{W / 2}" y="{H - 12}" font-size="12" text-anchor="middle">{escape(self.xlabel)}</text>',
            f'<text x="14" y="{H / 2}" font-size="12" text-anchor="middle" '
            f'transform="rotate(-90 14 {H / 2})">{escape(self.ylabel)}</text>',
        ]
        for v, pos in ((self.xlim[0], x0), (self.xlim[1], x1)):
            tail.append(f'<text x="{_f(pos)}" y="{y1 + 14}" font-size="10" text-anchor="middle">{v:.3g}</text>')
        for v, pos in ((self.ylim[0], y1), (self.ylim[1], y0)):
            tail.append(f'<text x="{x0 - 4}" y="{_f(pos)}" font-size="10" text-anchor="end">{v:.3g}</text>')
        return "\n".join(head + self.parts + tail + ["</svg>", ""])


def diverging(v, vmin=-0.5, vmax=0.5):
    """Blue (vmin) - white (midpoint) - red (vmax)."""
    t = float(np.clip((v - vmin) / (vmax - vmin), 0.0, 1.0))
    if t < 0.5:
        s = t / 0.5
        r, g, b = int(round(40 + 215 * s)), int(round(90 + 165 * s)), 255
    else:
        s = (t - 0.5) / 0.5
        r, g, b = 255, int(round(255 - 200 * s)), int(round(255 - 215 * s))
    return f"#{r:02x}{g:02x}{b:02x}"
