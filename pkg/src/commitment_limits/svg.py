"""Minimal deterministic SVG line charts (fixed viewport, fixed number format)."""
from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=60, right=20, top=36, bottom=44)
PALETTE = ("#1f4e79", "#b03a2e", "#1e8449", "#7d3c98", "#af601a")
BAND_COLORS = ("#f5cba7", "#aed6f1", "#abebc6")


def _f(v: float) -> str:
    return "%.2f" % v


@dataclass
class Chart:
    title: str
    x_range: tuple[float, float]
    y_range: tuple[float, float] | None = None
    series: list[tuple[str, np.ndarray, np.ndarray, bool]] = field(default_factory=list)
    marks: list[tuple[str, float, float]] = field(default_factory=list)
    bands: list[tuple[str, list[tuple[float, float]]]] = field(default_factory=list)

    def line(self, label: str, xs, ys, dashed: bool = False) -> "Chart":
        self.series.append((label, np.asarray(xs, float), np.asarray(ys, float), dashed))
        return self

    def mark(self, label: str, x: float, y: float) -> "Chart":
        self.marks.append((label, float(x), float(y)))
        return self

    def band(self, label: str, spans) -> "Chart":
        self.bands.append((label, [(float(a), float(b)) for a, b in spans]))
        return self

    def _yr(self) -> tuple[float, float]:
        if self.y_range is not None:
            return self.y_range
        ys = np.concatenate([s[2][np.isfinite(s[2])] for s in self.series] + [np.array([m[2] for m in self.marks])])
        lo, hi = float(np.min(ys)), float(np.max(ys))
        pad = 0.05 * (hi - lo or 1.0)
        return lo - pad, hi + pad

    def render(self) -> str:
        x0, x1 = self.x_range
        y0, y1 = self._yr()
        L, R, T, B = MARGIN["left"], MARGIN["right"], MARGIN["top"], MARGIN["bottom"]
        pw, ph = WIDTH - L - R, HEIGHT - T - B
        sx = lambda x: L + (x - x0) / (x1 - x0) * pw
        sy = lambda y: T + (1 - (y - y0) / (y1 - y0)) * ph
        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
               f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
               f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
               f'<text x="{WIDTH // 2}" y="20" text-anchor="middle" font-size="13">{escape(self.title)}</text>']
        # shaded sets as strips along the bottom of the plot area
        for k, (label, spans) in enumerate(self.bands):
            color = BAND_COLORS[k % len(BAND_COLORS)]
            y = T + ph - 8 * (k + 1)
            for a, b in spans:
                w = max(sx(b) - sx(a), 1.5)
                out.append(f'<rect x="{_f(sx(a))}" y="{_f(y)}" width="{_f(w)}" height="6" fill="{color}">'
                           f'<title>{escape(label)}</title></rect>')
        out.append(f'<rect x="{L}" y="{T}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>')
        for i in range(5):
            xv = x0 + i * (x1 - x0) / 4
            yv = y0 + i * (y1 - y0) / 4
            out.append(f'<text x="{_f(sx(xv))}" y="{T + ph + 16}" text-anchor="middle">{xv:.3g}</text>')
            out.append(f'<text x="{L - 6}" y="{_f(sy(yv) + 4)}" text-anchor="end">{yv:.3g}</text>')
        for k, (label, xs, ys, dashed) in enumerate(self.series):
            ok = np.isfinite(ys)
            pts = " ".join(f"{_f(sx(x))},{_f(sy(y))}" for x, y in zip(xs[ok], ys[ok]))
            dash = ' stroke-dasharray="5,4"' if dashed else ""
            color = PALETTE[k % len(PALETTE)]
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.6"{dash} points="{pts}"/>')
            out.append(f'<text x="{L + 8}" y="{T + 14 + 14 * k}" fill="{color}">{escape(label)}</text>')
        for label, x, y in self.marks:
            out.append(f'<circle cx="{_f(sx(x))}" cy="{_f(sy(y))}" r="3.5" fill="#000"/>')
            out.append(f'<text x="{_f(sx(x) + 5)}" y="{_f(sy(y) - 6)}">{escape(label)}</text>')
        legend_y = T + ph + 32
        for k, (label, _) in enumerate(self.bands):
            color = BAND_COLORS[k % len(BAND_COLORS)]
            xk = L + 150 * k
            out.append(f'<rect x="{xk}" y="{legend_y - 8}" width="12" height="8" fill="{color}"/>')
            out.append(f'<text x="{xk + 16}" y="{legend_y}">{escape(label)}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"
