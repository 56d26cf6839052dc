"""Minimal static SVG line-plot emitter (no plotting library required)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

COLORS = ("#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b")
DASHES = ("", "2,3", "6,4", "6,3,2,3", "1,2", "8,2")


@dataclass
class Series:
    x: list
    y: list
    label: str
    color: str = ""
    dash: str = ""


@dataclass
class Plot:
    title: str
    xlabel: str
    ylabel: str
    logy: bool = False
    width: int = 720
    height: int = 480
    series: list = field(default_factory=list)
    shaded: list = field(default_factory=list)  # (x0, x1) spans

    def add(self, x, y, label, color="", dash=""):
        k = len(self.series)
        self.series.append(Series(list(x), list(y), label,
                                  color or COLORS[k % len(COLORS)], dash or DASHES[k % len(DASHES)]))

    def shade(self, x0, x1):
        self.shaded.append((x0, x1))

    def _ty(self, v):
        return math.log10(v) if self.logy else v

    def _points(self, s):
        for x, y in zip(s.x, s.y):
            if not math.isfinite(x) or not math.isfinite(y) or (self.logy and y <= 0):
                continue
            yield x, self._ty(y)

    def render(self):
        left, right, top, bottom = 80, 20, 40, 60
        pw, ph = self.width - left - right, self.height - top - bottom
        pts = [p for s in self.series for p in self._points(s)]
        if pts:
            x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
            y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
        else:
            x0, x1, y0, y1 = 0.0, 1.0, 0.0, 1.0
        if x1 == x0:
            x1 = x0 + 1.0
        if y1 == y0:
            y0, y1 = y0 - 0.5, y1 + 0.5
        pad = 0.05 * (y1 - y0)
        y0, y1 = y0 - pad, y1 + pad

        def sx(x):
            return left + (x - x0) / (x1 - x0) * pw

        def sy(y):
            return top + ph - (y - y0) / (y1 - y0) * ph

        out = [
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" '
            f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">',
            f'<rect x="0" y="0" width="{self.width}" height="{self.height}" fill="white"/>',
        ]
        for a, b in self.shaded:
            a, b = max(a, x0), min(b, x1)
            if b > a:
                out.append(f'<rect x="{sx(a):.2f}" y="{top}" width="{sx(b) - sx(a):.2f}" '
                           f'height="{ph}" fill="#bbbbbb" fill-opacity="0.6"/>')
        out.append(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" '
                   f'stroke="black"/>')
        for i in range(6):
            xv = x0 + i * (x1 - x0) / 5
            out.append(f'<line x1="{sx(xv):.2f}" y1="{top + ph}" x2="{sx(xv):.2f}" '
                       f'y2="{top + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{sx(xv):.2f}" y="{top + ph + 20}" font-size="12" '
                       f'text-anchor="middle">{xv:.3g}</text>')
        if self.logy:
            ticks = range(math.ceil(y0), math.floor(y1) + 1)
            labels = [(t, f"1e{t}") for t in ticks]
        else:
            labels = [(y0 + i * (y1 - y0) / 5, None) for i in range(6)]
            labels = [(t, f"{t:.3g}") for t, _ in labels]
        for t, text in labels:
            out.append(f'<line x1="{left - 5}" y1="{sy(t):.2f}" x2="{left}" y2="{sy(t):.2f}" '
                       f'stroke="black"/>')
            out.append(f'<text x="{left - 8}" y="{sy(t) + 4:.2f}" font-size="12" '
                       f'text-anchor="end">{text}</text>')
        for s in self.series:
            coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in self._points(s))
            if not coords:
                continue
            dash = f' stroke-dasharray="{s.dash}"' if s.dash else ""
            out.append(f'<polyline fill="none" stroke="{s.color}" stroke-width="1.5"{dash} '
                       f'points="{coords}"/>')
        for k, s in enumerate(self.series):
            y = top + 15 + 18 * k
            dash = f' stroke-dasharray="{s.dash}"' if s.dash else ""
            out.append(f'<line x1="{left + pw - 170}" y1="{y}" x2="{left + pw - 140}" y2="{y}" '
                       f'stroke="{s.color}" stroke-width="1.5"{dash}/>')
            out.append(f'<text x="{left + pw - 135}" y="{y + 4}" font-size="12">'
                       f'{escape(s.label)}</text>')
        out.append(f'<text x="{left + pw / 2}" y="22" font-size="15" text-anchor="middle">'
                   f'{escape(self.title)}</text>')
        out.append(f'<text x="{left + pw / 2}" y="{self.height - 15}" font-size="13" '
                   f'text-anchor="middle">{escape(self.xlabel)}</text>')
        out.append(f'<text x="18" y="{top + ph / 2}" font-size="13" text-anchor="middle" '
                   f'transform="rotate(-90 18 {top + ph / 2})">{escape(self.ylabel)}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"
