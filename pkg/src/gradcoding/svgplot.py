"""Minimal hand-emitted SVG line charts. No plotting dependency; the output
is a standalone SVG 1.1 document."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

_PALETTE = [
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#7f7f7f",
]

_W, _H = 640, 420
_ML, _MR, _MT, _MB = 64, 24, 36, 52


def _esc(text: str) -> str:
    return (
        str(text)
        .replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min((s for s in (1 * mag, 2 * mag, 5 * mag, 10 * mag) if s >= raw))
    start = math.ceil(lo / step) * step
    out = []
    v = start
    while v <= hi + 1e-12 * step:
        out.append(round(v, 12))
        v += step
    return out or [lo]


def _fmt(v: float) -> str:
    if v == int(v) and abs(v) < 1e6:
        return str(int(v))
    return f"{v:g}"


@dataclass(frozen=True)
class Series:
    label: str
    x: tuple
    y: tuple

    def __post_init__(self) -> None:
        if len(self.x) != len(self.y) or len(self.x) == 0:
            raise ParameterError("series needs matching nonempty x and y")


def line_chart(
    series: list[Series],
    title: str = "",
    x_label: str = "",
    y_label: str = "",
    log_y: bool = False,
) -> str:
    """Render the series as one polyline each, with axes, ticks and a legend."""
    if not series:
        raise ParameterError("need at least one series")
    xs = np.concatenate([np.asarray(s.x, dtype=float) for s in series])
    ys = np.concatenate([np.asarray(s.y, dtype=float) for s in series])
    finite = np.isfinite(xs) & np.isfinite(ys)
    if log_y:
        finite &= ys > 0
    if not finite.any():
        raise ParameterError("no finite points to plot")
    xlo, xhi = float(xs[finite].min()), float(xs[finite].max())
    yv = np.log10(ys[finite]) if log_y else ys[finite]
    ylo, yhi = float(yv.min()), float(yv.max())
    if xhi == xlo:
        xlo, xhi = xlo - 0.5, xhi + 0.5
    if yhi == ylo:
        ylo, yhi = ylo - 0.5, yhi + 0.5
    pw, ph = _W - _ML - _MR, _H - _MT - _MB

    def px(x: float) -> float:
        return _ML + (x - xlo) / (xhi - xlo) * pw

    def py(y: float) -> float:
        return _MT + ph - (y - ylo) / (yhi - ylo) * ph

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_W / 2:g}" y="22" text-anchor="middle" '
            f'font-size="15">{_esc(title)}</text>'
        )
    # axes
    parts.append(
        f'<path d="M {_ML} {_MT} V {_MT + ph} H {_ML + pw}" '
        f'fill="none" stroke="black"/>'
    )
    for tx in _ticks(xlo, xhi):
        X = px(tx)
        parts.append(f'<line x1="{X:.1f}" y1="{_MT + ph}" x2="{X:.1f}" y2="{_MT + ph + 5}" stroke="black"/>')
        parts.append(
            f'<text x="{X:.1f}" y="{_MT + ph + 18}" text-anchor="middle">{_esc(_fmt(tx))}</text>'
        )
    for ty in _ticks(ylo, yhi):
        Y = py(ty)
        lab = _fmt(10.0**ty) if log_y else _fmt(ty)
        parts.append(f'<line x1="{_ML - 5}" y1="{Y:.1f}" x2="{_ML}" y2="{Y:.1f}" stroke="black"/>')
        parts.append(
            f'<line x1="{_ML}" y1="{Y:.1f}" x2="{_ML + pw}" y2="{Y:.1f}" '
            f'stroke="#dddddd" stroke-width="0.5"/>'
        )
        parts.append(
            f'<text x="{_ML - 8}" y="{Y + 4:.1f}" text-anchor="end">{_esc(lab)}</text>'
        )
    if x_label:
        parts.append(
            f'<text x="{_ML + pw / 2:g}" y="{_H - 12}" text-anchor="middle">{_esc(x_label)}</text>'
        )
    if y_label:
        cy = _MT + ph / 2
        parts.append(
            f'<text x="16" y="{cy:g}" text-anchor="middle" '
            f'transform="rotate(-90 16 {cy:g})">{_esc(y_label)}</text>'
        )
    for idx, s in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = []
        for xv, yvv in zip(s.x, s.y):
            yq = math.log10(yvv) if log_y and yvv > 0 else yvv
            if math.isfinite(xv) and math.isfinite(yq) and not (log_y and yvv <= 0):
                pts.append(f"{px(xv):.2f},{py(yq):.2f}")
        if pts:
            parts.append(
                f'<polyline points="{" ".join(pts)}" fill="none" '
                f'stroke="{color}" stroke-width="1.6"/>'
            )
        ly = _MT + 14 + 16 * idx
        lx = _ML + pw - 150
        parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" stroke="{color}" stroke-width="1.6"/>')
        parts.append(f'<text x="{lx + 28}" y="{ly}">{_esc(s.label)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
