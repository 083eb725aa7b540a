"""Minimal self-contained SVG charts.

Rendering is a pure function of the input rows: no timestamps, random
ids, fonts, or external assets, so the same data always produces the
same bytes.
"""

from __future__ import annotations

from typing import Sequence

PALETTE = (
    "#1f77b4",
    "#ff7f0e",
    "#2ca02c",
    "#d62728",
    "#9467bd",
    "#8c564b",
    "#e377c2",
    "#7f7f7f",
    "#17becf",
    "#bcbd22",
)

_FONT = "font-family=\"sans-serif\""


def _fmt(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".")


def _tick_label(x: float) -> str:
    return f"{x:.6g}"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def line_chart(
    series: Sequence[tuple[str, Sequence[tuple[float, float]]]],
    title: str = "",
    x_label: str = "",
    y_label: str = "",
    width: int = 840,
    height: int = 520,
    y_range: tuple[float, float] | None = None,
) -> str:
    """Render labelled polylines with axes and a legend."""
    margin_l, margin_r, margin_t, margin_b = 70, 180, 50, 60
    plot_w = width - margin_l - margin_r
    plot_h = height - margin_t - margin_b

    xs = [x for _, pts in series for x, _ in pts]
    ys = [y for _, pts in series for _, y in pts]
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    x_lo, x_hi = min(xs), max(xs)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_range is not None:
        y_lo, y_hi = y_range
    else:
        y_lo, y_hi = min(ys), max(ys)
        if y_hi == y_lo:
            y_hi = y_lo + 1.0
        pad = 0.05 * (y_hi - y_lo)
        y_lo, y_hi = y_lo - pad, y_hi + pad

    def px(x: float) -> float:
        return margin_l + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return margin_t + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width // 2}" y="28" text-anchor="middle" {_FONT} '
            f'font-size="16">{_escape(title)}</text>'
        )
    # axes
    parts.append(
        f'<rect x="{margin_l}" y="{margin_t}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#333333" stroke-width="1"/>'
    )
    for t in _ticks(x_lo, x_hi):
        x = px(t)
        parts.append(
            f'<line x1="{_fmt(x)}" y1="{margin_t + plot_h}" x2="{_fmt(x)}" '
            f'y2="{margin_t + plot_h + 5}" stroke="#333333"/>'
        )
        parts.append(
            f'<text x="{_fmt(x)}" y="{margin_t + plot_h + 20}" text-anchor="middle" '
            f'{_FONT} font-size="11">{_tick_label(t)}</text>'
        )
    for t in _ticks(y_lo, y_hi):
        y = py(t)
        parts.append(
            f'<line x1="{margin_l - 5}" y1="{_fmt(y)}" x2="{margin_l}" '
            f'y2="{_fmt(y)}" stroke="#333333"/>'
        )
        parts.append(
            f'<text x="{margin_l - 9}" y="{_fmt(y + 4)}" text-anchor="end" '
            f'{_FONT} font-size="11">{_tick_label(t)}</text>'
        )
    if x_label:
        parts.append(
            f'<text x="{margin_l + plot_w // 2}" y="{height - 15}" '
            f'text-anchor="middle" {_FONT} font-size="13">{_escape(x_label)}</text>'
        )
    if y_label:
        cy = margin_t + plot_h // 2
        parts.append(
            f'<text x="18" y="{cy}" text-anchor="middle" {_FONT} font-size="13" '
            f'transform="rotate(-90 18 {cy})">{_escape(y_label)}</text>'
        )
    # data
    for i, (label, pts) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        if pts:
            coords = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in pts)
            parts.append(
                f'<polyline points="{coords}" fill="none" stroke="{color}" '
                'stroke-width="1.8"/>'
            )
        ly = margin_t + 14 + i * 18
        lx = margin_l + plot_w + 12
        parts.append(
            f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
            f'stroke="{color}" stroke-width="3"/>'
        )
        parts.append(
            f'<text x="{lx + 28}" y="{ly}" {_FONT} font-size="11">{_escape(label)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def bar_chart(
    groups: Sequence[str],
    series: Sequence[tuple[str, Sequence[float]]],
    title: str = "",
    y_label: str = "",
    width: int = 840,
    height: int = 520,
    y_range: tuple[float, float] = (0.0, 1.0),
) -> str:
    """Render grouped vertical bars; one bar per (group, series)."""
    margin_l, margin_r, margin_t, margin_b = 70, 180, 50, 60
    plot_w = width - margin_l - margin_r
    plot_h = height - margin_t - margin_b
    y_lo, y_hi = y_range

    def py(y: float) -> float:
        return margin_t + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width // 2}" y="28" text-anchor="middle" {_FONT} '
            f'font-size="16">{_escape(title)}</text>'
        )
    parts.append(
        f'<rect x="{margin_l}" y="{margin_t}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#333333" stroke-width="1"/>'
    )
    for t in _ticks(y_lo, y_hi):
        y = py(t)
        parts.append(
            f'<line x1="{margin_l - 5}" y1="{_fmt(y)}" x2="{margin_l}" '
            f'y2="{_fmt(y)}" stroke="#333333"/>'
        )
        parts.append(
            f'<text x="{margin_l - 9}" y="{_fmt(y + 4)}" text-anchor="end" '
            f'{_FONT} font-size="11">{_tick_label(t)}</text>'
        )
    if y_label:
        cy = margin_t + plot_h // 2
        parts.append(
            f'<text x="18" y="{cy}" text-anchor="middle" {_FONT} font-size="13" '
            f'transform="rotate(-90 18 {cy})">{_escape(y_label)}</text>'
        )
    n_groups = max(len(groups), 1)
    n_series = max(len(series), 1)
    group_w = plot_w / n_groups
    bar_w = group_w * 0.8 / n_series
    for gi, group in enumerate(groups):
        gx = margin_l + gi * group_w
        parts.append(
            f'<text x="{_fmt(gx + group_w / 2)}" y="{margin_t + plot_h + 20}" '
            f'text-anchor="middle" {_FONT} font-size="11">{_escape(group)}</text>'
        )
        for si, (label, values) in enumerate(series):
            if gi >= len(values):
                continue
            v = values[gi]
            x = gx + group_w * 0.1 + si * bar_w
            y = py(v)
            h = margin_t + plot_h - y
            color = PALETTE[si % len(PALETTE)]
            parts.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(bar_w)}" '
                f'height="{_fmt(h)}" fill="{color}"/>'
            )
    for si, (label, _) in enumerate(series):
        color = PALETTE[si % len(PALETTE)]
        ly = margin_t + 14 + si * 18
        lx = margin_l + plot_w + 12
        parts.append(
            f'<rect x="{lx}" y="{ly - 10}" width="12" height="12" fill="{color}"/>'
        )
        parts.append(
            f'<text x="{lx + 18}" y="{ly}" {_FONT} font-size="11">{_escape(label)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    )
