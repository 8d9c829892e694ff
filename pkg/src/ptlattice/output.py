"""Deterministic CSV serialization and self-contained SVG rendering.

CSV is the canonical output: identical inputs produce byte-identical files.
Every file opens with a comment line carrying the tool version and the exact
parameter set.  Floats print with 12 significant digits.  SVG plots are a
convenience rendering, well-formed XML with no external references.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping
from xml.sax.saxutils import escape

from . import __version__

SWEEP_COLUMNS = (
    "n_sites", "m", "d", "t0", "tb", "T_b",
    "gamma_c", "Gamma_c", "n_complex_above", "bracket_width",
)

_PALETTE = ("#1f6fb4", "#d95f02", "#1b9e77", "#7570b3", "#e7298a", "#66a61e")


def fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def header_comment(command: str, params: Mapping[str, object]) -> str:
    parts = [f"{key}={fmt(params[key])}" for key in sorted(params)]
    return f"# ptlattice {__version__} command={command} " + " ".join(parts)


def spectrum_csv(params: Mapping[str, object], rows, n_complex: int) -> str:
    lines = [header_comment("spectrum", params)]
    lines.append("index,re_E,im_E,classification,residual")
    for row in rows:
        lines.append(
            f"{row.index},{fmt(row.re)},{fmt(row.im)},{row.classification},{fmt(row.residual)}"
        )
    lines.append(f"# n_complex={n_complex}")
    return "\n".join(lines) + "\n"


def _record_line(rec) -> str:
    return ",".join(
        fmt(v)
        for v in (
            rec.n_sites, rec.impurity_site, rec.d, rec.t0, rec.tb, rec.tb_over_t0,
            rec.gamma_c, rec.gamma_c_over_t0, rec.n_complex_above, rec.bracket_width,
        )
    )


def threshold_csv(params: Mapping[str, object], rec) -> str:
    lines = [header_comment("threshold", params)]
    lines.append(",".join(SWEEP_COLUMNS))
    lines.append(_record_line(rec))
    return "\n".join(lines) + "\n"


def sweep_csv(params: Mapping[str, object], records, failures=()) -> str:
    lines = [header_comment("sweep", params)]
    lines.append(",".join(SWEEP_COLUMNS))
    for rec in records:
        lines.append(_record_line(rec))
    for failure in failures:
        lines.append(f"# failed d={failure.d} tb={fmt(failure.tb)} reason={failure.reason}")
    return "\n".join(lines) + "\n"


def fit_csv(params: Mapping[str, object], fits) -> str:
    lines = [header_comment("fit-exponent", params)]
    lines.append("d,eta,stderr,window_lo,window_hi,n_points")
    for fit in fits:
        lines.append(
            f"{fit.d},{fmt(fit.eta)},{fmt(fit.stderr)},"
            f"{fmt(fit.window_lo)},{fmt(fit.window_hi)},{fit.n_points}"
        )
    return "\n".join(lines) + "\n"


def sweep_svg(records, width: int = 640, height: int = 480) -> str:
    """Log-log (all T_b < 1) or linear polyline plot of Gamma_c against T_b,
    one series per impurity distance."""
    records = list(records)
    if not records:
        raise ValueError("nothing to plot")
    log_mode = all(r.tb_over_t0 < 1.0 for r in records)

    def tx(r):
        return math.log10(r.tb_over_t0) if log_mode else r.tb_over_t0

    def ty(r):
        return math.log10(max(r.gamma_c_over_t0, 1e-300)) if log_mode else r.gamma_c_over_t0

    xs = [tx(r) for r in records]
    ys = [ty(r) for r in records]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    x_pad = 0.05 * (x_hi - x_lo) or 0.5
    y_pad = 0.05 * (y_hi - y_lo) or 0.5
    x_lo, x_hi = x_lo - x_pad, x_hi + x_pad
    y_lo, y_hi = y_lo - y_pad, y_hi + y_pad

    margin = 64
    plot_w = width - 2 * margin
    plot_h = height - 2 * margin

    def px(x):
        return margin + plot_w * (x - x_lo) / (x_hi - x_lo)

    def py(y):
        return height - margin - plot_h * (y - y_lo) / (y_hi - y_lo)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{margin}" y="{margin}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#444" stroke-width="1"/>',
    ]

    n_ticks = 5
    for i in range(n_ticks):
        frac = i / (n_ticks - 1)
        x_val = x_lo + frac * (x_hi - x_lo)
        y_val = y_lo + frac * (y_hi - y_lo)
        x_label = f"1e{x_val:.2g}" if log_mode else f"{x_val:.3g}"
        y_label = f"1e{y_val:.2g}" if log_mode else f"{y_val:.3g}"
        gx = px(x_val)
        gy = py(y_val)
        parts.append(
            f'<line x1="{gx:.2f}" y1="{height - margin}" x2="{gx:.2f}" '
            f'y2="{height - margin + 6}" stroke="#444"/>'
        )
        parts.append(
            f'<text x="{gx:.2f}" y="{height - margin + 20}" font-size="11" '
            f'text-anchor="middle">{escape(x_label)}</text>'
        )
        parts.append(
            f'<line x1="{margin - 6}" y1="{gy:.2f}" x2="{margin}" y2="{gy:.2f}" stroke="#444"/>'
        )
        parts.append(
            f'<text x="{margin - 9}" y="{gy + 4:.2f}" font-size="11" '
            f'text-anchor="end">{escape(y_label)}</text>'
        )

    parts.append(
        f'<text x="{width / 2:.0f}" y="{height - 16}" font-size="13" '
        'text-anchor="middle">T_b</text>'
    )
    parts.append(
        f'<text x="18" y="{height / 2:.0f}" font-size="13" text-anchor="middle" '
        f'transform="rotate(-90 18 {height / 2:.0f})">Gamma_c</text>'
    )

    series = sorted({r.d for r in records})
    for idx, d in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = sorted((r for r in records if r.d == d), key=lambda r: r.tb_over_t0)
        poly = " ".join(f"{px(tx(r)):.2f},{py(ty(r)):.2f}" for r in pts)
        parts.append(
            f'<polyline points="{poly}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        for r in pts:
            parts.append(
                f'<circle cx="{px(tx(r)):.2f}" cy="{py(ty(r)):.2f}" r="2.5" fill="{color}"/>'
            )
        ly = margin + 16 + 16 * idx
        parts.append(
            f'<line x1="{width - margin - 88}" y1="{ly - 4}" x2="{width - margin - 64}" '
            f'y2="{ly - 4}" stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{width - margin - 58}" y="{ly}" font-size="12">d={d}</text>'
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def verify_report(checks: Iterable) -> str:
    checks = list(checks)
    lines = []
    for check in checks:
        status = "PASS" if check.passed else "FAIL"
        lines.append(f"[{status}] {check.name}: {check.measured}")
    failed = sum(1 for c in checks if not c.passed)
    lines.append(f"{len(checks) - failed}/{len(checks)} checks passed")
    return "\n".join(lines) + "\n"
