"""Writers for trajectories (CSV, SVG) and run reports."""
from __future__ import annotations

import csv
import io
from html import escape

import numpy as np

from .modespace import Trajectory

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def csv_header(n_modes: int) -> list[str]:
    cols = ["t"]
    for j in range(n_modes):
        cols += [f"re_{j}", f"im_{j}", f"abs_{j}", f"n_{j}"]
    return cols


def trajectory_csv(traj: Trajectory) -> str:
    """Render as CSV: ``t`` then ``re_j, im_j, abs_j, n_j`` per mode, 17 significant digits."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(csv_header(traj.n_modes))
    moduli = traj.moduli
    photons = traj.photon_numbers
    for i, t in enumerate(traj.times):
        row = [fmt(t)]
        for j, z in enumerate(traj.amplitudes[i]):
            row += [fmt(z.real), fmt(z.imag), fmt(moduli[i, j]), fmt(photons[i, j])]
        writer.writerow(row)
    return buf.getvalue()


def read_trajectory_csv(text: str) -> Trajectory:
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    n = (len(header) - 1) // 4
    if header != csv_header(n):
        raise ValueError("unexpected CSV header")
    data = np.array([[float(x) for x in row] for row in body]).reshape(len(body), len(header))
    amps = data[:, 1::4] + 1j * data[:, 2::4]
    return Trajectory(times=data[:, 0].copy(), amplitudes=amps)


def report_text(report: dict) -> str:
    lines = []
    for key, value in report.items():
        if isinstance(value, float):
            value = fmt(value)
        elif value is None:
            value = "none"
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def _plotted_modes(traj: Trajectory, max_lines: int) -> list[int]:
    """Mode 0 plus the modes with the largest peak modulus."""
    if traj.n_modes <= max_lines:
        return list(range(traj.n_modes))
    peaks = traj.moduli.max(axis=0)
    others = [j for j in np.argsort(-peaks, kind="stable") if j != 0][: max_lines - 1]
    return [0, *sorted(int(j) for j in others)]


def trajectory_svg(traj: Trajectory, title: str = "", max_lines: int = 10, max_points: int = 2000) -> str:
    """Static line chart of ``|alpha_j(t)|`` in an 800x500 viewBox."""
    width, height = 800, 500
    left, right, top, bottom = 70, 150, 40, 60
    pw, ph = width - left - right, height - top - bottom
    t = traj.times
    y = traj.moduli
    t0, t1 = float(t[0]), float(t[-1])
    if t1 == t0:
        t1 = t0 + 1.0
    ymax = float(y.max())
    ymax = 1.0 if ymax == 0.0 else 1.05 * ymax
    step = max(1, int(np.ceil(len(t) / max_points)))
    idx = np.arange(0, len(t), step)
    if idx[-1] != len(t) - 1:
        idx = np.append(idx, len(t) - 1)

    def sx(v):
        return left + (v - t0) / (t1 - t0) * pw

    def sy(v):
        return top + ph - v / ymax * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {width} {height}" '
        f'width="{width}" height="{height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{left + pw / 2:.1f}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for k in range(6):
        tv = t0 + (t1 - t0) * k / 5
        yv = ymax * k / 5
        out.append(f'<line x1="{sx(tv):.2f}" y1="{top + ph}" x2="{sx(tv):.2f}" y2="{top + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{sx(tv):.2f}" y="{top + ph + 20}" text-anchor="middle">{tv:.4g}</text>')
        out.append(f'<line x1="{left - 5}" y1="{sy(yv):.2f}" x2="{left}" y2="{sy(yv):.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{sy(yv) + 4:.2f}" text-anchor="end">{yv:.3g}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 15}" text-anchor="middle">t</text>')
    out.append(
        f'<text x="18" y="{top + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {top + ph / 2:.1f})">|&#945;_j(t)|</text>'
    )
    for k, j in enumerate(_plotted_modes(traj, max_lines)):
        color = PALETTE[k % len(PALETTE)]
        pts = " ".join(f"{sx(t[i]):.2f},{sy(y[i, j]):.2f}" for i in idx)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = top + 10 + 18 * k
        out.append(f'<line x1="{left + pw + 15}" y1="{ly}" x2="{left + pw + 40}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 46}" y="{ly + 4}">mode {j}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
