"""Deterministic CSV emission and figure rendering.

CSV files carry a '#'-prefixed metadata block (tool version, config hash,
tolerances, flags) before the header row.  Floats are serialized with 17
significant digits so every value round-trips bit-exactly through parsing.
Figures are rendered next to the delimited output when plotting is enabled.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


@dataclass(frozen=True)
class CsvTable:
    """Header, rows and the metadata comment block of one output file."""

    metadata: dict
    header: list[str]
    rows: list[list]


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return format(value, ".17g")
    return str(value)


def render_csv(table: CsvTable) -> str:
    buf = io.StringIO()
    for key, value in table.metadata.items():
        buf.write(f"# {key}: {value}\n")
    buf.write(",".join(table.header) + "\n")
    for row in table.rows:
        buf.write(",".join(format_value(v) for v in row) + "\n")
    return buf.getvalue()


def write_table(table: CsvTable, path: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_csv(table))


def _column(table: CsvTable, name: str) -> list:
    idx = table.header.index(name)
    return [row[idx] for row in table.rows]


def _group_rows(table: CsvTable, key: str) -> dict:
    idx = table.header.index(key)
    groups: dict = {}
    for row in table.rows:
        groups.setdefault(row[idx], []).append(row)
    return groups


def plot_kernel_scan(table: CsvTable, path: str):
    """QSNR and heat kernel against time, one QSNR line per temperature."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    it = table.header.index("t_tilde")
    iq = table.header.index("qsnr")
    for temp, rows in sorted(_group_rows(table, "T_tilde").items()):
        ts = [r[it] for r in rows]
        ax.plot(ts, [r[iq] for r in rows], label=f"T/w_c = {temp:g}")
    ax.set_xscale("log")
    ax.set_xlabel(r"$t\,\omega_c$")
    ax.set_ylabel("QSNR")
    ax2 = ax.twinx()
    rows0 = next(iter(sorted(_group_rows(table, "T_tilde").items())))[1]
    ih = table.header.index("heat_wc")
    ax2.plot([r[it] for r in rows0], [r[ih] for r in rows0], "k-", lw=1.2)
    ax2.set_ylabel(r"$Q/\omega_c$")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_tradeoff(table: CsvTable, path: str):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ih = table.header.index("heat_wc")
    ie = table.header.index("inv_qsnr")
    for temp, rows in sorted(_group_rows(table, "T_tilde").items()):
        ax.plot([r[ih] for r in rows], [r[ie] for r in rows], label=f"T/w_c = {temp:g}")
    ax.set_yscale("log")
    ax.set_xlabel(r"$Q/\omega_c$")
    ax.set_ylabel("1 / QSNR")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_timeopt(table: CsvTable, path: str):
    """Rate, heat and optimal time against the axis that actually varies."""
    candidates = ["s", "T_tilde", "coupling", "spin"]
    counts = {c: len(set(_column(table, c))) for c in candidates}
    axis = max(counts, key=lambda c: counts[c])
    others = [c for c in candidates if c != axis and counts[c] > 1]
    fig, axes = plt.subplots(3, 1, figsize=(6.0, 8.0), sharex=True)
    ia = table.header.index(axis)
    for names, rows in sorted(
        _group_rows_multi(table, others).items() if others else [((), table.rows)]
    ):
        label = ", ".join(f"{k}={v:g}" for k, v in zip(others, names)) or None
        xs = [r[ia] for r in rows]
        for ax, col in zip(axes, ("rate_wc", "heat_wc", "t_opt_wc")):
            ic = table.header.index(col)
            ax.plot(xs, [r[ic] for r in rows], marker="o", ms=3, label=label)
    for ax, name in zip(axes, ("rate / w_c", "Q(t_opt) / w_c", "t_opt * w_c")):
        ax.set_ylabel(name)
        ax.set_yscale("log")
    axes[0].set_xscale("log" if axis in ("coupling", "T_tilde") else "linear")
    axes[-1].set_xlabel(axis)
    if others:
        axes[0].legend(loc="best", fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _group_rows_multi(table: CsvTable, keys: list[str]) -> dict:
    idxs = [table.header.index(k) for k in keys]
    groups: dict = {}
    for row in table.rows:
        groups.setdefault(tuple(row[i] for i in idxs), []).append(row)
    return groups


def plot_channel(table: CsvTable, path: str):
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ij = table.header.index("spin")
    ir = table.header.index("ratio")
    for lam, rows in sorted(_group_rows(table, "coupling").items()):
        ax.plot([r[ij] for r in rows], [r[ir] for r in rows], marker="o", label=f"coupling = {lam:g}")
    ax.axhline(1.0, color="k", lw=0.8, ls=":")
    ax.set_xlabel("spin j")
    ax.set_ylabel("cat rate / optimal rate")
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
