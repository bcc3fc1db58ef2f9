"""Figure rendering for the report paths.

The CLI emits delimited data as its primary output; these helpers render the
same rows to image files when a plot path is requested.  Rendering is kept
separate from computation so the data path never imports matplotlib state.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def render_region_figure(rows, path: str, title: str | None = None) -> None:
    """Plot a boundary sweep: max authentication rate along the swept coordinate."""
    if not rows:
        raise ValueError("nothing to plot: the sweep produced no rows")
    kappas = {row.kappa for row in rows}
    if len(kappas) == 1:
        xs = [row.r for row in rows]
        xlabel = "message rate r (bits/use)"
        note = f"key rate = {rows[0].kappa:g}"
    else:
        xs = [row.kappa for row in rows]
        xlabel = "key consumption rate (bits/use)"
        note = f"message rate = {rows[0].r:g}"
    ys = [row.alpha for row in rows]

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(xs, ys, marker="o", markersize=2.5, linewidth=1.2)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("max authentication rate (bits/use)")
    ax.set_title(title or f"Authentication trade-off ({note})")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_simulation_figure(report: dict, path: str) -> None:
    """Plot per-attack exponent estimates against the information-side cap."""
    bracket = report.get("auth_rate", {})
    per_attack = bracket.get("per_attack", {})
    if not per_attack:
        raise ValueError("nothing to plot: the report has no attack results")
    names = list(per_attack.keys())
    values = [per_attack[name] for name in names]

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.barh(names, values, height=0.5, color="#4878a8")
    ub = bracket.get("alpha_ub")
    if ub is not None:
        ax.axvline(ub, color="#b04a4a", linestyle="--", linewidth=1.2,
                   label=f"information cap {ub:.3f}")
        ax.legend(loc="lower right")
    ax.set_xlabel("largest surviving exponent a (bits/use)")
    ax.set_title(f"{report.get('code', {}).get('kind', 'code')}: attack resistance")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
