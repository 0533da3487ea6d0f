"""Figure rendering for the CLI report paths (PNG/PDF next to the CSV)."""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def probability_figure(samples, path, title=None):
    """Render a sampled P(T) trace to an image file."""
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    ax.plot(samples[:, 0], samples[:, 1], marker=".", lw=1.0)
    ax.set_xlabel(r"delay $T$ ($\mu$s)")
    ax.set_ylabel(r"$P(T)$")
    ax.set_ylim(-0.05, 1.05)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def sweep_figure(rows, path, title=None):
    """Render the relative-phase curve family (one curve per interval)."""
    by_interval = {}
    for row in rows:
        by_interval.setdefault(row.interval, []).append(row)
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    for label in sorted(by_interval):
        pts = sorted(by_interval[label], key=lambda r: r.t_switch)
        ax.plot(
            [r.t_switch for r in pts],
            [r.phi_rel for r in pts],
            marker="o",
            ms=3,
            lw=1.0,
            label=label,
        )
    ax.axhline(1.0, color="gray", lw=0.8, ls="--")
    ax.set_xlabel(r"switching time ($\mu$s)")
    ax.set_ylabel(r"relative phase")
    ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
