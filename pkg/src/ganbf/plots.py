"""Figure rendering for the CLI report paths.

Each CLI command that writes a CSV also renders a companion PNG next to it
(same stem) unless plotting is disabled.  Figures are plain matplotlib line
plots of the emitted columns; the CSV remains the canonical output.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


_SCHEME_STYLE = {
    "gan_iterative": dict(color="k", marker="o", ms=3),
    "gan_bruteforce": dict(color="b", marker="s", ms=3),
    "goel_negi": dict(color="r", marker="^", ms=3),
    "no_an": dict(color="g", marker="x", ms=4),
}


def _finish(fig, ax, path):
    ax.grid(True)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_sweep_figure(rows, path, units="nats"):
    """Secrecy rate versus total power, one curve per (h_norm_sq, scheme)."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    keys = sorted({(r["h_norm_sq"], r["scheme"]) for r in rows})
    for h2, scheme in keys:
        pts = sorted((r["p_total"], r["rate"]) for r in rows
                     if r["h_norm_sq"] == h2 and r["scheme"] == scheme)
        style = _SCHEME_STYLE.get(scheme, {})
        ax.plot([p for p, _ in pts], [v for _, v in pts],
                label=f"{scheme}, $\\|h\\|^2$={h2:g}", lw=1.2, **style)
    ax.set_xlabel("total power $P_T$ (linear)")
    ax.set_ylabel(f"secrecy rate ({units})")
    ax.legend(fontsize=8)
    _finish(fig, ax, path)


def render_trace_figure(rows, path, units="nats"):
    """Secrecy rate versus iteration for one iterative solve."""
    fig, ax = plt.subplots(figsize=(6, 4))
    rows = sorted(rows, key=lambda r: r["iteration"])
    ax.plot([r["iteration"] for r in rows], [r["rate"] for r in rows],
            "ko-", ms=4, lw=1.2)
    ax.set_xlabel("iteration")
    ax.set_ylabel(f"secrecy rate ({units})")
    _finish(fig, ax, path)


def render_profile_figure(rows, path):
    """Optimal power split versus total power."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    rows = sorted(rows, key=lambda r: r["p_total"])
    pt = [r["p_total"] for r in rows]
    for key, style in (("p_u", "ko-"), ("p_v1", "rs-"), ("p_v2", "b^-")):
        ax.plot(pt, [r[key] for r in rows], style, ms=3, lw=1.2, label=f"${key}$")
    ax.set_xlabel("total power $P_T$ (linear)")
    ax.set_ylabel("allocated power (linear)")
    ax.legend(fontsize=9)
    _finish(fig, ax, path)
