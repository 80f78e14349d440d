"""Figure rendering for report records.

Always the Agg backend; files land in the directory the caller names.
Every report gets a status summary; records carrying a kernel chain,
a udim table, or replay checks get one figure each.  File names are
deterministic functions of the record index.
"""

from __future__ import annotations

import os


def _plt():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_figures(report, out_dir: str) -> list[str]:
    """Write PNGs for a report; returns the created paths, sorted."""
    plt = _plt()
    os.makedirs(out_dir, exist_ok=True)
    written: list[str] = []

    statuses = [rec.get("status", "?") for rec in report.records]
    order = sorted(set(statuses))
    fig, ax = plt.subplots(figsize=(4.8, 3.2))
    ax.bar(
        range(len(order)),
        [statuses.count(s) for s in order],
        color=["#2a9d8f" if s == "ok" else "#e76f51" for s in order],
    )
    ax.set_xticks(range(len(order)))
    ax.set_xticklabels(order)
    ax.set_ylabel("records")
    ax.set_title(f"{report.command}: {report.scenario}")
    fig.tight_layout()
    path = os.path.join(out_dir, "summary.png")
    fig.savefig(path, dpi=110)
    plt.close(fig)
    written.append(path)

    for i, rec in enumerate(report.records):
        kc = rec.get("kernel_chain")
        if kc and kc.get("chain") is not None:
            sizes = [0] + [len(step) for step in kc["chain"]]
            fig, ax = plt.subplots(figsize=(4.8, 3.2))
            ax.step(range(len(sizes)), sizes, where="post", marker="o")
            ax.set_xlabel("iterate of sigma")
            ax.set_ylabel("variables killed")
            ax.set_title(f"kernel chain (stabilizes at {kc.get('stabilization_index')})")
            ax.set_xticks(range(len(sizes)))
            fig.tight_layout()
            path = os.path.join(out_dir, f"{i + 1:02d}_kernel_chain.png")
            fig.savefig(path, dpi=110)
            plt.close(fig)
            written.append(path)
        ud = rec.get("udim")
        if ud and ud.get("blocks"):
            blocks = ud["blocks"]
            xs = range(len(blocks))
            fig, ax = plt.subplots(figsize=(4.8, 3.2))
            w = 0.4
            ax.bar([x - w / 2 for x in xs], [b["dim_eZ"] for b in blocks], w, label="dim e Z")
            ax.bar([x + w / 2 for x in xs], [b["dim_K"] for b in blocks], w, label="dim block field")
            ax.set_xticks(list(xs))
            ax.set_xticklabels([f"e{x + 1}" for x in xs])
            ax.set_title(f"udim blocks (total {ud.get('total')})")
            ax.legend()
            fig.tight_layout()
            path = os.path.join(out_dir, f"{i + 1:02d}_udim.png")
            fig.savefig(path, dpi=110)
            plt.close(fig)
            written.append(path)
        checks = rec.get("checks")
        if checks:
            npass = sum(1 for c in checks if c.get("passed"))
            fig, ax = plt.subplots(figsize=(4.8, 3.2))
            ax.bar([0, 1], [npass, len(checks) - npass], color=["#2a9d8f", "#e76f51"])
            ax.set_xticks([0, 1])
            ax.set_xticklabels(["passed", "failed"])
            ax.set_title(rec.get("example", "checks"))
            fig.tight_layout()
            path = os.path.join(out_dir, f"{i + 1:02d}_checks.png")
            fig.savefig(path, dpi=110)
            plt.close(fig)
            written.append(path)

    return sorted(written)
