"""Figure rendering for sweep reports (headless matplotlib)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_MARKERS = ("o", "s", "^", "d", "v", "*")


def save_nmse_figure(records, path):
    """Render mean NMSE vs SNR, one line per estimator, log NMSE axis.

    Infeasible records and records without a finite NMSE are skipped.
    The output format follows the file extension (SVG by convention here).
    """
    by_estimator = {}
    for rec in records:
        if rec.infeasible or rec.nmse_total is None:
            continue
        by_estimator.setdefault(rec.estimator, []).append((rec.snr_db, rec.nmse_total))

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for idx, (name, points) in enumerate(by_estimator.items()):
        points.sort()
        snr = [p[0] for p in points]
        vals = [p[1] for p in points]
        ax.semilogy(snr, vals, marker=_MARKERS[idx % len(_MARKERS)], label=name)
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("NMSE")
    ax.grid(True, which="both", alpha=0.4)
    if by_estimator:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
