"""Figure rendering for the CLI report paths.

Every writer takes data plus a target path, renders one figure with the
Agg backend (no display needed) and closes it, so batch runs cannot leak
figure handles.  Figures land next to the CSVs they illustrate.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def save_mse_trace(trace, path, title="training error"):
    trace = np.asarray(trace, dtype=float)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.semilogy(np.arange(1, len(trace) + 1), trace, lw=1.2)
    ax.set_xlabel("epoch")
    ax.set_ylabel("MSE")
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_forecast(pred, actual, path):
    """Overlay of predicted and measured irradiance on shared time axis."""
    fig, ax = plt.subplots(figsize=(9, 4))
    t_pred = (pred.times() - pred.start) / 86400.0
    ax.plot(t_pred, pred.values, lw=0.9, label="forecast")
    if actual is not None:
        t_act = (actual.times() - pred.start) / 86400.0
        ax.plot(t_act, actual.values, lw=0.9, alpha=0.7, label="measured")
    ax.set_xlabel("days")
    ax.set_ylabel("irradiance [W/m$^2$]")
    ax.legend(loc="upper right")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_pyramid(pyr, path):
    """Stacked view of the residue and every detail band."""
    names = pyr.band_names()
    fig, axes = plt.subplots(len(names), 1, figsize=(9, 1.3 * len(names)),
                             sharex=False)
    for ax, name in zip(np.atleast_1d(axes), names):
        band = pyr.band(name)
        ax.plot(band, lw=0.8)
        ax.set_ylabel(name, rotation=0, labelpad=18)
        ax.tick_params(labelsize=7)
    axes[-1].set_xlabel("band index")
    fig.suptitle(f"{pyr.family}, {pyr.levels} levels")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_sweep(reports, path):
    """Per-family test metrics from a sweep."""
    reports = sorted(reports, key=lambda r: r.family)
    fams = [r.family for r in reports]
    x = np.arange(len(fams))
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    ax1.bar(x, [r.gamma for r in reports], color="tab:blue")
    ax1.set_ylabel("correlation")
    ax1.set_ylim(0.0, 1.0)
    ax2.bar(x, [r.relative_rms_percent for r in reports], color="tab:orange")
    ax2.set_ylabel("relative RMS [%]")
    ax2.set_xticks(x)
    ax2.set_xticklabels(fams, rotation=30, ha="right")
    for ax in (ax1, ax2):
        ax.grid(True, axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_channels(channel_map, path):
    """Quick look at the four generated weather channels."""
    names = list(channel_map)
    fig, axes = plt.subplots(len(names), 1, figsize=(9, 1.8 * len(names)),
                             sharex=True)
    for ax, name in zip(np.atleast_1d(axes), names):
        ts = channel_map[name]
        ax.plot((ts.times() - ts.start) / 86400.0, ts.values, lw=0.7)
        ax.set_ylabel(name, fontsize=8)
    axes[-1].set_xlabel("days")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
