"""Report figures, rendered off-screen to image files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

from .exactlin import Matrix, PrimeField  # noqa: E402

_STATUS = {"pass": 0, "skip": 1, "fail": 2}
_COLORS = ["#4c9a5b", "#c9a227", "#c0392b"]


def check_chart(checks, path: str, title: str = "") -> None:
    """One row per check, coloured by status."""
    checks = list(checks)
    n = max(len(checks), 1)
    fig, ax = plt.subplots(figsize=(7, 0.9 + 0.22 * n))
    vals = np.array([[_STATUS[c.status]] for c in checks] or [[0]])
    ax.imshow(vals, cmap=ListedColormap(_COLORS), vmin=0, vmax=2, aspect="auto")
    ax.set_yticks(range(len(checks)))
    ax.set_yticklabels([c.name for c in checks], fontsize=7)
    ax.set_xticks([])
    for i, c in enumerate(checks):
        ax.text(0, i, c.status, ha="center", va="center", fontsize=7, color="white")
    counts = {s: sum(c.status == s for c in checks) for s in _STATUS}
    ax.set_title(f"{title}  ({counts['pass']} pass, {counts['fail']} fail, {counts['skip']} skip)", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _as_float(m: Matrix) -> np.ndarray:
    if isinstance(m.field, PrimeField):
        p = m.field.p
        a = m.a.astype(np.int64)
        return np.where(a > p // 2, a - p, a).astype(float)
    return np.vectorize(float, otypes=[float])(m.a) if m.a.size else np.zeros(m.shape)


def matrix_heatmap(m: Matrix, path: str, title: str = "", xlabel: str = "", ylabel: str = "") -> None:
    """Signed heatmap of a structure map; F_p entries shown as centred residues."""
    vals = _as_float(m)
    lim = max(float(np.abs(vals).max()) if vals.size else 1.0, 1.0)
    fig, ax = plt.subplots(figsize=(5.5, 5))
    im = ax.imshow(vals, cmap="RdBu_r", vmin=-lim, vmax=lim, interpolation="nearest")
    ax.set_title(title, fontsize=9)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
