"""Benchmark sweeps: CSV rows, a log-log growth fit and a runtime figure."""

from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import ErrorBudget
from .instances import generate
from .multistage import solve_multistage
from .stpath import solve_stpath_multistage

CSV_FIELDS = ("seed", "kind", "n", "tau", "ell", "millis", "answer")


@dataclass(frozen=True)
class BenchRow:
    seed: int
    kind: str
    n: int
    tau: int
    ell: int
    millis: float
    answer: str


def run_instance(mi, budget: ErrorBudget, provider=None, width_cap: int | None = None):
    if mi.kind == "stpath":
        kwargs = {} if width_cap is None else {"width_cap": width_cap}
        return solve_stpath_multistage(mi.stages, mi.ell, budget, provider, **kwargs)
    from .multistage import get_solver
    return solve_multistage(mi, budget, provider, get_solver(mi.kind, width_cap))


def bench(kind: str, sizes: Sequence[int], seeds: Iterable[int], tau: int, ell: int,
          error_prob: float = 0.25, provider=None, extra: dict | None = None) -> list[BenchRow]:
    rows = []
    seeds = list(seeds)
    for n in sizes:
        for seed in seeds:
            params = {"n": n, "tau": tau, "ell": ell, **(extra or {})}
            mi = generate(kind, params, seed)
            budget = ErrorBudget(error_prob, seed)
            start = time.perf_counter()
            seq = run_instance(mi, budget, provider)
            millis = (time.perf_counter() - start) * 1000
            rows.append(BenchRow(seed, kind, n, tau, ell, round(millis, 3), "no" if seq is None else "yes"))
    return rows


def rows_to_csv(rows: Sequence[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow([r.seed, r.kind, r.n, r.tau, r.ell, f"{r.millis:.3f}", r.answer])
    return buf.getvalue()


def growth_exponent(rows: Sequence[BenchRow]) -> float:
    """Slope of log(median millis) against log(n); a polynomial of that degree bounds the growth."""
    by_n: dict[int, list[float]] = {}
    for r in rows:
        by_n.setdefault(r.n, []).append(max(r.millis, 1e-3))
    ns = sorted(by_n)
    if len(ns) < 2:
        return 0.0
    x = np.log(np.array(ns, dtype=float))
    y = np.log(np.array([np.median(by_n[n]) for n in ns]))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def plot_rows(rows: Sequence[BenchRow], path: str | Path) -> Path:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    by_n: dict[int, list[float]] = {}
    for r in rows:
        by_n.setdefault(r.n, []).append(max(r.millis, 1e-3))
    ns = sorted(by_n)
    med = [float(np.median(by_n[n])) for n in ns]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for n in ns:
        ax.scatter([n] * len(by_n[n]), by_n[n], s=8, color="0.6")
    ax.plot(ns, med, marker="o", color="C0", label="median")
    if len(ns) >= 2:
        slope = growth_exponent(rows)
        c = med[0] / ns[0] ** slope
        ax.plot(ns, [c * n ** slope for n in ns], "--", color="C1", label=f"fit n^{slope:.2f}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("base-set size n")
    ax.set_ylabel("solve time (ms)")
    kinds = sorted({r.kind for r in rows})
    ax.set_title(f"{', '.join(kinds)}: tau={rows[0].tau}, ell={rows[0].ell}" if rows else "")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
