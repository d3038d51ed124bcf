"""Monte Carlo of randomly switched polariser settings."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..errors import HolevoError
from ..states import PureState
from .bell import BellSettings, bell_stats
from .epr import EPR_OUTCOMES

__all__ = ["AspectConfig", "AspectResult", "aspect_simulate", "SETTING_NAMES", "CHUNK"]

SETTING_NAMES = (("a1", "b1"), ("a1", "b2"), ("a2", "b1"), ("a2", "b2"))
# fixed chunk length keeps the draw sequence independent of the worker count
CHUNK = 1 << 16


@dataclass(frozen=True)
class AspectConfig:
    a1: float
    a2: float
    b1: float
    b2: float
    runs: int
    seed: int

    def __post_init__(self):
        if int(self.runs) < 1:
            raise HolevoError(f"runs must be >= 1, got {self.runs}")


@dataclass(frozen=True)
class AspectResult:
    """``counts[(setting_pair, outcome)]``; frequencies are per setting pair."""

    counts: dict
    frequencies: dict
    runs_per_setting: dict
    laws: dict


def _chunk(n, seed, cdfs):
    rng = np.random.default_rng(seed)
    ia = rng.integers(0, 2, size=n)
    ib = rng.integers(0, 2, size=n)
    u = rng.random(n)
    setting = 2 * ia + ib
    outcome = np.empty(n, dtype=np.int64)
    for k in range(4):
        sel = setting == k
        outcome[sel] = np.minimum(np.searchsorted(cdfs[k], u[sel], side="right"), 3)
    table = np.zeros((4, 4), dtype=np.int64)
    np.add.at(table, (setting, outcome), 1)
    return table


def aspect_simulate(cfg: AspectConfig, h: PureState, workers: int = 1) -> AspectResult:
    """Simulate ``cfg.runs`` runs with uniformly random settings on each side.

    Each run draws Alice's angle from {a1, a2} and Bob's from {b1, b2}
    independently, then an outcome pair by inverse CDF over ``EPR_OUTCOMES``
    using the exact outcome law for that setting pair.
    """
    angles = {"a1": cfg.a1, "a2": cfg.a2, "b1": cfg.b1, "b2": cfg.b2}
    laws = [bell_stats(BellSettings(angles[a], angles[b]), h) for a, b in SETTING_NAMES]
    cdfs = [np.cumsum(law) for law in laws]
    runs = int(cfg.runs)
    sizes = [min(CHUNK, runs - start) for start in range(0, runs, CHUNK)]
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(sizes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            tables = list(pool.map(lambda a: _chunk(a[0], a[1], cdfs), zip(sizes, seeds)))
    else:
        tables = [_chunk(n, s, cdfs) for n, s in zip(sizes, seeds)]
    total = sum(tables)
    counts, freqs, per_setting, law_map = {}, {}, {}, {}
    for k, pair in enumerate(SETTING_NAMES):
        n_k = int(total[k].sum())
        per_setting[pair] = n_k
        for j, outcome in enumerate(EPR_OUTCOMES):
            counts[(pair, outcome)] = int(total[k, j])
            freqs[(pair, outcome)] = total[k, j] / n_k if n_k else 0.0
            law_map[(pair, outcome)] = float(laws[k][j])
    return AspectResult(counts, freqs, per_setting, law_map)
