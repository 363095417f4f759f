"""Seeded Monte Carlo study of the conditional ARL of plug-in Weibull charts.

Each replicate draws a raw in-control Phase I sample, estimates the scale,
and evaluates the resulting chart's conditional ARL exactly.  Replicates are
grouped into fixed-size blocks; block ``k`` of a study row always draws from
the stream ``SeedSequence(seed, spawn_key=(row key..., k))``, so results do not
depend on how many worker threads process the blocks.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .distribution import WeibullParams, sample
from .errors import RunLengthCapError
from .estimated import PERCENTILE_LEVELS, CarlSummary, carl_sup, conditional_arl, mle_scale_batch
from .known import IN_CONTROL, ChartDesign, ShiftSpec, check_alpha

__all__ = [
    "TABLE1_M",
    "TABLE1_PARAMS",
    "DEFAULT_SEED",
    "THREADS_ENV",
    "StudyConfig",
    "StudyRow",
    "load_config",
    "simulate_pivots",
    "simulate_carls",
    "simulate_carl_distribution",
    "summarize_carls",
    "run_table1",
    "table_columns",
    "table_to_csv",
    "table_to_json",
    "simulate_run_lengths",
]

TABLE1_M = (30, 50, 100, 200, 500, 800, 1000, 2000, 5000, 8000)
# (10, 15) is left out: its published values are not reproducible
TABLE1_PARAMS = ((1.0, 1.0), (1.0, 15.0), (0.5, 10.0), (1.5, 5.0), (2.0, 5.0))
DEFAULT_SEED = 20240601
THREADS_ENV = "WEIBULL_TBE_THREADS"

_BLOCK_ELEMENTS = 1 << 17
_RUN_LENGTH_CAP = 10 ** 7


@dataclass
class StudyConfig:
    alpha0: float = 0.0027
    param_grid: list = field(default_factory=lambda: [(1.0, 1.0)])
    m_list: list = field(default_factory=lambda: list(TABLE1_M))
    replications: int = 200_000
    percentile_levels: list = field(default_factory=lambda: list(PERCENTILE_LEVELS))
    target_arl: float = 370.4
    seed: int = DEFAULT_SEED
    delta1: float = 1.0
    delta2: float = 1.0
    workers: int | None = None

    def __post_init__(self):
        check_alpha(self.alpha0)
        self.param_grid = [(float(e), float(b)) for e, b in self.param_grid]
        for eta0, beta0 in self.param_grid:
            WeibullParams(eta0, beta0)
        self.m_list = [int(m) for m in self.m_list]
        if any(m < 1 for m in self.m_list):
            raise ValueError("m_list entries must be positive integers")
        if int(self.replications) != self.replications or self.replications < 1:
            raise ValueError("replications must be a positive integer")
        self.replications = int(self.replications)
        levels = [float(g) for g in self.percentile_levels]
        if any(not 0 < g < 1 for g in levels) or any(a >= b for a, b in zip(levels, levels[1:])):
            raise ValueError("percentile_levels must be strictly increasing inside (0, 1)")
        self.percentile_levels = levels
        if not self.target_arl > 0:
            raise ValueError("target_arl must be positive")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self.seed = int(self.seed)
        self.shift  # validates deltas

    @property
    def shift(self) -> ShiftSpec:
        return ShiftSpec(self.delta1, self.delta2)

    @classmethod
    def from_mapping(cls, data: dict) -> "StudyConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


def load_config(path) -> StudyConfig:
    """Read a JSON study config; keys are the :class:`StudyConfig` fields."""
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    return StudyConfig.from_mapping(data)


def _float_key(x: float) -> int:
    return int.from_bytes(struct.pack("<d", float(x)), "little")


def _workers(n):
    if n is None:
        n = int(os.environ.get(THREADS_ENV, 0)) or os.cpu_count() or 1
    return max(1, int(n))


def _blocked(fn, reps, block, key, seed, workers):
    """Evaluate ``fn(rng, n)`` per block and concatenate in block order."""
    n_blocks = math.ceil(reps / block)
    sizes = [min(block, reps - k * block) for k in range(n_blocks)]

    def run(k):
        ss = np.random.SeedSequence(seed, spawn_key=(*key, k))
        return fn(np.random.default_rng(ss), sizes[k])

    workers = min(_workers(workers), n_blocks)
    if workers == 1:
        parts = [run(k) for k in range(n_blocks)]
    else:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, range(n_blocks)))
    return np.concatenate(parts)


def simulate_pivots(m: int, params, reps: int, seed: int = DEFAULT_SEED, workers=None):
    """Pivot ``w = (beta_hat/beta0)**eta0`` for ``reps`` raw in-control Phase I samples."""
    p = WeibullParams(*params)
    block = max(1, _BLOCK_ELEMENTS // m)

    def draw(rng, n):
        x = sample(p, rng, (n, m))
        return (mle_scale_batch(x, p.eta) / p.beta) ** p.eta

    return _blocked(draw, reps, block, (m, _float_key(p.eta), _float_key(p.beta)), seed, workers)


def simulate_carls(cfg: StudyConfig, m: int, params) -> np.ndarray:
    """Conditional ARL of the plug-in chart for each replicate."""
    w = simulate_pivots(m, params, cfg.replications, cfg.seed, cfg.workers)
    return conditional_arl(w, cfg.alpha0, params[0], cfg.shift)


def summarize_carls(carls, levels=PERCENTILE_LEVELS, target_arl: float = 370.4, sup: float = math.nan) -> CarlSummary:
    """Mean, SD, strict exceedance fraction and nearest-rank percentiles."""
    carls = np.asarray(carls, dtype=float)
    n = carls.size
    ordered = np.sort(carls)
    pct = {g: float(ordered[max(1, math.ceil(g * n)) - 1]) for g in levels}
    return CarlSummary(
        acarl=float(carls.mean()),
        sdcarl=float(carls.std(ddof=1)) if n > 1 else 0.0,
        epc=float(np.count_nonzero(carls < target_arl)) / n,
        percentiles=pct,
        carl_sup=sup,
    )


def simulate_carl_distribution(cfg: StudyConfig, m: int, params) -> CarlSummary:
    carls = simulate_carls(cfg, m, params)
    sup = carl_sup(cfg.alpha0, params[0], cfg.shift)[1]
    return summarize_carls(carls, cfg.percentile_levels, cfg.target_arl, sup)


@dataclass
class StudyRow:
    eta0: float
    beta0: float
    m: int
    summary: CarlSummary

    def record(self, levels) -> dict:
        s = self.summary
        rec = {"eta0": self.eta0, "beta0": self.beta0, "m": self.m,
               "acarl": s.acarl, "sdcarl": s.sdcarl, "epc": s.epc}
        for g in levels:
            rec[_level_name(g)] = s.percentiles[g]
        return rec


def _level_name(g: float) -> str:
    return f"p{round(g * 100):02d}"


def table_columns(levels=PERCENTILE_LEVELS) -> list[str]:
    return ["eta0", "beta0", "m", "acarl", "sdcarl", "epc", *(_level_name(g) for g in levels)]


def run_table1(cfg: StudyConfig) -> list[StudyRow]:
    """One row per ``(eta0, beta0)`` x ``m``, parameter-major order."""
    return [
        StudyRow(eta0, beta0, m, simulate_carl_distribution(cfg, m, (eta0, beta0)))
        for eta0, beta0 in cfg.param_grid
        for m in cfg.m_list
    ]


def table_to_csv(rows, levels=PERCENTILE_LEVELS) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=table_columns(levels), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.record(levels).items()})
    return buf.getvalue()


def table_to_json(rows, levels=PERCENTILE_LEVELS, cfg: StudyConfig | None = None) -> str:
    doc = {"columns": table_columns(levels), "rows": [row.record(levels) for row in rows]}
    if cfg is not None:
        doc["config"] = {k: v for k, v in vars(cfg).items() if k != "workers"}
    return json.dumps(doc, indent=2)


def simulate_run_lengths(
    design: ChartDesign,
    shift: ShiftSpec = IN_CONTROL,
    reps: int = 100_000,
    stream=None,
    cap: int = _RUN_LENGTH_CAP,
) -> tuple[float, float]:
    """Mean and SD of simulated run lengths: points are plotted until one falls
    strictly outside ``(LCL, UCL)``.

    Raises :class:`RunLengthCapError` if some replicate is still running after
    ``cap`` points.
    """
    if reps < 1:
        raise ValueError("reps must be positive")
    rng = stream if stream is not None else np.random.default_rng(DEFAULT_SEED)
    p = WeibullParams(design.eta0 * shift.delta2, design.scale_used * shift.delta1)
    lengths = np.zeros(reps, dtype=np.int64)
    active = np.arange(reps)
    done = 0
    batch = 64
    while active.size:
        if done >= cap:
            raise RunLengthCapError(f"{active.size} of {reps} runs had not signalled after {cap} points")
        cols = min(batch, cap - done)
        rows = max(1, min(active.size, _BLOCK_ELEMENTS // cols))
        still = []
        for start in range(0, active.size, rows):
            idx = active[start:start + rows]
            x = sample(p, rng, (idx.size, cols))
            hit = (x < design.LCL) | (x > design.UCL)
            any_hit = hit.any(axis=1)
            lengths[idx[any_hit]] = done + hit[any_hit].argmax(axis=1) + 1
            still.append(idx[~any_hit])
        active = np.concatenate(still)
        done += cols
        batch = min(batch * 2, 1 << 16)
    return float(lengths.mean()), float(lengths.std(ddof=1)) if reps > 1 else 0.0
