"""Experiment runners.  Each returns a :class:`Table` that is reproducible from (config, seed).

Grid point ``j`` of an experiment draws from child ``j`` of the seed stream
and replication ``i`` within it from that child's child ``i``; results are
reduced in index order.
"""

import math

import numpy as np

from .. import __version__
from ..rng import RngStream
from ..stats import histogram, mean_ci
from ..walk import STATUS_OK, WalkConfig, run_many
from .output import Table
from .validation import run_validation

Z95 = 1.96


def _metadata(cfg, **extra):
    meta = {"artifact": "besselhit", "version": __version__, "seed": cfg.seed, "config": cfg.echo()}
    meta.update(extra)
    return meta


def _walk(cfg, delta, level, epsilon):
    return WalkConfig(delta, level, gamma=cfg.gamma, epsilon=epsilon, use_fast_first_step=cfg.fast_first_step)


def _ci(values):
    # mean and 95% half-width; a single value has no spread estimate
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return math.nan, math.nan
    if values.size == 1:
        return float(values[0]), math.nan
    return mean_ci(values, Z95)


def _failures(batch):
    return int(np.count_nonzero(batch.status != STATUS_OK))


def run_sample(cfg):
    """Per-replication hitting-time samples for the first (delta, L, epsilon)."""
    delta, level, eps = cfg.dims[0], cfg.levels[0], cfg.epsilons[0]
    b = run_many(_walk(cfg, delta, level, eps), RngStream(cfg.seed).split(0), cfg.reps)
    t = Table(["rep", "theta", "m_final", "steps", "steps_integer", "draws", "status"], metadata=_metadata(cfg))
    for i in range(len(b)):
        t.add(i, b.theta[i], b.m_final[i], b.steps[i], b.steps_integer[i], b.draws[i], b.status[i])
    return t


def run_hist(cfg):
    """Hitting-time histograms per dimension on a shared range."""
    root = RngStream(cfg.seed)
    level, eps = cfg.levels[0], cfg.epsilons[0]
    batches = [run_many(_walk(cfg, d, level, eps), root.split(j), cfg.reps) for j, d in enumerate(cfg.dims)]
    top = max(float(b.theta[b.ok].max()) if b.ok.any() else 0.0 for b in batches)
    edges = np.linspace(0.0, top, cfg.bins + 1)
    t = Table(["delta", "bin", "lo", "hi", "count", "failures"], metadata=_metadata(cfg, range=[0.0, top]))
    for d, b in zip(cfg.dims, batches):
        counts = histogram(b.theta[b.ok], cfg.bins, (0.0, top))
        for k in range(cfg.bins):
            t.add(d, k, edges[k], edges[k + 1], counts[k], _failures(b))
    return t


def run_steps_vs_eps(cfg):
    """Mean step counts for ``epsilon = 0.5^k``, ``k = 1..k_max``."""
    root = RngStream(cfg.seed)
    level = cfg.levels[0]
    t = Table(
        ["delta", "k", "epsilon", "mean_steps", "ci_steps", "mean_steps_integer", "ci_steps_integer", "failures"],
        metadata=_metadata(cfg),
    )
    for j, d in enumerate(cfg.dims):
        sub = root.split(j)
        for k in range(1, cfg.k_max + 1):
            eps = 0.5**k
            b = run_many(_walk(cfg, d, level, eps), sub.split(k), cfg.reps)
            m, h = _ci(b.steps[b.ok])
            mi, hi = _ci(b.steps_integer[b.ok])
            t.add(d, k, eps, m, h, mi, hi, _failures(b))
    return t


def run_steps_vs_dim(cfg):
    """Mean steps and integer-step proportion over a dimension grid."""
    root = RngStream(cfg.seed)
    level, eps = cfg.levels[0], cfg.epsilons[0]
    t = Table(
        ["delta", "floor", "frac", "mean_steps", "ci_steps", "mean_integer_fraction", "ci_integer_fraction", "failures"],
        metadata=_metadata(cfg),
    )
    for j, d in enumerate(cfg.dims):
        b = run_many(_walk(cfg, d, level, eps), root.split(j), cfg.reps)
        ok = b.ok
        m, h = _ci(b.steps[ok])
        steps = b.steps[ok].astype(float)
        # a run with no steps has no integer steps either
        frac = np.divide(b.steps_integer[ok], steps, out=np.zeros_like(steps), where=steps > 0)
        mf, hf = _ci(frac)
        fl = math.floor(d)
        t.add(d, fl, d - fl, m, h, mf, hf, _failures(b))
    return t


def run_steps_vs_level(cfg):
    """Mean steps over a level grid, at fixed epsilon and at fixed epsilon/L."""
    root = RngStream(cfg.seed)
    eps = cfg.epsilons[0]
    t = Table(
        ["delta", "level", "mode", "epsilon", "gap_bound", "mean_steps", "ci_steps", "failures"],
        metadata=_metadata(cfg),
    )
    for j, d in enumerate(cfg.dims):
        sub = root.split(j)
        for i, level in enumerate(cfg.levels):
            for mode, e in (("fixed_eps", eps), ("fixed_ratio", cfg.eps_ratio * level)):
                w = _walk(cfg, d, level, e)
                # both modes share the replication streams of a level
                b = run_many(w, sub.split(i), cfg.reps)
                m, h = _ci(b.steps[b.ok])
                t.add(d, level, mode, e, w.position_gap_bound, m, h, _failures(b))
    return t


def run_rng_count(cfg):
    """Steps and random draws consumed by each replication."""
    root = RngStream(cfg.seed)
    level, eps = cfg.levels[0], cfg.epsilons[0]
    t = Table(["delta", "rep", "steps", "steps_integer", "draws", "status"], metadata=_metadata(cfg))
    for j, d in enumerate(cfg.dims):
        b = run_many(_walk(cfg, d, level, eps), root.split(j), cfg.reps)
        for i in range(len(b)):
            t.add(d, i, b.steps[i], b.steps_integer[i], b.draws[i], b.status[i])
    return t


def run_validate(cfg, only=None):
    """Acceptance suite; one row per criterion."""
    results = run_validation(cfg.seed, only=only, quick=cfg.quick)
    t = Table(["criterion", "passed", "summary"], metadata=_metadata(cfg))
    for r in results:
        t.add(r.name, bool(r.passed), r.summary)
    t.metadata["passed"] = all(r.passed for r in results)
    return t


RUNNERS = {
    "sample": run_sample,
    "hist": run_hist,
    "steps-vs-eps": run_steps_vs_eps,
    "steps-vs-dim": run_steps_vs_dim,
    "steps-vs-level": run_steps_vs_level,
    "rng-count": run_rng_count,
    "validate": run_validate,
}


def run_experiment(cfg):
    return RUNNERS[cfg.experiment](cfg)
