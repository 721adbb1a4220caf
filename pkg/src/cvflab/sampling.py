"""Partial analysis: rank estimates from random probes, no state-space construction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cvf import FEASIBLE, MAXCVF, PARTIAL, AnalysisReport, RankEffectHistogram, fit_exponential, \
    report_from_effects
from .errors import DegenerateReportError, FitError, UnreachableInvariantError, UsageError
from .parallel import _GOLDEN, _MASK, SplitMix, derive_seed, parallel_map
from .program import StabilizingProgram
from .statespace import AVERAGE, MAX

_ORIGIN_STREAM = 0x5EED


@dataclass(frozen=True)
class SamplingConfig:
    num_states: int = 1000
    paths_per_state: int = 100
    walk_cap: int = 10_000
    seed: int = 0

    def __post_init__(self):
        if min(self.num_states, self.paths_per_state, self.walk_cap) <= 0:
            raise UsageError("sampling sizes must be positive")
        if self.seed < 0:
            raise UsageError("seed must be non-negative")


@dataclass(frozen=True)
class SampledRank:
    state: tuple
    max_est: float
    avg_est: float
    probes: int
    truncated: int

    def estimate(self, kind: str) -> float:
        return self.max_est if kind == MAX else self.avg_est


class _StepCache:
    """Memoized ``step_options`` keyed by state."""

    def __init__(self, program: StabilizingProgram):
        self.program = program
        self.table: dict = {}

    def __call__(self, s):
        hit = self.table.get(s)
        if hit is None:
            hit = self.table[s] = self.program.step_options(s)
        return hit


def _walk(steps: _StepCache, s, seed: int, cap: int) -> int | None:
    # hot loop: the SplitMix stream and the cache lookup are inlined
    table = steps.table
    x = seed & _MASK
    length = 0
    while True:
        hit = table.get(s)
        if hit is None:
            hit = steps(s)
        legit, nxt = hit
        if legit:
            return length
        if length >= cap or not nxt:
            return None
        k = len(nxt)
        if k == 1:
            s = nxt[0]
        else:
            x = (x + _GOLDEN) & _MASK
            z = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
            z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
            s = nxt[((z ^ (z >> 31)) * k) >> 64]
        length += 1


def probe_rank(program: StabilizingProgram, s0, config: SamplingConfig,
               cache: _StepCache | None = None) -> SampledRank:
    """Run ``paths_per_state`` seeded random walks from ``s0`` to the invariant."""
    steps = cache if cache is not None else _StepCache(program)
    idx = program.index(s0)
    lengths = []
    truncated = 0
    for k in range(config.paths_per_state):
        length = _walk(steps, s0, derive_seed(config.seed, idx, k), config.walk_cap)
        if length is None:
            truncated += 1
        else:
            lengths.append(length)
    if not lengths:
        raise UnreachableInvariantError(
            f"all {config.paths_per_state} probes from {s0} hit the walk cap {config.walk_cap}")
    return SampledRank(tuple(s0), float(max(lengths)), sum(lengths) / len(lengths),
                       config.paths_per_state, truncated)


def sample_origins(program: StabilizingProgram, config: SamplingConfig) -> list[int]:
    rng = SplitMix(derive_seed(config.seed, _ORIGIN_STREAM))
    return [rng.randrange(program.state_count) for _ in range(config.num_states)]


def _neighbors(program, s, cvf_kind):
    _, nxt = program.step_options(s)
    prog = sorted(set(nxt), key=program.index)
    cvfs = []
    for j in range(program.n):
        cvfs.extend(program.maxcvf(s, j) if cvf_kind == MAXCVF else program.feasible_perturbations(s, j))
    return prog, cvfs


def _origin_task(args):
    """Per origin: (legit, program (r0, r1) pairs, cvf (r0, r1) pairs) of SampledRanks."""
    program, config, cvf_kind, origins = args
    cache = _StepCache(program)
    ranks: dict = {}

    def rank_of(s):
        hit = ranks.get(s)
        if hit is None:
            hit = ranks[s] = probe_rank(program, s, config, cache)
        return hit

    out = []
    for idx in origins:
        s0 = program.state(idx)
        legit = cache(s0)[0]
        prog, cvfs = _neighbors(program, s0, cvf_kind)
        r0 = rank_of(s0)
        prog_pairs = [] if legit else [(r0, rank_of(t)) for t in prog]
        cvf_pairs = [(r0, rank_of(t)) for t in cvfs]
        out.append((legit, prog_pairs, cvf_pairs))
    return out


def partial_reports(program: StabilizingProgram, config: SamplingConfig, cvf_kind: str = FEASIBLE,
                    rank_kinds=(MAX, AVERAGE), topology: str = "ring", workers: int = 1):
    """One sampling pass, one report (and cvf histogram) per rank kind."""
    if cvf_kind not in (FEASIBLE, MAXCVF):
        raise UsageError(f"unknown cvf kind {cvf_kind!r}")
    origins = sample_origins(program, config)
    chunk = max(1, len(origins) // max(1, workers * 4))
    tasks = [(program, config, cvf_kind, origins[i:i + chunk]) for i in range(0, len(origins), chunk)]
    rows = [r for part in parallel_map(_origin_task, tasks, workers) for r in part]

    reports, hists = [], []
    for kind in rank_kinds:
        prog_eff, cvf_eff, all_cvf = [], [], []
        for legit, prog_pairs, cvf_pairs in rows:
            prog_eff.extend(b.estimate(kind) - a.estimate(kind) for a, b in prog_pairs)
            effects = [b.estimate(kind) - a.estimate(kind) for a, b in cvf_pairs]
            all_cvf.extend(effects)
            if not legit:
                cvf_eff.extend(effects)
        if not all_cvf:
            raise DegenerateReportError("no cvf transitions among the sampled origins")
        hist = RankEffectHistogram.from_effects(all_cvf, "cvf", kind)
        try:
            fit = fit_exponential(hist)
        except FitError:
            fit = None
        reports.append(report_from_effects(
            np.array(prog_eff), np.array(cvf_eff), program=program.name, topology=topology,
            n=program.n, rank_kind=kind, analysis_kind=PARTIAL, fit=fit))
        hists.append(hist)
    return reports, hists


def partial_report(program: StabilizingProgram, config: SamplingConfig, cvf_kind: str = FEASIBLE,
                   rank_kind: str = AVERAGE, topology: str = "ring", workers: int = 1) -> AnalysisReport:
    reports, _ = partial_reports(program, config, cvf_kind, (rank_kind,), topology, workers)
    return reports[0]
