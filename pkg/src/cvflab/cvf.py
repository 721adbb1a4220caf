"""Cvf enumeration, rank-effect distributions, rel_cvf and exponential fits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DegenerateReportError, EmptyHistogramError, FitError, UsageError
from .statespace import AVERAGE, MAX, RankTable, StateSpace
from .stats import ExactAccumulator, least_squares, round_half_away

MAXCVF = "max"
FEASIBLE = "feasible"
CVF_KINDS = (MAXCVF, FEASIBLE)
FULL = "full"
PARTIAL = "partial"


@dataclass
class CvfSet:
    kind: str
    source: np.ndarray
    target: np.ndarray
    process: np.ndarray

    def __len__(self):
        return len(self.source)


def enumerate_cvfs(space: StateSpace, kind: str) -> CvfSet:
    """All cvf transitions of ``kind``, sorted by (source, target)."""
    program = space.program
    if kind == MAXCVF:
        idx = np.arange(space.state_count, dtype=np.int64)
        src, tgt, proc = [], [], []
        for j, (radix, stride) in enumerate(zip(program.radices, program.strides)):
            digit = (idx // stride) % radix
            for off in range(1, radix):
                src.append(idx)
                tgt.append(idx + (((digit + off) % radix) - digit) * stride)
                proc.append(np.full_like(idx, j))
        src, tgt, proc = (np.concatenate(a) for a in (src, tgt, proc))
    elif kind == FEASIBLE:
        digit = program._digit
        src, tgt, proc = [], [], []
        for i, s in enumerate(program.states()):
            for j in range(program.n):
                cur = digit[j][s[j]]
                stride = program.strides[j]
                for v in program.perturbation_values(s, j):
                    d = digit[j][v]
                    if d != cur:
                        src.append(i)
                        tgt.append(i + (d - cur) * stride)
                        proc.append(j)
        src, tgt, proc = (np.array(a, dtype=np.int64) for a in (src, tgt, proc))
    else:
        raise UsageError(f"unknown cvf kind {kind!r}")
    order = np.lexsort((tgt, src))
    return CvfSet(kind, src[order], tgt[order], proc[order])


def exact_effects(ranks: RankTable, source, target) -> list:
    """Rank effects as exact ints/Fractions, for checks that must not round."""
    if ranks.kind == MAX:
        r = [int(x) for x in ranks.rank]
    else:
        r = [Fraction(t, c) for t, c in zip(ranks.total_path_length, ranks.path_count)]
    return [r[t] - r[s] for s, t in zip(np.asarray(source).tolist(), np.asarray(target).tolist())]


def mean_exact_effect(ranks: RankTable, cvfs: CvfSet) -> Fraction:
    acc = ExactAccumulator()
    acc.extend(exact_effects(ranks, cvfs.source, cvfs.target))
    return acc.mean()


@dataclass
class RankEffectHistogram:
    source: str  # "program" | "cvf"
    rank_kind: str
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def fraction(self, c: int) -> float:
        total = self.total
        return self.counts.get(c, 0) / total if total else 0.0

    def rows(self) -> list[tuple[int, int, float]]:
        total = self.total
        return [(c, self.counts[c], self.counts[c] / total) for c in sorted(self.counts)]

    @classmethod
    def from_effects(cls, effects, source: str, rank_kind: str) -> "RankEffectHistogram":
        counts: dict[int, int] = {}
        for e in effects:
            c = round_half_away(float(e))
            counts[c] = counts.get(c, 0) + 1
        return cls(source, rank_kind, dict(sorted(counts.items())))


def histogram(space: StateSpace, ranks: RankTable, source, target, outside_only: bool = True,
              kind: str = "cvf") -> RankEffectHistogram:
    source = np.asarray(source, dtype=np.int64)
    target = np.asarray(target, dtype=np.int64)
    keep = source != target
    if outside_only:
        keep &= ~space.invariant[source]
    effects = ranks.rank[target[keep]] - ranks.rank[source[keep]]
    if len(effects) == 0:
        raise EmptyHistogramError(f"no {kind} transitions to histogram")
    return RankEffectHistogram.from_effects(effects, kind, ranks.kind)


@dataclass(frozen=True)
class ExponentialFit:
    A: float
    B: float
    r2: float
    bins: int

    def probability(self, c) -> float:
        """Fitted P(c) = A * B**(-c)."""
        return self.A * self.B ** (-c)


def fit_exponential(hist: RankEffectHistogram) -> ExponentialFit:
    """Least squares of log10(fraction) against c over the nonempty positive bins."""
    pts = [(c, math.log10(frac)) for c, count, frac in hist.rows() if c > 0 and count > 0]
    if len(pts) < 2:
        raise FitError(f"need at least two positive bins to fit, have {len(pts)}")
    slope, intercept, r2 = least_squares(pts)
    return ExponentialFit(10.0 ** intercept, 10.0 ** (-slope), r2, len(pts))


@dataclass
class AnalysisReport:
    program: str
    topology: str
    n: int
    rank_kind: str
    analysis_kind: str
    effect_prog: float
    effect_cvf: float
    rel_cvf: float
    fit: ExponentialFit | None = None

    def row(self) -> dict:
        fit = self.fit
        nan = float("nan")
        return {
            "program": self.program,
            "topology": self.topology,
            "n": self.n,
            "rank_kind": self.rank_kind,
            "analysis_kind": self.analysis_kind,
            "effect_prog": self.effect_prog,
            "effect_cvf": self.effect_cvf,
            "rel_cvf": self.rel_cvf,
            "fit_A": fit.A if fit else nan,
            "fit_B": fit.B if fit else nan,
            "fit_r2": fit.r2 if fit else nan,
        }


def rel_cvf(effect_prog: float, effect_cvf: float) -> float:
    if effect_prog == 0:
        raise DegenerateReportError("program transitions have zero mean rank effect")
    return -effect_cvf / effect_prog


def report_from_effects(prog_effects, cvf_effects, *, program: str, topology: str, n: int,
                        rank_kind: str, analysis_kind: str, fit=None) -> AnalysisReport:
    """Aggregate raw effects (origins already restricted to outside the invariant)."""
    prog_effects = np.asarray(prog_effects, dtype=np.float64)
    cvf_effects = np.asarray(cvf_effects, dtype=np.float64)
    if len(prog_effects) == 0:
        raise DegenerateReportError("no program transitions outside the invariant")
    increasing = cvf_effects[cvf_effects > 0]
    if len(increasing) == 0:
        raise DegenerateReportError("no rank-increasing cvfs")
    effect_prog = float(prog_effects.mean())
    effect_cvf = float(increasing.mean())
    return AnalysisReport(program, topology, n, rank_kind, analysis_kind,
                          effect_prog, effect_cvf, rel_cvf(effect_prog, effect_cvf), fit)


def compute_report(space: StateSpace, ranks: RankTable, cvfs: CvfSet, topology: str = "ring",
                   cvf_hist: RankEffectHistogram | None = None) -> AnalysisReport:
    src, tgt, _ = space.transitions()
    outside = ~space.invariant[src]
    prog_effects = ranks.rank[tgt[outside]] - ranks.rank[src[outside]]
    c_out = ~space.invariant[cvfs.source]
    cvf_effects = ranks.rank[cvfs.target[c_out]] - ranks.rank[cvfs.source[c_out]]
    if cvf_hist is None:
        # the distribution and its fit cover every origin, invariant included
        cvf_hist = histogram(space, ranks, cvfs.source, cvfs.target, outside_only=False)
    try:
        fit = fit_exponential(cvf_hist)
    except FitError:
        fit = None
    program = space.program
    return report_from_effects(prog_effects, cvf_effects, program=program.name, topology=topology,
                               n=program.n, rank_kind=ranks.kind, analysis_kind=FULL, fit=fit)


@dataclass
class FullAnalysis:
    reports: list[AnalysisReport]
    histograms: list[RankEffectHistogram]
    ranks: dict[str, RankTable]


def analyze_full(space: StateSpace, rank_kinds=(MAX, AVERAGE), cvf_kind: str = FEASIBLE,
                 topology: str = "ring", cvf_outside_only: bool = False) -> FullAnalysis:
    """Reports plus program and cvf histograms per rank kind.

    The cvf histogram (and the fit drawn from it) spans every origin unless
    ``cvf_outside_only``; the program histogram always starts outside inv.
    """
    from .statespace import compute_ranks

    cvfs = enumerate_cvfs(space, cvf_kind)
    src, tgt, _ = space.transitions()
    reports, hists, tables = [], [], {}
    for kind in rank_kinds:
        ranks = compute_ranks(space, kind)
        tables[kind] = ranks
        prog_hist = histogram(space, ranks, src, tgt, kind="program")
        cvf_hist = histogram(space, ranks, cvfs.source, cvfs.target, outside_only=cvf_outside_only, kind="cvf")
        hists.extend([prog_hist, cvf_hist])
        reports.append(compute_report(space, ranks, cvfs, topology, cvf_hist))
    return FullAnalysis(reports, hists, tables)
