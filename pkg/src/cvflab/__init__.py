"""Rank-based analysis of consistency-violation faults in self-stabilizing programs."""

from .case_studies import ColoringProgram, MatchingProgram, TokenRingProgram, make_program
from .cvf import AnalysisReport, RankEffectHistogram, analyze_full, enumerate_cvfs, fit_exponential
from .graphs import GraphSpec, generate
from .program import CommGraph, StabilizingProgram
from .sampling import SamplingConfig, partial_report, partial_reports
from .simulation import SimConfig, run_campaign
from .statespace import compute_average_rank, compute_max_rank, compute_ranks, enumerate_space

__all__ = [
    "AnalysisReport", "ColoringProgram", "CommGraph", "GraphSpec", "MatchingProgram", "RankEffectHistogram",
    "SamplingConfig", "SimConfig", "StabilizingProgram", "TokenRingProgram", "analyze_full",
    "compute_average_rank", "compute_max_rank", "compute_ranks", "enumerate_cvfs", "enumerate_space",
    "fit_exponential", "generate", "make_program", "partial_report", "partial_reports", "run_campaign",
]
