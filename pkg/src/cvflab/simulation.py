"""Convergence simulation with cvfs injected every ``cvf_interval`` program steps."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import UsageError
from .parallel import SplitMix, derive_seed, parallel_map
from .program import StabilizingProgram

_INITIAL_STREAM = 0x1A17
# "enabled": each iteration fires a uniformly random enabled (process, action, binding).
# "process": each iteration picks a uniformly random process, which idles if disabled.
SCHEDULERS = ("enabled", "process")


@dataclass(frozen=True)
class SimConfig:
    cvf_intervals: tuple[int, ...] = (1, 2, 4, 8, 16)
    runs_per_state: int = 5
    step_threshold: int = 10_000
    initial_states: tuple | None = None  # explicit state tuples; overrides num_initial
    num_initial: int = 20
    seed: int = 0
    scheduler: str = "enabled"

    def __post_init__(self):
        if self.scheduler not in SCHEDULERS:
            raise UsageError(f"unknown scheduler {self.scheduler!r}")
        if any(k < 0 for k in self.cvf_intervals):
            raise UsageError("cvf_interval must be >= 0")
        if self.step_threshold <= 0 or self.runs_per_state <= 0 or self.num_initial <= 0:
            raise UsageError("threshold, runs_per_state and num_initial must be positive")
        if self.seed < 0:
            raise UsageError("seed must be non-negative")


@dataclass
class SimOutcome:
    initial_state: tuple
    initial_index: int
    cvf_interval: int
    convergence_steps: float
    converged_runs: int
    baseline_steps: float
    ratio: float
    runs: list[int] = field(default_factory=list)
    baseline_runs: list[int] = field(default_factory=list)


def inject_cvf(program: StabilizingProgram, s, rng: SplitMix):
    """Apply one random feasible perturbation at a random process (None if none exists)."""
    for _ in range(program.n):
        j = rng.randrange(program.n)
        options = program.feasible_perturbations(s, j)
        if options:
            return options[rng.randrange(len(options))]
    return None


def run_one(program: StabilizingProgram, s0, cvf_interval: int, threshold: int, seed: int,
            scheduler: str = "enabled"):
    """Returns ``(iterations, converged)``; iterations count program steps and injected cvfs.

    A capped run reports ``threshold`` iterations.
    """
    rng = SplitMix(seed)
    s = tuple(s0)
    iterations = 0
    program_steps = 0
    while True:
        legit, nxt = program.step_options(s)
        if legit:
            return iterations, True
        if iterations >= threshold or not nxt:
            return threshold, False
        if scheduler == "enabled":
            s = nxt[rng.randrange(len(nxt))]
        else:
            j = rng.randrange(program.n)
            mine = [t for t in nxt if t[j] != s[j]]
            if mine:
                s = mine[rng.randrange(len(mine))]
        iterations += 1
        program_steps += 1
        if cvf_interval and program_steps % cvf_interval == 0 and not program.in_invariant(s):
            t = inject_cvf(program, s, rng)
            if t is not None:
                s = t
                iterations += 1


def _mean(xs) -> float:
    return sum(xs) / len(xs)


def _state_task(args):
    program, config, idx = args
    s0 = program.state(idx)
    runs = config.runs_per_state
    thr = config.step_threshold
    sched = config.scheduler
    baseline = [run_one(program, s0, 0, thr, derive_seed(config.seed, idx, 0, r), sched)[0] for r in range(runs)]
    base_mean = _mean(baseline)
    out = []
    for k in config.cvf_intervals:
        if k == 0:
            steps, conv = baseline, runs
        else:
            results = [run_one(program, s0, k, thr, derive_seed(config.seed, idx, k, r), sched) for r in range(runs)]
            steps = [r[0] for r in results]
            conv = sum(1 for r in results if r[1])
        mean_steps = _mean(steps)
        ratio = mean_steps / base_mean if base_mean > 0 else 1.0
        out.append(SimOutcome(s0, idx, k, mean_steps, conv, base_mean, ratio, list(steps), list(baseline)))
    return out


def sample_initial_states(program: StabilizingProgram, count: int, seed: int) -> list[int]:
    """Distinct uniformly drawn state indices outside the invariant."""
    rng = SplitMix(derive_seed(seed, _INITIAL_STREAM))
    picked: list[int] = []
    seen = set()
    budget = 1000 * count
    while len(picked) < count and budget > 0:
        budget -= 1
        idx = rng.randrange(program.state_count)
        if idx in seen:
            continue
        seen.add(idx)
        if not program.in_invariant(program.state(idx)):
            picked.append(idx)
    if len(picked) < count:
        raise UsageError(f"could not find {count} distinct states outside the invariant")
    return picked


def run_campaign(program: StabilizingProgram, config: SimConfig, workers: int = 1) -> list[SimOutcome]:
    if config.initial_states is not None:
        for s in config.initial_states:
            program.validate(s)
        indices = [program.index(s) for s in config.initial_states]
    else:
        indices = sample_initial_states(program, config.num_initial, config.seed)
    tasks = [(program, config, idx) for idx in indices]
    return [o for part in parallel_map(_state_task, tasks, workers) for o in part]
