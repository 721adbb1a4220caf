"""Compare sampled rel_cvf against full enumeration across seeds."""

import argparse

from cvflab import SamplingConfig, analyze_full, enumerate_space, make_program, partial_reports
from cvflab.statespace import AVERAGE, MAX


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--program", default="token-ring", choices=["token-ring", "coloring", "matching"])
    ap.add_argument("--n", type=int, default=5)
    ap.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2, 3])
    ap.add_argument("--num-states", type=int, default=1000)
    ap.add_argument("--paths-per-state", type=int, default=100)
    args = ap.parse_args()

    program = make_program(args.program, n=args.n)
    full = {r.rank_kind: r.rel_cvf for r in analyze_full(enumerate_space(program)).reports}
    print(f"{program!r}: full max={full[MAX]:.4f} average={full[AVERAGE]:.4f}")
    for seed in args.seeds:
        cfg = SamplingConfig(num_states=args.num_states, paths_per_state=args.paths_per_state, seed=seed)
        reps, _ = partial_reports(program, cfg, rank_kinds=(MAX, AVERAGE))
        cells = [f"{r.rank_kind}={r.rel_cvf:.4f} ({(r.rel_cvf - full[r.rank_kind]) / full[r.rank_kind]:+.1%})"
                 for r in reps]
        print(f"seed {seed}: " + "  ".join(cells))


if __name__ == "__main__":
    main()
