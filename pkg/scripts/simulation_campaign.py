"""Convergence-ratio campaign over cvf intervals; prints the median ratio per interval."""

import argparse
import statistics
from collections import defaultdict

from cvflab import SimConfig, make_program, run_campaign
from cvflab.io import SIMULATION_COLUMNS, emit, simulation_rows
from cvflab.simulation import SCHEDULERS


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--program", default="token-ring", choices=["token-ring", "coloring", "matching"])
    ap.add_argument("--n", type=int, default=9)
    ap.add_argument("--intervals", type=int, nargs="+", default=[1, 2, 4, 8, 16])
    ap.add_argument("--num-states", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--scheduler", choices=SCHEDULERS, default="enabled")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default=None)
    args = ap.parse_args()

    program = make_program(args.program, n=args.n)
    cfg = SimConfig(cvf_intervals=tuple(args.intervals), num_initial=args.num_states, seed=args.seed,
                    scheduler=args.scheduler)
    outcomes = run_campaign(program, cfg, workers=args.workers)
    by_k = defaultdict(list)
    for o in outcomes:
        by_k[o.cvf_interval].append(o.ratio)
    for k in args.intervals:
        r = by_k[k]
        q = statistics.quantiles(r, n=4) if len(r) > 1 else [r[0]] * 3
        print(f"k={k:3d} median={statistics.median(r):.3f} iqr=[{q[0]:.3f}, {q[2]:.3f}]")
    if args.out:
        print("wrote", emit(simulation_rows(outcomes, args.program, "ring", args.n), SIMULATION_COLUMNS, args.out))


if __name__ == "__main__":
    main()
