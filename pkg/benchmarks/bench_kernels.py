"""Compare the compiled and pure-Python kernels on representative workloads.

    python benchmarks/bench_kernels.py [--repeat N]

Prints a table of best-of-N wall times and the speed-up.  End-to-end
timings run the CLI-level solvers once per backend in a subprocess so that
the import-time backend switch (``NETGAME_PURE_PYTHON``) takes effect.
"""

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from netgame import kernels
from netgame.files import parse_instance
from netgame.game import budget_limit, canonical_step_problem, team_problem
from netgame.models import grown_model, psn_model

END_TO_END = """
import json, sys, time
from netgame.files import parse_instance
from netgame.dynamics import Solver, run_best_response_dynamics
from netgame.game import canonical_step_problem
from netgame.relaxed import solve_rgp
inst = parse_instance(json.loads(sys.argv[1]))
t0 = time.perf_counter(); run_best_response_dynamics(inst.initial, Solver()); t1 = time.perf_counter()
solve_rgp(canonical_step_problem(inst.initial, 1)); t2 = time.perf_counter()
print(json.dumps({"dynamics (exact)": t1 - t0, "relaxed solve": t2 - t1}))
"""


def selection_args(inst):
    us, ws, costs, starts, quotas, budgets = inst.concat()
    limits = np.array([budget_limit(float(b)) for b in budgets])
    return np.ascontiguousarray(inst.fixed), us, ws, costs, starts, quotas, limits, 1e-11


def workloads():
    fig1 = parse_instance(grown_model(4, 4, quotas=(7, 7)))
    step = canonical_step_problem(fig1.initial, 1)  # C(14, 7) subsets
    psn = parse_instance(psn_model())
    team = team_problem(psn.base, psn.catalog, psn.specs)  # C(10, 6) * C(10, 4)
    rng = np.random.default_rng(0)
    us, ws, *_ = step.concat()
    w = rng.uniform(0, 1, len(us))
    d = np.where(rng.uniform(size=len(us)) < 0.5, -w, 1 - w) * 0.5
    fixed = np.ascontiguousarray(step.fixed)
    f0 = kernels.pure.weighted_lambda2(fixed, us, ws, w)
    return {
        "enumerate 4+4 step, C(14,7)": ("best_selection", selection_args(step)),
        "enumerate PSN team, 44100": ("best_selection", selection_args(team)),
        "weighted lambda2, n=8": ("weighted_lambda2", (fixed, us, ws, w)),
        "golden line search": ("golden_line_search", (fixed, us, ws, w, d, 1.0, f0, 1e-8)),
    }


def best_of(fn, args, repeat):
    number = 1
    while timeit.timeit(lambda: fn(*args), number=number) < 0.05 and number < 10_000:
        number *= 4
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def end_to_end():
    out = {}
    raw = json.dumps(grown_model(4, 4, quotas=(7, 7)))
    for backend, flag in (("compiled", "0"), ("python", "1")):
        env = dict(os.environ, NETGAME_PURE_PYTHON=flag)
        res = subprocess.run([sys.executable, "-c", END_TO_END, raw], env=env, capture_output=True,
                             text=True, check=True)
        out[backend] = json.loads(res.stdout)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if kernels.compiled is None:
        sys.exit("compiled extension not available; build with `pip install -e . --no-build-isolation`")
    print(f"{'workload':34s} {'compiled':>12s} {'python':>12s} {'speed-up':>9s}")
    for name, (fn, fargs) in workloads().items():
        tc = best_of(getattr(kernels.compiled, fn), fargs, args.repeat)
        tp = best_of(getattr(kernels.pure, fn), fargs, args.repeat)
        print(f"{name:34s} {tc * 1e3:10.3f}ms {tp * 1e3:10.3f}ms {tp / tc:8.1f}x")
    e2e = end_to_end()
    for name in e2e["compiled"]:
        tc, tp = e2e["compiled"][name], e2e["python"][name]
        print(f"{'4+4 k=7 ' + name:34s} {tc * 1e3:10.3f}ms {tp * 1e3:10.3f}ms {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
