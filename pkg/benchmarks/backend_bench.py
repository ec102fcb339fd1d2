"""Compare the numba and numpy evaluation backends on oracle workloads.

The satisfiability oracle spends its time evaluating one compiled formula
program over large blocks of candidate assignments. This script times both
backends on exactly that workload (path encodings of empty graphs over the
functional assignment block) plus one dense synthetic case, checks that the
two backends agree, and reports best-of-k wall times and the speedup.

Run from the repository root:

    python3 benchmarks/backend_bench.py
    python3 benchmarks/backend_bench.py --n 4 5 6 7 --repeats 7
"""

import argparse
import sys
from time import perf_counter

import numpy as np

from nonham.bench import empty_graph
from nonham.encoding import encode_graph
from nonham.formulas import bot, imp, q_var
from nonham.kernels import (
    BackendUnavailableError,
    bit_block,
    compile_program,
    eval_batch_numba,
    eval_batch_numpy,
    step_vertex_block,
)


def best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = perf_counter()
        fn()
        best = min(best, perf_counter() - t0)
    return best


def dense_formula(nvars: int, depth: int):
    """A synthetic implication chain mixing every variable several times."""
    f = bot()
    for i in range(depth):
        f = imp(q_var(f"d{i % nvars}"), f)
    return f


def workloads(n_values):
    for n in n_values:
        prog = compile_program(encode_graph(empty_graph(n)).formula)
        seqs = step_vertex_block(n, 0, n**n)
        rows = np.empty((seqs.shape[0], len(prog.var_slots)), dtype=bool)
        for slot, name in enumerate(prog.var_slots):
            np.equal(seqs[:, name.step - 1], name.vertex, out=rows[:, slot])
        yield f"empty graph n={n}", prog, rows
    prog = compile_program(dense_formula(16, 4000))
    yield "dense chain 16 vars", prog, bit_block(16, 0, 2**16)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[4, 5, 6],
                    help="graph sizes for the encoding workloads")
    ap.add_argument("--repeats", type=int, default=5,
                    help="timed repeats per backend; best is reported")
    args = ap.parse_args(argv)

    try:
        warm = compile_program(bot())
        eval_batch_numba(warm, np.zeros((1, 0), dtype=bool))
    except BackendUnavailableError as exc:
        print(f"numba backend unavailable ({exc}); nothing to compare",
              file=sys.stderr)
        return 1

    print(f"{'workload':<22}{'rows':>9}{'nodes':>8}"
          f"{'numpy_ms':>11}{'numba_ms':>11}{'speedup':>9}")
    for label, prog, rows in workloads(args.n):
        # JIT specialization happens on the first call; time warm code only
        expect = eval_batch_numpy(prog, rows)
        got = eval_batch_numba(prog, rows)
        if not np.array_equal(expect, got):
            print(f"{label}: backends disagree", file=sys.stderr)
            return 1
        t_np = best_of(lambda: eval_batch_numpy(prog, rows), args.repeats)
        t_nb = best_of(lambda: eval_batch_numba(prog, rows), args.repeats)
        print(f"{label:<22}{rows.shape[0]:>9}{prog.node_count:>8}"
              f"{t_np * 1e3:>11.2f}{t_nb * 1e3:>11.2f}{t_np / t_nb:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
