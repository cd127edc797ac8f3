"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--paths 20000]

Prints one row per kernel with the best-of-N wall time for each backend,
the speedup, and the largest difference between the two outputs.
"""

import argparse
import timeit

import numpy as np

from airyspec import _kernels
from airyspec import eigenfunctions as E
from airyspec.airy_core import airy
from airyspec.feynman_kac import SAMPLERS


def cases(paths, steps):
    x = np.linspace(-40.0, 40.0, 200_001)
    ef = E.eigenfunction(3)
    u, g = E._remainder_rule(3, 5, 0)
    z = np.linspace(0.0, 20.0, 2000)

    def airy_case(backend):
        return airy(x, backend=backend)[0]

    def trig_case(backend):
        return backend.trig_sum(z, u, g, ef.kind)

    def fk_case(sampler):
        def run(backend):
            return backend.fk_path_values(0.0, 1.0, steps, 0, paths, 1, SAMPLERS[sampler], 1)
        return run

    return {
        "airy_eval (2e5 points)": airy_case,
        f"trig_sum ({z.size} x {u.size})": trig_case,
        f"fk_path_values direct ({paths} x {steps})": fk_case("direct_cauchy"),
        f"fk_path_values subordinated ({paths} x {steps})": fk_case("subordinated_bm"),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--paths", type=int, default=20_000)
    parser.add_argument("--steps", type=int, default=200)
    args = parser.parse_args(argv)

    if _kernels.compiled is None:
        parser.exit(1, "compiled extension not available; build with pip install -e . --no-build-isolation\n")

    print(f"{'kernel':<44} {'python s':>10} {'compiled s':>11} {'speedup':>8} {'max |diff|':>11}")
    for name, fn in cases(args.paths, args.steps).items():
        py_out, c_out = fn(_kernels.python), fn(_kernels.compiled)
        diff = float(np.max(np.abs(py_out - c_out)))
        t_py = min(timeit.repeat(lambda: fn(_kernels.python), number=1, repeat=args.repeat))
        t_c = min(timeit.repeat(lambda: fn(_kernels.compiled), number=1, repeat=args.repeat))
        print(f"{name:<44} {t_py:>10.4f} {t_c:>11.4f} {t_py / t_c:>7.1f}x {diff:>11.2e}")


if __name__ == "__main__":
    main()
