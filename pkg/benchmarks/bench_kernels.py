"""Time the numba and numpy kernel backends on the training hot path.

    python benchmarks/bench_kernels.py [--repeat 20]

For each (n, d, N) it times a forward pass of the ansatz over the dataset
(``run_program``) and one fused overlap-plus-gradient sweep (``overlap_grad``),
after checking that the two backends agree.
"""
import argparse
import time

import numpy as np

from vqpt import kernels
from vqpt.ansatz import Ansatz
from vqpt.datasets import make_dataset
from vqpt.targets import XXZParams, xxz_target

CASES = [(2, 2, 4), (4, 4, 10), (6, 6, 10), (8, 6, 16), (10, 6, 16)]


def best_time(fn, repeat):
    fn()  # warm-up, includes compilation for numba
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=20)
    args = parser.parse_args()
    if kernels.NUMBA is None:
        raise SystemExit("numba is not installed; nothing to compare against")

    print(f"{'case':>12} {'kernel':>13} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for n, d, size in CASES:
        rng = np.random.default_rng(0)
        ansatz = Ansatz(n, d)
        ds = make_dataset(n, size, xxz_target(XXZParams(n)).unitary, rng)
        ops, fixed = ansatz.program
        theta = ansatz.init_params(rng)
        p = ansatz.num_params

        results = {}
        for backend in (kernels.NUMPY, kernels.NUMBA):
            fwd = lambda b=backend: b.run_program(ds.inputs.copy(), ops, fixed, theta, False)
            grad = lambda b=backend: b.overlap_grad(ds.inputs, ds.ideal_outputs, ops, fixed, theta, p)
            results[backend.name] = (grad(), best_time(fwd, args.repeat), best_time(grad, args.repeat))

        (ov_a, g_a), *_ = results["numpy"]
        (ov_b, g_b), *_ = results["numba"]
        assert np.allclose(ov_a, ov_b, atol=1e-10) and np.allclose(g_a, g_b, atol=1e-10), "backends disagree"

        label = f"({n},{d},{size})"
        for i, kernel in ((1, "run_program"), (2, "overlap_grad")):
            t_np, t_nb = results["numpy"][i], results["numba"][i]
            print(f"{label:>12} {kernel:>13} {t_np * 1e3:10.3f} {t_nb * 1e3:10.3f} {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
