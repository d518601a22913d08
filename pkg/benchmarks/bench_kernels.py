"""Compare the compiled sweep kernel with the numpy fallback.

Run ``python3 benchmarks/bench_kernels.py``.  Prints, per matrix size and
sweep dimension, the agreement of the two backends and their throughput on a
batch of directions, then the end-to-end time of ``numerical_radius`` and
``euclidean_radius`` under each backend.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from opradius import kernels
from opradius.radii import _circle_basis, _sphere_basis


def _best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_table(sizes, batch, repeat, seed):
    rng = np.random.default_rng(seed)
    print(f"{'n':>3} {'dim':>3} {'max diff':>9} {'numpy ms':>9} {'compiled ms':>11} {'speedup':>7}")
    for n in sizes:
        t = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        c = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        for basis in (_circle_basis(t)[None], _sphere_basis(t, c)[None]):
            d = basis.shape[1]
            dirs = rng.standard_normal((batch, d))
            dirs /= np.linalg.norm(dirs, axis=1)[:, None]
            member = np.zeros(batch, dtype=np.intp)
            a = kernels.top_eig_python(basis, member, dirs)
            b = kernels.top_eig_compiled(basis, member, dirs)
            diff = max(np.abs(a[0] - b[0]).max(), np.abs(a[1] - b[1]).max())
            tp = _best_of(lambda: kernels.top_eig_python(basis, member, dirs), repeat)
            tc = _best_of(lambda: kernels.top_eig_compiled(basis, member, dirs), repeat)
            print(f"{n:>3} {d:>3} {diff:>9.1e} {tp * 1e3:>9.3f} {tc * 1e3:>11.3f} {tp / tc:>6.1f}x")


_END_TO_END = """
import time, numpy as np
from opradius import BACKEND, numerical_radius, euclidean_radius
rng = np.random.default_rng({seed})
out = []
for n in {sizes}:
    mats = [rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) for _ in range(40)]
    t0 = time.perf_counter()
    for m in mats[:20]:
        numerical_radius(m)
    tw = (time.perf_counter() - t0) / 20
    t0 = time.perf_counter()
    for b, c in zip(mats[20:30], mats[30:]):
        euclidean_radius(b, c)
    te = (time.perf_counter() - t0) / 10
    out.append((n, tw, te))
print(BACKEND)
for n, tw, te in out:
    print(n, tw, te)
"""


def end_to_end(sizes, seed):
    rows = {}
    for forced in ("0", "1"):
        env = dict(os.environ, OPRADIUS_PURE_PYTHON=forced)
        code = _END_TO_END.format(seed=seed, sizes=list(sizes))
        lines = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                               capture_output=True, text=True).stdout.split("\n")
        rows[lines[0]] = [tuple(float(v) for v in ln.split()) for ln in lines[1:] if ln.strip()]
    print(f"\n{'n':>3} {'backend':>9} {'w ms':>8} {'w_e ms':>8}")
    for name, data in rows.items():
        for n, tw, te in data:
            print(f"{int(n):>3} {name:>9} {tw * 1e3:>8.2f} {te * 1e3:>8.2f}")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="1,2,3,5,8")
    p.add_argument("--batch", type=int, default=2000)
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]
    if kernels.top_eig_compiled is None:
        sys.exit("compiled extension not built; run `pip install -e . --no-build-isolation` first")
    kernel_table(sizes, args.batch, args.repeat, args.seed)
    end_to_end(sizes, args.seed)


if __name__ == "__main__":
    main()
