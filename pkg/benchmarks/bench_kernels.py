"""Time the batch kernels on exhaustive enumeration.

    python benchmarks/bench_kernels.py [machine] [max_len]

Runs every word up to ``max_len`` through each backend, checks that the
verdicts and message counts agree, and prints words per second.
"""
import sys
import time

import numpy as np

from pwk import zoo
from pwk.accel import NUMBA_ENABLED, encode, length_batches


def collect(spec, max_len, backend, enc):
    parts = [(r.verdict.copy(), r.sent_upper + r.sent_lower)
             for _, _, r in length_batches(spec, max_len, backend=backend, enc=enc)]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def main(argv):
    name = argv[1] if len(argv) > 1 else "an_bn"
    max_len = int(argv[2]) if len(argv) > 2 else 16
    spec = zoo.get(name).spec
    enc = encode(spec)
    backends = (["numba"] if NUMBA_ENABLED else []) + ["numpy"]
    if NUMBA_ENABLED:
        collect(spec, 2, "numba", enc)  # compile outside the timed run
    reference = None
    for backend in backends:
        t0 = time.perf_counter()
        verdicts, sent = collect(spec, max_len, backend, enc)
        dt = time.perf_counter() - t0
        if reference is None:
            reference = (verdicts, sent)
        else:
            assert np.array_equal(reference[0], verdicts) and np.array_equal(reference[1], sent), backend
        print(f"{name} L<={max_len} {backend:6s} {verdicts.size:9d} words {dt:8.3f} s  {verdicts.size / dt:12.0f} words/s")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
