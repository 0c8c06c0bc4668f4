"""Compare the compiled and numpy statevector kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from paldus import kernels
from paldus.circuit import Circuit, Gate, paldus_circuit, run, run_isometry_check


def _random_gates(width: int, count: int, rng: np.random.Generator) -> Circuit:
    circ = Circuit(width)
    for _ in range(count):
        qa, qb, ctrl = rng.choice(width, size=3, replace=False).tolist()
        two_s = int(rng.integers(0, 6))
        two_m = int(rng.choice(range(-two_s - 1, two_s + 1, 2)))
        circ.append(Gate("ControlledGivens", (qa, qb), (ctrl,), (1,), {"twoS": two_s, "twoM": two_m}))
    return circ


def _best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = sorted(kernels.available())
    rng = np.random.default_rng(0)
    state = rng.normal(size=1 << 20) + 1j * rng.normal(size=1 << 20)
    state /= np.linalg.norm(state)
    cases = {
        "isometry d=3": lambda: run_isometry_check(3),
        "isometry d=4": lambda: run_isometry_check(4),
        "paldus_circuit(4) on random 19-qubit state": lambda: run(paldus_circuit(4), state[: 1 << 19]),
        "200 random Givens, 20 qubits": lambda: run(_random_gates(20, 200, np.random.default_rng(1)), state),
    }
    before = kernels.BACKEND
    results: dict[str, dict[str, float]] = {}
    try:
        for name in backends:
            kernels.use(name)
            for case, fn in cases.items():
                results.setdefault(case, {})[name] = _best(fn, 1 if "d=4" in case else args.repeat)
    finally:
        kernels.use(before)
    print(f"{'case':46s}" + "".join(f"{b:>10s}" for b in backends) + ("   speedup" if len(backends) > 1 else ""))
    for case, row in results.items():
        line = f"{case:46s}" + "".join(f"{row[b]:9.3f}s" for b in backends)
        if "cython" in row and "python" in row:
            line += f"   {row['python'] / row['cython']:6.2f}x"
        print(line)


if __name__ == "__main__":
    main()
