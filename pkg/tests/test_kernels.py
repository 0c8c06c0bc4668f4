from __future__ import annotations

import numpy as np
import pytest

from paldus import _pykernels, kernels
from paldus.circuit import paldus_circuit, run

BACKENDS = kernels.available()


def random_state(width, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=1 << width) + 1j * rng.normal(size=1 << width)
    return v / np.linalg.norm(v)


def test_fallback_is_always_available():
    assert "python" in BACKENDS
    assert kernels.BACKEND in BACKENDS


def test_use_rejects_unknown_backend():
    with pytest.raises(ValueError):
        kernels.use("fortran")


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_register_add_matches_reference(name):
    mod = BACKENDS[name]
    width = 7
    rng = np.random.default_rng(1)
    for _ in range(20):
        qubits = rng.permutation(width)
        k = int(rng.integers(1, 4))
        targets = tuple(int(q) for q in qubits[:k])
        controls = [int(q) for q in qubits[k : k + int(rng.integers(0, 3))]]
        mask = sum(1 << (width - 1 - q) for q in controls)
        value = sum(1 << (width - 1 - q) for q in controls if rng.random() < 0.5)
        delta = int(rng.choice([-1, 1]))
        v = random_state(width, int(rng.integers(1 << 30)))
        got = v.copy()
        mod.register_add(got, width, targets, mask, value, delta)
        want = np.zeros_like(v)
        for idx in range(1 << width):
            if idx & mask != value:
                want[idx] += v[idx]
                continue
            reg = 0
            for t in targets:
                reg = (reg << 1) | ((idx >> (width - 1 - t)) & 1)
            new = (reg + delta) % (1 << k)
            dest = idx
            for j, t in enumerate(targets):
                bit = 1 << (width - 1 - t)
                dest = (dest & ~bit) | (((new >> (k - 1 - j)) & 1) * bit)
            want[dest] += v[idx]
        np.testing.assert_array_equal(got, want)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_givens_matches_dense(name):
    mod = BACKENDS[name]
    width = 5
    c, s = np.cos(0.4), np.sin(0.4)
    v = random_state(width, 2)
    got = v.copy()
    mask = 1 << (width - 1 - 4)
    mod.givens(got, width, 1, 3, mask, mask, c, s)
    want = v.copy()
    for idx in range(1 << width):
        if idx & mask and not (idx >> 3) & 1 and (idx >> 1) & 1:  # qa=0, qb=1
            other = idx ^ ((1 << 3) | (1 << 1))
            a, b = v[idx], v[other]
            want[idx] = c * a - s * b
            want[other] = s * a + c * b
    np.testing.assert_allclose(got, want, atol=1e-15)


@pytest.mark.skipif("cython" not in BACKENDS, reason="compiled extension not built")
def test_backends_agree_on_the_transform():
    circ = paldus_circuit(3)
    v = random_state(circ.width, 9)
    outs = {}
    try:
        for name in ("python", "cython"):
            kernels.use(name)
            outs[name] = run(circ, v)
    finally:
        kernels.use(kernels._load().NAME)
    np.testing.assert_allclose(outs["python"], outs["cython"], atol=1e-13)


def test_python_caches_clear():
    _pykernels.clear_caches()
    assert _pykernels._add_perm.cache_info().currsize == 0
