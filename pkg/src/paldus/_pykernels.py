"""Pure-numpy statevector kernels, used when the compiled extension is missing."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

NAME = "python"


def _bitpos(width: int, q: int) -> int:
    return width - 1 - q


@lru_cache(maxsize=256)
def _add_perm(width: int, targets: tuple[int, ...], ctrl_mask: int, ctrl_value: int, delta: int):
    idx = np.arange(1 << width, dtype=np.int64)
    sel = idx[(idx & ctrl_mask) == ctrl_value]
    k = len(targets)
    reg = np.zeros_like(sel)
    for t in targets:
        reg = (reg << 1) | ((sel >> _bitpos(width, t)) & 1)
    new = (reg + delta) % (1 << k)
    dest = sel.copy()
    for j, t in enumerate(targets):
        bit = 1 << _bitpos(width, t)
        want = (new >> (k - 1 - j)) & 1
        dest = (dest & ~bit) | (want * bit)
    return sel, dest


def register_add(data, width, targets, ctrl_mask, ctrl_value, delta):
    """``reg(targets) += delta (mod 2^k)`` on indices whose controls match, in place."""
    sel, dest = _add_perm(width, tuple(targets), ctrl_mask, ctrl_value, delta)
    data[dest] = data[sel]


@lru_cache(maxsize=1024)
def _givens_idx(width: int, qa: int, qb: int, ctrl_mask: int, ctrl_value: int):
    ba = 1 << _bitpos(width, qa)
    bb = 1 << _bitpos(width, qb)
    mask = ctrl_mask | ba | bb
    value = ctrl_value | bb
    idx = np.arange(1 << width, dtype=np.int64)
    i01 = idx[(idx & mask) == value]
    return i01, i01 ^ (ba | bb)


def givens(data, width, qa, qb, ctrl_mask, ctrl_value, c, s):
    """Rotate the ``(|01>, |10>)`` block of qubits ``(qa, qb)`` where the controls match."""
    i01, i10 = _givens_idx(width, qa, qb, ctrl_mask, ctrl_value)
    a = data[i01]
    b = data[i10]
    data[i01] = c * a - s * b
    data[i10] = s * a + c * b


def clear_caches() -> None:
    _add_perm.cache_clear()
    _givens_idx.cache_clear()
