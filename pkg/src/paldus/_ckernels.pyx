# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled statevector kernels; same signatures as ``_pykernels``.

Both kernels walk only the amplitudes they touch: the free bits are
enumerated as submasks, so a gate with ``c`` fixed qubits costs ``2^(n-c)``.
"""

from libc.stdlib cimport malloc, free

NAME = "cython"


def register_add(double complex[::1] data, int width, targets, long ctrl_mask,
                 long ctrl_value, long delta):
    cdef int k = len(targets)
    cdef long modulus = 1L << k
    cdef long* reg_bit = <long*> malloc(k * sizeof(long))
    cdef long* offset = <long*> malloc(modulus * sizeof(long))
    cdef double complex* buf = <double complex*> malloc(modulus * sizeof(double complex))
    cdef int j
    cdef long r, tmask = 0, shift, free_mask, sub, base
    try:
        for j in range(k):
            reg_bit[j] = 1L << (width - 1 - targets[j])
            tmask |= reg_bit[j]
        # offset[r]: index bits encoding register value r (MSB = targets[0])
        for r in range(modulus):
            offset[r] = 0
            for j in range(k):
                if (r >> (k - 1 - j)) & 1:
                    offset[r] |= reg_bit[j]
        shift = ((delta % modulus) + modulus) % modulus
        free_mask = ((1L << width) - 1) & ~(ctrl_mask | tmask)
        sub = 0
        while True:
            base = ctrl_value | sub
            for r in range(modulus):
                buf[r] = data[base | offset[r]]
            for r in range(modulus):
                data[base | offset[(r + shift) & (modulus - 1)]] = buf[r]
            sub = (sub - free_mask) & free_mask
            if sub == 0:
                break
    finally:
        free(reg_bit)
        free(offset)
        free(buf)


def givens(double complex[::1] data, int width, int qa, int qb, long ctrl_mask,
           long ctrl_value, double c, double s):
    cdef long ba = 1L << (width - 1 - qa)
    cdef long bb = 1L << (width - 1 - qb)
    cdef long value = ctrl_value | bb
    cdef long flip = ba | bb
    cdef long free_mask = ((1L << width) - 1) & ~(ctrl_mask | ba | bb)
    cdef long sub = 0, idx, other
    cdef double complex a, b
    while True:
        idx = value | sub
        other = idx ^ flip
        a = data[idx]
        b = data[other]
        data[idx] = c * a - s * b
        data[other] = s * a + c * b
        sub = (sub - free_mask) & free_mask
        if sub == 0:
            break


def clear_caches():
    pass
