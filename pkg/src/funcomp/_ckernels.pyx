# cython: language_level=3
"""Compiled GF(2) kernels; same contracts as ``_pykernels``."""

from libc.stdint cimport uint64_t

from . import _pykernels


cdef extern from *:
    int __builtin_parityll(unsigned long long)


cdef inline int _lowbit(uint64_t v):
    cdef int p = 0
    while not (v & 1):
        v >>= 1
        p += 1
    return p


def gf2_rref(rows):
    cdef uint64_t buf[64]
    cdef int piv[64]
    cdef int n = 0
    cdef int i, j, p
    cdef uint64_t v
    for r in rows:
        if r < 0 or r.bit_length() > 64:
            return _pykernels.gf2_rref(rows)
    for r in rows:
        v = r
        for i in range(n):
            if (v >> piv[i]) & 1:
                v ^= buf[i]
        if v:
            p = _lowbit(v)
            for i in range(n):
                if (buf[i] >> p) & 1:
                    buf[i] ^= v
            # insertion keeps pivots sorted
            i = n
            while i > 0 and piv[i - 1] > p:
                buf[i] = buf[i - 1]
                piv[i] = piv[i - 1]
                i -= 1
            buf[i] = v
            piv[i] = p
            n += 1
    return [buf[j] for j in range(n)], [piv[j] for j in range(n)]


def gf2_reduce(v, basis, pivots):
    if v < 0 or v.bit_length() > 64:
        return _pykernels.gf2_reduce(v, basis, pivots)
    cdef uint64_t w = v
    cdef uint64_t b
    cdef int p
    for bb, pp in zip(basis, pivots):
        p = pp
        if (w >> p) & 1:
            b = bb
            w ^= b
    return w


def gf2_parity_profile(masks, int nbits):
    cdef Py_ssize_t size = (<Py_ssize_t>1) << nbits
    cdef Py_ssize_t x
    cdef int c, nm = len(masks)
    cdef uint64_t acc, m
    if nm > 64 or nbits > 30:
        return _pykernels.gf2_parity_profile(masks, nbits)
    cdef uint64_t cm[64]
    for c in range(nm):
        cm[c] = masks[c]
    out = [0] * size
    for x in range(size):
        acc = 0
        for c in range(nm):
            m = cm[c] & <uint64_t>x
            if __builtin_parityll(m):
                acc |= (<uint64_t>1) << c
        out[x] = acc
    return out

