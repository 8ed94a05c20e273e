"""Pure-Python GF(2) kernels on int bitsets (bit c is column c).

These are the reference implementations; ``_ckernels.pyx`` mirrors them.
"""

from __future__ import annotations


def gf2_rref(rows):
    """Reduced row-echelon basis of the span of ``rows``.

    Pivot of a row is its lowest set bit.  Returns ``(basis, pivots)``
    sorted by pivot.
    """
    basis = {}
    for v in rows:
        for p, b in basis.items():
            if (v >> p) & 1:
                v ^= b
        if v:
            p = (v & -v).bit_length() - 1
            for pp, b in basis.items():
                if (b >> p) & 1:
                    basis[pp] = b ^ v
            basis[p] = v
    pivots = sorted(basis)
    return [basis[p] for p in pivots], pivots


def gf2_reduce(v, basis, pivots):
    """Reduce ``v`` modulo a fully reduced basis."""
    for b, p in zip(basis, pivots):
        if (v >> p) & 1:
            v ^= b
    return v


def gf2_parity_profile(masks, nbits):
    """For every x in [0, 2**nbits) pack the parities of ``x & mask``.

    Bit c of entry x is the parity of ``x & masks[c]``.
    """
    out = [0] * (1 << nbits)
    for c, mask in enumerate(masks):
        bit = 1 << c
        # parity table built incrementally along the Gray-free binary order
        par = [0] * (1 << nbits)
        for x in range(1, 1 << nbits):
            low = x & -x
            par[x] = par[x ^ low] ^ (1 if mask & low else 0)
            if par[x]:
                out[x] |= bit
    return out
