"""Compiled stride kernels for applying small gates to large amplitude arrays.

All kernels take a 2-D array ``v`` of shape ``(2**n, batch)`` and return a
new array of the same shape.  Columns are independent states (or density
matrix columns).
"""

import numpy as np
from numba import njit


@njit(cache=True)
def apply_1q(v, q, m):
    out = np.empty_like(v)
    stride = 1 << q
    dim, batch = v.shape
    m00, m01, m10, m11 = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    for base in range(0, dim, 2 * stride):
        for i0 in range(base, base + stride):
            i1 = i0 + stride
            for c in range(batch):
                a = v[i0, c]
                b = v[i1, c]
                out[i0, c] = m00 * a + m01 * b
                out[i1, c] = m10 * a + m11 * b
    return out


@njit(cache=True)
def apply_kq(v, sorted_pos, offsets, row_ptr, col_idx, vals):
    """General k-qubit kernel with the gate stored in CSR form.

    ``sorted_pos`` are the target bit positions ascending; ``offsets[j]`` is
    the basis-index offset of gate-local index ``j``.  Each of the
    ``2**(n-k)`` groups is found by inserting zero bits at the target
    positions into the group counter.
    """
    out = np.empty_like(v)
    dim, batch = v.shape
    k = sorted_pos.shape[0]
    d = offsets.shape[0]
    for g in range(dim >> k):
        i = g
        for t in range(k):
            p = sorted_pos[t]
            low = i & ((1 << p) - 1)
            i = ((i >> p) << (p + 1)) | low
        for r in range(d):
            dst = i + offsets[r]
            for c in range(batch):
                s = 0j
                for nz in range(row_ptr[r], row_ptr[r + 1]):
                    s += vals[nz] * v[i + offsets[col_idx[nz]], c]
                out[dst, c] = s
    return out


@njit(cache=True)
def apply_1q_vec(v, q, m):
    out = np.empty_like(v)
    stride = 1 << q
    m00, m01, m10, m11 = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    for base in range(0, v.shape[0], 2 * stride):
        for i0 in range(base, base + stride):
            a = v[i0]
            b = v[i0 + stride]
            out[i0] = m00 * a + m01 * b
            out[i0 + stride] = m10 * a + m11 * b
    return out


@njit(cache=True)
def apply_kq_vec(v, sorted_pos, offsets, row_ptr, col_idx, vals):
    out = np.empty_like(v)
    k = sorted_pos.shape[0]
    d = offsets.shape[0]
    for g in range(v.shape[0] >> k):
        i = g
        for t in range(k):
            p = sorted_pos[t]
            i = ((i >> p) << (p + 1)) | (i & ((1 << p) - 1))
        for r in range(d):
            s = 0j
            for nz in range(row_ptr[r], row_ptr[r + 1]):
                s += vals[nz] * v[i + offsets[col_idx[nz]]]
            out[i + offsets[r]] = s
    return out
