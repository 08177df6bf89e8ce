"""Compiled forward pass over the flat unit arrays of a NetworkGraph.

Terms are accumulated strictly in stored order, starting from 0.0, with the
bias added last. Constructions rely on this to get exact cancellation of
bitwise-equal branches, so keep the loops sequential (no fastmath).
"""

import numba
import numpy as np


@numba.njit(cache=True)
def forward(x, bias, indptr, src, coef, out_indptr, out_src, out_coef, out_bias):
    npts, d = x.shape
    n_units = bias.shape[0]
    n_out = out_bias.shape[0]
    out = np.empty((npts, n_out))
    buf = np.empty(d + n_units)
    for p in range(npts):
        for i in range(d):
            buf[i] = x[p, i]
        for u in range(n_units):
            acc = 0.0
            for jj in range(indptr[u], indptr[u + 1]):
                acc += coef[jj] * buf[src[jj]]
            acc += bias[u]
            buf[d + u] = acc if acc > 0.0 else 0.0
        for k in range(n_out):
            acc = 0.0
            for jj in range(out_indptr[k], out_indptr[k + 1]):
                acc += out_coef[jj] * buf[out_src[jj]]
            out[p, k] = acc + out_bias[k]
    return out
