# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled endpoint scan: max over responder endpoints of the regret gap."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def endpoint_max(const double[:, ::1] pi, const double[::1] gp, double gn,
                 const double[::1] gr, const double[:, ::1] gd):
    """Return (max_k dR_k, argmax k) for every row of ``pi``.

    Same contract as ``_kernels_py.endpoint_max``.
    """
    cdef Py_ssize_t m = pi.shape[0]
    cdef Py_ssize_t size = pi.shape[1]
    cdef Py_ssize_t r, i, j, k
    cdef double acc_r, s, lin, cross, val, best
    cdef long bestk
    out = np.empty(m, dtype=np.float64)
    outk = np.empty(m, dtype=np.int64)
    cdef double[::1] o = out
    cdef long long[::1] ok = outk
    with nogil:
        for r in range(m):
            acc_r = 0.0
            for i in range(size):
                acc_r = acc_r + pi[r, i] * gr[i]
            best = 0.0
            bestk = -1
            for k in range(1, size):
                s = 0.0
                lin = 0.0
                for i in range(k, size):
                    s = s + pi[r, i]
                    lin = lin + pi[r, i] * gp[i]
                cross = 0.0
                for i in range(k):
                    for j in range(k, size):
                        cross = cross + pi[r, i] * pi[r, j] * gd[i, j]
                val = lin + (1.0 - s) * (gn - acc_r) - cross
                if bestk < 0 or val > best:
                    best = val
                    bestk = k
            # accept-everything vertex; wins only when strictly larger
            s = 0.0
            lin = 0.0
            for i in range(size):
                s = s + pi[r, i]
                lin = lin + pi[r, i] * gp[i]
            val = lin + (1.0 - s) * (gn - acc_r)
            if val > best:
                best = val
                bestk = 0
            o[r] = best
            ok[r] = bestk
    return out, outk
