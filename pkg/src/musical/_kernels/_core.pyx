# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: window Gram eigendecompositions and indicator maps.

Work is partitioned per window with OpenMP and no cross-window
reductions, so results are independent of the thread count. LAPACK and
BLAS are entered once per window through SciPy's exported wrappers.
"""

import numpy as np

from cython.parallel cimport prange
from libc.math cimport pow as c_pow
from libc.stdlib cimport free, malloc

from scipy.linalg.cython_blas cimport dgemm, dsyrk
from scipy.linalg.cython_lapack cimport dsyevd

NAME = "compiled"


cdef int _window_eigh_one(const double[:, :, ::1] frames,
                          Py_ssize_t row, Py_ssize_t col, int side,
                          double *vals_out, double *vecs_out) noexcept nogil:
    cdef int T = <int>frames.shape[0]
    cdef int P = side * side
    cdef int lwork = 1 + 6 * P + 2 * P * P
    cdef int liwork = 3 + 5 * P
    cdef double *A = <double *>malloc(<size_t>P * T * sizeof(double))
    cdef double *V = <double *>malloc(<size_t>P * P * sizeof(double))
    cdef double *work = <double *>malloc(<size_t>lwork * sizeof(double))
    cdef int *iwork = <int *>malloc(<size_t>liwork * sizeof(int))
    cdef int info = 0
    cdef int p, t, j
    cdef Py_ssize_t pr, pc, h = side // 2
    cdef double one = 1.0, zero = 0.0
    cdef char c_l = b'L', c_t = b'T', c_v = b'V'
    if A == NULL or V == NULL or work == NULL or iwork == NULL:
        free(A); free(V); free(work); free(iwork)
        return -1001
    # gather the window as a C-order (P, T) matrix, pixels row-major
    for p in range(P):
        pr = row - h + p // side
        pc = col - h + p % side
        for t in range(T):
            A[p * T + t] = frames[t, pr, pc]
    # C-order (P, T) is Fortran (T, P), so the Fortran A^T A is the
    # pixel-by-pixel Gram matrix; lower triangle matches dsyevd below
    dsyrk(&c_l, &c_t, &P, &T, &one, A, &T, &zero, V, &P)
    dsyevd(&c_v, &c_l, &P, V, &P, vals_out, work, &lwork, iwork, &liwork,
           &info)
    # Fortran eigenvector columns are C rows; transpose so columns of the
    # output hold the ascending eigenvectors, like numpy.linalg.eigh
    for j in range(P):
        for p in range(P):
            vecs_out[p * P + j] = V[j * P + p]
    free(A); free(V); free(work); free(iwork)
    return info


cdef void _batch_eigh(const double[:, :, ::1] frames,
                      const Py_ssize_t[::1] rows,
                      const Py_ssize_t[::1] cols,
                      int side, int threads,
                      double[:, ::1] vals, double[:, :, ::1] vecs,
                      int[::1] info) noexcept nogil:
    cdef Py_ssize_t w, n = rows.shape[0]
    for w in prange(n, num_threads=threads, schedule='static'):
        info[w] = _window_eigh_one(frames, rows[w], cols[w], side,
                                   &vals[w, 0], &vecs[w, 0, 0])


cdef int _indicator_one(double[:, :, ::1] vecs, Py_ssize_t w,
                        double[:, ::1] wa, double[:, ::1] wb,
                        double[:, ::1] gsub,
                        double alpha, double eps_floor, double tiny,
                        double[:, ::1] out) noexcept nogil:
    cdef int P = <int>vecs.shape[1]
    cdef int K = <int>gsub.shape[0]
    cdef double one = 1.0, zero = 0.0
    cdef char c_n = b'N'
    cdef double *G = <double *>malloc(<size_t>K * P * sizeof(double))
    cdef int k, j
    cdef double num, den, g, floor_val
    if G == NULL:
        return -1001
    # G row k holds the projections of test vector k onto the columns of
    # vecs[w]; in Fortran terms G^T = vecs[w]^T gsub^T
    dgemm(&c_n, &c_n, &P, &K, &P, &one, &vecs[w, 0, 0], &P,
          &gsub[0, 0], &P, &zero, G, &P)
    for k in range(K):
        num = 0.0
        den = 0.0
        for j in range(P):
            g = G[k * P + j]
            g = g * g
            num = num + wa[w, j] * g
            den = den + wb[w, j] * g
        floor_val = eps_floor * num + tiny
        if den < floor_val:
            den = floor_val
        out[w, k] = c_pow(num / den, 0.5 * alpha)
    free(G)
    return 0


cdef void _batch_indicator(double[:, :, ::1] vecs,
                           double[:, ::1] wa, double[:, ::1] wb,
                           double[:, ::1] gsub,
                           double alpha, double eps_floor, double tiny,
                           int threads, double[:, ::1] out,
                           int[::1] info) noexcept nogil:
    cdef Py_ssize_t w, n = vecs.shape[0]
    for w in prange(n, num_threads=threads, schedule='static'):
        info[w] = _indicator_one(vecs, w, wa, wb, gsub, alpha, eps_floor,
                                 tiny, out)


def batch_window_eigh(frames, rows, cols, side, threads=1):
    """Eigendecompose the pixel Gram matrix of each window.

    Matches the pure-NumPy kernel: vals (n, P) ascending, vecs (n, P, P)
    with eigenvectors in columns.
    """
    frames = np.asarray(frames, dtype=np.float64)
    if not frames.flags.c_contiguous:
        frames = np.ascontiguousarray(frames)
    rows_arr = np.ascontiguousarray(rows, dtype=np.intp)
    cols_arr = np.ascontiguousarray(cols, dtype=np.intp)
    cdef int side_c = int(side)
    cdef int threads_c = max(1, int(threads))
    n = rows_arr.shape[0]
    P = side_c * side_c
    vals = np.empty((n, P))
    vecs = np.empty((n, P, P))
    info = np.zeros(n, dtype=np.int32)
    if n == 0:
        return vals, vecs
    cdef const double[:, :, ::1] frames_v = frames
    cdef const Py_ssize_t[::1] rows_v = rows_arr
    cdef const Py_ssize_t[::1] cols_v = cols_arr
    cdef double[:, ::1] vals_v = vals
    cdef double[:, :, ::1] vecs_v = vecs
    cdef int[::1] info_v = info
    with nogil:
        _batch_eigh(frames_v, rows_v, cols_v, side_c, threads_c,
                    vals_v, vecs_v, info_v)
    if np.any(info):
        raise RuntimeError(
            f"eigensolver failed on {int(np.count_nonzero(info))} window(s)"
        )
    return vals, vecs


def batch_indicator(vecs, a, b, gsub, alpha, eps_floor, tiny, threads=1):
    """Indicator values for every (window, test point) pair, (n, K)."""
    vecs = np.ascontiguousarray(vecs, dtype=np.float64)
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    gsub = np.ascontiguousarray(gsub, dtype=np.float64)
    n = vecs.shape[0]
    K = gsub.shape[0]
    out = np.empty((n, K))
    info = np.zeros(n, dtype=np.int32)
    if n == 0:
        return out
    cdef double alpha_c = float(alpha)
    cdef double eps_c = float(eps_floor)
    cdef double tiny_c = float(tiny)
    cdef int threads_c = max(1, int(threads))
    cdef double[:, :, ::1] vecs_v = vecs
    cdef double[:, ::1] a_v = a
    cdef double[:, ::1] b_v = b
    cdef double[:, ::1] gsub_v = gsub
    cdef double[:, ::1] out_v = out
    cdef int[::1] info_v = info
    with nogil:
        _batch_indicator(vecs_v, a_v, b_v, gsub_v, alpha_c, eps_c, tiny_c,
                         threads_c, out_v, info_v)
    if np.any(info):
        raise RuntimeError("out of memory in indicator kernel")
    return out
