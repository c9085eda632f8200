# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled int64 kernels for the level-ordered tree layout.

Same contract as ``genmvp._kernels_py``; every add and multiply is overflow
checked and an ``OverflowError`` tells the caller to redo the step with
Python integers.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef long long i64

cdef extern from *:
    """
    static inline int gm_add(long long a, long long b, long long *r) {
        return __builtin_add_overflow(a, b, r);
    }
    static inline int gm_sub(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    static inline int gm_mul(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    """
    int gm_add(i64 a, i64 b, i64 *r) nogil
    int gm_sub(i64 a, i64 b, i64 *r) nogil
    int gm_mul(i64 a, i64 b, i64 *r) nogil


def level_offsets(int q, int R):
    # wraparound is off in this module: no negative indexing
    offs = [0, 1]
    last = 1
    size = q + 1
    for _ in range(R):
        last += size
        offs.append(last)
        size *= q
    return offs[: R + 2]


cdef int _step(const i64[::1] src, i64[::1] dst, i64 q, Py_ssize_t[::1] offs, int R) nogil:
    cdef int m
    cdef Py_ssize_t j, c, start, kid0, n_level
    cdef i64 acc, t, qp1 = q + 1
    for m in range(R):
        start = offs[m]
        n_level = offs[m + 1] - start
        for j in range(n_level):
            acc = 0
            if m == 0:
                for c in range(q + 1):
                    if gm_add(acc, src[offs[1] + c], &acc):
                        return 1
            else:
                kid0 = offs[m + 1] + j * q
                for c in range(q):
                    if gm_add(acc, src[kid0 + c], &acc):
                        return 1
                if m == 1:
                    t = src[0]
                else:
                    t = src[offs[m - 1] + j // q]
                if gm_add(acc, t, &acc):
                    return 1
            if gm_mul(qp1, src[start + j], &t):
                return 1
            if gm_sub(acc, t, &acc):
                return 1
            dst[start + j] = acc
    return 0


def laplacian_step(cnp.ndarray num, int q, int R):
    if R < 1:
        raise ValueError("need radius >= 1")
    if num.dtype != np.int64:
        raise TypeError("compiled kernel needs int64 numerators")
    cdef cnp.ndarray[i64, ndim=1] src = np.ascontiguousarray(num)
    py_offs = level_offsets(q, R)
    cdef Py_ssize_t[::1] offs = np.asarray(py_offs, dtype=np.intp)
    out = np.empty(py_offs[R], dtype=np.int64)
    cdef i64[::1] dst = out
    cdef const i64[::1] s = src
    cdef int bad
    with nogil:
        bad = _step(s, dst, q, offs, R)
    if bad:
        raise OverflowError("int64 overflow in tree Laplacian")
    return out


cdef object _block_sum(const i64[::1] a, Py_ssize_t lo, Py_ssize_t hi):
    cdef i64 acc = 0, t
    cdef Py_ssize_t i
    total = 0
    for i in range(lo, hi):
        if gm_add(acc, a[i], &t):
            # flush the running int64 partial into the Python integer total
            total += acc
            acc = a[i]
        else:
            acc = t
    return total + acc


def branch_sums(cnp.ndarray num, int q, int R, int n):
    if num.dtype != np.int64:
        raise TypeError("compiled kernel needs int64 numerators")
    cdef const i64[::1] a = np.ascontiguousarray(num)
    offs = level_offsets(q, R)
    if n == 0:
        return [int(a[0])]
    cdef Py_ssize_t width = q ** (n - 1)
    cdef Py_ssize_t base = offs[n]
    return [_block_sum(a, base + b * width, base + (b + 1) * width) for b in range(q + 1)]
