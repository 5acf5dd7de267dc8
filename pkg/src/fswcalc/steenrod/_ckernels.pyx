# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled mod-2 binomial kernels.  Mirrors _kernels_py exactly."""


cdef inline int _bm2(long n, long k) nogil:
    if k < 0:
        return 0
    if n < 0:
        n = k - n - 1
    return 1 if (n & k) == k else 0


def binom_mod2(long n, long k):
    return _bm2(n, k)


def vzero_sweep(long u_lo, long u_hi, long j_lo, long j_hi):
    cdef long u, j, l
    cdef int lhs
    cdef bytearray out = bytearray()
    for u in range(u_lo, u_hi + 1):
        for j in range(j_lo, j_hi + 1):
            lhs = 0
            for l in range(j + 1):
                lhs ^= _bm2(u + l, j - l) & _bm2(2 * l - 1, l)
            out.append(lhs | (_bm2(u + 1, j) << 1))
    return out


def recur5_sweep(long u_lo, long u_hi, long v_lo, long v_hi, long j_lo, long j_hi):
    cdef long u, v, j, l
    cdef int lhs
    cdef bytearray out = bytearray()
    for u in range(u_lo, u_hi + 1):
        for v in range(v_lo, v_hi + 1):
            for j in range(j_lo, j_hi + 1):
                lhs = 0
                for l in range(j + 1):
                    lhs ^= _bm2(u + l, j - l) & _bm2(v - l, l)
                out.append(lhs | (_bm2(v + u + 1, j) << 1))
    return out


cdef inline long _lower(long k, long l, long m, long d):
    cdef long lo = 0
    if k > lo:
        lo = k
    if -d + 1 + m + l > lo:
        lo = -d + 1 + m + l
    return lo


def recur3_lower(long k, long l, long m, long d):
    return _lower(k, l, m, d)


def recur3_sweep(long k_lo, long k_hi, long l_lo, long l_hi, long m_lo, long m_hi,
                 long d_lo, long d_hi, long ap_extra):
    cdef long k, l, m, d, ap, lp, lo
    cdef int lhs
    cdef bytearray out = bytearray()
    for k in range(k_lo, k_hi + 1):
        for l in range(l_lo, l_hi + 1):
            for m in range(m_lo, m_hi + 1):
                for d in range(d_lo, d_hi + 1):
                    lo = _lower(k, l, m, d)
                    for ap in range(lo, lo + ap_extra + 1):
                        lhs = 0
                        for lp in range(l + 1):
                            lhs ^= (_bm2(d - 1 - m + l + k - 2 * lp, l - lp)
                                    & _bm2(ap + d - 1 - m - lp, lp))
                        out.append(lhs | (_bm2(ap - k, l) << 1))
    return out
