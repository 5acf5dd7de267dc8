"""Pure-Python mod-2 binomial kernels.  Same interface as the compiled core."""


def binom_mod2(n: int, k: int) -> int:
    if k < 0:
        return 0
    if n < 0:
        n = k - n - 1
    return 1 if (n & k) == k else 0


def vzero_sweep(u_lo, u_hi, j_lo, j_hi) -> bytearray:
    """Row-major over (u, j).  Each byte packs lhs | rhs << 1."""
    out = bytearray()
    for u in range(u_lo, u_hi + 1):
        for j in range(j_lo, j_hi + 1):
            lhs = 0
            for l in range(j + 1):
                lhs ^= binom_mod2(u + l, j - l) & binom_mod2(2 * l - 1, l)
            out.append(lhs | binom_mod2(u + 1, j) << 1)
    return out


def recur5_sweep(u_lo, u_hi, v_lo, v_hi, j_lo, j_hi) -> bytearray:
    out = bytearray()
    for u in range(u_lo, u_hi + 1):
        for v in range(v_lo, v_hi + 1):
            for j in range(j_lo, j_hi + 1):
                lhs = 0
                for l in range(j + 1):
                    lhs ^= binom_mod2(u + l, j - l) & binom_mod2(v - l, l)
                out.append(lhs | binom_mod2(v + u + 1, j) << 1)
    return out


def recur3_lower(k, l, m, d) -> int:
    return max(0, k, -d + 1 + m + l)


def recur3_sweep(k_lo, k_hi, l_lo, l_hi, m_lo, m_hi, d_lo, d_hi, ap_extra) -> bytearray:
    """Order (k, l, m, d, a') with a' running from its lower bound to bound + ap_extra."""
    out = bytearray()
    for k in range(k_lo, k_hi + 1):
        for l in range(l_lo, l_hi + 1):
            for m in range(m_lo, m_hi + 1):
                for d in range(d_lo, d_hi + 1):
                    lo = recur3_lower(k, l, m, d)
                    for ap in range(lo, lo + ap_extra + 1):
                        lhs = 0
                        for lp in range(l + 1):
                            lhs ^= (binom_mod2(d - 1 - m + l + k - 2 * lp, l - lp)
                                    & binom_mod2(ap + d - 1 - m - lp, lp))
                        out.append(lhs | binom_mod2(ap - k, l) << 1)
    return out
