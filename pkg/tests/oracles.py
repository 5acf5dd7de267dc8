"""Reference computations that do not import the package.

Each oracle takes a different route from the library code it checks:
plain dict polynomials, sympy series, or brute-force sign bookkeeping.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from functools import lru_cache
from math import comb, factorial

import sympy as sp


# -- dict polynomials in c_1..c_n (c_i has weight i) ---------------------------

def _padd(a: dict, b: dict, scale=1) -> dict:
    out = dict(a)
    for m, c in b.items():
        out[m] = out.get(m, 0) + scale * c
        if not out[m]:
            del out[m]
    return out


def _pmul_gen(a: dict, i: int, n: int, max_weight: int) -> dict:
    """Multiply by c_i (1-based), dropping terms above max_weight."""
    out = {}
    for m, c in a.items():
        e = list(m)
        e[i - 1] += 1
        if sum((k + 1) * x for k, x in enumerate(e)) <= max_weight:
            out[tuple(e)] = out.get(tuple(e), 0) + c
    return out


def grothendieck_pushforward(a: int, j: int, nvars: int = 6, max_weight: int = 6) -> dict:
    """Reduce x^j modulo x^a + c_1 x^(a-1) + ... + c_a and return the
    coefficient of x^(a-1) as {exponent vector in c_1..c_nvars: coefficient}."""
    zero = tuple([0] * nvars)
    # vec[k] is the coefficient of x^k, for k < a
    vec = [dict() for _ in range(a)]
    if j < a:
        vec[j] = {zero: 1}
        return vec[a - 1]
    vec[a - 1] = {zero: 1}          # start at x^(a-1)
    for _ in range(j - (a - 1)):
        top = vec[a - 1]
        new = [dict()] + vec[:-1]   # multiply by x
        # x^a = -(c_1 x^(a-1) + ... + c_a)
        for i in range(1, a + 1):
            if i > nvars:
                continue
            new[a - i] = _padd(new[a - i], _pmul_gen(top, i, nvars, max_weight), -1)
        vec = new
    return vec[a - 1]


# -- formal roots ------------------------------------------------------------------

def equivariant_chern_by_roots(aprime: int, j: int):
    """Degree-j part of prod_i (1 + x + y_i) in sympy, together with x and the roots."""
    x = sp.Symbol("x")
    ys = sp.symbols(f"y1:{aprime + 1}") if aprime else ()
    t = sp.Symbol("t")
    prod = sp.Integer(1)
    for y in ys:
        prod *= 1 + t * (x + y)
    poly = sp.Poly(sp.expand(prod), t)
    part = poly.coeff_monomial(t ** j) if j <= aprime else sp.Integer(0)
    return sp.expand(part), x, ys


def elementary_symmetric(ys, l: int):
    if l == 0:
        return sp.Integer(1)
    return sp.Add(*[sp.Mul(*c) for c in combinations(ys, l)])


# -- multiplicative sequences via splitting --------------------------------------

def todd_by_roots(rank: int, max_weight: int):
    """Todd class as a polynomial in roots r_i, up to total degree max_weight."""
    rs = sp.symbols(f"r1:{rank + 1}")
    t = sp.Symbol("t")
    total = sp.Integer(1)
    for r in rs:
        f = sp.series(t * r / (1 - sp.exp(-t * r)), t, 0, max_weight + 1).removeO()
        total = sp.expand(total * f)
    total = sp.series(total, t, 0, max_weight + 1).removeO()
    return sp.expand(total.subs(t, 1)), rs


def ahat_by_roots(count: int, max_weight: int):
    """A-hat as a polynomial in Pontryagin roots z_i (z_i has weight 1)."""
    zs = sp.symbols(f"z1:{count + 1}")
    t = sp.Symbol("t")
    u = sp.Symbol("u")
    # (sqrt(u)/2)/sinh(sqrt(u)/2) is a power series in u
    base = sp.series((u / 2) / sp.sinh(u / 2), u, 0, 2 * max_weight + 2).removeO()
    base = sp.expand(base)
    total = sp.Integer(1)
    for z in zs:
        f = sum(base.coeff(u, 2 * k) * (t * z) ** k for k in range(max_weight + 1))
        total = sp.expand(total * f)
    total = sp.series(total, t, 0, max_weight + 1).removeO()
    return sp.expand(total.subs(t, 1)), zs


# -- one-variable series -----------------------------------------------------------

def log_power_coeffs(p: int, count: int) -> list:
    """Coefficients of y^(p+l), l < count, in log(1-y)^p."""
    y = sp.Symbol("y")
    ser = sp.series(sp.log(1 - y) ** p, y, 0, p + count + 1).removeO()
    return [Fraction(str(sp.Rational(ser.coeff(y, p + l)))) for l in range(count)]


def n_by_series(d: int, m: int, p: int) -> Fraction:
    """Residue of x^p e^(mx) (1-e^(-x))^(-d) at x = 0, by sympy."""
    x = sp.Symbol("x")
    expr = x ** p * sp.exp(m * x) * (1 - sp.exp(-x)) ** (-d)
    ser = sp.series(expr, x, 0, 1).removeO()
    return Fraction(str(sp.Rational(sp.expand(ser).coeff(x, -1))))


# -- torus wall crossing by a bigraded expansion ----------------------------------

def _ext_mul(a: dict, b: dict) -> dict:
    """Exterior algebra product; monomials are bitmasks of generator indices."""
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            if ma & mb:
                continue
            # sign of moving each generator of b left past the larger ones of a
            swaps = 0
            rest = mb
            while rest:
                low = rest & -rest
                swaps += bin(ma & ~((low << 1) - 1)).count("1")
                rest ^= low
            key = ma | mb
            out[key] = out.get(key, 0) + (-ca * cb if swaps & 1 else ca * cb)
    return {m: c for m, c in out.items() if c}


@lru_cache(maxsize=None)
def _omega_squared(b1: int) -> tuple:
    omega = {(1 << i) | (1 << (b1 + i)): 1 for i in range(b1)}
    return tuple(_ext_mul(omega, omega).items())


def torus_jump(b1: int, M) -> Fraction:
    """Jump of the unparametrised invariant for b+ = 1 over the Jacobian torus.

    Generators 0..b1-1 are the torus classes x_i and b1..2b1-1 the classes
    y_i of the manifold, all of degree one.  The class c has even degree
    and is tracked separately.  Omega = sum x_i y_i; the fibre integral of
    c y_i y_j (with the torus classes to the left) is M[i][j].  From the
    degree-2 part of Ch(D) we recover the Chern classes through Newton's
    identities, invert to Segre classes and integrate s_{b1/2}.

    To stay in integers we carry C_k = 4^k k! c_k and S_k = 4^k k! s_k.
    """
    xmask = (1 << b1) - 1
    A = {}          # 4 * alpha
    for mono, coef in _omega_squared(b1):
        ys = [g - b1 for g in range(b1, 2 * b1) if mono >> g & 1]
        if len(ys) != 2:
            continue
        key = mono & xmask
        A[key] = A.get(key, 0) + coef * M[ys[0]][ys[1]]
    A = {m: c for m, c in A.items() if c}
    n = b1 // 2
    # power sums scaled by 4^i: only the first is nonzero since Ch(D) = d + alpha
    P = [None, A] + [{} for _ in range(n)]
    C = [{0: 1}]
    for k in range(1, n + 1):
        acc = {}
        for i in range(1, k + 1):
            scale = (-1) ** (i - 1) * (factorial(k - 1) // factorial(k - i))
            for m, c in _ext_mul(C[k - i], P[i]).items():
                acc[m] = acc.get(m, 0) + scale * c
        C.append({m: c for m, c in acc.items() if c})
    S = [{0: 1}]
    for k in range(1, n + 1):
        acc = {}
        for i in range(1, k + 1):
            for m, c in _ext_mul(C[i], S[k - i]).items():
                acc[m] = acc.get(m, 0) - comb(k, i) * c
        S.append({m: c for m, c in acc.items() if c})
    return Fraction(S[n].get(xmask, 0), 4 ** n * factorial(n))


# -- Steenrod squares as displayed -------------------------------------------------

def poly_binom(n: int, k: int) -> int:
    """n(n-1)...(n-k+1)/k! for any integer n."""
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= n - i
    return num // factorial(k)


def displayed_sq(j: int, d: int, m: int):
    """The first three even squares written out term by term, as a list of
    (coefficient, s-index, w-index, SW offset)."""
    if j == 1:
        return [(d + m, 0, 0, 1), (1, 1, 0, 0), (1, 0, 2, 0)]
    if j == 2:
        return [(poly_binom(d - m + 1, 2), 0, 0, 2),
                (d + m + 1, 1, 0, 1), (d + m, 0, 2, 1),
                (1, 2, 0, 0), (1, 1, 2, 0), (1, 0, 4, 0)]
    if j == 3:
        return [(poly_binom(d - m + 2, 3), 0, 0, 3),
                (poly_binom(d - m + 2, 2), 1, 0, 2), (poly_binom(d - m + 1, 2), 0, 2, 2),
                (d + m, 2, 0, 1), (d + m + 1, 1, 2, 1), (d + m, 0, 4, 1),
                (1, 3, 0, 0), (1, 2, 2, 0), (1, 1, 4, 0), (1, 0, 6, 0)]
    raise ValueError("only Sq^2, Sq^4, Sq^6 are displayed")


# -- mod-2 identity checks by ordinary binomials --------------------------------------

def binom_parity(n: int, k: int) -> int:
    """Parity of the generalized binomial coefficient via exact integers."""
    if k < 0:
        return 0
    if n >= 0:
        return comb(n, k) % 2
    return comb(k - n - 1, k) % 2


# -- bridge for comparing ring elements with sympy expressions ---------------------

def to_sympy(element, images: dict):
    """Evaluate a ring element with each generator name replaced by images[name].
    Reads only the element's (exponents -> coefficient) mapping."""
    names = element.ring.names
    out = sp.Integer(0)
    for exps, coef in element.terms.items():
        term = sp.Rational(Fraction(coef).numerator, Fraction(coef).denominator)
        for name, e in zip(names, exps):
            if e:
                term *= images[name] ** e
        out += term
    return sp.expand(out)


def truncate_weight(expr, symbols, max_weight: int):
    """Drop monomials whose total degree in symbols exceeds max_weight."""
    if expr == 0:
        return expr
    poly = sp.Poly(sp.expand(expr), *symbols)
    keep = [sp.Mul(c, *[s ** e for s, e in zip(symbols, m)])
            for m, c in poly.terms() if sum(m) <= max_weight]
    return sp.expand(sp.Add(*keep))
