"""K-theoretic side: exact coefficient series, symmetric powers through
Adams operations, Chern characters of K-theoretic invariants, the
K-theoretic wall crossing and divisibility certificates."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, lcm
from typing import Sequence

from .charclass import (
    ComplexBundleClass,
    chern_character,
    chern_from_segre,
    equivariant_todd,
    projective_pushforward,
    segre,
    with_unit,
)
from .errors import BadRange, NonRationalRing, RouteDisagreement
from .gring import Element, FormalSeries, Ring, exp_series
from .steenrod import SWLedger, binom_int
from .wallcross import wall_difference

RationalSeries = FormalSeries


# -- coefficient series ---------------------------------------------------------

@lru_cache(maxsize=None)
def _log_factor(count: int) -> FormalSeries:
    """g(y) with log(1-y) = y g(y): g = -sum y^k/(k+1)."""
    return FormalSeries([Fraction(-1, k + 1) for k in range(count)], trunc=count - 1, var="y")


@lru_cache(maxsize=None)
def a_coeffs(p: int, count: int) -> FormalSeries:
    """log(1-y)^p as a series starting at y^p: the coefficient of y^(p+l) is a_{p,l}."""
    if count < 1:
        raise BadRange("count must be at least 1")
    g = _log_factor(count)
    gp = g ** p
    return FormalSeries([gp[l] for l in range(count)], min_power=p, trunc=p + count - 1, var="y")


def a_coeff(p: int, l: int) -> Fraction:
    return a_coeffs(p, l + 1)[p + l]


@lru_cache(maxsize=None)
def _todd_power(d: int, trunc: int) -> FormalSeries:
    # x/(1-e^-x) is the inverse of (1-e^-x)/x = sum (-1)^k x^k/(k+1)!
    inner = FormalSeries([Fraction((-1) ** k, factorial(k + 1)) for k in range(trunc + 1)],
                         trunc=trunc, var="x")
    return inner ** (-d)


def todd_coeff(d: int, j: int) -> Fraction:
    """c_{j,d}: coefficient of x^j in (x/(1-e^-x))^d."""
    if j < 0:
        return Fraction(0)
    return _todd_power(d, j)[j]


def _n_closed(d: int, m: int, p: int) -> Fraction:
    total = Fraction(0)
    for l in range(d - p):
        total += a_coeff(p, l) * binom_int(m + d - p - l - 1, m)
    return total * (-1) ** p


def _n_residue(d: int, m: int, p: int) -> Fraction:
    """Coefficient of x^-1 in x^p e^(mx) (1-e^-x)^-d."""
    T = d + 3
    one_minus = FormalSeries([0] + [Fraction((-1) ** (k + 1), factorial(k)) for k in range(1, T + 1)],
                             trunc=T, var="x")
    laurent = one_minus.normalized() ** (-d)
    integrand = laurent.shift(p) * exp_series(T, m, var="x")
    return integrand[-1]


def n_dmp(d: int, m: int, p: int) -> Fraction:
    """n(d,m,p) by the a_{p,l} closed form and by residue extraction."""
    if d < 1 or not 0 <= p <= d - 1 or m < 0:
        raise BadRange(f"need d >= 1, 0 <= p < d, m >= 0; got d={d}, m={m}, p={p}")
    closed = _n_closed(d, m, p)
    residue = _n_residue(d, m, p)
    if closed != residue:
        raise RouteDisagreement(f"n({d},{m},{p}): closed form {closed} != residue {residue}")
    return closed


def n_dmp_todd(d: int, m: int, p: int) -> Fraction:
    """Third form: sum over j of c_{d-p-1-j,d} m^j / j!."""
    n = d - p - 1
    return sum((todd_coeff(d, n - j) * Fraction(m ** j, factorial(j)) for j in range(n + 1)),
               Fraction(0))


# -- divisibility ---------------------------------------------------------------

def _fmt(x) -> str:
    return str(Fraction(x))


def divisibility_ledger(d: int, p: int, r: int = 0, m_count: int | None = None) -> dict:
    """Denominators of a_{p-r,l} for l = 0..n with n = r+d-p-1, plus the
    difference table of q(m) = (-1)^(p-r) sum_l a_{p-r,n-l} binom(m+l,l).

    r = 0 is the point base; r > 0 the sphere S^(2r)."""
    if r < 0:
        raise BadRange("sphere half-dimension r must be non-negative")
    n = r + d - p - 1
    if n < 0:
        raise BadRange(f"n = r + d - p - 1 = {n} is negative")
    pe = p - r
    coeffs = [a_coeff(pe, l) for l in range(n + 1)]
    dens = [c.denominator for c in coeffs]
    sign = (-1) ** pe

    def q(m):
        return sign * sum((coeffs[n - l] * binom_int(m + l, l) for l in range(n + 1)), Fraction(0))

    width = m_count if m_count is not None else n + 2
    rows = [[q(m) for m in range(width + n + 1)]]
    for _ in range(n + 1):
        prev = rows[-1]
        rows.append([prev[i + 1] - prev[i] for i in range(len(prev) - 1)])
    table = [[_fmt(v) for v in row[:width]] for row in rows]
    out = {
        "d": d,
        "p": p,
        "n": n,
        "denominators": dens,
        "lcm": lcm(*dens),
        "delta_table": table,
    }
    if r:
        out["r"] = r
    return out


def divisibility_check(ledger: dict, sw_value: int) -> bool:
    """Whether an integer invariant meets the ledger's divisibility constraint."""
    return sw_value % ledger["lcm"] == 0


# -- K-classes ------------------------------------------------------------------

@dataclass(frozen=True)
class KClass:
    """A K-theory class through its Chern character (rational, even degrees)."""

    ch: Element

    def __post_init__(self):
        if self.ch.ring.coeff != "Q":
            raise NonRationalRing("K-classes live in rational cohomology")

    @property
    def ring(self) -> Ring:
        return self.ch.ring

    @property
    def rank(self) -> Fraction:
        return self.ch.constant_term()

    def part(self, i: int) -> Element:
        return self.ch.graded_part(2 * i)

    def adams(self, k: int) -> "KClass":
        out = self.ring.zero
        for i in range(self.ring.trunc // 2 + 1):
            out = out + self.part(i) * (k ** i if k else (1 if i == 0 else 0))
        return KClass(out)

    def dual(self) -> "KClass":
        return self.adams(-1)

    def __add__(self, other):
        return KClass(self.ch + other.ch)

    def __sub__(self, other):
        return KClass(self.ch - other.ch)

    def __mul__(self, other):
        if isinstance(other, KClass):
            return KClass(self.ch * other.ch)
        return KClass(self.ch * other)

    def __neg__(self):
        return KClass(-self.ch)

    def __eq__(self, other):
        return isinstance(other, KClass) and self.ch == other.ch

    def __hash__(self):
        return hash(self.ch)

    def __str__(self):
        return str(self.ch)

    @classmethod
    def of_bundle(cls, V: ComplexBundleClass) -> "KClass":
        return cls(chern_character(V))


def sym_series(W: KClass, rank_W: int | None = None, trunc_t: int = 4) -> list:
    """[Ch Sym^0 W, ..., Ch Sym^trunc_t W] from exp(sum psi^k(W) t^k / k)."""
    if rank_W is not None and W.rank != rank_W:
        raise BadRange(f"Chern character has rank {W.rank}, expected {rank_W}")
    ring = W.ring
    coeffs = [ring.zero] + [W.adams(k).ch * Fraction(1, k) for k in range(1, trunc_t + 1)]
    series = FormalSeries(coeffs, trunc=trunc_t, ring=ring).exp()
    return [KClass(series[m]) for m in range(trunc_t + 1)]


def _d_class(segre_D: Sequence, d: int, ring: Ring) -> KClass:
    chern = chern_from_segre(segre_D, ring)
    return KClass(chern_character(ComplexBundleClass(ring, d, tuple(chern))))


def s_m_class(segre_D: Sequence, d: int, m: int, ring: Ring | None = None,
              det_twist: bool = True) -> KClass:
    """Ch of S_m(D): Sym^m(D*) for m >= 0, plus (-1)^(d-1) Sym^(-m-d)(D) det(D)
    for m <= -d, and zero in between.

    The determinant factor comes from Serre duality on the projective bundle
    (its relative canonical class is O(-a) times det(V)^-1).  Pass
    ``det_twist=False`` for the untwisted form, which agrees only when
    c_1(D) = 0.
    """
    if ring is None:
        ring = next(c.ring for c in segre_D if isinstance(c, Element))
    D = _d_class(segre_D, d, ring)
    out = KClass(ring.zero)
    if m >= 0:
        out = out + sym_series(D.dual(), None, m)[m]
    if m <= -d:
        n = -m - d
        neg = sym_series(D, None, n)[n] * (1 if (d - 1) % 2 == 0 else -1)
        if det_twist:
            c1 = chern_from_segre(segre_D, ring)[1] if ring.trunc >= 2 else ring.zero
            neg = neg * c1.exp()
        out = out + neg
    return out


def _sym_push_lhs(a: int, chern_V: Sequence, aprime: int, m: int, ring: Ring) -> Element:
    """Grothendieck-Riemann-Roch side: pushforward of e^(mx)(1-e^-x)^a' Td_vert."""
    V = ComplexBundleClass(ring, a, tuple(chern_V))
    sV = segre(V)
    top = a - 1 + ring.trunc // 2
    td = equivariant_todd(V, top)
    series = FormalSeries(td, trunc=top, var="x", ring=ring)
    em = exp_series(top, m, var="x")
    om = FormalSeries([0] + [Fraction((-1) ** (k + 1), factorial(k)) for k in range(1, top + 1)],
                      trunc=top, var="x")
    weight = em * (om ** aprime)
    series = series * FormalSeries([ring.scalar(weight[k]) for k in range(top + 1)],
                                   trunc=top, var="x", ring=ring)
    out = ring.zero
    for j in range(a - 1, top + 1):
        cj = series[j]
        if cj:
            out = out + cj * projective_pushforward(a, sV, j)
    return out


def verify_sym_pushforward(a: int, chern_V: Sequence, aprime: int, m: int,
                           ring: Ring | None = None) -> dict:
    """Compare both sides of the symmetric-power pushforward identity degree by degree."""
    if ring is None:
        ring = next(c.ring for c in chern_V if isinstance(c, Element))
    if a < 2:
        raise BadRange("the pushforward identity needs rank a >= 2")
    lhs = _sym_push_lhs(a, chern_V, aprime, m, ring)
    sV = segre(ComplexBundleClass(ring, a, tuple(chern_V)))
    rhs = s_m_class(sV, a - aprime, m, ring).ch
    degrees = []
    for k in range(0, ring.trunc + 1, 2):
        l, r = lhs.graded_part(k), rhs.graded_part(k)
        degrees.append({"degree": k, "lhs": str(l), "rhs": str(r), "pass": l == r})
    return {
        "a": a, "aprime": aprime, "m": m,
        "lhs": str(lhs), "rhs": str(rhs),
        "degrees": degrees,
        "pass": lhs == rhs,
        "routes": ["projective-pushforward-with-todd", "adams-symmetric-powers"],
    }


# -- Chern character of K-theoretic invariants ---------------------------------

def _require_rational(*elems):
    for e in elems:
        if isinstance(e, Element) and e.ring.coeff != "Q":
            raise NonRationalRing("needs rational coefficients")


def _prefactor(kappa: Element | None, ahat_hplus: Element | None, ring: Ring) -> Element:
    pre = ring.one
    if kappa is not None:
        pre = pre * (-kappa * Fraction(1, 2)).exp()
    if ahat_hplus is not None:
        pre = pre * ahat_hplus.inverse()
    return pre


def ch_swk(ledger: SWLedger, kappa: Element | None, ahat_hplus: Element | None,
           Td_list: Sequence, m: int) -> Element:
    """e^(-kappa/2) A(H+)^-1 sum_j Td_j(D) sum_k m^k/k! SW_(j+k)."""
    ring = ledger.ring
    if ring.coeff != "Q":
        raise NonRationalRing("lift the ledger to rational coefficients first")
    _require_rational(kappa, ahat_hplus)
    td = [ring.coerce(t) for t in Td_list]
    total = ring.zero
    for n, swn in sorted(ledger.sw_classes.items()):
        if not swn:
            continue
        if n >= len(td):
            raise BadRange(f"Todd list too short for SW_{n}")
        for j in range(n + 1):
            k = n - j
            if td[j]:
                total = total + td[j] * swn * Fraction(m ** k, factorial(k))
    return _prefactor(kappa, ahat_hplus, ring) * total


def k_wall_difference(m: int, d: int, obs: Element, kappa: Element | None,
                      ahat_hplus: Element | None, segre_D: Sequence) -> Element:
    """Ch of SW^K_m(phi) - SW^K_m(psi) = Ch(Obs^K) Ch(S_m(D))."""
    ring = obs.ring
    if ring.coeff != "Q":
        raise NonRationalRing("needs rational coefficients")
    _require_rational(kappa, ahat_hplus)
    sm = s_m_class(segre_D, d, m, ring)
    return _prefactor(kappa, ahat_hplus, ring) * obs * sm.ch


def k_wall_cross_check(m: int, d: int, b_plus: int, obs: Element, kappa: Element | None,
                       ahat_hplus: Element | None, segre_D: Sequence) -> dict:
    """K-theoretic jump against the Chern character of the cohomological jump."""
    ring = obs.ring
    s = with_unit(segre_D, ring)
    direct = k_wall_difference(m, d, obs, kappa, ahat_hplus, s)
    top = max(0, d - 1 + ring.trunc // 2)
    sw = {n: wall_difference(n, d, obs, s) for n in range(top + 1)}
    ledger = SWLedger(ring, d, b_plus, tuple(s), sw)
    chern = chern_from_segre(s, ring)
    td = equivariant_todd(ComplexBundleClass(ring, d, tuple(chern)), top)
    via = ch_swk(ledger, kappa, ahat_hplus, td, m)
    return {"m": m, "d": d, "direct": str(direct), "via_cohomology": str(via),
            "pass": direct == via,
            "routes": ["symmetric-power-class", "cohomological-jump-through-todd"]}
