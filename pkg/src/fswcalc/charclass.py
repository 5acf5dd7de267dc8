"""Characteristic classes of virtual bundles.

Chern, Segre, Stiefel-Whitney, Todd, A-hat and Chern character classes,
their circle-equivariant versions, and the projective-bundle pushforward.
Universal multiplicative sequences are generated from their defining
one-variable series at call time.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

from .errors import (
    DegreeMismatch,
    MissingPontryagin,
    NegativeRank,
    NonRationalRing,
    RankTooSmall,
    RingMismatch,
)
from .gring import Element, FormalSeries, Ring


def with_unit(classes: Sequence, ring: Ring) -> list:
    """Normalize a list of graded classes to start at index 0.

    A list whose first entry equals 1 is taken to start at the degree-0
    class; otherwise the list is read as (c_1, c_2, ...) and 1 is prepended.
    """
    out = [ring.coerce(c) for c in classes]
    if out and out[0] == 1:
        return out
    return [ring.one] + out


def _ring_of(classes, default=None) -> Ring:
    for c in classes:
        if isinstance(c, Element):
            return c.ring
    if default is None:
        raise RingMismatch("cannot infer the ring from an empty class list")
    return default


def _max_index(ring: Ring, step: int = 2) -> int:
    return ring.trunc // step


@dataclass(frozen=True)
class ComplexBundleClass:
    """Virtual complex bundle: rank and Chern classes c_1, c_2, ..."""

    ring: Ring
    rank: int
    chern: tuple = ()

    def __post_init__(self):
        cs = tuple(self.ring.coerce(c) for c in self.chern)
        if cs and cs[0] == 1:
            cs = cs[1:]
        while cs and not cs[-1]:
            cs = cs[:-1]
        object.__setattr__(self, "chern", cs)

    def c(self, j: int) -> Element:
        if j == 0:
            return self.ring.one
        if 1 <= j <= len(self.chern):
            return self.chern[j - 1]
        return self.ring.zero

    def total(self) -> Element:
        out = self.ring.one
        for c in self.chern:
            out = out + c
        return out

    @classmethod
    def trivial(cls, ring: Ring, rank: int) -> "ComplexBundleClass":
        return cls(ring, rank, ())

    @classmethod
    def from_json(cls, ring: Ring, obj) -> "ComplexBundleClass":
        chern = [ring.element_from_json(c) for c in obj.get("chern", ())]
        return cls(ring, int(obj["rank"]), tuple(chern))

    def to_json(self) -> dict:
        return {"rank": self.rank, "chern": [c.to_json() for c in self.chern]}

    def __add__(self, other: "ComplexBundleClass") -> "ComplexBundleClass":
        total = self.total() * other.total()
        n = _max_index(self.ring)
        return ComplexBundleClass(self.ring, self.rank + other.rank,
                                  tuple(total.graded_part(2 * j) for j in range(1, n + 1)))

    def dual(self) -> "ComplexBundleClass":
        return ComplexBundleClass(self.ring, self.rank,
                                  tuple(c if j % 2 == 0 else -c
                                        for j, c in enumerate(self.chern, 1)))


@dataclass(frozen=True)
class RealBundleClass:
    """Real bundle: rank, mod-2 Stiefel-Whitney classes and optional
    Pontryagin classes and spin^c class (both in a rational or integral ring)."""

    rank: int
    sw: tuple = ()
    pontryagin: tuple | None = None
    kappa: Element | None = None
    sw_ring: Ring | None = None

    def __post_init__(self):
        ring = self.sw_ring or _ring_of(self.sw, None) if self.sw else self.sw_ring
        ws = tuple(ring.coerce(w) for w in self.sw) if ring is not None else ()
        if ws and ws[0] == 1:
            ws = ws[1:]
        object.__setattr__(self, "sw", ws)
        object.__setattr__(self, "sw_ring", ring)
        if self.pontryagin is not None:
            ps = tuple(self.pontryagin)
            if ps and ps[0] == 1:
                ps = ps[1:]
            object.__setattr__(self, "pontryagin", ps)
        if self.rank >= 0:
            for j in range(self.rank + 1, len(ws) + 1):
                if ws[j - 1]:
                    raise RankTooSmall(f"w_{j} nonzero for a rank {self.rank} bundle")
        if self.kappa is not None and len(ws) >= 2 and ring is not None:
            try:
                k2 = self.kappa.map_to(ring)
            except Exception:
                k2 = None
            if k2 is not None and k2 != ws[1]:
                warnings.warn("kappa does not reduce to w_2 mod 2", stacklevel=2)

    def w(self, j: int) -> Element:
        if j == 0:
            return self.sw_ring.one
        if 1 <= j <= len(self.sw):
            return self.sw[j - 1]
        return self.sw_ring.zero

    def p(self, j: int) -> Element:
        if self.pontryagin is None:
            raise MissingPontryagin("no Pontryagin classes given")
        ring = _ring_of(self.pontryagin, self.kappa.ring if self.kappa is not None else None)
        if j == 0:
            return ring.one
        if 1 <= j <= len(self.pontryagin):
            return ring.coerce(self.pontryagin[j - 1])
        return ring.zero

    def total_sw(self) -> Element:
        out = self.sw_ring.one
        for w in self.sw:
            out = out + w
        return out

    @classmethod
    def from_json(cls, obj, sw_ring: Ring | None = None, ring: Ring | None = None):
        sw = tuple(sw_ring.element_from_json(w) for w in obj.get("sw", ())) if sw_ring else ()
        pont = None
        if "pontryagin" in obj and obj["pontryagin"] is not None:
            pont = tuple(ring.element_from_json(p) for p in obj["pontryagin"])
        kappa = ring.element_from_json(obj["kappa"]) if obj.get("kappa") is not None else None
        return cls(int(obj["rank"]), sw, pont, kappa, sw_ring)

    def to_json(self) -> dict:
        out = {"rank": self.rank, "sw": [w.to_json() for w in self.sw]}
        if self.pontryagin is not None:
            out["pontryagin"] = [p.to_json() for p in self.pontryagin]
        if self.kappa is not None:
            out["kappa"] = self.kappa.to_json()
        return out


class EquivariantPoly:
    """Polynomial in the degree-2 equivariant variable x with ring coefficients."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: Ring, coeffs: dict):
        self.ring = ring
        self.coeffs = {k: ring.coerce(v) for k, v in coeffs.items() if ring.coerce(v)}

    def coefficient(self, k: int) -> Element:
        return self.coeffs.get(k, self.ring.zero)

    def __getitem__(self, k):
        return self.coefficient(k)

    @property
    def x_degree(self):
        return max(self.coeffs, default=None)

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, self.ring.zero) + v
        return EquivariantPoly(self.ring, out)

    def __mul__(self, other):
        if not isinstance(other, EquivariantPoly):
            return EquivariantPoly(self.ring, {k: v * other for k, v in self.coeffs.items()})
        out: dict = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                out[i + j] = out.get(i + j, self.ring.zero) + a * b
        return EquivariantPoly(self.ring, out)

    def __eq__(self, other):
        if not isinstance(other, EquivariantPoly):
            return NotImplemented
        return self.ring == other.ring and self.coeffs == other.coeffs

    def is_homogeneous(self) -> bool:
        seen = set()
        for k, v in self.coeffs.items():
            if not v.is_homogeneous():
                return False
            seen.add(v.degree + 2 * k)
        return len(seen) <= 1

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs, reverse=True):
            v = self.coeffs[k]
            xs = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if not xs:
                parts.append(f"({v})" if len(v.terms) > 1 else str(v))
            elif v == 1:
                parts.append(xs)
            else:
                parts.append(f"({v})*{xs}" if len(v.terms) > 1 else f"{v}*{xs}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"EquivariantPoly({self})"

    def to_json(self) -> dict:
        return {"x_powers": {str(k): v.to_json() for k, v in sorted(self.coeffs.items())}}


# -- Segre / Euler / equivariant Chern -------------------------------------

def segre_from_chern(chern: Sequence, ring: Ring | None = None) -> list:
    """Inverse of the total class: returns [1, s_1, s_2, ...] to the truncation."""
    ring = _ring_of(chern, ring)
    cs = with_unit(chern, ring)
    n = _max_index(ring)
    series = FormalSeries(cs, trunc=n, ring=ring)
    inv = series.inverse()
    return [inv[j] for j in range(n + 1)]


def segre(V: ComplexBundleClass) -> list:
    """[s_0 = 1, s_1, ...] with c(V) s(V) = 1 up to the truncation."""
    return segre_from_chern((V.ring.one,) + V.chern, V.ring)


def chern_from_segre(segre_list: Sequence, ring: Ring | None = None) -> list:
    return segre_from_chern(segre_list, ring)


def equivariant_euler(a: int, V: ComplexBundleClass) -> EquivariantPoly:
    """x^a + c_1 x^(a-1) + ... + c_a."""
    if a < 0:
        raise NegativeRank(f"rank {a} is negative")
    for j in range(a + 1, len(V.chern) + 1):
        if V.c(j):
            raise RankTooSmall(f"c_{j} is nonzero but the rank is {a}")
    return EquivariantPoly(V.ring, {a - j: V.c(j) for j in range(a + 1)})


def equivariant_chern(aprime: int, segre_D: Sequence, j: int,
                      ring: Ring | None = None) -> EquivariantPoly:
    """j-th circle-equivariant Chern class of V' written through the Segre
    classes of D: sum over l of binom(a'-l, j-l) s_l(D) x^(j-l).

    Segre classes past a' are treated as zero.
    """
    if aprime < 0:
        raise NegativeRank(f"rank {aprime} is negative")
    ring = _ring_of(segre_D, ring)
    s = with_unit(segre_D, ring)
    out = {}
    for l in range(0, min(j, aprime) + 1):
        sl = s[l] if l < len(s) else ring.zero
        coef = comb(aprime - l, j - l)
        if coef and sl:
            out[j - l] = sl * coef
    return EquivariantPoly(ring, out)


def projective_pushforward(a: int, segre_V: Sequence, j: int, ring: Ring | None = None) -> Element:
    """Pushforward of x^j times the module generator along the projective
    bundle of a rank-a bundle: 0 below x^(a-1), then the Segre classes."""
    if a < 1:
        raise NegativeRank(f"projective pushforward needs rank >= 1, got {a}")
    if j < 0:
        raise ValueError("x-power must be non-negative")
    ring = _ring_of(segre_V, ring)
    if j < a - 1:
        return ring.zero
    s = with_unit(segre_V, ring)
    k = j - (a - 1)
    return s[k] if k < len(s) else ring.zero


# -- power sums and multiplicative sequences -------------------------------

def power_sums(elementary: Sequence, n: int, ring: Ring) -> list:
    """Newton's identities: [P_0 unset(=0), P_1, ..., P_n] from e_1, e_2, ..."""
    e = with_unit(elementary, ring)

    def el(i):
        return e[i] if i < len(e) else ring.zero

    P = [ring.zero] * (n + 1)
    for k in range(1, n + 1):
        acc = el(k) * ((-1) ** (k - 1) * k)
        for i in range(1, k):
            ei = el(i)
            if ei:
                acc = acc + (ei * P[k - i]) * ((-1) ** (i - 1))
        P[k] = acc
    return P


def _require_rational(ring: Ring):
    if ring.coeff != "Q":
        raise NonRationalRing("this class needs rational coefficients")


@lru_cache(maxsize=None)
def todd_log_coeffs(n: int) -> tuple:
    """Coefficients of log(z / (1 - e^-z)) up to z^n."""
    # (1 - e^-z)/z = sum (-1)^k z^k / (k+1)!
    inner = FormalSeries([Fraction((-1) ** k, factorial(k + 1)) for k in range(n + 1)], trunc=n, var="z")
    log = inner.log()
    return tuple(-log[k] for k in range(n + 1))


@lru_cache(maxsize=None)
def ahat_log_coeffs(n: int) -> tuple:
    """Coefficients of log((sqrt z / 2) / sinh(sqrt z / 2)) up to z^n."""
    # sinh(w)/w with w^2 = z/4: sum (z/4)^k / (2k+1)!
    inner = FormalSeries([Fraction(1, 4 ** k * factorial(2 * k + 1)) for k in range(n + 1)],
                         trunc=n, var="z")
    log = inner.log()
    return tuple(-log[k] for k in range(n + 1))


def multiplicative_class(elementary: Sequence, log_coeffs: Sequence, root_degree: int,
                         ring: Ring) -> Element:
    """Evaluate prod f(root) for roots whose elementary symmetric functions
    are ``elementary``, given the coefficients of log f."""
    _require_rational(ring)
    n = ring.trunc // root_degree
    P = power_sums(elementary, n, ring)
    arg = ring.zero
    for k in range(1, n + 1):
        if log_coeffs[k] and P[k]:
            arg = arg + P[k] * log_coeffs[k]
    return arg.exp()


def todd_class(V: ComplexBundleClass) -> Element:
    _require_rational(V.ring)
    n = V.ring.trunc // 2
    return multiplicative_class(V.chern, todd_log_coeffs(n), 2, V.ring)


def ahat_class(W: RealBundleClass, ring: Ring | None = None) -> Element:
    if W.pontryagin is None:
        raise MissingPontryagin("A-hat needs Pontryagin classes")
    ring = _ring_of(W.pontryagin, W.kappa.ring if W.kappa is not None else ring)
    _require_rational(ring)
    n = ring.trunc // 4
    return multiplicative_class(W.pontryagin, ahat_log_coeffs(n), 4, ring)


def chern_character(V: ComplexBundleClass) -> Element:
    """rank + sum P_k / k! with P_k the power sums of the Chern roots."""
    ring = V.ring
    _require_rational(ring)
    n = ring.trunc // 2
    P = power_sums(V.chern, n, ring)
    out = ring.scalar(V.rank)
    for k in range(1, n + 1):
        out = out + P[k] * Fraction(1, factorial(k))
    return out


def equivariant_todd(V: ComplexBundleClass, max_j: int) -> list:
    """Coefficients Td_j(V) of x^j in the Todd class of the roots x + y_i."""
    ring = V.ring
    _require_rational(ring)
    nroots = ring.trunc // 2
    L = todd_log_coeffs(max_j + nroots)
    P = power_sums(V.chern, nroots, ring)
    P[0] = ring.scalar(V.rank)
    log_coeffs = []
    for n in range(max_j + 1):
        acc = ring.zero
        for r in range(0, nroots + 1):
            w = L[n + r] * comb(n + r, r)
            if w and P[r]:
                acc = acc + P[r] * w
        log_coeffs.append(acc)
    series = FormalSeries(log_coeffs, trunc=max_j, var="x", ring=ring).exp()
    return [series[j] for j in range(max_j + 1)]


# -- mu <-> SW --------------------------------------------------------------

def _check_graded(seq: Sequence, name: str, fixed_offset: int | None = None):
    offset = fixed_offset
    for i, v in enumerate(seq):
        if not v:
            continue
        if not v.is_homogeneous():
            raise DegreeMismatch(f"{name}_{i} is not homogeneous")
        o = v.degree - 2 * i
        if offset is None:
            offset = o
        elif o != offset:
            raise DegreeMismatch(f"{name}_{i} has degree {v.degree}, expected {2 * i + offset}")
    return offset


def _cauchy(a: list, b: list, ring: Ring) -> list:
    n = len(a) + len(b) - 1
    out = [ring.zero] * max(n, 0)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def mu_to_sw(mu: Sequence, segre_V: Sequence, ring: Ring | None = None) -> list:
    """sum SW_m t^m = (sum mu_j t^j)(sum s_n t^n)."""
    ring = _ring_of(list(mu) + list(segre_V), ring)
    mu = [ring.coerce(m) for m in mu]
    s = with_unit(segre_V, ring)
    _check_graded(mu, "mu")
    _check_graded(s, "s", 0)
    return _cauchy(mu, s, ring)


def sw_to_mu(sw: Sequence, chern_V: Sequence, ring: Ring | None = None) -> list:
    """Inverse of mu_to_sw: multiply by the total Chern class."""
    ring = _ring_of(list(sw) + list(chern_V), ring)
    sw = [ring.coerce(m) for m in sw]
    c = with_unit(chern_V, ring)
    _check_graded(sw, "SW")
    _check_graded(c, "c", 0)
    return _cauchy(sw, c, ring)
