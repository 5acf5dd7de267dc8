"""Mod-2 binomials, identity sweeps and the Steenrod-square formulas for
families Seiberg-Witten classes."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial
from typing import Mapping, NamedTuple

from ..charclass import RealBundleClass, with_unit
from ..errors import (
    DegreeMismatch,
    NegativeK,
    NotMod2Ring,
    PreconditionViolated,
    WrongBPlusResidue,
)
from ..gring import Element, Ring
from . import _kernels
from ._kernels import BACKEND

__all__ = [
    "BACKEND", "binom_int", "binom_mod2", "SWLedger", "VerificationReport",
    "verify_vzero", "verify_recur5", "verify_recur3", "sq", "Relation",
    "realizability_relations", "power_of_two_relations", "w2_obstruction",
    "sw_equals_chern_check", "DEFAULT_RANGES",
]


def binom_int(n: int, k: int) -> int:
    """n(n-1)...(n-k+1)/k!, valid for any integer n."""
    if k < 0:
        raise NegativeK(f"lower index {k} is negative")
    if 0 <= k <= n:
        return comb(n, k)
    num = 1
    for i in range(k):
        num *= n - i
    return num // factorial(k)


def binom_mod2(n: int, k: int) -> int:
    """Parity of binom(n, k) by Lucas' theorem; 0 when k < 0."""
    return _kernels.binom_mod2(n, k)


# -- identity sweeps ---------------------------------------------------------

DEFAULT_RANGES = {
    "vzero": {"u": (-20, 20), "j": (0, 12)},
    "recur5": {"u": (-15, 15), "v": (-15, 15), "j": (0, 10)},
    "recur3": {"k": (0, 6), "l": (0, 6), "m": (0, 6), "d": (-3, 8), "ap": (0, 6)},
}


@dataclass
class VerificationReport:
    identity: str
    ranges: dict
    rows: list = field(default_factory=list)   # (params, lhs, rhs, ok)
    backend: str = BACKEND

    @property
    def checked(self) -> int:
        return len(self.rows)

    @property
    def counterexamples(self) -> list:
        return [r for r in self.rows if not r[3]]

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_json(self, include_rows: bool = False) -> dict:
        out = {
            "identity": self.identity,
            "ranges": {k: list(v) for k, v in self.ranges.items()},
            "checked": self.checked,
            "counterexamples": [dict(p, lhs=a, rhs=b) for p, a, b, _ in self.counterexamples],
            "pass": self.ok,
            "backend": self.backend,
        }
        if include_rows:
            out["rows"] = [dict(p, lhs=a, rhs=b, ok=ok) for p, a, b, ok in self.rows]
        return out

    def tsv_rows(self):
        for params, lhs, rhs, ok in self.rows:
            ps = ",".join(f"{k}={v}" for k, v in params.items())
            yield f"{self.identity}:{ps}\t{lhs}\t{rhs}\t{'pass' if ok else 'fail'}"


def _ranges(name: str, given: Mapping | None) -> dict:
    r = dict(DEFAULT_RANGES[name])
    for key, val in (given or {}).items():
        if key not in r:
            raise KeyError(f"{name} has no range key {key!r}")
        lo, hi = val
        if lo > hi:
            raise ValueError(f"empty range for {key}: {lo}..{hi}")
        r[key] = (int(lo), int(hi))
    return r


def _unpack(bits, names, points) -> list:
    rows = []
    for params, b in zip(points, bits):
        lhs, rhs = b & 1, b >> 1
        rows.append((dict(zip(names, params)), lhs, rhs, lhs == rhs))
    return rows


def verify_vzero(ranges: Mapping | None = None) -> VerificationReport:
    """sum_l binom(u+l, j-l) binom(2l-1, l) == binom(u+1, j) mod 2."""
    r = _ranges("vzero", ranges)
    (ul, uh), (jl, jh) = r["u"], r["j"]
    bits = _kernels.vzero_sweep(ul, uh, jl, jh)
    pts = ((u, j) for u in range(ul, uh + 1) for j in range(jl, jh + 1))
    return VerificationReport("vzero", r, _unpack(bits, ("u", "j"), pts))


def verify_recur5(ranges: Mapping | None = None) -> VerificationReport:
    """sum_l binom(u+l, j-l) binom(v-l, l) == binom(u+v+1, j) mod 2."""
    r = _ranges("recur5", ranges)
    (ul, uh), (vl, vh), (jl, jh) = r["u"], r["v"], r["j"]
    bits = _kernels.recur5_sweep(ul, uh, vl, vh, jl, jh)
    pts = ((u, v, j) for u in range(ul, uh + 1) for v in range(vl, vh + 1)
           for j in range(jl, jh + 1))
    return VerificationReport("recur5", r, _unpack(bits, ("u", "v", "j"), pts))


def verify_recur3(ranges: Mapping | None = None) -> VerificationReport:
    """The closed-form Steenrod coefficients solve their defining recursion.

    The ``ap`` range is an offset above the smallest admissible a',
    max(0, k, m + l + 1 - d).
    """
    r = _ranges("recur3", ranges)
    (kl, kh), (ll, lh), (ml, mh), (dl, dh) = r["k"], r["l"], r["m"], r["d"]
    off_lo, off_hi = r["ap"]
    if off_lo < 0:
        raise ValueError("ap offsets must be non-negative")
    bits = _kernels.recur3_sweep(kl, kh, ll, lh, ml, mh, dl, dh, off_hi)
    pts = []
    keep = []
    for k in range(kl, kh + 1):
        for l in range(ll, lh + 1):
            for m in range(ml, mh + 1):
                for d in range(dl, dh + 1):
                    lo = _kernels.recur3_lower(k, l, m, d)
                    for off in range(0, off_hi + 1):
                        pts.append((k, l, m, d, lo + off))
                        keep.append(off >= off_lo)
    rows = _unpack(bits, ("k", "l", "m", "d", "ap"), pts)
    rows = [row for row, kept in zip(rows, keep) if kept]
    return VerificationReport("recur3", r, rows)


# -- ledgers ------------------------------------------------------------------

@dataclass(frozen=True)
class SWLedger:
    """Bookkeeping for families invariants: d, b+, Segre classes of D,
    classes of H+ and the map m -> SW_m."""

    ring: Ring
    d: int
    b_plus: int
    segre_D: tuple = ()
    sw_classes: Mapping = field(default_factory=dict)
    hplus: RealBundleClass | None = None

    def __post_init__(self):
        if self.b_plus < 1:
            raise PreconditionViolated("b+ must be positive")
        s = tuple(with_unit(self.segre_D, self.ring))
        object.__setattr__(self, "segre_D", s)
        sw = {int(m): self.ring.coerce(v) for m, v in dict(self.sw_classes).items()}
        object.__setattr__(self, "sw_classes", sw)
        for m, v in sw.items():
            if v and (not v.is_homogeneous() or v.degree != self.sw_degree(m)):
                raise DegreeMismatch(
                    f"SW_{m} should have degree {self.sw_degree(m)}, got {sorted(v.degrees())}")
        for k, v in enumerate(s):
            if v and (not v.is_homogeneous() or v.degree != 2 * k):
                raise DegreeMismatch(f"s_{k} should have degree {2 * k}")

    def sw_degree(self, m: int) -> int:
        return 2 * m - (2 * self.d - self.b_plus - 1)

    def sw(self, m: int) -> Element:
        return self.sw_classes.get(m, self.ring.zero)

    def s(self, k: int) -> Element:
        if 0 <= k < len(self.segre_D):
            return self.segre_D[k]
        return self.ring.zero

    def w(self, i: int) -> Element:
        if i == 0:
            return self.ring.one
        if self.hplus is None or not self.hplus.sw:
            return self.ring.zero
        return self.hplus.w(i).map_to(self.ring) if self.hplus.sw_ring != self.ring \
            else self.hplus.w(i)

    def total_w(self) -> Element:
        out = self.ring.one
        for i in range(1, self.ring.trunc + 1):
            out = out + self.w(i)
        return out

    def total_s(self) -> Element:
        out = self.ring.zero
        for v in self.segre_D:
            out = out + v
        return out

    @property
    def p(self):
        """b+ = 2p + 1, or None for even b+."""
        return (self.b_plus - 1) // 2 if self.b_plus % 2 else None

    def max_m(self) -> int:
        """Largest m whose SW_m can be nonzero under the truncation."""
        return (self.ring.trunc + 2 * self.d - self.b_plus - 1) // 2

    def to_json(self) -> dict:
        out = {
            "d": self.d,
            "b_plus": self.b_plus,
            "segre": [v.to_json() for v in self.segre_D[1:]],
            "sw": {str(m): v.to_json() for m, v in sorted(self.sw_classes.items())},
        }
        if self.hplus is not None:
            out["hplus"] = self.hplus.to_json()
        return out

    @classmethod
    def from_json(cls, ring: Ring, obj) -> "SWLedger":
        segre = [ring.element_from_json(v) for v in obj.get("segre", ())]
        sw = {int(m): ring.element_from_json(v) for m, v in dict(obj.get("sw", {})).items()}
        hplus = None
        if "hplus" in obj and obj["hplus"] is not None:
            h = obj["hplus"]
            hplus = RealBundleClass(int(h.get("rank", obj["b_plus"])),
                                    tuple(ring.element_from_json(w) for w in h.get("sw", ())),
                                    sw_ring=ring)
        return cls(ring, int(obj["d"]), int(obj["b_plus"]), tuple(segre), sw, hplus)


def _require_mod2(ledger: SWLedger):
    if ledger.ring.coeff != "Z2":
        raise NotMod2Ring("Steenrod squares need a mod-2 ledger")


def sq(ledger: SWLedger, i: int, m: int) -> Element:
    """Sq^i(SW_m) by the closed double sum; odd i uses odd w-classes."""
    _require_mod2(ledger)
    if i < 0 or m < 0:
        raise ValueError("i and m must be non-negative")
    j, odd = divmod(i, 2)
    d = ledger.d
    out = ledger.ring.zero
    for l in range(j + 1):
        swl = ledger.sw(m + l)
        if not swl:
            continue
        for k in range(j - l + 1):
            if not binom_mod2(d - 1 - m + l + k, l):
                continue
            sk = ledger.s(k)
            if not sk:
                continue
            w = ledger.w(2 * j - 2 * l - 2 * k + odd)
            if w:
                out = out + sk * w * swl
    return out


class Relation(NamedTuple):
    description: str
    value: Element

    @property
    def holds(self) -> bool:
        return not self.value


def realizability_relations(ledger: SWLedger) -> list:
    """Sq^i(SW_m) evaluated wherever i exceeds the degree of SW_m.

    Every entry vanishes for a ledger coming from an actual family; a
    nonzero entry rules the ledger out.
    """
    _require_mod2(ledger)
    trunc = ledger.ring.trunc
    out = []
    for m in range(0, ledger.max_m() + 1):
        deg = ledger.sw_degree(m)
        for i in range(max(0, deg + 1), trunc - deg + 1):
            out.append(Relation(f"Sq^{i}(SW_{m}) = 0", sq(ledger, i, m)))
    return out


def power_of_two_relations(ledger: SWLedger, p_factorization: tuple | None = None) -> list:
    """With b+ = 2p+1, p = 2^a p' and trivial w(H+), at m = d-p-1:
    SW_{m+2^b} = s_{2^b} SW_m for b < a, and s_{2^a} SW_m = 0."""
    _require_mod2(ledger)
    p = ledger.p
    if p is None:
        raise PreconditionViolated("b+ must be odd")
    if any(ledger.w(i) for i in range(1, ledger.ring.trunc + 1)):
        raise PreconditionViolated("Stiefel-Whitney classes of H+ must be trivial")
    a, podd = 0, p
    while podd and podd % 2 == 0:
        a += 1
        podd //= 2
    if p_factorization is not None:
        fa, fp = p_factorization
        if fp % 2 == 0 or (2 ** fa) * fp != p:
            raise PreconditionViolated(f"{p_factorization} is not the 2-adic split of p={p}")
    if p == 0:
        raise PreconditionViolated("p = 0 has no 2-adic factorization")
    m = ledger.d - p - 1
    if m < 0:
        raise PreconditionViolated(f"m = d - p - 1 = {m} is negative")
    swm = ledger.sw(m)
    out = []
    for b in range(a):
        e = 2 ** b
        out.append(Relation(f"SW_{m + e} = s_{e}(D) SW_{m}", ledger.sw(m + e) + ledger.s(e) * swm))
    e = 2 ** a
    out.append(Relation(f"s_{e}(D) SW_{m} = 0", ledger.s(e) * swm))
    return out


def w2_obstruction(ledger: SWLedger, sw_parity: int) -> dict:
    """For b+ = 3 mod 4 and odd SW, a family must satisfy c_1(D) = w_2(H+) mod 2."""
    _require_mod2(ledger)
    if ledger.b_plus % 4 != 3:
        raise WrongBPlusResidue(f"b+ = {ledger.b_plus} is not 3 mod 4")
    c1 = ledger.s(1)  # c_1 = -s_1, the same mod 2
    w2 = ledger.w(2)
    cls = c1 + w2
    obstructed = bool(sw_parity % 2) and bool(cls)
    return {
        "c1_plus_w2": str(cls),
        "sw_parity": sw_parity % 2,
        "obstructed": obstructed,
    }


def sw_equals_chern_check(ledger: SWLedger) -> dict:
    """If 2d - b+ - 1 = 0, SW_0 is odd and all higher SW_j vanish mod 2,
    then w(H+) s(D) = 1; report the first degree where that fails."""
    _require_mod2(ledger)
    if 2 * ledger.d - ledger.b_plus - 1 != 0:
        raise PreconditionViolated("needs 2d - b+ - 1 = 0")
    if ledger.sw(0) != 1:
        raise PreconditionViolated("needs SW_0 odd")
    if any(v for m, v in ledger.sw_classes.items() if m > 0):
        raise PreconditionViolated("needs SW_j even for j > 0")
    prod = ledger.total_w() * ledger.total_s()
    first = None
    for k in range(1, ledger.ring.trunc + 1):
        if prod.graded_part(k):
            first = k
            break
    return {"pass": first is None, "first_failing_degree": first, "w_times_s": str(prod)}
