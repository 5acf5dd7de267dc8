"""Finitely presented graded-commutative rings over Z, Q or Z/2, and
truncated formal series over them.

A ring is given by generators with positive degrees, rewrite rules of the
shape ``g^k -> replacement`` and a truncation degree above which every
element vanishes.  Elements are kept in normal form at all times.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import (
    BadCoefficient,
    BadDegree,
    InhomogeneousRule,
    NoTopMonomial,
    NonConfluent,
    NonNilpotentArgument,
    NonRationalCoefficients,
    NonUnitConstantTerm,
    ParseError,
    PresentationError,
    RingMismatch,
    UnknownGenerator,
)

COEFF_TAGS = ("Z", "Q", "Z2")
_TAG_ALIASES = {
    "Z": "Z", "Integers": "Z", "ZZ": "Z",
    "Q": "Q", "Rationals": "Q", "QQ": "Q",
    "Z2": "Z2", "Mod2": "Z2", "F2": "Z2", "Z/2": "Z2",
}
_MAX_REWRITE_DEPTH = 400


def coeff_tag(tag: str) -> str:
    try:
        return _TAG_ALIASES[tag]
    except KeyError:
        raise PresentationError(f"unknown coefficient ring {tag!r}") from None


def coerce_coeff(tag: str, c):
    """Bring a number (int, Fraction or "p/q" string) into the coefficient ring."""
    if isinstance(c, str):
        try:
            c = Fraction(c.strip())
        except (ValueError, ZeroDivisionError):
            raise BadCoefficient(f"not a rational number: {c!r}") from None
    if isinstance(c, bool) or not isinstance(c, (int, Fraction)):
        raise BadCoefficient(f"unsupported coefficient {c!r}")
    if tag == "Q":
        # integral values stay ints: exact, and much cheaper to multiply
        if isinstance(c, Fraction) and c.denominator == 1:
            return c.numerator
        return c
    if isinstance(c, Fraction):
        if c.denominator != 1:
            if tag == "Z2" and c.denominator % 2:
                # odd denominators are units mod 2
                return (c.numerator * pow(c.denominator, -1, 2)) % 2
            raise BadCoefficient(f"{c} is not a {tag} coefficient")
        c = c.numerator
    return c % 2 if tag == "Z2" else c


def format_coeff(c) -> str:
    return str(Fraction(c))


@dataclass(frozen=True)
class RingPresentation:
    """Plain data describing a ring.  ``rules`` entries are
    ``(generator, power, replacement)`` where the replacement is an element
    JSON mapping, an expression string, or ``None`` for zero.

    ``caps`` is an optional list of ``(generator names, n)``: any monomial
    whose total exponent over those generators exceeds ``n`` is zero.
    ``top`` optionally declares the exponent vector used for integration.
    """

    coeff: str
    gens: tuple
    rules: tuple = ()
    trunc: int = 0
    caps: tuple = ()
    top: tuple | None = None

    @classmethod
    def from_json(cls, obj) -> "RingPresentation":
        if isinstance(obj, str):
            obj = json.loads(obj)
        if not isinstance(obj, Mapping):
            raise PresentationError("ring presentation must be a JSON object")
        try:
            gens = tuple((str(n), int(d)) for n, d in obj["gens"])
            rules = tuple((str(g), int(k), r) for g, k, r in obj.get("rules", ()))
            caps = tuple((tuple(str(n) for n in names), int(k))
                         for names, k in obj.get("caps", ()))
            top = obj.get("top")
            tag = coeff_tag(str(obj.get("coeff", "Z")))
            trunc = obj.get("trunc")
            trunc = int(trunc) if trunc is not None else _nilpotent_bound(tag, gens, rules)
            return cls(coeff=tag, gens=gens, rules=rules, trunc=trunc, caps=caps,
                       top=tuple(int(e) for e in top) if top is not None else None)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, PresentationError):
                raise
            raise PresentationError(f"malformed ring presentation: {exc}") from None


def _nilpotent_bound(tag, gens, rules) -> int:
    """Top degree when every generator is nilpotent (odd, or killed by a rule)."""
    total = 0
    killed = {g: k for g, k, r in rules if r is None or r in ("0", {"terms": []})}
    for name, deg in gens:
        if name in killed:
            total += (killed[name] - 1) * deg
        elif deg % 2 and tag != "Z2":
            total += deg
        else:
            raise PresentationError(f"no trunc given and {name} is not nilpotent")
    return total


def ring_new(p: RingPresentation | Mapping | str) -> "Ring":
    if not isinstance(p, RingPresentation):
        p = RingPresentation.from_json(p)
    return Ring(p)


class Ring:
    """A validated ring.  Two rings with identical presentations compare
    equal, so their elements mix freely."""

    def __init__(self, presentation: RingPresentation):
        p = presentation
        self.presentation = p
        self.coeff = coeff_tag(p.coeff)
        self.names = tuple(n for n, _ in p.gens)
        self.degrees = tuple(int(d) for _, d in p.gens)
        self.trunc = int(p.trunc)
        if len(set(self.names)) != len(self.names):
            raise PresentationError("duplicate generator names")
        for n, d in zip(self.names, self.degrees):
            if d <= 0:
                raise BadDegree(f"generator {n} has degree {d}")
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
                raise PresentationError(f"bad generator name {n!r}")
        if self.trunc < 0:
            raise PresentationError("truncation degree must be non-negative")
        self.index = {n: i for i, n in enumerate(self.names)}
        self.ngens = len(self.names)
        if self.coeff == "Z2":
            self._odd = ()
        else:
            self._odd = tuple(i for i, d in enumerate(self.degrees) if d % 2)
        self._oddset = frozenset(self._odd)
        self._caps = []
        for names, k in p.caps:
            idx = tuple(self._gen_index(n) for n in names)
            self._caps.append((idx, int(k)))
        self._key = (self.coeff, tuple(p.gens), self.trunc,
                     tuple((g, k, _freeze(r)) for g, k, r in p.rules),
                     tuple(p.caps), p.top)
        self._rules: dict[int, tuple[int, dict]] = {}
        self._nf_cache: dict = {}
        self._prod_cache: dict = {}
        zero_exps = (0,) * self.ngens
        self._unit = zero_exps
        parsed = {}
        for g, k, repl in p.rules:
            i = self._gen_index(g)
            if k < 1:
                raise PresentationError(f"rule power for {g} must be >= 1")
            if i in parsed:
                raise PresentationError(f"two rules for generator {g}")
            terms = self._replacement_terms(repl)
            want = k * self.degrees[i]
            for m in terms:
                if self._deg(m) != want:
                    raise InhomogeneousRule(
                        f"rule {g}^{k} has degree {want} but replacement has a "
                        f"term of degree {self._deg(m)}")
            parsed[i] = (k, terms)
        self._rules = parsed
        self._nf_cache.clear()
        self._prod_cache.clear()
        self._check_confluence()
        self._top = self._find_top(p.top)

    # -- construction helpers -------------------------------------------
    def _gen_index(self, name) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r}") from None

    def _replacement_terms(self, repl) -> dict:
        if repl is None or repl == 0:
            return {}
        if isinstance(repl, str):
            return dict(parse_element(self, repl)._terms)
        if isinstance(repl, Element):
            return dict(repl._terms)
        return dict(self.element_from_json(repl)._terms)

    def _deg(self, exps) -> int:
        return sum(e * d for e, d in zip(exps, self.degrees))

    def __eq__(self, other):
        return self is other or (isinstance(other, Ring) and self._key == other._key)

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        gens = ", ".join(f"{n}:{d}" for n, d in zip(self.names, self.degrees))
        return f"Ring({self.coeff}; {gens}; trunc={self.trunc})"

    # -- coefficient arithmetic -------------------------------------------
    def _clean(self, terms: dict) -> dict:
        if self.coeff == "Z2":
            return {m: 1 for m, c in terms.items() if c % 2}
        out = {}
        for m, c in terms.items():
            if c:
                out[m] = c.numerator if type(c) is Fraction and c.denominator == 1 else c
        return out

    # -- monomial arithmetic ----------------------------------------------
    def _mono_mul(self, a, b):
        """Product of two normal monomials before rewriting: (sign, exps) or None."""
        exps = tuple(x + y for x, y in zip(a, b))
        if self._deg(exps) > self.trunc:
            return None
        sign = 1
        if self._odd:
            par = 0
            acc = 0
            for j in reversed(self._odd):
                par += acc * b[j]
                acc += a[j]
                if exps[j] > 1:
                    return None
            if par & 1:
                sign = -1
        for idx, k in self._caps:
            if sum(exps[i] for i in idx) > k:
                return None
        return sign, exps

    def _normal_form(self, exps, depth=0) -> dict:
        hit = self._nf_cache.get(exps)
        if hit is not None:
            return hit
        if depth > _MAX_REWRITE_DEPTH:
            raise NonConfluent("rewrite system does not terminate")
        out = None
        for i, e in enumerate(exps):
            rule = self._rules.get(i)
            if rule is None or e < rule[0]:
                continue
            out = self._rewrite_at(exps, i, depth)
            break
        if out is None:
            out = {exps: 1}
        self._nf_cache[exps] = out
        return out

    def _rewrite_at(self, exps, i, depth) -> dict:
        k, repl = self._rules[i]
        rest = list(exps)
        rest[i] -= k
        rest = tuple(rest)
        sign = 1
        if i in self._oddset and k % 2:
            # move g_i^k past the odd generators standing before it
            if sum(rest[h] for h in self._odd if h < i) % 2:
                sign = -1
        out: dict = {}
        for m, c in repl.items():
            r = self._mono_mul(m, rest)
            if r is None:
                continue
            s, prod = r
            for m2, c2 in self._normal_form(prod, depth + 1).items():
                out[m2] = out.get(m2, 0) + sign * s * c * c2
        return self._clean(out)

    def _mono_product(self, a, b) -> dict:
        key = (a, b)
        hit = self._prod_cache.get(key)
        if hit is None:
            r = self._mono_mul(a, b)
            if r is None:
                hit = {}
            else:
                s, m = r
                nf = self._normal_form(m)
                hit = nf if s == 1 else {x: -c for x, c in nf.items()}
            self._prod_cache[key] = hit
        return hit

    def _mul_terms(self, t1: dict, t2: dict) -> dict:
        out: dict = {}
        for m1, c1 in t1.items():
            for m2, c2 in t2.items():
                c = c1 * c2
                for m3, c3 in self._mono_product(m1, m2).items():
                    if c3 == 1:
                        out[m3] = out.get(m3, 0) + c
                    elif c3 == -1:
                        out[m3] = out.get(m3, 0) - c
                    else:
                        out[m3] = out.get(m3, 0) + c * c3
        return self._clean(out)

    def _check_confluence(self):
        rules = sorted(self._rules.items())
        for a, (i, (k, _)) in enumerate(rules):
            for j, (l, _) in rules[a + 1:]:
                exps = [0] * self.ngens
                exps[i] = k
                exps[j] = l
                exps = tuple(exps)
                if self._deg(exps) > self.trunc or self._mono_mul(exps, self._unit) is None:
                    continue
                try:
                    left = self._rewrite_at(exps, i, 0)
                    right = self._rewrite_at(exps, j, 0)
                except RecursionError:
                    raise NonConfluent("rewrite system does not terminate") from None
                if left != right:
                    raise NonConfluent(
                        f"critical pair {self.names[i]}^{k}*{self.names[j]}^{l} "
                        "reduces to two different normal forms")

    def _find_top(self, declared):
        if declared is not None:
            if len(declared) != self.ngens:
                raise PresentationError("top monomial has the wrong length")
            return tuple(declared)
        top = []
        for i in range(self.ngens):
            if i in self._oddset:
                top.append(1)
                continue
            rule = self._rules.get(i)
            if rule is not None and not rule[1]:
                top.append(rule[0] - 1)
                continue
            return None
        top = tuple(top)
        if self._deg(top) > self.trunc or self._normal_form(top) != {top: 1}:
            return None
        return top

    # -- public constructors ----------------------------------------------
    @property
    def zero(self) -> "Element":
        return Element(self, {})

    @property
    def one(self) -> "Element":
        return self.scalar(1)

    def scalar(self, c) -> "Element":
        c = coerce_coeff(self.coeff, c)
        return Element(self, self._clean({self._unit: c}) if self.trunc >= 0 else {})

    def gen(self, name: str) -> "Element":
        i = self._gen_index(name)
        exps = [0] * self.ngens
        exps[i] = 1
        return self.monomial(tuple(exps))

    def gens(self) -> tuple:
        return tuple(self.gen(n) for n in self.names)

    def monomial(self, exps, coeff=1) -> "Element":
        exps = tuple(int(e) for e in exps)
        if len(exps) != self.ngens or any(e < 0 for e in exps):
            raise PresentationError(f"bad exponent vector {exps}")
        return self.element({exps: coeff})

    def element(self, terms: Mapping) -> "Element":
        """Normalize an arbitrary exponent-vector -> coefficient mapping."""
        out: dict = {}
        for exps, c in terms.items():
            exps = tuple(exps)
            c = coerce_coeff(self.coeff, c)
            if not c:
                continue
            r = self._mono_mul(self._unit, exps)
            if r is None:
                continue
            for m, c2 in self._normal_form(r[1]).items():
                out[m] = out.get(m, 0) + c * c2
        return Element(self, self._clean(out))

    def coerce(self, x) -> "Element":
        if isinstance(x, Element):
            if x.ring != self:
                raise RingMismatch(f"element of {x.ring!r} used in {self!r}")
            return x
        if isinstance(x, str):
            return parse_element(self, x)
        return self.scalar(x)

    def parse(self, text: str) -> "Element":
        return parse_element(self, text)

    def element_from_json(self, obj) -> "Element":
        if isinstance(obj, str):
            return parse_element(self, obj)
        if isinstance(obj, (int, Fraction)):
            return self.scalar(obj)
        try:
            terms = {}
            for exps, c in obj["terms"]:
                exps = tuple(int(e) for e in exps)
                if len(exps) != self.ngens:
                    raise PresentationError(
                        f"exponent vector {list(exps)} has length {len(exps)}, "
                        f"ring has {self.ngens} generators")
                c = coerce_coeff(self.coeff, c)
                terms[exps] = terms.get(exps, 0) + c
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, PresentationError):
                raise
            raise PresentationError(f"malformed element: {exc}") from None
        return self.element(terms)

    def to_json(self) -> dict:
        p = self.presentation
        out = {
            "coeff": self.coeff,
            "gens": [[n, d] for n, d in zip(self.names, self.degrees)],
            "rules": [[self.names[i], k, Element(self, dict(t)).to_json()]
                      for i, (k, t) in sorted(self._rules.items())],
            "trunc": self.trunc,
        }
        if p.caps:
            out["caps"] = [[list(n), k] for n, k in p.caps]
        if p.top is not None:
            out["top"] = list(p.top)
        return out

    @property
    def top_monomial(self):
        if self._top is None:
            raise NoTopMonomial(f"{self!r} has no designated top monomial")
        return self._top

    def with_coeff(self, tag: str) -> "Ring":
        """Same generators, rules and truncation over another coefficient ring."""
        p = self.presentation
        rules = tuple((self.names[i], k, Element(self, dict(t)).to_json())
                      for i, (k, t) in sorted(self._rules.items()))
        return Ring(RingPresentation(coeff=coeff_tag(tag), gens=p.gens, rules=rules,
                                     trunc=self.trunc, caps=p.caps, top=p.top))

    def with_trunc(self, trunc: int) -> "Ring":
        p = self.presentation
        return Ring(RingPresentation(coeff=self.coeff, gens=p.gens, rules=p.rules,
                                     trunc=trunc, caps=p.caps, top=p.top))


def _freeze(x):
    if isinstance(x, Mapping):
        return tuple(sorted((k, _freeze(v)) for k, v in x.items()))
    if isinstance(x, (list, tuple)):
        return tuple(_freeze(v) for v in x)
    if isinstance(x, Element):
        return tuple(sorted(x._terms.items()))
    return x


def _term_key(ring, exps):
    return (ring._deg(exps), tuple(-e for e in exps))


class Element:
    """Immutable ring element in normal form."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: Ring, terms: dict):
        self.ring = ring
        self._terms = terms
        self._hash = None

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def _other(self, other):
        if isinstance(other, Element):
            if other.ring is not self.ring and other.ring != self.ring:
                raise RingMismatch("elements belong to different rings")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ring.scalar(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for m, c in o._terms.items():
            out[m] = out.get(m, 0) + c
        return Element(self.ring, self.ring._clean(out))

    __radd__ = __add__

    def __neg__(self):
        if self.ring.coeff == "Z2":
            return self
        return Element(self.ring, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Element(self.ring, self.ring._mul_terms(self._terms, o._terms))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if self.ring.coeff == "Q":
                return self.scale(Fraction(1) / other)
            return self.scale(coerce_coeff(self.ring.coeff, Fraction(1) / other))
        return NotImplemented

    def scale(self, c):
        c = coerce_coeff(self.ring.coeff, c)
        return Element(self.ring, self.ring._clean({m: c * v for m, v in self._terms.items()}))

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return self.ring.one if result is None else result

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            try:
                return self._terms == self.ring.scalar(other)._terms
            except BadCoefficient:
                return False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    # -- grading -----------------------------------------------------------
    def degrees(self) -> set:
        return {self.ring._deg(m) for m in self._terms}

    @property
    def degree(self):
        """Top degree present, or None for zero."""
        return max(self.degrees(), default=None)

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def graded_part(self, k: int) -> "Element":
        deg = self.ring._deg
        return Element(self.ring, {m: c for m, c in self._terms.items() if deg(m) == k})

    def truncate(self, k: int) -> "Element":
        deg = self.ring._deg
        return Element(self.ring, {m: c for m, c in self._terms.items() if deg(m) <= k})

    def constant_term(self):
        c = self._terms.get(self.ring._unit, 0)
        return Fraction(c) if self.ring.coeff == "Q" else c

    def coefficient(self, exps):
        c = self._terms.get(tuple(exps), 0)
        return Fraction(c) if self.ring.coeff == "Q" else c

    def top_coefficient(self):
        return self.coefficient(self.ring.top_monomial)

    # -- inverse / exp / log --------------------------------------------------
    def inverse(self) -> "Element":
        tag = self.ring.coeff
        c0 = self.constant_term()
        if tag == "Q":
            ok = c0 != 0
        elif tag == "Z":
            ok = c0 in (1, -1)
        else:
            ok = c0 % 2 == 1
        if not ok:
            raise NonUnitConstantTerm(f"constant term {c0} is not a unit over {tag}")
        inv0 = Fraction(1) / c0 if tag == "Q" else c0
        nil = (self - c0).scale(inv0)
        out = self.ring.one
        power = self.ring.one
        sign = 1
        while True:
            power = power * nil
            if not power:
                break
            sign = -sign
            out = out + power.scale(sign)
        return out.scale(inv0)

    def exp(self) -> "Element":
        if self.ring.coeff != "Q":
            raise NonRationalCoefficients("exp needs rational coefficients")
        if self.constant_term() != 0:
            raise NonNilpotentArgument("exp argument has a nonzero constant term")
        out = self.ring.one
        term = self.ring.one
        n = 0
        while True:
            n += 1
            term = (term * self).scale(Fraction(1, n))
            if not term:
                return out
            out = out + term

    def log(self) -> "Element":
        if self.ring.coeff != "Q":
            raise NonRationalCoefficients("log needs rational coefficients")
        if self.constant_term() != 1:
            raise NonNilpotentArgument("log argument must have constant term 1")
        nil = self - 1
        out = self.ring.zero
        power = self.ring.one
        n = 0
        while True:
            n += 1
            power = power * nil
            if not power:
                return out
            out = out + power.scale(Fraction((-1) ** (n + 1), n))

    def map_to(self, ring: Ring) -> "Element":
        """Transport to another ring with the same generator names."""
        try:
            perm = [ring.index[n] for n in self.ring.names]
        except KeyError as exc:
            raise RingMismatch(f"generator {exc} missing in target ring") from None
        terms = {}
        for m, c in self._terms.items():
            exps = [0] * ring.ngens
            for i, e in enumerate(m):
                exps[perm[i]] = e
            terms[tuple(exps)] = c
        return ring.element(terms)

    # -- printing ----------------------------------------------------------
    def sorted_terms(self):
        ring = self.ring
        return sorted(self._terms.items(), key=lambda mc: _term_key(ring, mc[0]))

    def _mono_str(self, exps, sep):
        parts = []
        for n, e in zip(self.ring.names, exps):
            if e == 1:
                parts.append(n)
            elif e > 1:
                parts.append(f"{n}^{e}")
        return sep.join(parts)

    def __str__(self):
        if not self._terms:
            return "0"
        compact = all(len(n) == 1 for n in self.ring.names)
        sep = "" if compact else "*"
        out = []
        for exps, c in self.sorted_terms():
            c = Fraction(c)
            neg = c < 0
            c = abs(c)
            mono = self._mono_str(exps, sep)
            if not mono:
                body = format_coeff(c)
            elif c == 1:
                body = mono
            elif c.denominator == 1 and compact:
                body = f"{c}{mono}"
            elif compact:
                body = f"({c}){mono}"
            else:
                body = f"{c}*{mono}"
            if out:
                out.append(("-" if neg else "+") + body)
            else:
                out.append(("-" if neg else "") + body)
        return "".join(out)

    def to_expr(self) -> str:
        """Text form that parse_element reads back."""
        if not self._terms:
            return "0"
        out = []
        for exps, c in self.sorted_terms():
            c = Fraction(c)
            mono = self._mono_str(exps, "*")
            a = abs(c)
            body = mono if (mono and a == 1) else (f"{a}*{mono}" if mono else str(a))
            if not out:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"Element({self})"

    def to_json(self) -> dict:
        return {"terms": [[list(m), format_coeff(c)] for m, c in self.sorted_terms()]}


# ---------------------------------------------------------------------------
# expression parser

_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*^()·]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, name, op = m.groups()
        if num is not None:
            toks.append(("num", num))
        elif name is not None:
            toks.append(("name", name))
        else:
            toks.append(("op", "^" if op == "**" else ("*" if op == "·" else op)))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, ring: Ring, text: str):
        self.ring = ring
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, op=None):
        tok = self.peek()
        if tok[0] is None:
            raise ParseError("unexpected end of expression")
        if op is not None and tok != ("op", op):
            raise ParseError(f"expected {op!r}, got {tok[1]!r}")
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        val = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input at token {self.peek()[1]!r}")
        return val

    def expr(self):
        val = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.unary()
        while True:
            tok = self.peek()
            if tok == ("op", "*"):
                self.take()
                val = val * self.unary()
            elif tok[0] in ("num", "name") or tok == ("op", "("):
                val = val * self.unary()
            else:
                return val

    def unary(self):
        tok = self.peek()
        if tok == ("op", "-"):
            self.take()
            return -self.unary()
        if tok == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, text = self.take()
            if kind != "num" or "/" in text:
                raise ParseError("exponent must be a non-negative integer")
            return base ** int(text)
        return base

    def atom(self):
        kind, text = self.take()
        if kind == "num":
            return self.ring.scalar(Fraction(text))
        if kind == "name":
            return self.ring.gen(text)
        if text == "(":
            val = self.expr()
            self.take(")")
            return val
        raise ParseError(f"unexpected token {text!r}")


def parse_element(ring: Ring, text: str) -> Element:
    """Parse e.g. ``"1 + x*y - 1/2*c1^2"`` into a normal-form element."""
    return _Parser(ring, str(text)).parse()


def graded_part(a: Element, k: int) -> Element:
    return a.graded_part(k)


def top_coefficient(a: Element):
    return a.top_coefficient()


def elem_mul(a: Element, b: Element) -> Element:
    return a * b


# ---------------------------------------------------------------------------
# formal series


def _zero_like(ring):
    return Fraction(0) if ring is None else ring.zero


def _is_zero(c) -> bool:
    return not c


class FormalSeries:
    """Truncated power or Laurent series in one variable.

    ``coeffs[i]`` is the coefficient of ``var^(min_power + i)``; powers above
    ``trunc`` are unknown and never stored.  Coefficients are Fractions when
    ``ring`` is None, otherwise ring Elements.
    """

    __slots__ = ("coeffs", "min_power", "trunc", "var", "ring")

    def __init__(self, coeffs: Iterable = (), *, min_power: int = 0, trunc: int | None = None,
                 var: str = "t", ring: Ring | None = None):
        coeffs = list(coeffs)
        if trunc is None:
            trunc = min_power + len(coeffs) - 1
        if ring is None:
            cs = [Fraction(c) if not isinstance(c, Fraction) else c for c in coeffs]
        else:
            cs = [ring.coerce(c) for c in coeffs]
        keep = max(0, trunc - min_power + 1)
        cs = cs[:keep]
        while len(cs) < keep:
            cs.append(_zero_like(ring))
        self.coeffs = tuple(cs)
        self.min_power = min_power
        self.trunc = trunc
        self.var = var
        self.ring = ring

    # basic access
    def __getitem__(self, n: int):
        if n > self.trunc:
            raise IndexError(f"power {n} is beyond the truncation {self.trunc}")
        if n < self.min_power:
            return _zero_like(self.ring)
        return self.coeffs[n - self.min_power]

    def items(self):
        for i, c in enumerate(self.coeffs):
            yield self.min_power + i, c

    def _like(self, coeffs, min_power, trunc):
        return FormalSeries(coeffs, min_power=min_power, trunc=trunc, var=self.var, ring=self.ring)

    def _check(self, other):
        if not isinstance(other, FormalSeries):
            return None
        if other.ring != self.ring:
            raise RingMismatch("series over different coefficient rings")
        return other

    def __eq__(self, other):
        if not isinstance(other, FormalSeries):
            return NotImplemented
        lo = min(self.min_power, other.min_power)
        return self.trunc == other.trunc and all(
            self[n] == other[n] for n in range(lo, self.trunc + 1))

    def __hash__(self):
        return hash((self.trunc, tuple(self[n] for n in range(min(0, self.min_power), self.trunc + 1))))

    def __add__(self, other):
        o = self._check(other)
        if o is None:
            return self + self.constant(other)
        lo = min(self.min_power, o.min_power)
        hi = min(self.trunc, o.trunc)
        return self._like([self[n] + o[n] for n in range(lo, hi + 1)], lo, hi)

    __radd__ = __add__

    def __neg__(self):
        return self._like([-c for c in self.coeffs], self.min_power, self.trunc)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def constant(self, c) -> "FormalSeries":
        """c as a series with this one's variable and truncation."""
        return self._like([c], 0, self.trunc)

    def __mul__(self, other):
        o = self._check(other)
        if o is None:
            return self._like([c * other for c in self.coeffs], self.min_power, self.trunc)
        lo = self.min_power + o.min_power
        hi = min(self.trunc + o.min_power, o.trunc + self.min_power)
        out = [_zero_like(self.ring) for _ in range(hi - lo + 1)]
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(o.coeffs):
                n = i + j
                if n >= len(out):
                    break
                if not _is_zero(b):
                    out[n] = out[n] + a * b
        return self._like(out, lo, hi)

    def __rmul__(self, other):
        return self._like([other * c for c in self.coeffs], self.min_power, self.trunc)

    def shift(self, k: int) -> "FormalSeries":
        """Multiply by var^k."""
        return self._like(self.coeffs, self.min_power + k, self.trunc + k)

    def truncate(self, trunc: int) -> "FormalSeries":
        return self._like(self.coeffs, self.min_power, min(trunc, self.trunc))

    def valuation(self):
        for n, c in self.items():
            if not _is_zero(c):
                return n
        return None

    def normalized(self) -> "FormalSeries":
        """Drop leading zero coefficients."""
        v = self.valuation()
        if v is None or v == self.min_power:
            return self
        return self._like(self.coeffs[v - self.min_power:], v, self.trunc)

    def _unit_inverse(self, c):
        if self.ring is None:
            if c == 0:
                raise NonUnitConstantTerm("leading coefficient is zero")
            return 1 / c
        return c.inverse()

    def inverse(self) -> "FormalSeries":
        s = self.normalized() if self.ring is None else self
        p = s.min_power
        n = s.trunc - p
        u = s.coeffs
        if not u:
            raise NonUnitConstantTerm("series is zero to its truncation")
        inv0 = self._unit_inverse(u[0])
        v = [inv0]
        for k in range(1, n + 1):
            acc = _zero_like(self.ring)
            for i in range(1, k + 1):
                if not _is_zero(u[i]):
                    acc = acc + u[i] * v[k - i]
            v.append(-(inv0 * acc))
        return self._like(v, -p, s.trunc - 2 * p)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return self.constant(1 if self.ring is None else self.ring.one)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def derivative(self) -> "FormalSeries":
        return self._like([c * n for n, c in self.items()], self.min_power - 1, self.trunc - 1)

    def integral(self) -> "FormalSeries":
        out = []
        for n, c in self.items():
            if n == -1:
                if not _is_zero(c):
                    raise ValueError("cannot integrate a var^-1 term")
                out.append(c * 0)
            else:
                out.append(c * Fraction(1, n + 1))
        return self._like(out, self.min_power + 1, self.trunc + 1)

    def exp(self) -> "FormalSeries":
        if self.min_power < 0 and any(not _is_zero(c) for n, c in self.items() if n < 0):
            raise NonNilpotentArgument("exp of a series with negative powers")
        if self.ring is not None and self.ring.coeff != "Q":
            raise NonRationalCoefficients("exp needs rational coefficients")
        a0 = self[0]
        if self.ring is None:
            if a0 != 0:
                raise NonNilpotentArgument("exp of a series with nonzero constant term")
            e0 = Fraction(1)
        else:
            e0 = a0.exp()
        N = self.trunc
        e = [e0]
        for n in range(1, N + 1):
            acc = _zero_like(self.ring)
            for k in range(1, n + 1):
                ak = self[k]
                if not _is_zero(ak):
                    acc = acc + (ak * e[n - k]) * k
            e.append(acc * Fraction(1, n))
        return self._like(e, 0, N)

    def log(self) -> "FormalSeries":
        if self.valuation() is None or any(not _is_zero(c) for n, c in self.items() if n < 0):
            raise NonNilpotentArgument("log of a series without a constant leading term")
        if self.ring is None:
            if self[0] != 1:
                raise NonNilpotentArgument("log needs constant term 1")
            l0 = Fraction(0)
        else:
            l0 = self[0].log()
        base = self.truncate(self.trunc)
        if self.min_power > 0:
            base = base._like([self[n] for n in range(0, self.trunc + 1)], 0, self.trunc)
        d = (base.derivative() * base.inverse())
        out = d.integral()
        coeffs = [l0] + [out[n] for n in range(1, self.trunc + 1)]
        return self._like(coeffs, 0, self.trunc)

    def __repr__(self):
        parts = [f"({c})*{self.var}^{n}" for n, c in self.items() if not _is_zero(c)]
        return f"FormalSeries({' + '.join(parts) or '0'} + O({self.var}^{self.trunc + 1}))"


def series_invert(s: FormalSeries) -> FormalSeries:
    return s.inverse()


def series_exp(a):
    """exp of a ring element or of a formal series (zero constant term)."""
    if isinstance(a, Element):
        return a.exp()
    if isinstance(a, FormalSeries):
        return a.exp()
    raise TypeError(f"cannot exponentiate {type(a).__name__}")


def series_log(a):
    if isinstance(a, Element):
        return a.log()
    return a.log()


def rational_series(fn, trunc: int, var: str = "t") -> FormalSeries:
    """Series whose n-th coefficient is fn(n)."""
    return FormalSeries([fn(n) for n in range(trunc + 1)], trunc=trunc, var=var)


def exp_series(trunc: int, scale=1, var: str = "t") -> FormalSeries:
    """e^(scale*t) truncated."""
    from math import factorial
    scale = Fraction(scale)
    return FormalSeries([scale ** n / factorial(n) for n in range(trunc + 1)], trunc=trunc, var=var)
