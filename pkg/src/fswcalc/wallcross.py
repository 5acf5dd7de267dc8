"""Chamber differences: the families wall-crossing formula, the sphere
bundle section algebra that identifies the obstruction class, and the
b+ = 1 wall crossing over the Jacobian torus."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import factorial
from typing import Sequence

from .charclass import with_unit
from .errors import (
    BadSchema,
    ContextMismatch,
    DegreeMismatch,
    NonAntisymmetricM,
    OddB1,
    RouteDisagreement,
)
from .gring import Element, Ring, RingPresentation


def wall_difference(m: int, d: int, obs: Element, segre_D: Sequence) -> Element:
    """SW_m(phi) - SW_m(psi): zero below m = d-1, then obs * s_{m-d+1}(D)."""
    if m < 0:
        raise ValueError("m must be non-negative")
    ring = obs.ring
    if m < d - 1:
        return ring.zero
    s = with_unit(segre_D, ring)
    k = m - (d - 1)
    return obs * s[k] if k < len(s) else ring.zero


# -- sphere bundle algebra ----------------------------------------------------

@dataclass(frozen=True)
class SphereContext:
    """Data of two sections phi, psi of the unit sphere bundle of H+:
    Euler classes of their orthogonal complements and the difference
    lambda = tau_phi - tau_psi of the splitting classes."""

    b_plus: int
    e_phi: Element
    e_psi: Element
    lam: Element

    @property
    def ring(self) -> Ring:
        return self.e_phi.ring

    def euler(self, section: str) -> Element:
        return self.e_phi if section == "phi" else self.e_psi

    def twist(self, a: Element) -> Element:
        """Sign from moving tau (degree b+ - 1) past a base class."""
        if (self.b_plus - 1) % 2 == 0:
            return a
        out = a.ring.zero
        for k in a.degrees():
            part = a.graded_part(k)
            out = out + (-part if k % 2 else part)
        return out


_SECTIONS = ("phi", "psi")


@dataclass(frozen=True)
class SphereBundleElement:
    """alpha + beta * tau_section, with base classes written to the left of tau."""

    alpha: Element
    beta: Element
    context: SphereContext
    section: str = "phi"

    def __post_init__(self):
        if self.section not in _SECTIONS:
            raise ValueError(f"section must be one of {_SECTIONS}")

    def _same(self, other: "SphereBundleElement"):
        if self.context != other.context:
            raise ContextMismatch("sphere bundle elements from different contexts")

    def in_basis(self, section: str) -> "SphereBundleElement":
        if section == self.section:
            return self
        lam = self.context.lam
        # tau_phi = tau_psi + lambda
        shift = self.beta * lam
        alpha = self.alpha + shift if section == "psi" else self.alpha - shift
        return SphereBundleElement(alpha, self.beta, self.context, section)

    def __add__(self, other):
        self._same(other)
        o = other.in_basis(self.section)
        return SphereBundleElement(self.alpha + o.alpha, self.beta + o.beta,
                                   self.context, self.section)

    def __neg__(self):
        return SphereBundleElement(-self.alpha, -self.beta, self.context, self.section)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return sb_mul(self, other)

    def antipodal(self) -> "SphereBundleElement":
        """Pushforward along the antipodal map."""
        ctx = self.context
        sign = -1 if ctx.b_plus % 2 else 1
        e = ctx.euler(self.section)
        return SphereBundleElement(self.alpha * sign + self.beta * e, self.beta,
                                   ctx, self.section)

    def pushforward(self) -> Element:
        return self.beta

    def __eq__(self, other):
        if not isinstance(other, SphereBundleElement):
            return NotImplemented
        if self.context != other.context:
            return False
        o = other.in_basis(self.section)
        return self.alpha == o.alpha and self.beta == o.beta

    def __hash__(self):
        u = self.in_basis("phi")
        return hash((u.alpha, u.beta))

    def __str__(self):
        return f"({self.alpha}) + ({self.beta})*tau_{self.section}"


def sb_base(a, context: SphereContext, section: str = "phi") -> SphereBundleElement:
    """Pullback of a base class."""
    a = context.ring.coerce(a)
    return SphereBundleElement(a, context.ring.zero, context, section)


def sb_tau(context: SphereContext, section: str = "phi") -> SphereBundleElement:
    return SphereBundleElement(context.ring.zero, context.ring.one, context, section)


def section_class(context: SphereContext, section: str = "phi") -> SphereBundleElement:
    """Image of 1 under the section's pushforward: tau + e."""
    return SphereBundleElement(context.euler(section), context.ring.one, context, section)


def antipodal_section_class(context: SphereContext, section: str = "phi") -> SphereBundleElement:
    """Pushforward of 1 along minus the section."""
    return section_class(context, section).antipodal()


def sb_mul(u: SphereBundleElement, v: SphereBundleElement) -> SphereBundleElement:
    """Product in the module; u is rewritten in v's basis first."""
    u._same(v)
    ctx = v.context
    u = u.in_basis(v.section)
    a1, b1, a2, b2 = u.alpha, u.beta, v.alpha, v.beta
    sign = -1 if ctx.b_plus % 2 else 1
    e = ctx.euler(v.section)
    alpha = a1 * a2
    beta = a1 * b2 + b1 * ctx.twist(a2) + (b1 * ctx.twist(b2) * e) * sign
    return SphereBundleElement(alpha, beta, ctx, v.section)


def sb_pushforward(u: SphereBundleElement) -> Element:
    return u.pushforward()


def obs_from_algebra(context: SphereContext) -> Element:
    """Fiber integral of phi_*(1) times (-psi)_*(1)."""
    prod = section_class(context, "phi") * antipodal_section_class(context, "psi")
    return prod.pushforward()


def parity_check(context: SphereContext) -> dict:
    """Relations forced by the antipodal map, split by the parity of b+."""
    obs = obs_from_algebra(context)
    e_diff = context.e_phi - context.e_psi
    if context.b_plus % 2 == 0:
        checks = {
            "e_phi == e_psi": not e_diff,
            "obs == lambda": obs == context.lam,
        }
    else:
        checks = {
            "2*lambda + e_phi - e_psi == 0": not (context.lam * 2 + e_diff),
            "2*obs == e_phi - e_psi": obs * 2 == e_diff,
        }
    return {"b_plus": context.b_plus, "obs": str(obs), "checks": checks,
            "pass": all(checks.values())}


def _check_pullback(a: Element, b_plus: int, name: str):
    if a and (not a.is_homogeneous() or a.degree != b_plus - 1):
        raise DegreeMismatch(f"{name} must have degree {b_plus - 1}")


def obs_trivialized(b_plus: int, phi_pull: Element, psi_pull: Element) -> Element:
    """Obstruction class for a trivialized H+, from the pullbacks of the
    sphere's orientation class along the two sections."""
    _check_pullback(phi_pull, b_plus, "phi pullback")
    _check_pullback(psi_pull, b_plus, "psi pullback")
    diff = phi_pull - psi_pull
    return diff if b_plus % 2 else -diff


def trivialized_context(b_plus: int, phi_pull: Element, psi_pull: Element) -> SphereContext:
    """Section data for a product bundle: tau_phi = nu - phi^*nu, and e_phi is
    the pulled back Euler class of the sphere (2 nu or 0)."""
    lam = psi_pull - phi_pull
    k = 2 if b_plus % 2 else 0
    return SphereContext(b_plus, phi_pull * k, psi_pull * k, lam)


# -- torus wall crossing ---------------------------------------------------------

@dataclass(frozen=True)
class TorusWallInput:
    b1: int
    d: int
    M: tuple

    def __post_init__(self):
        M = tuple(tuple(int(v) for v in row) for row in self.M)
        object.__setattr__(self, "M", M)
        if self.b1 <= 0 or self.b1 % 2:
            raise OddB1(f"b1 must be a positive even integer, got {self.b1}")
        if len(M) != self.b1 or any(len(r) != self.b1 for r in M):
            raise NonAntisymmetricM(f"M must be {self.b1}x{self.b1}")
        for i in range(self.b1):
            for j in range(self.b1):
                if M[i][j] != -M[j][i]:
                    raise NonAntisymmetricM(f"M[{i}][{j}] != -M[{j}][{i}]")

    @classmethod
    def from_json(cls, obj) -> "TorusWallInput":
        try:
            return cls(int(obj["b1"]), int(obj.get("d", 0)), tuple(obj["M"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise BadSchema(f"bad torus input: {exc}") from None

    def to_json(self) -> dict:
        return {"b1": self.b1, "d": self.d, "M": [list(r) for r in self.M]}


@lru_cache(maxsize=None)
def torus_ring(b1: int) -> Ring:
    """Exterior algebra on x_1..x_b1 over Q; integration reads x_1...x_b1."""
    gens = tuple((f"x{i}", 1) for i in range(1, b1 + 1))
    return Ring(RingPresentation(coeff="Q", gens=gens, trunc=b1))


@lru_cache(maxsize=None)
def product_ring(b1: int) -> Ring:
    """Cohomology of torus times X seen through the classes we need:
    x_i from the torus, y_i and c from X, with any four y's multiplying to zero."""
    xs = tuple((f"x{i}", 1) for i in range(1, b1 + 1))
    ys = tuple((f"y{i}", 1) for i in range(1, b1 + 1))
    caps = ((tuple(n for n, _ in ys), 3),)
    return Ring(RingPresentation(coeff="Q", gens=xs + ys + (("c", 2),),
                                 rules=(("c", 3, None),), trunc=b1 + 4, caps=caps))


def _fiber_integral(a: Element, inp: TorusWallInput, target: Ring, c_squared=0) -> Element:
    """Integrate over X: base classes stay on the left, and the fiber part
    y_i y_j c integrates to M[i][j], c^2 to ``c_squared``."""
    b1 = inp.b1
    terms = {}
    for exps, coef in a.terms.items():
        xe, ye, ce = exps[:b1], exps[b1:2 * b1], exps[2 * b1]
        ys = [i for i, e in enumerate(ye) if e]
        if len(ys) + 2 * ce != 4:
            continue
        if ce == 1 and len(ys) == 2:
            val = inp.M[ys[0]][ys[1]]
        elif ce == 2 and not ys:
            val = c_squared
        else:
            val = 0
        if val:
            terms[xe] = terms.get(xe, 0) + coef * val
    return target.element(terms)


def _omega(P: Ring, b1: int) -> Element:
    om = P.zero
    for i in range(1, b1 + 1):
        om = om + P.gen(f"x{i}") * P.gen(f"y{i}")
    return om


@lru_cache(maxsize=None)
def _alpha_kernel(b1: int) -> tuple:
    """c * Omega^2 in the product ring, flattened to (torus exponents, i, j,
    coefficient) for each term c y_i y_j.  Independent of M, so cached."""
    P = product_ring(b1)
    om = _omega(P, b1)
    out = []
    for exps, coef in (P.gen("c") * om * om).terms.items():
        ye = exps[b1:2 * b1]
        ys = [i for i, e in enumerate(ye) if e]
        if exps[2 * b1] == 1 and len(ys) == 2:
            out.append((exps[:b1], ys[0], ys[1], coef))
    return tuple(out)


def torus_alpha(inp: TorusWallInput) -> Element:
    """alpha = integral over X of (c/2)(Omega^2/2)."""
    M = inp.M
    terms: dict = {}
    for xe, i, j, coef in _alpha_kernel(inp.b1):
        v = M[i][j]
        if v:
            terms[xe] = terms.get(xe, 0) + coef * v
    return torus_ring(inp.b1).element(terms).scale(Fraction(1, 4))


def chern_character_D_torus(inp: TorusWallInput) -> Element:
    """Ch(D) = d + (1/4) integral of c Omega^2 over X."""
    T = torus_ring(inp.b1)
    return T.scalar(inp.d) + torus_alpha(inp)


def segre_from_chern_character(ch: Element, max_j: int) -> list:
    """s(V) = exp(sum (-1)^n p_n / n) where ch = sum p_n / n!."""
    ring = ch.ring
    arg = ring.zero
    for n in range(1, max_j + 1):
        pn = ch.graded_part(2 * n) * factorial(n)
        if pn:
            arg = arg + pn * Fraction((-1) ** n, n)
    total = arg.exp()
    return [total.graded_part(2 * j) for j in range(max_j + 1)]


def torus_segre(inp: TorusWallInput) -> list:
    """s_j(D) = (-1)^j alpha^j / j! for j = 0..b1/2."""
    alpha = torus_alpha(inp)
    n = inp.b1 // 2
    return [(alpha ** j) * Fraction((-1) ** j, factorial(j)) for j in range(n + 1)]


def unparam_wall_crossing(inp: TorusWallInput) -> Fraction:
    """SW^+ - SW^- = (1/(b1/2)!) * integral over the torus of (-alpha)^(b1/2)."""
    n = inp.b1 // 2
    alpha = torus_alpha(inp)
    val = ((-alpha) ** n).top_coefficient()
    return Fraction(val) / factorial(n)


def torus_wall_report(inp: TorusWallInput) -> dict:
    """Jump by the alpha formula, cross-checked against the Segre class
    recovered from the Chern character through the general formula."""
    n = inp.b1 // 2
    alpha = torus_alpha(inp)
    jump = unparam_wall_crossing(inp)
    ch = chern_character_D_torus(inp)
    s = segre_from_chern_character(ch, n)
    obs = ch.ring.one  # Obs(+,-) = 1 for b+ = 1
    diff = wall_difference(inp.d - 1 + n, inp.d, obs, s)
    via_segre = Fraction(diff.top_coefficient())
    agree = via_segre == jump
    if not agree:
        raise RouteDisagreement(f"torus jump {jump} disagrees with Segre route {via_segre}")
    return {
        "b1": inp.b1,
        "d": inp.d,
        "alpha": str(alpha),
        "alpha_json": alpha.to_json(),
        "chern_character": str(ch),
        "jump": str(jump),
        "routes": ["alpha-power", "segre-from-chern-character"],
        "cross_check": agree,
        "orientation": "integral of x1*x2*...*x_b1 is +1",
    }
