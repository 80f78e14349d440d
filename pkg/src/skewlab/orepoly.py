"""Skew polynomials with left coefficients: x a = sigma(a) x + delta(a).

OrePoly stores a dense coefficient list (constant term first, trailing
zeros stripped).  Multiplication precomputes the chain x^i * g by
repeated application of the single-step rule, so a product costs
deg(f) applications of sigma and delta per coefficient of g rather
than a fresh expansion per monomial.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import ContextMismatch, RingMismatch
from .rings import Ring, RingElem
from .twists import Endo, SigmaDeriv, ZeroDeriv, deriv_zero


class OreContext:
    """A coefficient ring with its twist pair and the variable name."""

    def __init__(
        self,
        ring: Ring,
        sigma: Endo,
        delta: SigmaDeriv | None = None,
        var: str = "x",
    ) -> None:
        if sigma.ring != ring:
            raise ContextMismatch("sigma must act on the coefficient ring")
        if delta is None:
            delta = deriv_zero(sigma)
        if delta.ring != ring:
            raise ContextMismatch("delta must act on the coefficient ring")
        if not delta.is_zero_kind and delta.sigma is not sigma:
            raise ContextMismatch("delta must be twisted against this sigma")
        self.ring = ring
        self.sigma = sigma
        self.delta = delta
        self.var = var
        self._delta_zero = delta.is_zero_kind

    def __eq__(self, other):
        return self is other or (
            isinstance(other, OreContext)
            and self.ring == other.ring
            and self.sigma is other.sigma
            and self.delta is other.delta
            and self.var == other.var
        )

    def __hash__(self):
        return id(self.sigma)

    def zero(self) -> "OrePoly":
        return OrePoly(self, [])

    def one(self) -> "OrePoly":
        return OrePoly(self, [self.ring.one()])

    def x(self, power: int = 1) -> "OrePoly":
        return OrePoly(
            self, [self.ring.zero()] * power + [self.ring.one()]
        )

    def constant(self, a) -> "OrePoly":
        if not isinstance(a, RingElem):
            a = self.ring.element(a)
        if a.ring != self.ring:
            raise RingMismatch("constant from a different ring")
        return OrePoly(self, [a])

    def monomial(self, coeff, power: int) -> "OrePoly":
        if not isinstance(coeff, RingElem):
            coeff = self.ring.element(coeff)
        return OrePoly(self, [self.ring.zero()] * power + [coeff])

    def x_times_elem(self, a: RingElem) -> "OrePoly":
        """The defining relation: x a = sigma(a) x + delta(a)."""
        return OrePoly(self, [self.delta.apply(a), self.sigma.apply(a)])

    def describe(self) -> str:
        d = "0" if self._delta_zero else self.delta.describe()
        return (
            f"{self.ring.name()}[{self.var}; {self.sigma.describe()}, {d}]"
        )

    def sample(self, rng: random.Random, deg: int = 3, box: int = 9) -> "OrePoly":
        coeffs = []
        d = rng.randrange(deg + 1)
        for i in range(d + 1):
            if i < d and rng.random() < 0.3:
                coeffs.append(self.ring.zero())
            else:
                coeffs.append(self.ring.sample(rng, box=box))
        return OrePoly(self, coeffs)


@dataclass(frozen=True)
class OrePoly:
    ctx: OreContext
    coeffs: tuple

    def __init__(self, ctx: OreContext, coeffs) -> None:
        ring = ctx.ring
        norm = []
        for c in coeffs:
            if not isinstance(c, RingElem):
                c = ring.element(c)
            elif c.ring != ring:
                raise RingMismatch("coefficient from a different ring")
            norm.append(c)
        while norm and ring.is_zero(norm[-1]):
            norm.pop()
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "coeffs", tuple(norm))

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    def lead(self) -> RingElem | None:
        return self.coeffs[-1] if self.coeffs else None

    def coeff(self, i: int) -> RingElem:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.ctx.ring.zero()

    def _check(self, other: "OrePoly") -> "OrePoly":
        if isinstance(other, RingElem):
            other = self.ctx.constant(other)
        elif isinstance(other, int):
            other = self.ctx.constant(self.ctx.ring.from_int(other))
        if not isinstance(other, OrePoly) or other.ctx != self.ctx:
            raise ContextMismatch("operands come from different skew contexts")
        return other

    def __add__(self, other):
        other = self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return OrePoly(
            self.ctx, [self.coeff(i) + other.coeff(i) for i in range(n)]
        )

    __radd__ = __add__

    def __neg__(self):
        return OrePoly(self.ctx, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._check(other)
        return self + (-other)

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        return ore_mul(self, other)

    def __rmul__(self, other):
        return self._check(other) * self

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined here")
        out = self.ctx.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (RingElem, int)):
            other = self._check(other)
        if not isinstance(other, OrePoly) or other.ctx != self.ctx:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        raise TypeError("skew polynomials are mutable-value-like; no hashing")

    def __repr__(self):
        return f"OrePoly({render_orepoly(self)})"


def _x_shift(p: OrePoly) -> OrePoly:
    """x * p, one application of the defining relation per coefficient."""
    ctx = p.ctx
    ring = ctx.ring
    n = len(p.coeffs)
    out = [ring.zero()] * (n + 1)
    for j, c in enumerate(p.coeffs):
        if ring.is_zero(c):
            continue
        out[j + 1] = out[j + 1] + ctx.sigma.apply(c)
        if not ctx._delta_zero:
            d = ctx.delta.apply(c)
            if not ring.is_zero(d):
                out[j] = out[j] + d
    return OrePoly(ctx, out)


def ore_mul(f: OrePoly, g: OrePoly) -> OrePoly:
    """f * g via the incremental chain x^i g."""
    ctx = f.ctx
    if g.ctx != ctx:
        raise ContextMismatch("operands come from different skew contexts")
    ring = ctx.ring
    if f.is_zero() or g.is_zero():
        return ctx.zero()
    acc = ctx.zero()
    chain = g
    for i, c in enumerate(f.coeffs):
        if not ring.is_zero(c):
            acc = acc + OrePoly(ctx, [c * d for d in chain.coeffs])
        if i + 1 < len(f.coeffs):
            chain = _x_shift(chain)
    return acc


def ore_commutator(f: OrePoly, g: OrePoly) -> OrePoly:
    return ore_mul(f, g) - ore_mul(g, f)


def render_orepoly(p: OrePoly) -> str:
    if p.is_zero():
        return "0"
    ring = p.ctx.ring
    var = p.ctx.var
    parts = []
    for i, c in enumerate(p.coeffs):
        if ring.is_zero(c):
            continue
        cs = ring.render(c)
        if i == 0:
            parts.append(cs)
            continue
        xs = var if i == 1 else f"{var}^{i}"
        if c == ring.one():
            parts.append(xs)
        else:
            if ("+" in cs or (" - " in cs) or (cs.startswith("-") and "-" in cs[1:])):
                cs = f"({cs})"
            elif any(ch in cs for ch in ", ") and not cs.startswith(("[", "(")):
                cs = f"({cs})"
            parts.append(f"{cs}*{xs}")
    return " + ".join(parts)


@dataclass
class GradedCheck:
    """Comparison of a product's top against the delta = 0 product."""

    degree_f: int
    degree_g: int
    degree_fg: int | None
    twisted_lead: str
    zero_branch: bool
    lead_matches: bool | None
    graded_matches: bool

    def as_dict(self):
        return {
            "degree_f": self.degree_f,
            "degree_g": self.degree_g,
            "degree_fg": self.degree_fg,
            "twisted_lead": self.twisted_lead,
            "zero_branch": self.zero_branch,
            "lead_matches": self.lead_matches,
            "graded_matches": self.graded_matches,
        }


def graded_lead_check(f: OrePoly, g: OrePoly) -> GradedCheck:
    """deg(fg) <= deg f + deg g, with equality iff lead(f) sigma^m(lead g) != 0.

    The same top coefficient must appear in the delta = 0 context, since
    delta only contributes below the top degree.
    """
    ctx = f.ctx
    if f.is_zero() or g.is_zero():
        raise ValueError("graded check needs nonzero operands")
    ring = ctx.ring
    m = f.degree()
    n = g.degree()
    c = f.lead() * ctx.sigma.apply_power(g.lead(), m)
    p = ore_mul(f, g)
    zero_branch = ring.is_zero(c)
    if zero_branch:
        lead_matches = None
        degree_ok = p.is_zero() or p.degree() < m + n
    else:
        lead_matches = (p.degree() == m + n) and (p.lead() == c)
        degree_ok = lead_matches
    ctx0 = OreContext(ring, ctx.sigma, None, var=ctx.var)
    f0 = OrePoly(ctx0, list(f.coeffs))
    g0 = OrePoly(ctx0, list(g.coeffs))
    p0 = ore_mul(f0, g0)
    if zero_branch:
        graded = degree_ok and (p0.is_zero() or p0.degree() < m + n)
    else:
        graded = degree_ok and (not p0.is_zero()) and p0.coeff(m + n) == c
    return GradedCheck(
        degree_f=m,
        degree_g=n,
        degree_fg=p.degree(),
        twisted_lead=ring.render(c),
        zero_branch=zero_branch,
        lead_matches=lead_matches,
        graded_matches=graded,
    )


def associativity_trial(ctx: OreContext, rng: random.Random, deg: int = 3) -> bool:
    f = ctx.sample(rng, deg=deg)
    g = ctx.sample(rng, deg=deg)
    h = ctx.sample(rng, deg=deg)
    return ore_mul(ore_mul(f, g), h) == ore_mul(f, ore_mul(g, h))
