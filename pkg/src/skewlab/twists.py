"""Ring endomorphisms and sigma-derivations over the catalog.

An Endo applies a structural map kind (identity, inner conjugation,
variable substitution, Gaussian conjugation, component shuffles of a
product, compositions, lifts to localizations) and knows, structurally,
whether it is injective and how to search for preimages.  A SigmaDeriv
is paired with the sigma it twists against.  validate_twist checks the
defining laws on generators and seeded samples and never trusts kind
tags alone.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from . import linalg
from .errors import (
    IllDefined,
    NotStable,
    RhoIllDefined,
    RingMismatch,
    Unsupported,
    UnsupportedKind,
    WitnessNotInvertible,
)
from .rings import (
    FieldRing,
    LocalizedRing,
    MatrixSubring,
    PolynomialRing,
    ProductRing,
    Ring,
    RingElem,
)
from .scalars import QI, Fraction, GaussianRational, PrimeFieldElement


class Endo:
    """Base of all ring endomorphisms."""

    kind = "abstract"

    def __init__(self, ring: Ring) -> None:
        self.ring = ring

    def apply(self, a: RingElem) -> RingElem:
        raise NotImplementedError

    def apply_power(self, a: RingElem, n: int) -> RingElem:
        for _ in range(n):
            a = self.apply(a)
        return a

    def injective(self) -> bool | None:
        """Structural decision; None means undecided at this level."""
        return None

    def preimage(self, b: RingElem) -> RingElem | None:
        """Some r with apply(r) = b, None when absence is certified."""
        raise Unsupported(f"preimage search is not available for {self.kind}")

    def power(self, n: int) -> "Endo":
        if n == 0:
            return IdentityEndo(self.ring)
        if n == 1:
            return self
        return CompositeEndo(self.ring, [self] * n)

    def describe(self) -> str:
        return self.kind


class IdentityEndo(Endo):
    kind = "identity"

    def apply(self, a):
        return a

    def injective(self):
        return True

    def preimage(self, b):
        return b


class InnerEndo(Endo):
    """sigma(r) = u^-1 r u, conjugation inside an ambient ring.

    The ring may be an entry-constrained subring of the ambient; the
    construction proves the generators stay inside, and every later
    apply re-checks membership so instability never passes silently.
    """

    kind = "inner"

    def __init__(self, ring: Ring, u: RingElem, ambient: Ring | None = None) -> None:
        super().__init__(ring)
        self.ambient = ambient if ambient is not None else ring
        if u.ring == self.ring and self.ambient != self.ring:
            u = self.ring.to_ambient(u)
        if u.ring != self.ambient:
            raise RingMismatch("adjoint element must live in the ambient ring")
        uinv = self.ambient.inverse(u)
        if uinv is None:
            raise WitnessNotInvertible(
                f"{self.ambient.render(u)} is not invertible in {self.ambient.name()}"
            )
        self.u = u
        self.uinv = uinv
        for g in ring.generators():
            self.apply(g)  # raises NotStable on escape

    def _conj(self, amb: RingElem) -> RingElem:
        return self.uinv * amb * self.u

    def apply(self, a):
        if self.ambient == self.ring:
            return self._conj(a)
        amb = self.ring.to_ambient(a)
        res = self._conj(amb)
        try:
            return self.ring.from_ambient(res)
        except RingMismatch as exc:
            raise NotStable(
                f"conjugation by {self.ambient.render(self.u)} leaves "
                f"{self.ring.name()}: sigma({self.ring.render(a)}) = "
                f"{self.ambient.render(res)}"
            ) from exc

    def injective(self):
        return True

    def preimage(self, b):
        if self.ambient == self.ring:
            return self.u * b * self.uinv
        amb = self.ring.to_ambient(b)
        res = self.u * amb * self.uinv
        try:
            return self.ring.from_ambient(res)
        except RingMismatch:
            return None  # unique ambient preimage misses the subring

    def describe(self):
        return f"inner(u = {self.ambient.render(self.u)})"


class VarMapEndo(Endo):
    """Variable substitution y_i -> y_j or 0 on a polynomial ring."""

    kind = "var_map"

    def __init__(self, ring: PolynomialRing, images: list[int | None]) -> None:
        super().__init__(ring)
        if not isinstance(ring, PolynomialRing):
            raise UnsupportedKind("variable maps need a polynomial ring")
        if len(images) != ring.nvars():
            raise UnsupportedKind("one image per variable required")
        for im in images:
            if im is not None and not (0 <= im < ring.nvars()):
                raise UnsupportedKind(f"image index {im} out of range")
        if ring.truncate is not None:
            if images[0] not in (None, 0):
                raise IllDefined("truncated ring admits only t -> t or t -> 0")
        self.images = list(images)

    def apply(self, a):
        out = self.ring.zero()
        for mono, c in a.payload.items():
            new = [0] * self.ring.nvars()
            dead = False
            for i, e in enumerate(mono):
                if e == 0:
                    continue
                if self.images[i] is None:
                    dead = True
                    break
                new[self.images[i]] += e
            if not dead:
                out = out + self.ring.element({tuple(new): c})
        return out

    def injective(self):
        live = [im for im in self.images if im is not None]
        return len(live) == self.ring.nvars() and len(set(live)) == len(live)

    def injective_on_survivors(self, killed: set[int]) -> bool:
        live = [im for i, im in enumerate(self.images) if i not in killed]
        live = [im for im in live if im is not None]
        return len(live) == len(set(live))

    def preimage(self, b):
        live = [im for im in self.images if im is not None]
        if len(set(live)) != len(live):
            raise Unsupported("preimage under a merging variable map")
        inv = {im: i for i, im in enumerate(self.images) if im is not None}
        out = self.ring.zero()
        for mono, c in b.payload.items():
            new = [0] * self.ring.nvars()
            for i, e in enumerate(mono):
                if e == 0:
                    continue
                if i not in inv:
                    return None  # support touches a variable outside the image
                new[inv[i]] += e
            out = out + self.ring.element({tuple(new): c})
        return out

    def describe(self):
        parts = []
        for i, im in enumerate(self.images):
            tgt = "0" if im is None else self.ring.variables[im]
            parts.append(f"{self.ring.variables[i]} -> {tgt}")
        return "var_map(" + ", ".join(parts) + ")"


class ConjEndo(Endo):
    """a + b*i -> a - b*i on the Gaussian rational field."""

    kind = "conjugation"

    def __init__(self, ring: FieldRing) -> None:
        super().__init__(ring)
        if not (isinstance(ring, FieldRing) and ring.field is QI):
            raise UnsupportedKind("conjugation lives on Q(i)")

    def apply(self, a):
        return self.ring.element(a.payload.conjugate())

    def injective(self):
        return True

    def preimage(self, b):
        return self.apply(b)


class ComponentEndo(Endo):
    """sigma(r)_j = tau_j(r_(src[j])) on a finite product."""

    kind = "component_map"

    def __init__(
        self, ring: ProductRing, src: list[int], comps: list[Endo] | None = None
    ) -> None:
        super().__init__(ring)
        if not isinstance(ring, ProductRing):
            raise UnsupportedKind("component maps need a product ring")
        s = ring.size()
        if len(src) != s or any(not (0 <= i < s) for i in src):
            raise UnsupportedKind("src must name one source component per slot")
        if comps is None:
            comps = [IdentityEndo(ring.components[src[j]]) for j in range(s)]
        if len(comps) != s:
            raise UnsupportedKind("one component endo per slot required")
        for j, tau in enumerate(comps):
            if tau.ring != ring.components[src[j]]:
                raise RingMismatch(f"slot {j}: endo domain mismatch")
            if ring.components[j] != ring.components[src[j]]:
                raise UnsupportedKind(
                    f"slot {j} mixes distinct component rings"
                )
        self.src = list(src)
        self.comps = list(comps)

    def apply(self, a):
        parts = []
        for j in range(self.ring.size()):
            val = self.comps[j].apply(a.payload[self.src[j]])
            parts.append(self.ring.components[j].element(val.payload))
        return RingElem(self.ring, tuple(parts))

    def injective(self):
        s = self.ring.size()
        if sorted(self.src) != list(range(s)):
            return False  # some component is discarded or duplicated
        flags = [t.injective() for t in self.comps]
        if all(f is True for f in flags):
            return True
        if any(f is False for f in flags):
            return False
        return None

    def rho(self) -> list[int]:
        """Input component -> output block, when single-valued."""
        out = []
        for i in range(self.ring.size()):
            js = [j for j, s in enumerate(self.src) if s == i]
            if len(js) != 1:
                raise RhoIllDefined(
                    f"sigma sends component {i + 1} to "
                    f"{len(js)} blocks ({[j + 1 for j in js]})"
                )
            out.append(js[0])
        return out

    def preimage(self, b):
        s = self.ring.size()
        if sorted(self.src) != list(range(s)):
            return None
        parts: list = [None] * s
        for j in range(s):
            p = self.comps[j].preimage(b.payload[j])
            if p is None:
                return None
            parts[self.src[j]] = p
        return RingElem(self.ring, tuple(parts))

    def describe(self):
        return f"component_map(src = {[i + 1 for i in self.src]}, " + ", ".join(
            t.describe() for t in self.comps
        ) + ")"


class CompositeEndo(Endo):
    kind = "composite"

    def __init__(self, ring: Ring, parts: list[Endo]) -> None:
        super().__init__(ring)
        for p in parts:
            if p.ring != ring:
                raise RingMismatch("composite parts must share the ring")
        self.parts = list(parts)

    def apply(self, a):
        for p in self.parts:
            a = p.apply(a)
        return a

    def injective(self):
        flags = [p.injective() for p in self.parts]
        if all(f is True for f in flags):
            return True
        if any(f is False for f in flags):
            return False
        return None

    def preimage(self, b):
        for p in reversed(self.parts):
            b = p.preimage(b)
            if b is None:
                return None
        return b

    def describe(self):
        return " then ".join(p.describe() for p in self.parts)


class LinearEndo(Endo):
    """Additive-only monomial map; a negative control for the validator."""

    kind = "linear"

    def __init__(self, ring: PolynomialRing, images: dict) -> None:
        super().__init__(ring)
        self.images = {tuple(k): v for k, v in images.items()}

    def apply(self, a):
        out = self.ring.zero()
        for mono, c in a.payload.items():
            img = self.images.get(mono)
            if img is None:
                img = self.ring.element({mono: self.ring.field.one()})
            out = out + self.ring.element(
                {m: c * cc for m, cc in img.payload.items()}
            )
        return out


class LiftedEndo(Endo):
    """Extension of a base endo to base[u^-1]; needs sigma(u) = u."""

    kind = "localization_lift"

    def __init__(self, ring: LocalizedRing, base: Endo, scale_bound: int = 8) -> None:
        super().__init__(ring)
        if base.ring != ring.base:
            raise RingMismatch("lift needs an endo of the base ring")
        if not (base.apply(ring.u) == ring.u):
            raise UnsupportedKind("lift requires sigma(u) = u")
        self.base = base
        self.scale_bound = scale_bound

    def apply(self, a):
        num, k = a.payload
        return self.ring.element((self.base.apply(num), k))

    def injective(self):
        return self.base.injective()

    def preimage(self, b):
        num, k = b.payload
        scaled = num
        for j in range(self.scale_bound + 1):
            try:
                p = self.base.preimage(scaled)
            except Unsupported:
                return None
            if p is not None:
                return self.ring.element((p, k + j))
            scaled = scaled * self.ring.u
        return None

    def describe(self):
        return f"lift({self.base.describe()})"


def endo_identity(ring: Ring) -> Endo:
    return IdentityEndo(ring)


def endo_inner(ring: Ring, u: RingElem, ambient: Ring | None = None) -> Endo:
    return InnerEndo(ring, u, ambient)


def endo_var_map(ring: PolynomialRing, images) -> Endo:
    """images: list of indices/None, or {var name: var name | None}."""
    if isinstance(images, dict):
        lst: list[int | None] = []
        for v in ring.variables:
            img = images.get(v, v)
            lst.append(None if img in (None, "0", 0) else ring.variables.index(img))
        images = lst
    return VarMapEndo(ring, images)


def shift_endo(ring: PolynomialRing) -> Endo:
    """y_1 -> 0, y_k -> y_(k-1): the downward shift."""
    return VarMapEndo(ring, [None] + list(range(ring.nvars() - 1)))


def endo_conj(ring: Ring) -> Endo:
    if isinstance(ring, FieldRing):
        return ConjEndo(ring)
    if isinstance(ring, ProductRing):
        return ComponentEndo(
            ring,
            list(range(ring.size())),
            [ConjEndo(c) for c in ring.components],
        )
    raise UnsupportedKind("conjugation needs Q(i) or a product of Q(i) factors")


def endo_component(ring: ProductRing, src: list[int], comps=None) -> Endo:
    return ComponentEndo(ring, src, comps)


def endo_lift(ring: LocalizedRing, base: Endo) -> Endo:
    return LiftedEndo(ring, base)


# ---------------------------------------------------------------------------


class SigmaDeriv:
    """Base of sigma-derivations: additive, delta(ab) = sigma(a)delta(b) + delta(a)b."""

    kind = "abstract"

    def __init__(self, ring: Ring, sigma: Endo) -> None:
        if sigma.ring != ring:
            raise RingMismatch("delta and sigma must share the ring")
        self.ring = ring
        self.sigma = sigma

    @property
    def is_zero_kind(self) -> bool:
        return isinstance(self, ZeroDeriv)

    def apply(self, a: RingElem) -> RingElem:
        raise NotImplementedError

    def apply_power(self, a: RingElem, n: int) -> RingElem:
        for _ in range(n):
            a = self.apply(a)
        return a

    def describe(self) -> str:
        return self.kind


class ZeroDeriv(SigmaDeriv):
    kind = "zero"

    def apply(self, a):
        return self.ring.zero()


class InnerDeriv(SigmaDeriv):
    """delta(r) = b r - sigma^power(r) b."""

    kind = "inner"

    def __init__(self, ring: Ring, sigma: Endo, b: RingElem, power: int = 1) -> None:
        super().__init__(ring, sigma)
        if b.ring != ring:
            raise RingMismatch("adjoint element must belong to the ring")
        self.b = b
        self.power = power

    def apply(self, a):
        return self.b * a - self.sigma.apply_power(a, self.power) * self.b

    def describe(self):
        tag = f"sigma^{self.power}" if self.power != 1 else "sigma"
        return f"inner(b = {self.ring.render(self.b)}, {tag})"


class PartialDeriv(SigmaDeriv):
    """Formal d/dy on a polynomial ring, sigma = identity.

    On a truncated ring F[t]/(t^k) the map descends iff k = 0 in F,
    since d(t^k) = k t^(k-1) must land back in the ideal.
    """

    kind = "partial"

    def __init__(self, ring: PolynomialRing, var, sigma: Endo | None = None) -> None:
        if sigma is None:
            sigma = IdentityEndo(ring)
        if not isinstance(sigma, IdentityEndo):
            raise UnsupportedKind("formal partials pair with sigma = identity")
        super().__init__(ring, sigma)
        if not isinstance(ring, PolynomialRing):
            raise UnsupportedKind("formal partials need a polynomial ring")
        self.var = var if isinstance(var, int) else ring.variables.index(var)
        if ring.truncate is not None and self.var == 0:
            k = ring.truncate
            if ring.char == 0 or k % ring.char != 0:
                raise IllDefined(
                    f"d({ring.variables[0]}^{k}) = {k}*"
                    f"{ring.variables[0]}^{k - 1} does not vanish in "
                    f"characteristic {ring.char}; the map does not descend"
                )

    def apply(self, a):
        out = {}
        for mono, c in a.payload.items():
            e = mono[self.var]
            if e == 0:
                continue
            m = tuple(x - 1 if i == self.var else x for i, x in enumerate(mono))
            out[m] = out.get(m, self.ring.field.zero()) + c * self.ring.field.from_int(e)
        return self.ring.element(out)

    def describe(self):
        return f"d/d{self.ring.variables[self.var]}"


class ComponentDeriv(SigmaDeriv):
    """Componentwise derivations; sigma must act slot-by-slot."""

    kind = "component_map"

    def __init__(self, ring: ProductRing, sigma: Endo, derivs: list[SigmaDeriv]) -> None:
        super().__init__(ring, sigma)
        ok = isinstance(sigma, IdentityEndo) or (
            isinstance(sigma, ComponentEndo)
            and sigma.src == list(range(ring.size()))
        )
        if not ok:
            raise UnsupportedKind(
                "componentwise delta needs sigma acting slot-by-slot"
            )
        if len(derivs) != ring.size():
            raise UnsupportedKind("one derivation per component required")
        self.derivs = list(derivs)

    def apply(self, a):
        parts = tuple(d.apply(p) for d, p in zip(self.derivs, a.payload))
        return RingElem(self.ring, parts)


class LinearDeriv(SigmaDeriv):
    """Monomial-basis map with default image 0; a Leibniz negative control."""

    kind = "linear"

    def __init__(self, ring: PolynomialRing, sigma: Endo, images: dict) -> None:
        super().__init__(ring, sigma)
        self.images = {tuple(k): v for k, v in images.items()}

    def apply(self, a):
        out = self.ring.zero()
        for mono, c in a.payload.items():
            img = self.images.get(mono)
            if img is not None:
                out = out + self.ring.element(
                    {m: c * cc for m, cc in img.payload.items()}
                )
        return out


def deriv_zero(sigma: Endo) -> SigmaDeriv:
    return ZeroDeriv(sigma.ring, sigma)


def deriv_inner(sigma: Endo, b: RingElem, power: int = 1) -> SigmaDeriv:
    return InnerDeriv(sigma.ring, sigma, b, power)


def deriv_partial(ring: PolynomialRing, var, sigma: Endo | None = None) -> SigmaDeriv:
    return PartialDeriv(ring, var, sigma)


def deriv_component(sigma: Endo, derivs: list[SigmaDeriv]) -> SigmaDeriv:
    return ComponentDeriv(sigma.ring, sigma, derivs)


# ---------------------------------------------------------------------------


@dataclass
class TwistReport:
    ok: bool
    laws: dict
    injective: bool | None
    counterexample: dict | None
    samples: int
    seed: int

    def as_dict(self):
        return {
            "ok": self.ok,
            "laws": dict(self.laws),
            "injective": self.injective,
            "counterexample": self.counterexample,
            "samples": self.samples,
            "seed": self.seed,
        }


def _sample_pool(ring: Ring, rng, samples: int) -> list[RingElem]:
    pool = list(ring.generators())[:12]
    for _ in range(max(4, samples // 4)):
        pool.append(ring.sample(rng))
    return pool


def validate_twist(
    sigma: Endo,
    delta: SigmaDeriv | None = None,
    samples: int = 64,
    seed: int = 0,
) -> TwistReport:
    """Check the endo and derivation laws on generators plus seeded samples."""
    ring = sigma.ring
    if delta is not None and delta.ring != ring:
        raise RingMismatch("sigma and delta must live on one ring")
    rng = random.Random(seed)
    pool = _sample_pool(ring, rng, samples)
    pairs = list(itertools.product(pool[:8], pool[:8]))
    while len(pairs) < samples:
        pairs.append((pool[rng.randrange(len(pool))], pool[rng.randrange(len(pool))]))
    pairs = pairs[:max(samples, len(pool[:8]) ** 2)]

    laws = {}
    counterexample = None

    def record(law: str, a, b, lhs, rhs) -> bool:
        nonlocal counterexample
        good = lhs == rhs
        laws[law] = laws.get(law, True) and good
        if not good and counterexample is None:
            counterexample = {
                "law": law,
                "a": ring.render(a) if a is not None else None,
                "b": ring.render(b) if b is not None else None,
                "lhs": ring.render(lhs),
                "rhs": ring.render(rhs),
            }
        return good

    record("sigma(1) = 1", None, None, sigma.apply(ring.one()), ring.one())
    if delta is not None:
        record("delta(1) = 0", None, None, delta.apply(ring.one()), ring.zero())
    for a, b in pairs:
        record(
            "sigma additive", a, b,
            sigma.apply(a + b), sigma.apply(a) + sigma.apply(b),
        )
        record(
            "sigma multiplicative", a, b,
            sigma.apply(a * b), sigma.apply(a) * sigma.apply(b),
        )
        if delta is not None:
            record(
                "delta additive", a, b,
                delta.apply(a + b), delta.apply(a) + delta.apply(b),
            )
            record(
                "delta Leibniz", a, b,
                delta.apply(a * b),
                sigma.apply(a) * delta.apply(b) + delta.apply(a) * b,
            )

    injective = sigma.injective()
    if injective is None:
        basis = ring.basis()
        if basis is not None:
            mat = [ring.to_vector(sigma.apply(e)) for e in basis]
            injective = linalg.rank(ring.prime_field, mat) == len(basis)

    return TwistReport(
        ok=all(laws.values()),
        laws=laws,
        injective=injective,
        counterexample=counterexample,
        samples=len(pairs),
        seed=seed,
    )


# ---------------------------------------------------------------------------


@dataclass
class FixedSubalgebra:
    """Basis of {z in Z(R) : sigma(z) = z, delta(z) = 0}."""

    ring: Ring
    basis: list
    center_basis: list

    def dim(self) -> int:
        return len(self.basis)

    def as_dict(self):
        return {
            "dim": self.dim(),
            "basis": [self.ring.render(b) for b in self.basis],
            "center_dim": len(self.center_basis),
        }


def _coords_in_span(ring: Ring, span: list[RingElem], target: RingElem):
    field = ring.prime_field
    cols = [ring.to_vector(s) for s in span]
    mat = [[cols[j][i] for j in range(len(span))] for i in range(len(cols[0]))]
    return linalg.solve(field, mat, ring.to_vector(target))


def fixed_subalgebra(sigma: Endo, delta: SigmaDeriv | None = None) -> FixedSubalgebra:
    from .errors import CenterNotStable

    ring = sigma.ring
    if ring.basis() is None:
        raise Unsupported("fixed subalgebra needs a finite-dimensional ring")
    zs, is_vector = ring.center()
    if not is_vector:
        raise Unsupported("fixed subalgebra needs a vector-space center basis")
    field = ring.prime_field
    smat = []
    dmat = []
    for z in zs:
        sz = sigma.apply(z)
        coords = _coords_in_span(ring, zs, sz)
        if coords is None:
            raise CenterNotStable(
                f"sigma({ring.render(z)}) = {ring.render(sz)} leaves the center span"
            )
        smat.append(coords)
        if delta is not None and not delta.is_zero_kind:
            dz = delta.apply(z)
            dcoords = _coords_in_span(ring, zs, dz)
            if dcoords is None:
                raise CenterNotStable(
                    f"delta({ring.render(z)}) leaves the center span"
                )
            dmat.append(dcoords)

    k = len(zs)
    rows = []
    for i in range(k):  # (sigma - id) columns, transposed into equations
        rows.append([smat[j][i] - (field.one() if i == j else field.zero())
                     for j in range(k)])
    if dmat:
        for i in range(k):
            rows.append([dmat[j][i] for j in range(k)])
    null = linalg.nullspace(field, rows)
    basis = []
    for v in null:
        elem = ring.zero()
        for c, z in zip(v, zs):
            if c != field.zero():
                elem = elem + _scale(ring, z, c)
        basis.append(elem)
    return FixedSubalgebra(ring, basis, zs)


def _scale(ring: Ring, elem: RingElem, c) -> RingElem:
    """c * elem for a prime-field scalar c, via coordinates."""
    vec = ring.to_vector(elem)
    return ring.from_vector([c * x for x in vec])


def endo_order_on_center(sigma: Endo, bound: int = 24) -> int | None:
    """Least n <= bound with sigma^n = id on the center, else None."""
    ring = sigma.ring
    zs, _ = ring.center()
    cur = list(zs)
    for n in range(1, bound + 1):
        cur = [sigma.apply(z) for z in cur]
        if all(a == b for a, b in zip(cur, zs)):
            return n
    return None


# ---------------------------------------------------------------------------


@dataclass
class InnerWitness:
    """w with tau(r) w = w r; normalized is the sigma-fixed norm form."""

    w: object
    normalized: object | None = None
    normalized_power: int | None = None

    def as_dict(self):
        ring = self.w.ring
        return {
            "w": ring.render(self.w),
            "normalized": ring.render(self.normalized) if self.normalized is not None else None,
            "normalized_power": self.normalized_power,
        }


def _coord_key(ring: Ring, elem: RingElem):
    out = []
    for x in ring.to_vector(elem):
        if isinstance(x, Fraction):
            out.append((x,))
        elif isinstance(x, PrimeFieldElement):
            out.append((Fraction(x.v),))
        elif isinstance(x, GaussianRational):
            out.append((x.re, x.im))
        else:
            out.append((Fraction(0),))
    return tuple(out)


def inner_auto_witness(
    tau: Endo,
    sigma: Endo | None = None,
    power: int | None = None,
    scan_limit: int = 6,
) -> InnerWitness | None:
    """Solve tau(r) w = w r for invertible w over the ring basis.

    The nullspace of the linear system is scanned over all 0/1/-1
    combinations of up to scan_limit basis vectors; among the invertible
    hits the one with the smallest coordinate key is returned.  When
    sigma and a power n with sigma^n = tau are supplied, the witness is
    post-processed to the norm form w sigma(w) ... sigma^(n-1)(w), which
    is sigma-fixed and witnesses sigma^(n^2).
    """
    ring = tau.ring
    basis = ring.basis()
    if basis is None:
        raise Unsupported("witness solving needs a finite-dimensional ring")
    field = ring.prime_field
    d = len(basis)
    rows = []
    for r in basis:
        tr = tau.apply(r)
        cols = [ring.to_vector(tr * e - e * r) for e in basis]
        for i in range(d):
            rows.append([cols[j][i] for j in range(d)])
    null = linalg.nullspace(field, rows)
    if not null:
        return None
    scan = null[:scan_limit]
    candidates = []
    for combo in itertools.product((0, 1, -1), repeat=len(scan)):
        if all(c == 0 for c in combo):
            continue
        vec = [field.zero()] * d
        for c, nv in zip(combo, scan):
            if c:
                vec = [x + field.from_int(c) * y for x, y in zip(vec, nv)]
        w = ring.from_vector(vec)
        if ring.is_zero(w):
            continue
        if ring.inverse(w) is not None:
            candidates.append(w)
    if not candidates:
        return None
    w = min(candidates, key=lambda e: _coord_key(ring, e))
    witness = InnerWitness(w)
    if sigma is not None and power is not None and power >= 1:
        prod = ring.one()
        cur = w
        for _ in range(power):
            prod = prod * cur
            cur = sigma.apply(cur)
        if sigma.apply(prod) == prod and ring.inverse(prod) is not None:
            ok = all(
                tau.apply_power(r, power) * prod == prod * r for r in basis
            )
            if ok:
                witness.normalized = prod
                witness.normalized_power = power * power
    return witness
