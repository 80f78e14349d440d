"""Coefficient ring catalog with exact element arithmetic.

The closed catalog: exact fields, (truncated) polynomial rings,
constant-constrained univariate polynomial rings like Z + x*Q[x],
full matrix rings, entry-constrained matrix subrings, finite products,
and localization at a central regular element.  Every element has one
canonical form, so == is decidable equality and reports are stable.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .errors import (
    BadIdempotents,
    BadLiteral,
    ClosureViolation,
    NotASubringOf,
    NotCentral,
    NotRegular,
    RingMismatch,
    Unsupported,
    UnsupportedKind,
)
from .scalars import (
    GF,
    QI,
    QQ,
    GaussianRational,
    PrimeFieldElement,
    ScalarField,
    field_by_name,
    is_dyadic,
    is_integer,
    render_scalar,
)


class RingElem:
    """An element of one catalog ring; arithmetic delegates to the ring."""

    __slots__ = ("ring", "payload")

    def __init__(self, ring: "Ring", payload) -> None:
        self.ring = ring
        self.payload = payload

    def _other(self, other) -> "RingElem":
        if isinstance(other, RingElem):
            if other.ring is self.ring or other.ring == self.ring:
                return other
            raise RingMismatch(
                f"elements of {self.ring} and {other.ring} cannot be combined"
            )
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.ring.add(self, o)

    __radd__ = __add__

    def __neg__(self):
        return self.ring.neg(self)

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.ring.add(self, self.ring.neg(o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.ring.add(o, self.ring.neg(self))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.ring.mul(self, o)

    def __rmul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.ring.mul(o, self)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not ring operations")
        out = self.ring.one()
        base = self
        for _ in range(n):
            out = out * base
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            return self.ring.eq(self, self.ring.from_int(other))
        if not isinstance(other, RingElem):
            return NotImplemented
        if compatible_payloads(self.ring, other.ring):
            return payload_eq(self.ring, self.payload, other.payload)
        return NotImplemented

    def __bool__(self):
        return not self.ring.is_zero(self)

    def __repr__(self):
        return self.ring.render(self)

    def __hash__(self):
        raise TypeError("ring elements are not hashable")


def compatible_payloads(r1: "Ring", r2: "Ring") -> bool:
    """Same ring, or subring/ambient pairs sharing one payload space."""
    if r1 is r2 or r1 == r2:
        return True
    a1 = getattr(r1, "ambient", None)
    a2 = getattr(r2, "ambient", None)
    return a1 == r2 or a2 == r1 or (a1 is not None and a1 == a2)


def payload_eq(ring: "Ring", p1, p2) -> bool:
    return ring.payload_equal(p1, p2)


class Ring:
    kind = "abstract"
    is_commutative = False
    is_domain = False
    is_prime_ring = False

    def __init__(self) -> None:
        self.char = 0
        self.prime_field: ScalarField = QQ

    # -- construction ------------------------------------------------
    def element(self, payload) -> RingElem:
        return RingElem(self, self.canonical(payload))

    def canonical(self, payload):
        raise NotImplementedError

    def from_int(self, n: int) -> RingElem:
        raise NotImplementedError

    def zero(self) -> RingElem:
        return self.from_int(0)

    def one(self) -> RingElem:
        return self.from_int(1)

    # -- arithmetic ----------------------------------------------------
    def add(self, a: RingElem, b: RingElem) -> RingElem:
        raise NotImplementedError

    def neg(self, a: RingElem) -> RingElem:
        raise NotImplementedError

    def mul(self, a: RingElem, b: RingElem) -> RingElem:
        raise NotImplementedError

    def payload_equal(self, p1, p2) -> bool:
        raise NotImplementedError

    def eq(self, a: RingElem, b: RingElem) -> bool:
        return self.payload_equal(a.payload, b.payload)

    def is_zero(self, a: RingElem) -> bool:
        return self.payload_equal(a.payload, self.zero().payload)

    # -- structure -----------------------------------------------------
    def generators(self) -> list[RingElem]:
        raise NotImplementedError

    def basis(self) -> list[RingElem] | None:
        """Vector-space basis over the prime field, when finite."""
        return None

    def to_vector(self, a: RingElem) -> list:
        raise Unsupported(f"{self} carries no finite basis")

    def from_vector(self, vec: list) -> RingElem:
        raise Unsupported(f"{self} carries no finite basis")

    def center(self) -> tuple[list[RingElem], bool]:
        """(spanning elements, True when they are a vector-space basis)."""
        raise Unsupported(f"center description unavailable for {self}")

    def is_regular(self, a: RingElem) -> bool:
        raise NotImplementedError

    def inverse(self, a: RingElem) -> RingElem | None:
        """Two-sided inverse, or None when a is not invertible."""
        b = self.basis()
        if b is None:
            raise Unsupported(f"inverse search needs a finite basis on {self}")
        f = self.prime_field
        cols = [self.to_vector(a * e) for e in b]
        mat = [[cols[j][i] for j in range(len(b))] for i in range(len(cols[0]))]
        sol = linalg.solve(f, mat, self.to_vector(self.one()))
        if sol is None:
            return None
        cand = self.from_vector(sol)
        if cand * a == self.one() and a * cand == self.one():
            return cand
        return None

    def divide_central(self, a: RingElem, u: RingElem) -> RingElem | None:
        """a / u when the exact quotient exists in the ring, else None."""
        raise Unsupported(f"central division unavailable for {self}")

    def sample(self, rng, box: int = 9) -> RingElem:
        raise NotImplementedError

    # -- rendering -----------------------------------------------------
    def render(self, a: RingElem) -> str:
        raise NotImplementedError

    def payload_json(self, a: RingElem):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Ring) and self.describe() == other.describe()

    def __hash__(self):
        return hash(repr(self.describe()))

    def describe(self):
        raise NotImplementedError

    def __repr__(self):
        return self.name()

    def name(self) -> str:
        raise NotImplementedError


# ---------------------------------------------------------------------------


class FieldRing(Ring):
    """Q, Q(i), or F_p viewed as a one- or two-dimensional algebra."""

    kind = "field"
    is_commutative = True
    is_domain = True
    is_prime_ring = True

    def __init__(self, field: ScalarField) -> None:
        super().__init__()
        self.field = field
        self.char = field.char
        self.prime_field = QQ if field.char == 0 else field

    def describe(self):
        return ("field", self.field.name)

    def name(self) -> str:
        return self.field.name

    def canonical(self, payload):
        return self.field.coerce(payload)

    def from_int(self, n: int) -> RingElem:
        return RingElem(self, self.field.from_int(n))

    def add(self, a, b):
        return RingElem(self, a.payload + b.payload)

    def neg(self, a):
        return RingElem(self, -a.payload)

    def mul(self, a, b):
        return RingElem(self, a.payload * b.payload)

    def payload_equal(self, p1, p2):
        return p1 == p2

    def generators(self):
        if self.field is QI:
            return [self.one(), self.element(GaussianRational(0, 1))]
        return [self.one()]

    def basis(self):
        if self.field is QI:
            return [self.one(), self.element(GaussianRational(0, 1))]
        return [self.one()]

    def to_vector(self, a):
        if self.field is QI:
            return [a.payload.re, a.payload.im]
        return [a.payload]

    def from_vector(self, vec):
        if self.field is QI:
            return self.element(GaussianRational(vec[0], vec[1]))
        return self.element(vec[0])

    def center(self):
        return self.basis(), True

    def is_regular(self, a):
        return bool(a.payload)

    def inverse(self, a):
        if not a.payload:
            return None
        if isinstance(a.payload, Fraction):
            return self.element(1 / a.payload)
        return self.element(a.payload.inverse())

    def divide_central(self, a, u):
        inv = self.inverse(u)
        if inv is None:
            return None
        return a * inv

    def sample(self, rng, box: int = 9):
        if self.field is QI:
            return self.element(
                GaussianRational(rng.randint(-box, box), rng.randint(-box, box))
            )
        return self.element(self.field.from_int(rng.randint(-box, box)))

    def render(self, a):
        return render_scalar(a.payload)

    def payload_json(self, a):
        return {"kind": "scalar", "value": render_scalar(a.payload)}


# ---------------------------------------------------------------------------


def _mono_mul(m1: tuple, m2: tuple) -> tuple:
    return tuple(a + b for a, b in zip(m1, m2))


class PolynomialRing(Ring):
    """K[y1..ym], optionally truncated at t^k in the univariate case.

    Payloads are dicts {exponent tuple: nonzero scalar}.  The
    `unbounded` flag marks the ring as a finite window of a family with
    infinitely many variables; arithmetic ignores it, the PI pipeline
    does not.
    """

    kind = "poly"
    is_commutative = True

    def __init__(
        self,
        field: ScalarField,
        variables: list[str],
        truncate: int | None = None,
        unbounded: bool = False,
    ) -> None:
        super().__init__()
        if truncate is not None and len(variables) != 1:
            raise UnsupportedKind("truncation needs a univariate ring")
        if truncate is not None and truncate < 1:
            raise UnsupportedKind("truncation exponent must be >= 1")
        self.field = field
        self.variables = list(variables)
        self.truncate = truncate
        self.unbounded = unbounded
        self.char = field.char
        self.prime_field = QQ if field.char == 0 else field
        self.is_domain = truncate is None
        self.is_prime_ring = truncate is None

    def describe(self):
        return (
            "poly",
            self.field.name,
            tuple(self.variables),
            self.truncate,
            self.unbounded,
        )

    def name(self) -> str:
        v = ",".join(self.variables)
        base = f"{self.field.name}[{v}]"
        if self.truncate is not None:
            base += f"/({self.variables[0]}^{self.truncate})"
        return base

    def nvars(self) -> int:
        return len(self.variables)

    def canonical(self, payload):
        if isinstance(payload, (int, Fraction, GaussianRational, PrimeFieldElement)):
            c = self.field.coerce(payload)
            payload = {(0,) * self.nvars(): c} if c else {}
        out = {}
        for mono, c in payload.items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != self.nvars() or any(e < 0 for e in mono):
                raise BadLiteral(f"bad monomial {mono} for {self.name()}")
            if self.truncate is not None and mono[0] >= self.truncate:
                continue
            c = self.field.coerce(c)
            if c:
                out[mono] = out.get(mono, self.field.zero()) + c
                if not out[mono]:
                    del out[mono]
        return out

    def from_int(self, n: int) -> RingElem:
        return self.element(n)

    def var(self, name_or_idx) -> RingElem:
        idx = (
            name_or_idx
            if isinstance(name_or_idx, int)
            else self.variables.index(name_or_idx)
        )
        mono = tuple(1 if i == idx else 0 for i in range(self.nvars()))
        return self.element({mono: self.field.one()})

    def monomial(self, exps, coeff=1) -> RingElem:
        return self.element({tuple(exps): self.field.coerce(coeff)})

    def add(self, a, b):
        out = dict(a.payload)
        z = self.field.zero()
        for mono, c in b.payload.items():
            s = out.get(mono, z) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return RingElem(self, out)

    def neg(self, a):
        return RingElem(self, {m: -c for m, c in a.payload.items()})

    def mul(self, a, b):
        out: dict = {}
        z = self.field.zero()
        for m1, c1 in a.payload.items():
            for m2, c2 in b.payload.items():
                m = _mono_mul(m1, m2)
                if self.truncate is not None and m[0] >= self.truncate:
                    continue
                s = out.get(m, z) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return RingElem(self, out)

    def payload_equal(self, p1, p2):
        return p1 == p2

    def is_zero(self, a):
        return not a.payload

    def generators(self):
        gens = [self.one()] + [self.var(i) for i in range(self.nvars())]
        if self.field is QI:
            gens.append(self.element({(0,) * self.nvars(): GaussianRational(0, 1)}))
        return gens

    def basis(self):
        if self.truncate is None:
            return None
        out = []
        for j in range(self.truncate):
            for s in self._scalar_basis():
                out.append(self.element({(j,): s}))
        return out

    def _scalar_basis(self):
        if self.field is QI:
            return [GaussianRational(1, 0), GaussianRational(0, 1)]
        return [self.field.one()]

    def _scalar_coords(self, c):
        if self.field is QI:
            return [c.re, c.im]
        return [c]

    def to_vector(self, a):
        if self.truncate is None:
            raise Unsupported(f"{self} carries no finite basis")
        d = self.field.dim_over_prime
        vec = [self.prime_field.zero()] * (self.truncate * d)
        for mono, c in a.payload.items():
            for t, x in enumerate(self._scalar_coords(c)):
                vec[mono[0] * d + t] = x
        return vec

    def from_vector(self, vec):
        d = self.field.dim_over_prime
        out = {}
        for j in range(len(vec) // d):
            chunk = vec[j * d : (j + 1) * d]
            if self.field is QI:
                c = GaussianRational(chunk[0], chunk[1])
            else:
                c = chunk[0]
            if c:
                out[(j,)] = c
        return self.element(out)

    def center(self):
        if self.truncate is not None:
            return self.basis(), True
        return self.generators(), False

    def is_regular(self, a):
        if self.truncate is None:
            return bool(a.payload)
        z = (0,)
        return z in a.payload and bool(a.payload[z])

    def divide_central(self, a, u):
        if not u.payload:
            return None
        if len(u.payload) == 1:
            (umono, uc), = u.payload.items()
            out = {}
            for mono, c in a.payload.items():
                q = tuple(e - f for e, f in zip(mono, umono))
                if any(e < 0 for e in q):
                    return None
                out[q] = c * (self.field.one() / uc)
            return self.element(out)
        if self.nvars() == 1 and self.truncate is None:
            return self._divide_univariate(a, u)
        raise Unsupported("exact division only by monomials here")

    def _divide_univariate(self, a, u):
        rem = dict(a.payload)
        (du, lu) = max(((m[0], c) for m, c in u.payload.items()), key=lambda t: t[0])
        out = {}
        while rem:
            dr = max(m[0] for m in rem)
            if dr < du:
                return None
            q = rem[(dr,)] * (self.field.one() / lu)
            out[(dr - du,)] = q
            for m, c in u.payload.items():
                k = (m[0] + dr - du,)
                s = rem.get(k, self.field.zero()) - q * c
                if s:
                    rem[k] = s
                else:
                    rem.pop(k, None)
        return self.element(out)

    def degree_in(self, a: RingElem, idx: int) -> int | None:
        if not a.payload:
            return None
        return max(m[idx] for m in a.payload)

    def coefficient_of_power(self, a: RingElem, idx: int, d: int) -> RingElem:
        """Coefficient of variables[idx]^d, as an element with that var zeroed."""
        out = {}
        for m, c in a.payload.items():
            if m[idx] == d:
                mm = tuple(0 if i == idx else e for i, e in enumerate(m))
                out[mm] = out.get(mm, self.field.zero()) + c
        return self.element(out)

    def total_degree(self, a: RingElem) -> int | None:
        if not a.payload:
            return None
        return max(sum(m) for m in a.payload)

    def sample(self, rng, box: int = 9, terms: int = 2, deg: int = 2):
        out = self.zero()
        for _ in range(rng.randint(1, terms)):
            mono = [0] * self.nvars()
            for _ in range(rng.randint(0, deg)):
                mono[rng.randrange(self.nvars())] += 1
            c = rng.randint(-box, box)
            out = out + self.element({tuple(mono): self.field.from_int(c)})
        return out

    def _mono_str(self, mono) -> str:
        parts = []
        for name, e in zip(self.variables, mono):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts)

    def render(self, a):
        if not a.payload:
            return "0"
        items = sorted(a.payload.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        parts = []
        for mono, c in items:
            ms = self._mono_str(mono)
            cs = render_scalar(c)
            if not ms:
                parts.append(cs)
            elif cs == "1":
                parts.append(ms)
            elif cs == "-1":
                parts.append(f"-{ms}")
            else:
                if ("+" in cs[1:]) or ("-" in cs[1:]):
                    cs = f"({cs})"
                parts.append(f"{cs}*{ms}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def payload_json(self, a):
        items = sorted(a.payload.items(), key=lambda kv: (sum(kv[0]), kv[0]))
        return {
            "kind": "poly",
            "terms": [[list(m), render_scalar(c)] for m, c in items],
        }


# ---------------------------------------------------------------------------


class ConstraintDomain:
    """One member of the lattice {Z, Z[1/2], Q, Z+xQ[x], Z[1/2]+xQ[x], xQ[x], Q[x]}.

    Encoded as (constant-part domain, tail flag): the constant term must
    live in the named additive subgroup of Q, and x-multiples are allowed
    iff the tail flag is set.
    """

    CONST_ORDER = {"0": 0, "Z": 1, "Z1/2": 2, "Q": 3}

    def __init__(self, const: str, tail: bool) -> None:
        if const not in self.CONST_ORDER:
            raise BadLiteral(f"unknown constant domain {const!r}")
        self.const = const
        self.tail = tail

    def __eq__(self, other):
        return (
            isinstance(other, ConstraintDomain)
            and other.const == self.const
            and other.tail == self.tail
        )

    def __hash__(self):
        return hash((self.const, self.tail))

    def __repr__(self):
        return self.label()

    def label(self) -> str:
        names = {
            ("Z", False): "Z",
            ("Z1/2", False): "Z[1/2]",
            ("Q", False): "Q",
            ("Z", True): "Z+xQ[x]",
            ("Z1/2", True): "Z[1/2]+xQ[x]",
            ("0", True): "xQ[x]",
            ("Q", True): "Q[x]",
            ("0", False): "0",
        }
        return names[(self.const, self.tail)]

    @staticmethod
    def parse(text: str) -> "ConstraintDomain":
        table = {
            "Z": ("Z", False),
            "Z[1/2]": ("Z1/2", False),
            "Q": ("Q", False),
            "Z+xQ[x]": ("Z", True),
            "Z[1/2]+xQ[x]": ("Z1/2", True),
            "xQ[x]": ("0", True),
            "Q[x]": ("Q", True),
        }
        key = text.replace(" ", "")
        if key not in table:
            raise BadLiteral(f"unknown constraint domain {text!r}")
        return ConstraintDomain(*table[key])

    def product(self, other: "ConstraintDomain") -> "ConstraintDomain":
        """Smallest lattice member containing all pairwise products."""
        table = {
            frozenset(["0"]): "0",
            frozenset(["0", "Z"]): "0",
            frozenset(["0", "Z1/2"]): "0",
            frozenset(["0", "Q"]): "0",
            frozenset(["Z"]): "Z",
            frozenset(["Z", "Z1/2"]): "Z1/2",
            frozenset(["Z1/2"]): "Z1/2",
            frozenset(["Z", "Q"]): "Q",
            frozenset(["Z1/2", "Q"]): "Q",
            frozenset(["Q"]): "Q",
        }
        const = table[frozenset([self.const, other.const])]
        a_nonzero = self.const != "0" or self.tail
        b_nonzero = other.const != "0" or other.tail
        tail = (self.tail and b_nonzero) or (other.tail and a_nonzero)
        return ConstraintDomain(const, tail)

    def contains_domain(self, other: "ConstraintDomain") -> bool:
        return (
            self.CONST_ORDER[other.const] <= self.CONST_ORDER[self.const]
            and (self.tail or not other.tail)
        )

    def contains_poly(self, payload: dict) -> bool:
        """Membership of a Q[x] payload (univariate dict) in the domain."""
        for mono, c in payload.items():
            if mono[0] == 0:
                if self.const == "0":
                    return False
                if self.const == "Z" and not is_integer(c):
                    return False
                if self.const == "Z1/2" and not is_dyadic(c):
                    return False
            elif not self.tail:
                return False
        return True

    def sample_const(self, rng, box: int) -> Fraction:
        if self.const == "0":
            return Fraction(0)
        if self.const == "Z":
            return Fraction(rng.randint(-box, box))
        if self.const == "Z1/2":
            return Fraction(rng.randint(-box, box), 2 ** rng.randint(0, 2))
        return Fraction(rng.randint(-box, box), rng.randint(1, 3))

    def sample(self, rng, box: int, deg: int = 2):
        """Dict payload of a random member, degree <= deg."""
        out = {}
        c = self.sample_const(rng, box)
        if c:
            out[(0,)] = c
        if self.tail:
            for _ in range(rng.randint(0, 2)):
                e = rng.randint(1, deg)
                q = Fraction(rng.randint(-box, box), rng.randint(1, 3))
                if q:
                    out[(e,)] = out.get((e,), Fraction(0)) + q
                    if not out[(e,)]:
                        del out[(e,)]
        return out

    def generator_payloads(self) -> list[dict]:
        """Small spanning samples used as generator material."""
        consts = {
            "0": [],
            "Z": [Fraction(1)],
            "Z1/2": [Fraction(1), Fraction(1, 2)],
            "Q": [Fraction(1), Fraction(1, 2), Fraction(1, 3)],
        }[self.const]
        out = [{(0,): c} for c in consts]
        if self.tail:
            out += [
                {(1,): Fraction(1)},
                {(1,): Fraction(1, 2)},
                {(1,): Fraction(1, 3)},
            ]
        return out


class ConstrainedPolynomialRing(Ring):
    """A constant-constrained subring of Q[x], e.g. Z + x*Q[x]."""

    kind = "mixed"
    is_commutative = True
    is_domain = True
    is_prime_ring = True

    def __init__(self, domain: ConstraintDomain) -> None:
        super().__init__()
        if domain.const == "0":
            raise UnsupportedKind(f"{domain.label()} is not unital")
        self.domain = domain
        self.ambient = PolynomialRing(QQ, ["x"])
        self.prime_field = QQ

    def describe(self):
        return ("mixed", self.domain.const, self.domain.tail)

    def name(self) -> str:
        return self.domain.label()

    def canonical(self, payload):
        p = self.ambient.canonical(payload)
        if not self.domain.contains_poly(p):
            raise RingMismatch(
                f"{self.ambient.element(p)!r} is not a member of {self.name()}"
            )
        return p

    def from_int(self, n: int) -> RingElem:
        return self.element({(0,): Fraction(n)} if n else {})

    def add(self, a, b):
        return RingElem(self, self.ambient.add(a, b).payload)

    def neg(self, a):
        return RingElem(self, self.ambient.neg(a).payload)

    def mul(self, a, b):
        return RingElem(self, self.ambient.mul(a, b).payload)

    def payload_equal(self, p1, p2):
        return p1 == p2

    def is_zero(self, a):
        return not a.payload

    def generators(self):
        return [self.element(p) for p in self.domain.generator_payloads()]

    def center(self):
        return self.generators(), False

    def is_regular(self, a):
        return bool(a.payload)

    def divide_central(self, a, u):
        q = self.ambient.divide_central(
            RingElem(self.ambient, a.payload), RingElem(self.ambient, u.payload)
        )
        if q is None or not self.domain.contains_poly(q.payload):
            return None
        return RingElem(self, q.payload)

    def membership(self, ambient_elem: RingElem) -> bool:
        return self.domain.contains_poly(ambient_elem.payload)

    def sample(self, rng, box: int = 9):
        return self.element(self.domain.sample(rng, box))

    def render(self, a):
        return self.ambient.render(a)

    def payload_json(self, a):
        return self.ambient.payload_json(a)


# ---------------------------------------------------------------------------


class MatrixRing(Ring):
    """Full n x n matrices over a commutative catalog ring."""

    kind = "matrix"

    def __init__(self, base: Ring, n: int) -> None:
        super().__init__()
        if n < 1:
            raise UnsupportedKind("matrix size must be >= 1")
        if not base.is_commutative:
            raise UnsupportedKind("matrix entries must commute")
        self.base = base
        self.n = n
        self.char = base.char
        self.prime_field = base.prime_field
        self.is_commutative = n == 1 and base.is_commutative
        self.is_domain = n == 1 and base.is_domain
        self.is_prime_ring = base.is_domain or base.is_prime_ring

    def describe(self):
        return ("matrix", self.base.describe(), self.n)

    def name(self) -> str:
        return f"M_{self.n}({self.base.name()})"

    def canonical(self, payload):
        rows = []
        if len(payload) != self.n:
            raise BadLiteral(f"expected {self.n} rows")
        for row in payload:
            if len(row) != self.n:
                raise BadLiteral(f"expected {self.n} columns")
            rows.append(
                tuple(
                    e if isinstance(e, RingElem) and e.ring == self.base
                    else self.base.element(e if not isinstance(e, RingElem) else e.payload)
                    for e in row
                )
            )
        return tuple(rows)

    def from_int(self, n: int) -> RingElem:
        c = self.base.from_int(n)
        z = self.base.zero()
        return RingElem(
            self,
            tuple(
                tuple(c if i == j else z for j in range(self.n))
                for i in range(self.n)
            ),
        )

    def unit(self, i: int, j: int, scale=1) -> RingElem:
        s = scale if isinstance(scale, RingElem) else self.base.from_int(scale)
        z = self.base.zero()
        return RingElem(
            self,
            tuple(
                tuple(s if (r, c) == (i, j) else z for c in range(self.n))
                for r in range(self.n)
            ),
        )

    def diag(self, entries) -> RingElem:
        es = [
            e if isinstance(e, RingElem) else self.base.element(e) for e in entries
        ]
        z = self.base.zero()
        return RingElem(
            self,
            tuple(
                tuple(es[i] if i == j else z for j in range(self.n))
                for i in range(self.n)
            ),
        )

    def scalar(self, c) -> RingElem:
        e = c if isinstance(c, RingElem) else self.base.element(c)
        return self.diag([e] * self.n)

    def add(self, a, b):
        return RingElem(
            self,
            tuple(
                tuple(x + y for x, y in zip(r1, r2))
                for r1, r2 in zip(a.payload, b.payload)
            ),
        )

    def neg(self, a):
        return RingElem(self, tuple(tuple(-x for x in r) for r in a.payload))

    def mul(self, a, b):
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                s = self.base.zero()
                for k in range(n):
                    s = s + a.payload[i][k] * b.payload[k][j]
                row.append(s)
            out.append(tuple(row))
        return RingElem(self, tuple(out))

    def payload_equal(self, p1, p2):
        return all(
            x == y for r1, r2 in zip(p1, p2) for x, y in zip(r1, r2)
        )

    def generators(self):
        gens = [
            self.unit(i, j) for i in range(self.n) for j in range(self.n)
        ]
        for g in self.base.generators():
            gens.append(self.scalar(g))
        return gens

    def basis(self):
        bb = self.base.basis()
        if bb is None:
            return None
        return [
            self.unit(i, j, scale=b)
            for i in range(self.n)
            for j in range(self.n)
            for b in bb
        ]

    def to_vector(self, a):
        out = []
        for row in a.payload:
            for e in row:
                out.extend(self.base.to_vector(e))
        return out

    def from_vector(self, vec):
        bb = self.base.basis()
        d = len(self.base.to_vector(self.base.zero())) if bb is None else len(
            self.base.to_vector(bb[0])
        )
        rows = []
        pos = 0
        for i in range(self.n):
            row = []
            for j in range(self.n):
                row.append(self.base.from_vector(vec[pos : pos + d]))
                pos += d
            rows.append(tuple(row))
        return RingElem(self, tuple(rows))

    def center(self):
        if isinstance(self.base, FieldRing):
            return [self.scalar(b) for b in self.base.basis()], True
        cgens, _ = self.base.center()
        return [self.scalar(g) for g in cgens], False

    def det(self, a: RingElem) -> RingElem:
        return self._det(a.payload)

    def _det(self, rows) -> RingElem:
        n = len(rows)
        if n == 1:
            return rows[0][0]
        out = self.base.zero()
        for j in range(n):
            minor = tuple(
                tuple(r[c] for c in range(n) if c != j) for r in rows[1:]
            )
            cof = self._det(minor)
            term = rows[0][j] * cof
            out = out + (term if j % 2 == 0 else -term)
        return out

    def is_regular(self, a):
        return self.base.is_regular(self.det(a))

    def adjugate(self, a: RingElem) -> RingElem:
        n = self.n
        if n == 1:
            return self.one()
        rows = a.payload
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                minor = tuple(
                    tuple(rows[r][c] for c in range(n) if c != i)
                    for r in range(n)
                    if r != j
                )
                cof = self._det(minor)
                row.append(cof if (i + j) % 2 == 0 else -cof)
            out.append(tuple(row))
        return RingElem(self, tuple(out))

    def inverse(self, a):
        d = self.det(a)
        dinv = self.base.inverse(d) if self.base.basis() is not None else None
        if dinv is None:
            # units of a polynomial domain are its unit constants
            dinv_p = self.base.divide_central(self.base.one(), d) if bool(d) else None
            if dinv_p is None:
                return None
            dinv = dinv_p
        adj = self.adjugate(a)
        return RingElem(
            self,
            tuple(tuple(x * dinv for x in row) for row in adj.payload),
        )

    def divide_central(self, a, u):
        # central elements of a matrix ring are scalar matrices
        c = u.payload[0][0]
        for i in range(self.n):
            for j in range(self.n):
                want = c if i == j else self.base.zero()
                if not (u.payload[i][j] == want):
                    raise NotCentral(f"{u!r} is not central in {self.name()}")
        rows = []
        for row in a.payload:
            new = []
            for e in row:
                q = self.base.divide_central(e, c)
                if q is None:
                    return None
                new.append(q)
            rows.append(tuple(new))
        return RingElem(self, tuple(rows))

    def sample(self, rng, box: int = 9):
        return RingElem(
            self,
            tuple(
                tuple(self.base.sample(rng, box) for _ in range(self.n))
                for _ in range(self.n)
            ),
        )

    def render(self, a):
        rows = [
            "[" + ", ".join(self.base.render(e) for e in row) + "]"
            for row in a.payload
        ]
        return "[" + ", ".join(rows) + "]"

    def payload_json(self, a):
        return {
            "kind": "matrix",
            "rows": [[self.base.payload_json(e) for e in row] for row in a.payload],
        }


# ---------------------------------------------------------------------------


class MatrixSubring(Ring):
    """Entry-constrained subring of M_n(Q[x]).

    constraints[i][j] is the ConstraintDomain allowed at entry (i, j);
    the construction proves multiplicative closure once, or raises
    ClosureViolation naming the first bad triple.
    """

    kind = "matrix_subring"

    def __init__(self, n: int, constraints) -> None:
        super().__init__()
        self.n = n
        self.poly = PolynomialRing(QQ, ["x"])
        self.ambient = MatrixRing(self.poly, n)
        if len(constraints) != n or any(len(r) != n for r in constraints):
            raise BadLiteral(f"need an {n}x{n} constraint grid")
        self.constraints = [
            [
                c if isinstance(c, ConstraintDomain) else ConstraintDomain.parse(c)
                for c in row
            ]
            for row in constraints
        ]
        for i in range(n):
            d = self.constraints[i][i]
            if ConstraintDomain.CONST_ORDER[d.const] < 1:
                raise ClosureViolation(
                    f"diagonal entry ({i+1},{i+1}) constraint {d.label()} "
                    "does not contain 1"
                )
        for i in range(n):
            for k in range(n):
                for j in range(n):
                    prod = self.constraints[i][k].product(self.constraints[k][j])
                    tgt = self.constraints[i][j]
                    if not tgt.contains_domain(prod):
                        raise ClosureViolation(
                            f"({i+1},{k+1})*({k+1},{j+1}) gives "
                            f"{prod.label()} which is not inside "
                            f"{tgt.label()} at ({i+1},{j+1})"
                        )
        self.prime_field = QQ
        self.is_prime_ring = True

    def describe(self):
        return (
            "matrix_subring",
            self.n,
            tuple(tuple(c.label() for c in row) for row in self.constraints),
        )

    def name(self) -> str:
        rows = [
            "[" + ", ".join(c.label() for c in row) + "]"
            for row in self.constraints
        ]
        return "[" + ", ".join(rows) + "]"

    def canonical(self, payload):
        rows = self.ambient.canonical(payload)
        if not self._contains(rows):
            raise RingMismatch(
                f"{self.ambient.render(RingElem(self.ambient, rows))} violates "
                f"the entry constraints of {self.name()}"
            )
        return rows

    def _contains(self, rows) -> bool:
        for i in range(self.n):
            for j in range(self.n):
                if not self.constraints[i][j].contains_poly(rows[i][j].payload):
                    return False
        return True

    def membership(self, ambient_elem: RingElem) -> bool:
        return self._contains(ambient_elem.payload)

    def to_ambient(self, a: RingElem) -> RingElem:
        return RingElem(self.ambient, a.payload)

    def from_ambient(self, a: RingElem) -> RingElem:
        return self.element(a.payload)

    def from_int(self, n: int) -> RingElem:
        return RingElem(self, self.ambient.from_int(n).payload)

    def add(self, a, b):
        return RingElem(self, self.ambient.add(a, b).payload)

    def neg(self, a):
        return RingElem(self, self.ambient.neg(a).payload)

    def mul(self, a, b):
        return RingElem(self, self.ambient.mul(a, b).payload)

    def payload_equal(self, p1, p2):
        return self.ambient.payload_equal(p1, p2)

    def generators(self):
        gens = [self.one()]
        for i in range(self.n):
            for j in range(self.n):
                for p in self.constraints[i][j].generator_payloads():
                    e = self.poly.element(p)
                    gens.append(
                        RingElem(self, self.ambient.unit(i, j, scale=e).payload)
                    )
        return gens

    def is_regular(self, a):
        return self.ambient.is_regular(RingElem(self.ambient, a.payload))

    def inverse(self, a):
        inv = self.ambient.inverse(RingElem(self.ambient, a.payload))
        if inv is None or not self._contains(inv.payload):
            return None
        return RingElem(self, inv.payload)

    def divide_central(self, a, u):
        q = self.ambient.divide_central(
            RingElem(self.ambient, a.payload), RingElem(self.ambient, u.payload)
        )
        if q is None or not self._contains(q.payload):
            return None
        return RingElem(self, q.payload)

    def sample(self, rng, box: int = 9):
        rows = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                row.append(self.poly.element(self.constraints[i][j].sample(rng, box)))
            rows.append(tuple(row))
        return RingElem(self, tuple(rows))

    def render(self, a):
        return self.ambient.render(RingElem(self.ambient, a.payload))

    def payload_json(self, a):
        return self.ambient.payload_json(RingElem(self.ambient, a.payload))


# ---------------------------------------------------------------------------


class ProductRing(Ring):
    """Finite product of catalog rings with componentwise operations."""

    kind = "product"

    def __init__(self, components: list[Ring]) -> None:
        super().__init__()
        if not components:
            raise UnsupportedKind("a product needs at least one component")
        chars = {c.char for c in components}
        if len(chars) != 1:
            raise UnsupportedKind("mixed-characteristic products are rejected")
        self.components = list(components)
        self.char = components[0].char
        self.prime_field = components[0].prime_field
        self.is_commutative = all(c.is_commutative for c in components)
        self.is_domain = len(components) == 1 and components[0].is_domain
        self.is_prime_ring = len(components) == 1 and components[0].is_prime_ring

    def describe(self):
        return ("product", tuple(c.describe() for c in self.components))

    def name(self) -> str:
        return " (+) ".join(c.name() for c in self.components)

    def size(self) -> int:
        return len(self.components)

    def canonical(self, payload):
        if len(payload) != len(self.components):
            raise BadLiteral(
                f"expected {len(self.components)} components, got {len(payload)}"
            )
        return tuple(
            p if isinstance(p, RingElem) and p.ring == c else c.element(
                p if not isinstance(p, RingElem) else p.payload
            )
            for c, p in zip(self.components, payload)
        )

    def from_int(self, n: int) -> RingElem:
        return RingElem(self, tuple(c.from_int(n) for c in self.components))

    def idempotent(self, i: int) -> RingElem:
        return RingElem(
            self,
            tuple(
                c.one() if j == i else c.zero()
                for j, c in enumerate(self.components)
            ),
        )

    def idempotents(self) -> list[RingElem]:
        return [self.idempotent(i) for i in range(len(self.components))]

    def verify_idempotents(self) -> None:
        es = self.idempotents()
        total = self.zero()
        for i, e in enumerate(es):
            total = total + e
            for j, f in enumerate(es):
                prod = e * f
                want = e if i == j else self.zero()
                if not (prod == want):
                    raise BadIdempotents(f"e{i+1}*e{j+1} is not {'e'+str(i+1) if i==j else '0'}")
        if not (total == self.one()):
            raise BadIdempotents("idempotents do not sum to 1")

    def embed(self, i: int, comp_elem: RingElem) -> RingElem:
        return RingElem(
            self,
            tuple(
                comp_elem if j == i else c.zero()
                for j, c in enumerate(self.components)
            ),
        )

    def component(self, a: RingElem, i: int) -> RingElem:
        return a.payload[i]

    def support(self, a: RingElem) -> list[int]:
        return [
            i
            for i, (c, p) in enumerate(zip(self.components, a.payload))
            if not c.is_zero(p)
        ]

    def add(self, a, b):
        return RingElem(self, tuple(x + y for x, y in zip(a.payload, b.payload)))

    def neg(self, a):
        return RingElem(self, tuple(-x for x in a.payload))

    def mul(self, a, b):
        return RingElem(self, tuple(x * y for x, y in zip(a.payload, b.payload)))

    def payload_equal(self, p1, p2):
        return all(x == y for x, y in zip(p1, p2))

    def generators(self):
        gens = list(self.idempotents())
        for i, c in enumerate(self.components):
            for g in c.generators():
                gens.append(self.embed(i, g))
        return gens

    def basis(self):
        out = []
        for i, c in enumerate(self.components):
            bb = c.basis()
            if bb is None:
                return None
            out.extend(self.embed(i, b) for b in bb)
        return out

    def to_vector(self, a):
        out = []
        for c, p in zip(self.components, a.payload):
            out.extend(c.to_vector(p))
        return out

    def from_vector(self, vec):
        parts = []
        pos = 0
        for c in self.components:
            d = len(c.to_vector(c.zero()))
            parts.append(c.from_vector(vec[pos : pos + d]))
            pos += d
        return RingElem(self, tuple(parts))

    def center(self):
        elems = []
        vector = True
        for i, c in enumerate(self.components):
            ce, cv = c.center()
            vector = vector and cv
            elems.extend(self.embed(i, z) for z in ce)
        return elems, vector

    def is_regular(self, a):
        return all(
            c.is_regular(p) for c, p in zip(self.components, a.payload)
        )

    def inverse(self, a):
        parts = []
        for c, p in zip(self.components, a.payload):
            q = c.inverse(p)
            if q is None:
                return None
            parts.append(q)
        return RingElem(self, tuple(parts))

    def divide_central(self, a, u):
        parts = []
        for c, p, q in zip(self.components, a.payload, u.payload):
            d = c.divide_central(p, q)
            if d is None:
                return None
            parts.append(d)
        return RingElem(self, tuple(parts))

    def sample(self, rng, box: int = 9):
        return RingElem(
            self, tuple(c.sample(rng, box) for c in self.components)
        )

    def render(self, a):
        return "(" + ", ".join(
            c.render(p) for c, p in zip(self.components, a.payload)
        ) + ")"

    def payload_json(self, a):
        return {
            "kind": "tuple",
            "parts": [
                c.payload_json(p) for c, p in zip(self.components, a.payload)
            ],
        }


# ---------------------------------------------------------------------------


class LocalizedRing(Ring):
    """base[u^-1] for a central regular u; payloads are (numerator, k)."""

    kind = "localization"

    def __init__(self, base: Ring, u: RingElem) -> None:
        super().__init__()
        if isinstance(base, LocalizedRing):
            raise UnsupportedKind("nested localization is out of catalog")
        if u.ring != base:
            raise RingMismatch("localizing element must belong to the base ring")
        for g in base.generators():
            if not (g * u == u * g):
                raise NotCentral(f"{u!r} does not commute with {g!r}")
        if not base.is_regular(u):
            raise NotRegular(f"{u!r} is a zero divisor; cannot invert it")
        self.base = base
        self.u = u
        self.char = base.char
        self.prime_field = base.prime_field
        self.is_commutative = base.is_commutative
        self.is_domain = base.is_domain
        self.is_prime_ring = base.is_prime_ring

    def describe(self):
        return ("localization", self.base.describe(), self.base.render(self.u))

    def name(self) -> str:
        return f"{self.base.name()}[({self.base.render(self.u)})^-1]"

    def canonical(self, payload):
        num, k = payload
        if not isinstance(num, RingElem) or num.ring != self.base:
            num = self.base.element(num)
        k = int(k)
        if k < 0:
            num = num * (self.u ** (-k))
            k = 0
        while k > 0:
            q = self.base.divide_central(num, self.u)
            if q is None:
                break
            num, k = q, k - 1
        return (num, k)

    def embed(self, base_elem: RingElem) -> RingElem:
        return self.element((base_elem, 0))

    def from_int(self, n: int) -> RingElem:
        return RingElem(self, (self.base.from_int(n), 0))

    def add(self, a, b):
        (x, j), (y, k) = a.payload, b.payload
        m = max(j, k)
        num = x * (self.u ** (m - j)) + y * (self.u ** (m - k))
        return self.element((num, m))

    def neg(self, a):
        (x, j) = a.payload
        return RingElem(self, (-x, j))

    def mul(self, a, b):
        (x, j), (y, k) = a.payload, b.payload
        return self.element((x * y, j + k))

    def payload_equal(self, p1, p2):
        (x, j), (y, k) = p1, p2
        # payloads are canonical, but cross-multiply to stay honest
        return x * (self.u ** k) == y * (self.u ** j)

    def generators(self):
        gens = [self.embed(g) for g in self.base.generators()]
        gens.append(RingElem(self, (self.base.one(), 1)))
        return gens

    def is_regular(self, a):
        num, _ = a.payload
        return self.base.is_regular(num)

    def inverse(self, a):
        num, k = a.payload
        try:
            inv = self.base.inverse(num)
        except Unsupported:
            inv = None
        if inv is not None:
            return self.element((inv * (self.u ** k), 0))
        # num may still divide a power of u; that certifies a unit here
        upow = self.base.one()
        for j in range(9):
            try:
                q = self.base.divide_central(upow, num)
            except NotCentral:
                break
            if q is not None:
                return self.element((q * (self.u ** k), j))
            upow = upow * self.u
        raise Unsupported(
            f"cannot decide invertibility of {self.render(a)} in {self.name()}: "
            "no base inverse and the numerator divides no small power of "
            f"{self.base.render(self.u)}"
        )

    def sample(self, rng, box: int = 9):
        return self.element((self.base.sample(rng, box), rng.randint(0, 2)))

    def render(self, a):
        num, k = a.payload
        if k == 0:
            return self.base.render(num)
        return f"({self.base.render(num)}) / ({self.base.render(self.u)})^{k}"

    def payload_json(self, a):
        num, k = a.payload
        return {"kind": "frac", "num": self.base.payload_json(num), "upow": k}


# ---------------------------------------------------------------------------


def membership(a: RingElem, sub: Ring) -> bool:
    """Does ambient element a lie in the subring `sub`?"""
    if isinstance(sub, MatrixSubring):
        if a.ring != sub.ambient and a.ring != sub:
            raise NotASubringOf(f"{sub.name()} is not a subring of {a.ring.name()}")
        return sub.membership(a if a.ring == sub.ambient else sub.to_ambient(a))
    if isinstance(sub, ConstrainedPolynomialRing):
        if a.ring != sub.ambient and a.ring != sub:
            raise NotASubringOf(f"{sub.name()} is not a subring of {a.ring.name()}")
        return sub.domain.contains_poly(a.payload)
    raise NotASubringOf(f"membership is not decidable for {sub.name()}")


def field_ring(name: str) -> FieldRing:
    return FieldRing(field_by_name(name))


def example_constrained_ring() -> MatrixSubring:
    """The 2x2 constrained ring with corners Z+xQ[x] and xQ[x]."""
    return MatrixSubring(
        2,
        [["Z+xQ[x]", "Z+xQ[x]"], ["xQ[x]", "Z+xQ[x]"]],
    )
