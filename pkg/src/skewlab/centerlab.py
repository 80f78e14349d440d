"""Predicate checkers for skew polynomial rings.

Everything here reduces to exact linear algebra over the prime field
plus one factorization oracle (sympy) for splitting commutative
semisimple algebras into primitive idempotents.  No check trusts a
construction tag: centrality, witnesses, and dimension counts are
re-verified on the elements themselves before they enter a report.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import sympy

from . import linalg
from .errors import (
    BoundExceeded,
    OutOfCatalog,
    RhoIllDefined,
    RingMismatch,
    Unsupported,
)
from .orepoly import OreContext, OrePoly, ore_commutator, ore_mul, render_orepoly
from .rings import (
    FieldRing,
    MatrixRing,
    MatrixSubring,
    PolynomialRing,
    ProductRing,
    Ring,
    RingElem,
    membership,
)
from .scalars import Fraction
from .twists import (
    Endo,
    IdentityEndo,
    SigmaDeriv,
    VarMapEndo,
    endo_identity,
    fixed_subalgebra,
    endo_order_on_center,
    inner_auto_witness,
)


# ---------------------------------------------------------------------------
# centrality


@dataclass
class CentralityReport:
    verdict: str  # "central" | "not-central"
    x_commutes: bool
    failures: list
    checked_generators: int
    checked_samples: int

    @property
    def is_central(self) -> bool:
        return self.verdict == "central"

    def as_dict(self):
        return {
            "verdict": self.verdict,
            "x_commutes": self.x_commutes,
            "failures": list(self.failures),
            "checked_generators": self.checked_generators,
            "checked_samples": self.checked_samples,
        }


def is_central(f: OrePoly, samples: int = 16, seed: int = 0) -> CentralityReport:
    """Does f commute with x and with the coefficient ring?

    Commutators are evaluated against every ring generator and a seeded
    batch of samples; [f, -] is additive and a twisted derivation in
    each slot, so vanishing on generators decides the generated
    subring, and the samples guard rings whose generator list is only
    a spanning seed.
    """
    ctx = f.ctx
    ring = ctx.ring
    failures = []
    cx = ore_commutator(f, ctx.x())
    x_ok = cx.is_zero()
    if not x_ok:
        failures.append({"against": ctx.var, "commutator": render_orepoly(cx)})
    gens = ring.generators()
    for g in gens:
        c = ore_commutator(f, ctx.constant(g))
        if not c.is_zero():
            failures.append(
                {"against": ring.render(g), "commutator": render_orepoly(c)}
            )
    rng = random.Random(seed)
    for _ in range(samples):
        r = ring.sample(rng)
        c = ore_commutator(f, ctx.constant(r))
        if not c.is_zero():
            failures.append(
                {"against": ring.render(r), "commutator": render_orepoly(c)}
            )
    return CentralityReport(
        verdict="central" if not failures else "not-central",
        x_commutes=x_ok,
        failures=failures,
        checked_generators=len(gens),
        checked_samples=samples,
    )


@dataclass
class LeadingReport:
    """Necessary conditions on the top coefficient of a central f."""

    degree: int
    lead: str
    sigma_fixes_lead: bool
    lead_twist_relation: bool  # a sigma^m(r) = r a on generators
    lead_regular: bool
    all_pass: bool

    def as_dict(self):
        return {
            "degree": self.degree,
            "lead": self.lead,
            "sigma_fixes_lead": self.sigma_fixes_lead,
            "lead_twist_relation": self.lead_twist_relation,
            "lead_regular": self.lead_regular,
            "all_pass": self.all_pass,
        }


def central_leading_checks(f: OrePoly) -> LeadingReport:
    if f.is_zero():
        raise ValueError("leading checks need a nonzero polynomial")
    ctx = f.ctx
    ring = ctx.ring
    m = f.degree()
    a = f.lead()
    fixed = ctx.sigma.apply(a) == a
    twist = all(
        a * ctx.sigma.apply_power(r, m) == r * a for r in ring.generators()
    )
    regular = ring.is_regular(a)
    return LeadingReport(
        degree=m,
        lead=ring.render(a),
        sigma_fixes_lead=fixed,
        lead_twist_relation=twist,
        lead_regular=regular,
        all_pass=fixed and twist and regular,
    )


# ---------------------------------------------------------------------------
# semi-invariance: f r in R f for all r


def _right_mult_solve(ctx: OreContext, f: OrePoly, target: OrePoly):
    """b in R with b * f = target, via coefficientwise linear solve."""
    ring = ctx.ring
    basis = ring.basis()
    if basis is None:
        raise Unsupported("semi-invariance solving needs a finite-dimensional ring")
    fld = ring.prime_field
    n = max(len(f.coeffs), len(target.coeffs))
    rows = []
    rhs = []
    for i in range(n):
        ci = f.coeff(i)
        cols = [ring.to_vector(e * ci) for e in basis]
        ti = ring.to_vector(target.coeff(i))
        for pos in range(len(ti)):
            rows.append([cols[j][pos] for j in range(len(basis))])
            rhs.append(ti[pos])
    sol = linalg.solve(fld, rows, rhs)
    if sol is None:
        return None
    return ring.from_vector(sol)


@dataclass
class SemiInvariantReport:
    semi_invariant: bool
    witnesses: list  # [{r, b}] with f r = b f
    failure: dict | None
    checked_generators: int
    checked_samples: int

    def as_dict(self):
        return {
            "semi_invariant": self.semi_invariant,
            "witnesses": list(self.witnesses),
            "failure": self.failure,
            "checked_generators": self.checked_generators,
            "checked_samples": self.checked_samples,
        }


def semi_invariant_solve(
    f: OrePoly, samples: int = 12, seed: int = 0
) -> SemiInvariantReport:
    """For each generator r, solve f r = b_r f; fail on the first miss."""
    ctx = f.ctx
    ring = ctx.ring
    witnesses = []
    gens = ring.generators()
    rng = random.Random(seed)
    pool = [("generator", g) for g in gens]
    pool += [("sample", ring.sample(rng)) for _ in range(samples)]
    for tag, r in pool:
        prod = ore_mul(f, ctx.constant(r))
        b = _right_mult_solve(ctx, f, prod)
        if b is None:
            return SemiInvariantReport(
                semi_invariant=False,
                witnesses=witnesses,
                failure={"r": ring.render(r), "kind": tag},
                checked_generators=len(gens),
                checked_samples=samples,
            )
        if ore_mul(ctx.constant(b), f) != prod:
            raise AssertionError("solver returned a non-witness")
        if tag == "generator":
            witnesses.append({"r": ring.render(r), "b": ring.render(b)})
    return SemiInvariantReport(
        semi_invariant=True,
        witnesses=witnesses,
        failure=None,
        checked_generators=len(gens),
        checked_samples=samples,
    )


# ---------------------------------------------------------------------------
# quasi-algebraic derivations: sum a_i delta^i = (r -> b r - sigma^n(r) b)


@dataclass
class QuasiAlgebraicReport:
    found: bool
    n: int | None
    a: list | None  # scalar coefficients a_0..a_n, rendered
    b: str | None
    method: str | None  # "monic" | "general"
    verified: bool | None
    bound: int

    def as_dict(self):
        return {
            "found": self.found,
            "n": self.n,
            "a": self.a,
            "b": self.b,
            "method": self.method,
            "verified": self.verified,
            "bound": self.bound,
        }


def quasi_algebraic_solve(
    sigma: Endo, delta: SigmaDeriv, n_max: int = 4
) -> QuasiAlgebraicReport:
    """Search n <= n_max for a relation sum a_i delta^i = b r - sigma^n(r) b.

    For each n the monic candidate (a_n = 1) is solved first; only if
    that affine system is infeasible is the homogeneous system scanned
    for any solution with a_n != 0.
    """
    ring = sigma.ring
    if delta.ring != ring:
        raise RingMismatch("sigma and delta must share the ring")
    basis = ring.basis()
    if basis is None:
        raise Unsupported("quasi-algebraic solving needs a finite-dimensional ring")
    fld = ring.prime_field
    d = len(basis)

    # delta^i on the basis, up to n_max
    dpow = [[e for e in basis]]
    for _ in range(n_max):
        dpow.append([delta.apply(v) for v in dpow[-1]])

    def rows_for(n: int, monic: bool):
        """Equations over unknowns (a_0..a_top, b_1..b_d)."""
        top = n - 1 if monic else n
        rows, rhs = [], []
        sig_n = [sigma.apply_power(e, n) for e in basis]
        for j, e in enumerate(basis):
            acoef = [ring.to_vector(dpow[i][j]) for i in range(top + 1)]
            bcoef = [ring.to_vector(fk * e - sig_n[j] * fk) for fk in basis]
            target = (
                [-x for x in ring.to_vector(dpow[n][j])]
                if monic
                else [fld.zero()] * len(acoef[0])
            )
            for pos in range(len(target)):
                rows.append(
                    [acoef[i][pos] for i in range(top + 1)]
                    + [-bcoef[k][pos] for k in range(d)]
                )
                rhs.append(target[pos])
        return rows, rhs

    def verify(n: int, a_scalars, b_elem) -> bool:
        sig_n = [sigma.apply_power(e, n) for e in basis]
        for j, e in enumerate(basis):
            lhs = ring.zero()
            for i, ai in enumerate(a_scalars):
                if ai != fld.zero():
                    from .twists import _scale

                    lhs = lhs + _scale(ring, dpow[i][j], ai)
            rhs = b_elem * e - sig_n[j] * b_elem
            if not (lhs == rhs):
                return False
        return True

    from .scalars import render_scalar

    for n in range(1, n_max + 1):
        rows, rhs = rows_for(n, monic=True)
        sol = linalg.solve(fld, rows, rhs)
        if sol is not None:
            a_scalars = list(sol[:n]) + [fld.one()]
            b_elem = ring.from_vector(list(sol[n:]))
            ok = verify(n, a_scalars, b_elem)
            return QuasiAlgebraicReport(
                found=True,
                n=n,
                a=[render_scalar(x) for x in a_scalars],
                b=ring.render(b_elem),
                method="monic",
                verified=ok,
                bound=n_max,
            )
        rows, _ = rows_for(n, monic=False)
        null = linalg.nullspace(fld, rows)
        for v in null:
            if v[n] != fld.zero():
                inv = fld.one() / v[n] if hasattr(v[n], "__truediv__") else None
                a_scalars = [x * inv for x in v[: n + 1]]
                b_elem = ring.from_vector([x * inv for x in v[n + 1 :]])
                ok = verify(n, a_scalars, b_elem)
                return QuasiAlgebraicReport(
                    found=True,
                    n=n,
                    a=[render_scalar(x) for x in a_scalars],
                    b=ring.render(b_elem),
                    method="general",
                    verified=ok,
                    bound=n_max,
                )
    return QuasiAlgebraicReport(
        found=False, n=None, a=None, b=None, method=None, verified=None, bound=n_max
    )


# ---------------------------------------------------------------------------
# orbit decomposition over finite products


@dataclass
class OrbitDecomposition:
    rho: list  # 1-indexed image block per component
    rho_is_permutation: bool
    orbits: list  # sorted lists of 1-indexed components
    delta_flags: list  # per component: delta(B_i) inside B_i + B_rho(i)
    ok: bool

    def as_dict(self):
        return {
            "rho": list(self.rho),
            "rho_is_permutation": self.rho_is_permutation,
            "orbits": [list(o) for o in self.orbits],
            "delta_flags": list(self.delta_flags),
            "ok": self.ok,
        }


def orbit_decompose(sigma: Endo, delta: SigmaDeriv | None = None) -> OrbitDecomposition:
    """rho from the support of sigma on block idempotents, plus orbits.

    sigma(e_i) must land inside a single block B_rho(i); a smeared or
    empty image raises RhoIllDefined with the offending component.
    """
    ring = sigma.ring
    if not isinstance(ring, ProductRing):
        raise OutOfCatalog("orbit decomposition needs a finite product ring")
    ring.verify_idempotents()
    s = ring.size()
    rho = []
    for i in range(s):
        img = sigma.apply(ring.idempotent(i))
        supp = ring.support(img)
        if len(supp) != 1:
            raise RhoIllDefined(
                f"sigma(e_{i + 1}) = {ring.render(img)} meets "
                f"{len(supp)} blocks; rho is undefined at component {i + 1}"
            )
        rho.append(supp[0])
    is_perm = sorted(rho) == list(range(s))

    # orbits: weakly connected components of i -> rho(i)
    parent = list(range(s))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(s):
        ri, rj = find(i), find(rho[i])
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups: dict = {}
    for i in range(s):
        groups.setdefault(find(i), []).append(i + 1)
    orbits = sorted(groups.values())

    flags = []
    if delta is not None and not delta.is_zero_kind:
        for i in range(s):
            allowed = {i, rho[i]}
            good = True
            for g in ring.components[i].generators():
                d = delta.apply(ring.embed(i, g))
                if not set(ring.support(d)) <= allowed:
                    good = False
                    break
            flags.append(good)
    else:
        flags = [True] * s
    return OrbitDecomposition(
        rho=[r + 1 for r in rho],
        rho_is_permutation=is_perm,
        orbits=orbits,
        delta_flags=flags,
        ok=is_perm and all(flags),
    )


def inner_delta_witness(sigma: Endo, delta: SigmaDeriv) -> RingElem | None:
    """Solve delta(r) = b r - sigma(r) b for b, exactly, or certify none."""
    ring = sigma.ring
    basis = ring.basis()
    if basis is None:
        raise Unsupported("witness solving needs a finite-dimensional ring")
    fld = ring.prime_field
    rows, rhs = [], []
    for e in basis:
        se = sigma.apply(e)
        cols = [ring.to_vector(fk * e - se * fk) for fk in basis]
        de = ring.to_vector(delta.apply(e))
        for pos in range(len(de)):
            rows.append([cols[k][pos] for k in range(len(basis))])
            rhs.append(de[pos])
    sol = linalg.solve(fld, rows, rhs)
    if sol is None:
        return None
    b = ring.from_vector(sol)
    for e in basis:
        if not (delta.apply(e) == b * e - sigma.apply(e) * b):
            raise AssertionError("solver returned a non-witness")
    return b


# ---------------------------------------------------------------------------
# uniform dimension of the center over the fixed subalgebra


_T = sympy.Symbol("T")


def _factor_over_prime_field(fld, coeffs):
    """Distinct monic factors with multiplicities, deterministically sorted."""
    if fld.char == 0:
        expr = sum(
            sympy.Rational(c.numerator, c.denominator) * _T**i
            for i, c in enumerate(coeffs)
        )
        _, factors = sympy.factor_list(expr)
    else:
        expr = sum(int(c.v) * _T**i for i, c in enumerate(coeffs))
        _, factors = sympy.factor_list(expr, modulus=fld.p)
    out = []
    for fac, mult in factors:
        poly = sympy.Poly(fac, _T)
        cs = list(reversed(poly.all_coeffs()))
        if fld.char == 0:
            sc = [Fraction(c.p, c.q) for c in [sympy.Rational(c) for c in cs]]
        else:
            sc = [fld.from_int(int(c)) for c in cs]
        lead = sc[-1]
        sc = [c / lead for c in sc] if lead != fld.one() else sc
        out.append((sc, int(mult)))
    out.sort(key=lambda fm: (len(fm[0]), [str(c) for c in fm[0]]))
    return out


def _poly_mul(fld, p, q):
    out = [fld.zero()] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def _poly_divmod(fld, p, q):
    p = list(p)
    dq = len(q) - 1
    inv_lead = fld.one() / q[-1]
    quot = [fld.zero()] * max(len(p) - dq, 1)
    while len(p) - 1 >= dq and any(x != fld.zero() for x in p):
        while p and p[-1] == fld.zero():
            p.pop()
        if len(p) - 1 < dq:
            break
        k = len(p) - 1 - dq
        c = p[-1] * inv_lead
        quot[k] = quot[k] + c
        for i, b in enumerate(q):
            p[k + i] = p[k + i] - c * b
        p.pop()
    while p and p[-1] == fld.zero():
        p.pop()
    return quot, p


def _poly_xgcd(fld, p, q):
    """(s, t, g) with s p + t q = g, g monic."""
    r0, r1 = list(p), list(q)
    s0, s1 = [fld.one()], [fld.zero()]
    t0, t1 = [fld.zero()], [fld.one()]
    while any(x != fld.zero() for x in r1):
        qt, rem = _poly_divmod(fld, r0, r1)
        r0, r1 = r1, rem if rem else [fld.zero()]
        s0, s1 = s1, _poly_sub(fld, s0, _poly_mul(fld, qt, s1))
        t0, t1 = t1, _poly_sub(fld, t0, _poly_mul(fld, qt, t1))
    g = r0
    lead = next(x for x in reversed(g) if x != fld.zero())
    inv = fld.one() / lead
    scale = lambda p: [x * inv for x in p]
    return scale(s0), scale(t0), scale(g)


def _poly_sub(fld, p, q):
    n = max(len(p), len(q))
    get = lambda r, i: r[i] if i < len(r) else fld.zero()
    return [get(p, i) - get(q, i) for i in range(n)]


def _eval_in_algebra(ring, coeffs, a, e):
    """sum coeffs[i] a^i with a^0 = e, scalars from the prime field."""
    from .twists import _scale

    out = ring.zero()
    power = e
    for c in coeffs:
        if c != ring.prime_field.zero():
            out = out + _scale(ring, power, c)
        power = power * a
    return out


def _span_basis(ring: Ring, elems: list) -> list:
    """RREF a spanning set into a deterministic basis."""
    vecs = [ring.to_vector(x) for x in elems if not ring.is_zero(x)]
    if not vecs:
        return []
    red, pivots = linalg.rref(ring.prime_field, vecs)
    fld = ring.prime_field
    out = []
    for row in red:
        if any(x != fld.zero() for x in row):
            out.append(ring.from_vector(row))
    return out


def _min_poly_in_block(ring: Ring, a: RingElem, e: RingElem):
    """Monic minimal polynomial of a in the unital algebra (e, *)."""
    fld = ring.prime_field
    powers = [e]
    vecs = [ring.to_vector(e)]
    while True:
        nxt = powers[-1] * a
        tgt = ring.to_vector(nxt)
        mat = [[vecs[j][i] for j in range(len(vecs))] for i in range(len(tgt))]
        sol = linalg.solve(fld, mat, tgt)
        if sol is not None:
            return [-c for c in sol] + [fld.one()]
        powers.append(nxt)
        vecs.append(tgt)


def primitive_idempotents(ring: Ring, algebra_basis: list) -> list:
    """Split a commutative algebra into primitive idempotent blocks.

    Splitting uses minimal polynomials of basis elements: a reducible
    one yields a Bezout idempotent; a block where every basis element
    has an irreducible squarefree minimal polynomial is a field.  A
    block carrying a repeated factor is not semisimple, and that is
    reported rather than split.
    """
    fld = ring.prime_field
    queue = [(ring.one(), list(algebra_basis))]
    finished = []
    while queue:
        e, bas = queue.pop(0)
        split = None
        squarefree = True
        for a in bas:
            mp = _min_poly_in_block(ring, a, e)
            factors = _factor_over_prime_field(fld, mp)
            if any(m > 1 for _, m in factors):
                squarefree = False
            if len(factors) > 1:
                f1, m1 = factors[0]
                g1 = f1
                for _ in range(m1 - 1):
                    g1 = _poly_mul(fld, g1, f1)
                g2, rem = _poly_divmod(fld, mp, g1)
                if any(x != fld.zero() for x in rem):
                    raise AssertionError("factor does not divide the minimal polynomial")
                s, t, g = _poly_xgcd(fld, g1, g2)
                if len(g) != 1:
                    raise AssertionError("factors are not coprime")
                e1 = _eval_in_algebra(ring, _poly_mul(fld, t, g2), a, e)
                split = e1
                break
        if split is not None:
            e1 = split
            e2 = e - e1
            if ring.is_zero(e1) or ring.is_zero(e2):
                raise AssertionError("degenerate idempotent split")
            b1 = _span_basis(ring, [e1 * b for b in bas])
            b2 = _span_basis(ring, [e2 * b for b in bas])
            queue.append((e1, b1))
            queue.append((e2, b2))
            continue
        if not squarefree:
            raise Unsupported(
                f"block at idempotent {ring.render(e)} is not semisimple "
                "(a minimal polynomial has a repeated factor)"
            )
        finished.append(e)
    return finished


@dataclass
class UdimReport:
    total: int
    blocks: list  # per primitive idempotent: dims of e_i Z and K_i = e_i A
    fixed_dim: int
    center_dim: int

    def as_dict(self):
        return {
            "total": self.total,
            "blocks": [dict(b) for b in self.blocks],
            "fixed_dim": self.fixed_dim,
            "center_dim": self.center_dim,
        }


def udim_over_fixed(sigma: Endo, delta: SigmaDeriv | None = None) -> UdimReport:
    """Uniform dimension of the center over the (sigma, delta)-constants.

    The fixed subalgebra A splits into primitive idempotent blocks
    e_i A (fields); the answer is the sum over blocks of
    dim(e_i Z) / dim(e_i A), both dimensions over the prime field.
    """
    ring = sigma.ring
    fx = fixed_subalgebra(sigma, delta)
    if not fx.basis:
        raise Unsupported("the fixed subalgebra is zero; udim is undefined")
    idems = primitive_idempotents(ring, fx.basis)
    blocks = []
    total = 0
    for e in idems:
        dz = len(_span_basis(ring, [e * z for z in fx.center_basis]))
        dk = len(_span_basis(ring, [e * a for a in fx.basis]))
        if dk == 0 or dz % dk != 0:
            raise AssertionError("block dimensions are inconsistent")
        blocks.append(
            {"idempotent": ring.render(e), "dim_eZ": dz, "dim_K": dk, "udim": dz // dk}
        )
        total += dz // dk
    return UdimReport(
        total=total,
        blocks=blocks,
        fixed_dim=len(fx.basis),
        center_dim=len(fx.center_basis),
    )


# ---------------------------------------------------------------------------
# kernel chains of variable-map twists


@dataclass
class KernelChainReport:
    chain: list  # killed variable names at steps 1..n
    stabilization_index: int | None
    stabilized: bool
    survivors: list
    induced_images: dict  # survivor -> survivor
    induced_order: int | None
    bound: int

    def as_dict(self):
        return {
            "chain": [list(step) for step in self.chain],
            "stabilization_index": self.stabilization_index,
            "stabilized": self.stabilized,
            "survivors": list(self.survivors),
            "induced_images": dict(self.induced_images),
            "induced_order": self.induced_order,
            "bound": self.bound,
        }


def kernel_chain(sigma: Endo, bound: int = 16) -> KernelChainReport:
    """ker sigma <= ker sigma^2 <= ... as killed-variable sets.

    Only variable-map twists keep every kernel a monomial ideal; a
    merge among surviving variables leaves that shape and is refused.
    """
    if not isinstance(sigma, VarMapEndo):
        raise OutOfCatalog(
            "kernel chains are tracked for variable-map twists only"
        )
    ring: PolynomialRing = sigma.ring
    images = sigma.images
    names = ring.variables
    killed: set = set()
    chain = []
    stab = None
    for step in range(1, bound + 1):
        nxt = {
            i
            for i in range(len(images))
            if images[i] is None or images[i] in killed
        }
        if nxt == killed:
            stab = step - 1
            break
        killed = nxt
        chain.append(sorted(names[i] for i in killed))
    if stab is None:
        # one more fixed-point probe at the bound
        nxt = {
            i for i in range(len(images)) if images[i] is None or images[i] in killed
        }
        if nxt == killed:
            stab = bound
    if not sigma.injective_on_survivors(killed):
        raise OutOfCatalog(
            "sigma merges surviving variables; the kernel chain leaves "
            "the killed-variable shape"
        )
    survivors = [names[i] for i in range(len(images)) if i not in killed]
    induced = {}
    order = None
    if stab is not None:
        for i in range(len(images)):
            if i not in killed:
                induced[names[i]] = names[images[i]]
        # permutation order of the survivor map
        order = 1
        idx = {v: k for k, v in enumerate(survivors)}
        perm = [idx[induced[v]] for v in survivors]
        seen = [False] * len(perm)
        for i in range(len(perm)):
            if seen[i]:
                continue
            ln = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                ln += 1
            order = _lcm(order, ln) if ln else order
    return KernelChainReport(
        chain=chain,
        stabilization_index=stab,
        stabilized=stab is not None,
        survivors=survivors,
        induced_images=induced,
        induced_order=order,
        bound=bound,
    )


def _lcm(a: int, b: int) -> int:
    import math

    return a * b // math.gcd(a, b)


# ---------------------------------------------------------------------------
# the decision pipeline


@dataclass
class PipelineReport:
    verdict: str  # "PI" | "unknown"
    path: str | None
    n: int | None
    certificate: str | None
    certificate_degree: int | None
    certificate_verified: bool | None
    identity: str | None
    nilpotency_exponent: int | None
    notes: list

    def as_dict(self):
        return {
            "verdict": self.verdict,
            "path": self.path,
            "n": self.n,
            "certificate": self.certificate,
            "certificate_degree": self.certificate_degree,
            "certificate_verified": self.certificate_verified,
            "identity": self.identity,
            "nilpotency_exponent": self.nilpotency_exponent,
            "notes": self.notes,
        }


def _is_semisimple_catalog(ring: Ring) -> bool:
    if isinstance(ring, FieldRing):
        return True
    if isinstance(ring, MatrixRing):
        return isinstance(ring.base, FieldRing)
    if isinstance(ring, ProductRing):
        return all(_is_semisimple_catalog(c) for c in ring.components)
    return False


def pi_decide_pipeline(
    ring: Ring,
    sigma: Endo,
    delta: SigmaDeriv | None = None,
    order_bound: int = 24,
    chain_bound: int = 64,
    scan_limit: int = 6,
) -> PipelineReport:
    """Decide polynomial identity behavior along the two supported paths.

    Semisimple coefficients with delta = 0: find the order n of sigma on
    the center, solve for an inner witness of sigma^n, and emit a
    verified central certificate u x^n (or the sigma-fixed norm form of
    degree n^2).  Variable-map twists on polynomial coefficients: a
    stabilized kernel chain bounds commutator nilpotency by n + 1.
    Everything else is out of catalog, with a pointer to the analysis
    that applies.
    """
    if sigma.ring != ring:
        raise RingMismatch("sigma must act on the given ring")
    if delta is not None and not delta.is_zero_kind:
        raise OutOfCatalog(
            "the pipeline covers delta = 0; for a twisted derivation run "
            "quasi_algebraic_solve and udim_over_fixed instead"
        )
    notes = []

    if isinstance(ring, PolynomialRing):
        if ring.unbounded:
            raise OutOfCatalog(
                "an unbounded variable family admits no single nilpotency "
                "bound; falsify identities with identity_search or "
                "commutator_power_check instead"
            )
        if isinstance(sigma, IdentityEndo):
            return PipelineReport(
                verdict="PI",
                path="commutative",
                n=0,
                certificate=None,
                certificate_degree=None,
                certificate_verified=None,
                identity="[f, g] = 0 for all f, g",
                nilpotency_exponent=1,
                notes=["identity twist on commutative coefficients"],
            )
        kc = kernel_chain(sigma, bound=chain_bound)
        if not kc.stabilized:
            return PipelineReport(
                verdict="unknown",
                path="shift-nilpotent",
                n=None,
                certificate=None,
                certificate_degree=None,
                certificate_verified=None,
                identity=None,
                nilpotency_exponent=None,
                notes=[f"kernel chain still growing at bound {chain_bound}"],
            )
        n = kc.stabilization_index
        notes.append(
            f"kernel chain stabilizes at index {n}; survivors {kc.survivors} "
            f"carry a permutation twist of order {kc.induced_order}"
        )
        return PipelineReport(
            verdict="PI",
            path="shift-nilpotent",
            n=n,
            certificate=None,
            certificate_degree=None,
            certificate_verified=None,
            identity=f"([f, g])^{n + 1} = 0 for all f, g",
            nilpotency_exponent=n + 1,
            notes=notes,
        )

    if _is_semisimple_catalog(ring):
        n = endo_order_on_center(sigma, bound=order_bound)
        if n is None:
            return PipelineReport(
                verdict="unknown",
                path="matrix-semisimple",
                n=None,
                certificate=None,
                certificate_degree=None,
                certificate_verified=None,
                identity=None,
                nilpotency_exponent=None,
                notes=[f"sigma order on the center exceeds bound {order_bound}"],
            )
        tau = sigma.power(n)
        witness = inner_auto_witness(tau, sigma=sigma, power=n, scan_limit=scan_limit)
        if witness is None:
            return PipelineReport(
                verdict="unknown",
                path="matrix-semisimple",
                n=n,
                certificate=None,
                certificate_degree=None,
                certificate_verified=None,
                identity=None,
                nilpotency_exponent=None,
                notes=[
                    "no inner witness for sigma^n within the 0/1/-1 scan; "
                    "a central certificate exists but was not constructed"
                ],
            )
        w = witness.w
        cert_u = None
        cert_deg = None
        if sigma.apply(w) == w:
            cert_u = ring.inverse(w)
            cert_deg = n
        elif witness.normalized is not None:
            cert_u = ring.inverse(witness.normalized)
            cert_deg = witness.normalized_power
            notes.append(
                "witness promoted to the sigma-fixed norm form; the "
                f"certificate degree is n^2 = {cert_deg}"
            )
        if cert_u is None:
            return PipelineReport(
                verdict="PI",
                path="matrix-semisimple",
                n=n,
                certificate=None,
                certificate_degree=None,
                certificate_verified=None,
                identity=None,
                nilpotency_exponent=None,
                notes=notes
                + [
                    "inner witness found but no sigma-fixed form in scan; "
                    "PI holds via the finite-over-center argument"
                ],
            )
        ctx = OreContext(ring, sigma)
        cert = ctx.monomial(cert_u, cert_deg)
        rep = is_central(cert, samples=8, seed=0)
        return PipelineReport(
            verdict="PI",
            path="matrix-semisimple",
            n=n,
            certificate=render_orepoly(cert),
            certificate_degree=cert_deg,
            certificate_verified=rep.is_central,
            identity=None,
            nilpotency_exponent=None,
            notes=notes,
        )

    raise OutOfCatalog(
        f"{ring.name()} is outside the two pipeline paths; run the module "
        "predicates (udim_over_fixed, orbit_decompose, identity_search) directly"
    )


# ---------------------------------------------------------------------------
# closure probes under sigma-powers


@dataclass
class JordanReport:
    depth: int
    probes: list  # {elem, first, ascending_ok}

    def as_dict(self):
        return {"depth": self.depth, "probes": [dict(p) for p in self.probes]}


def jordan_closure_probe(
    sub: MatrixSubring,
    sigma_ambient: Endo,
    probes: list | None = None,
    n_random: int = 5,
    depth: int = 6,
    seed: int = 0,
) -> JordanReport:
    """First i <= depth with sigma^i(a) inside the subring, per probe.

    Membership is upward closed along the chain once it holds, because
    sigma maps the subring into itself; every probe re-verifies that.
    Random probes are subring samples divided by 2 or 4 in the ambient
    ring, which is where interesting halves live.
    """
    amb = sub.ambient
    if sigma_ambient.ring != amb:
        raise RingMismatch("the probe twist must act on the ambient ring")
    rng = random.Random(seed)
    todo = list(probes or [])
    half = amb.base.element({(0,): Fraction(1, 2)})
    for _ in range(n_random):
        a = sub.to_ambient(sub.sample(rng))
        a = amb.scalar(half ** rng.randint(1, 2)) * a
        todo.append(a)
    records = []
    for a in todo:
        if a.ring != amb:
            a = sub.to_ambient(a)
        flags = []
        cur = a
        for i in range(depth + 1):
            flags.append(membership(cur, sub))
            cur = sigma_ambient.apply(cur)
        first = flags.index(True) if True in flags else None
        ascending = all(flags[i] for i in range(first, depth + 1)) if first is not None else True
        records.append(
            {
                "elem": amb.render(a),
                "first": first,
                "ascending_ok": ascending,
            }
        )
    return JordanReport(depth=depth, probes=records)
