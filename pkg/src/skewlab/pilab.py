"""Polynomial identity evaluation, search, and worked replays.

The standard identity S_m is evaluated two independent ways (signed
permutation sum and the first-slot cofactor expansion) so one can
cross-check the other.  Searches are exhaustive over small declared
pools or seeded-random, never silent about which.  replay() re-runs
named worked scenarios and compares against a frozen expected-outcome
table.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass

from .errors import (
    ArityMismatch,
    BudgetExceeded,
    ContextMismatch,
    OutOfCatalog,
    UnknownExample,
)
from .orepoly import OreContext, OrePoly, ore_commutator, ore_mul, render_orepoly
from .rings import (
    MatrixRing,
    PolynomialRing,
    ProductRing,
    RingElem,
    Ring,
    LocalizedRing,
    MatrixSubring,
    field_ring,
    example_constrained_ring,
    membership,
)
from .scalars import QQ, Fraction
from .twists import (
    CompositeEndo,
    endo_component,
    endo_conj,
    endo_identity,
    endo_inner,
    endo_lift,
    endo_var_map,
    deriv_zero,
    fixed_subalgebra,
    shift_endo,
    validate_twist,
)


def _permutation_sign(perm) -> int:
    inv = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inv += 1
    return -1 if inv % 2 else 1


def _common_zero(elems):
    first = elems[0]
    if isinstance(first, OrePoly):
        ctx = first.ctx
        for e in elems:
            if not isinstance(e, OrePoly) or e.ctx != ctx:
                raise ContextMismatch("arguments come from different skew contexts")
        return ctx.zero()
    if isinstance(first, RingElem):
        ring = first.ring
        for e in elems:
            if not isinstance(e, RingElem) or e.ring != ring:
                raise ContextMismatch("arguments come from different rings")
        return ring.zero()
    raise ContextMismatch("arguments must be ring elements or skew polynomials")


def standard_identity_eval(elems, m: int | None = None, method: str = "permutation"):
    """S_m(a_1..a_m) = sum over permutations of sign * product.

    method "permutation" walks all m! terms; "recursive" expands along
    the first slot, S_m = sum_j (-1)^(j+1) a_j S_(m-1)(rest).  Both are
    exact; they exist to check each other.
    """
    elems = list(elems)
    if m is None:
        m = len(elems)
    if m != len(elems):
        raise ArityMismatch(f"S_{m} takes {m} arguments, got {len(elems)}")
    if m > 6:
        raise BudgetExceeded("S_m beyond m = 6 (720 terms per tuple) is out of budget")
    if m == 0:
        raise ArityMismatch("S_0 is not defined")
    zero = _common_zero(elems)
    if method == "permutation":
        acc = zero
        for perm in itertools.permutations(range(m)):
            term = elems[perm[0]]
            for idx in perm[1:]:
                term = term * elems[idx]
            acc = acc + term if _permutation_sign(perm) == 1 else acc - term
        return acc
    if method == "recursive":
        if m == 1:
            return elems[0]
        acc = zero
        for j in range(m):
            rest = elems[:j] + elems[j + 1 :]
            sub = standard_identity_eval(rest, m - 1, method="recursive")
            term = elems[j] * sub
            acc = acc + term if j % 2 == 0 else acc - term
        return acc
    raise ValueError(f"unknown evaluation method {method!r}")


@dataclass
class IdentitySpec:
    kind: str  # "standard" | "standard-power" | "commutator-power"
    m: int = 2
    k: int = 1

    def arity(self) -> int:
        return self.m if self.kind.startswith("standard") else 2

    def display(self) -> str:
        if self.kind == "standard":
            return f"S_{self.m} = 0"
        if self.kind == "standard-power":
            return f"(S_{self.m})^{self.k} = 0"
        return f"([f, g])^{self.k} = 0"

    def evaluate(self, args):
        if self.kind == "standard":
            return standard_identity_eval(args, self.m)
        if self.kind == "standard-power":
            return standard_identity_eval(args, self.m) ** self.k
        if self.kind == "commutator-power":
            a, b = args
            c = a * b - b * a
            return c ** self.k
        raise ValueError(f"unknown identity kind {self.kind!r}")


@dataclass
class SearchReport:
    identity: str
    strategy: str  # "exhaustive" | "sampled"
    outcome: str  # "counterexample" | "holds-on-pool" | "no-counterexample" | "budget-exhausted"
    tried: int
    pool_size: int | None
    witness: dict | None
    seed: int | None

    @property
    def found(self) -> bool:
        return self.outcome == "counterexample"

    def as_dict(self):
        return {
            "identity": self.identity,
            "strategy": self.strategy,
            "outcome": self.outcome,
            "tried": self.tried,
            "pool_size": self.pool_size,
            "witness": self.witness,
            "seed": self.seed,
        }


def _render_any(v) -> str:
    if isinstance(v, OrePoly):
        return render_orepoly(v)
    return v.ring.render(v)


def default_pool(target, pool_deg: int = 2, x_powers: int = 1):
    """Small deterministic element pool for exhaustive searches.

    Matrix rings contribute their matrix units; polynomial rings the
    monomials of total degree <= pool_deg; products and fields their
    generators.  For a skew context the ring pool is crossed with
    powers x^0..x^(x_powers).
    """
    if isinstance(target, OreContext):
        base = default_pool(target.ring, pool_deg=pool_deg)
        out = []
        for e in range(x_powers + 1):
            for c in base:
                out.append(target.monomial(c, e))
        return out
    ring = target
    if isinstance(ring, MatrixRing):
        return [ring.unit(i, j) for i in range(ring.n) for j in range(ring.n)]
    if isinstance(ring, PolynomialRing):
        out = []
        nv = ring.nvars()
        for total in range(pool_deg + 1):
            for mono in itertools.combinations_with_replacement(range(nv), total):
                exps = [0] * nv
                for i in mono:
                    exps[i] += 1
                if ring.truncate is not None and exps[0] >= ring.truncate:
                    continue
                out.append(ring.monomial(tuple(exps)))
        return out
    return list(ring.generators())


def identity_search(
    target,
    spec: IdentitySpec,
    strategy: str = "exhaustive",
    budget: int = 2000,
    seed: int = 0,
    pool: list | None = None,
    pool_deg: int = 2,
    sample_deg: int = 2,
) -> SearchReport:
    """Hunt for a nonzero value of the identity over tuples from target.

    Exhaustive strategy: tuples from the declared pool in product
    order, stopping at the first counterexample or the budget.
    Sampled strategy: seeded random tuples.  The outcome never claims
    more than what was actually tried.
    """
    arity = spec.arity()
    if strategy == "exhaustive":
        p = pool if pool is not None else default_pool(target, pool_deg=pool_deg)
        tried = 0
        for tup in itertools.product(p, repeat=arity):
            if tried >= budget:
                return SearchReport(
                    identity=spec.display(),
                    strategy=strategy,
                    outcome="budget-exhausted",
                    tried=tried,
                    pool_size=len(p),
                    witness=None,
                    seed=None,
                )
            val = spec.evaluate(list(tup))
            tried += 1
            nz = not (val.is_zero() if isinstance(val, OrePoly) else val.ring.is_zero(val))
            if nz:
                return SearchReport(
                    identity=spec.display(),
                    strategy=strategy,
                    outcome="counterexample",
                    tried=tried,
                    pool_size=len(p),
                    witness={
                        "args": [_render_any(a) for a in tup],
                        "value": _render_any(val),
                        "index": tried - 1,
                    },
                    seed=None,
                )
        return SearchReport(
            identity=spec.display(),
            strategy=strategy,
            outcome="holds-on-pool",
            tried=tried,
            pool_size=len(p),
            witness=None,
            seed=None,
        )
    if strategy == "sampled":
        rng = random.Random(seed)
        tried = 0
        for _ in range(budget):
            if isinstance(target, OreContext):
                tup = [target.sample(rng, deg=sample_deg) for _ in range(arity)]
            else:
                tup = [target.sample(rng) for _ in range(arity)]
            val = spec.evaluate(tup)
            tried += 1
            nz = not (val.is_zero() if isinstance(val, OrePoly) else val.ring.is_zero(val))
            if nz:
                return SearchReport(
                    identity=spec.display(),
                    strategy=strategy,
                    outcome="counterexample",
                    tried=tried,
                    pool_size=None,
                    witness={
                        "args": [_render_any(a) for a in tup],
                        "value": _render_any(val),
                        "index": tried - 1,
                    },
                    seed=seed,
                )
        return SearchReport(
            identity=spec.display(),
            strategy=strategy,
            outcome="no-counterexample",
            tried=tried,
            pool_size=None,
            witness=None,
            seed=seed,
        )
    raise ValueError(f"unknown strategy {strategy!r}")


def commutator_power_check(
    ctx: OreContext,
    k: int,
    strategy: str = "sampled",
    budget: int = 200,
    seed: int = 0,
    pool_deg: int = 1,
    sample_deg: int = 2,
) -> SearchReport:
    """Does ([f, g])^k vanish?  Same reporting contract as identity_search."""
    spec = IdentitySpec(kind="commutator-power", k=k)
    return identity_search(
        ctx,
        spec,
        strategy=strategy,
        budget=budget,
        seed=seed,
        pool_deg=pool_deg,
        sample_deg=sample_deg,
    )


# ---------------------------------------------------------------------------
# worked replays


EXPECTED_VERSION = "v1"

EXPECTED = {
    "ex-2.1": {
        "laws_ok": True,
        "injective": True,
        "e12_member": True,
        "e12_in_image": False,
        "sigma_fixes_diag12": True,
        "localized_all_certified": True,
        "jordan_half_e12": 1,
        "jordan_half_e21": None,
    },
    "ex-2.10-orepi": {
        "associativity_failures": 0,
        "graded_failures": 0,
        "embedding_failures": 0,
    },
    "ex-picenter-uxn": {
        "ux_central": True,
        "leading_ok": True,
        "x_central": False,
        "pipeline_verdict": "PI",
        "certificate_degree": 1,
        "certificate_verified": True,
    },
    "ex-3.9-conjugation(1)": {"udim": 2, "fixed_dim": 1},
    "ex-3.9-conjugation(2)": {"udim": 4, "fixed_dim": 2},
    "ex-3.9-conjugation(3)": {"udim": 6, "fixed_dim": 3},
    "ex-3.9-conjugation(4)": {"udim": 8, "fixed_dim": 4},
    "ex-3.9-conjugation(5)": {"udim": 10, "fixed_dim": 5},
    "ex-4.8-truncated-shift(1)": {
        "stabilization_index": 1,
        "nilpotency_exponent": 2,
        "pipeline_verdict": "PI",
        "power_n_counterexample": True,
    },
    "ex-4.8-truncated-shift(2)": {
        "stabilization_index": 2,
        "nilpotency_exponent": 3,
        "pipeline_verdict": "PI",
        "power_n_counterexample": True,
    },
    "ex-4.8-truncated-shift(3)": {
        "stabilization_index": 3,
        "nilpotency_exponent": 4,
        "pipeline_verdict": "PI",
        "power_n_counterexample": True,
    },
    "ex-4.8-truncated-shift(4)": {
        "stabilization_index": 4,
        "nilpotency_exponent": 5,
        "pipeline_verdict": "PI",
        "power_n_counterexample": True,
    },
    "ex-4.9-infinite-shift(2,1,3)": {
        "s_nonzero": True,
        "single_top_coefficient": True,
        "top_power_unit_cofactor": True,
        "power_nonzero": True,
        "twisted_product_matches": True,
        "pipeline_out_of_catalog": True,
    },
    "ex-4.9-infinite-shift(2,2,5)": {
        "s_nonzero": True,
        "single_top_coefficient": True,
        "top_power_unit_cofactor": True,
        "power_nonzero": True,
        "twisted_product_matches": True,
        "pipeline_out_of_catalog": True,
    },
    "ex-4.9-infinite-shift(3,1,4)": {
        "s_nonzero": True,
        "single_top_coefficient": True,
        "top_power_unit_cofactor": True,
        "power_nonzero": True,
        "twisted_product_matches": True,
        "pipeline_out_of_catalog": True,
    },
    "ex-4.9-infinite-shift(3,2,7)": {
        "s_nonzero": True,
        "single_top_coefficient": True,
        "top_power_unit_cofactor": True,
        "power_nonzero": True,
        "twisted_product_matches": True,
        "pipeline_out_of_catalog": True,
    },
}


@dataclass
class ReplayReport:
    example: str
    params: dict
    checks: list  # {name, passed, detail}
    passed: bool
    expected_version: str

    def as_dict(self):
        return {
            "example": self.example,
            "params": dict(self.params),
            "checks": [dict(c) for c in self.checks],
            "passed": self.passed,
            "expected_version": self.expected_version,
        }


def _check(checks, name, passed, detail=""):
    checks.append({"name": name, "passed": bool(passed), "detail": str(detail)})
    return passed


def _expected_check(checks, key, computed):
    exp = EXPECTED.get(key)
    if exp is None:
        _check(
            checks,
            f"expected outcomes {EXPECTED_VERSION}",
            True,
            f"no frozen row for {key}; computed {computed}",
        )
        return
    diff = {k: (computed.get(k), v) for k, v in exp.items() if computed.get(k) != v}
    _check(
        checks,
        f"expected outcomes {EXPECTED_VERSION}",
        not diff,
        f"mismatches: {diff}" if diff else f"all {len(exp)} frozen values match",
    )


def _replay_constrained_endo(seed: int):
    R = example_constrained_ring()
    amb = R.ambient
    u = amb.diag([1, 2])
    sigma = endo_inner(R, u, ambient=amb)
    checks = []
    computed = {}

    rep = validate_twist(sigma, deriv_zero(sigma), samples=48, seed=seed)
    computed["laws_ok"] = rep.ok
    computed["injective"] = rep.injective
    _check(checks, "endo laws on generators and samples", rep.ok, f"laws {rep.laws}")
    _check(checks, "sigma is injective", rep.injective is True)

    e12 = amb.unit(0, 1)
    computed["e12_member"] = membership(e12, R)
    _check(checks, "E12 lies in the subring", computed["e12_member"])
    pre = sigma.preimage(R.from_ambient(e12))
    computed["e12_in_image"] = pre is not None
    _check(
        checks,
        "E12 has no preimage (sigma not onto)",
        pre is None,
        "preimage would need the half-integer constant E12/2",
    )

    uR = R.from_ambient(u)
    computed["sigma_fixes_diag12"] = sigma.apply(uR) == uR
    _check(checks, "sigma fixes diag(1, 2)", computed["sigma_fixes_diag12"])

    loc = LocalizedRing(R, R.from_int(2))
    lifted = endo_lift(loc, sigma)
    rng = random.Random(seed)
    certified = []
    for _ in range(20):
        t = loc.sample(rng)
        p = lifted.preimage(t)
        certified.append(p is not None and lifted.apply(p) == t)
    computed["localized_all_certified"] = all(certified)
    _check(
        checks,
        "inverting 2 makes sigma onto (20 probes)",
        computed["localized_all_certified"],
        f"{sum(certified)}/20 certified preimages",
    )

    from .centerlab import jordan_closure_probe

    sig_amb = endo_inner(amb, u)
    half = Fraction(1, 2)
    p1 = amb.unit(0, 1, scale=half)
    p2 = amb.unit(1, 0, scale=half)
    jr = jordan_closure_probe(R, sig_amb, probes=[p1, p2], n_random=5, depth=5, seed=seed)
    computed["jordan_half_e12"] = jr.probes[0]["first"]
    computed["jordan_half_e21"] = jr.probes[1]["first"]
    _check(
        checks,
        "sigma(E12/2) enters the subring at step 1",
        jr.probes[0]["first"] == 1,
        f"first = {jr.probes[0]['first']}",
    )
    _check(
        checks,
        "E21/2 stays outside through depth 5",
        jr.probes[1]["first"] is None,
    )
    _check(
        checks,
        "membership is upward closed along all probes",
        all(p["ascending_ok"] for p in jr.probes),
    )
    _expected_check(checks, "ex-2.1", computed)
    return {}, checks


def _replay_ore_consistency(seed: int):
    from .orepoly import associativity_trial, graded_lead_check

    R = example_constrained_ring()
    amb = R.ambient
    u = amb.diag([1, 2])
    sigma = endo_inner(R, u, ambient=amb)
    ctx = OreContext(R, sigma)
    sig_amb = endo_inner(amb, u)
    ctx_amb = OreContext(amb, sig_amb)
    rng = random.Random(seed)
    checks = []
    computed = {}

    fails = sum(1 for _ in range(30) if not associativity_trial(ctx, rng, deg=2))
    computed["associativity_failures"] = fails
    _check(checks, "associativity on 30 sampled triples", fails == 0, f"{fails} failures")

    gfails = 0
    zero_branches = 0
    for _ in range(20):
        f = ctx.sample(rng, deg=2)
        g = ctx.sample(rng, deg=2)
        if f.is_zero() or g.is_zero():
            continue
        gc = graded_lead_check(f, g)
        if gc.zero_branch:
            zero_branches += 1
        if not gc.graded_matches:
            gfails += 1
    computed["graded_failures"] = gfails
    _check(
        checks,
        "leading terms match the delta = 0 graded product",
        gfails == 0,
        f"{gfails} failures, {zero_branches} zero-branch pairs",
    )

    efails = 0
    for _ in range(15):
        f = ctx.sample(rng, deg=2)
        g = ctx.sample(rng, deg=2)
        fg = ore_mul(f, g)
        lift = lambda p: OrePoly(ctx_amb, [R.to_ambient(c) for c in p.coeffs])
        if ore_mul(lift(f), lift(g)) != lift(fg):
            efails += 1
    computed["embedding_failures"] = efails
    _check(
        checks,
        "products agree with the ambient matrix context",
        efails == 0,
        f"{efails} failures",
    )
    _expected_check(checks, "ex-2.10-orepi", computed)
    return {}, checks


def _replay_central_ux(seed: int):
    from .centerlab import central_leading_checks, is_central, pi_decide_pipeline

    M2 = MatrixRing(field_ring("Q"), 2)
    u = M2.unit(0, 1) + M2.unit(1, 0)
    sigma = endo_inner(M2, u)
    ctx = OreContext(M2, sigma)
    checks = []
    computed = {}

    ux = ctx.monomial(u, 1)
    rep = is_central(ux, seed=seed)
    computed["ux_central"] = rep.is_central
    _check(checks, "u x is central for u = antidiag(1, 1)", rep.is_central)

    lead = central_leading_checks(ux)
    computed["leading_ok"] = lead.all_pass
    _check(
        checks,
        "leading coefficient: sigma-fixed, twist relation, regular",
        lead.all_pass,
    )

    repx = is_central(ctx.x(), seed=seed)
    computed["x_central"] = repx.is_central
    _check(
        checks,
        "bare x is not central (negative control)",
        not repx.is_central,
        f"commutator witness against {repx.failures[0]['against']}" if repx.failures else "",
    )

    pipe = pi_decide_pipeline(M2, sigma)
    computed["pipeline_verdict"] = pipe.verdict
    computed["certificate_degree"] = pipe.certificate_degree
    computed["certificate_verified"] = pipe.certificate_verified
    _check(
        checks,
        "pipeline emits a verified degree-1 certificate",
        pipe.verdict == "PI"
        and pipe.certificate_degree == 1
        and pipe.certificate_verified is True,
        f"certificate {pipe.certificate}",
    )
    _expected_check(checks, "ex-picenter-uxn", computed)
    return {}, checks


def _replay_conjugation(n: int, seed: int):
    from .centerlab import udim_over_fixed

    ring = ProductRing([field_ring("Q(i)")] * n)
    sigma = endo_conj(ring)
    checks = []
    computed = {}

    rep = validate_twist(sigma, deriv_zero(sigma), samples=32, seed=seed)
    _check(checks, "conjugation laws hold", rep.ok and rep.injective is True)

    fx = fixed_subalgebra(sigma)
    computed["fixed_dim"] = fx.dim()
    _check(
        checks,
        f"fixed subalgebra has dimension {n}",
        fx.dim() == n,
        f"basis {[ring.render(b) for b in fx.basis]}",
    )

    ud = udim_over_fixed(sigma)
    computed["udim"] = ud.total
    _check(checks, f"udim equals 2n = {2 * n}", ud.total == 2 * n, f"blocks {ud.blocks}")

    if n > 1:
        rot = endo_component(ring, [(i + 1) % n for i in range(n)])
        rot_inv = endo_component(ring, [(i - 1) % n for i in range(n)])
        conj_perm = CompositeEndo(ring, [rot_inv, sigma, rot])
        ud2 = udim_over_fixed(conj_perm)
        _check(
            checks,
            "udim is invariant under permuting the components",
            ud2.total == ud.total,
            f"{ud2.total} after a cyclic relabeling",
        )
    _expected_check(checks, f"ex-3.9-conjugation({n})", computed)
    return {"n": n}, checks


def _replay_truncated_shift(n: int, seed: int):
    from .centerlab import kernel_chain, pi_decide_pipeline

    ring = PolynomialRing(QQ, [f"y{i + 1}" for i in range(n)])
    sigma = shift_endo(ring)
    ctx = OreContext(ring, sigma)
    checks = []
    computed = {}

    kc = kernel_chain(sigma)
    computed["stabilization_index"] = kc.stabilization_index
    _check(
        checks,
        f"kernel chain stabilizes at index {n} with all variables killed",
        kc.stabilization_index == n and (not kc.survivors),
        f"chain {kc.chain}",
    )

    pipe = pi_decide_pipeline(ring, sigma)
    computed["pipeline_verdict"] = pipe.verdict
    computed["nilpotency_exponent"] = pipe.nilpotency_exponent
    _check(
        checks,
        f"pipeline: PI with commutator nilpotency exponent {n + 1}",
        pipe.verdict == "PI" and pipe.nilpotency_exponent == n + 1,
        pipe.identity or "",
    )

    found = commutator_power_check(
        ctx, n, strategy="exhaustive", budget=3000, pool_deg=1
    )
    computed["power_n_counterexample"] = found.found
    _check(
        checks,
        f"([f, g])^{n} has an exhaustive counterexample",
        found.found,
        f"args {found.witness['args']}" if found.witness else "",
    )

    none = commutator_power_check(ctx, n + 1, strategy="sampled", budget=150, seed=seed)
    _check(
        checks,
        f"([f, g])^{n + 1} vanishes on 150 sampled pairs",
        none.outcome == "no-counterexample",
        none.outcome,
    )
    _expected_check(checks, f"ex-4.8-truncated-shift({n})", computed)
    return {"n": n}, checks


def _replay_infinite_shift(m: int, k: int, n: int, seed: int):
    from .centerlab import pi_decide_pipeline

    if n <= m * k:
        raise UnknownExample(
            f"parameters need n > m*k, got (m, k, n) = ({m}, {k}, {n})"
        )
    nv = n + m - 1
    ring = PolynomialRing(QQ, [f"y{i + 1}" for i in range(nv)], unbounded=True)
    sigma = shift_endo(ring)
    ctx = OreContext(ring, sigma)
    checks = []
    computed = {}

    args = [ctx.monomial(ring.var(f"y{j}"), 1) for j in range(n, n + m)]
    s = standard_identity_eval(args, m)
    computed["s_nonzero"] = not s.is_zero()
    _check(
        checks,
        f"S_{m}(y{n} x, ..., y{n + m - 1} x) is nonzero",
        computed["s_nonzero"],
    )

    single = s.degree() == m and all(
        ring.is_zero(s.coeff(i)) for i in range(m)
    )
    computed["single_top_coefficient"] = single
    _check(checks, f"S concentrates in degree {m}", single)

    c = s.coeff(m)
    yn = ring.variables.index(f"y{n}")
    cof = ring.coefficient_of_power(c, yn, m)
    unit_cof = (ring.degree_in(c, yn) == m) and (cof == ring.one())
    computed["top_power_unit_cofactor"] = unit_cof
    _check(
        checks,
        f"top coefficient is y{n}^{m} + lower y{n}-degree terms",
        unit_cof,
        f"coefficient {ring.render(c)}",
    )

    if (m, k, n) == (2, 1, 3):
        y2, y3, y4 = ring.var("y2"), ring.var("y3"), ring.var("y4")
        _check(
            checks,
            "the x^2 coefficient equals y3^2 - y2*y4",
            c == y3 * y3 - y2 * y4,
            ring.render(c),
        )

    sk = s ** k
    computed["power_nonzero"] = not sk.is_zero()
    _check(checks, f"S^{k} is nonzero", computed["power_nonzero"])

    # prod = c * sigma^m(c) * ... * sigma^((k-1)m)(c), multiplied left to right
    prod = ring.one()
    cur = c
    for _ in range(k):
        prod = prod * cur
        for _ in range(m):
            cur = sigma.apply(cur)
    twisted_ok = (
        sk.degree() == m * k
        and sk.coeff(m * k) == prod
        and all(ring.is_zero(sk.coeff(i)) for i in range(m * k))
    )
    computed["twisted_product_matches"] = twisted_ok
    _check(
        checks,
        f"S^{k} equals the twisted product of sigma^(jm) shifts times x^{m * k}",
        twisted_ok,
    )

    try:
        pi_decide_pipeline(ring, sigma)
        computed["pipeline_out_of_catalog"] = False
        _check(checks, "pipeline refuses the unbounded family", False)
    except OutOfCatalog as e:
        computed["pipeline_out_of_catalog"] = True
        _check(checks, "pipeline refuses the unbounded family", True, str(e))

    _expected_check(checks, f"ex-4.9-infinite-shift({m},{k},{n})", computed)
    return {"m": m, "k": k, "n": n}, checks


_REPLAY_BUILDERS = {
    "ex-2.1": (_replay_constrained_endo, 0),
    "ex-2.10-orepi": (_replay_ore_consistency, 0),
    "ex-picenter-uxn": (_replay_central_ux, 0),
    "ex-3.9-conjugation": (_replay_conjugation, 1),
    "ex-4.8-truncated-shift": (_replay_truncated_shift, 1),
    "ex-4.9-infinite-shift": (_replay_infinite_shift, 3),
}

REPLAY_DEFAULTS = [
    "ex-2.1",
    "ex-2.10-orepi",
    "ex-picenter-uxn",
    "ex-3.9-conjugation(3)",
    "ex-4.8-truncated-shift(2)",
    "ex-4.9-infinite-shift(2,1,3)",
]

_ID_RE = re.compile(r"^([a-z0-9.\-]+?)(?:\((\d+(?:,\d+)*)\))?$")


def replay(example_id: str, seed: int = 0) -> ReplayReport:
    """Re-run a named worked scenario and check its frozen outcomes."""
    mt = _ID_RE.match(example_id.strip())
    if not mt:
        raise UnknownExample(f"malformed example id {example_id!r}")
    name, argstr = mt.group(1), mt.group(2)
    if name not in _REPLAY_BUILDERS:
        known = ", ".join(sorted(_REPLAY_BUILDERS))
        raise UnknownExample(f"unknown example {name!r}; known: {known}")
    fn, nargs = _REPLAY_BUILDERS[name]
    args = [int(x) for x in argstr.split(",")] if argstr else []
    if not args and nargs:
        defaults = {1: [3] if name == "ex-3.9-conjugation" else [2], 3: [2, 1, 3]}
        args = defaults[nargs]
    if len(args) != nargs:
        raise UnknownExample(
            f"{name} takes {nargs} integer parameter(s), got {len(args)}"
        )
    params, checks = fn(*args, seed)
    if not params:
        params = dict(zip(["m", "k", "n"], args)) if len(args) == 3 else (
            {"n": args[0]} if args else {}
        )
    return ReplayReport(
        example=example_id.strip(),
        params=params,
        checks=checks,
        passed=all(c["passed"] for c in checks),
        expected_version=EXPECTED_VERSION,
    )
