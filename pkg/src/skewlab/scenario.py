"""Scenario files: JSON descriptions of rings, twists, and runs.

A scenario declares named rings, named twists over them, and a list
of runs.  Everything user-facing is parsed here, eagerly, so that a
malformed file fails before any analysis starts: structural problems
raise ScenarioError, bad element syntax raises BadLiteral with a
position, and references to undeclared names raise DanglingReference.
Analysis failures during execution never raise; they become error
records in the output.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .errors import (
    BadLiteral,
    DanglingReference,
    OutOfCatalog,
    ScenarioError,
    SkewlabError,
    Unsupported,
)
from .orepoly import OreContext, OrePoly, render_orepoly
from .pilab import IdentitySpec, commutator_power_check, identity_search
from .rings import (
    FieldRing,
    LocalizedRing,
    MatrixRing,
    MatrixSubring,
    PolynomialRing,
    ProductRing,
    Ring,
    RingElem,
)
from .scalars import GaussianRational, field_by_name
from .twists import (
    Endo,
    SigmaDeriv,
    VarMapEndo,
    deriv_inner,
    deriv_partial,
    deriv_zero,
    endo_component,
    endo_conj,
    endo_identity,
    endo_inner,
    endo_lift,
    endo_var_map,
    fixed_subalgebra,
    shift_endo,
    validate_twist,
)


# ---------------------------------------------------------------------------
# element literals

_TOKEN_RE = re.compile(r"(\d+)|([A-Za-z][A-Za-z0-9_]*)|([+\-*/^()\[\],])|(\S)")


def _tokenize(text: str):
    toks = []
    for mt in _TOKEN_RE.finditer(text):
        num, name, sym, bad = mt.groups()
        if bad is not None:
            raise BadLiteral(f"unexpected character {bad!r} at position {mt.start()} in {text!r}")
        if num is not None:
            toks.append(("int", int(num), mt.start()))
        elif name is not None:
            toks.append(("name", name, mt.start()))
        else:
            toks.append((sym, sym, mt.start()))
    return toks


def _ring_invert(ring: Ring, b: RingElem) -> RingElem | None:
    try:
        return ring.inverse(b)
    except Unsupported:
        pass
    try:
        return ring.divide_central(ring.one(), b)
    except SkewlabError:
        return None


class LiteralParser:
    """Recursive-descent parser for element expressions.

    Grammar: expr = ['-'] term (('+'|'-') term)*,
    term = factor (('*'|'/') factor)*, factor = atom ['^' int].
    Atoms: integers, 'i' in Q(i), polynomial variables, 'x' for the
    skew variable (Ore context only), 'I', 'Eij' and 'diag(..)' in
    matrix rings, '[[..],[..]]' matrices, '(a, b, ..)' product tuples.
    """

    def __init__(self, text: str, ring: Ring | None = None, ctx: OreContext | None = None):
        if ctx is None and ring is None:
            raise ValueError("need a ring or a context")
        self.text = text
        self.top_ring = ctx.ring if ctx is not None else ring
        self.ctx = ctx
        self.toks = _tokenize(text)
        self.i = 0

    # -- token plumbing -------------------------------------------------
    def _peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", None, len(self.text))

    def _next(self):
        t = self._peek()
        self.i += 1
        return t

    def _expect(self, kind: str):
        t = self._next()
        if t[0] != kind:
            raise BadLiteral(
                f"expected {kind!r} but found {t[1]!r} at position {t[2]} in {self.text!r}"
            )
        return t

    def _fail(self, msg: str, tok=None):
        pos = (tok or self._peek())[2]
        raise BadLiteral(f"{msg} at position {pos} in {self.text!r}")

    # -- entry point ----------------------------------------------------
    def parse(self):
        v = self._expr(self.top_ring, self.ctx)
        t = self._peek()
        if t[0] != "end":
            self._fail(f"trailing input {t[1]!r}")
        return v

    # -- grammar --------------------------------------------------------
    def _lift(self, v, ctx):
        if ctx is not None and isinstance(v, RingElem):
            return ctx.constant(v)
        return v

    def _expr(self, ring, ctx):
        neg = False
        if self._peek()[0] == "-":
            self._next()
            neg = True
        v = self._term(ring, ctx)
        if neg:
            v = -v
        while self._peek()[0] in ("+", "-"):
            op = self._next()[0]
            w = self._term(ring, ctx)
            v = v + w if op == "+" else v - w
        return v

    def _term(self, ring, ctx):
        v = self._factor(ring, ctx)
        while self._peek()[0] in ("*", "/"):
            op, _, pos = self._next()
            w = self._factor(ring, ctx)
            if op == "*":
                v = v * w
                continue
            if isinstance(w, OrePoly):
                if w.degree() != 0:
                    self._fail("can only divide by a degree-0 unit", (op, op, pos))
                w = w.coeff(0)
            inv = _ring_invert(ring, w)
            if inv is None:
                self._fail(f"division by non-unit {ring.render(w)}", (op, op, pos))
            v = v * self._lift(inv, ctx)
        return v

    def _factor(self, ring, ctx):
        v = self._atom(ring, ctx)
        if self._peek()[0] == "^":
            self._next()
            t = self._next()
            if t[0] != "int":
                self._fail("exponent must be a nonnegative integer", t)
            v = v ** t[1]
        return v

    def _atom(self, ring, ctx):
        t = self._next()
        kind, val, pos = t
        if kind == "int":
            return self._lift(ring.from_int(val), ctx)
        if kind == "name":
            return self._name_atom(ring, ctx, val, t)
        if kind == "(":
            if isinstance(ring, ProductRing):
                save = self.i
                try:
                    return self._tuple_atom(ring, ctx)
                except BadLiteral:
                    self.i = save
            v = self._expr(ring, ctx)
            self._expect(")")
            return v
        if kind == "[":
            if isinstance(ring, LocalizedRing):
                v = self._matrix_atom(ring.base, None, t)
                return self._lift(ring.embed(v), ctx)
            return self._matrix_atom(ring, ctx, t)
        if kind == "end":
            self._fail("unexpected end of input", t)
        self._fail(f"unexpected {val!r}", t)

    def _name_atom(self, ring, ctx, name, tok):
        if name == "x" and ctx is not None:
            return ctx.x()
        if isinstance(ring, PolynomialRing) and name in ring.variables:
            return self._lift(ring.var(name), ctx)
        if name == "i" and isinstance(ring, FieldRing) and ring.field.name == "Q(i)":
            return self._lift(ring.element(GaussianRational(0, 1)), ctx)
        if isinstance(ring, (MatrixRing, MatrixSubring)):
            if name == "I":
                return self._lift(ring.one(), ctx)
            mt = re.fullmatch(r"E(\d)(\d)", name)
            if mt:
                r, c = int(mt.group(1)), int(mt.group(2))
                if not (1 <= r <= ring.n and 1 <= c <= ring.n):
                    self._fail(f"{name} is outside a {ring.n}x{ring.n} matrix", tok)
                return self._lift(self._unit(ring, r - 1, c - 1), ctx)
            if name == "diag":
                self._expect("(")
                base = ring.poly if isinstance(ring, MatrixSubring) else ring.base
                entries = [self._expr(base, None)]
                while self._peek()[0] == ",":
                    self._next()
                    entries.append(self._expr(base, None))
                self._expect(")")
                if len(entries) != ring.n:
                    self._fail(f"diag needs {ring.n} entries, got {len(entries)}", tok)
                return self._lift(self._diag(ring, entries), ctx)
        if isinstance(ring, LocalizedRing):
            save = self.i
            self.i -= 1
            inner = self._atom_in_base(ring, ctx, save)
            if inner is not None:
                return inner
        self._fail(f"unknown name {name!r} in {ring.name()}", tok)

    def _atom_in_base(self, ring: LocalizedRing, ctx, restore):
        try:
            v = self._atom(ring.base, None)
        except BadLiteral:
            self.i = restore
            return None
        return self._lift(ring.embed(v), ctx)

    def _unit(self, ring, r, c):
        if isinstance(ring, MatrixSubring):
            amb = ring.ambient.unit(r, c)
            try:
                return ring.from_ambient(amb)
            except SkewlabError as e:
                raise BadLiteral(str(e))
        return ring.unit(r, c)

    def _diag(self, ring, entries):
        if isinstance(ring, MatrixSubring):
            amb = ring.ambient.diag(entries)
            try:
                return ring.from_ambient(amb)
            except SkewlabError as e:
                raise BadLiteral(str(e))
        return ring.diag(entries)

    def _tuple_atom(self, ring: ProductRing, ctx):
        parts = [self._expr(ring.components[0], None)]
        while self._peek()[0] == ",":
            self._next()
            if len(parts) >= ring.size():
                self._fail(f"tuple has more than {ring.size()} components")
            parts.append(self._expr(ring.components[len(parts)], None))
        self._expect(")")
        if len(parts) != ring.size():
            self._fail(f"tuple needs {ring.size()} components, got {len(parts)}")
        v = ring.zero()
        for i, p in enumerate(parts):
            v = v + ring.embed(i, p)
        return self._lift(v, ctx)

    def _matrix_atom(self, ring, ctx, tok):
        if not isinstance(ring, (MatrixRing, MatrixSubring)):
            self._fail(f"matrix literal in non-matrix ring {ring.name()}", tok)
        base = ring.poly if isinstance(ring, MatrixSubring) else ring.base
        rows = []
        while True:
            self._expect("[")
            row = [self._expr(base, None)]
            while self._peek()[0] == ",":
                self._next()
                row.append(self._expr(base, None))
            self._expect("]")
            rows.append(row)
            if self._peek()[0] == ",":
                self._next()
                continue
            break
        self._expect("]")
        if len(rows) != ring.n or any(len(r) != ring.n for r in rows):
            self._fail(f"matrix must be {ring.n}x{ring.n}", tok)
        try:
            v = ring.element([tuple(r) for r in rows])
        except SkewlabError as e:
            raise BadLiteral(f"{e} (from {self.text!r})")
        return self._lift(v, ctx)


def parse_element(text: str, ring: Ring) -> RingElem:
    """Parse an element literal into the given ring."""
    return LiteralParser(text, ring=ring).parse()


def parse_orepoly(text: str, ctx: OreContext) -> OrePoly:
    """Parse a skew polynomial literal; 'x' is the Ore variable."""
    v = LiteralParser(text, ctx=ctx).parse()
    if isinstance(v, RingElem):
        return ctx.constant(v)
    return v


# ---------------------------------------------------------------------------
# ring / twist specs


def _req(spec: dict, key: str, where: str):
    if key not in spec:
        raise ScenarioError(f"{where} is missing required key {key!r}")
    return spec[key]


def build_ring(spec, named: dict[str, Ring]) -> Ring:
    if isinstance(spec, str):
        if spec not in named:
            raise DanglingReference(f"ring {spec!r} is not declared")
        return named[spec]
    if not isinstance(spec, dict):
        raise ScenarioError(f"ring spec must be a name or an object, got {type(spec).__name__}")
    kind = _req(spec, "kind", "ring spec")
    if kind == "field":
        return FieldRing(field_by_name(_req(spec, "name", "field ring")))
    if kind == "poly":
        return PolynomialRing(
            field_by_name(spec.get("field", "Q")),
            _req(spec, "vars", "polynomial ring"),
            truncate=spec.get("truncate"),
            unbounded=bool(spec.get("unbounded", False)),
        )
    if kind == "matrix":
        return MatrixRing(
            build_ring(_req(spec, "base", "matrix ring"), named),
            int(_req(spec, "n", "matrix ring")),
        )
    if kind == "matrix_subring":
        return MatrixSubring(
            int(_req(spec, "n", "matrix subring")),
            _req(spec, "entries", "matrix subring"),
        )
    if kind == "product":
        return ProductRing(
            [build_ring(c, named) for c in _req(spec, "components", "product ring")]
        )
    if kind == "localization":
        base = build_ring(_req(spec, "base", "localization"), named)
        u = parse_element(str(_req(spec, "at", "localization")), base)
        return LocalizedRing(base, u)
    raise ScenarioError(f"unknown ring kind {kind!r}")


def build_sigma(spec, ring: Ring, named: dict[str, Ring]) -> Endo:
    if spec is None:
        return endo_identity(ring)
    if not isinstance(spec, dict):
        raise ScenarioError("sigma spec must be an object")
    kind = _req(spec, "kind", "sigma spec")
    if kind == "identity":
        return endo_identity(ring)
    if kind == "inner":
        text = str(_req(spec, "u", "inner sigma"))
        if "ambient" in spec:
            amb = build_ring(spec["ambient"], named)
            return endo_inner(ring, parse_element(text, amb), ambient=amb)
        if isinstance(ring, MatrixSubring):
            return endo_inner(ring, parse_element(text, ring.ambient), ambient=ring.ambient)
        return endo_inner(ring, parse_element(text, ring))
    if kind == "var_map":
        return endo_var_map(ring, _req(spec, "images", "variable map"))
    if kind == "shift":
        return shift_endo(ring)
    if kind == "conjugation":
        return endo_conj(ring)
    if kind == "component_map":
        src = _req(spec, "src", "component map")
        return endo_component(ring, [int(s) - 1 for s in src])
    if kind == "lift":
        if not isinstance(ring, LocalizedRing):
            raise ScenarioError("a lifted sigma needs a localization ring")
        inner = build_sigma(_req(spec, "base_sigma", "lifted sigma"), ring.base, named)
        return endo_lift(ring, inner)
    raise ScenarioError(f"unknown sigma kind {kind!r}")


def build_delta(spec, sigma: Endo, ring: Ring) -> SigmaDeriv:
    if spec is None:
        return deriv_zero(sigma)
    if not isinstance(spec, dict):
        raise ScenarioError("delta spec must be an object")
    kind = _req(spec, "kind", "delta spec")
    if kind == "zero":
        return deriv_zero(sigma)
    if kind == "inner":
        b = parse_element(str(_req(spec, "b", "inner delta")), ring)
        return deriv_inner(sigma, b, power=int(spec.get("power", 1)))
    if kind == "partial":
        return deriv_partial(ring, _req(spec, "var", "partial delta"), sigma=sigma)
    raise ScenarioError(f"unknown delta kind {kind!r}")


# ---------------------------------------------------------------------------
# scenario loading


OP_FAMILIES = {
    "validate": ("validate",),
    "decompose": ("decompose",),
    "center": ("center", "semi-invariant", "quasi-algebraic", "udim"),
    "pi-search": ("pi-search", "commutator-power"),
    "pipeline": ("pipeline",),
}

ALL_OPS = tuple(op for fam in OP_FAMILIES.values() for op in fam)


@dataclass
class Twist:
    name: str
    ring: Ring
    sigma: Endo
    delta: SigmaDeriv

    def context(self) -> OreContext:
        return OreContext(self.ring, self.sigma, self.delta)


@dataclass
class Scenario:
    name: str
    rings: dict
    twists: dict
    runs: list
    path: str | None = None


def _parse_run_elements(run: dict, tw: Twist) -> None:
    """Eagerly parse every literal a run mentions; store under _keys."""
    op = run["op"]
    ctx = tw.context()
    texts = []
    if "element" in run:
        texts = [str(run["element"])]
    elif "elements" in run:
        texts = [str(s) for s in run["elements"]]
    if texts:
        run["_elements"] = [parse_orepoly(s, ctx) for s in texts]
        run["_element_texts"] = texts
    if op in ("semi-invariant",) and not texts:
        raise ScenarioError(f"run {op!r} needs an 'element'")
    if "pool" in run:
        target = run.get("target", "ore")
        if target == "ring":
            run["_pool"] = [parse_element(str(s), tw.ring) for s in run["pool"]]
        else:
            run["_pool"] = [parse_orepoly(str(s), ctx) for s in run["pool"]]
    if op == "pi-search":
        ident = run.get("identity", {})
        if not isinstance(ident, dict):
            raise ScenarioError("'identity' must be an object")
        kind = ident.get("kind", "standard")
        if kind not in ("standard", "standard-power", "commutator-power"):
            raise ScenarioError(f"unknown identity kind {kind!r}")
        run["_spec"] = IdentitySpec(
            kind=kind, m=int(ident.get("m", 2)), k=int(ident.get("k", 1))
        )
    if op == "commutator-power" and "k" not in run:
        raise ScenarioError("run 'commutator-power' needs 'k'")


def load_scenario(source, path: str | None = None) -> Scenario:
    """source: a path to a JSON file, or an already-decoded dict."""
    if isinstance(source, dict):
        data = source
    else:
        path = str(source)
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as e:
            raise ScenarioError(f"cannot read scenario {path!r}: {e}")
        except json.JSONDecodeError as e:
            raise ScenarioError(f"scenario {path!r} is not valid JSON: {e}")
    if not isinstance(data, dict):
        raise ScenarioError("a scenario must be a JSON object")

    rings: dict[str, Ring] = {}
    ring_specs = dict(data.get("rings", {}))
    if "ring" in data:
        ring_specs.setdefault("R", data["ring"])
    for rn, rs in ring_specs.items():
        rings[rn] = build_ring(rs, rings)

    twists: dict[str, Twist] = {}
    twist_specs = dict(data.get("twists", {}))
    if "sigma" in data or "delta" in data:
        twist_specs.setdefault(
            "t", {"sigma": data.get("sigma"), "delta": data.get("delta")}
        )
    for tn, ts in twist_specs.items():
        if not isinstance(ts, dict):
            raise ScenarioError(f"twist {tn!r} must be an object")
        rname = ts.get("ring")
        if rname is None:
            if len(rings) != 1:
                raise ScenarioError(
                    f"twist {tn!r} must name its ring (scenario declares {len(rings)})"
                )
            rname = next(iter(rings))
        if rname not in rings:
            raise DanglingReference(f"twist {tn!r} references undeclared ring {rname!r}")
        ring = rings[rname]
        sigma = build_sigma(ts.get("sigma"), ring, rings)
        delta = build_delta(ts.get("delta"), sigma, ring)
        twists[tn] = Twist(name=tn, ring=ring, sigma=sigma, delta=delta)
    if not twists:
        raise ScenarioError("a scenario needs at least one twist (or a 'sigma' entry)")

    runs = []
    for idx, run in enumerate(data.get("runs", [])):
        if not isinstance(run, dict):
            raise ScenarioError(f"run #{idx + 1} must be an object")
        run = dict(run)
        op = run.get("op")
        if op not in ALL_OPS:
            raise ScenarioError(
                f"run #{idx + 1}: unknown op {op!r}; known: {', '.join(ALL_OPS)}"
            )
        tname = run.get("twist")
        if tname is None:
            if len(twists) != 1:
                raise ScenarioError(
                    f"run #{idx + 1} must name its twist (scenario declares {len(twists)})"
                )
            tname = next(iter(twists))
            run["twist"] = tname
        if tname not in twists:
            raise DanglingReference(
                f"run #{idx + 1} references undeclared twist {tname!r}"
            )
        _parse_run_elements(run, twists[tname])
        runs.append(run)

    return Scenario(
        name=str(data.get("name", path or "scenario")),
        rings=rings,
        twists=twists,
        runs=runs,
        path=path,
    )


def runs_for_family(scenario: Scenario, family: str) -> list:
    """Select the runs a CLI command executes.

    'validate' with no matching runs synthesizes one validate run per
    twist; any other family with no matching runs is a usage error.
    """
    if family not in OP_FAMILIES:
        raise ScenarioError(f"unknown command {family!r}")
    ops = OP_FAMILIES[family]
    picked = [r for r in scenario.runs if r["op"] in ops]
    if picked:
        return picked
    if family == "validate":
        return [{"op": "validate", "twist": tn} for tn in scenario.twists]
    raise ScenarioError(
        f"scenario {scenario.name!r} declares no runs for command {family!r}"
    )


# ---------------------------------------------------------------------------
# run execution


def execute_run(scenario: Scenario, run: dict, seed: int = 0, budget: int | None = None) -> dict:
    """One run -> one record; analysis errors become error records."""
    tw = scenario.twists[run["twist"]]
    rec = {
        "op": run["op"],
        "twist": run["twist"],
        "ring": tw.ring.name(),
        "status": "ok",
    }
    try:
        rec.update(_dispatch(tw, run, seed, budget))
    except SkewlabError as e:
        rec["status"] = "error"
        rec["error"] = type(e).__name__
        rec["message"] = str(e)
    return rec


def _dispatch(tw: Twist, run: dict, seed: int, budget: int | None) -> dict:
    from .centerlab import (
        central_leading_checks,
        is_central,
        kernel_chain,
        orbit_decompose,
        pi_decide_pipeline,
        quasi_algebraic_solve,
        semi_invariant_solve,
        udim_over_fixed,
    )

    op = run["op"]
    if op == "validate":
        rep = validate_twist(
            tw.sigma, tw.delta, samples=int(run.get("samples", 64)), seed=seed
        )
        return {"report": rep.as_dict()}

    if op == "decompose":
        if isinstance(tw.ring, ProductRing):
            return {"orbits": orbit_decompose(tw.sigma, tw.delta).as_dict()}
        if isinstance(tw.sigma, VarMapEndo):
            bound = int(run.get("bound", 16))
            return {"kernel_chain": kernel_chain(tw.sigma, bound=bound).as_dict()}
        raise OutOfCatalog(
            "decomposition needs a product ring (orbits) or a variable-map "
            "twist (kernel chain)"
        )

    if op == "center":
        elems = run.get("_elements")
        if not elems:
            fx = fixed_subalgebra(tw.sigma, tw.delta)
            return {"fixed_subalgebra": fx.as_dict()}
        out = []
        for text, f in zip(run["_element_texts"], elems):
            entry = {
                "element": text,
                "parsed": render_orepoly(f),
                "centrality": is_central(f, seed=seed).as_dict(),
            }
            if not f.is_zero():
                entry["leading"] = central_leading_checks(f).as_dict()
            out.append(entry)
        return {"elements": out}

    if op == "semi-invariant":
        f = run["_elements"][0]
        rep = semi_invariant_solve(f, seed=seed)
        return {"element": run["_element_texts"][0], "semi_invariant": rep.as_dict()}

    if op == "quasi-algebraic":
        rep = quasi_algebraic_solve(tw.sigma, tw.delta, n_max=int(run.get("n_max", 4)))
        return {"quasi_algebraic": rep.as_dict()}

    if op == "udim":
        return {"udim": udim_over_fixed(tw.sigma, tw.delta).as_dict()}

    if op == "pi-search":
        target = tw.ring if run.get("target") == "ring" else tw.context()
        rep = identity_search(
            target,
            run["_spec"],
            strategy=run.get("strategy", "exhaustive"),
            budget=int(run.get("budget", budget if budget is not None else 2000)),
            seed=seed,
            pool=run.get("_pool"),
            pool_deg=int(run.get("pool_deg", 2)),
            sample_deg=int(run.get("sample_deg", 2)),
        )
        return {"search": rep.as_dict()}

    if op == "commutator-power":
        rep = commutator_power_check(
            tw.context(),
            int(run["k"]),
            strategy=run.get("strategy", "sampled"),
            budget=int(run.get("budget", budget if budget is not None else 200)),
            seed=seed,
            pool_deg=int(run.get("pool_deg", 1)),
            sample_deg=int(run.get("sample_deg", 2)),
        )
        return {"search": rep.as_dict()}

    if op == "pipeline":
        rep = pi_decide_pipeline(
            tw.ring,
            tw.sigma,
            tw.delta,
            order_bound=int(run.get("order_bound", 24)),
            chain_bound=int(run.get("chain_bound", 64)),
        )
        return {"pipeline": rep.as_dict()}

    raise ScenarioError(f"unknown op {op!r}")
