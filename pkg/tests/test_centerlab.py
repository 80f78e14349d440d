"""Predicate checkers: centrality, invariance, orbits, udim, the pipeline."""

from fractions import Fraction

import pytest

from skewlab.centerlab import (
    central_leading_checks,
    inner_delta_witness,
    is_central,
    jordan_closure_probe,
    kernel_chain,
    orbit_decompose,
    pi_decide_pipeline,
    primitive_idempotents,
    quasi_algebraic_solve,
    semi_invariant_solve,
    udim_over_fixed,
)
from skewlab.errors import OutOfCatalog, RhoIllDefined, Unsupported
from skewlab.orepoly import OreContext
from skewlab.rings import (
    MatrixRing,
    PolynomialRing,
    ProductRing,
    example_constrained_ring,
    field_ring,
)
from skewlab.scalars import GF, QQ
from skewlab.twists import (
    deriv_inner,
    deriv_partial,
    endo_component,
    endo_conj,
    endo_identity,
    endo_inner,
    endo_var_map,
    shift_endo,
)

Q = field_ring("Q")
QI = field_ring("Q(i)")


def _swap_ctx():
    M2 = MatrixRing(Q, 2)
    u = M2.unit(0, 1) + M2.unit(1, 0)
    return OreContext(M2, endo_inner(M2, u)), u


def _deriv_ctx():
    T = PolynomialRing(GF(2), ["t"], truncate=4)
    s = endo_identity(T)
    return OreContext(T, s, deriv_partial(T, "t", sigma=s))


# -- centrality -------------------------------------------------------------


def test_adjoint_times_x_is_central():
    ctx, u = _swap_ctx()
    rep = is_central(ctx.monomial(u, 1))
    assert rep.verdict == "central" and rep.is_central
    assert rep.x_commutes
    assert rep.failures == []
    assert rep.checked_generators == len(ctx.ring.generators())


def test_bare_x_is_not_central():
    ctx, _ = _swap_ctx()
    rep = is_central(ctx.x())
    assert rep.verdict == "not-central" and not rep.is_central
    assert rep.failures
    w = rep.failures[0]
    assert "against" in w and "commutator" in w


def test_central_in_derivation_context():
    # char 2, truncation 4: x^2 commutes with t but x does not
    ctx = _deriv_ctx()
    assert is_central(ctx.x(2)).is_central
    assert not is_central(ctx.x()).is_central


def test_leading_checks_positive():
    ctx, u = _swap_ctx()
    rep = central_leading_checks(ctx.monomial(u, 1))
    assert rep.all_pass
    assert rep.sigma_fixes_lead
    assert rep.lead_twist_relation
    assert rep.lead_regular
    assert rep.degree == 1


def test_leading_checks_negative_control():
    ctx, _ = _swap_ctx()
    rep = central_leading_checks(ctx.x())
    assert not rep.all_pass
    assert not rep.lead_twist_relation
    assert rep.sigma_fixes_lead and rep.lead_regular


# -- semi-invariance --------------------------------------------------------


def test_x_squared_semi_invariant_char2():
    ctx = _deriv_ctx()
    rep = semi_invariant_solve(ctx.x(2))
    assert rep.semi_invariant
    assert rep.failure is None
    assert len(rep.witnesses) == rep.checked_generators == 2
    assert {"r": "t", "b": "t"} in rep.witnesses


def test_x_not_semi_invariant_under_derivation():
    # x t = t x + 1 mixes degrees, so no b solves x r = b x
    ctx = _deriv_ctx()
    rep = semi_invariant_solve(ctx.x())
    assert not rep.semi_invariant
    assert rep.failure is not None and rep.failure["r"] == "t"


def test_x_semi_invariant_when_delta_zero():
    ctx, _ = _swap_ctx()
    rep = semi_invariant_solve(ctx.x())
    assert rep.semi_invariant
    d = rep.as_dict()
    assert set(d) == {
        "checked_generators",
        "checked_samples",
        "failure",
        "semi_invariant",
        "witnesses",
    }


def test_corner_times_x_not_semi_invariant():
    ctx, _ = _swap_ctx()
    rep = semi_invariant_solve(ctx.monomial(ctx.ring.unit(0, 0), 1))
    assert not rep.semi_invariant


# -- quasi-algebraic derivations --------------------------------------------


def test_inner_derivation_recovered_at_one():
    M2 = MatrixRing(Q, 2)
    s = endo_inner(M2, M2.unit(0, 1) + M2.unit(1, 0))
    d = deriv_inner(s, M2.unit(0, 0))
    rep = quasi_algebraic_solve(s, d, n_max=2)
    assert rep.found and rep.n == 1
    assert rep.verified


def test_truncated_partial_square_vanishes():
    ctx = _deriv_ctx()
    rep = quasi_algebraic_solve(ctx.sigma, ctx.delta, n_max=3)
    assert rep.found and rep.n == 2
    assert rep.method == "monic"
    assert rep.a == ["0", "0", "1"]
    assert rep.b == "0"
    assert rep.verified


def test_quasi_algebraic_none_below_bound():
    ctx = _deriv_ctx()
    rep = quasi_algebraic_solve(ctx.sigma, ctx.delta, n_max=1)
    assert not rep.found
    assert rep.bound == 1


def test_quasi_algebraic_needs_finite_dimension():
    P = PolynomialRing(QQ, ["y"])
    s = endo_identity(P)
    with pytest.raises(Unsupported):
        quasi_algebraic_solve(s, deriv_partial(P, "y", sigma=s))


# -- orbit decomposition ----------------------------------------------------


def test_three_cycle_single_orbit():
    Pr = ProductRing([Q, Q, Q])
    rot = endo_component(Pr, [1, 2, 0])
    dec = orbit_decompose(rot)
    assert dec.rho_is_permutation
    assert dec.orbits == [[1, 2, 3]]
    assert sorted(dec.rho) == [1, 2, 3]
    assert dec.ok


def test_swap_with_inner_delta():
    Pr = ProductRing([Q, Q])
    swap = endo_component(Pr, [1, 0])
    b = Pr.embed(0, Q.one())
    d = deriv_inner(swap, b)
    dec = orbit_decompose(swap, d)
    assert dec.orbits == [[1, 2]]
    assert all(dec.delta_flags)
    assert dec.ok
    w = inner_delta_witness(swap, d)
    assert w == b


def test_identity_gives_singleton_orbits():
    Pr = ProductRing([Q, Q, Q])
    dec = orbit_decompose(endo_identity(Pr))
    assert dec.orbits == [[1], [2], [3]]
    assert dec.rho == [1, 2, 3]


def test_smeared_image_is_rejected():
    Pr = ProductRing([Q, Q])
    merge = endo_component(Pr, [0, 0])
    with pytest.raises(RhoIllDefined):
        orbit_decompose(merge)


def test_orbits_need_a_product_ring():
    with pytest.raises(OutOfCatalog):
        orbit_decompose(endo_identity(MatrixRing(Q, 2)))


# -- udim -------------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3])
def test_udim_conjugation_two_per_block(n):
    Pr = ProductRing([QI] * n)
    rep = udim_over_fixed(endo_conj(Pr))
    assert rep.total == 2 * n
    assert rep.fixed_dim == n and rep.center_dim == 2 * n
    assert len(rep.blocks) == n
    assert all(b["dim_eZ"] == 2 and b["dim_K"] == 1 for b in rep.blocks)


def test_udim_three_cycle():
    Pr = ProductRing([Q, Q, Q])
    rep = udim_over_fixed(endo_component(Pr, [1, 2, 0]))
    # fixed = diagonal copy of Q, center = Q^3, one block of udim 3
    assert rep.total == 3
    assert rep.fixed_dim == 1 and rep.center_dim == 3
    assert len(rep.blocks) == 1


def test_udim_identity_on_field():
    rep = udim_over_fixed(endo_identity(QI))
    assert rep.total == 1
    assert rep.blocks[0]["dim_eZ"] == rep.blocks[0]["dim_K"] == 2


def test_udim_permutation_invariance():
    Pr = ProductRing([QI, QI])
    a = udim_over_fixed(endo_conj(Pr)).total
    swap = endo_component(Pr, [1, 0])
    b = udim_over_fixed(swap).total
    assert a == 4 and b == 2  # swap glues the two blocks into one


def test_udim_refuses_nilpotents():
    T = PolynomialRing(GF(2), ["t"], truncate=4)
    with pytest.raises(Unsupported):
        udim_over_fixed(endo_identity(T))


def test_primitive_idempotents_split():
    Pr = ProductRing([Q, Q])
    idems = primitive_idempotents(Pr, Pr.basis())
    assert sorted(Pr.render(e) for e in idems) == ["(0, 1)", "(1, 0)"]


# -- kernel chains ----------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_shift_chain_stabilizes(n):
    P = PolynomialRing(QQ, [f"y{i + 1}" for i in range(n)])
    rep = kernel_chain(shift_endo(P))
    assert rep.stabilization_index == n
    assert rep.chain[-1] == [f"y{i + 1}" for i in range(n)]
    assert rep.survivors == []
    assert len(rep.chain) == n


def test_rotation_chain_is_flat():
    P = PolynomialRing(QQ, ["y1", "y2", "y3"])
    rep = kernel_chain(endo_var_map(P, [1, 2, 0]))
    assert rep.stabilization_index == 0
    assert rep.chain == []
    assert rep.survivors == ["y1", "y2", "y3"]
    assert rep.induced_order == 3


def test_merging_map_is_refused():
    P = PolynomialRing(QQ, ["y1", "y2"])
    with pytest.raises(OutOfCatalog):
        kernel_chain(endo_var_map(P, [0, 0]))


def test_chain_needs_var_map():
    with pytest.raises(OutOfCatalog):
        kernel_chain(endo_identity(MatrixRing(Q, 2)))


# -- the decision pipeline --------------------------------------------------


def test_pipeline_commutative():
    P = PolynomialRing(QQ, ["y"])
    rep = pi_decide_pipeline(P, endo_identity(P))
    assert rep.verdict == "PI" and rep.path == "commutative"
    assert rep.nilpotency_exponent == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pipeline_shift(n):
    P = PolynomialRing(QQ, [f"y{i + 1}" for i in range(n)])
    rep = pi_decide_pipeline(P, shift_endo(P))
    assert rep.verdict == "PI" and rep.path == "shift-nilpotent"
    assert rep.nilpotency_exponent == n + 1
    assert rep.identity == f"([f, g])^{n + 1} = 0 for all f, g"


def test_pipeline_matrix_inner():
    M2 = MatrixRing(Q, 2)
    u = M2.unit(0, 1) + M2.unit(1, 0)
    rep = pi_decide_pipeline(M2, endo_inner(M2, u))
    assert rep.verdict == "PI" and rep.path == "matrix-semisimple"
    assert rep.n == 1
    assert rep.certificate_degree == 1
    assert rep.certificate_verified


def test_pipeline_conjugation_order_two():
    rep = pi_decide_pipeline(QI, endo_conj(QI))
    assert rep.verdict == "PI" and rep.n == 2
    assert rep.certificate_verified


def test_pipeline_identity_on_matrices():
    M2 = MatrixRing(Q, 2)
    rep = pi_decide_pipeline(M2, endo_identity(M2))
    assert rep.verdict == "PI" and rep.n == 1
    assert rep.certificate_degree == 1 and rep.certificate_verified


def test_pipeline_refuses_unbounded_family():
    P = PolynomialRing(QQ, ["y1", "y2"], unbounded=True)
    with pytest.raises(OutOfCatalog):
        pi_decide_pipeline(P, endo_identity(P))


def test_pipeline_refuses_nonzero_delta():
    T = PolynomialRing(GF(2), ["t"], truncate=4)
    s = endo_identity(T)
    with pytest.raises(OutOfCatalog):
        pi_decide_pipeline(T, s, deriv_partial(T, "t", sigma=s))


def test_pipeline_refuses_constrained_ring():
    R = example_constrained_ring()
    s = endo_inner(R, R.ambient.diag([1, 2]), ambient=R.ambient)
    with pytest.raises(OutOfCatalog):
        pi_decide_pipeline(R, s)


# -- closure probes ---------------------------------------------------------


def test_jordan_probe_halves():
    R = example_constrained_ring()
    amb = R.ambient
    s = endo_inner(amb, amb.diag([1, 2]))
    half = amb.base.element({(0,): Fraction(1, 2)})
    e12 = amb.scalar(half) * amb.unit(0, 1)
    e21 = amb.scalar(half) * amb.unit(1, 0)
    rep = jordan_closure_probe(R, s, probes=[e12, e21], n_random=0, depth=5)
    assert rep.depth == 5
    assert rep.probes[0]["first"] == 1
    assert rep.probes[1]["first"] is None
    assert all(p["ascending_ok"] for p in rep.probes)


def test_jordan_probe_members_start_at_zero():
    R = example_constrained_ring()
    amb = R.ambient
    s = endo_inner(amb, amb.diag([1, 2]))
    rep = jordan_closure_probe(R, s, probes=[amb.one()], n_random=3, depth=3, seed=5)
    assert rep.probes[0]["first"] == 0
    assert all(p["ascending_ok"] for p in rep.probes)
