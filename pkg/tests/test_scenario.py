"""Scenario loading: literals, ring/twist builders, run dispatch."""

import json
from fractions import Fraction

import pytest

from skewlab.errors import (
    BadLiteral,
    DanglingReference,
    OutOfCatalog,
    ScenarioError,
)
from skewlab.orepoly import OreContext
from skewlab.rings import (
    LocalizedRing,
    MatrixRing,
    PolynomialRing,
    ProductRing,
    example_constrained_ring,
    field_ring,
)
from skewlab.scalars import QQ
from skewlab.scenario import (
    OP_FAMILIES,
    build_ring,
    execute_run,
    load_scenario,
    parse_element,
    parse_orepoly,
    runs_for_family,
)
from skewlab.twists import endo_identity, endo_inner, shift_endo

Q = field_ring("Q")


# -- literals ---------------------------------------------------------------


def test_field_literals():
    assert parse_element("3/4 - 1", Q) == Q.from_int(3) * Q.inverse(Q.from_int(4)) - Q.one()
    qi = field_ring("Q(i)")
    v = parse_element("(1 + i)^2", qi)
    assert v == qi.from_int(2) * parse_element("i", qi)


def test_poly_literals():
    P = PolynomialRing(QQ, ["y1", "y2"])
    f = parse_element("y1^2 - 2*y2 + 1", P)
    assert P.render(f) == "1 - 2*y2 + y1^2"
    assert parse_element("-y1", P) == P.zero() - P.var("y1")


def test_matrix_literals():
    M2 = MatrixRing(Q, 2)
    assert parse_element("E12 + E21", M2) == M2.unit(0, 1) + M2.unit(1, 0)
    assert parse_element("diag(1, 2)", M2) == M2.diag([1, 2])
    assert parse_element("I", M2) == M2.one()
    assert parse_element("[[0, 1], [2, 0]]", M2) == M2.unit(0, 1) + M2.unit(1, 0) * M2.from_int(2)


def test_matrix_rows_literal_entries_in_base():
    P = PolynomialRing(QQ, ["x"])
    M = MatrixRing(P, 2)
    m = parse_element("[[x, 0], [0, x^2]]", M)
    assert M.render(m) == "[[x, 0], [0, x^2]]"


def test_subring_literal_membership():
    R = example_constrained_ring()
    ok = parse_element("E12", R)
    assert R.render(R.to_ambient(ok)) == "[[0, 1], [0, 0]]"
    with pytest.raises(BadLiteral):
        parse_element("E21 / 2", R)


def test_product_literals():
    Pr = ProductRing([Q, Q])
    v = parse_element("(1, 0)", Pr)
    assert Pr.support(v) == [0]
    w = parse_element("(1/2, 3)", Pr)
    assert Pr.component(w, 0) == Q.element(Fraction(1, 2))


def test_localized_literals():
    L = LocalizedRing(MatrixRing(Q, 2), MatrixRing(Q, 2).from_int(2))
    v = parse_element("diag(1, 1) / 2", L)
    assert L.render(v * L.from_int(2)) == L.render(L.one())
    m = parse_element("[[1, 0], [0, 3]]", L)
    assert m == L.embed(MatrixRing(Q, 2).diag([1, 3]))


def test_ore_literals():
    P = PolynomialRing(QQ, ["y1", "y2"])
    ctx = OreContext(P, shift_endo(P))
    f = parse_orepoly("y2*x^2 - x + 1", ctx)
    assert f.degree() == 2
    assert f.coeff(2) == P.var("y2")
    assert f.coeff(0) == P.one()


def test_literal_errors_carry_position():
    with pytest.raises(BadLiteral) as e1:
        parse_element("1 + $", Q)
    assert "$" in str(e1.value)
    with pytest.raises(BadLiteral):
        parse_element("1 +", Q)
    with pytest.raises(BadLiteral):
        parse_element("(1, 2", ProductRing([Q, Q]))
    with pytest.raises(BadLiteral):
        parse_element("y9", PolynomialRing(QQ, ["y1"]))
    with pytest.raises(BadLiteral):
        parse_element("x", PolynomialRing(QQ, ["y1"]))  # x needs an Ore context
    with pytest.raises(BadLiteral):
        parse_element("1/0", Q)


# -- builders ---------------------------------------------------------------


def test_build_ring_kinds():
    ring = build_ring({"kind": "field", "name": "F_7"}, {})
    assert ring.char == 7
    poly = build_ring(
        {"kind": "poly", "field": "F2", "vars": ["t"], "truncate": 4}, {}
    )
    assert poly.truncate == 4
    mat = build_ring(
        {"kind": "matrix", "base": {"kind": "field", "name": "Q"}, "n": 3}, {}
    )
    assert mat.n == 3
    prod = build_ring(
        {
            "kind": "product",
            "components": [{"kind": "field", "name": "Q(i)"}] * 2,
        },
        {},
    )
    assert prod.size() == 2
    sub = build_ring(
        {
            "kind": "matrix_subring",
            "n": 2,
            "entries": [["Z+xQ[x]", "Z+xQ[x]"], ["xQ[x]", "Z+xQ[x]"]],
        },
        {},
    )
    assert sub.n == 2
    loc = build_ring({"kind": "localization", "base": "M", "at": "2"}, {"M": mat})
    assert isinstance(loc, LocalizedRing)


def test_build_ring_dangling_base():
    with pytest.raises(DanglingReference):
        build_ring({"kind": "localization", "base": "missing", "at": "2"}, {})


def test_scenario_shorthards_and_defaults():
    doc = {
        "name": "tiny",
        "ring": {"kind": "poly", "field": "Q", "vars": ["y1", "y2"]},
        "sigma": {"kind": "shift"},
        "runs": [{"op": "decompose"}],
    }
    sc = load_scenario(doc)
    assert set(sc.rings) == {"R"}
    assert set(sc.twists) == {"t"}
    assert sc.runs[0]["twist"] == "t"
    assert sc.name == "tiny"


def test_scenario_eager_literal_parse():
    doc = {
        "name": "bad",
        "ring": {"kind": "matrix", "base": {"kind": "field", "name": "Q"}, "n": 2},
        "sigma": {"kind": "identity"},
        "runs": [{"op": "center", "elements": ["E13 * x"]}],
    }
    with pytest.raises(BadLiteral):
        load_scenario(doc)


def test_scenario_dangling_twist_ring():
    doc = {
        "name": "bad",
        "rings": {"A": {"kind": "matrix", "base": {"kind": "field", "name": "Q"}, "n": 2}},
        "twists": {"s": {"ring": "B", "sigma": {"kind": "identity"}}},
        "runs": [],
    }
    with pytest.raises(DanglingReference):
        load_scenario(doc)


def test_semi_invariant_requires_element():
    doc = {
        "name": "bad",
        "ring": {"kind": "matrix", "base": {"kind": "field", "name": "Q"}, "n": 2},
        "sigma": {"kind": "identity"},
        "runs": [{"op": "semi-invariant"}],
    }
    with pytest.raises(ScenarioError):
        load_scenario(doc)


def test_op_families_cover_cli_commands():
    assert set(OP_FAMILIES) == {"validate", "decompose", "center", "pi-search", "pipeline"}
    assert "udim" in OP_FAMILIES["center"]
    assert "commutator-power" in OP_FAMILIES["pi-search"]


def test_runs_for_family_synthesizes_validate():
    doc = {
        "name": "v",
        "ring": {"kind": "matrix", "base": {"kind": "field", "name": "Q"}, "n": 2},
        "sigma": {"kind": "inner", "u": "E12 + E21"},
        "runs": [{"op": "udim"}],
    }
    sc = load_scenario(doc)
    runs = runs_for_family(sc, "validate")
    assert len(runs) == 1 and runs[0]["op"] == "validate"
    with pytest.raises(ScenarioError):
        runs_for_family(sc, "decompose")
    assert len(runs_for_family(sc, "center")) == 1


# -- execution --------------------------------------------------------------


def _scenario(path_doc):
    return load_scenario(path_doc)


def test_execute_validate_and_udim():
    sc = _scenario(
        {
            "name": "conj",
            "ring": {
                "kind": "product",
                "components": [{"kind": "field", "name": "Q(i)"}] * 2,
            },
            "sigma": {"kind": "conjugation"},
            "runs": [{"op": "validate"}, {"op": "udim"}],
        }
    )
    rec0 = execute_run(sc, sc.runs[0], seed=0)
    assert rec0["status"] == "ok" and rec0["report"]["ok"]
    rec1 = execute_run(sc, sc.runs[1], seed=0)
    assert rec1["status"] == "ok" and rec1["udim"]["total"] == 4


def test_execute_center_elements():
    sc = _scenario(
        {
            "name": "c",
            "ring": {"kind": "matrix", "base": {"kind": "field", "name": "Q"}, "n": 2},
            "sigma": {"kind": "inner", "u": "E12 + E21"},
            "runs": [{"op": "center", "elements": ["(E12 + E21)*x", "x"]}],
        }
    )
    rec = execute_run(sc, sc.runs[0], seed=0)
    assert rec["status"] == "ok"
    elems = rec["elements"]
    assert elems[0]["centrality"]["verdict"] == "central"
    assert elems[0]["leading"]["all_pass"]
    assert elems[1]["centrality"]["verdict"] == "not-central"


def test_execute_error_record():
    # pipeline refuses a constrained coefficient ring; the record says so
    sc = _scenario(
        {
            "name": "refuse",
            "ring": {
                "kind": "matrix_subring",
                "n": 2,
                "entries": [["Z+xQ[x]", "Z+xQ[x]"], ["xQ[x]", "Z+xQ[x]"]],
            },
            "sigma": {"kind": "inner", "u": "diag(1, 2)"},
            "runs": [{"op": "pipeline"}],
        }
    )
    rec = execute_run(sc, sc.runs[0], seed=0)
    assert rec["status"] == "error"
    assert rec["error"] == "OutOfCatalog"
    assert "pipeline" in rec["message"] or "catalog" in rec["message"]


def test_execute_decompose_product_and_shift():
    sc = _scenario(
        {
            "name": "d",
            "rings": {
                "P": {
                    "kind": "product",
                    "components": [{"kind": "field", "name": "Q"}] * 3,
                },
                "S": {"kind": "poly", "field": "Q", "vars": ["y1", "y2"]},
            },
            "twists": {
                "rot": {"ring": "P", "sigma": {"kind": "component_map", "src": [2, 3, 1]}},
                "sh": {"ring": "S", "sigma": {"kind": "shift"}},
            },
            "runs": [{"op": "decompose", "twist": "rot"}, {"op": "decompose", "twist": "sh"}],
        }
    )
    rec0 = execute_run(sc, sc.runs[0], seed=0)
    assert rec0["orbits"]["orbits"] == [[1, 2, 3]]
    rec1 = execute_run(sc, sc.runs[1], seed=0)
    assert rec1["kernel_chain"]["stabilization_index"] == 2


def test_execute_pi_search():
    sc = _scenario(
        {
            "name": "s",
            "ring": {"kind": "matrix", "base": {"kind": "field", "name": "Q"}, "n": 2},
            "sigma": {"kind": "identity"},
            "runs": [
                {"op": "pi-search", "identity": {"kind": "standard", "m": 3}, "budget": 200},
            ],
        }
    )
    rec = execute_run(sc, sc.runs[0], seed=0)
    assert rec["status"] == "ok"
    assert rec["search"]["outcome"] == "counterexample"


def test_load_from_file(tmp_path):
    p = tmp_path / "s.json"
    p.write_text(
        json.dumps(
            {
                "name": "filed",
                "ring": {"kind": "field", "name": "Q"},
                "sigma": {"kind": "identity"},
                "runs": [{"op": "validate"}],
            }
        )
    )
    sc = load_scenario(str(p))
    assert sc.name == "filed"
    assert sc.path == str(p)


def test_repo_scenarios_all_load():
    import glob
    import os

    root = os.path.join(os.path.dirname(__file__), "..", "scenarios")
    files = sorted(glob.glob(os.path.join(root, "*.json")))
    assert len(files) == 6
    for f in files:
        sc = load_scenario(f)
        assert sc.runs
