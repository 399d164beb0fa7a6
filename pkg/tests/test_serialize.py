from pathlib import Path

import pytest
import sympy
from conftest import ALG3, graded_exprs
from hypothesis import given, settings

from z22susy import displays as DS
from z22susy import models as M
from z22susy.calculus import jacobian
from z22susy.cli import model_stage
from z22susy.serialize import (
    ParseError,
    coeff_from_prefix,
    coeff_to_prefix,
    dumps,
    loads,
    matrix_latex,
    matrix_text,
    to_json,
    to_latex,
    to_text,
)
from z22susy.superspace import build_context, supertranslation

GOLDEN = Path(__file__).parent / "golden"


@given(graded_exprs())
@settings(max_examples=60)
def test_round_trip(e):
    text = dumps(e)
    assert loads(text, ALG3) == e
    assert dumps(loads(text)) == text


@given(graded_exprs())
@settings(max_examples=30)
def test_rendering_is_deterministic(e):
    assert to_text(e) == to_text(loads(dumps(e), ALG3))
    assert to_latex(e) == to_latex(loads(dumps(e), ALG3))
    assert to_json(e) == to_json(loads(dumps(e), ALG3))


def test_coefficient_prefix_round_trip():
    x = sympy.Symbol("X")
    for c in (sympy.Rational(-3, 4), sympy.sin(x / 2) ** 2, sympy.Function("g_11")(x) * x + 1, sympy.Derivative(sympy.Function("U")(x), x)):
        assert sympy.simplify(coeff_from_prefix(coeff_to_prefix(c)) - c) == 0


def test_theta_minus_renders_first():
    ctx = build_context()
    a = ctx.alg
    e = a.expr("theta_+") * a.expr("theta_-") * a.expr(a.field("F"))
    assert to_text(e).replace("−", "").startswith("θ₋θ₊F")


def test_parse_error_has_location():
    with pytest.raises(ParseError) as err:
        loads("(graded-expr 1\n (term (* 1 X) (theta_- 1)\n")
    assert err.value.line >= 1 and err.value.col >= 1
    with pytest.raises(ParseError) as err:
        loads("(graded-expr 1 (term (frob 1) (z 1)))", ALG3)
    assert err.value.col > 1


def test_supertranslation_jacobian_block_layout():
    J = jacobian(supertranslation(build_context()))
    text = matrix_text(J)
    lines = text.splitlines()
    assert len(lines) == 6  # three even rows, a rule, two odd rows
    assert set(lines[3]) == {"-"}
    assert all("|" in line for i, line in enumerate(lines) if i != 3)
    assert r"\hline" in matrix_latex(J) and "{ccc|cc}" in matrix_latex(J)


@pytest.mark.parametrize("name", ["sine-gordon.eliminated", "linear-sigma.component", "exotic.component"])
def test_golden_files(name):
    model, stage = name.split(".")
    computed = model_stage(model, stage)
    golden = loads((GOLDEN / f"{name}.txt").read_text(), computed.alg)
    assert M.matches_display(computed, golden)


def test_golden_free_superspace_expansion():
    m = M.linear_sigma(1, "minkowski")
    golden = loads((GOLDEN / "free.superspace-el.txt").read_text(), m.ctx.alg)
    from z22susy.algebra import truncate_z

    assert truncate_z(M.superspace_el(m)["Phi"], 0) == golden
    assert golden == DS.free_superspace_expansion(m.ctx)
