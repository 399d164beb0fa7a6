import random

import pytest
import sympy
from conftest import ALG3
from hypothesis import given, settings
from hypothesis import strategies as st

from z22susy import displays as DS
from z22susy.algebra import NotInvertibleError
from z22susy.berezin import (
    IntegrabilityError,
    berezin_integral,
    invert_even,
    is_integrable,
    z2_berezinian,
    z2_trace,
)
from z22susy.calculus import jacobian
from z22susy.coordinate_changes import TemplateConfig, run_trials, simplified_no_z_matrix, template_morphism
from z22susy.matrix import GradedMatrix
from z22susy.oracles import (
    COORDINATE_DEGREES,
    berezinian_multiplicativity,
    liouville_check,
    random_homogeneous,
    random_invertible_matrix,
)
from z22susy.superspace import SuperfieldSpec, boost, boost_symbol, build_context, expand, supertranslation

CTX = build_context()
MATERIAL = ("theta_-", "theta_+", "z", "eps_-", "eps_+")


def test_volume_invariance():
    JS = jacobian(supertranslation(CTX))
    assert JS == DS.supertranslation_jacobian(CTX)
    assert z2_berezinian(JS) == CTX.alg.one()
    m = boost_symbol()
    JL = jacobian(boost(CTX, m))
    assert JL == DS.boost_jacobian(CTX, m)
    assert z2_berezinian(JL) == CTX.alg.one()


def test_multiplicative_on_50_random_matrices():
    rep = berezinian_multiplicativity(ALG3, 50, random.Random(11), MATERIAL)
    assert rep["failures"] == 0, rep["witness"]


def test_one_plus_square_zero():
    tau = ALG3.expr("theta_-") * ALG3.expr("eps_-")
    rep = liouville_check(ALG3, 20, random.Random(5), ("theta_+", "z", "eps_+"), tau)
    assert rep["failures"] == 0, rep["witness"]


@given(st.integers(0, 10_000))
@settings(max_examples=15)
def test_inverse_matrix_has_inverse_berezinian(seed):
    rng = random.Random(seed)
    M = random_invertible_matrix(ALG3, rng, MATERIAL)
    assert z2_berezinian(M) * invert_even(z2_berezinian(M)) == ALG3.one()


def test_diagonal_is_product():
    a, b, c, d, e = (sympy.Rational(k, 1) for k in (2, 3, 5, 7, 11))
    M = GradedMatrix.from_rows(
        ALG3, [[a if i == j and i == 0 else b if i == j == 1 else c if i == j == 2 else d if i == j == 3 else e if i == j == 4 else 0 for j in range(5)] for i in range(5)],
        COORDINATE_DEGREES,
    )
    assert z2_berezinian(M) == ALG3.const(a * b * c / (d * e))


def test_trace_signs():
    M = GradedMatrix.identity(ALG3, COORDINATE_DEGREES)
    assert z2_trace(M) == ALG3.const(1)  # 3 even rows minus 2 odd rows


def test_degree_rules_enforced():
    rows = [[1 if i == j else 0 for j in range(5)] for i in range(5)]
    rows[0][3] = 1  # a degree-(0,1) slot holding a scalar
    M = GradedMatrix.from_rows(ALG3, rows, COORDINATE_DEGREES)
    with pytest.raises(Exception):
        z2_berezinian(M)


@given(st.integers(0, 10_000))
@settings(max_examples=25)
def test_invert_even(seed):
    rng = random.Random(seed)
    from z22susy.grading import Degree

    u = ALG3.const(rng.choice([1, 2, -3])) + random_homogeneous(ALG3, rng, Degree((0, 0)), MATERIAL, terms=3)
    if u.scalar_part() == 0:
        return
    assert u * invert_even(u) == ALG3.one()


def test_invert_requires_scalar_part():
    with pytest.raises(NotInvertibleError):
        invert_even(ALG3.expr("theta_-") * ALG3.expr("theta_+"))


def test_berezin_integral_picks_top_component():
    phi = expand(CTX, "Phi")
    tm, tp = CTX.alg.expr("theta_-"), CTX.alg.expr("theta_+")
    assert berezin_integral(tm * tp * CTX.alg.const(3)) == CTX.alg.const(3)
    assert berezin_integral(phi) == CTX.alg.expr(CTX.alg.field("F"))


def test_integrability():
    free = build_context(superfields=[SuperfieldSpec("Phi", z_constrained=False)])
    p = expand(free, "Phi")
    half = sympy.Rational(1, 2)
    assert not is_integrable((p * p).scale(half))
    with pytest.raises(IntegrabilityError):
        berezin_integral((p * p).scale(half))
    q = expand(CTX, "Phi")
    assert is_integrable((q * q).scale(half))


def test_reduced_no_z_matrix():
    from z22susy.berezin import z_obstruction

    assert z_obstruction(z2_berezinian(simplified_no_z_matrix(3))).is_zero()


def test_full_template_is_well_formed():
    phi = template_morphism(None, TemplateConfig(z_truncation=3))
    assert phi.source.z_truncation == 3


def test_coordinate_independence_few_trials():
    for rep in run_trials(5, seed=1):
        assert rep["failures"] == 0, rep
