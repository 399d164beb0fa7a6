import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from z22susy import displays as DS
from z22susy import models as M
from z22susy.algebra import degree_of, truncate_z, weight_of
from z22susy.grading import Degree
from z22susy.superspace import SuperfieldSpec, build_context, component_susy, expand

SG = M.sine_gordon()
EXO = M.exotic_model()


def _sg():
    L = M.component_lagrangian(SG)
    Le, sol = M.eliminate_auxiliary(L, "F")
    return L, Le, sol


def test_cos_half_taylor_series():
    ctx = SG.ctx
    p = sympy.Symbol("Phi")
    got = truncate_z(M.taylor_expand(ctx, sympy.cos(p / 2), {p: "Phi"}), 0)
    j = DS.Jets(ctx)
    X = j.sym("X")
    h = sympy.Rational(1, 2)
    tm, tp = j.g("theta_-"), j.g("theta_+")
    want = (
        j.c(sympy.cos(X / 2)) - (tp * j("psi_-") + tm * j("psi_+") + tm * tp * j("F")).scale(h * sympy.sin(X / 2))
        - (tm * tp * j("psi_+") * j("psi_-")).scale(sympy.cos(X / 2) / 4)
    )
    assert got == want


def test_taylor_needs_degree_zero_argument():
    with pytest.raises(M.ModelError):
        M.taylor_expand(EXO.ctx, sympy.cos(sympy.Symbol("Psi")), {sympy.Symbol("Psi"): "Psi"})


def test_exotic_potential_rejects_even_powers():
    with pytest.raises(M.ModelError):
        M.exotic_model({2: 1})


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=3))
@settings(max_examples=12)
def test_exotic_potential_models_agree(coeffs):
    m = M.exotic_model(coeffs)
    L = m.lagrangian
    assert degree_of(L) == Degree((1, 1)) and weight_of(L) == 0
    assert M.component_el(m).equivalent(M.superspace_el_system(m))


def test_sine_gordon_elimination():
    _, Le, sol = _sg()
    d = DS.sine_gordon(SG.ctx)
    assert sol["F"] == d["F"]
    assert M.matches_display(Le, d["action"])


def test_elimination_rejects_derivative_dependence():
    L = M.component_lagrangian(SG)
    with pytest.raises(M.ModelError):
        M.eliminate_auxiliary(L, "psi_+")


def test_elimination_without_the_field_is_identity():
    _, Le, _ = _sg()
    again, sol = M.eliminate_auxiliary(Le, "F")
    assert again == Le


def test_sine_gordon_classical_limit():
    _, Le, _ = _sg()
    eom = M.component_el(L=Le, bases=["X", "psi_+", "psi_-"])
    rule = next(r for r in eom if r.base == "X")
    X = SG.ctx.alg.field("X")
    assert M.rewrite_double_angle(rule.rhs.map_coefficients(lambda c: c)).scalar_part() == sympy.sin(X) / 4


def test_quasi_invariance_and_currents():
    _, Le, sol = _sg()
    d = DS.sine_gordon(SG.ctx)
    delta = M.on_shell_susy(SG, sol)
    W = M.QuasiInvarianceWitness(d["v_minus"], d["v_plus"])
    assert M.quasi_invariance(Le, delta, W).is_zero()
    currents = M.noether_currents(Le, delta, W)
    assert {k: c.expression for k, c in currents.items()} == d["currents"]
    eom = M.component_el(L=Le, bases=["X", "psi_+", "psi_-"])
    assert all(r["ok"] for r in M.conservation_check(currents, eom).values())


def test_zero_variation_leaves_minus_witness():
    _, Le, _ = _sg()
    zero = M.QuasiInvarianceWitness(SG.ctx.alg.zero(), SG.ctx.alg.zero())
    from z22susy.superspace import JetVariation

    assert M.quasi_invariance(Le, JetVariation(SG.ctx.alg, {}), zero).is_zero()


def test_free_currents_are_kinetic():
    m = M.sine_gordon(False)
    L = M.component_lagrangian(m)
    Le, sol = M.eliminate_auxiliary(L, "F")
    delta = M.on_shell_susy(m, sol)
    j = DS.Jets(m.ctx)
    em, ep = j.g("eps_-"), j.g("eps_+")
    q = sympy.Rational(1, 4)
    W = M.QuasiInvarianceWitness((em * j("psi_+") * j("X", 0, 1)).scale(q), (ep * j("psi_-") * j("X", 1, 0)).scale(q))
    assert M.quasi_invariance(Le, delta, W).is_zero()
    cur = M.noether_currents(Le, delta, W)
    assert cur["--"].expression.is_zero() and cur["++"].expression.is_zero()
    assert cur["-+"].expression == (j("X", 1, 0) * j("psi_+")).scale(2 * q)


def test_exotic_off_shell_residual_is_exact():
    d = DS.exotic(EXO.ctx)
    L = M.component_lagrangian(EXO)
    delta = component_susy(EXO.ctx)
    res = M.quasi_invariance(L, delta, M.QuasiInvarianceWitness(d["v_minus"], d["v_plus"]))
    assert not res.is_zero()
    assert M.is_total_divergence(res, ["Y", "G", "chi_+", "chi_-"])
    assert M.component_el(EXO).vanishes(res)


def test_euler_operator_kills_divergences():
    j = DS.Jets(SG.ctx)
    e = M.divergence(j("psi_+") * j("X", 0, 1), j("psi_-") * j("X"))
    for base in ("X", "psi_+", "psi_-"):
        assert M.euler_operator(e, base).is_zero()


def test_orientation_prefers_highest_jet():
    j = DS.Jets(SG.ctx)
    r = M.orient(j("X", 1, 1) - j("psi_+") * j("psi_-"))
    assert r.base == "X" and r.jet == (1, 1)


def test_unconstrained_model_input_rejected():
    ctx = build_context(superfields=[SuperfieldSpec("Phi", z_constrained=False)])
    p = expand(ctx, "Phi")
    from z22susy.berezin import IntegrabilityError, berezin_integral

    with pytest.raises(IntegrabilityError):
        berezin_integral(p * p)
