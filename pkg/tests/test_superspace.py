import pytest
import sympy

from z22susy import displays as DS
from z22susy.algebra import degree_of, truncate_z, weight_of
from z22susy.calculus import pullback
from z22susy.superspace import (
    AuditError,
    SuperfieldSpec,
    bracket_audit,
    build_context,
    component_susy,
    components,
    covariant_expansion,
    expand,
    is_z_constrained,
    supertranslation,
)

CTX = build_context()
FREE = build_context(superfields=[SuperfieldSpec("Phi", z_constrained=False)])


def test_bracket_table():
    rows = {r["bracket"]: r["ok"] for r in CTX.audit}
    assert len(rows) == 28 and all(rows.values())
    for label in ("[Q_-,Q_-]=P_-", "[Q_+,Q_+]=P_+", "[Q_-,Q_+]=Z", "[D_-,D_-]=-P_-", "[D_+,D_+]=-P_+", "[D_-,D_+]=-Z", "[Q_-,D_+]=0"):
        assert rows[label], label


def test_audit_detects_a_wrong_sign():
    ders = dict(CTX.derivations)
    ders["Q_+"] = -ders["Q_+"]
    bad = [r["bracket"] for r in bracket_audit(CTX.alg, ders) if not r["ok"]]
    assert "[Q_-,Q_+]=Z" in bad


def test_expansion_and_components():
    phi = expand(CTX, "Phi")
    assert degree_of(phi).is_zero and weight_of(phi) == 0
    assert is_z_constrained(phi)
    comps = components(CTX, phi)
    assert comps[(0, 0, 0)] == CTX.alg.const(CTX.alg.field("X"))
    assert not is_z_constrained(expand(FREE, "Phi"))


def test_products_stay_z_constrained():
    phi = expand(CTX, "Phi")
    assert is_z_constrained(phi * phi * phi)


def test_covariant_lemma():
    printed = DS.covariant_lemma(FREE)
    assert truncate_z(covariant_expansion(FREE, "Phi", "D_-"), 0) == printed["D_-"]
    got = truncate_z(covariant_expansion(FREE, "Phi", "D_+"), 0)
    # the printed θ₊G term should read θ₋G
    j = DS.Jets(FREE)
    h = sympy.Rational(1, 2)
    fixed = printed["D_+"] + (j.g("theta_+") * j("G")).scale(h) - (j.g("theta_-") * j("G")).scale(h)
    assert got != printed["D_+"] and got == fixed


def test_covariant_derivatives_commute_with_supertranslations():
    phi = expand(CTX, "Phi")
    st = supertranslation(CTX, {"lambda^-": 0, "lambda^+": 0, "mu": 0})
    for D in ("D_-", "D_+"):
        lhs = pullback(st, CTX.derivations[D](phi))
        rhs = CTX.derivations[D](pullback(st, phi))
        assert lhs == rhs


def test_component_susy():
    th = component_susy(CTX).table
    j = DS.Jets(CTX)
    assert th["X"] == j.g("eps_-") * j("psi_+") + j.g("eps_+") * j("psi_-")
    assert degree_of(th["F"]) == degree_of(j("F"))


def test_supersymmetry_closes_on_translations():
    """Q₋ and Q₊ cross-commute in the sign rule, so their bracket is a commutator."""
    phi = expand(CTX, "Phi")
    Qm, Qp = CTX.derivations["Q_-"], CTX.derivations["Q_+"]
    lhs = Qm(Qm(phi)).scale(2)
    assert lhs == CTX.derivations["P_-"](phi)
    assert Qm(Qp(phi)) - Qp(Qm(phi)) == CTX.derivations["Z"](phi)


def test_audit_runs_on_every_build():
    with pytest.raises(KeyError):
        CTX.superfield("nope")
    assert isinstance(AuditError("x"), Exception)
