"""Verification suites: derived results against transcribed displays and
randomized property checks.

Every check carries a descriptive anchor (or "property" for randomized
kernel checks) and a status in {pass, fail, finding}.  ``finding`` marks a
probe whose outcome is a statement about the published text rather than a
requirement on the code; findings never affect the exit code.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import sympy

from . import displays as DS
from . import models as M
from . import oracles
from .algebra import degree_of, truncate_z, weight_of
from .berezin import IntegrabilityError, berezin_integral, is_integrable, z2_berezinian, z_obstruction
from .calculus import commute_partials_check, jacobian, substitute
from .coordinate_changes import TemplateConfig, run_trials, simplified_no_z_matrix
from .grading import Degree
from .serialize import matrix_text, to_text
from .superspace import (
    SuperfieldSpec,
    boost,
    boost_symbol,
    build_context,
    component_susy,
    covariant_expansion,
    expand,
    is_z_constrained,
    supertranslation,
)

REPORT_VERSION = 1
SUITES = ("algebra", "superspace", "berezin", "models", "appendix-b")
PASS, FAIL, FINDING = "pass", "fail", "finding"


@dataclass(frozen=True)
class VerifyConfig:
    seed: int = 0
    # randomized counts scale from this: 10x multiplication pairs,
    # 2x Jacobi triples, 1x matrices and coordinate changes
    trials: int = 50
    # z truncation of the coordinate-change template
    z_order: int = 3
    liouville_trials: int = 20

    @property
    def multiplication_pairs(self) -> int:
        return 10 * self.trials

    @property
    def jacobi_triples(self) -> int:
        return 2 * self.trials

    def snapshot(self) -> dict:
        d = asdict(self)
        d.update(multiplication_pairs=self.multiplication_pairs, jacobi_triples=self.jacobi_triples)
        return d


@dataclass
class Check:
    id: str
    anchor: str
    status: str
    witness: str | None = None

    def as_dict(self) -> dict:
        return {"id": self.id, "anchor": self.anchor, "status": self.status, "witness": self.witness}


@dataclass
class VerificationReport:
    suite: str
    checks: list[Check]
    config: dict
    timing: dict = field(default_factory=dict)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def findings(self) -> list[Check]:
        return [c for c in self.checks if c.status == FINDING]

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self, include_timing: bool = False) -> dict:
        d = {
            "report_version": REPORT_VERSION,
            "suite": self.suite,
            "config": self.config,
            "summary": {
                "checks": len(self.checks),
                "pass": sum(c.status == PASS for c in self.checks),
                "fail": len(self.failures),
                "finding": len(self.findings),
            },
            "checks": [c.as_dict() for c in self.checks],
        }
        if include_timing:
            d["timing"] = self.timing
        return d

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.as_dict(include_timing), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        lines = []
        for c in self.checks:
            line = f"{c.status.upper():8} {c.id}  [{c.anchor}]"
            if c.status != PASS and c.witness:
                line += "\n         " + c.witness.replace("\n", "\n         ")
            lines.append(line)
        s = self.as_dict()["summary"]
        lines.append(f"{s['checks']} checks: {s['pass']} pass, {s['fail']} fail, {s['finding']} finding")
        return "\n".join(lines) + "\n"


def _check(id_, anchor, ok, witness=None) -> Check:
    return Check(id_, anchor, PASS if ok else FAIL, None if ok else witness)


def _property(rep: dict, id_: str) -> Check:
    ok = rep["failures"] == 0
    w = None if ok else json.dumps(rep["witness"], sort_keys=True, default=str)
    return Check(id_, "property", PASS if ok else FAIL, w)


def _diff(a, b) -> str:
    return f"computed: {to_text(a)}\ndisplayed: {to_text(b)}\ndifference: {to_text(a - b)}"


# -- algebra ------------------------------------------------------------------

def algebra_checks(cfg: VerifyConfig) -> list[Check]:
    ctx = build_context(z_truncation=3)
    alg = ctx.alg
    rng = random.Random(f"algebra:{cfg.seed}")
    out = [
        _property(oracles.multiplication_oracle(alg, cfg.multiplication_pairs, rng), "algebra:multiplication-oracle"),
        _property(oracles.jacobi_check(alg, cfg.jacobi_triples, rng, ("theta_-", "theta_+", "z", "eps_-", "eps_+")), "algebra:graded-jacobi"),
    ]
    out.append(_property(commute_partials_check(alg), "algebra:partials-graded-commute"))
    em, tp, ep, tm = (alg.gen(n) for n in ("eps_-", "theta_+", "eps_+", "theta_-"))
    lhs = alg.monomial(1, [(em, 1), (tp, 1)]) * alg.monomial(1, [(ep, 1), (tm, 1)])
    want = oracles.oracle_normal_form(alg, [em, tp, ep, tm])
    out.append(_check("algebra:reordering-example", "sign-table", oracles.kernel_normal_form(lhs) == want, to_text(lhs)))
    z, a = alg.expr("z"), alg.expr("alpha")
    exotic_ok = not (z * z).is_zero() and (a * a) == alg.one() and (alg.expr(tm) * alg.expr(tm)).is_zero()
    out.append(_check("algebra:exotic-not-nilpotent", "exotic-boson", exotic_ok))
    return out


# -- superspace ---------------------------------------------------------------

EXPECTED_DERIVATION_WEIGHTS = {
    "P_-": Fraction(1), "P_+": Fraction(-1), "Z": Fraction(0),
    "Q_-": Fraction(1, 2), "Q_+": Fraction(-1, 2), "D_-": Fraction(1, 2), "D_+": Fraction(-1, 2),
}
EXPECTED_COMPONENT_WEIGHTS = {
    "X": Fraction(0), "psi_+": Fraction(1, 2), "psi_-": Fraction(-1, 2), "F": Fraction(0),
    "G": Fraction(0), "chi_+": Fraction(1, 2), "chi_-": Fraction(-1, 2),
}


def superspace_checks(cfg: VerifyConfig) -> list[Check]:
    ctx = build_context()
    out = []
    for row in ctx.audit:
        label = row["bracket"].replace("_", "")
        out.append(_check(f"bracket:{label}", "bracket-table", row["ok"], row["computed"]))
    for name, w in EXPECTED_DERIVATION_WEIGHTS.items():
        got = ctx.derivations[name].weight
        out.append(_check(f"weight:{name}", "boost-weights", got == w, f"weight {got}, expected {w}"))

    free = build_context(superfields=[SuperfieldSpec("Phi", z_constrained=False)])
    alg = free.alg
    for base, w in EXPECTED_COMPONENT_WEIGHTS.items():
        got = weight_of(alg.expr(alg.field(base)))
        out.append(_check(f"weight:{base}", "boost-weights", got == w, f"weight {got}, expected {w}"))
    phi = expand(free, "Phi")
    out.append(_check("superfield:lorentz-scalar", "superfield-expansion", weight_of(phi) == 0 and degree_of(phi).is_zero))

    printed = DS.covariant_lemma(free)
    for which in ("D_-", "D_+"):
        got = truncate_z(covariant_expansion(free, "Phi", which), 0)
        ok = got == printed[which]
        status = PASS if ok else FINDING
        out.append(Check(f"lemma:{which.replace('_', '')}Phi", "covariant-superfield-lemma", status, None if ok else _diff(got, printed[which])))

    sf = ctx.superfields[0]
    p = expand(ctx, sf)
    constrained = is_z_constrained(p) and is_z_constrained(p * p) and is_z_constrained(p * p * p)
    out.append(_check("superfield:z-constrained-closure", "z-constrained-superfield", constrained))

    delta = component_susy(ctx)
    j = DS.Jets(ctx)
    em, ep = j.g("eps_-"), j.g("eps_+")
    H = sympy.Rational(1, 2)
    want = {
        "X": em * j("psi_+") + ep * j("psi_-"),
        "psi_+": -(em * j("X", 1, 0)).scale(H) + ep * j("F"),
        "psi_-": -(ep * j("X", 0, 1)).scale(H) + em * j("F"),
        "F": -(em * j("psi_-", 1, 0)).scale(H) - (ep * j("psi_+", 0, 1)).scale(H),
    }
    for k, v in want.items():
        got = delta.table[k]
        out.append(_check(f"susy:component:{k}", "component-supersymmetry", got == v, _diff(got, v)))
    return out


# -- berezin ------------------------------------------------------------------

def berezin_checks(cfg: VerifyConfig) -> list[Check]:
    ctx = build_context()
    out = []
    JS = jacobian(supertranslation(ctx))
    out.append(_check("volume:supertranslation-jacobian", "volume-invariance", JS == DS.supertranslation_jacobian(ctx), matrix_text(JS)))
    ber = z2_berezinian(JS)
    out.append(_check("volume:ber-supertranslation=1", "volume-invariance", ber == ctx.alg.one(), to_text(ber)))
    m = boost_symbol()
    JL = jacobian(boost(ctx, m))
    out.append(_check("volume:boost-jacobian", "volume-invariance", JL == DS.boost_jacobian(ctx, m), matrix_text(JL)))
    ber = z2_berezinian(JL)
    out.append(_check("volume:ber-boost=1", "volume-invariance", ber == ctx.alg.one(), to_text(ber)))

    mat = build_context(z_truncation=3)
    rng = random.Random(f"berezin:{cfg.seed}")
    names = ("theta_-", "theta_+", "z", "eps_-", "eps_+")
    out.append(_property(oracles.berezinian_multiplicativity(mat.alg, cfg.trials, rng, names), "ber:multiplicative"))
    tau = mat.alg.expr("theta_-") * mat.alg.expr("eps_-")
    out.append(_property(oracles.liouville_check(mat.alg, cfg.liouville_trials, rng, ("theta_+", "z", "eps_+"), tau), "ber:one-plus-nilpotent"))

    phi = expand(ctx, "Phi")
    half = sympy.Rational(1, 2)
    out.append(_check("berezin:constrained-quadratic-integrable", "integrable-section", is_integrable((phi * phi).scale(half))))
    free = build_context(superfields=[SuperfieldSpec("Phi", z_constrained=False)])
    p = expand(free, "Phi")
    try:
        berezin_integral((p * p).scale(half))
        raised = False
    except IntegrabilityError:
        raised = True
    out.append(_check("berezin:unconstrained-quadratic-rejected", "integrable-section", raised))
    obs = z_obstruction(z2_berezinian(simplified_no_z_matrix(cfg.z_order)))
    out.append(_check("berezin:reduced-jacobian-no-z-term", "no-z-term-argument", obs.is_zero(), to_text(obs)))
    return out


# -- models -------------------------------------------------------------------

def _eom_equivalent(alg, computed: M.EomSystem, displayed: dict, rewrite=False) -> tuple[bool, str]:
    disp = M.EomSystem(alg, displayed)
    fix = M.rewrite_double_angle if rewrite else (lambda e: e)
    bad = [k for k, v in computed.equations.items() if not fix(disp.reduce(v)).is_zero()]
    bad += [k for k, v in disp.equations.items() if not fix(computed.reduce(v)).is_zero()]
    return not bad, "not implied: " + ", ".join(bad)


def _all_models():
    """(model, compare EL routes); abstract metrics give no invertible
    coefficient to orient by, so only their degrees are checked."""
    return [
        (M.linear_sigma(1, "minkowski"), True), (M.linear_sigma(2), False), (M.linear_sigma(2, "minkowski"), True),
        (M.nonlinear_sigma(1), True), (M.nonlinear_sigma(2), False),
        (M.superpotential_model(1), True), (M.superpotential_model(2), True),
        (M.sine_gordon(), True), (M.sine_gordon(False), True), (M.exotic_model(), True), (M.exotic_model((1, 2, 3)), True),
    ]


def invariant_checks() -> list[Check]:
    out = []
    for i, (m, routes) in enumerate(_all_models()):
        tag = f"{m.name}#{i}"
        L = m.lagrangian
        ok = degree_of(L) == Degree((1, 1)) and weight_of(L) == 0
        out.append(_check(f"invariant:lagrangian-degree-weight:{tag}", "property", ok, f"{degree_of(L)}, {weight_of(L)}"))
        Lc = M.component_lagrangian(m)
        ok = degree_of(Lc).is_zero and weight_of(Lc) == 0
        out.append(_check(f"invariant:component-degree-weight:{tag}", "property", ok, f"{degree_of(Lc)}, {weight_of(Lc)}"))
        if not routes:
            continue
        same = M.component_el(m).equivalent(M.superspace_el_system(m))
        out.append(_check(f"invariant:el-routes-agree:{tag}", "property", same))
    return out


def sigma_checks() -> list[Check]:
    out = []
    m = M.linear_sigma(2)
    L = M.component_lagrangian(m)
    want = DS.linear_sigma_action(m.ctx, M._metric(2, "abstract"))
    out.append(_check("linear-sigma:component-action", "wess-zumino-action", L == want, _diff(L, want)))

    m = M.linear_sigma(1, "minkowski")
    ok, w = _eom_equivalent(m.ctx.alg, M.component_el(m), DS.free_equations(m.ctx))
    out.append(_check("linear-sigma:eom", "free-equations", ok, w))
    got = truncate_z(M.superspace_el(m)["Phi"], 0)
    want = DS.free_superspace_expansion(m.ctx)
    out.append(_check("linear-sigma:superspace-el-expansion", "free-superspace-expansion", got == want, _diff(got, want)))

    m = M.nonlinear_sigma(2)
    ctx = m.ctx
    g = M.metric_function(0, 1, m.arguments)
    te = M.taylor_expand(ctx, g, {a.value: a.superfield for a in m.arguments})
    want = DS.metric_expansion(ctx, g, [(a.value, a.superfield.index) for a in m.arguments])
    out.append(_check("nonlinear-sigma:metric-expansion", "metric-taylor-series", truncate_z(te, 0) == want, _diff(truncate_z(te, 0), want)))
    out.append(_check("nonlinear-sigma:z-constrained-closure", "metric-taylor-series", is_z_constrained(te)))

    m = M.superpotential_model(2)
    ctx = m.ctx
    args = [(a.value, a.superfield.index) for a in m.arguments]
    U = sympy.Function("U")(*[a.value for a in m.arguments])
    d = DS.superpotential_actions(ctx, M._minkowski(2), U, args)
    L = M.component_lagrangian(m)
    out.append(_check("superpotential:component-action", "superpotential-action", L == d["before"], _diff(L, d["before"])))
    Le, sol = M.eliminate_auxiliary(L, list(m.auxiliary))
    out.append(_check("superpotential:eliminated-action", "superpotential-action", Le == d["after"], _diff(Le, d["after"])))
    aux = M.EomSystem(ctx.alg, d["auxiliary"])
    ok = all(aux.vanishes(ctx.alg.expr(ctx.alg.field(k)) - v) for k, v in sol.items())
    out.append(_check("superpotential:auxiliary-solution", "auxiliary-equation", ok))
    return out


CURRENT_TABLE = {
    "--": (Degree((0, 1)), Fraction(-1, 2)),
    "-+": (Degree((0, 1)), Fraction(3, 2)),
    "+-": (Degree((1, 0)), Fraction(-3, 2)),
    "++": (Degree((1, 0)), Fraction(1, 2)),
}


def sine_gordon_checks() -> list[Check]:
    out = []
    m = M.sine_gordon()
    ctx = m.ctx
    d = DS.sine_gordon(ctx)
    j = DS.Jets(ctx)
    A = "sine-gordon"
    L = M.component_lagrangian(m)
    Le, sol = M.eliminate_auxiliary(L, "F")
    out.append(_check(f"{A}:auxiliary-solution", "auxiliary-equation", sol["F"] == d["F"], to_text(sol["F"])))
    rel = (ctx.alg.expr(ctx.alg.field("F")) - sol["F"]).scale(2) - d["auxiliary"]
    out.append(_check(f"{A}:auxiliary-equation", "auxiliary-equation", rel.is_zero(), to_text(rel)))
    out.append(_check(f"{A}:eliminated-action", "sine-gordon-action", M.matches_display(Le, d["action"]), _diff(Le, d["action"])))

    eom = M.component_el(L=Le, bases=["X", "psi_+", "psi_-"])
    ok, w = _eom_equivalent(ctx.alg, eom, d["eom"], rewrite=True)
    out.append(_check(f"{A}:eom", "sine-gordon-equations", ok, w))
    kill = ("psi_+", "psi_-")
    x_eq = M.rewrite_double_angle(M.EomSystem(ctx.alg, d["eom"]).equations["X"])
    x_classical = M.rewrite_double_angle(_kill_fields(x_eq, kill))
    out.append(_check(f"{A}:classical-reduction", "classical-sine-gordon", x_classical == d["classical"], _diff(x_classical, d["classical"])))
    x_computed = _kill_fields(M.rewrite_double_angle(eom.equations["X"]), kill)
    out.append(_check(f"{A}:classical-reduction-derived", "classical-sine-gordon", _proportional(x_computed, d["classical"]), to_text(x_computed)))

    Phi = expand(ctx, "Phi")
    s = sympy.Symbol("Phi")
    sin_half = M.taylor_expand(ctx, sympy.sin(s / 2), {s: "Phi"})
    sse = M.superspace_el(m)["Phi"]
    want = DS.sine_gordon_superspace_equation(ctx, Phi, sin_half)
    out.append(_check(f"{A}:superspace-equation", "sine-gordon-superspace-equation", sse == want, _diff(sse, want)))
    ok, w = _eom_equivalent(ctx.alg, M.superspace_el_system(m), d["superspace_eom"])
    out.append(_check(f"{A}:superspace-components", "sine-gordon-superspace-equation", ok, w))

    delta = M.on_shell_susy(m, sol)
    for k, v in d["on_shell_susy"].items():
        out.append(_check(f"{A}:on-shell-susy:{k}", "on-shell-supersymmetry", delta.table[k] == v, _diff(delta.table[k], v)))
    W = M.QuasiInvarianceWitness(d["v_minus"], d["v_plus"])
    res = M.quasi_invariance(Le, delta, W)
    out.append(_check(f"{A}:quasi-invariance", "quasi-invariance", res.is_zero(), to_text(res)))
    X = j.sym("X")
    H, Q = sympy.Rational(1, 2), sympy.Rational(1, 4)
    groups = {
        "L_0": (j("X", 1, 0) * j("X", 0, 1)).scale(Q),
        "L_+": (j("psi_+") * j("psi_+", 0, 1)).scale(H),
        "L_-": (j("psi_-") * j("psi_-", 1, 0)).scale(H),
        "L_1": j.c(Q * sympy.sin(X / 2) ** 2),
        "L_-+": -(j.g("alpha") * j("psi_-") * j("psi_+")).scale(H * sympy.cos(X / 2)),
    }
    total = sum(groups.values(), ctx.alg.zero())
    out.append(_check(f"{A}:lagrangian-groups", "quasi-invariance", M.matches_display(total, d["action"])))
    for k, g in groups.items():
        dg = delta(g)
        out.append(_check(f"{A}:delta-{k}", "quasi-invariance", M.matches_display(dg, d["delta_groups"][k]), _diff(dg, d["delta_groups"][k])))

    currents = M.noether_currents(Le, delta, W)
    for k, c in currents.items():
        want = d["currents"][k]
        out.append(_check(f"{A}:current:{k}", "noether-currents", c.expression == want, _diff(c.expression, want)))
        deg, wt = CURRENT_TABLE[k]
        out.append(_check(f"{A}:current-table:{k}", "current-boost-table", (c.degree, c.weight) == (deg, wt), f"{c.degree}, {c.weight}"))
    cons = M.conservation_check(currents, eom)
    disp_sys = M.EomSystem(ctx.alg, d["eom"])
    for s_, r in cons.items():
        out.append(_check(f"{A}:conservation:{s_}", "noether-conservation", r["ok"], to_text(r["reduced"])))
        fac = M.noether_factorization(Le, delta, "eps_" + s_)
        out.append(_check(f"{A}:divergence-factorization:{s_}", "property", fac == r["divergence"], _diff(r["divergence"], fac)))
        shown = d["divergences"][s_]
        on_shell = M.rewrite_double_angle(disp_sys.reduce(shown)).is_zero()
        agree = M.rewrite_double_angle(eom.reduce(r["divergence"] - shown)).is_zero()
        out.append(_check(f"{A}:divergence-display-on-shell:{s_}", "noether-conservation", on_shell and agree, _diff(r["divergence"], shown)))
        exact = M.matches_display(r["divergence"], shown)
        out.append(Check(f"{A}:divergence-display-exact:{s_}", "noether-conservation", PASS if exact else FINDING, None if exact else _diff(r["divergence"], shown)))
    return out


def _kill_fields(e, bases):
    """Set every jet of the given field bases to zero."""
    images = {g.name: e.alg.zero() for g in e.generators() if g.base in bases}
    return substitute(e, images)


def _proportional(a, b) -> bool:
    """a = c b for a nonzero rational c."""
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    key = next(iter(b.terms))
    if key not in a.terms:
        return False
    c = sympy.cancel(a.terms[key] / b.terms[key])
    return c.is_Rational and c != 0 and a == b.scale(c)


def exotic_checks() -> list[Check]:
    out = []
    A = "exotic"
    m = M.exotic_model()
    ctx = m.ctx
    d = DS.exotic(ctx)
    L = M.component_lagrangian(m)
    out.append(_check(f"{A}:component-action", "exotic-action", L == d["action"], _diff(L, d["action"])))
    eom = M.component_el(m)
    ok, w = _eom_equivalent(ctx.alg, eom, d["eom"])
    out.append(_check(f"{A}:eom", "exotic-equations", ok, w))
    delta = component_susy(ctx)
    for k, v in d["susy"].items():
        out.append(_check(f"{A}:susy:{k}", "exotic-supersymmetry", delta.table[k] == v, _diff(delta.table[k], v)))

    W = M.QuasiInvarianceWitness(d["v_minus"], d["v_plus"])
    res = M.quasi_invariance(L, delta, W)
    reduced = eom.reduce(res)
    out.append(_check(f"{A}:quasi-invariance-on-shell", "exotic-quasi-invariance", reduced.is_zero(), to_text(reduced)))
    out.append(Check(f"{A}:quasi-invariance-off-shell", "exotic-quasi-invariance", PASS if res.is_zero() else FINDING,
                     None if res.is_zero() else f"off-shell residual: {to_text(res)}"))
    j = DS.Jets(ctx)
    H = sympy.Rational(1, 2)
    em, ep, G = j.g("eps_-"), j.g("eps_+"), j("G")
    corrected = M.QuasiInvarianceWitness(d["v_minus"] - (em * G * j("chi_-")).scale(H), d["v_plus"] - (ep * G * j("chi_+")).scale(H))
    res2 = M.quasi_invariance(L, delta, corrected)
    out.append(Check(f"{A}:quasi-invariance-corrected-witness", "exotic-quasi-invariance", PASS if res2.is_zero() else FAIL,
                     None if res2.is_zero() else to_text(res2)))

    currents = M.noether_currents(L, delta, W)
    for k, want in d["currents"].items():
        c = currents[k]
        out.append(_check(f"{A}:current:{k}", "exotic-currents", c.expression == want, _diff(c.expression, want)))
        deg, wt = CURRENT_TABLE[k]
        out.append(_check(f"{A}:current-table:{k}", "current-boost-table", (c.degree, c.weight) == (deg, wt), f"{c.degree}, {c.weight}"))
    others = [k for k in currents if k not in d["currents"]]
    vanish = all(eom.reduce(currents[k].expression).is_zero() for k in others)
    out.append(_check(f"{A}:other-currents-vanish-on-shell", "exotic-currents", vanish))
    mislabeled = {k: v for k, v in d["printed_labels"].items() if k != v}
    out.append(Check(f"{A}:current-labels", "exotic-currents", FINDING if mislabeled else PASS,
                     None if not mislabeled else "printed label J^{++} denotes the (eps_+, partial_-) current J^{+-}"))
    cons = M.conservation_check({k: currents[k] for k in currents if k in ("-+", "+-", "--", "++")}, eom)
    out.append(_check(f"{A}:conservation", "exotic-currents", all(r["ok"] for r in cons.values())))

    Psi = expand(ctx, "Psi")
    claim = DS.exotic_superspace_claim(ctx, Psi)
    sse = M.superspace_el(m)["Psi"]
    as_sum = sse == claim["sum"] or sse == -claim["sum"]
    out.append(_check(f"{A}:superspace-el-is-sum-form", "exotic-superspace-equation", as_sum, _diff(sse, claim["sum"])))
    prod = claim["product"]
    prod_holds = _superfield_vanishes_on_shell(ctx, prod, eom)
    out.append(Check(f"{A}:superspace-product-claim", "exotic-superspace-equation", PASS if prod_holds else FINDING,
                     None if prod_holds else f"D_-Psi D_+Psi = {to_text(truncate_z(prod, 0))} does not vanish on-shell; the sum form does"))
    out.append(_check(f"{A}:superspace-system-agrees", "exotic-superspace-equation", M.superspace_el_system(m).equivalent(eom)))
    return out


def _superfield_vanishes_on_shell(ctx, e, eom) -> bool:
    for key, c in truncate_z(e, 0).terms.items():
        coeff = ctx.alg.monomial(c, [(g, p) for g, p in key if g.base is not None])
        if not eom.reduce(coeff).is_zero():
            return False
    return True


def model_checks(cfg: VerifyConfig) -> list[Check]:
    return sigma_checks() + sine_gordon_checks() + exotic_checks() + invariant_checks()


# -- coordinate independence ---------------------------------------------------

def appendix_checks(cfg: VerifyConfig) -> list[Check]:
    tcfg = TemplateConfig(z_truncation=cfg.z_order)
    out = []
    for rep in run_trials(cfg.trials, cfg.seed, tcfg):
        out.append(_property(rep, f"coordinates:{rep['check']}"))
    return out


RUNNERS = {
    "algebra": algebra_checks,
    "superspace": superspace_checks,
    "berezin": berezin_checks,
    "models": model_checks,
    "appendix-b": appendix_checks,
}


def run(suite: str = "all", cfg: VerifyConfig = VerifyConfig()) -> VerificationReport:
    if suite != "all" and suite not in RUNNERS:
        raise ValueError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES + ('all',))}")
    names = SUITES if suite == "all" else (suite,)
    checks, timing = [], {}
    for name in names:
        t0 = time.perf_counter()
        part = RUNNERS[name](cfg)
        timing[name] = round(time.perf_counter() - t0, 3)
        checks.extend(sorted(part, key=lambda c: c.id))
    ids = [c.id for c in checks]
    if len(ids) != len(set(ids)):
        raise AssertionError("duplicate check ids")
    return VerificationReport(suite, checks, cfg.snapshot(), timing)
