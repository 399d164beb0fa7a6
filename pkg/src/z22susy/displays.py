"""Reference expressions transcribed from the published displays.

Each builder returns expressions in the algebra of the given context, typed
in the displayed factor order so that Koszul signs enter exactly as printed.
Nothing here is computed from the theory; the verification suite compares
these against the derived results.
"""

from __future__ import annotations

import sympy

from .algebra import GradedExpr
from .matrix import GradedMatrix
from .superspace import SuperspaceContext

H = sympy.Rational(1, 2)
Q = sympy.Rational(1, 4)


class Jets:
    """Shorthand constructors for jets and constants of one context."""

    def __init__(self, ctx: SuperspaceContext):
        self.ctx = ctx
        self.alg = ctx.alg

    def __call__(self, base: str, minus: int = 0, plus: int = 0) -> GradedExpr:
        return self.alg.expr(self.alg.field(base, (minus, plus)))

    def c(self, x) -> GradedExpr:
        return self.alg.const(x)

    def g(self, name: str) -> GradedExpr:
        return self.alg.expr(name)

    def sym(self, base: str = "X"):
        return self.alg.field(base)


# -- superfield lemma ---------------------------------------------------------

def covariant_lemma(ctx: SuperspaceContext, index: str = "") -> dict:
    """D₋Φ and D₊Φ as printed, for an unconstrained degree-(0,0) superfield."""
    j = Jets(ctx)
    s = (lambda b: f"{b}^{index}") if index else (lambda b: b)
    tm, tp = j.g("theta_-"), j.g("theta_+")
    X, pp, pm, F, G = s("X"), s("psi_+"), s("psi_-"), s("F"), s("G")
    cp, cm = s("chi_+"), s("chi_-")
    d_minus = (
        j(pp) + tp * j(F) - (tm * j(X, 1, 0)).scale(H) - (tm * tp * j(pm, 1, 0)).scale(H)
        + (tp * j(G)).scale(H) + (tm * tp * j(cp)).scale(H)
    )
    d_plus = (
        j(pm) + tm * j(F) - (tp * j(X, 0, 1)).scale(H) - (tm * tp * j(pp, 0, 1)).scale(H)
        - (tp * j(G)).scale(H) - (tm * tp * j(cm)).scale(H)
    )
    return {"D_-": d_minus, "D_+": d_plus}


# -- volume invariance ----------------------------------------------------------

def supertranslation_jacobian(ctx: SuperspaceContext) -> GradedMatrix:
    alg = ctx.alg
    em, ep = alg.expr("eps_-"), alg.expr("eps_+")
    rows = [
        [1, 0, 0, em.scale(-H), 0],
        [0, 1, 0, 0, ep.scale(-H)],
        [0, 0, 1, ep.scale(H), em.scale(-H)],
        [0, 0, 0, 1, 0],
        [0, 0, 0, 0, 1],
    ]
    return GradedMatrix.from_rows(alg, rows, _coordinate_degrees(ctx))


def boost_jacobian(ctx: SuperspaceContext, m: sympy.Symbol) -> GradedMatrix:
    """Diagonal e^{-β}, e^{β}, 1, e^{-β/2}, e^{β/2} with m = e^{β/2}."""
    diag = [m ** -2, m ** 2, 1, m ** -1, m]
    rows = [[diag[i] if i == k else 0 for k in range(5)] for i in range(5)]
    return GradedMatrix.from_rows(ctx.alg, rows, _coordinate_degrees(ctx))


def _coordinate_degrees(ctx):
    from .grading import Degree

    z, tm, tp = ctx.z, ctx.theta_m, ctx.theta_p
    return (Degree((0, 0)), Degree((0, 0)), z.degree, tm.degree, tp.degree)


# -- linear sigma model -------------------------------------------------------

def linear_sigma_action(ctx: SuperspaceContext, eta) -> GradedExpr:
    """¼∂₋X^a∂₊X^b η_ba + ½ψ₊^a∂₊ψ₊^b η_ba + ½ψ₋^a∂₋ψ₋^b η_ba − F^aF^b η_ba."""
    j = Jets(ctx)
    n = len(ctx.superfields)
    idx = [f.index for f in ctx.superfields]
    s = lambda b, a: f"{b}^{a}" if a else b  # noqa: E731
    out = ctx.alg.zero()
    for a in range(n):
        for b in range(n):
            g = eta[(b, a)]
            ia, ib = idx[a], idx[b]
            term = (
                (j(s("X", ia), 1, 0) * j(s("X", ib), 0, 1)).scale(Q)
                + (j(s("psi_+", ia)) * j(s("psi_+", ib), 0, 1)).scale(H)
                + (j(s("psi_-", ia)) * j(s("psi_-", ib), 1, 0)).scale(H)
                - j(s("F", ia)) * j(s("F", ib))
            )
            out = out + term.scale(g)
    return out


def free_equations(ctx: SuperspaceContext, index: str = "") -> dict:
    """∂₋∂₊X = 0, F = 0, ∂₊ψ₊ = 0, ∂₋ψ₋ = 0."""
    j = Jets(ctx)
    s = (lambda b: f"{b}^{index}") if index else (lambda b: b)
    return {
        s("X"): j(s("X"), 1, 1),
        s("F"): j(s("F")),
        s("psi_+"): j(s("psi_+"), 0, 1),
        s("psi_-"): j(s("psi_-"), 1, 0),
    }


def free_superspace_expansion(ctx: SuperspaceContext, index: str = "") -> GradedExpr:
    """2F − θ₊∂₊ψ₊ − θ₋∂₋ψ₋ + ½θ₋θ₊∂₊∂₋X."""
    j = Jets(ctx)
    s = (lambda b: f"{b}^{index}") if index else (lambda b: b)
    tm, tp = j.g("theta_-"), j.g("theta_+")
    return (
        j(s("F")).scale(2) - tp * j(s("psi_+"), 0, 1) - tm * j(s("psi_-"), 1, 0)
        + (tm * tp * j(s("X"), 1, 1)).scale(H)
    )


# -- non-linear sigma model ---------------------------------------------------

def metric_expansion(ctx: SuperspaceContext, g: sympy.Expr, args) -> GradedExpr:
    """g(X) + θ₊ψ₋^c ∂_c g + θ₋ψ₊^c ∂_c g + θ₋θ₊ F^c ∂_c g + θ₋θ₊ ψ₊^cψ₋^d ∂_d∂_c g, at z⁰.

    ``args`` lists (superfield symbol, index) pairs; g is a function of the
    symbols and is evaluated at the X's.
    """
    j = Jets(ctx)
    tm, tp = j.g("theta_-"), j.g("theta_+")
    s = lambda b, a: f"{b}^{a}" if a else b  # noqa: E731
    at_x = {p: ctx.alg.field(s("X", a)) for p, a in args}
    ev = lambda e: e.subs(at_x)  # noqa: E731
    out = j.c(ev(g))
    for pc, c in args:
        dg = ev(sympy.diff(g, pc))
        out = out + (tp * j(s("psi_-", c))).scale(dg) + (tm * j(s("psi_+", c))).scale(dg)
        out = out + (tm * tp * j(s("F", c))).scale(dg)
        for pd, dd in args:
            d2 = ev(sympy.diff(g, pc, pd))
            out = out + (tm * tp * j(s("psi_+", c)) * j(s("psi_-", dd))).scale(d2)
    return out


# -- superpotential model -----------------------------------------------------

def superpotential_actions(ctx: SuperspaceContext, eta, U: sympy.Expr, args) -> dict:
    """Component action before and after eliminating F, with W = w U.

    ``args`` lists (superfield symbol, index); η must be diagonal with
    entries ±1 so that η^{ab} = η_{ab}.
    """
    j = Jets(ctx)
    w = j.g("w")
    s = lambda b, a: f"{b}^{a}" if a else b  # noqa: E731
    at_x = {p: ctx.alg.field(s("X", a)) for p, a in args}
    ev = lambda e: e.subs(at_x)  # noqa: E731
    kin = ctx.alg.zero()
    idx = [a for _, a in args]
    for ia in range(len(idx)):
        for ib in range(len(idx)):
            g = eta.get((ib, ia), 0)
            if g == 0:
                continue
            a, b = idx[ia], idx[ib]
            kin = kin + (
                (j(s("X", a), 1, 0) * j(s("X", b), 0, 1)).scale(Q)
                + (j(s("psi_+", a)) * j(s("psi_+", b), 0, 1)).scale(H)
                + (j(s("psi_-", a)) * j(s("psi_-", b), 1, 0)).scale(H)
            ).scale(g)
    ff = ctx.alg.zero()
    fw = ctx.alg.zero()
    yuk = ctx.alg.zero()
    ww = ctx.alg.zero()
    for ia, (pa, a) in enumerate(args):
        dWa = ev(sympy.diff(U, pa))
        fw = fw + (j(s("F", a)) * w).scale(dWa)
        for ib, (pb, b) in enumerate(args):
            ff = ff + (j(s("F", a)) * j(s("F", b))).scale(eta.get((ib, ia), 0))
            yuk = yuk + (j(s("psi_-", a)) * j(s("psi_+", b)) * w).scale(ev(sympy.diff(U, pb, pa)))
            ww = ww + (w * w).scale(ev(sympy.diff(U, pb)) * ev(sympy.diff(U, pa)) * eta.get((ia, ib), 0))
    before = kin - ff - fw - yuk
    after = kin + ww.scale(Q) - yuk
    aux = {}
    for ia, (pa, a) in enumerate(args):
        # F^b η_ba = −½ ∂W/∂X^a
        lhs = sum((j(s("F", b)).scale(eta.get((ib, ia), 0)) for ib, (_, b) in enumerate(args)), ctx.alg.zero())
        aux[s("F", a)] = lhs + w.scale(H * ev(sympy.diff(U, pa)))
    return {"before": before, "after": after, "auxiliary": aux}


# -- sine-Gordon --------------------------------------------------------------

def sine_gordon(ctx: SuperspaceContext) -> dict:
    j = Jets(ctx)
    X = j.sym("X")
    al = j.g("alpha")
    em, ep = j.g("eps_-"), j.g("eps_+")
    s2, c2, s1 = sympy.sin(X / 2), sympy.cos(X / 2), sympy.sin(X)
    pp, pm = j("psi_+"), j("psi_-")
    out = {}
    out["auxiliary"] = j("F").scale(2) + al.scale(s2)
    out["F"] = al.scale(-H * s2)
    out["action"] = (
        (j("X", 1, 0) * j("X", 0, 1)).scale(Q) + (pp * j("psi_+", 0, 1)).scale(H) + (pm * j("psi_-", 1, 0)).scale(H)
        + j.c(Q * s2 ** 2) - (al * pm * pp).scale(H * c2)
    )
    out["eom"] = {
        "X": j("X", 1, 1) - j.c(Q * s1) - (al * pm * pp).scale(H * s2),
        "psi_+": j("psi_+", 0, 1) + (al * pm).scale(H * c2),
        "psi_-": j("psi_-", 1, 0) + (al * pp).scale(H * c2),
    }
    out["classical"] = j("X", 1, 1) - j.c(Q * s1)
    out["superspace_eom"] = {
        "X": j("X", 1, 1) + (al * j("F")).scale(c2) - (al * pm * pp).scale(H * s2),
        "F": j("F").scale(2) + al.scale(s2),
        "psi_+": j("psi_+", 0, 1) + (al * pm).scale(H * c2),
        "psi_-": j("psi_-", 1, 0) + (al * pp).scale(H * c2),
    }
    out["on_shell_susy"] = {
        "X": em * pp + ep * pm,
        "psi_+": (em * j("X", 1, 0) + ep * al.scale(s2)).scale(-H),
        "psi_-": (ep * j("X", 0, 1) + em * al.scale(s2)).scale(-H),
    }
    dX_m, dX_p = j("X", 1, 0), j("X", 0, 1)
    out["delta_groups"] = {
        "L_0": (em * (j("psi_+", 1, 0) * dX_p + j("psi_+", 0, 1) * dX_m)).scale(Q)
        + (ep * (j("psi_-", 1, 0) * dX_p + j("psi_-", 0, 1) * dX_m)).scale(Q),
        "L_+": -(em * (j("psi_+", 0, 1) * dX_m - pp * j("X", 1, 1))).scale(Q)
        - (ep * (al.scale(s2) * j("psi_+", 0, 1) - (al * dX_p).scale(H * c2) * pp)).scale(Q),
        "L_-": -(ep * (j("psi_-", 1, 0) * dX_p - pm * j("X", 1, 1))).scale(Q)
        - (em * (al.scale(s2) * j("psi_-", 1, 0) - (al * dX_m).scale(H * c2) * pm)).scale(Q),
        "L_1": (em * pp).scale(s1 / 8) + (ep * pm).scale(s1 / 8),
        "L_-+": -(ep * ((al * dX_p).scale(c2) * pp + pm.scale(H * s1))).scale(Q)
        - (em * (pp.scale(H * s1) + (al * dX_m).scale(c2) * pm)).scale(Q),
    }
    out["v_minus"] = (em * (pp * dX_p - al.scale(s2) * pm)).scale(Q)
    out["v_plus"] = (ep * (pm * dX_m - al.scale(s2) * pp)).scale(Q)
    out["currents"] = {
        "--": (al * pm).scale(H * s2),
        "-+": (dX_m * pp).scale(H),
        "+-": (dX_p * pm).scale(H),
        "++": (al * pp).scale(H * s2),
    }
    eom_x = j("X", 1, 1) - j.c(Q * s1) - (al * pm * pp).scale(H * s2)
    out["divergences"] = {
        "-": ((j("psi_+", 0, 1) + (al * pm).scale(H * c2)) * dX_m).scale(H) + (eom_x * pp).scale(H),
        "+": ((j("psi_-", 1, 0) + (al * pp).scale(H * c2)) * dX_p).scale(H) + (eom_x * pm).scale(H),
    }
    return out


def sine_gordon_superspace_equation(ctx: SuperspaceContext, Phi: GradedExpr, sin_half: GradedExpr) -> GradedExpr:
    """D₋D₊Φ + D₊D₋Φ + α sin(Φ/2), with sin(Φ/2) supplied as an expansion."""
    Dm, Dp = ctx.derivations["D_-"], ctx.derivations["D_+"]
    return Dm(Dp(Phi)) + Dp(Dm(Phi)) + ctx.alg.expr("alpha") * sin_half


# -- exotic scalar -------------------------------------------------------------

def exotic(ctx: SuperspaceContext) -> dict:
    j = Jets(ctx)
    em, ep = j.g("eps_-"), j.g("eps_+")
    Y, cp, cm, G = j("Y"), j("chi_+"), j("chi_-"), j("G")
    out = {}
    out["action"] = (
        -(j("Y", 1, 0) * j("Y", 0, 1)).scale(Q) + (cm * j("chi_-", 1, 0)).scale(H)
        + (cp * j("chi_+", 0, 1)).scale(H) + G * G
    )
    out["eom"] = {"G": G, "Y": j("Y", 1, 1), "chi_-": j("chi_-", 1, 0), "chi_+": j("chi_+", 0, 1)}
    out["susy"] = {
        "G": -(em * j("chi_-", 1, 0)).scale(H) - (ep * j("chi_+", 0, 1)).scale(H),
        "Y": em * cp + ep * cm,
        "chi_-": -(ep * j("Y", 0, 1)).scale(H) + em * G,
        "chi_+": -(em * j("Y", 1, 0)).scale(H) + ep * G,
    }
    out["v_minus"] = (em * j("Y", 0, 1) * cp).scale(Q)
    out["v_plus"] = (ep * j("Y", 1, 0) * cm).scale(Q)
    # printed as J^{-+} and J^{++}; the second is the (ε₊, ∂₋) current
    out["currents"] = {"-+": (j("Y", 1, 0) * cp).scale(H), "+-": (j("Y", 0, 1) * cm).scale(H)}
    out["printed_labels"] = {"-+": "-+", "+-": "++"}
    return out


def exotic_superspace_claim(ctx: SuperspaceContext, Psi: GradedExpr) -> dict:
    """The printed reduction D₋ΨD₊Ψ and the sum form D₋D₊Ψ + D₊D₋Ψ."""
    Dm, Dp = ctx.derivations["D_-"], ctx.derivations["D_+"]
    return {"product": Dm(Psi) * Dp(Psi), "sum": Dm(Dp(Psi)) + Dp(Dm(Psi))}
