"""Sigma-model actions on (1,1) superspace and their component field theory.

A model is given by a kernel K(Φ, D₋Φ, D₊Φ) living on a small formal algebra
whose generators stand in for each superfield and its two covariant
derivatives.  Pulling K back along the realization morphism gives the
superspace Lagrangian; partial derivatives of K give the superspace
Euler-Lagrange equations.  Everything downstream (component Lagrangian,
Euler operators, on-shell reduction, Noether currents) works on jets in the
superspace algebra.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import sympy

from .algebra import (
    FIELD,
    PARAMETER,
    Algebra,
    AlgebraError,
    Generator,
    GradedExpr,
    IndeterminateDegreeError,
    degree_of,
    truncate_z,
    weight_of,
)
from .berezin import berezin_integral, invert_even
from .calculus import Morphism, partial, pullback, total_derivative
from .grading import Degree, koszul_sign
from .superspace import (
    SuperfieldSpec,
    SuperspaceContext,
    JetVariation,
    build_context,
    component_susy,
    components,
    covariant_expansion,
    exotic_superfield,
    expand,
    sigma_superfields,
)

__all__ = [
    "ModelError",
    "ModelSpec",
    "EomSystem",
    "Rule",
    "QuasiInvarianceWitness",
    "NoetherCurrent",
    "linear_sigma",
    "nonlinear_sigma",
    "superpotential_model",
    "sine_gordon",
    "exotic_model",
    "taylor_expand",
    "odd_power_series",
    "component_lagrangian",
    "euler_operator",
    "component_el",
    "superspace_el",
    "superspace_el_components",
    "superspace_el_system",
    "eliminate_auxiliary",
    "on_shell_susy",
    "quasi_invariance",
    "is_total_divergence",
    "noether_currents",
    "noether_factorization",
    "divergence",
    "conservation_check",
    "rewrite_double_angle",
    "matches_display",
    "metric_function",
    "field_bases",
    "jets_in",
    "orient",
    "jet",
]

D00, D11, D01, D10 = Degree((0, 0)), Degree((1, 1)), Degree((0, 1)), Degree((1, 0))
HALF = Fraction(1, 2)
MAX_REDUCTION_ROUNDS = 32


class ModelError(ValueError):
    pass


# -- formal kernels ----------------------------------------------------------

@dataclass(frozen=True)
class Argument:
    """Formal stand-ins for one superfield and its covariant derivatives."""

    superfield: SuperfieldSpec
    value: object  # sympy Symbol for degree (0,0), else a Generator
    minus: Generator
    plus: Generator

    @property
    def degree(self) -> Degree:
        return self.superfield.degree


def _arguments(specs: Sequence[SuperfieldSpec]) -> tuple[Argument, ...]:
    out = []
    for f in specs:
        value = sympy.Symbol(f.name) if f.degree.is_zero else Generator(f.name, PARAMETER, f.degree)
        out.append(
            Argument(
                f,
                value,
                Generator(f"D_-{f.name}", PARAMETER, f.degree + D01, HALF),
                Generator(f"D_+{f.name}", PARAMETER, f.degree + D10, -HALF),
            )
        )
    return tuple(out)


def _formal_algebra(args: Sequence[Argument], extra_parameters=()) -> Algebra:
    gens = [Generator("alpha", PARAMETER, D11)] + list(extra_parameters)
    for a in args:
        if isinstance(a.value, Generator):
            gens.append(a.value)
        gens += [a.minus, a.plus]
    return Algebra(
        parameters=tuple(gens),
        z_name=None,
        z_truncation=None,
        relations={"alpha": (2, 1)},
    )


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """A superspace action ∫D[x⁻,x⁺,z,θ₋,θ₊] K(Φ, D₋Φ, D₊Φ).

    ``kernel`` lives on ``formal``; ``lagrangian`` is its pullback to the
    superspace algebra.  ``compact_support`` is only an assertion flag: it
    licenses dropping total x±-derivatives when comparing actions.
    """

    name: str
    ctx: SuperspaceContext
    formal: Algebra
    arguments: tuple
    kernel: GradedExpr
    metric: str = "eta"
    potential: str = "none"
    auxiliary: tuple = ()
    compact_support: bool = True

    @functools.cached_property
    def realization(self) -> Morphism:
        ctx = self.ctx
        images, symbols = {}, {}
        for a in self.arguments:
            images[a.minus.name] = covariant_expansion(ctx, a.superfield, "D_-")
            images[a.plus.name] = covariant_expansion(ctx, a.superfield, "D_+")
            if isinstance(a.value, Generator):
                images[a.value.name] = expand(ctx, a.superfield)
            else:
                symbols[a.value] = expand(ctx, a.superfield)
        return Morphism(self.formal, ctx.alg, images, symbols, name=f"realize {self.name}")

    @functools.cached_property
    def lagrangian(self) -> GradedExpr:
        L = pullback(self.realization, self.kernel)
        if not L.is_zero():
            d = degree_of(L)
            if d != D11:
                raise ModelError(f"superspace Lagrangian has degree {d}, expected (1,1)")
        return L

    @property
    def superfields(self):
        return tuple(a.superfield for a in self.arguments)

    def argument(self, name: str) -> Argument:
        for a in self.arguments:
            if a.superfield.name == name:
                return a
        raise KeyError(name)


def _minkowski(n: int):
    if n == 1:
        return {(0, 0): sympy.Integer(1)}
    return {(a, a): sympy.Integer(-1 if a == 0 else 1) for a in range(n)}


def _metric(n: int, metric: str):
    """η_{ab} as a dict on index pairs.  ``abstract`` uses symmetric symbols."""
    if metric == "minkowski":
        return _minkowski(n)
    if metric == "abstract":
        if n == 1:
            return {(0, 0): sympy.Symbol("eta")}
        return {
            (a, b): sympy.Symbol(f"eta_{min(a, b) + 1}{max(a, b) + 1}") for a in range(n) for b in range(n)
        }
    raise ModelError(f"unknown metric {metric!r}")


def _kinetic(formal: Algebra, args, metric: Mapping) -> GradedExpr:
    out = formal.zero()
    for (a, b), g in metric.items():
        out = out + (formal.expr(args[a].minus) * formal.expr(args[b].plus)).scale(g)
    return out


def linear_sigma(n: int = 1, metric: str = "abstract", z_truncation: int = 1) -> ModelSpec:
    """K = D₋Φ^a D₊Φ^b η_{ba}."""
    if n < 1:
        raise ModelError("need at least one target dimension")
    ctx = build_context(n, z_truncation)
    args = _arguments(ctx.superfields)
    formal = _formal_algebra(args)
    K = _kinetic(formal, args, _metric(n, metric))
    aux = tuple(f.component_table(1)[(0, 1, 1)] for f in ctx.superfields)
    return ModelSpec(f"linear-sigma-{n}", ctx, formal, args, K, metric=metric, auxiliary=aux)


def metric_function(a: int, b: int, args) -> sympy.Expr:
    """Abstract symmetric g_{ab}(Φ) with sorted indices."""
    i, j = sorted((a, b))
    return sympy.Function(f"g_{i + 1}{j + 1}")(*[x.value for x in args])


def nonlinear_sigma(n: int = 1, z_truncation: int = 1) -> ModelSpec:
    """K = D₋Φ^a D₊Φ^b g_{ba}(Φ) for an abstract metric.

    For one target the metric function is declared invertible so that the
    equations of motion can be oriented.
    """
    ctx = build_context(n, z_truncation, invertible=("g_11",) if n == 1 else ())
    args = _arguments(ctx.superfields)
    formal = _formal_algebra(args)
    metric = {(a, b): metric_function(b, a, args) for a in range(n) for b in range(n)}
    K = _kinetic(formal, args, metric)
    aux = tuple(f.component_table(1)[(0, 1, 1)] for f in ctx.superfields)
    return ModelSpec(f"nonlinear-sigma-{n}", ctx, formal, args, K, metric="abstract g", auxiliary=aux)


def superpotential_model(n: int = 1, metric: str = "minkowski", z_truncation: int = 1) -> ModelSpec:
    """K = D₋Φ^a D₊Φ^b η_{ba} − W(Φ) with W = w U(Φ), w a degree-(1,1) constant."""
    w = Generator("w", PARAMETER, D11)
    ctx = build_context(n, z_truncation, extra_parameters=(w,))
    args = _arguments(ctx.superfields)
    formal = _formal_algebra(args, (w,))
    U = sympy.Function("U")(*[a.value for a in args])
    K = _kinetic(formal, args, _metric(n, metric)) - formal.expr(w).scale(U)
    aux = tuple(f.component_table(1)[(0, 1, 1)] for f in ctx.superfields)
    return ModelSpec(f"superpotential-{n}", ctx, formal, args, K, metric=metric, potential="w U(Phi)", auxiliary=aux)


def sine_gordon(with_potential: bool = True, z_truncation: int = 1) -> ModelSpec:
    """K = D₋ΦD₊Φ − 2α(1 − cos(Φ/2)); without the potential this is the free model."""
    ctx = build_context(1, z_truncation)
    args = _arguments(ctx.superfields)
    formal = _formal_algebra(args)
    K = _kinetic(formal, args, _minkowski(1))
    Phi = args[0].value
    if with_potential:
        K = K - formal.expr("alpha").scale(2 * (1 - sympy.cos(Phi / 2)))
    name = "sine-gordon" if with_potential else "free"
    return ModelSpec(name, ctx, formal, args, K, metric="1", potential="2 alpha (1 - cos(Phi/2))" if with_potential else "none", auxiliary=("F",))


def _odd_coefficients(coeffs) -> dict:
    if isinstance(coeffs, Mapping):
        out = {}
        for k, a in coeffs.items():
            if int(k) % 2 == 0:
                raise ModelError(f"power {k} is even; the potential must be an odd power series")
            out[int(k)] = sympy.nsimplify(a) if not isinstance(a, sympy.Basic) else a
        return out
    return {2 * i + 1: (sympy.nsimplify(a) if not isinstance(a, sympy.Basic) else a) for i, a in enumerate(coeffs)}


def exotic_model(coeffs=(), z_truncation: int = 1) -> ModelSpec:
    """K = D₋ΨD₊Ψ − Σ a_{2k+1} Ψ^{2k+1}/(2k+1)! for a degree-(1,1) superfield.

    ``coeffs`` is either the sequence a_1, a_3, ... or a mapping power -> a.
    """
    odd = _odd_coefficients(coeffs)
    ctx = build_context(z_truncation=z_truncation, superfields=[exotic_superfield()])
    args = _arguments(ctx.superfields)
    formal = _formal_algebra(args)
    K = _kinetic(formal, args, _minkowski(1))
    psi = formal.expr(args[0].value)
    for k, a in sorted(odd.items()):
        K = K - (psi ** k).scale(a / sympy.factorial(k))
    pot = " + ".join(f"{a}/{k}! Psi^{k}" for k, a in sorted(odd.items())) or "none"
    return ModelSpec("exotic", ctx, formal, args, K, metric="1", potential=pot, auxiliary=("G",))


# -- Taylor expansion of functions of superfields -------------------------

def taylor_expand(ctx: SuperspaceContext, f: sympy.Expr, args: Mapping[sympy.Symbol, SuperfieldSpec | str]) -> GradedExpr:
    """f(Φ) = Σ f^{(k)}(X) Δ^k / k! with Δ the nilpotent part of each Φ.

    ``args`` maps the symbols of ``f`` to degree-(0,0) superfields.
    """
    images = {}
    for s, spec in args.items():
        spec = ctx.superfield(spec) if isinstance(spec, str) else spec
        if not spec.degree.is_zero:
            raise ModelError(
                f"{spec.name} has degree {spec.degree}; only odd power series of it are defined (use odd_power_series)"
            )
        images[s] = expand(ctx, spec)
    src = Algebra(z_name=None, z_truncation=None)
    return pullback(Morphism(src, ctx.alg, {}, images, name="taylor"), src.const(f))


def odd_power_series(ctx: SuperspaceContext, coeffs, spec: SuperfieldSpec | str) -> GradedExpr:
    """Σ a_k Ψ^k / k! over odd k."""
    spec = ctx.superfield(spec) if isinstance(spec, str) else spec
    psi = expand(ctx, spec)
    out = ctx.alg.zero()
    for k, a in sorted(_odd_coefficients(coeffs).items()):
        out = out + (psi ** k).scale(a / sympy.factorial(k))
    return out


# -- component Lagrangians and Euler operators -------------------------------

def component_lagrangian(m: ModelSpec) -> GradedExpr:
    """Berezin integral of the superspace Lagrangian (raises if not integrable)."""
    return berezin_integral(m.lagrangian)


def jet(ctx_or_alg, base: str, minus: int = 0, plus: int = 0) -> GradedExpr:
    """∂₋^minus ∂₊^plus of a component field, as an expression."""
    alg = ctx_or_alg.alg if isinstance(ctx_or_alg, SuperspaceContext) else ctx_or_alg
    return alg.expr(alg.field(base, (minus, plus)))


def field_bases(ctx: SuperspaceContext) -> list[str]:
    """Base names of the z⁰ components of every superfield."""
    out = []
    top = ctx.alg.z_truncation
    for f in ctx.superfields:
        for p, base in f.component_table(top).items():
            if p[0] == 0:
                out.append(base)
    return out


def jets_in(e: GradedExpr) -> dict:
    """{(base, jet): object} for every field jet occurring in ``e``."""
    alg = e.alg
    out = {}
    for key, c in e.terms.items():
        for g, _ in key:
            if g.kind == FIELD:
                out[(g.base, g.jet)] = g
        for s in c.free_symbols:
            info = alg.coeff_jet_info(s)
            if info is not None:
                out[info] = s
    return out


def _d(alg: Algebra, slot: int, e: GradedExpr) -> GradedExpr:
    return total_derivative(alg.even_coordinates[slot], e)


def euler_operator(L: GradedExpr, base: str) -> GradedExpr:
    """E_A(L) = Σ_J (−∂)^J ∂L/∂A_J with left partials."""
    alg = L.alg
    out = alg.zero()
    for (b, j), obj in sorted(jets_in(L).items(), key=lambda kv: (kv[0][0], kv[0][1])):
        if b != base:
            continue
        term = partial(obj, L)
        for slot, k in enumerate(j):
            for _ in range(k):
                term = -_d(alg, slot, term)
        out = out + term
    return out


def is_total_divergence(L: GradedExpr, bases: Sequence[str]) -> bool:
    """True iff every Euler operator annihilates ``L``."""
    return all(euler_operator(L, b).is_zero() for b in bases)


# -- on-shell rewriting ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Rule:
    base: str
    jet: tuple
    lhs: object
    rhs: GradedExpr

    def __str__(self):
        from .serialize import pretty_name, to_text

        return f"{pretty_name(str(self.lhs))} ↦ {to_text(self.rhs)}"


def _jet_order(j) -> int:
    return sum(j)


def _over(j, k) -> bool:
    return all(a >= b for a, b in zip(j, k))


def _inverse(c: GradedExpr) -> GradedExpr | None:
    """Two-sided inverse of a homogeneous coefficient via c (c²)⁻¹, or None."""
    alg = c.alg
    c2 = c * c
    if c2.is_zero():
        return None
    s = c2.scalar_part()
    if s == 0 or not alg.is_invertible(s):
        return None
    try:
        return c * invert_even(c2)
    except AlgebraError:
        return None


def orient(E: GradedExpr, prefer: str | None = None, exclude=()) -> Rule | None:
    """Solve E = 0 for its highest linear jet with an invertible coefficient,
    preferring jets of ``prefer`` and skipping fields in ``exclude``."""
    alg = E.alg
    cands = sorted(
        ((k, v) for k, v in jets_in(E).items() if k[0] not in exclude),
        key=lambda kv: (kv[0][0] != prefer, -_jet_order(kv[0][1]), kv[0][0], kv[0][1]),
    )
    for (base, j), obj in cands:
        c = partial(obj, E)
        if c.is_zero() or not partial(obj, c).is_zero():
            continue
        inv = _inverse(c)
        if inv is None:
            continue
        lhs = alg.expr(obj)
        rest = E - lhs * c
        if any(b == base and _over(jj, j) for (b, jj) in jets_in(rest)):
            continue
        return Rule(base, j, obj, -(rest * inv))
    return None


class EomSystem:
    """Equations of motion with rewrite rules oriented on their highest jets.

    ``reduce`` applies the rules together with all their ∂±-prolongations
    until no left-hand side (or derivative of one) remains.
    """

    def __init__(self, alg: Algebra, equations: Mapping[str, GradedExpr], prefer: Mapping[str, str] | None = None):
        self.alg = alg
        self.equations = dict(equations)
        prefer = dict(prefer or {})
        rules = []
        taken = set()
        for label, E in self.equations.items():
            if E.is_zero():
                continue
            r = orient(E, prefer.get(label, label), exclude=taken)
            if r is None:
                raise ModelError(f"cannot orient equation {label}: no linear jet with invertible coefficient")
            taken.add(r.base)
            rules.append(r)
        self.rules = tuple(rules)
        self._prolonged: dict = {}

    def _value(self, rule: Rule, j) -> GradedExpr:
        key = (rule.base, rule.jet, j)
        if key not in self._prolonged:
            v = rule.rhs
            for slot, (a, b) in enumerate(zip(j, rule.jet)):
                for _ in range(a - b):
                    v = _d(self.alg, slot, v)
            self._prolonged[key] = v
        return self._prolonged[key]

    def _match(self, base, j) -> Rule | None:
        for r in self.rules:
            if r.base == base and _over(j, r.jet):
                return r
        return None

    def reduce(self, e: GradedExpr) -> GradedExpr:
        for _ in range(MAX_REDUCTION_ROUNDS):
            images, symbols = {}, {}
            for (base, j), obj in jets_in(e).items():
                r = self._match(base, j)
                if r is None:
                    continue
                v = self._value(r, j)
                if isinstance(obj, Generator):
                    images[obj.name] = v
                else:
                    symbols[obj] = v
            if not images and not symbols:
                return e
            e = _substitute_polynomially(e, images, symbols)
        raise ModelError("on-shell reduction did not terminate")

    def vanishes(self, e: GradedExpr) -> bool:
        return self.reduce(e).is_zero()

    def implies(self, other: "EomSystem") -> dict:
        """Which equations of ``other`` reduce to zero modulo this system."""
        return {label: self.vanishes(E) for label, E in other.equations.items()}

    def equivalent(self, other: "EomSystem") -> bool:
        return all(self.implies(other).values()) and all(other.implies(self).values())

    def __iter__(self):
        return iter(self.rules)


def _substitute_polynomially(e: GradedExpr, images: Mapping[str, GradedExpr], symbols: Mapping) -> GradedExpr:
    """Replace generators and even jet symbols by expressions.

    Symbols entering a coefficient polynomially are replaced by powers of
    their values, which need not be nilpotent; anything else goes through a
    Taylor-expanding morphism.
    """
    alg = e.alg
    powers: dict = {}

    def power(s, k):
        if (s, k) not in powers:
            powers[(s, k)] = alg.one() if k == 0 else power(s, k - 1) * symbols[s]
        return powers[(s, k)]

    fallback = {}
    out = alg.zero()
    for key, c in e.terms.items():
        syms = [s for s in symbols if s in c.free_symbols]
        part = None
        if syms:
            try:
                poly = sympy.Poly(c, *syms)
            except sympy.PolynomialError:
                fallback.update({s: symbols[s] for s in syms})
                poly = None
            if poly is not None:
                part = alg.zero()
                for exps, coeff in poly.terms():
                    t = alg.const(coeff)
                    for s, k in zip(syms, exps):
                        if k:
                            t = t * power(s, k)
                    part = part + t
        if part is None:
            part = alg.const(c)
        for g, p in key:
            img = images.get(g.name, alg.expr(g))
            for _ in range(p):
                part = part * img
        out = out + part
    if fallback:
        out = pullback(Morphism(alg, alg, {}, fallback, name="on-shell"), out)
    return out


def component_el(m: ModelSpec | None = None, L: GradedExpr | None = None, bases: Sequence[str] | None = None) -> EomSystem:
    """Component Euler-Lagrange system of a model (or of an explicit L)."""
    if L is None:
        L = component_lagrangian(m)
    if bases is None:
        bases = [b for b in field_bases(m.ctx) if any(bb == b for bb, _ in jets_in(L))]
    eqs = {b: euler_operator(L, b) for b in bases}
    return EomSystem(L.alg, eqs)


# -- superspace Euler-Lagrange ----------------------------------------------

def _formal_partial(arg_value, K: GradedExpr) -> GradedExpr:
    if isinstance(arg_value, Generator):
        return partial(arg_value, K)
    return K.map_coefficients(lambda c: sympy.diff(c, arg_value))


def superspace_el(m: ModelSpec) -> dict:
    """{superfield: s₋D₋(∂K/∂Φ₋) + s₊D₊(∂K/∂Φ₊) − ∂K/∂Φ} with s± the Koszul
    signs of D± past Φ, all pulled back to superspace."""
    phi = m.realization
    ctx = m.ctx
    out = {}
    for a in m.arguments:
        sm = koszul_sign(D01, a.degree)
        sp = koszul_sign(D10, a.degree)
        Am = pullback(phi, partial(a.minus, m.kernel))
        Ap = pullback(phi, partial(a.plus, m.kernel))
        dK = pullback(phi, _formal_partial(a.value, m.kernel))
        out[a.superfield.name] = ctx.derivations["D_-"](Am).scale(sm) + ctx.derivations["D_+"](Ap).scale(sp) - dK
    return out


def superspace_el_components(m: ModelSpec) -> dict:
    """Lowest-order (z⁰) components of every superspace equation, keyed by
    (superfield, prefix)."""
    out = {}
    for name, E in superspace_el(m).items():
        for p, c in components(m.ctx, truncate_z(E, 0)).items():
            out[(name, p)] = c
    return out


def superspace_el_system(m: ModelSpec) -> EomSystem:
    eqs = {f"{name}{p}": c for (name, p), c in superspace_el_components(m).items()}
    return EomSystem(m.ctx.alg, eqs)


# -- auxiliary fields --------------------------------------------------------

def eliminate_auxiliary(L: GradedExpr, bases: Sequence[str] | str) -> tuple[GradedExpr, dict]:
    """Solve the algebraic equations of ``bases`` and substitute.

    Returns (L', {base: solution}).  Fields absent from L are skipped.
    """
    if isinstance(bases, str):
        bases = [bases]
    alg = L.alg
    present = jets_in(L)
    for (b, j) in present:
        if b in bases and any(j):
            raise ModelError(f"{b} appears with derivatives; it is not auxiliary")
    bases = [b for b in bases if (b, (0,) * len(alg.even_coordinates)) in present]
    if not bases:
        return L, {}
    objs = [alg.field(b) for b in bases]
    eqs = [euler_operator(L, b) for b in bases]
    zero = {o.name: alg.zero() for o in objs if isinstance(o, Generator)}
    zero_s = {o: alg.zero() for o in objs if not isinstance(o, Generator)}
    kill = Morphism(alg, alg, zero, zero_s, name="drop auxiliary")
    n = len(objs)
    M = sympy.zeros(n, n)
    for i, E in enumerate(eqs):
        for j, o in enumerate(objs):
            c = partial(o, E)
            if any(not partial(o2, c).is_zero() for o2 in objs):
                raise ModelError(f"{bases[i]} equation is not linear in the auxiliary fields")
            if any(k for k in c.terms if k):
                raise ModelError("auxiliary equations have graded coefficients; cannot solve")
            M[i, j] = c.scalar_part()
    R = [pullback(kill, E) for E in eqs]
    if M.det() == 0:
        raise ModelError("auxiliary equations are degenerate")
    Minv = M.inv()
    # E_i = Σ_j o_j M_ij + R_i  =>  o = −M⁻¹ R
    sol = {}
    for j, b in enumerate(bases):
        v = alg.zero()
        for i in range(n):
            v = v - R[i].scale(sympy.simplify(Minv[j, i]))
        sol[b] = v
    images = {o.name: sol[b] for o, b in zip(objs, bases) if isinstance(o, Generator)}
    symbols = {o: sol[b] for o, b in zip(objs, bases) if not isinstance(o, Generator)}
    return pullback(Morphism(alg, alg, images, symbols, name="eliminate"), L), sol


def on_shell_susy(m: ModelSpec, solution: Mapping[str, GradedExpr] | None = None) -> JetVariation:
    """Component supersymmetry with the auxiliary solution substituted."""
    alg = m.ctx.alg
    if solution is None:
        _, solution = eliminate_auxiliary(component_lagrangian(m), list(m.auxiliary))
    images = {}
    symbols = {}
    for b, v in solution.items():
        o = alg.field(b)
        if isinstance(o, Generator):
            images[o.name] = v
        else:
            symbols[o] = v
    sub = Morphism(alg, alg, images, symbols, name="on-shell susy")
    table = {b: pullback(sub, v) for b, v in component_susy(m.ctx).table.items() if b not in solution}
    return JetVariation(alg, table)


# -- quasi-invariance and Noether currents -----------------------------------

@dataclass(frozen=True, eq=False)
class QuasiInvarianceWitness:
    """δL = ∂₋V⁻ + ∂₊V⁺."""

    v_minus: GradedExpr
    v_plus: GradedExpr


def quasi_invariance(L: GradedExpr, delta: JetVariation, witness: QuasiInvarianceWitness, eom: EomSystem | None = None) -> GradedExpr:
    """δL − ∂₋V⁻ − ∂₊V⁺, reduced modulo ``eom`` when given."""
    alg = L.alg
    res = delta(L) - _d(alg, 0, witness.v_minus) - _d(alg, 1, witness.v_plus)
    return eom.reduce(res) if eom is not None else res


@dataclass(frozen=True, eq=False)
class NoetherCurrent:
    label: str
    expression: GradedExpr
    degree: Degree | None
    weight: Fraction | None


def _current(label: str, e: GradedExpr) -> NoetherCurrent:
    try:
        return NoetherCurrent(label, e, degree_of(e), weight_of(e))
    except IndeterminateDegreeError:
        return NoetherCurrent(label, e, None, None)


def noether_currents(L: GradedExpr, delta: JetVariation, witness: QuasiInvarianceWitness) -> dict:
    """J^{ε,±} = Σ_A (∂δA/∂ε)(∂L/∂A_±) − ∂V^±/∂ε for ε = ε₋, ε₊.

    Labels: first sign from the parameter, second from the direction.
    """
    alg = L.alg
    out = {}
    present = {b for b, _ in jets_in(L)}
    for eps, s in ((alg.gen("eps_-"), "-"), (alg.gen("eps_+"), "+")):
        dd = delta.derivative(eps)
        for direction, j, V in (("-", (1, 0), witness.v_minus), ("+", (0, 1), witness.v_plus)):
            J = alg.zero()
            for base, a in dd.items():
                if base not in present:
                    continue
                J = J + a * partial(alg.field(base, j), L)
            J = J - partial(eps, V)
            out[s + direction] = _current(s + direction, J)
    return out


def noether_factorization(L: GradedExpr, delta: JetVariation, eps_name: str) -> GradedExpr:
    """−Σ_A (∂δA/∂ε) E_A(L): the divergence of the ε-current as a combination
    of Euler-Lagrange expressions."""
    alg = L.alg
    present = {b for b, _ in jets_in(L)}
    out = alg.zero()
    for base, a in delta.derivative(alg.gen(eps_name)).items():
        if base in present:
            out = out - a * euler_operator(L, base)
    return out


def divergence(j_minus: GradedExpr, j_plus: GradedExpr) -> GradedExpr:
    alg = j_minus.alg
    return _d(alg, 0, j_minus) + _d(alg, 1, j_plus)


def conservation_check(currents: Mapping[str, NoetherCurrent], eom: EomSystem) -> dict:
    """∂₋J^{s−} + ∂₊J^{s+} for s = −, +: raw and reduced on-shell."""
    out = {}
    for s in ("-", "+"):
        d = divergence(currents[s + "-"].expression, currents[s + "+"].expression)
        r = eom.reduce(d)
        out[s] = {"divergence": d, "reduced": r, "ok": r.is_zero()}
    return out


# -- display matching --------------------------------------------------------

def _double_angle(c: sympy.Expr) -> sympy.Expr:
    out = []
    for t in sympy.Add.make_args(sympy.expand(c)):
        powers = t.as_powers_dict()
        sins = {f.args[0]: p for f, p in powers.items() if isinstance(f, sympy.sin) and p.is_Integer}
        coss = {f.args[0]: p for f, p in powers.items() if isinstance(f, sympy.cos) and p.is_Integer}
        for u in set(sins) & set(coss):
            k = min(sins[u], coss[u])
            t = t / (sympy.sin(u) * sympy.cos(u)) ** k * (sympy.sin(2 * u) / 2) ** k
        out.append(t)
    return sympy.expand(sympy.Add(*out))


def rewrite_double_angle(e: GradedExpr) -> GradedExpr:
    """sin(u)cos(u) ↦ ½sin(2u) in every coefficient; display matching only."""
    return e.map_coefficients(_double_angle)


def matches_display(computed: GradedExpr, display: GradedExpr) -> bool:
    return rewrite_double_angle(computed) == rewrite_double_angle(display)
