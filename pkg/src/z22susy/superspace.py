"""The (1,1) Z_2^2-Minkowski superspace: coordinates, supercharges, covariant
derivatives, supertranslations, boosts and superfields."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import sympy

from .algebra import (
    COORDINATE,
    PARAMETER,
    Algebra,
    AlgebraError,
    Generator,
    GradedExpr,
    coefficient_of,
    strip_coordinates,
)
from .calculus import Derivation, Morphism, apply, commutator, total_derivative
from .grading import Degree

__all__ = [
    "SuperfieldSpec",
    "SuperspaceContext",
    "JetVariation",
    "build_context",
    "sigma_superfields",
    "expand",
    "is_z_constrained",
    "susy_variation",
    "component_variations",
    "covariant_expansion",
    "supertranslation",
    "boost",
    "AuditError",
]

HALF = Fraction(1, 2)
D00, D11, D01, D10 = Degree((0, 0)), Degree((1, 1)), Degree((0, 1)), Degree((1, 0))

# θ/z prefixes as (z power, has θ₋, has θ₊)
PREFIXES = [(0, 0, 0), (0, 1, 0), (0, 0, 1), (0, 1, 1), (1, 0, 0), (1, 1, 0), (1, 0, 1), (1, 1, 1)]
DEFAULT_COMPONENTS = {
    (0, 0, 0): "X",
    (0, 1, 0): "psi_+",
    (0, 0, 1): "psi_-",
    (0, 1, 1): "F",
    (1, 0, 0): "G",
    (1, 1, 0): "chi_+",
    (1, 0, 1): "chi_-",
    (1, 1, 1): "Y",
}
EXOTIC_COMPONENTS = {(0, 0, 0): "Y", (0, 1, 0): "chi_+", (0, 0, 1): "chi_-", (0, 1, 1): "G"}
CONSTRAINED_OUT = {(1, 0, 0), (1, 1, 0), (1, 0, 1)}


class AuditError(AlgebraError):
    """A bracket of the standard derivations came out wrong."""


def prefix_degree(prefix) -> Degree:
    k, a, b = prefix
    d = Degree.zero()
    if k % 2:
        d = d + D11
    if a:
        d = d + D01
    if b:
        d = d + D10
    return d


def prefix_weight(prefix) -> Fraction:
    _, a, b = prefix
    return -HALF * a + HALF * b


@dataclass(frozen=True)
class SuperfieldSpec:
    """Declaration of a superfield: name, degree offset and component names.

    ``components`` maps (z power, θ₋?, θ₊?) prefixes to base names.  Missing
    z-orders above one are generated as ``<name>_(k)``.
    """

    name: str
    degree: Degree = D00
    components: Mapping = field(default_factory=lambda: dict(DEFAULT_COMPONENTS))
    z_constrained: bool = True
    index: str = ""

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(sorted(dict(self.components).items())))

    def _label(self, base: str) -> str:
        return f"{base}^{self.index}" if self.index else base

    def component_table(self, z_truncation: int | None) -> dict:
        top = 1 if z_truncation is None else z_truncation
        comps = dict(self.components)
        out = {}
        for k in range(top + 1):
            for _, a, b in PREFIXES[:4]:
                p = (k, a, b)
                if k <= 1:
                    if p not in comps:
                        continue
                    if self.z_constrained and p in CONSTRAINED_OUT:
                        continue
                    base = comps[p]
                else:
                    low = comps.get((k % 2, a, b))
                    if low is None:
                        continue
                    base = f"{low}_({k})"
                out[p] = self._label(base)
        return out

    def component_degree(self, prefix) -> Degree:
        return self.degree + prefix_degree(prefix)

    def component_weight(self, prefix) -> Fraction:
        return -prefix_weight(prefix)


def sigma_superfields(n: int = 1) -> list[SuperfieldSpec]:
    if n < 1:
        raise ValueError("need at least one target dimension")
    if n == 1:
        return [SuperfieldSpec("Phi")]
    return [SuperfieldSpec(f"Phi^{a}", index=str(a)) for a in range(1, n + 1)]


def exotic_superfield() -> SuperfieldSpec:
    return SuperfieldSpec("Psi", D11, dict(EXOTIC_COMPONENTS))


@dataclass(frozen=True, eq=False)
class SuperspaceContext:
    alg: Algebra
    superfields: tuple
    x_minus: sympy.Symbol
    x_plus: sympy.Symbol
    derivations: Mapping[str, Derivation]
    audit: tuple = ()

    def __getattr__(self, item):
        d = object.__getattribute__(self, "derivations")
        if item in d:
            return d[item]
        raise AttributeError(item)

    @property
    def z(self) -> Generator:
        return self.alg.gen("z")

    @property
    def theta_m(self) -> Generator:
        return self.alg.gen("theta_-")

    @property
    def theta_p(self) -> Generator:
        return self.alg.gen("theta_+")

    def superfield(self, name: str) -> SuperfieldSpec:
        for f in self.superfields:
            if f.name == name:
                return f
        raise KeyError(name)

    def component(self, f: SuperfieldSpec, prefix, jet=(0, 0)):
        return self.alg.field(f.component_table(self.alg.z_truncation)[prefix], jet)

    def prefix_gens(self, prefix):
        k, a, b = prefix
        gens = []
        if a:
            gens.append(self.theta_m)
        if b:
            gens.append(self.theta_p)
        return gens, k

    @property
    def delta(self) -> Derivation:
        return self.derivations["delta"]


def _make_algebra(superfields: Sequence[SuperfieldSpec], z_truncation, extra_even=(), invertible=(), extra_parameters=()):
    coords = (
        Generator("z", COORDINATE, D11, Fraction(0)),
        Generator("theta_-", COORDINATE, D01, -HALF),
        Generator("theta_+", COORDINATE, D10, HALF),
    )
    params = (
        Generator("alpha", PARAMETER, D11),
        Generator("eps_-", PARAMETER, D01, -HALF),
        Generator("eps_+", PARAMETER, D10, HALF),
        Generator("mu", PARAMETER, D11),
    ) + tuple(extra_parameters)
    graded, even = {}, {}
    for f in superfields:
        for p, base in f.component_table(z_truncation).items():
            d = f.component_degree(p)
            w = f.component_weight(p)
            if d.is_zero:
                even[base] = w
            else:
                graded[base] = (d, w)
    for base, w in extra_even:
        even[base] = Fraction(w)
    xm, xp = sympy.Symbol("x^-"), sympy.Symbol("x^+")
    weights = {sympy.Symbol("lambda^-"): Fraction(-1), sympy.Symbol("lambda^+"): Fraction(1)}
    return Algebra(
        coordinates=coords,
        even_coordinates=(xm, xp),
        parameters=params,
        graded_fields=graded,
        even_fields=even,
        z_name="z",
        z_truncation=z_truncation,
        relations={"alpha": (2, 1)},
        invertible=frozenset(invertible) | {"mu_b"},
        symbol_weights=weights,
        coordinate_weights=(Fraction(-1), Fraction(1)),
    )


def _standard_derivations(alg: Algebra) -> dict:
    xm, xp = alg.even_coordinates
    z, tm, tp = alg.gen("z"), alg.gen("theta_-"), alg.gen("theta_+")
    h = sympy.Rational(1, 2)
    e = alg.expr
    D = functools.partial(Derivation, alg)
    out = {
        "P_-": D(((e(1), xm),), "P_-"),
        "P_+": D(((e(1), xp),), "P_+"),
        "Z": D(((e(1), z),), "Z"),
        "Q_-": D(((e(1), tm), (e(tm).scale(h), xm), (e(tp).scale(-h), z)), "Q_-"),
        "Q_+": D(((e(1), tp), (e(tp).scale(h), xp), (e(tm).scale(h), z)), "Q_+"),
        "D_-": D(((e(1), tm), (e(tm).scale(-h), xm), (e(tp).scale(h), z)), "D_-"),
        "D_+": D(((e(1), tp), (e(tp).scale(-h), xp), (e(tm).scale(-h), z)), "D_+"),
    }
    em, ep = e("eps_-"), e("eps_+")
    out["delta"] = Derivation(alg, tuple((em * c, t) for c, t in out["Q_-"].terms) + tuple((ep * c, t) for c, t in out["Q_+"].terms), "delta")
    return out


def expected_brackets() -> dict:
    """Nonzero brackets of the representation; every other pair vanishes."""
    return {
        ("Q_-", "Q_-"): ("P_-", 1),
        ("Q_+", "Q_+"): ("P_+", 1),
        ("Q_-", "Q_+"): ("Z", 1),
        ("Q_+", "Q_-"): ("Z", 1),
        ("D_-", "D_-"): ("P_-", -1),
        ("D_+", "D_+"): ("P_+", -1),
        ("D_-", "D_+"): ("Z", -1),
        ("D_+", "D_-"): ("Z", -1),
    }


def bracket_audit(alg: Algebra, ders: Mapping[str, Derivation]) -> list[dict]:
    names = ["P_-", "P_+", "Z", "Q_-", "Q_+", "D_-", "D_+"]
    expect = expected_brackets()
    rows = []
    for i, a in enumerate(names):
        for b in names[i:]:
            got = commutator(ders[a], ders[b])
            name, s = expect.get((a, b), (None, 0))
            want = Derivation(alg, ()) if name is None else s * ders[name] if s == 1 else -ders[name]
            ok = got == want
            label = f"[{a},{b}]=" + ("0" if name is None else ("-" if s < 0 else "") + name)
            rows.append({"bracket": label, "ok": ok, "computed": str(got)})
    return rows


@functools.lru_cache(maxsize=32)
def _cached_context(superfields: tuple, z_truncation, extra_even: tuple, invertible: tuple, extra_parameters: tuple):
    alg = _make_algebra(superfields, z_truncation, extra_even, invertible, extra_parameters)
    ders = _standard_derivations(alg)
    audit = bracket_audit(alg, ders)
    for row in audit:
        if not row["ok"]:
            raise AuditError(f"bracket audit failed: {row['bracket']} computed {row['computed']}")
    return SuperspaceContext(alg, superfields, *alg.even_coordinates, ders, tuple(audit))


def build_context(
    n_targets: int = 1,
    z_truncation: int | None = 1,
    superfields: Sequence[SuperfieldSpec] | None = None,
    extra_even: Sequence[tuple[str, Fraction]] = (),
    invertible: Sequence[str] = (),
    extra_parameters: Sequence[Generator] = (),
) -> SuperspaceContext:
    """Superspace context with audited standard derivations.

    The default superfields are z-constrained degree-(0,0) scalars
    ``Phi^1..Phi^n``.  ``extra_parameters`` adds graded constants beyond
    alpha, eps_-, eps_+ and mu.  Contexts are cached, so equal arguments give
    the same algebra object.
    """
    if z_truncation is not None and z_truncation < 0:
        raise ValueError("z_truncation must be nonnegative")
    sfs = tuple(superfields) if superfields is not None else tuple(sigma_superfields(n_targets))
    return _cached_context(sfs, z_truncation, tuple(extra_even), tuple(sorted(invertible)), tuple(extra_parameters))


# -- superfields --------------------------------------------------------------

def expand(ctx: SuperspaceContext, f: SuperfieldSpec | str) -> GradedExpr:
    """Component sum prefix * component, truncated in z."""
    if isinstance(f, str):
        f = ctx.superfield(f)
    alg = ctx.alg
    out = alg.zero()
    for p, base in f.component_table(alg.z_truncation).items():
        gens, k = ctx.prefix_gens(p)
        factors = ([(ctx.z, k)] if k else []) + [(g, 1) for g in gens]
        comp = alg.field(base)
        if isinstance(comp, Generator):
            out = out + alg.monomial(1, factors + [(comp, 1)])
        else:
            out = out + alg.monomial(comp, factors)
    return out


def components(ctx: SuperspaceContext, e: GradedExpr, f: SuperfieldSpec | None = None) -> dict:
    """Read off the coefficient of every θ/z prefix."""
    out = {}
    top = ctx.alg.z_truncation if ctx.alg.z_truncation is not None else 1
    for k in range(top + 1):
        for _, a, b in PREFIXES[:4]:
            p = (k, a, b)
            gens, _ = ctx.prefix_gens(p)
            c = coefficient_of(e, gens, z_power=k)
            if not c.is_zero():
                out[p] = c
    return out


def is_z_constrained(e: GradedExpr) -> bool:
    alg = e.alg
    for key in e.terms:
        coords = {g.name: p for g, p in key if g.kind == COORDINATE}
        if coords.get(alg.z_name, 0) == 1 and not ("theta_-" in coords and "theta_+" in coords):
            return False
    return True


def susy_variation(ctx: SuperspaceContext, e: GradedExpr) -> GradedExpr:
    return apply(ctx.delta, e)


def covariant_expansion(ctx: SuperspaceContext, f: SuperfieldSpec | str, which: str) -> GradedExpr:
    if which not in ("D_-", "D_+"):
        raise ValueError("which must be 'D_-' or 'D_+'")
    return apply(ctx.derivations[which], expand(ctx, f))


def component_variations(ctx: SuperspaceContext, f: SuperfieldSpec | str, z_order: int = 0) -> dict:
    """δ of each component up to ``z_order``, read off from δ of the expansion."""
    if isinstance(f, str):
        f = ctx.superfield(f)
    dphi = susy_variation(ctx, expand(ctx, f))
    out = {}
    for p, base in f.component_table(ctx.alg.z_truncation).items():
        if p[0] > z_order:
            continue
        gens, k = ctx.prefix_gens(p)
        out[base] = coefficient_of(dphi, gens, z_power=k)
    return out


@dataclass(frozen=True, eq=False)
class JetVariation:
    """An even derivation on field jets fixed by its values on base fields.

    Jets are varied by differentiating the base variation; fields missing from
    the table are left invariant.
    """

    alg: Algebra
    table: Mapping[str, GradedExpr]

    def __post_init__(self):
        object.__setattr__(self, "_cache", {})

    def of_jet(self, obj) -> GradedExpr | None:
        if isinstance(obj, Generator):
            base, jet = obj.base, obj.jet
        else:
            info = self.alg.coeff_jet_info(obj)
            if info is None:
                return None
            base, jet = info
        if base not in self.table:
            return None
        key = (base, jet)
        if key not in self._cache:
            v = self.table[base]
            for slot, k in enumerate(jet):
                for _ in range(k):
                    v = total_derivative(self.alg.even_coordinates[slot], v)
            self._cache[key] = v
        return self._cache[key]

    def __call__(self, a: GradedExpr) -> GradedExpr:
        alg = self.alg
        out = alg.zero()
        for key, c in a.terms.items():
            for s in c.free_symbols:
                v = self.of_jet(s)
                if v is not None:
                    out = out + alg.const(sympy.diff(c, s)) * v * alg.monomial(1, key)
            for i, (g, p) in enumerate(key):
                v = self.of_jet(g) if g.base is not None else None
                if v is None:
                    continue
                left = alg.monomial(c, key[:i])
                right = alg.monomial(1, key[i + 1:])
                g1 = alg.expr(g)
                for j in range(p):
                    out = out + left * g1 ** j * v * g1 ** (p - 1 - j) * right
        return out

    def restrict(self, names) -> "JetVariation":
        return JetVariation(self.alg, {k: v for k, v in self.table.items() if k in names})

    def derivative(self, param: Generator) -> dict:
        """δφ/δε for every field (left derivative in the parameter)."""
        from .calculus import partial

        return {k: partial(param, v) for k, v in self.table.items()}


def component_susy(ctx: SuperspaceContext) -> JetVariation:
    """Component supersymmetry of every z⁰ component of every superfield."""
    table = {}
    for f in ctx.superfields:
        table.update(component_variations(ctx, f, z_order=0))
    return JetVariation(ctx.alg, table)


# -- morphisms ----------------------------------------------------------------

def supertranslation(ctx: SuperspaceContext, params: Mapping | None = None) -> Morphism:
    """Supertranslation pullback.  ``params`` may override the default
    parameters (keys ``lambda^-``, ``lambda^+``, ``mu``, ``eps_-``, ``eps_+``)
    by expressions, e.g. ``0``."""
    alg = ctx.alg
    params = dict(params or {})
    lm = alg.expr(params.get("lambda^-", sympy.Symbol("lambda^-")))
    lp = alg.expr(params.get("lambda^+", sympy.Symbol("lambda^+")))
    mu = alg.expr(params.get("mu", alg.gen("mu")))
    em = alg.expr(params.get("eps_-", alg.gen("eps_-")))
    ep = alg.expr(params.get("eps_+", alg.gen("eps_+")))
    tm, tp, z = alg.expr(ctx.theta_m), alg.expr(ctx.theta_p), alg.expr(ctx.z)
    h = sympy.Rational(1, 2)
    xm, xp = alg.const(ctx.x_minus), alg.const(ctx.x_plus)
    return Morphism(
        alg,
        alg,
        images={
            "z": z + mu + (ep * tm - em * tp).scale(h),
            "theta_-": tm + em,
            "theta_+": tp + ep,
        },
        symbol_images={
            ctx.x_minus: xm + lm + (em * tm).scale(h),
            ctx.x_plus: xp + lp + (ep * tp).scale(h),
        },
        name="supertranslation",
    )


def boost_symbol() -> sympy.Symbol:
    """Formal e^{β/2}; declared invertible in every superspace context."""
    return sympy.Symbol("mu_b")


def boost(ctx: SuperspaceContext, m: sympy.Symbol | None = None) -> Morphism:
    """Lorentz boost: every coordinate of weight w is scaled by m^{2w}."""
    alg = ctx.alg
    m = m if m is not None else boost_symbol()
    if not alg.is_invertible(m):
        raise AlgebraError(f"{m} is not declared invertible")
    images = {g.name: alg.expr(g).scale(m ** int(2 * g.weight)) for g in alg.coordinates}
    symbol_images = {
        x: alg.const(x * m ** int(2 * w)) for x, w in zip(alg.even_coordinates, alg.coordinate_weights)
    }
    return Morphism(alg, alg, images, symbol_images, name="boost")
