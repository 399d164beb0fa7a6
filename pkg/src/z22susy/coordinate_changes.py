"""General coordinate changes of R^{2|1,1,1} and the checks that Berezin
integration does not depend on the coordinates.

Coordinates are ``t, s`` (degree (0,0)), ``z`` (1,1), ``theta`` (0,1),
``eta`` (1,0).  A coordinate change is generated from a template listing every
degree-compatible monomial ``z^k theta^a eta^b`` (k up to the truncation) with an
opaque coefficient function ``phi^x_{b a k}(t, s)``; subscripts count the formal
coordinates in reverse order.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import sympy

from .algebra import COORDINATE, Algebra, Generator, GradedExpr, coefficient_of
from .berezin import berezin_integral, formal_z_integral, is_integrable, z2_berezinian, z_obstruction
from .calculus import Morphism, identity_morphism, jacobian, pullback
from .grading import Degree
from .matrix import GradedMatrix

__all__ = [
    "TemplateConfig",
    "coordinate_algebra",
    "template_morphism",
    "random_section",
    "integrability_is_coordinate_independent",
    "berezinian_no_z_term",
    "integral_coordinate_independence",
    "simplified_no_z_matrix",
    "run_trials",
]

D00, D11, D01, D10 = Degree((0, 0)), Degree((1, 1)), Degree((0, 1)), Degree((1, 0))
REQUIRED = {"z": (0, 0, 1), "theta": (0, 1, 0), "eta": (1, 0, 0)}
INVERTIBLE = ("phi^z_001", "phi^theta_010", "phi^eta_100")


@dataclass(frozen=True)
class TemplateConfig:
    z_truncation: int = 3
    # probability that an optional template monomial is kept
    density: float = 0.75
    # random rational multipliers are drawn from ±1..max_multiplier
    max_multiplier: int = 3


def coordinate_algebra(primed: bool, z_truncation: int = 3) -> Algebra:
    p = "'" if primed else ""
    coords = (
        Generator("z" + p, COORDINATE, D11),
        Generator("theta" + p, COORDINATE, D01),
        Generator("eta" + p, COORDINATE, D10),
    )
    return Algebra(
        coordinates=coords,
        even_coordinates=(sympy.Symbol("t" + p), sympy.Symbol("s" + p)),
        z_name="z" + p,
        z_truncation=z_truncation,
        invertible=frozenset(INVERTIBLE),
    )


_ALGEBRAS: dict = {}


def algebras(z_truncation: int = 3) -> tuple[Algebra, Algebra]:
    """(primed, unprimed) pair, cached per truncation."""
    if z_truncation not in _ALGEBRAS:
        _ALGEBRAS[z_truncation] = (coordinate_algebra(True, z_truncation), coordinate_algebra(False, z_truncation))
    return _ALGEBRAS[z_truncation]


def monomial_degree(b: int, a: int, k: int) -> Degree:
    d = Degree.zero()
    if k % 2:
        d = d + D11
    if a:
        d = d + D01
    if b:
        d = d + D10
    return d


def template_monomials(target_degree: Degree, z_truncation: int):
    """All (b, a, k) with z^k theta^a eta^b of the given degree."""
    out = []
    for k in range(z_truncation + 1):
        for a, b in itertools.product((0, 1), repeat=2):
            if monomial_degree(b, a, k) == target_degree:
                out.append((b, a, k))
    return out


def _monomial(alg: Algebra, coeff, b: int, a: int, k: int) -> GradedExpr:
    z = alg.z
    theta, eta = alg.coordinates[1], alg.coordinates[2]
    factors = ([(z, k)] if k else []) + ([(theta, 1)] if a else []) + ([(eta, 1)] if b else [])
    return alg.monomial(coeff, factors)


def coefficient_function(x: str, b: int, a: int, k: int, alg: Algebra):
    t, s = alg.even_coordinates
    if x in ("t", "s") and (b, a, k) == (0, 0, 0):
        return sympy.Function(f"phi^{x}")(t, s)
    return sympy.Function(f"phi^{x}_{b}{a}{k}")(t, s)


def template_morphism(rng: random.Random | None = None, cfg: TemplateConfig = TemplateConfig()) -> Morphism:
    """A coordinate change from the template; with ``rng`` None every monomial is kept."""
    src, tgt = algebras(cfg.z_truncation)
    images, symbol_images = {}, {}
    targets = [("t", D00), ("s", D00), ("z", D11), ("theta", D01), ("eta", D10)]
    for x, deg in targets:
        img = tgt.zero()
        for b, a, k in template_monomials(deg, cfg.z_truncation):
            required = REQUIRED.get(x) == (b, a, k) or (x in ("t", "s") and (b, a, k) == (0, 0, 0))
            q = 1
            if not required and rng is not None:
                if rng.random() > cfg.density:
                    continue
                q = rng.choice([i for i in range(-cfg.max_multiplier, cfg.max_multiplier + 1) if i])
            img = img + _monomial(tgt, q * coefficient_function(x, b, a, k, tgt), b, a, k)
        if x in ("t", "s"):
            symbol_images[sympy.Symbol(x + "'")] = img
        else:
            images[x + "'"] = img
    return Morphism(src, tgt, images, symbol_images, name="template")


def random_section(rng: random.Random | None, cfg: TemplateConfig = TemplateConfig(), integrable: bool = True) -> GradedExpr:
    """Σ z'^k θ'^a η'^b σ'_{bak}(t', s'), omitting z' alone when integrable."""
    src, _ = algebras(cfg.z_truncation)
    tp, sp = src.even_coordinates
    out = src.zero()
    for k in range(cfg.z_truncation + 1):
        for a, b in itertools.product((0, 1), repeat=2):
            if integrable and (b, a, k) == (0, 0, 1):
                continue
            if rng is not None and (b, a, k) != (1, 1, 0) and rng.random() > cfg.density:
                continue
            f = sympy.Function(f"sigma_{b}{a}{k}")(tp, sp)
            out = out + _monomial(src, f, b, a, k)
    return out


def _report(check: str, trials: int, failures: list) -> dict:
    return {
        "check": check,
        "trials": trials,
        "failures": len(failures),
        "witness": failures[0] if failures else None,
    }


def integrability_is_coordinate_independent(phi: Morphism, e: GradedExpr) -> dict:
    """An integrable ``e`` must pull back to an integrable expression."""
    before = is_integrable(e)
    after_expr = pullback(phi, e)
    after = is_integrable(after_expr)
    return {
        "integrable_before": before,
        "integrable_after": after,
        "ok": (not before) or after,
        "obstruction": None if after else str(z_obstruction(after_expr)),
    }


def berezinian_no_z_term(phi: Morphism) -> dict:
    ber = z2_berezinian(jacobian(phi))
    obs = z_obstruction(ber)
    return {"ok": obs.is_zero(), "obstruction": None if obs.is_zero() else str(obs), "berezinian": ber}


def body_determinant(phi: Morphism) -> sympy.Expr:
    """det ∂(φ^t, φ^s)/∂(t, s) from the bodies of the even images."""
    tgt = phi.target
    t, s = tgt.even_coordinates
    ft = phi.symbol_images[sympy.Symbol("t'")].scalar_part()
    fs = phi.symbol_images[sympy.Symbol("s'")].scalar_part()
    return sympy.expand(sympy.diff(ft, t) * sympy.diff(fs, s) - sympy.diff(ft, s) * sympy.diff(fs, t))


def integral_coordinate_independence(phi: Morphism, sigma: GradedExpr, ber: GradedExpr | None = None) -> dict:
    """Compare ∫ Ber(J) φ*σ' (with the rescaled z interval) against
    det(∂φ/∂x) σ'_110(φ^t, φ^s)."""
    src, tgt = phi.source, phi.target
    if not is_integrable(sigma):
        raise ValueError("section is not integrable")
    if ber is None:
        ber = z2_berezinian(jacobian(phi))
    pulled = pullback(phi, sigma)
    z_img = phi.images[src.z_name]
    interval = 1 / coefficient_of(z_img, [], z_power=1).scalar_part()
    lhs_integrand = formal_z_integral(ber * pulled, interval)
    lhs = berezin_integral(lhs_integrand, check=False).scalar_part()
    top = coefficient_of(sigma, src.coordinates[1:], z_power=0).scalar_part()
    bodies = {x: phi.symbol_images[x].scalar_part() for x in src.even_coordinates}
    rhs = body_determinant(phi) * top.subs(bodies, simultaneous=True)
    residual = sympy.expand(lhs - rhs)
    return {"ok": residual == 0, "lhs": lhs, "rhs": rhs, "residual": residual}


def simplified_no_z_matrix(z_truncation: int = 3) -> GradedMatrix:
    """The reduced Jacobian used for the no-z-term argument, entered directly."""
    _, alg = algebras(z_truncation)
    t, s = alg.even_coordinates
    z, th, et = alg.coordinates
    F = lambda name: sympy.Function(name)(t, s)  # noqa: E731
    ft, fs, fz = F("phi^t"), F("phi^s"), F("phi^z_001")
    zz = lambda c: alg.monomial(c, [(z, 1)])  # noqa: E731
    rows = [
        [sympy.diff(ft, t), sympy.diff(ft, s), zz(2 * F("phi^t_002")), 0, 0],
        [sympy.diff(fs, t), sympy.diff(fs, s), zz(2 * F("phi^s_002")), 0, 0],
        [zz(sympy.diff(fz, t)), zz(sympy.diff(fz, s)), fz, 0, 0],
        [0, 0, 0, F("phi^theta_010"), zz(-F("phi^theta_101"))],
        [0, 0, 0, zz(-F("phi^eta_011")), F("phi^eta_100")],
    ]
    degs = (D00, D00, D11, D01, D10)
    return GradedMatrix.from_rows(alg, rows, degs)


def run_trials(trials: int = 50, seed: int = 0, cfg: TemplateConfig = TemplateConfig()) -> list[dict]:
    """Run the three coordinate-independence checks on seeded random changes."""
    fails = {"integrability": [], "berezinian": [], "integral": []}
    for i in range(trials):
        rng = random.Random(f"{seed}:{i}")
        phi = template_morphism(rng, cfg)
        sigma = random_section(rng, cfg)
        r1 = integrability_is_coordinate_independent(phi, sigma)
        if not r1["ok"]:
            fails["integrability"].append({"trial": i, "obstruction": r1["obstruction"]})
        r2 = berezinian_no_z_term(phi)
        if not r2["ok"]:
            fails["berezinian"].append({"trial": i, "obstruction": r2["obstruction"]})
        r3 = integral_coordinate_independence(phi, sigma, r2["berezinian"])
        if not r3["ok"]:
            fails["integral"].append({"trial": i, "residual": str(r3["residual"])})
    return [
        _report("integrability-coordinate-independent", trials, fails["integrability"]),
        _report("berezinian-no-z-term", trials, fails["berezinian"]),
        _report("integral-coordinate-independent", trials, fails["integral"]),
    ]
