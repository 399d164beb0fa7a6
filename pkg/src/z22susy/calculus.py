"""Graded derivations, their commutators and substitution morphisms."""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import sympy

from .algebra import (
    COORDINATE,
    FIELD,
    Algebra,
    AlgebraError,
    Generator,
    GradedExpr,
    InhomogeneousError,
    degree_of,
    term_degree,
)
from .grading import Degree, koszul_sign
from .matrix import GradedMatrix

__all__ = [
    "Derivation",
    "Morphism",
    "partial",
    "total_derivative",
    "coefficient_total_derivative",
    "apply",
    "commutator",
    "commute_partials_check",
    "pullback",
    "jacobian",
    "identity_morphism",
    "substitute",
]

Target = Union[Generator, sympy.Symbol]

# Taylor expansions stop once the shift raised to this power is still nonzero.
MAX_TAYLOR_ORDER = 64


@functools.lru_cache(maxsize=65536)
def _diff(c: sympy.Expr, x: sympy.Symbol) -> sympy.Expr:
    return sympy.diff(c, x)


@functools.lru_cache(maxsize=65536)
def _subs(c: sympy.Expr, items: tuple) -> sympy.Expr:
    out = c.subs(dict(items), simultaneous=True)
    if out.has(sympy.Subs):
        # derivatives of abstract functions evaluated at plain symbols
        out = out.doit()
    return sympy.expand(out)


def coefficient_total_derivative(alg: Algebra, c: sympy.Expr, x: sympy.Symbol) -> sympy.Expr:
    """d/dx of a coefficient, chaining through jets of even fields."""
    slot = alg.even_coordinates.index(x)
    out = _diff(c, x)
    jets = [s for s in c.free_symbols if alg.coeff_jet_info(s) is not None]
    if not jets:
        return sympy.expand(out) if out != 0 else out
    for s in jets:
        out = out + _diff(c, s) * alg.shift_jet(s, slot)
    return sympy.expand(out)


def total_derivative(x: sympy.Symbol, a: GradedExpr) -> GradedExpr:
    """Total derivative along an even coordinate; acts on explicit dependence
    and on every field jet (graded or not)."""
    alg = a.alg
    if x not in alg.even_coordinates:
        raise AlgebraError(f"{x} is not an even coordinate")
    slot = alg.even_coordinates.index(x)
    out = alg.zero()
    pairs = []
    for key, c in a.terms.items():
        dc = coefficient_total_derivative(alg, c, x)
        if dc != 0:
            pairs.append((key, dc))
        for i, (g, p) in enumerate(key):
            if g.kind != FIELD:
                continue
            g2 = alg.shift_jet(g, slot)
            new = list(key[:i]) + ([(g, p - 1)] if p > 1 else []) + [(g2, 1)] + list(key[i + 1:])
            sign, nk, scal = alg._normalize(tuple(new))
            if sign:
                pairs.append((nk, sign * scal * p * c))
    if pairs:
        out = GradedExpr._collect(alg, pairs)
    return out


def _graded_partial(g: Generator, a: GradedExpr) -> GradedExpr:
    """Left derivative: commute one copy of ``g`` to the front, then strike it."""
    alg = a.alg
    pairs = []
    for key, c in a.terms.items():
        sign = 1
        for i, (h, p) in enumerate(key):
            if h == g:
                new = key[:i] + (((h, p - 1),) if p > 1 else ()) + key[i + 1:]
                pairs.append((new, sign * p * c))
                break
            if p % 2:
                sign *= koszul_sign(g.degree, h.degree)
    return GradedExpr._collect(alg, pairs)


def partial(target: Target, a: GradedExpr) -> GradedExpr:
    """Partial derivative of ``a``.

    Generators use the left convention.  Even coordinates of the algebra act as
    total derivatives (field jets are functions of them); any other symbol is
    differentiated inside the coefficients only.
    """
    if isinstance(target, Generator):
        return _graded_partial(target, a)
    if isinstance(target, sympy.Symbol):
        if target in a.alg.even_coordinates:
            return total_derivative(target, a)
        return a.map_coefficients(lambda c: sympy.diff(c, target))
    raise TypeError(f"cannot differentiate along {target!r}")


def _target_degree(alg: Algebra, t: Target) -> Degree:
    if isinstance(t, Generator):
        return t.degree
    return Degree.zero(alg.n)


def _target_weight(alg: Algebra, t: Target) -> Fraction:
    if isinstance(t, Generator):
        return -t.weight
    return -alg.symbol_weight(t)


def _coordinate_targets(alg: Algebra) -> list[Target]:
    return list(alg.even_coordinates) + list(alg.coordinates)


def _coordinate_expr(alg: Algebra, t: Target) -> GradedExpr:
    return alg.expr(t) if isinstance(t, Generator) else alg.const(t)


@dataclass(frozen=True)
class Derivation:
    """A first-order graded vector field ``sum_i c_i d/d(target_i)``."""

    alg: Algebra
    terms: tuple = ()
    name: str = ""

    @classmethod
    def d(cls, alg: Algebra, target: Target, coeff=1, name: str = "") -> "Derivation":
        return cls(alg, ((alg.expr(coeff), target),), name)

    def __post_init__(self):
        merged: dict = {}
        order = []
        for c, t in self.terms:
            c = self.alg.expr(c)
            if t not in merged:
                merged[t] = c
                order.append(t)
            else:
                merged[t] = merged[t] + c
        object.__setattr__(self, "terms", tuple((merged[t], t) for t in order if not merged[t].is_zero()))

    def __call__(self, a) -> GradedExpr:
        return apply(self, a)

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.alg, self.terms + other.terms)

    def __neg__(self):
        return Derivation(self.alg, tuple((-c, t) for c, t in self.terms), self.name)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, left) -> "Derivation":
        """Left multiplication of every coefficient."""
        left = self.alg.expr(left) if not isinstance(left, (int, Fraction)) else left
        return Derivation(self.alg, tuple((left * c, t) for c, t in self.terms))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coordinate_table().values())

    @property
    def degree(self) -> Degree:
        seen = set()
        for c, t in self.terms:
            td = _target_degree(self.alg, t)
            for key in c.terms:
                seen.add(term_degree(self.alg, key) + td)
        if not seen:
            return Degree.zero(self.alg.n)
        if len(seen) > 1:
            raise InhomogeneousError(f"derivation {self.name or self} mixes degrees {sorted(map(str, seen))}")
        return seen.pop()

    @property
    def weight(self) -> Fraction:
        from .algebra import weight_of

        ws = set()
        for c, t in self.terms:
            ws.add(weight_of(c) + _target_weight(self.alg, t))
        if len(ws) > 1:
            raise InhomogeneousError(f"derivation mixes weights {sorted(ws)}")
        return ws.pop() if ws else Fraction(0)

    def coordinate_table(self) -> dict:
        """Action on every coordinate; determines a first-order derivation."""
        return {t: apply(self, _coordinate_expr(self.alg, t)) for t in _coordinate_targets(self.alg)}

    def normalized(self) -> "Derivation":
        table = self.coordinate_table()
        return Derivation(self.alg, tuple((c, t) for t, c in table.items()), self.name)

    def __eq__(self, other):
        if not isinstance(other, Derivation) or other.alg is not self.alg:
            return NotImplemented
        a, b = self.coordinate_table(), other.coordinate_table()
        return all(a[t] == b[t] for t in a)

    __hash__ = object.__hash__

    def __str__(self):
        from .serialize import derivation_text

        return derivation_text(self)


def apply(D: Derivation, a) -> GradedExpr:
    a = D.alg.expr(a)
    out = D.alg.zero()
    for c, t in D.terms:
        out = out + c * partial(t, a)
    return out


def commutator(D1: Derivation, D2: Derivation) -> Derivation:
    """[X, Y] = X o Y - (-1)^<deg X, deg Y> Y o X, as a first-order derivation."""
    if D1.alg is not D2.alg:
        raise AlgebraError("derivations live on different algebras")
    s = koszul_sign(D1.degree, D2.degree)
    alg = D1.alg
    terms = []
    for t in _coordinate_targets(alg):
        x = _coordinate_expr(alg, t)
        c = apply(D1, apply(D2, x)) - apply(D2, apply(D1, x)).scale(s)
        if not c.is_zero():
            terms.append((c, t))
    return Derivation(alg, tuple(terms), f"[{D1.name},{D2.name}]")


def _basis_monomials(alg: Algebra, max_len: int) -> list[GradedExpr]:
    coords = list(alg.coordinates)
    f = sympy.Function("f")(*alg.even_coordinates) if alg.even_coordinates else sympy.Integer(1)
    out = []
    for n in range(max_len + 1):
        for combo in itertools.combinations_with_replacement(coords, n):
            counts = {}
            for g in combo:
                counts[g] = counts.get(g, 0) + 1
            m = alg.monomial(f, list(counts.items()))
            if not m.is_zero():
                out.append(m)
    return out


def commute_partials_check(alg: Algebra, max_len: int = 3) -> dict:
    """Check d_A d_B = (-1)^<A,B> d_B d_A on a monomial basis."""
    targets = _coordinate_targets(alg)
    basis = _basis_monomials(alg, max_len)
    failures = []
    pairs = 0
    for A, B in itertools.combinations_with_replacement(targets, 2):
        s = koszul_sign(_target_degree(alg, A), _target_degree(alg, B))
        pairs += 1
        for m in basis:
            lhs = partial(A, partial(B, m))
            rhs = partial(B, partial(A, m)).scale(s)
            if lhs != rhs:
                failures.append({"pair": [str(A), str(B)], "monomial": str(m)})
                break
    return {"check": "commute-partials", "trials": pairs, "failures": len(failures), "witness": failures[:3] or None}


# -- morphisms ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Morphism:
    """Algebra pullback ``source -> target`` given on generators and symbols.

    Generators without an image map to the same-named generator of the target.
    When an even coordinate of the source is moved, field jets are Taylor
    expanded along the shift.
    """

    source: Algebra
    target: Algebra
    images: Mapping[str, GradedExpr] = field(default_factory=dict)
    symbol_images: Mapping[sympy.Symbol, GradedExpr] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        imgs = {}
        for k, v in self.images.items():
            name = k.name if isinstance(k, Generator) else k
            imgs[name] = self.target.expr(v)
        object.__setattr__(self, "images", imgs)
        object.__setattr__(self, "symbol_images", {k: self.target.expr(v) for k, v in self.symbol_images.items()})
        for name, img in imgs.items():
            g = self.source.gen(name)
            if not img.is_zero():
                d = degree_of(img)
                if d != g.degree:
                    raise InhomogeneousError(f"image of {name} has degree {d}, expected {g.degree}")
            if g.nilpotent and not (img * img).is_zero():
                raise AlgebraError(f"image of nilpotent {name} does not square to zero")
        for s, img in self.symbol_images.items():
            if not img.is_zero() and not degree_of(img).is_zero:
                raise InhomogeneousError(f"image of even symbol {s} is not of degree zero")
        moved = [s for s in self.symbol_images if s in self.source.even_coordinates]
        object.__setattr__(self, "_moves_coordinates", bool(moved))
        object.__setattr__(self, "_cache", {})

    def image(self, g: Generator) -> GradedExpr:
        if g.name in self.images:
            return self.images[g.name]
        if g.kind == FIELD and self._moves_coordinates:
            return self._taylor_field(g)
        return self.target.expr(self.target.gen(g.name))

    def _split(self):
        bodies, souls = {}, {}
        for s, img in self.symbol_images.items():
            b = img.scalar_part()
            bodies[s] = b
            souls[s] = img - self.target.const(b)
        return bodies, souls

    def _soul_powers(self, soul: GradedExpr) -> list[GradedExpr]:
        powers = [self.target.one()]
        while True:
            nxt = powers[-1] * soul
            if nxt.is_zero():
                return powers
            powers.append(nxt)
            if len(powers) > MAX_TAYLOR_ORDER:
                raise AlgebraError("Taylor expansion does not terminate: shift is not nilpotent")

    def _taylor_field(self, g: Generator) -> GradedExpr:
        key = ("field", g)
        if key in self._cache:
            return self._cache[key]
        bodies, souls = self._split()
        src = self.source
        out = self.target.zero()
        coords = [s for s in src.even_coordinates if s in souls]
        for s in coords:
            if sympy.expand(bodies[s] - s) != 0:
                raise AlgebraError("translating field jets by a finite body shift is not supported")
        powers = [self._soul_powers(souls[s]) for s in coords]
        for ks in itertools.product(*[range(len(p)) for p in powers]):
            jet = list(g.jet)
            fac = self.target.one()
            denom = 1
            for s, k, pw in zip(coords, ks, powers):
                jet[src.even_coordinates.index(s)] += k
                fac = fac * pw[k]
                denom *= sympy.factorial(k)
            h = src.field(g.base, tuple(jet))
            out = out + fac * self.target.expr(self.target.gen(h.name)).scale(sympy.Rational(1, denom))
        self._cache[key] = out
        return out

    def _taylor_coeff(self, c: sympy.Expr) -> GradedExpr:
        bodies, souls = self._split()
        src = self.source
        moved = []
        for s in self.symbol_images:
            if s in c.free_symbols:
                moved.append(s)
            elif s in src.even_coordinates and any(src.coeff_jet_info(f) for f in c.free_symbols):
                moved.append(s)
        if any(s in src.even_coordinates and sympy.expand(bodies[s] - s) != 0 for s in moved):
            if any(src.coeff_jet_info(f) for f in c.free_symbols):
                raise AlgebraError("translating field jets by a finite body shift is not supported")
        items = [(c, self.target.one())]
        for s in moved:
            pw = self._soul_powers(souls[s])
            new = []
            for cc, mult in items:
                d = cc
                for k, p in enumerate(pw):
                    if d == 0:
                        break
                    new.append((d / sympy.factorial(k), mult * p))
                    if s in src.even_coordinates:
                        d = coefficient_total_derivative(src, d, s)
                    else:
                        d = _diff(d, s)
            items = new
        out_pairs = []
        subs = tuple((s, bodies[s]) for s in moved if bodies[s] != s)
        for cc, mult in items:
            cc = _subs(cc, subs) if subs else sympy.expand(cc)
            if cc == 0:
                continue
            out_pairs.append(mult.scale(cc))
        out = self.target.zero()
        for p in out_pairs:
            out = out + p
        return out

    def __call__(self, a: GradedExpr) -> GradedExpr:
        return pullback(self, a)


def pullback(phi: Morphism, a: GradedExpr) -> GradedExpr:
    if a.alg is not phi.source:
        raise AlgebraError("expression does not live on the morphism's source")
    out = phi.target.zero()
    for key, c in a.terms.items():
        part = phi._taylor_coeff(c)
        for g, p in key:
            if part.is_zero():
                break
            img = phi.image(g)
            for _ in range(p):
                part = part * img
        out = out + part
    return out


def identity_morphism(alg: Algebra) -> Morphism:
    return Morphism(alg, alg, name="id")


def substitute(a: GradedExpr, images: Mapping = (), symbol_images: Mapping = ()) -> GradedExpr:
    """Pull back along a morphism of ``a.alg`` to itself."""
    return pullback(Morphism(a.alg, a.alg, dict(images), dict(symbol_images)), a)


def jacobian(phi: Morphism, rows: Sequence[Target] | None = None, cols: Sequence[Target] | None = None) -> GradedMatrix:
    """Matrix of ``d(phi^* x'^i) / d x^j`` (left derivatives).

    Rows default to the source coordinates (even first), columns to the target
    coordinates, matching the block order (0,0),(0,0),(1,1) | (0,1),(1,0).
    """
    src, tgt = phi.source, phi.target
    rows = list(rows) if rows is not None else _coordinate_targets(src)
    cols = list(cols) if cols is not None else _coordinate_targets(tgt)
    entries = []
    for r in rows:
        img = pullback(phi, _coordinate_expr(src, r))
        entries.append(tuple(partial(cj, img) for cj in cols))
    return GradedMatrix(
        tgt,
        tuple(entries),
        tuple(_target_degree(src, r) for r in rows),
        tuple(_target_degree(tgt, c) for c in cols),
    )
