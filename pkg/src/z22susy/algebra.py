"""Canonical-form arithmetic in a Z_2^2-commutative algebra.

Elements are finite sums of monomials ``c * g_1^p_1 ... g_k^p_k`` where ``c``
is a commutative sympy expression (exact rationals, degree-(0,0) symbols and
abstract functions) and the ``g_i`` are graded generators kept in a fixed global
order.  Reordering during canonicalization contributes Koszul signs, odd
generators square to zero, powers of the truncated generator ``z`` above the
truncation order are discarded and declared power relations (``alpha**2 = 1``)
are applied.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

import sympy

from .grading import Degree, koszul_sign

__all__ = [
    "Algebra",
    "AlgebraError",
    "Generator",
    "GradedExpr",
    "InhomogeneousError",
    "IndeterminateDegreeError",
    "NotInvertibleError",
    "COORDINATE",
    "PARAMETER",
    "FIELD",
    "EVEN_COORDINATE",
    "to_sympy",
]

EVEN_COORDINATE = "even-coordinate"
COORDINATE = "graded-coordinate"
PARAMETER = "parameter"
FIELD = "field-jet"

_BUCKET = {EVEN_COORDINATE: 0, COORDINATE: 1, PARAMETER: 2, FIELD: 3}


class AlgebraError(Exception):
    pass


class InhomogeneousError(AlgebraError):
    pass


class IndeterminateDegreeError(AlgebraError):
    pass


class NotInvertibleError(AlgebraError):
    pass


def to_sympy(value) -> sympy.Expr:
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    if isinstance(value, sympy.Basic):
        return value
    if isinstance(value, int):
        return sympy.Integer(value)
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not allowed; use Fraction")
    return sympy.sympify(value)


@dataclass(frozen=True, eq=False)
class Generator:
    """A graded generator.

    ``base``/``jet`` are set for component fields of nonzero degree;
    ``jet`` counts derivatives along each even coordinate.  ``rank`` orders
    graded coordinates among themselves (z < theta_- < theta_+).
    """

    name: str
    kind: str
    degree: Degree
    weight: Fraction = Fraction(0)
    base: str | None = None
    jet: tuple[int, ...] = ()
    rank: int = 0

    def __post_init__(self):
        base = self.base if self.base is not None else self.name
        object.__setattr__(self, "_key", (_BUCKET[self.kind], self.rank, base, self.jet))
        object.__setattr__(self, "_hash", hash((self.name, self.kind, self.degree.bits)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Generator):
            return NotImplemented
        return self._hash == other._hash and self.name == other.name and self.kind == other.kind and self.degree == other.degree \
            and self.weight == other.weight and self.base == other.base and self.jet == other.jet and self.rank == other.rank

    @property
    def sort_key(self):
        return self._key

    @property
    def nilpotent(self) -> bool:
        return koszul_sign(self.degree, self.degree) == -1

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Generator({self.name!r}, {self.degree})"

    def __lt__(self, other: "Generator") -> bool:
        return self.sort_key < other.sort_key


Factors = tuple  # tuple[tuple[Generator, int], ...]

_JET_RE = re.compile(r"^(?P<base>.+)\[(?P<jet>\d+(?:,\d+)*)\]$")


def jet_name(base: str, jet: tuple[int, ...]) -> str:
    if not any(jet):
        return base
    return f"{base}[{','.join(str(j) for j in jet)}]"


def split_jet_name(name: str) -> tuple[str, tuple[int, ...] | None]:
    m = _JET_RE.match(name)
    if m is None:
        return name, None
    return m.group("base"), tuple(int(j) for j in m.group("jet").split(","))


@dataclass(frozen=True, eq=False)
class Algebra:
    """A frozen generator/relation context.

    Parameters
    ----------
    coordinates
        the graded coordinates in display order; z (if present) must be named
        by ``z_name``.
    even_coordinates
        sympy symbols of the degree-(0,0) coordinates; derivatives along them
        act on field jets.
    z_truncation
        highest retained power of z; ``None`` for unbounded.
    """

    coordinates: tuple[Generator, ...] = ()
    even_coordinates: tuple[sympy.Symbol, ...] = ()
    parameters: tuple[Generator, ...] = ()
    graded_fields: Mapping[str, tuple[Degree, Fraction]] = field(default_factory=dict)
    even_fields: Mapping[str, Fraction] = field(default_factory=dict)
    z_name: str | None = "z"
    z_truncation: int | None = 1
    relations: Mapping[str, tuple[int, object]] = field(default_factory=dict)
    invertible: frozenset = frozenset()
    symbol_weights: Mapping[sympy.Symbol, Fraction] = field(default_factory=dict)
    coordinate_weights: tuple[Fraction, ...] = ()
    n: int = 2

    def __post_init__(self):
        if self.z_truncation is not None and self.z_truncation < 0:
            raise ValueError("z_truncation must be nonnegative")
        gens = {}
        for i, g in enumerate(self.coordinates):
            if g.kind != COORDINATE:
                raise ValueError(f"{g} is not a graded coordinate")
            g = Generator(g.name, COORDINATE, g.degree, g.weight, rank=i)
            gens[g.name] = g
        for g in self.parameters:
            gens[g.name] = Generator(g.name, PARAMETER, g.degree, g.weight)
        object.__setattr__(self, "_gens", gens)
        object.__setattr__(self, "coordinates", tuple(gens[g.name] for g in self.coordinates))
        object.__setattr__(self, "parameters", tuple(gens[g.name] for g in self.parameters))
        rel = {}
        for name, (power, value) in self.relations.items():
            if power < 2:
                raise ValueError("relations must lower powers >= 2")
            rel[name] = (int(power), to_sympy(value))
        object.__setattr__(self, "_rel", rel)
        weights = tuple(Fraction(w) for w in self.coordinate_weights) or tuple(
            Fraction(0) for _ in self.even_coordinates
        )
        object.__setattr__(self, "coordinate_weights", weights)
        object.__setattr__(self, "_norm_cache", {})

    # -- generators and symbols ------------------------------------------
    def with_truncation(self, k: int | None) -> "Algebra":
        return Algebra(
            coordinates=self.coordinates,
            even_coordinates=self.even_coordinates,
            parameters=self.parameters,
            graded_fields=self.graded_fields,
            even_fields=self.even_fields,
            z_name=self.z_name,
            z_truncation=k,
            relations={k_: (p, v) for k_, (p, v) in self._rel.items()},
            invertible=self.invertible,
            symbol_weights=self.symbol_weights,
            coordinate_weights=self.coordinate_weights,
            n=self.n,
        )

    def gen(self, name: str) -> Generator:
        if name in self._gens:
            return self._gens[name]
        base, jet = split_jet_name(name)
        if base in self.graded_fields:
            return self.field(base, jet or (0,) * len(self.even_coordinates))
        raise KeyError(f"unknown generator {name!r}")

    def has_generator(self, name: str) -> bool:
        try:
            self.gen(name)
        except KeyError:
            return False
        return True

    @property
    def z(self) -> Generator | None:
        return self._gens.get(self.z_name) if self.z_name else None

    def field(self, base: str, jet: tuple[int, ...] | None = None):
        """Jet of a component field: a Generator for graded fields, a sympy
        Symbol for degree-(0,0) fields."""
        d = len(self.even_coordinates)
        jet = tuple(jet) if jet is not None else (0,) * d
        if len(jet) != d:
            raise ValueError(f"jet {jet} does not match {d} even coordinates")
        shift = sum((j * (-w) for j, w in zip(jet, self.coordinate_weights)), Fraction(0))
        if base in self.graded_fields:
            deg, w = self.graded_fields[base]
            return Generator(jet_name(base, jet), FIELD, deg, Fraction(w) + shift, base=base, jet=jet)
        if base in self.even_fields:
            return sympy.Symbol(jet_name(base, jet))
        raise KeyError(f"unknown field {base!r}")

    def coeff_jet_info(self, sym: sympy.Symbol):
        """(base, jet) if ``sym`` is a jet of an even field, else None."""
        if not isinstance(sym, sympy.Symbol):
            return None
        base, jet = split_jet_name(sym.name)
        if base not in self.even_fields:
            return None
        return base, jet if jet is not None else (0,) * len(self.even_coordinates)

    def shift_jet(self, obj, slot: int):
        """Differentiate a field jet (Generator or Symbol) once along coordinate ``slot``."""
        if isinstance(obj, Generator):
            jet = list(obj.jet)
            jet[slot] += 1
            return self.field(obj.base, tuple(jet))
        info = self.coeff_jet_info(obj)
        base, jet = info
        jet = list(jet)
        jet[slot] += 1
        return self.field(base, tuple(jet))

    def symbol_weight(self, sym: sympy.Symbol) -> Fraction:
        if sym in self.even_coordinates:
            return self.coordinate_weights[self.even_coordinates.index(sym)]
        info = self.coeff_jet_info(sym)
        if info is not None:
            base, jet = info
            return Fraction(self.even_fields[base]) - sum(
                (j * w for j, w in zip(jet, self.coordinate_weights)), Fraction(0)
            )
        return Fraction(self.symbol_weights.get(sym, 0))

    def is_invertible(self, c: sympy.Expr) -> bool:
        """True if ``c`` is a product of nonzero rationals and declared-invertible atoms."""
        c = sympy.factor_terms(c)
        factors = sympy.Mul.make_args(c)
        for f in factors:
            if f.is_Number:
                if f == 0:
                    return False
                continue
            base = f.base if f.is_Pow and f.exp.is_Integer else f
            if base in self.invertible:
                continue
            if isinstance(base, sympy.Function) and (base.func in self.invertible or base.func.__name__ in self.invertible):
                continue
            if isinstance(base, sympy.Symbol) and base.name in self.invertible:
                continue
            return False
        return True

    # -- expression constructors -----------------------------------------
    def zero(self) -> "GradedExpr":
        return GradedExpr(self, {})

    def one(self) -> "GradedExpr":
        return self.const(1)

    def const(self, c) -> "GradedExpr":
        c = sympy.expand(to_sympy(c))
        return GradedExpr(self, {(): c} if c != 0 else {})

    def expr(self, x) -> "GradedExpr":
        """Lift a generator, a generator name, a sympy expression or a number."""
        if isinstance(x, GradedExpr):
            if x.alg is not self:
                raise AlgebraError("expression belongs to a different algebra")
            return x
        if isinstance(x, Generator):
            return self.monomial(1, [(x, 1)])
        if isinstance(x, str):
            if self.has_generator(x):
                return self.monomial(1, [(self.gen(x), 1)])
            return self.const(sympy.Symbol(x))
        return self.const(x)

    def monomial(self, coeff, factors: Iterable[tuple[Generator, int]]) -> "GradedExpr":
        factors = tuple((g, int(p)) for g, p in factors if p)
        sign, key, scal = self._normalize(factors)
        if sign == 0:
            return self.zero()
        c = sympy.expand(to_sympy(coeff) * sign * scal)
        return GradedExpr(self, {key: c} if c != 0 else {})

    # -- canonicalization ------------------------------------------------
    def _normalize(self, factors: Factors):
        """Return (sign, canonical factors, relation scalar); sign 0 means zero."""
        cache = self._norm_cache
        hit = cache.get(factors)
        if hit is not None:
            return hit
        flat = []
        for g, p in factors:
            if p < 0:
                raise ValueError("negative generator power")
            flat.extend([g] * p)
        sign = 1
        # sign of the sorting permutation: one Koszul factor per inverted pair
        keys = [g.sort_key for g in flat]
        for i in range(len(flat)):
            for j in range(i + 1, len(flat)):
                if keys[i] > keys[j]:
                    sign *= koszul_sign(flat[i].degree, flat[j].degree)
        flat.sort(key=lambda g: g.sort_key)
        out = []
        scal = sympy.Integer(1)
        zero = False
        for g, grp in itertools.groupby(flat, key=lambda g: g):
            p = len(list(grp))
            if g.nilpotent and p > 1:
                zero = True
                break
            if g.name in self._rel:
                k, val = self._rel[g.name]
                while p >= k:
                    p -= k
                    scal = scal * val
                if p == 0:
                    continue
            if self.z_truncation is not None and g.name == self.z_name and p > self.z_truncation:
                zero = True
                break
            out.append((g, p))
        res = (0, (), sympy.Integer(0)) if zero or scal == 0 else (sign, tuple(out), scal)
        cache[factors] = res
        return res

    def sign_table(self, gens: Iterable[Generator]) -> dict:
        return {(a.name, b.name): koszul_sign(a.degree, b.degree) for a in gens for b in gens}


Scalar = Union[int, Fraction, sympy.Expr]


class GradedExpr:
    """An immutable canonical sum of monomials.

    ``terms`` maps a canonical factor tuple to its (expanded, nonzero) sympy
    coefficient.
    """

    __slots__ = ("alg", "terms", "_hash")

    def __init__(self, alg: Algebra, terms: dict):
        self.alg = alg
        self.terms = terms
        self._hash = None

    # -- construction helpers -------------------------------------------
    @classmethod
    def _collect(cls, alg: Algebra, pairs: Iterable[tuple[Factors, sympy.Expr]], expand: bool = True) -> "GradedExpr":
        """Merge like terms.  With ``expand`` False the coefficients must
        already be expanded sums, which ``Add`` keeps expanded."""
        acc: dict = {}
        for key, c in pairs:
            if key in acc:
                acc[key].append(c)
            else:
                acc[key] = [c]
        out = {}
        for key, cs in acc.items():
            c = sympy.Add(*cs)
            if expand:
                c = sympy.expand(c)
            if c != 0:
                out[key] = c
        return cls(alg, out)

    def _lift(self, other) -> "GradedExpr":
        if isinstance(other, GradedExpr):
            if other.alg is not self.alg:
                raise AlgebraError("cannot combine expressions from different algebras")
            return other
        return self.alg.expr(other)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        return GradedExpr._collect(self.alg, itertools.chain(self.terms.items(), other.terms.items()), expand=False)

    __radd__ = __add__

    def __neg__(self):
        return GradedExpr(self.alg, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, GradedExpr):
            if isinstance(other, (int, Fraction, sympy.Basic)) and not isinstance(other, bool):
                return self.scale(other)
            other = self._lift(other)
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, sympy.Basic)):
            return self.scale(other)
        return multiply(self._lift(other), self)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined; use invert_even")
        out = self.alg.one()
        for _ in range(k):
            out = out * self
        return out

    def scale(self, q: Scalar) -> "GradedExpr":
        q = to_sympy(q)
        if q == 0:
            return self.alg.zero()
        if q.is_Add:
            return GradedExpr._collect(self.alg, ((k, q * c) for k, c in self.terms.items()))
        return GradedExpr._collect(self.alg, ((k, mul_expanded(q, c)) for k, c in self.terms.items()), expand=False)

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, GradedExpr):
            try:
                other = self._lift(other)
            except (AlgebraError, TypeError, sympy.SympifyError):
                return NotImplemented
        if other.alg is not self.alg:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(sympy.expand(c - other.terms[k]) == 0 for k, c in self.terms.items())

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # -- inspection ------------------------------------------------------
    def __iter__(self):
        """Iterate over (coefficient, factors) pairs in canonical term order."""
        for key in sorted(self.terms, key=_term_order):
            yield self.terms[key], key

    def __len__(self):
        return len(self.terms)

    def z_power(self, key: Factors) -> int:
        zn = self.alg.z_name
        return sum(p for g, p in key if g.name == zn)

    def scalar_part(self) -> sympy.Expr:
        return self.terms.get((), sympy.Integer(0))

    def generators(self) -> set[Generator]:
        return {g for key in self.terms for g, _ in key}

    def free_symbols(self) -> set:
        out = set()
        for c in self.terms.values():
            out |= c.free_symbols
        return out

    def map_coefficients(self, fn) -> "GradedExpr":
        return GradedExpr._collect(self.alg, ((k, fn(c)) for k, c in self.terms.items()))

    def subs(self, mapping) -> "GradedExpr":
        """Substitute inside coefficients only."""
        return self.map_coefficients(lambda c: c.subs(mapping))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for c, key in self:
            fac = "*".join(g.name if p == 1 else f"{g.name}^{p}" for g, p in key)
            if not key:
                parts.append(f"({c})")
            elif c == 1:
                parts.append(fac)
            else:
                parts.append(f"({c})*{fac}")
        return " + ".join(parts)

    def __repr__(self):
        return f"GradedExpr({self})"


def _term_order(key):
    # coordinate prefix first (z power, then θ content), then the remaining factors
    coords = [(g, p) for g, p in key if g.kind == COORDINATE]
    rest = key[len(coords):]
    zp = sum(p for g, p in coords if g.rank == 0 and g.degree.parity == 0)
    thetas = tuple(g.sort_key for g, _ in coords if not (g.rank == 0 and g.degree.parity == 0))
    return (zp, len(thetas), thetas, len(rest), tuple((g.sort_key, p) for g, p in rest))


# -- module-level operations -------------------------------------------------

def normalize(alg: Algebra, coeff, factors) -> GradedExpr:
    """Canonical form of a single (possibly unsorted) monomial."""
    return alg.monomial(coeff, factors)


def multiply(a: GradedExpr, b: GradedExpr) -> GradedExpr:
    if a.alg is not b.alg:
        raise AlgebraError("cannot multiply expressions from different algebras")
    alg = a.alg
    if not a.terms or not b.terms:
        return alg.zero()
    pairs = []
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            sign, key, scal = alg._normalize(ka + kb)
            if sign:
                pairs.append((key, mul_expanded(sign * scal * ca, cb)))
    return GradedExpr._collect(alg, pairs, expand=False)


def mul_expanded(a: sympy.Expr, b: sympy.Expr) -> sympy.Expr:
    """Product of two expanded coefficients, distributed term by term."""
    A = sympy.Add.make_args(a)
    B = sympy.Add.make_args(b)
    if len(A) == 1 and len(B) == 1:
        return sympy.Mul(a, b)
    return sympy.Add(*[sympy.Mul(x, y) for x in A for y in B])


def add(a: GradedExpr, b: GradedExpr) -> GradedExpr:
    return a + b


def scale(q: Scalar, a: GradedExpr) -> GradedExpr:
    return a.scale(q)


def truncate_z(a: GradedExpr, k: int) -> GradedExpr:
    if k < 0:
        raise ValueError("truncation order must be nonnegative")
    return GradedExpr(a.alg, {key: c for key, c in a.terms.items() if a.z_power(key) <= k})


def term_degree(alg: Algebra, key: Factors) -> Degree:
    d = Degree.zero(alg.n)
    for g, p in key:
        if p % 2:
            d = d + g.degree
    return d


def degree_of(a: GradedExpr) -> Degree:
    if not a.terms:
        raise IndeterminateDegreeError("the zero expression has no degree")
    seen = {}
    for c, key in a:
        d = term_degree(a.alg, key)
        seen.setdefault(d, (c, key))
    if len(seen) > 1:
        (d1, w1), (d2, w2) = list(seen.items())[:2]
        raise InhomogeneousError(
            f"inhomogeneous expression: {_term_str(*w1)} has degree {d1}, {_term_str(*w2)} has degree {d2}"
        )
    return next(iter(seen))


def _term_str(c, key) -> str:
    return f"({c})" + "".join(f"*{g.name}" + (f"^{p}" if p > 1 else "") for g, p in key)


def coeff_weight(alg: Algebra, c: sympy.Expr) -> Fraction:
    """Lorentz weight of a single (non-sum) coefficient term."""
    if c.is_Number:
        return Fraction(0)
    if isinstance(c, sympy.Symbol):
        return alg.symbol_weight(c)
    if c.is_Mul:
        return sum((coeff_weight(alg, f) for f in c.args), Fraction(0))
    if c.is_Pow:
        if not c.exp.is_Integer:
            inner = coeff_weight(alg, c.base)
            if inner != 0:
                raise InhomogeneousError(f"non-integer power of weighted quantity {c}")
            return Fraction(0)
        return int(c.exp) * coeff_weight(alg, c.base)
    if c.is_Add:
        ws = {coeff_weight(alg, t) for t in c.args}
        if len(ws) != 1:
            raise InhomogeneousError(f"mixed weights inside {c}")
        return ws.pop()
    # function applications and derivatives: arguments must be boost-invariant
    for arg in c.args:
        if isinstance(arg, sympy.Basic) and not isinstance(arg, sympy.Tuple):
            if arg.is_Number:
                continue
            if coeff_weight(alg, arg) != 0:
                raise InhomogeneousError(f"function argument with nonzero weight in {c}")
    return Fraction(0)


def weight_of(a: GradedExpr) -> Fraction:
    if not a.terms:
        raise IndeterminateDegreeError("the zero expression has no weight")
    seen = {}
    for c, key in a:
        gw = sum((g.weight * p for g, p in key), Fraction(0))
        for t in sympy.Add.make_args(c):
            w = gw + coeff_weight(a.alg, t)
            seen.setdefault(w, (t, key))
    if len(seen) > 1:
        (w1, t1), (w2, t2) = list(seen.items())[:2]
        raise InhomogeneousError(
            f"mixed weights: {_term_str(*t1)} has weight {w1}, {_term_str(*t2)} has weight {w2}"
        )
    return next(iter(seen))


def coefficient_of(a: GradedExpr, prefix: Iterable[Generator], z_power: int | None = 0) -> GradedExpr:
    """Part of ``a`` whose graded-coordinate content is exactly ``prefix``
    (times ``z**z_power``), with those coordinates stripped.

    Coordinates sort before parameters and fields, so the stripped factor is a
    prefix of the canonical factor tuple and no sign arises.
    """
    alg = a.alg
    want = []
    if z_power:
        want.append((alg.z, z_power))
    want.extend((g, 1) for g in prefix)
    want = sorted(want, key=lambda gp: gp[0].sort_key)
    want = tuple(want)
    out = {}
    n = len(want)
    for key, c in a.terms.items():
        coords = tuple(gp for gp in key if gp[0].kind == COORDINATE)
        if coords == want:
            out[key[n:]] = c
    return GradedExpr(alg, out)


def strip_coordinates(a: GradedExpr):
    """Split into {coordinate monomial: remainder}."""
    out: dict = {}
    for key, c in a.terms.items():
        coords = tuple(gp for gp in key if gp[0].kind == COORDINATE)
        rest = key[len(coords):]
        out.setdefault(coords, {})[rest] = c
    return {k: GradedExpr(a.alg, v) for k, v in out.items()}
