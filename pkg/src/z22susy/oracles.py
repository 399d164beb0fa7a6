"""Independent brute-force oracles and random generators for the kernel
property checks.

Nothing here calls the kernel's normalization: words are sorted by adjacent
transpositions with one Koszul factor per swap, which is a different
algorithm from the inversion count used by ``Algebra``.
"""

from __future__ import annotations

import random
from fractions import Fraction

import sympy

from .algebra import Algebra, Generator, GradedExpr
from .berezin import z2_berezinian, z2_trace
from .calculus import Derivation, commutator
from .grading import Degree, koszul_sign
from .matrix import GradedMatrix

ORACLE_GENERATORS = ("theta_-", "theta_+", "z", "eps_-", "eps_+", "alpha")


def oracle_normal_form(alg: Algebra, word):
    """(sign, {name: power}) of a product of generators, or (0, {}).

    Bubble sort by the global order, then apply nilpotency, the z truncation
    and α² = 1.
    """
    w = list(word)
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            if b.sort_key < a.sort_key:
                w[i], w[i + 1] = b, a
                sign *= koszul_sign(a.degree, b.degree)
                changed = True
    powers: dict = {}
    for g in w:
        powers[g.name] = powers.get(g.name, 0) + 1
    for g in {g.name: g for g in w}.values():
        p = powers[g.name]
        if koszul_sign(g.degree, g.degree) == -1 and p > 1:
            return 0, {}
        if g.name == alg.z_name and alg.z_truncation is not None and p > alg.z_truncation:
            return 0, {}
        if g.name == "alpha":
            powers[g.name] = p % 2
    return sign, {k: v for k, v in powers.items() if v}


def kernel_normal_form(e: GradedExpr):
    if e.is_zero():
        return 0, {}
    if len(e.terms) != 1:
        raise AssertionError("a product of generators must be a single term")
    (key, c), = e.terms.items()
    return int(c), {g.name: p for g, p in key}


def random_word(alg: Algebra, rng: random.Random, max_len: int = 5):
    gens = [alg.gen(n) for n in ORACLE_GENERATORS]
    return [rng.choice(gens) for _ in range(rng.randint(0, max_len))]


def multiplication_oracle(alg: Algebra, pairs: int, rng: random.Random) -> dict:
    failures = []
    for i in range(pairs):
        wa, wb = random_word(alg, rng), random_word(alg, rng)
        a = alg.monomial(1, [(g, 1) for g in wa])
        b = alg.monomial(1, [(g, 1) for g in wb])
        got = kernel_normal_form(a * b)
        want = oracle_normal_form(alg, wa + wb)
        if got != want:
            failures.append({"pair": i, "a": [g.name for g in wa], "b": [g.name for g in wb], "kernel": got, "oracle": want})
    return {"check": "multiplication-oracle", "trials": pairs, "failures": len(failures), "witness": failures[0] if failures else None}


# -- random homogeneous material ----------------------------------------------

def _material(alg: Algebra, names):
    return [alg.gen(n) for n in names]


def random_homogeneous(alg: Algebra, rng: random.Random, degree: Degree, names, terms: int = 2, max_len: int = 3, even_symbols=()) -> GradedExpr:
    """Sum of up to ``terms`` random monomials of the given degree, with
    random small rational coefficients (optionally times even symbols)."""
    gens = _material(alg, names)
    out = alg.zero()
    tries = 0
    while len(out.terms) < terms and tries < 40:
        tries += 1
        word = [rng.choice(gens) for _ in range(rng.randint(0, max_len))]
        d = Degree.zero(alg.n)
        for g in word:
            d = d + g.degree
        if d != degree:
            continue
        c = sympy.Rational(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2]))
        if even_symbols and rng.random() < 0.5:
            c = c * rng.choice(list(even_symbols))
        out = out + alg.monomial(c, [(g, 1) for g in word])
    return out


def random_derivation(alg: Algebra, rng: random.Random, names) -> Derivation:
    """Homogeneous derivation of random degree with random coefficients."""
    degrees = [Degree(b) for b in ((0, 0), (0, 1), (1, 0), (1, 1))]
    d = rng.choice(degrees)
    targets = list(alg.even_coordinates) + list(alg.coordinates)
    terms = []
    for t in targets:
        td = t.degree if isinstance(t, Generator) else Degree.zero(alg.n)
        c = random_homogeneous(alg, rng, d + td, names, terms=1, even_symbols=alg.even_coordinates)
        if not c.is_zero() and rng.random() < 0.7:
            terms.append((c, t))
    return Derivation(alg, tuple(terms))


def jacobi_check(alg: Algebra, triples: int, rng: random.Random, names) -> dict:
    """[X,[Y,Z]] = [[X,Y],Z] + (−1)^<X,Y> [Y,[X,Z]]."""
    failures = []
    for i in range(triples):
        X, Y, Z = (random_derivation(alg, rng, names) for _ in range(3))
        lhs = commutator(X, commutator(Y, Z))
        rhs = commutator(commutator(X, Y), Z)
        other = commutator(Y, commutator(X, Z))
        s = koszul_sign(X.degree, Y.degree)
        rhs = rhs + (other if s == 1 else -other)
        if not lhs == rhs:
            failures.append({"triple": i, "X": str(X), "Y": str(Y), "Z": str(Z)})
    return {"check": "graded-jacobi", "trials": triples, "failures": len(failures), "witness": failures[0] if failures else None}


COORDINATE_DEGREES = (Degree((0, 0)), Degree((0, 0)), Degree((1, 1)), Degree((0, 1)), Degree((1, 0)))


def random_invertible_matrix(alg: Algebra, rng: random.Random, names, degrees=COORDINATE_DEGREES) -> GradedMatrix:
    """Degree-zero matrix whose diagonal bodies are nonzero rationals."""
    n = len(degrees)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            want = degrees[i] + degrees[j]
            e = random_homogeneous(alg, rng, want, names, terms=2)
            if want.is_zero:
                e = e - alg.const(e.scalar_part())
                body = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2])) if i == j else Fraction(rng.randint(-2, 2))
                e = e + alg.const(body)
            row.append(e)
        rows.append(row)
    return GradedMatrix(alg, tuple(tuple(r) for r in rows), tuple(degrees), tuple(degrees))


def berezinian_multiplicativity(alg: Algebra, trials: int, rng: random.Random, names) -> dict:
    failures = []
    for i in range(trials):
        M = random_invertible_matrix(alg, rng, names)
        N = random_invertible_matrix(alg, rng, names)
        lhs = z2_berezinian(M @ N)
        rhs = z2_berezinian(M) * z2_berezinian(N)
        if lhs != rhs:
            failures.append({"trial": i, "residual": str(lhs - rhs)})
    return {"check": "berezinian-multiplicative", "trials": trials, "failures": len(failures), "witness": failures[0] if failures else None}


def liouville_check(alg: Algebra, trials: int, rng: random.Random, names, tau: GradedExpr) -> dict:
    """Ber(1 + M) = 1 + tr(M) when every product of two entries of M vanishes.

    Entries are ``tau`` times random material; ``tau`` must square to zero.
    """
    failures = []
    n = len(COORDINATE_DEGREES)
    for i in range(trials):
        rows = []
        for r in range(n):
            row = []
            for c in range(n):
                want = COORDINATE_DEGREES[r] + COORDINATE_DEGREES[c]
                row.append(tau * random_homogeneous(alg, rng, want, names, terms=2))
            rows.append(tuple(row))
        M = GradedMatrix(alg, tuple(rows), COORDINATE_DEGREES, COORDINATE_DEGREES)
        one = GradedMatrix.identity(alg, COORDINATE_DEGREES)
        lhs = z2_berezinian(one + M)
        rhs = alg.one() + z2_trace(M)
        if lhs != rhs:
            failures.append({"trial": i, "residual": str(lhs - rhs)})
    return {"check": "liouville", "trials": trials, "failures": len(failures), "witness": failures[0] if failures else None}
