"""Berezin integration, even-element inversion and the Z_2^2-Berezinian."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import sympy

from .algebra import (
    COORDINATE,
    AlgebraError,
    GradedExpr,
    NotInvertibleError,
    coefficient_of,
    term_degree,
    truncate_z,
)
from .grading import Degree
from .matrix import GradedMatrix

__all__ = [
    "BerezinSection",
    "IntegrabilityError",
    "berezin_integral",
    "is_integrable",
    "formal_z_integral",
    "invert_even",
    "even_determinant",
    "z2_berezinian",
    "z2_trace",
]

MAX_SERIES = 64


class IntegrabilityError(AlgebraError):
    pass


@dataclass(frozen=True)
class BerezinSection:
    integrand: GradedExpr
    compact_support: bool = True


def _odd_coordinates(alg):
    return [g for g in alg.coordinates if g.name != alg.z_name]


def z_obstruction(a: GradedExpr) -> GradedExpr:
    """The z*sigma(x) part (z to the first power, no other graded coordinate)."""
    if a.alg.z is None:
        return a.alg.zero()
    return coefficient_of(a, [], z_power=1)


def is_integrable(a: GradedExpr) -> bool:
    return z_obstruction(a).is_zero()


def berezin_integral(s, check: bool = True) -> GradedExpr:
    """Coefficient of the top odd monomial (θ₋θ₊) at z^0.

    The spacetime integral is left implicit.  Non-integrable sections raise
    unless ``check`` is False.
    """
    a = s.integrand if isinstance(s, BerezinSection) else s
    if check:
        bad = z_obstruction(a)
        if not bad.is_zero():
            raise IntegrabilityError(f"section is not integrable: contains z*({bad})")
    return coefficient_of(a, _odd_coordinates(a.alg), z_power=0)


def formal_z_integral(a: GradedExpr, interval=None) -> GradedExpr:
    """∫D[z]: keep the z-free part, times the formal interval length."""
    out = truncate_z(a, 0)
    if interval is not None:
        out = out.scale(interval)
    return out


def _reciprocal(alg, c: sympy.Expr) -> sympy.Expr:
    if not alg.is_invertible(c):
        raise NotInvertibleError(f"{c} is not declared invertible")
    return sympy.powsimp(1 / c)


def invert_even(u: GradedExpr) -> GradedExpr:
    """Inverse of an even element with invertible scalar part, as the
    Neumann series u0^{-1} Σ (-ν)^k, ν = u/u0 - 1."""
    alg = u.alg
    for key in u.terms:
        if term_degree(alg, key).parity:
            raise AlgebraError("invert_even needs an element of even total degree")
    u0 = u.scalar_part()
    if u0 == 0:
        raise NotInvertibleError("scalar part vanishes")
    r = _reciprocal(alg, u0)
    nu = u.scale(r) - alg.one()
    if nu.is_zero():
        return alg.const(r)
    if alg.z_truncation is None and any(u.z_power(k) for k in nu.terms):
        raise AlgebraError("inverse is an infinite series in z; set a truncation")
    out = alg.one()
    p = alg.one()
    for _ in range(MAX_SERIES):
        p = p * (-nu)
        if p.is_zero():
            return out.scale(r)
        out = out + p
    raise AlgebraError("Neumann series did not terminate")


def even_determinant(rows) -> GradedExpr:
    """Cofactor expansion; entries must commute pairwise."""
    n = len(rows)
    if n == 0:
        raise ValueError("empty matrix")
    alg = rows[0][0].alg

    @lru_cache(maxsize=None)
    def minor(r: int, cols: tuple) -> GradedExpr:
        if r == n:
            return alg.one()
        acc = alg.zero()
        for k, c in enumerate(cols):
            e = rows[r][c]
            if e.is_zero():
                continue
            sub = minor(r + 1, cols[:k] + cols[k + 1:])
            if sub.is_zero():
                continue
            term = e * sub
            acc = acc - term if k % 2 else acc + term
        return acc

    return minor(0, tuple(range(n)))


def _check_even_block(block):
    for row in block:
        for e in row:
            for key in e.terms:
                if term_degree(e.alg, key).parity:
                    raise AlgebraError("diagonal block has an entry outside the even subalgebra")


def _inverse_commutative(D):
    """Adjugate over the determinant for a block with commuting entries."""
    n = len(D)
    det = even_determinant(D)
    inv_det = invert_even(det)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [[D[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            cof = even_determinant(minor) if minor else D[0][0].alg.one()
            if (i + j) % 2:
                cof = -cof
            row.append(cof * inv_det)
        out.append(row)
    return out, det, inv_det


def z2_berezinian(m: GradedMatrix) -> GradedExpr:
    """det(A - B D^{-1} C) (det D)^{-1} for a degree-zero matrix."""
    bad = m.degree_violations()
    if bad:
        raise AlgebraError(f"not a degree-zero matrix; offending entries {bad[:4]}")
    A, B, C, D = m.blocks()
    alg = m.alg
    if not D:
        return even_determinant(A) if A else alg.one()
    _check_even_block(A)
    _check_even_block(D)
    Dinv, _, inv_det = _inverse_commutative(D)
    if not A:
        return inv_det
    b_zero = all(e.is_zero() for r in B for e in r)
    c_zero = all(e.is_zero() for r in C for e in r)
    if b_zero or c_zero:
        return even_determinant(A) * inv_det
    na, nd = len(A), len(D)
    BD = [[sum((B[i][k] * Dinv[k][l] for k in range(nd)), alg.zero()) for l in range(nd)] for i in range(na)]
    S = [
        [A[i][j] - sum((BD[i][l] * C[l][j] for l in range(nd)), alg.zero()) for j in range(na)]
        for i in range(na)
    ]
    return even_determinant(S) * inv_det


def z2_trace(m: GradedMatrix) -> GradedExpr:
    """Σ ± m_ii with + on rows of even total degree and - on odd rows."""
    alg = m.alg
    out = alg.zero()
    for i, d in enumerate(m.row_degrees):
        e = m.entries[i][i]
        out = out - e if d.parity else out + e
    return out
