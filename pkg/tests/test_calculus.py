import random

import sympy
from conftest import ALG3, CTX3, graded_exprs, homogeneous_exprs
from hypothesis import given, settings

from z22susy.algebra import degree_of
from z22susy.calculus import (
    Derivation,
    commutator,
    commute_partials_check,
    identity_morphism,
    jacobian,
    partial,
    pullback,
    total_derivative,
)
from z22susy.grading import koszul_sign
from z22susy.matrix import GradedMatrix
from z22susy.oracles import jacobi_check
from z22susy.superspace import supertranslation

A = ALG3
MATERIAL = ("theta_-", "theta_+", "z", "eps_-", "eps_+")


def test_jacobi_on_100_random_triples():
    rep = jacobi_check(A, 100, random.Random(3), MATERIAL)
    assert rep["failures"] == 0, rep["witness"]


def test_partials_graded_commute():
    assert commute_partials_check(A)["failures"] == 0


@given(homogeneous_exprs(), graded_exprs())
@settings(max_examples=80)
def test_graded_leibniz(a, b):
    if a.is_zero():
        return
    for g in A.coordinates:
        s = koszul_sign(g.degree, degree_of(a))
        assert partial(g, a * b) == partial(g, a) * b + (a * partial(g, b)).scale(s)


@given(graded_exprs(), graded_exprs())
@settings(max_examples=60)
def test_total_derivative_is_even_leibniz(a, b):
    x = A.even_coordinates[0]
    assert total_derivative(x, a * b) == total_derivative(x, a) * b + a * total_derivative(x, b)


@given(graded_exprs(), graded_exprs())
@settings(max_examples=40)
def test_pullback_is_a_homomorphism(a, b):
    phi = supertranslation(CTX3, {"lambda^-": 0, "lambda^+": 0})
    assert pullback(phi, a * b) == pullback(phi, a) * pullback(phi, b)
    assert pullback(phi, a + b) == pullback(phi, a) + pullback(phi, b)


def test_identity_jacobian():
    phi = identity_morphism(A)
    J = jacobian(phi)
    degs = tuple(J.row_degrees)
    assert J == GradedMatrix.identity(A, degs)


def test_commutator_of_coordinate_fields():
    tm = A.gen("theta_-")
    d = Derivation.d(A, tm)
    # [∂θ, ∂θ] = 2∂θ² = 0 for an odd coordinate
    assert commutator(d, d).is_zero()


def test_derivation_on_coefficient_functions():
    x = A.even_coordinates[0]
    f = sympy.Function("f")(x)
    e = A.const(f) * A.expr("theta_-")
    assert total_derivative(x, e) == A.const(sympy.diff(f, x)) * A.expr("theta_-")
