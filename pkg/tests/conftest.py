import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from z22susy.oracles import ORACLE_GENERATORS
from z22susy.superspace import build_context

# derandomized so that two runs of the suite see the same examples
settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")

CTX3 = build_context(z_truncation=3)
ALG3 = CTX3.alg

words = st.lists(st.sampled_from(ORACLE_GENERATORS), max_size=5)
rationals = st.builds(sympy.Rational, st.integers(-4, 4).filter(bool), st.integers(1, 3))
even_coeffs = st.one_of(
    rationals,
    st.builds(lambda q, s: q * s, rationals, st.sampled_from([sympy.Symbol("x^-"), sympy.Symbol("x^+"), sympy.Symbol("X")])),
)


@st.composite
def graded_exprs(draw, alg=ALG3, max_terms=3):
    """Sums of a few monomials over the oracle generators."""
    out = alg.zero()
    for _ in range(draw(st.integers(0, max_terms))):
        w = draw(words)
        c = draw(even_coeffs)
        out = out + alg.monomial(c, [(alg.gen(n), 1) for n in w])
    return out


@st.composite
def homogeneous_exprs(draw, alg=ALG3, max_terms=3):
    """Sums of monomials sharing the degree of the first one drawn."""
    from z22susy.algebra import degree_of

    first = alg.zero()
    while first.is_zero():
        first = alg.monomial(draw(even_coeffs), [(alg.gen(n), 1) for n in draw(words)])
    d = degree_of(first)
    out = first
    for _ in range(draw(st.integers(0, max_terms - 1))):
        t = alg.monomial(draw(even_coeffs), [(alg.gen(n), 1) for n in draw(words)])
        if not t.is_zero() and degree_of(t) == d:
            out = out + t
    return out
