import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from verma_pde import checks
from verma_pde.algebra import Monomial, Series, TruncationPolicy
from verma_pde.operators import (
    Weight,
    apply_d,
    apply_d_long,
    apply_d_long_closed,
    apply_d_long_uncorrected,
    apply_eta,
    apply_eta_power,
    apply_zeta,
    cartan_matrix,
    commutator,
    inverse_cartan_entry,
    lambda_bar,
    op_d,
    op_eta,
    op_multiply,
    op_partial,
    op_zeta,
    weight_drop,
    weight_eigenvalues,
    zeta_eigenvalue,
)

from conftest import mono

D8 = TruncationPolicy(8)


def S(data):
    return Series.from_dict(data)


def test_cartan_matrix_and_inverse():
    a = cartan_matrix(4)
    assert a == [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
    for i in range(1, 4):
        for j in range(1, 4):
            total = sum(a[i - 1][k - 1] * inverse_cartan_entry(4, k, j) for k in range(1, 4))
            assert total == (1 if i == j else 0)


def test_weight_parse_and_access():
    w = Weight.parse("1/3,-2", 3)
    assert w[1] == Fraction(1, 3) and w[2] == -2 and w.n == 3
    with pytest.raises(ValueError):
        Weight.parse("1,2", 4)
    with pytest.raises(ValueError):
        Weight.parse("0.5", 2)
    assert Weight((1, 0)).is_dominant_integral and not Weight((1, -1)).is_dominant_integral


def test_d_kills_constants():
    lam = Weight((1, 2, 3))
    for i in range(1, 4):
        assert apply_d(i, lam, Series.one()).is_zero()


def test_d_kills_sl2_singular_vector():
    assert apply_d(1, Weight((3,)), mono(x21=4)).is_zero()


def test_d_on_printed_and_corrected_two_root_vector():
    lam = Weight((2, 1))
    # exponent lambda1+lambda2+2 on x21 is the singular one
    assert apply_d(1, lam, mono(x21=5, x32=2)).is_zero()
    assert apply_d(2, lam, mono(x21=5, x32=2)).is_zero()
    # the printed exponent lambda1+lambda2 is not
    assert apply_d(1, lam, mono(x21=3, x32=2)) == mono(x21=2, x32=2).scale(6)


def test_d_index_range():
    with pytest.raises(ValueError):
        apply_d(3, Weight((1, 1)), Series.one())


def test_eta_examples():
    assert apply_eta(1, Series.one()) == mono(x21=1)
    assert apply_eta(2, mono(x21=3)) == mono(x21=3, x32=1) + mono(x21=2, x31=1).scale(3)
    assert apply_eta(1, mono(x32=1)) == mono(x21=1, x32=1)


def test_zeta_examples():
    lam = Weight((2, 1))
    m = mono(x21=3, x32=2)
    assert apply_zeta(1, lam, Series.one()) == Series.one().scale(2)
    assert apply_zeta(1, lam, m) == m.scale(-2)
    # 1 - 2*2 + (3 - 0) = 0
    assert apply_zeta(2, lam, m).is_zero()


def test_zeta_closed_form_matches_operator():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.choice([3, 4])
        lam = checks.random_weight(rng, n)
        m = checks.random_monomial(rng, n)
        for i in range(1, n):
            assert apply_zeta(i, lam, Series({m: 1})) == Series({m: zeta_eigenvalue(i, lam, m)})


def test_eta_power_examples():
    assert apply_eta_power(1, 0, mono(x32=1), D8) == mono(x32=1)
    assert apply_eta_power(1, Fraction(7, 3), Series.one(), D8) == mono(x21=Fraction(7, 3))
    s = apply_eta_power(2, 4, mono(x21=2), D8)
    assert s == mono(x21=2, x32=4) + mono(x21=1, x31=1, x32=3).scale(8) + mono(x31=2, x32=2).scale(12)
    assert not s.truncated
    t = mono(x21=2)
    for _ in range(4):
        t = apply_eta(2, t)
    assert t == s


def test_eta_power_fractional_on_fractional_truncates():
    s = apply_eta_power(2, Fraction(1, 2), mono(x21=Fraction(1, 3)), TruncationPolicy(3))
    assert s.truncated and s.precision == 3 and len(s) == 4


def test_eta_power_terminates_when_derivative_runs_out():
    s = apply_eta_power(2, Fraction(1, 2), mono(x21=2), D8)
    assert not s.truncated
    assert s == mono(x21=2, x32=Fraction(1, 2)) + mono(x21=1, x31=1, x32=Fraction(-1, 2)) \
        + mono(x31=2, x32=Fraction(-3, 2)).scale(Fraction(-1, 4))


def test_long_root_base_case_and_constants():
    lam = Weight((1, 2, 3))
    s = S({((2, 1, 1), (4, 3, 2)): 1, ((3, 1, 1), (4, 1, 1)): 3})
    assert apply_d_long(3, lam, s) == apply_d(3, lam, s)
    for i in (2, 3):
        assert apply_d_long(i, lam, Series.one()).is_zero()
    with pytest.raises(ValueError):
        apply_d_long(1, lam, s)


def test_lambda_bar():
    assert lambda_bar(2, Weight((1, 1, 1))) == 1 + 2
    assert lambda_bar(2, Weight((5, Fraction(1, 2), Fraction(1, 3)))) == 1 + Fraction(5, 6)


def test_long_root_closed_form_matches_nested_on_five_term_polynomial():
    rng = random.Random(11)
    lam = Weight((1, 1, 1))
    from verma_pde.algebra import variables
    terms = {}
    while len(terms) < 5:
        m = Monomial({v: rng.randint(0, 2) for v in variables(4)})
        terms[m] = Fraction(rng.randint(1, 9))
    s = Series(terms)
    assert apply_d_long(2, lam, s) == apply_d_long_closed(2, lam, s)


def test_uncorrected_long_root_recursion_fails_on_a_witness():
    lam = Weight((Fraction(1, 3), 2, -1))
    s = mono(x32=1, x41=1)
    nested = apply_d_long(2, lam, s)
    assert apply_d_long_closed(2, lam, s) == nested
    assert apply_d_long_uncorrected(2, lam, s) - nested == mono(x31=1).scale(-1)


@given(st.integers(0, 10_000), st.sampled_from([4, 5]))
def test_long_root_closed_form_matches_nested(seed, n):
    rng = random.Random(seed)
    lam = checks.random_weight(rng, n)
    s = checks.random_series(rng, n, max_terms=5)
    for i in range(2, n):
        assert apply_d_long(i, lam, s) == apply_d_long_closed(i, lam, s)


def test_commutator_examples():
    rng = random.Random(2)
    lam = Weight((1, 2))
    for _ in range(10):
        s = checks.random_series(rng, 3)
        d1 = op_d(1, lam)
        assert commutator(d1, d1)(s).is_zero()
        assert commutator(op_partial((2, 1)), op_multiply((2, 1)))(s) == s
        assert commutator(op_d(1, lam), op_eta(1))(s) == op_zeta(1, lam)(s)


def test_weight_eigenvalues_examples():
    lam = Weight((2, 1))
    assert weight_eigenvalues(lam, Series.one()) == (2, 1)
    assert weight_eigenvalues(lam, mono(x21=3, x32=2)) is not None
    assert weight_eigenvalues(lam, mono(x21=1) + mono(x32=1)) is None
    with pytest.raises(ValueError):
        weight_eigenvalues(lam, Series.zero())


def test_weight_drop_inverts_cartan():
    lam = Weight((Fraction(1, 2), 3, -1))
    m = mono(x21=Fraction(5, 2), x31=1, x43=2)
    mu = weight_eigenvalues(lam, m)
    assert weight_drop(lam, mu) == (Fraction(7, 2), 1, 2)


@given(st.integers(0, 10_000))
def test_operators_are_linear(seed):
    rng = random.Random(seed)
    n = rng.choice([3, 4])
    lam = checks.random_weight(rng, n)
    a, b = checks.random_series(rng, n), checks.random_series(rng, n)
    c = checks.random_rational(rng)
    i = rng.randint(1, n - 1)
    for op in (lambda s: apply_d(i, lam, s), lambda s: apply_eta(i, s),
               lambda s: apply_zeta(i, lam, s),
               lambda s: apply_eta_power(i, Fraction(1, 3), s, TruncationPolicy(4))):
        assert op(a.scale(c) + b).agrees_with(op(a).scale(c) + op(b))


@given(st.integers(0, 10_000), st.integers(0, 5))
def test_integer_power_is_iteration(seed, mu):
    rng = random.Random(seed)
    n = rng.choice([3, 4])
    i = rng.randint(1, n - 1)
    s = checks.random_series(rng, n, max_terms=5)
    it = s
    for _ in range(mu):
        it = apply_eta(i, it)
    out = apply_eta_power(i, mu, s, TruncationPolicy(50))
    assert not out.truncated and out == it


@pytest.mark.parametrize("suite", sorted(checks.SUITES))
def test_identity_suites_small(suite):
    results = checks.run_suite(suite, 12, seed=101)
    assert all(r.ok for r in results), [r.detail for r in results if not r.ok]


def test_operators_do_not_mutate_input():
    s = mono(x21=Fraction(1, 2), x31=1)
    before = dict(s.terms)
    apply_eta_power(2, Fraction(3, 2), s, D8)
    apply_d(1, Weight((1, 1)), s)
    assert s.terms == before
