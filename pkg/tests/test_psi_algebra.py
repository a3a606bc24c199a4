"""Exact-algebra layer: ring operations, Riccati calculus, canonical form."""

import math

import numpy as np
import pytest

from stochnls.psi_algebra import (
    SYM_H,
    SYM_K,
    CoeffExpr,
    PsiPoly,
    PsiRational,
    SymbolId,
    clear_denominators,
    poly_add,
    poly_mul,
    rat_derivative,
    rat_second_derivative,
    riccati_derivative,
    sym_a,
    sym_b,
)


def ipoly(*coeffs: int) -> PsiPoly:
    return PsiPoly([CoeffExpr.integer(c) for c in coeffs])


PSI = ipoly(0, 1)
PSI2 = ipoly(0, 0, 1)


def psi_of_xi(xi: float, A: float = 1.0) -> float:
    return 1.0 / (1.0 + A * math.exp(xi))


# -- symbols ---------------------------------------------------------------


def test_symbol_validation():
    with pytest.raises(ValueError):
        SymbolId("A")  # indexed kind without an index
    with pytest.raises(ValueError):
        SymbolId("k", 3)  # k carries no index
    with pytest.raises(ValueError):
        SymbolId("Q", 0)
    assert str(sym_a(0)) == "A0" and str(sym_b(2)) == "B2"
    assert str(SYM_K) == "k" and str(SYM_H) == "H"
    assert sym_a(1) < sym_b(0) < SYM_K < SYM_H


# -- addition ---------------------------------------------------------------


def test_add_inverse_gives_zero():
    assert poly_add(PSI, -PSI).is_zero()


def test_add_disjoint_degrees():
    assert poly_add(ipoly(1, 1), PSI2) == ipoly(1, 1, 1)


def test_add_cancels_leading_term():
    assert poly_add(ipoly(0, -1, 1), PSI) == PSI2


# -- multiplication ----------------------------------------------------------


def test_mul_psi_psi():
    assert poly_mul(PSI, PSI) == PSI2


def test_mul_by_zero_annihilates():
    assert poly_mul(PsiPoly.zero(), ipoly(3, 1, 4)).is_zero()


def test_square_of_riccati_shift():
    # (Psi^2 - Psi)^2 = Psi^4 - 2 Psi^3 + Psi^2, and the expansion agrees
    # with pointwise evaluation
    shift = ipoly(0, -1, 1)
    sq = poly_mul(shift, shift)
    assert sq == ipoly(0, 0, 1, -2, 1)
    p = 0.3
    assert sq.evaluate(p, {}) == pytest.approx((p * p - p) ** 2, abs=1e-15)


# -- Riccati derivative -------------------------------------------------------


def test_riccati_derivative_of_psi():
    assert riccati_derivative(PSI) == ipoly(0, -1, 1)


def test_riccati_derivative_of_constant():
    assert riccati_derivative(ipoly(7)).is_zero()


def test_riccati_derivative_of_psi_squared():
    d = riccati_derivative(PSI2)
    assert d == ipoly(0, 0, -2, 2)
    # finite-difference oracle: d/dxi of Psi(xi)^2 at xi = 0.5
    h, xi = 1e-5, 0.5
    fd = (psi_of_xi(xi + h) ** 2 - psi_of_xi(xi - h) ** 2) / (2 * h)
    assert abs(d.evaluate(psi_of_xi(xi), {}) - fd) <= 1e-8


def test_riccati_derivative_raises_degree_by_one():
    rng = np.random.default_rng(5)
    for _ in range(20):
        deg = int(rng.integers(1, 7))
        coeffs = [int(c) for c in rng.integers(-5, 6, size=deg + 1)]
        coeffs[-1] = coeffs[-1] or 1
        p = ipoly(*coeffs)
        assert riccati_derivative(p).degree() == p.degree() + 1


def test_derivative_matches_finite_differences_random_polys():
    """Property: chain-rule derivative equals central differences in xi."""
    rng = np.random.default_rng(42)
    h = 1e-6
    for _ in range(25):
        deg = int(rng.integers(0, 7))
        coeffs = [int(c) for c in rng.integers(-5, 6, size=deg + 1)]
        p = ipoly(*coeffs)
        dp = riccati_derivative(p)
        for xi in (-2.0, -1.0, 0.5, 1.0):
            fd = (p.evaluate(psi_of_xi(xi + h), {})
                  - p.evaluate(psi_of_xi(xi - h), {})) / (2 * h)
            assert abs(dp.evaluate(psi_of_xi(xi), {}) - fd) <= 1e-7


def test_leibniz_rule_exact():
    rng = np.random.default_rng(7)
    for _ in range(15):
        p = ipoly(*(int(c) for c in rng.integers(-4, 5, size=4)))
        q = ipoly(*(int(c) for c in rng.integers(-4, 5, size=5)))
        lhs = riccati_derivative(poly_mul(p, q))
        rhs = poly_add(poly_mul(riccati_derivative(p), q),
                       poly_mul(p, riccati_derivative(q)))
        assert lhs == rhs


# -- rational derivatives -----------------------------------------------------


def symbolic_linear_ratio() -> PsiRational:
    T = PsiPoly([CoeffExpr.symbol(sym_a(0)), CoeffExpr.symbol(sym_a(1))])
    V = PsiPoly([CoeffExpr.symbol(sym_b(0)), CoeffExpr.symbol(sym_b(1))])
    return PsiRational(T, V)


def test_rat_derivative_of_constant_ratio():
    r = PsiRational(ipoly(2, 3), ipoly(2, 3))
    d = rat_derivative(r)
    assert d.numerator.is_zero()


def test_rat_derivative_of_psi():
    d = rat_derivative(PsiRational(PSI, ipoly(1)))
    assert d.numerator == ipoly(0, -1, 1)
    assert d.denominator == ipoly(1)


def test_rat_derivative_linear_ratio_against_finite_differences():
    r = symbolic_linear_ratio()
    d = rat_derivative(r)
    values = {sym_a(0): 1, sym_a(1): 2, sym_b(0): 1, sym_b(1): 3}
    # closed form: (Psi^2 - Psi)(A1 B0 - A0 B1)/(B0 + B1 Psi)^2
    xi, h = 0.5, 1e-5

    def u(x):
        p = psi_of_xi(x)
        return (1 + 2 * p) / (1 + 3 * p)

    fd = (u(xi + h) - u(xi - h)) / (2 * h)
    got = d.evaluate(psi_of_xi(xi), values)
    assert abs(got - fd) <= 1e-8


def test_second_derivative_of_constant_ratio_is_zero():
    r = PsiRational(ipoly(5), ipoly(5))
    assert rat_second_derivative(r).numerator.is_zero()


def test_second_derivative_of_psi():
    d2 = rat_second_derivative(PsiRational(PSI, ipoly(1)))
    # (2 Psi - 1)(Psi^2 - Psi) by hand
    expected = poly_mul(ipoly(-1, 2), ipoly(0, -1, 1))
    assert PsiRational(d2.numerator, d2.denominator).cross_equal(
        PsiRational(expected, ipoly(1)))


def test_second_derivative_equals_derivative_twice_cross_products():
    """Exact CoeffExpr identity after cross-multiplication."""
    T = PsiPoly([CoeffExpr.symbol(sym_a(i)) for i in range(3)])
    V = PsiPoly([CoeffExpr.symbol(sym_b(j)) for j in range(2)])
    r = PsiRational(T, V)
    closed = rat_second_derivative(r)
    twice = rat_derivative(rat_derivative(r))
    assert closed.cross_equal(twice)


def test_second_derivative_matches_finite_differences_on_ansatz():
    """Quadratic-over-linear ansatz at Psi = 0.3, numeric coefficients."""
    import cmath

    from stochnls.gkm import case_coefficients

    T = PsiPoly([CoeffExpr.symbol(sym_a(i)) for i in range(3)])
    V = PsiPoly([CoeffExpr.symbol(sym_b(j)) for j in range(2)])
    d2 = rat_second_derivative(PsiRational(T, V))
    xi0 = math.log(1.0 / 0.3 - 1.0)  # Psi(xi0) = 0.3
    # fourth-order stencil: keeps both truncation and the eps/h^2
    # cancellation floor of second differences far below the tolerance
    h = 1e-3
    for case in (1, 2):
        cs = case_coefficients(case, 1.0)
        values = {sym_a(i): cs.A[i] for i in range(3)}
        values.update({sym_b(j): cs.B[j] for j in range(2)})

        def u(x):
            p = 1.0 / (1.0 + cmath.exp(x))
            return ((cs.A[0] + cs.A[1] * p + cs.A[2] * p * p)
                    / (cs.B[0] + cs.B[1] * p))

        fd = (-u(xi0 - 2 * h) + 16 * u(xi0 - h) - 30 * u(xi0)
              + 16 * u(xi0 + h) - u(xi0 + 2 * h)) / (12 * h * h)
        got = d2.evaluate(0.3, values)
        assert abs(got - fd) <= 1e-7


# -- clear_denominators -------------------------------------------------------


def test_clear_denominators_zero():
    assert clear_denominators(PsiRational(PsiPoly.zero(), ipoly(1, 5))).is_zero()


def test_clear_denominators_unit_denominator():
    r = PsiRational(ipoly(0, -1, 1), ipoly(1))
    assert clear_denominators(r) == ipoly(0, -1, 1)


# -- canonical form -----------------------------------------------------------


def test_canonicalize_idempotent():
    e = (CoeffExpr.symbol(sym_a(0)) * CoeffExpr.symbol(sym_b(1))
         + CoeffExpr.integer(3) * CoeffExpr.symbol(SYM_K, 2))
    assert e.canonical() == e.canonical().canonical()
    p = PsiPoly([e, CoeffExpr.zero(), e - e])
    assert p.canonical() == p.canonical().canonical()
    assert p.degree() == 0  # trailing zeros trimmed on construction


def test_no_zero_terms_stored():
    e = CoeffExpr.symbol(sym_a(0)) - CoeffExpr.symbol(sym_a(0))
    assert e.is_zero() and e.terms == {}


def test_canonical_text_sorted_and_explicit():
    a0, b0 = CoeffExpr.symbol(sym_a(0)), CoeffExpr.symbol(sym_b(0))
    h = CoeffExpr.symbol(SYM_H)
    e = a0 * a0 * a0 + a0 * b0 * b0 * h  # degree 4 term must print first
    assert (a0 * a0 * a0).scaled(2).canonical_text() == "2*A0^3"
    assert e.scaled(1).canonical_text() == "1*A0*B0^2*H + 1*A0^3"
    assert CoeffExpr.zero().canonical_text() == "0"


def test_pow_and_diff():
    a0 = CoeffExpr.symbol(sym_a(0))
    k = CoeffExpr.symbol(SYM_K)
    e = (a0 + k) ** 3
    # d/dA0 (A0 + k)^3 = 3 (A0 + k)^2
    assert e.diff(sym_a(0)) == ((a0 + k) ** 2).scaled(3)
    assert e.diff(SYM_H).is_zero()


def test_evaluation_matches_direct_substitution():
    a0, b1 = CoeffExpr.symbol(sym_a(0)), CoeffExpr.symbol(sym_b(1))
    e = a0 * a0 * b1 - b1.scaled(4)
    val = e.evaluate({sym_a(0): 2 + 1j, sym_b(1): -3j})
    assert val == pytest.approx((2 + 1j) ** 2 * (-3j) - 4 * (-3j))
