"""Function kernel tests.

The Bernoulli oracle below uses the defining sum recurrence, independent
of the Akiyama-Tanigawa triangle inside numkern, so the exact zeta and
polygamma rewrites are checked against a second derivation.  [PAPER]
marks the four-line sin transcript and the Gamma pole expansion.
Numeric agreement bounds follow the module invariants (1e-18 absolute at
20 digits).
"""

import math
import random
from fractions import Fraction

import mpmath
import pytest

from minicas.errors import (
    DomainError,
    PoleError,
    RegistrationError,
    UnevaluatedDerivativeError,
)
from minicas.expr import (
    Euler,
    Pi,
    add,
    diff,
    evalf,
    expand,
    lift,
    mul,
    power,
    subs,
    symbols,
    to_string,
)
from minicas.functions import (
    FunctionDef,
    cos,
    exp,
    factorial,
    fn_lookup,
    fn_register,
    gamma,
    log,
    psi,
    registered_names,
    sin,
    zeta,
)
from minicas.numbers import from_decimal
from minicas.series import ps_mul, series_coeff, series_of, truncate_ps

# ---------------------------------------------------------------- oracles


def bernoulli_oracle(n: int) -> Fraction:
    """B_n from the defining recurrence sum C(n+1,k) B_k = 0, B_0 = 1."""
    b = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(Fraction(math.comb(m + 1, k)) * b[k] for k in range(m))
        b.append(-s / (m + 1))
    return b[n]


def zeta_even_oracle(n: int) -> Fraction:
    """Rational part of zeta(2k) = (-1)^(k+1) B_2k (2 pi)^(2k) / (2 (2k)!)."""
    k = n // 2
    return (Fraction((-1) ** (k + 1) * 4**k, 2 * math.factorial(2 * k))
            * bernoulli_oracle(2 * k))


def harmonic(n: int) -> Fraction:
    return sum((Fraction(1, k) for k in range(1, n + 1)), Fraction(0))


def float_gap(a, b) -> Fraction:
    """|a - b| for float/exact Numeric scalars, exactly."""
    return abs(a.value.as_fraction() - b.value.as_fraction())


def assert_zero(e):
    assert expand(e).is_zero(), to_string(e)


# ----------------------------------------------------------- the transcript


def test_paper_sin_transcript():
    # [PAPER] the four observable lines, byte for byte
    x, y = symbols("x y")
    line1 = sin(mul(Pi, add(x, mul(Fraction(1, 2), y))))
    assert to_string(line1) == "sin(Pi*(x+1/2*y))"
    line2 = sin(mul(Pi, add(Fraction(1, 2), x)))
    assert to_string(line2) == "sin(Pi*(1/2+x))"
    line3 = sin(mul(Fraction(23, 2), Pi))
    assert to_string(line3) == "-1"
    line4 = sin(lift(from_decimal("36.128315516282622243")))
    assert to_string(line4) == "-1.0"


def test_sin_cos_table():
    # [TRIVIAL] integer and half-integer multiples of Pi
    cases = [
        (0, 0, 1),
        (1, 0, -1),
        (2, 0, 1),
        (Fraction(1, 2), 1, 0),
        (Fraction(3, 2), -1, 0),
        (Fraction(-1, 2), -1, 0),
        (7, 0, -1),
        (Fraction(23, 2), -1, 0),
        (Fraction(-9, 2), -1, 0),
    ]
    for r, s_want, c_want in cases:
        arg = mul(r, Pi) if r != 0 else lift(0)
        assert sin(arg) == lift(s_want), r
        assert cos(arg) == lift(c_want), r
    # other rational multiples and plain numbers stay inert
    for arg in (mul(Fraction(1, 3), Pi), mul(Fraction(1, 4), Pi), lift(2),
                lift(Fraction(1, 2))):
        assert to_string(sin(arg)).startswith("sin(")
        assert to_string(cos(arg)).startswith("cos(")
    # float zero goes down the numeric path, not the exact table
    assert to_string(sin(lift(0.0))) == "0.0"
    assert to_string(cos(lift(0.0))) == "1.0"


def test_eval_evalf_consistency():
    # invariant: where the exact rule fires, the numeric path agrees
    # within 1e-18 at 20 digits
    tol = Fraction(1, 10**18)
    arg = evalf(mul(Fraction(23, 2), Pi), 20)
    assert float_gap(sin(arg), lift(-1)) <= tol
    assert float_gap(cos(evalf(Pi, 20)), lift(-1)) <= tol
    assert float_gap(sin(evalf(mul(Fraction(1, 2), Pi), 20)), lift(1)) <= tol


# ------------------------------------------------------------ exp and log


def test_exp_log_rules():
    x = symbols("x")[0]
    assert exp(lift(0)) == lift(1)
    assert to_string(exp(lift(0.0))) == "1.0"
    assert exp(log(x)) == x
    assert exp(log(add(x, 2))) == add(x, 2)
    assert log(lift(1)) == lift(0)
    assert to_string(log(lift(2))) == "log(2)"
    for zero in (lift(0), lift(0.0)):
        with pytest.raises(PoleError):
            log(zero)
    # numeric value against a high-precision reference
    tol = Fraction(1, 10**18)
    with mpmath.workprec(120):
        ln2 = Fraction(int(mpmath.floor(mpmath.log(2) * 2**100)), 2**100)
    got = evalf(log(lift(2)), 20)
    assert abs(got.value.as_fraction() - ln2) <= tol


def test_exp_mul_merge():
    # exp factors combine through the product pair merge, which the
    # Hermite walkthrough relies on
    x = symbols("x")[0]
    e = mul(exp(power(x, 2)), exp(power(x, 2)))
    assert e == power(exp(power(x, 2)), 2)
    cancelled = mul(exp(power(x, 2)), power(exp(power(x, 2)), -1))
    assert cancelled == lift(1)


# ------------------------------------------------------------------- zeta


def test_zeta_exact_even_values():
    # [DERIVED] zeta(2k) against the Bernoulli-recurrence oracle
    assert zeta(2) == mul(Fraction(1, 6), power(Pi, 2))
    assert zeta(4) == mul(Fraction(1, 90), power(Pi, 4))
    for k in range(1, 9):
        want = mul(zeta_even_oracle(2 * k), power(Pi, 2 * k))
        assert zeta(2 * k) == want, k
    # odd arguments stay inert, the pole raises
    assert to_string(zeta(3)) == "zeta(3)"
    assert to_string(zeta(5)) == "zeta(5)"
    with pytest.raises(PoleError):
        zeta(lift(1))


def test_zeta_numeric_consistency():
    # invariant: exact rewrite evaluated numerically matches the direct
    # numeric zeta within 1e-18 for k <= 6
    tol = Fraction(1, 10**18)
    for k in range(1, 7):
        exact = evalf(zeta(2 * k), 20)
        direct = zeta(evalf(lift(2 * k), 20))
        assert float_gap(exact, direct) <= tol, k
    with pytest.raises(PoleError):
        zeta(lift(1.0))


def test_zeta_has_no_derivative():
    x = symbols("x")[0]
    with pytest.raises(UnevaluatedDerivativeError):
        diff(zeta(x), x)


# -------------------------------------------------------------- polygamma


def test_psi_exact_values():
    assert psi(lift(1)) == mul(-1, Euler)
    # [DERIVED] psi_n(1) = (-1)^(n+1) n! zeta(n+1), zeta through the oracle
    assert psi(1, 1) == mul(Fraction(1, 6), power(Pi, 2))
    assert psi(2, 1) == mul(-2, zeta(3))
    assert psi(3, 1) == mul(Fraction(1, 15), power(Pi, 4))
    for n in range(1, 7):
        coeff = Fraction((-1) ** (n + 1) * math.factorial(n))
        if n % 2 == 1:
            want = mul(coeff * zeta_even_oracle(n + 1), power(Pi, n + 1))
        else:
            want = mul(coeff, zeta(n + 1))
        assert psi(n, 1) == want, n


def test_psi_structure():
    x, y = symbols("x y")
    assert psi(0, x) == psi(x)
    assert to_string(psi(x)) == "psi(x)"
    assert to_string(psi(1, x)) == "psi(1,x)"
    assert to_string(psi(y, x)) == "psi(y,x)"  # symbolic order stays put
    for bad in (0, -1, -9):
        with pytest.raises(PoleError):
            psi(lift(bad))
        with pytest.raises(PoleError):
            psi(2, bad)
    with pytest.raises(DomainError):
        psi(-1, x)
    with pytest.raises(DomainError):
        psi(x, x, x)


def test_psi_stays_inert_under_evalf():
    # the paper's stated limitation: no numeric polygamma
    x = symbols("x")[0]
    e = evalf(psi(lift(Fraction(1, 3))), 20)
    assert to_string(e).startswith("psi(0.3333")
    e = evalf(psi(1, Fraction(1, 3)), 20)
    assert to_string(e).startswith("psi(1.0,0.3333")
    assert to_string(evalf(psi(x), 20)) == "psi(x)"


def test_psi_diff_ladder():
    x, y = symbols("x y")
    assert diff(psi(x), x) == psi(1, x)
    assert diff(psi(1, x), x) == psi(2, x)
    assert diff(psi(y, x), x) == psi(add(y, 1), x)
    with pytest.raises(UnevaluatedDerivativeError):
        diff(psi(x, lift(Fraction(1, 3))), x)  # derivative in the order slot


# ------------------------------------------------------------------ gamma


def test_gamma_integer_values():
    for n in range(1, 13):
        assert gamma(lift(n)) == lift(math.factorial(n - 1)), n
    for bad in (0, -1, -7):
        with pytest.raises(PoleError):
            gamma(lift(bad))
    assert to_string(gamma(lift(Fraction(1, 2)))) == "gamma(1/2)"
    # numeric path, including the pole check on float input
    assert to_string(gamma(lift(5.0))) == "24.0"
    with pytest.raises(PoleError):
        gamma(lift(-3.0))


def test_gamma_diff_structure():
    x = symbols("x")[0]
    assert diff(gamma(x), x) == mul(gamma(x), psi(x))
    second = expand(diff(gamma(x), x, 2))
    want = expand(add(
        mul(gamma(x), power(psi(x), 2)),
        mul(gamma(x), psi(1, x)),
    ))
    assert_zero(add(second, mul(-1, want)))


def test_gamma_pole_expansion():
    # [PAPER] gamma(x) = 1/x - Euler + (pi^2/12 + Euler^2/2) x
    #                  - (pi^2 Euler/12 + Euler^3/6 + zeta(3)/3) x^2 + O(x^3)
    x = symbols("x")[0]
    s = series_of(gamma(x), (x, 0), 3)
    assert s.order == 3
    assert series_coeff(s, -1) == lift(1)
    assert series_coeff(s, 0) == mul(-1, Euler)
    c1_want = add(
        mul(Fraction(1, 12), power(Pi, 2)),
        mul(Fraction(1, 2), power(Euler, 2)),
    )
    assert_zero(add(series_coeff(s, 1), mul(-1, c1_want)))
    c2_want = mul(-1, add(
        mul(Fraction(1, 12), power(Pi, 2), Euler),
        mul(Fraction(1, 6), power(Euler, 3)),
        mul(Fraction(1, 3), zeta(3)),
    ))
    assert_zero(add(series_coeff(s, 2), mul(-1, c2_want)))


def test_gamma_series_x3_coefficient_oracle():
    # [DERIVED] coefficient of x^3: Taylor coefficients of
    # exp(-Euler x + zeta(2) x^2/2 - zeta(3) x^3/3 + zeta(4) x^4/4) / x
    # by direct truncated-polynomial exponentiation
    x = symbols("x")[0]
    p = add(
        mul(-1, Euler, x),
        mul(Fraction(1, 2), zeta(2), power(x, 2)),
        mul(Fraction(-1, 3), zeta(3), power(x, 3)),
        mul(Fraction(1, 4), zeta(4), power(x, 4)),
    )
    trunc_exp = expand(add(*[
        mul(Fraction(1, math.factorial(j)), power(p, j)) for j in range(5)
    ]))
    # want the x^4 coefficient of exp(p), i.e. the x^3 one after /x
    want = mul(Fraction(1, 24), subs(diff(trunc_exp, x, 4), {x: lift(0)}))
    s = series_of(gamma(x), (x, 0), 4)
    assert_zero(add(series_coeff(s, 3), mul(-1, want)))


def test_gamma_series_at_negative_integers():
    # [DERIVED] residue (-1)^m/m! and constant (-1)^m/m! (H_m - Euler)
    x = symbols("x")[0]
    for m in range(5):
        s = series_of(gamma(x), (x, -m), 2)
        res = Fraction((-1) ** m, math.factorial(m))
        assert series_coeff(s, -1) == lift(res), m
        c0_want = mul(res, add(harmonic(m), mul(-1, Euler)))
        assert_zero(add(series_coeff(s, 0), mul(-1, c0_want)))


def test_gamma_series_at_positive_integers():
    # [DERIVED] gamma(3 + t) = 2 + 2 psi(3) t + ... with psi(3) = 3/2 - Euler
    x = symbols("x")[0]
    s = series_of(gamma(x), (x, 3), 2)
    assert series_coeff(s, 0) == lift(2)
    c1_want = mul(2, add(Fraction(3, 2), mul(-1, Euler)))
    assert_zero(add(series_coeff(s, 1), mul(-1, c1_want)))


def test_gamma_functional_equation_series():
    # invariant: series(gamma(x+1)) = ps_mul(x, series(gamma(x))) up to N=8
    from minicas.expr import pseries

    x = symbols("x")[0]
    exact_x = pseries(x, 0, [(lift(1), 1)], None)
    for n in range(1, 9):
        lhs = series_of(gamma(add(x, 1)), (x, 0), n)
        rhs = truncate_ps(ps_mul(exact_x, series_of(gamma(x), (x, 0), n)), n)
        assert lhs.order == rhs.order == n
        for k in range(n):
            assert_zero(add(series_coeff(lhs, k), mul(-1, series_coeff(rhs, k))))


def test_gamma_series_nonint_point_uses_taylor():
    x = symbols("x")[0]
    s = series_of(gamma(x), (x, Fraction(1, 2)), 2)
    assert series_coeff(s, 0) == gamma(lift(Fraction(1, 2)))
    want = mul(gamma(lift(Fraction(1, 2))), psi(lift(Fraction(1, 2))))
    assert_zero(add(series_coeff(s, 1), mul(-1, want)))


# -------------------------------------------------------------- factorial


def test_factorial_rules():
    x = symbols("x")[0]
    for n in range(11):
        assert factorial(lift(n)) == lift(math.factorial(n)), n
    with pytest.raises(PoleError):
        factorial(lift(-1))
    assert to_string(factorial(x)) == "factorial(x)"
    assert to_string(factorial(lift(Fraction(1, 2)))) == "factorial(1/2)"
    # no numeric hook: floats pass through untouched
    assert to_string(evalf(factorial(lift(Fraction(1, 2))), 20)) == "factorial(0.5)"


# ------------------------------------------------- registry and deferral


def test_deferred_evaluation_law():
    x, y = symbols("x y")
    h = fn_register(FunctionDef("test_h", 1))
    app = h(x)
    assert to_string(app) == "test_h(x)"
    assert subs(app, {x: add(y, 1)}) == h(add(y, 1))
    assert expand(h(power(add(x, 1), 2))) == h(expand(power(add(x, 1), 2)))
    assert evalf(app, 20) == app
    with pytest.raises(UnevaluatedDerivativeError):
        diff(app, x)
    # argument count is enforced
    with pytest.raises(DomainError):
        h(x, y)


def test_registration_errors():
    with pytest.raises(RegistrationError):
        fn_register(FunctionDef("sin", 1))
    fn_register(FunctionDef("test_k", 2))
    with pytest.raises(RegistrationError):
        fn_register(FunctionDef("test_k", 2))
    with pytest.raises(DomainError):
        FunctionDef("bad", 0)
    with pytest.raises(DomainError):
        FunctionDef("", 1)


def test_lookup():
    assert fn_lookup("sin", 1) is sin
    assert fn_lookup("psi", 2).arity == 2
    with pytest.raises(DomainError):
        fn_lookup("sin", 3)
    with pytest.raises(DomainError):
        fn_lookup("no_such_function", 1)
    assert {"sin", "cos", "exp", "log", "gamma", "psi", "zeta",
            "factorial"} <= registered_names()


# ------------------------------------------------------- derivative hooks


def test_diff_hooks_against_finite_differences():
    # [DERIVED] central differences at 40 digits, h = 1e-12
    x = symbols("x")[0]
    h = Fraction(1, 10**12)
    tol = Fraction(1, 10**20)
    cases = [
        (sin(mul(2, x)), Fraction(37, 100)),
        (cos(x), Fraction(11, 10)),
        (exp(mul(-1, power(x, 2))), Fraction(1, 2)),
        (log(x), Fraction(17, 10)),
        (exp(sin(x)), Fraction(3, 4)),
    ]
    for e, x0 in cases:
        sym = evalf(subs(diff(e, x), {x: lift(x0)}), 40)
        hi = evalf(subs(e, {x: lift(x0 + h)}), 40)
        lo = evalf(subs(e, {x: lift(x0 - h)}), 40)
        fd = (hi.value.as_fraction() - lo.value.as_fraction()) / (2 * h)
        assert abs(sym.value.as_fraction() - fd) <= tol, to_string(e)


def test_basic_diff_hook_forms():
    x = symbols("x")[0]
    assert diff(sin(mul(2, x)), x) == mul(2, cos(mul(2, x)))
    assert diff(cos(x), x) == mul(-1, sin(x))
    assert diff(exp(x), x) == exp(x)
    assert diff(log(x), x) == power(x, -1)
    d = diff(exp(mul(-1, power(x, 2))), x)
    assert d == mul(-2, x, exp(mul(-1, power(x, 2))))
