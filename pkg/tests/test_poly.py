"""Polynomial algebra tests.

The gcd machinery is checked against two independent oracles: a plain
Euclidean algorithm over Q for univariate inputs, and products of
distinct primitive linear forms (irreducible, pairwise non-associate)
with hand-picked multiplicities for multivariate ones.  The remaining
properties follow the module contract: divisibility of both inputs,
coprime quotients, heuristic and subresultant agreement, reassembly of
unit * content * primpart, and value preservation through normal().
"""

import random
from fractions import Fraction

import pytest

from minicas.errors import DomainError
from minicas.expr import (
    MatrixNode,
    Pi,
    Symbol,
    add,
    diff,
    evalf,
    expand,
    lift,
    mul,
    power,
    subs,
    symbols,
)
from minicas.functions import exp, sin
from minicas.poly import (
    coeff,
    collect,
    content_primpart,
    degree,
    exact_quotient,
    heur_gcd,
    lcm,
    ldegree,
    normal,
    poly_gcd,
    sr_gcd,
)

# ---------------------------------------------------------------- oracles


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def euclid_gcd(a: list, b: list) -> list[Fraction]:
    """Primitive integer gcd of two coefficient lists (index = exponent)
    with positive leading coefficient, by Euclidean remainders over Q.

    Entirely independent of the dict representation, the heuristic, and
    the subresultant sequence under test.
    """
    a = _trim([Fraction(c) for c in a])
    b = _trim([Fraction(c) for c in b])
    while b:
        r = a[:]
        while _trim(r) and len(r) >= len(b):
            q = r[-1] / b[-1]
            shift = len(r) - len(b)
            for i, c in enumerate(b):
                r[shift + i] -= q * c
            _trim(r)
        a, b = b, r
    if not a:
        return []
    scale = Fraction(1) / list_content(a)
    if a[-1] < 0:
        scale = -scale
    return [c * scale for c in a]


def list_content(p: list[Fraction]) -> Fraction:
    """Positive rational content: gcd of numerators over lcm of
    denominators."""
    num = 0
    den = 1
    for c in p:
        num = gcd_int(num, abs(c.numerator))
        den = den * c.denominator // gcd_int(den, c.denominator)
    return Fraction(num, den)


def gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def list_to_expr(p: list, x) -> object:
    return add(*(mul(lift(c), power(x, k)) for k, c in enumerate(p)))


def rand_list(rng, deg: int, h: int) -> list[Fraction]:
    p = [Fraction(rng.randint(-h, h)) for _ in range(deg + 1)]
    p[-1] = Fraction(rng.choice([c for c in range(-h, h + 1) if c]))
    return p


def rand_poly(rng, vars, deg: int, terms: int, h: int):
    parts = [lift(rng.randint(-h, h))]
    for _ in range(terms):
        fs = [lift(rng.randint(-h, h))]
        for v in vars:
            fs.append(power(v, rng.randint(0, deg)))
        parts.append(mul(*fs))
    return add(*parts)


def rand_linear_form(rng, vars):
    """A primitive linear form with positive coefficient on the first
    variable present, as (coeff tuple, Expr)."""
    while True:
        cs = [rng.randint(-3, 3) for _ in vars] + [rng.randint(-3, 3)]
        if not any(cs[:-1]):
            continue
        g = 0
        for c in cs:
            g = gcd_int(g, c)
        cs = [c // g for c in cs]
        lead = next(c for c in cs if c)
        if lead < 0:
            cs = [-c for c in cs]
        e = add(*(mul(c, v) for c, v in zip(cs, vars)), cs[-1])
        return tuple(cs), e


# ------------------------------------------------------ structural queries


def test_degree_examples():
    x, y = symbols("x y")
    assert degree(lift(0), x) == 0  # [TRIVIAL]
    assert degree(lift(7), x) == 0  # [TRIVIAL]
    e = add(power(x, 3), mul(2, x), mul(y, power(x, 2)))
    assert degree(e, x) == 3
    assert ldegree(e, x) == 1
    assert degree(e, y) == 1
    # expansion happens first: (x + 1)**4 has visible degree 4
    assert degree(power(add(x, 1), 4), x) == 4


def test_degree_laurent_example():
    # [DERIVED] every term of 2 d^3 (4a + 5b - 3) / e carries e^(-1)
    a, b, d, e = symbols("a b d e")
    q = mul(2, power(d, 3), add(mul(4, a), mul(5, b), -3), power(e, -1))
    assert degree(q, e) == -1
    assert ldegree(q, e) == -1
    assert degree(q, d) == 3
    assert ldegree(q, a) == 0


def test_degree_rejects_non_polynomial_positions():
    x, y = symbols("x y")
    with pytest.raises(DomainError):
        degree(sin(x), x)
    with pytest.raises(DomainError):
        degree(power(x, y), x)
    with pytest.raises(DomainError):
        degree(power(x, Fraction(3, 2)), x)
    with pytest.raises(DomainError):
        degree(power(add(x, 1), -1), x)
    with pytest.raises(DomainError):
        degree(add(x, 1), lift(5))
    # the same guard applies to the expanded form only: sin(y) is a
    # perfectly good coefficient as long as x stays outside
    assert degree(mul(sin(y), power(x, 2)), x) == 2


def test_coeff_examples():
    x, y = symbols("x y")
    assert coeff(power(add(x, y), 2), x, 1) == mul(2, y)  # [DERIVED] binomial
    assert coeff(power(add(x, y), 2), x, 2) == lift(1)
    assert coeff(add(x, 1), x, 5) == lift(0)
    q = mul(add(y, 2), power(x, -1))
    assert coeff(q, x, -1) == add(y, 2)
    with pytest.raises(DomainError):
        coeff(add(x, 1), x, Fraction(1, 2))


def test_collect_spec_example():
    x, y = symbols("x y")
    e = add(mul(x, y), x, -3, mul(2, power(x, 2)))
    got = collect(e, x)
    want = add(mul(2, power(x, 2)), mul(add(1, y), x), -3)
    assert got == want
    assert expand(got) == expand(e)


def test_collect_coeff_round_trip():
    rng = random.Random(1101)
    x, y = symbols("x y")
    for _ in range(40):
        e = rand_poly(rng, [x, y], 3, 4, 6)
        lo, hi = ldegree(e, x), degree(e, x)
        rebuilt = add(*(mul(coeff(e, x, k), power(x, k)) for k in range(lo, hi + 1)))
        assert expand(rebuilt) == expand(e)
        assert expand(collect(e, x)) == expand(e)


# ------------------------------------------------------------------- gcds


def test_gcd_numeric_and_zero_cases():
    x = Symbol("x")
    assert poly_gcd(4, 6) == lift(2)
    assert poly_gcd(0, 0) == lift(0)
    assert poly_gcd(mul(-2, x), 0) == mul(2, x)  # unit normal
    assert poly_gcd(0, add(mul(-3, x), -3)) == add(mul(3, x), 3)
    # rational contents: quotients by the gcd are coprime integers
    assert poly_gcd(mul(Fraction(1, 2), x), mul(Fraction(1, 3), x)) == mul(
        Fraction(1, 6), x
    )


def test_gcd_univariate_against_euclid():
    rng = random.Random(40961)
    x = Symbol("x")
    for _ in range(120):
        g0 = rand_list(rng, rng.randint(0, 3), 4)
        p = rand_list(rng, rng.randint(0, 3), 5)
        q = rand_list(rng, rng.randint(0, 3), 5)
        a = expand(mul(list_to_expr(g0, x), list_to_expr(p, x)))
        b = expand(mul(list_to_expr(g0, x), list_to_expr(q, x)))
        # the oracle works on plain coefficient lists
        amul = _list_mul(g0, p)
        bmul = _list_mul(g0, q)
        prim = euclid_gcd(amul, bmul)
        cont = frac_gcd(list_content(amul), list_content(bmul))
        want = expand(mul(lift(cont), list_to_expr(prim, x)))
        assert poly_gcd(a, b) == want


def _list_mul(a: list, b: list) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += Fraction(ca) * Fraction(cb)
    return _trim(out)


def frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    num = gcd_int(a.numerator, b.numerator)
    den = a.denominator * b.denominator // gcd_int(a.denominator, b.denominator)
    return Fraction(num, den)


def test_gcd_multivariate_known_factorization():
    # distinct primitive linear forms are pairwise non-associate
    # irreducibles, so the gcd is the product over min multiplicities
    rng = random.Random(77)
    x, y, z = symbols("x y z")
    vars = [x, y, z]
    for _ in range(40):
        forms = {}
        while len(forms) < 3:
            sig, e = rand_linear_form(rng, vars)
            forms[sig] = e
        ca, cb = rng.randint(1, 4), rng.randint(1, 4)
        alphas = [rng.randint(0, 2) for _ in range(3)]
        betas = [rng.randint(0, 2) for _ in range(3)]
        fs = list(forms.values())
        a = expand(mul(ca, *(power(f, k) for f, k in zip(fs, alphas))))
        b = expand(mul(cb, *(power(f, k) for f, k in zip(fs, betas))))
        want = expand(
            mul(
                gcd_int(ca, cb),
                *(power(f, min(i, j)) for f, i, j in zip(fs, alphas, betas)),
            )
        )
        assert poly_gcd(a, b) == want


def test_gcd_divisibility_and_coprime_quotients():
    rng = random.Random(555)
    x, y = symbols("x y")
    for _ in range(200):
        g0 = rand_poly(rng, [x, y], 2, 3, 4)
        a = expand(mul(g0, rand_poly(rng, [x, y], 2, 3, 5)))
        b = expand(mul(g0, rand_poly(rng, [x, y], 2, 3, 5)))
        if a == lift(0) or b == lift(0):
            continue
        g = poly_gcd(a, b)
        qa = exact_quotient(a, g)  # raises if the division is not exact
        qb = exact_quotient(b, g)
        assert poly_gcd(qa, qb) == lift(1)
        if g0 != lift(0):
            # the planted factor must divide the gcd
            exact_quotient(g, poly_gcd(g0, g))


def test_heur_and_sr_agree():
    rng = random.Random(909)
    x, y = symbols("x y")
    gave_up = 0
    for _ in range(200):
        g0 = rand_poly(rng, [x, y], 2, 2, 4)
        a = expand(mul(g0, rand_poly(rng, [x, y], 2, 2, 5)))
        b = expand(mul(g0, rand_poly(rng, [x, y], 2, 2, 5)))
        if a == lift(0) or b == lift(0):
            continue
        hg = heur_gcd(a, b)
        if hg is None:
            gave_up += 1
            continue
        assert hg == sr_gcd(a, b)
        assert hg == poly_gcd(a, b)
    assert gave_up < 10


def test_gcd_factorwise_inputs():
    x, y = symbols("x y")
    a = mul(power(add(x, 1), 2), add(x, 2))
    b = mul(add(x, 1), add(x, 3))
    assert poly_gcd(a, b) == add(x, 1)
    assert poly_gcd(expand(a), b) == add(x, 1)
    g = poly_gcd(power(add(x, 1), 3), power(add(x, 1), 2))
    assert g == expand(power(add(x, 1), 2))
    # factored input with content spread across factors
    assert poly_gcd(mul(add(mul(2, x), 2), y), add(mul(4, x), 4)) == add(
        mul(2, x), 2
    )


def test_gcd_monomial_and_exclusive_variable_prepasses():
    x, y, z = symbols("x y z")
    # [DERIVED] shared monomial x y, remaining parts coprime, contents 6, 4
    g = poly_gcd(mul(6, power(x, 2), y, add(z, 1)), mul(4, x, power(y, 3)))
    assert g == mul(2, x, y)
    # z occurs only on one side and cannot survive
    assert poly_gcd(mul(add(z, 1), x), mul(x, y)) == x


def test_gcd_rejects_non_polynomials():
    x = Symbol("x")
    with pytest.raises(DomainError):
        poly_gcd(add(x, lift(0.5)), x)
    with pytest.raises(DomainError):
        poly_gcd(mul(Pi, x), x)
    with pytest.raises(DomainError):
        poly_gcd(sin(x), x)
    with pytest.raises(DomainError):
        poly_gcd(power(x, -1), x)


def test_lcm_examples():
    x = Symbol("x")
    assert lcm(4, 6) == lift(12)
    want = expand(mul(add(x, 1), add(x, 2), add(x, 3)))
    assert lcm(expand(mul(add(x, 1), add(x, 2))), expand(mul(add(x, 1), add(x, 3)))) == want
    assert lcm(mul(-2, x), 4) == mul(4, x)
    assert lcm(lift(0), x) == lift(0)


def test_exact_quotient():
    x, y = symbols("x y")
    assert exact_quotient(expand(mul(add(x, y), add(x, -1))), add(x, y)) == add(x, -1)
    assert exact_quotient(lift(0), add(x, 1)) == lift(0)
    with pytest.raises(DomainError):
        exact_quotient(add(power(x, 2), 1), add(x, 1))
    with pytest.raises(ZeroDivisionError):
        exact_quotient(x, lift(0))


def test_content_primpart_examples():
    x, y = symbols("x y")
    unit, cont, prim = content_primpart(add(mul(-1, x), -1), x)
    assert (unit, cont, prim) == (lift(-1), lift(1), add(x, 1))
    unit, cont, prim = content_primpart(
        add(mul(4, power(x, 2), y), mul(6, x, y)), x
    )
    assert unit == lift(1)
    assert cont == mul(2, y)
    assert prim == add(mul(2, power(x, 2)), mul(3, x))
    assert content_primpart(lift(0), x) == (lift(1), lift(0), lift(0))


def test_content_primpart_reassembly():
    rng = random.Random(313)
    x, y = symbols("x y")
    for _ in range(30):
        e = rand_poly(rng, [x, y], 3, 3, 6)
        if e == lift(0):
            continue
        unit, cont, prim = content_primpart(e, x)
        assert expand(mul(unit, cont, prim)) == expand(e)
        assert unit in (lift(1), lift(-1))
        # the primitive part has nothing left to extract
        u2, c2, p2 = content_primpart(prim, x)
        assert (u2, c2, p2) == (lift(1), lift(1), prim)


# ------------------------------------------------------------- normal form


def test_normal_spec_examples():
    x, y = symbols("x y")
    assert normal(add(lift(Fraction(1, 2)), lift(Fraction(1, 3)))) == lift(
        Fraction(5, 6)
    )
    assert normal(mul(add(power(x, 2), -1), power(add(x, -1), -1))) == add(x, 1)
    got = normal(add(power(x, -1), power(y, -1)))
    assert got == mul(add(x, y), power(x, -1), power(y, -1))


def test_normal_denominator_conventions():
    x = Symbol("x")
    # integer denominators move into the numerator's content
    assert normal(mul(x, Fraction(1, 2))) == mul(Fraction(1, 2), x)
    assert normal(mul(add(x, 1), power(lift(2), -1))) == add(
        mul(Fraction(1, 2), x), Fraction(1, 2)
    )
    # the denominator comes out unit normal: 1/(1-x) = -1/(x-1)
    got = normal(power(add(1, mul(-1, x)), -1))
    assert got == mul(-1, power(add(x, -1), -1))


def test_normal_cancels_function_generators():
    x, y = symbols("x y")
    # [DERIVED] second derivative of exp(-x^2) is (4x^2 - 2) exp(-x^2)
    gauss = exp(mul(-1, power(x, 2)))
    h2 = normal(mul(diff(gauss, x, 2), power(gauss, -1)))
    assert h2 == add(mul(4, power(x, 2)), -2)
    # (t^2 - 1)/(t - 1) with t = exp(y)
    e = mul(add(power(exp(y), 2), -1), power(add(exp(y), -1), -1))
    assert normal(e) == add(exp(y), 1)


def test_normal_maps_rational_powers_to_root_generators():
    x = Symbol("x")
    # (x^(3/2) + x^(1/2)) / x^(1/2) cancels through t = x^(1/2)
    num = add(power(x, Fraction(3, 2)), power(x, Fraction(1, 2)))
    got = normal(mul(num, power(x, Fraction(-1, 2))))
    assert got == add(x, 1)
    # unrelated roots stay put
    e = mul(power(x, Fraction(3, 2)), power(add(x, 1), Fraction(1, 2)))
    assert normal(e) == e


def test_normal_floats_ride_through():
    x = Symbol("x")
    assert normal(mul(lift(2.5), x)) == mul(lift(2.5), x)
    assert normal(add(mul(lift(0.5), x), x)) == mul(lift(1.5), x)


def test_normal_zero_denominator_raises():
    x = Symbol("x")
    e = add(power(add(x, -1), -1), power(add(1, mul(-1, x)), -1))
    with pytest.raises(ZeroDivisionError):
        normal(power(e, -1))


def test_normal_idempotent():
    rng = random.Random(2718)
    x, y = symbols("x y")
    for _ in range(30):
        num = rand_poly(rng, [x, y], 2, 3, 5)
        den = rand_poly(rng, [x, y], 2, 3, 5)
        if den == lift(0):
            continue
        e = add(mul(num, power(den, -1)), rand_poly(rng, [x, y], 2, 2, 3))
        got = normal(e)
        assert normal(got) == got


def test_normal_preserves_values():
    rng = random.Random(424242)
    x, y = symbols("x y")
    checked = 0
    while checked < 50:
        num = rand_poly(rng, [x, y], 2, 3, 5)
        den = rand_poly(rng, [x, y], 2, 3, 5)
        if den == lift(0):
            continue
        e = add(mul(num, power(den, -1)), rand_poly(rng, [x, y], 2, 2, 3))
        ne = normal(e)
        point = {
            x: Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
            y: Fraction(rng.randint(-9, 9), rng.randint(1, 5)),
        }
        try:
            v1 = evalf(subs(e, point), 30)
            v2 = evalf(subs(ne, point), 30)
        except ZeroDivisionError:
            continue  # singular point, try another sample
        f1 = v1.value.as_fraction()
        f2 = v2.value.as_fraction()
        assert abs(f1 - f2) <= Fraction(1, 10**10) * max(1, abs(f1))
        checked += 1


def test_normal_walks_containers():
    x = Symbol("x")
    half = mul(add(power(x, 2), -1), power(add(x, -1), -1))
    m = MatrixNode(1, 2, [half, lift(3)])
    nm = normal(m)
    assert nm.entries[0] == add(x, 1)
    s = half.series((x, 0), 3)
    ns = normal(s)
    assert ns.terms[0][0] == lift(1)
