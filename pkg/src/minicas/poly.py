"""Polynomial algebra and rational normal forms.

Symbols, integers, and rationals generate multivariate polynomial rings
inside the expression language.  This module answers structural
questions about such expressions (degree, coeff, collect), computes
greatest common divisors, and brings rational functions into the
canonical quotient form numerator over denominator with every common
factor cancelled.

GCD work happens on a dict representation mapping exponent vectors to
Fraction coefficients.  The driver strips common monomial factors,
drops variables private to one input, clears rational content, and then
tries the heuristic gcd: evaluate at a big integer xi, take the gcd one
level down, reconstruct a candidate from the balanced base-xi digits of
the result, and verify it by trial division of both inputs.  When the
heuristic keeps missing, the subresultant polynomial remainder sequence
settles the matter.

normal() extends cancellation beyond plain polynomials.  Subexpressions
that are not rational in the symbols (function applications, floats,
powers with fractional or symbolic exponents, constants like Pi) are
replaced by temporary generator symbols, the quotient is cancelled in
that enlarged ring, and the stand-ins are substituted back at the end.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DomainError
from .expr import (
    Add,
    Constant,
    Expr,
    ExprList,
    FunctionApp,
    MatrixNode,
    Mul,
    Numeric,
    Power,
    PSeriesNode,
    Relational,
    Symbol,
    add,
    expand,
    free_symbols,
    lift,
    mul,
    power,
    pseries,
    subs,
)

_ZERO = lift(0)
_ONE = lift(1)


def _is_exact_zero(e: Expr) -> bool:
    return type(e) is Numeric and e.value.is_exact() and e.value.is_zero()


def _as_symbol(x) -> Symbol:
    x = lift(x)
    if type(x) is not Symbol:
        raise DomainError("a plain symbol is required here")
    return x


# ------------------------------------------------------- structural queries


def _addends(e: Expr) -> list[Expr]:
    """Terms of a canonical sum, or the expression itself."""
    if type(e) is Add:
        parts = [mul(Numeric(k), r) for r, k in e.pairs]
        if not e.coeff.is_zero():
            parts.append(Numeric(e.coeff))
        return parts
    return [e]


def _term_split(term: Expr, x: Symbol) -> tuple[int, Expr]:
    """Exponent of x in one expanded term, together with the cofactor.

    Terms where x sits anywhere but under an integer power (inside a
    function argument, an exponent, a fractional power, a denominator
    that did not expand away) are rejected.
    """
    if term == x:
        return 1, _ONE
    t = type(term)
    if t is Power and term.base == x:
        k = term.exponent
        if type(k) is Numeric and k.value.is_integer():
            return k.value.val, _ONE
        raise DomainError(f"{x.name} carries a non-integer exponent")
    if t is Mul:
        deg = 0
        factors = [Numeric(term.coeff)]
        for r, k in term.pairs:
            if r == x:
                if not k.is_integer():
                    raise DomainError(f"{x.name} carries a non-integer exponent")
                deg = k.val
            elif x in free_symbols(r):
                raise DomainError(f"{x.name} appears in a non-polynomial position")
            else:
                factors.append(power(r, Numeric(k)))
        return deg, mul(*factors)
    if x in free_symbols(term):
        raise DomainError(f"{x.name} appears in a non-polynomial position")
    return 0, term


def degree(e, x) -> int:
    """Highest exponent of x in expanded e.  degree(0, x) is 0."""
    x = _as_symbol(x)
    return max(_term_split(t, x)[0] for t in _addends(expand(lift(e))))


def ldegree(e, x) -> int:
    """Lowest exponent of x in expanded e."""
    x = _as_symbol(x)
    return min(_term_split(t, x)[0] for t in _addends(expand(lift(e))))


def coeff(e, x, k: int) -> Expr:
    """Coefficient of x**k in expanded e, zero when that power is absent."""
    x = _as_symbol(x)
    if not isinstance(k, int) or isinstance(k, bool):
        raise DomainError("coefficient exponent must be an int")
    parts = []
    for t in _addends(expand(lift(e))):
        kk, c = _term_split(t, x)
        if kk == k:
            parts.append(c)
    return add(*parts)


def collect(e, x) -> Expr:
    """Regroup expanded e as a sum of coefficients times powers of x."""
    x = _as_symbol(x)
    buckets: dict[int, list[Expr]] = {}
    for t in _addends(expand(lift(e))):
        k, c = _term_split(t, x)
        buckets.setdefault(k, []).append(c)
    return add(*(mul(add(*cs), power(x, k)) for k, cs in sorted(buckets.items())))


# ---------------------------------------------------- dict representation
#
# A polynomial in n ordered variables is a dict from exponent tuples of
# length n to nonzero Fraction coefficients; the zero polynomial is the
# empty dict.  Tuples compare lexicographically, and that is the term
# order used throughout.

Poly = dict


def _ordered_vars(*exprs: Expr) -> tuple[Symbol, ...]:
    seen: dict[int, Symbol] = {}
    for e in exprs:
        for s in free_symbols(e):
            seen[s.serial] = s
    return tuple(seen[i] for i in sorted(seen))


def _to_dict(e: Expr, vars: tuple[Symbol, ...]) -> Poly:
    """Expand e and read it off as a dict polynomial over vars.

    Raises DomainError when e is not a polynomial with exact rational
    coefficients in those variables.
    """
    index = {s.serial: i for i, s in enumerate(vars)}
    out: Poly = {}
    for term in _addends(expand(e)):
        mono = [0] * len(vars)
        t = type(term)
        if t is Numeric:
            cv = term.value
        elif t is Symbol:
            cv = None
            mono[index[term.serial]] = 1
        elif t is Power:
            k = term.exponent
            if (
                type(term.base) is not Symbol
                or type(k) is not Numeric
                or not k.value.is_integer()
                or k.value.val < 0
            ):
                raise DomainError(f"{term} is not a polynomial in its symbols")
            cv = None
            mono[index[term.base.serial]] = k.value.val
        elif t is Mul:
            cv = term.coeff
            for r, k in term.pairs:
                if type(r) is not Symbol or not k.is_integer() or k.val < 0:
                    raise DomainError(f"{term} is not a polynomial in its symbols")
                mono[index[r.serial]] = k.val
        else:
            raise DomainError(f"{term} is not a polynomial in its symbols")
        if cv is None:
            c = Fraction(1)
        elif cv.is_rational():
            c = cv.as_fraction()
        else:
            raise DomainError("polynomial coefficients must be exact rationals")
        key = tuple(mono)
        c = out.get(key, Fraction(0)) + c
        if c:
            out[key] = c
        else:
            out.pop(key, None)
    return out


def _from_dict(p: Poly, vars: tuple[Symbol, ...]) -> Expr:
    parts = []
    for mono, c in p.items():
        factors = [lift(c)]
        factors.extend(power(v, k) for v, k in zip(vars, mono) if k)
        parts.append(mul(*factors))
    return add(*parts)


def _dneg(a: Poly) -> Poly:
    return {t: -c for t, c in a.items()}


def _dsub(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for t, c in b.items():
        s = out.get(t, Fraction(0)) - c
        if s:
            out[t] = s
        else:
            out.pop(t, None)
    return out


def _dscale(a: Poly, c: Fraction) -> Poly:
    if not c:
        return {}
    return {t: v * c for t, v in a.items()}


def _dmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ta, ca in a.items():
        for tb, cb in b.items():
            key = tuple(i + j for i, j in zip(ta, tb))
            s = out.get(key, Fraction(0)) + ca * cb
            if s:
                out[key] = s
            else:
                out.pop(key, None)
    return out


def _dpow(a: Poly, n: int, width: int) -> Poly:
    out: Poly = {(0,) * width: Fraction(1)}
    for _ in range(n):
        out = _dmul(out, a)
    return out


def _ddiv_exact(a: Poly, b: Poly) -> Poly | None:
    """Exact quotient a/b, or None when b does not divide a.

    Plain multivariate division: the lex leading term of the remainder
    must be divisible by the lex leading term of b at every step, which
    holds whenever the division as a whole is exact.
    """
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return {}
    lb = max(b)
    cb = b[lb]
    q: Poly = {}
    r = dict(a)
    while r:
        lr = max(r)
        m = tuple(i - j for i, j in zip(lr, lb))
        if any(i < 0 for i in m):
            return None
        c = r[lr] / cb
        q[m] = q.get(m, Fraction(0)) + c
        for t, v in b.items():
            key = tuple(i + j for i, j in zip(m, t))
            s = r.get(key, Fraction(0)) - c * v
            if s:
                r[key] = s
            else:
                r.pop(key, None)
    return q


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    """gcd for rationals: both inputs are integer multiples of it."""
    return Fraction(
        math.gcd(a.numerator, b.numerator),
        math.lcm(a.denominator, b.denominator),
    )


def _dlexlead(p: Poly) -> Fraction:
    return p[max(p)]


def _dunit_normal(p: Poly) -> Poly:
    return _dneg(p) if _dlexlead(p) < 0 else dict(p)


def _integerize(p: Poly) -> tuple[Fraction, Poly]:
    """Split p into content times primitive part.

    The primitive part has coprime integer coefficients and a positive
    lex leading one; the content carries the sign.
    """
    if not p:
        return Fraction(0), {}
    it = iter(p.values())
    c = abs(next(it))
    for v in it:
        c = _frac_gcd(c, abs(v))
    if _dlexlead(p) < 0:
        c = -c
    return c, {t: v / c for t, v in p.items()}


# ------------------------------------------------------------ heuristic gcd
#
# Liao and Fateman's trick: a gcd survives evaluation, so evaluate the
# innermost variable at an integer xi larger than any coefficient could
# be, gcd one level down, and read the candidate's coefficients off the
# balanced base-xi digits.  Trial division of both inputs makes the
# answer sound.  A miss grows xi by 73794/27011 (close to 1 + sqrt 3,
# so successive points share as little structure as possible) and tries
# again, at most six retries.

_HEUR_TRIES = 7


def _dheight(p: Poly) -> int:
    return max(abs(c.numerator) for c in p.values())


def _eval_last(p: Poly, xi: int) -> Poly:
    out: Poly = {}
    for t, c in p.items():
        key = t[:-1]
        s = out.get(key, Fraction(0)) + c * xi ** t[-1]
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return out


def _balanced(c: int, xi: int) -> int:
    r = c % xi
    return r - xi if 2 * r > xi else r


def _heur_gcd_z(a: Poly, b: Poly, nv: int) -> Poly | None:
    """Heuristic gcd of primitive integer polynomials, None on defeat."""
    xi = 2 * max(_dheight(a), _dheight(b)) + 2
    for _ in range(_HEUR_TRIES):
        g = _heur_attempt(a, b, nv, xi)
        if g is not None:
            return g
        xi = xi * 73794 // 27011
    return None


def _heur_attempt(a: Poly, b: Poly, nv: int, xi: int) -> Poly | None:
    ea, eb = _eval_last(a, xi), _eval_last(b, xi)
    if nv == 1:
        gi = math.gcd(int(ea.get((), 0)), int(eb.get((), 0)))
        gamma: Poly = {(): Fraction(gi)} if gi else {}
    else:
        ca, pa = _integerize(ea)
        cb, pb = _integerize(eb)
        inner = _heur_gcd_z(pa, pb, nv - 1)
        if inner is None:
            return None
        cg = math.gcd(abs(ca.numerator), abs(cb.numerator))
        gamma = _dscale(inner, Fraction(cg))
    if not gamma:
        return None
    # balanced xi-adic digits of gamma become the candidate's
    # coefficients along the innermost variable
    cand: Poly = {}
    i = 0
    while gamma:
        carry: Poly = {}
        for t, c in gamma.items():
            d = _balanced(int(c), xi)
            if d:
                cand[t + (i,)] = Fraction(d)
            rest = (c - d) / xi
            if rest:
                carry[t] = rest
        gamma = carry
        i += 1
    if not cand:
        return None
    _, cand = _integerize(cand)
    if _ddiv_exact(a, cand) is not None and _ddiv_exact(b, cand) is not None:
        return cand
    return None


# --------------------------------------------------------- subresultant gcd


def _split_main(p: Poly) -> dict[int, Poly]:
    """View p as univariate in the first variable with Poly coefficients."""
    out: dict[int, Poly] = {}
    for t, c in p.items():
        out.setdefault(t[0], {})[t[1:]] = c
    return out


def _join_main(u: dict[int, Poly]) -> Poly:
    out: Poly = {}
    for k, cp in u.items():
        for t, c in cp.items():
            out[(k,) + t] = c
    return out


def _is_done(g: Poly, w: int) -> bool:
    return len(g) == 1 and g.get((0,) * w) == 1


def _coeff_content(u: dict[int, Poly], w: int) -> Poly:
    """gcd of the coefficient polynomials (w counts the inner variables)."""
    vals = list(u.values())
    g = vals[0]
    for c in vals[1:]:
        g = _dict_gcd_front(g, c, w)
        if _is_done(g, w):
            break
    return _dunit_normal(g)


def _must(q: Poly | None) -> Poly:
    assert q is not None, "division promised exact by the PRS theory"
    return q


def _prem(u: dict[int, Poly], v: dict[int, Poly], w: int) -> dict[int, Poly]:
    """Pseudo-remainder of u by v along the main variable.

    Returns lc(v)**(deg u - deg v + 1) * u reduced by v, the scaling
    that keeps every later division in the subresultant sequence exact.
    """
    dv = max(v)
    lv = v[dv]
    r = {k: c for k, c in u.items()}
    steps = max(r) - dv + 1
    while r and (dr := max(r)) >= dv:
        lr = r.pop(dr)
        nxt: dict[int, Poly] = {k: _dmul(c, lv) for k, c in r.items()}
        for k, c in v.items():
            if k == dv:
                continue
            key = k + dr - dv
            prod = _dmul(c, lr)
            got = nxt.get(key)
            nxt[key] = _dsub(got, prod) if got is not None else _dneg(prod)
        r = {k: c for k, c in nxt.items() if c}
        steps -= 1
    if steps > 0 and r:
        scale = _dpow(lv, steps, w)
        r = {k: _dmul(c, scale) for k, c in r.items()}
    return r


def _sr_gcd_z(a: Poly, b: Poly, nv: int) -> Poly:
    """Subresultant PRS gcd of primitive integer polynomials.

    The main variable sits at position 0; contents with respect to it
    are corrected through a recursive gcd one variable down.
    """
    w = nv - 1
    u, v = _split_main(a), _split_main(b)
    if max(u) < max(v):
        u, v = v, u
    cu = _coeff_content(u, w)
    cv = _coeff_content(v, w)
    cg = _dict_gcd_front(cu, cv, w)
    u = {k: _must(_ddiv_exact(c, cu)) for k, c in u.items()}
    v = {k: _must(_ddiv_exact(c, cv)) for k, c in v.items()}
    cone = {(0,) * w: Fraction(1)}
    g = h = cone
    while True:
        if max(v) == 0:
            # a constant tail: the primitive parts are coprime
            result = {0: cone}
            break
        delta = max(u) - max(v)
        r = _prem(u, v, w)
        if not r:
            cv2 = _coeff_content(v, w)
            result = {k: _must(_ddiv_exact(c, cv2)) for k, c in v.items()}
            break
        divisor = _dmul(g, _dpow(h, delta, w))
        u, v = v, {k: _must(_ddiv_exact(c, divisor)) for k, c in r.items()}
        g = u[max(u)]
        if delta == 1:
            h = g
        elif delta > 1:
            # h = g**delta / h**(delta - 1), exact over the integers
            h = _must(_ddiv_exact(_dpow(g, delta, w), _dpow(h, delta - 1, w)))
    out = _join_main({k: _dmul(c, cg) for k, c in result.items()})
    return _dunit_normal(out)


# ----------------------------------------------------------- the gcd driver


def _permute(p: Poly, perm: list[int]) -> Poly:
    return {tuple(t[i] for i in perm): c for t, c in p.items()}


def _inverse_perm(perm: list[int]) -> list[int]:
    inv = [0] * len(perm)
    for j, i in enumerate(perm):
        inv[i] = j
    return inv


def _main_first_perm(a: Poly, b: Poly, nv: int) -> list[int] | None:
    """Put the best main variable first: the one of lowest minimum
    degree across both inputs, ties broken by canonical order.  None
    when no variable occurs in both (the primitive parts are coprime).
    """
    best = None
    for i in range(nv):
        da = max(t[i] for t in a)
        db = max(t[i] for t in b)
        if da and db:
            key = (min(da, db), i)
            if best is None or key < best:
                best = key
    if best is None:
        return None
    main = best[1]
    return [main] + [i for i in range(nv) if i != main]


def _content_along(p: Poly, i: int, nv: int) -> Poly:
    """gcd of the coefficients of p along variable i."""
    groups: dict[int, Poly] = {}
    for t, c in p.items():
        groups.setdefault(t[i], {})[t[:i] + (0,) + t[i + 1 :]] = c
    vals = list(groups.values())
    g = vals[0]
    for q in vals[1:]:
        g = _dict_gcd_front(g, q, nv)
        if _is_done(g, nv):
            break
    return g


def _dict_gcd_front(a: Poly, b: Poly, nv: int) -> Poly:
    """Full gcd with the cheap structural reductions applied first."""
    if not a and not b:
        return {}
    if not a:
        return _dunit_normal(b)
    if not b:
        return _dunit_normal(a)
    if a == b:
        return _dunit_normal(a)
    if nv == 0:
        return {(): _frac_gcd(abs(a[()]), abs(b[()]))}
    # common monomial factors come out before anything else
    ma = [min(t[i] for t in a) for i in range(nv)]
    mb = [min(t[i] for t in b) for i in range(nv)]
    mg = tuple(min(x, y) for x, y in zip(ma, mb))
    if any(ma):
        a = {tuple(i - j for i, j in zip(t, ma)): c for t, c in a.items()}
    if any(mb):
        b = {tuple(i - j for i, j in zip(t, mb)): c for t, c in b.items()}
    # a variable only one side sees cannot survive; that input shrinks
    # to the gcd of its coefficients along the private variable
    for i in range(nv):
        da = max(t[i] for t in a)
        db = max(t[i] for t in b)
        if da and not db:
            a = _content_along(a, i, nv)
        elif db and not da:
            b = _content_along(b, i, nv)
    g = _dict_gcd(a, b, nv)
    if any(mg):
        g = {tuple(i + j for i, j in zip(t, mg)): c for t, c in g.items()}
    return g


def _dict_gcd(a: Poly, b: Poly, nv: int) -> Poly:
    ca, pa = _integerize(a)
    cb, pb = _integerize(b)
    cg = _frac_gcd(abs(ca), abs(cb))
    if pa == pb:
        return _dscale(pa, cg)
    perm = _main_first_perm(pa, pb, nv)
    if perm is None:
        return {(0,) * nv: cg}
    pa = _permute(pa, perm)
    pb = _permute(pb, perm)
    g = _heur_gcd_z(pa, pb, nv)
    if g is None:
        g = _sr_gcd_z(pa, pb, nv)
    # unit normality is judged in the canonical order, not the permuted one
    return _dscale(_dunit_normal(_permute(g, _inverse_perm(perm))), cg)


def _unit_normal_expr(e: Expr) -> Expr:
    vars = _ordered_vars(e)
    p = _to_dict(e, vars)
    if not p:
        return _ZERO
    return _from_dict(_dunit_normal(p), vars)


def exact_quotient(a, b) -> Expr:
    """a / b when b divides a exactly as a polynomial."""
    a, b = lift(a), lift(b)
    vars = _ordered_vars(a, b)
    q = _ddiv_exact(_to_dict(a, vars), _to_dict(b, vars))
    if q is None:
        raise DomainError("quotient is not exact")
    return _from_dict(q, vars)


def poly_gcd(a, b) -> Expr:
    """Greatest common divisor of two polynomials.

    The result is unit normal: positive leading coefficient under the
    canonical variable order.  The gcd of e and 0 is unit-normal e, and
    rational contents participate, so gcd(4, 6) is 2 and the quotients
    of any two inputs by their gcd are coprime integer polynomials.
    """
    a, b = lift(a), lift(b)
    if _is_exact_zero(a) and _is_exact_zero(b):
        return _ZERO
    if _is_exact_zero(a):
        return _unit_normal_expr(b)
    if _is_exact_zero(b):
        return _unit_normal_expr(a)
    if type(a) is Mul:
        return _gcd_factorwise(a, b)
    if type(b) is Mul:
        return _gcd_factorwise(b, a)
    vars = _ordered_vars(a, b)
    g = _dict_gcd_front(_to_dict(a, vars), _to_dict(b, vars), len(vars))
    return _from_dict(g, vars)


def _gcd_factorwise(a: Mul, b: Expr) -> Expr:
    """gcd against a visibly factored input, one factor at a time."""
    if not a.coeff.is_rational():
        raise DomainError("polynomial coefficients must be exact rationals")
    parts = []
    rem = b
    for r, k in a.pairs:
        if not k.is_integer() or k.val < 1:
            raise DomainError(f"{power(r, Numeric(k))} is not a polynomial factor")
        for _ in range(k.val):
            gi = poly_gcd(r, rem)
            if gi == _ONE:
                break
            parts.append(gi)
            rem = exact_quotient(rem, gi)
    parts.append(poly_gcd(Numeric(a.coeff), rem))
    return mul(*parts)


def heur_gcd(a, b) -> Expr | None:
    """The heuristic gcd alone.  None when six retries never verify."""
    a, b = lift(a), lift(b)
    if _is_exact_zero(a) and _is_exact_zero(b):
        return _ZERO
    if _is_exact_zero(a):
        return _unit_normal_expr(b)
    if _is_exact_zero(b):
        return _unit_normal_expr(a)
    vars = _ordered_vars(a, b)
    pa, pb = _to_dict(a, vars), _to_dict(b, vars)
    nv = len(vars)
    if nv == 0:
        return _from_dict(_dict_gcd_front(pa, pb, 0), vars)
    ca, pa = _integerize(pa)
    cb, pb = _integerize(pb)
    cg = _frac_gcd(abs(ca), abs(cb))
    g = _heur_gcd_z(pa, pb, nv)
    if g is None:
        return None
    return _from_dict(_dscale(g, cg), vars)


def sr_gcd(a, b) -> Expr:
    """The subresultant PRS gcd, the deterministic fallback."""
    a, b = lift(a), lift(b)
    if _is_exact_zero(a) and _is_exact_zero(b):
        return _ZERO
    if _is_exact_zero(a):
        return _unit_normal_expr(b)
    if _is_exact_zero(b):
        return _unit_normal_expr(a)
    vars = _ordered_vars(a, b)
    pa, pb = _to_dict(a, vars), _to_dict(b, vars)
    nv = len(vars)
    if nv == 0:
        return _from_dict(_dict_gcd_front(pa, pb, 0), vars)
    ca, pa = _integerize(pa)
    cb, pb = _integerize(pb)
    cg = _frac_gcd(abs(ca), abs(cb))
    perm = _main_first_perm(pa, pb, nv)
    if perm is None:
        g = {(0,) * nv: Fraction(1)}
    else:
        g = _dunit_normal(
            _permute(
                _sr_gcd_z(_permute(pa, perm), _permute(pb, perm), nv),
                _inverse_perm(perm),
            )
        )
    return _from_dict(_dscale(g, cg), vars)


def lcm(a, b) -> Expr:
    """Least common multiple a * b / gcd, unit normal."""
    a, b = lift(a), lift(b)
    g = poly_gcd(a, b)
    if _is_exact_zero(g):
        return _ZERO
    return _unit_normal_expr(exact_quotient(expand(mul(a, b)), g))


def content_primpart(e, x) -> tuple[Expr, Expr, Expr]:
    """Factor e as unit * content * primpart with respect to x.

    unit is +1 or -1 and follows the sign of the leading coefficient,
    content is the positive gcd of all the coefficients, and primpart
    is what remains: content one and positive leading coefficient.
    Zero splits as (+1, 0, 0).
    """
    x = _as_symbol(x)
    e = expand(lift(e))
    if _is_exact_zero(e):
        return _ONE, _ZERO, _ZERO
    buckets: dict[int, list[Expr]] = {}
    for t in _addends(e):
        k, c = _term_split(t, x)
        buckets.setdefault(k, []).append(c)
    coeffs = {k: add(*cs) for k, cs in buckets.items()}
    lead = coeffs[max(coeffs)]
    unit = _ONE if _dlexlead(_to_dict(lead, _ordered_vars(lead))) > 0 else lift(-1)
    cont = _ZERO
    for c in coeffs.values():
        cont = poly_gcd(cont, c)
        if cont == _ONE:
            break
    prim = exact_quotient(e, mul(unit, cont))
    return unit, cont, prim


# ------------------------------------------------------------- normal form


class _GenMap:
    """Stand-in symbols for subexpressions gcd arithmetic cannot touch."""

    def __init__(self):
        self.stack: list[tuple[Symbol, Expr]] = []
        self.index: dict[Expr, Symbol] = {}

    def sym_for(self, sub: Expr) -> Symbol:
        got = self.index.get(sub)
        if got is None:
            got = Symbol()
            self.index[sub] = got
            self.stack.append((got, sub))
        return got

    def restore(self, e: Expr) -> Expr:
        for s, sub in reversed(self.stack):
            e = subs(e, {s: sub})
        return e


def _normal_pair(e: Expr, gm: _GenMap) -> tuple[Expr, Expr]:
    """Numerator and denominator of e, coprime, over symbols plus
    whatever generators the walk had to invent."""
    t = type(e)
    if t is Numeric:
        if e.value.is_rational():
            fr = e.value.as_fraction()
            return lift(fr.numerator), lift(fr.denominator)
        return gm.sym_for(e), _ONE
    if t is Symbol:
        return e, _ONE
    if t is Add:
        n, d = _ZERO, _ONE
        for term in _addends(e):
            tn, td = _normal_pair(term, gm)
            g = poly_gcd(d, td)
            co = exact_quotient(td, g)
            n = add(mul(n, co), mul(tn, exact_quotient(d, g)))
            d = expand(mul(d, co))
        return _frac_cancel(n, d)
    if t is Mul:
        n, d = _normal_pair(Numeric(e.coeff), gm)
        for r, k in e.pairs:
            fn, fd = _normal_pair(power(r, Numeric(k)), gm)
            n = mul(n, fn)
            d = mul(d, fd)
        return _frac_cancel(n, d)
    if t is Power:
        k = e.exponent
        if type(k) is Numeric and k.value.is_integer():
            bn, bd = _normal_pair(e.base, gm)
            kk = k.value.val
            if kk >= 0:
                return power(bn, kk), power(bd, kk)
            if _is_exact_zero(bn):
                raise ZeroDivisionError("zero denominator after cancellation")
            return power(bd, -kk), power(bn, -kk)
        if type(k) is Numeric and k.value.is_rational():
            # map the q-th root of the base to a generator, so that
            # rational powers of one base cancel among themselves
            fr = k.value.as_fraction()
            root = gm.sym_for(power(e.base, lift(Fraction(1, fr.denominator))))
            if fr.numerator >= 0:
                return power(root, fr.numerator), _ONE
            return _ONE, power(root, -fr.numerator)
        return gm.sym_for(e), _ONE
    if t in (Constant, FunctionApp, PSeriesNode):
        return gm.sym_for(e), _ONE
    raise DomainError(f"cannot bring {t.__name__} into a rational form")


def _frac_cancel(n: Expr, d: Expr) -> tuple[Expr, Expr]:
    """Cancel the fraction n/d and normalize the denominator."""
    if d == _ONE:
        return n, _ONE
    n, d = expand(n), expand(d)
    if _is_exact_zero(d):
        raise ZeroDivisionError("zero denominator after cancellation")
    if _is_exact_zero(n):
        return _ZERO, _ONE
    g = poly_gcd(n, d)
    if g != _ONE:
        n = exact_quotient(n, g)
        d = exact_quotient(d, g)
    # the denominator keeps no unit and no rational content; both move
    # into the numerator
    vars = _ordered_vars(d)
    cd, pd = _integerize(_to_dict(d, vars))
    if cd != 1:
        n = mul(lift(1 / cd), n)
    return n, _from_dict(pd, vars)


def normal(e) -> Expr:
    """Rational function normal form.

    Common polynomial factors between numerator and denominator are
    cancelled, integer denominators move into the numerator's content,
    and the denominator comes out unit normal.  Subexpressions that are
    not rational functions ride through on temporary generator symbols
    and come back intact.  A denominator that cancels to exact zero
    raises ZeroDivisionError.
    """
    e = lift(e)
    t = type(e)
    if t is MatrixNode:
        return MatrixNode(e.rows, e.cols, [normal(x) for x in e.entries])
    if t is ExprList:
        return ExprList([normal(x) for x in e.items])
    if t is Relational:
        return Relational(normal(e.lhs), normal(e.rhs), e.op)
    if t is PSeriesNode:
        return pseries(e.var, e.point, [(normal(c), k) for c, k in e.terms], e.order)
    gm = _GenMap()
    n, d = _frac_cancel(*_normal_pair(e, gm))
    out = n if d == _ONE else mul(n, power(d, -1))
    return gm.restore(out)
