"""Canonical expression trees.

Every constructor returns a canonical form: sums and products are
flattened pair sequences (an overall numeric coefficient plus (rest, key)
pairs) merged under a total structural order, numeric subterms fold
eagerly, and trivial powers collapse.  Equal expressions are therefore
structurally identical, `==` is structural equality, and expressions can
key dicts and sets directly.

Node kinds and their order rank:

    Numeric < Symbol < Constant < Power < Mul < Add < FunctionApp
            < PSeries < Relational < List < Matrix

Symbols order by creation serial, not by name.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath
from mpmath.libmp import dps_to_prec

from .errors import (
    DomainError,
    UnevaluatedDerivativeError,
    UnsupportedPatternError,
)
from .numbers import (
    DEFAULT_DPS,
    IUNIT,
    Number,
    check_precision,
    hash64,
    num,
    num_add,
    num_cmp,
    num_mul,
    num_pow,
    num_to_float,
)

__all__ = [
    "Expr",
    "Numeric",
    "Symbol",
    "Constant",
    "Add",
    "Mul",
    "Power",
    "FunctionApp",
    "PSeriesNode",
    "Relational",
    "ExprList",
    "MatrixNode",
    "lift",
    "add",
    "mul",
    "power",
    "sqrt",
    "apply_function",
    "compare",
    "subs",
    "diff",
    "expand",
    "evalf",
    "to_string",
    "free_symbols",
    "symbols",
    "Eq",
    "rel",
    "pseries",
    "Pi",
    "Euler",
    "Catalan",
    "I",
    "ZERO",
    "ONE",
]

_serials = itertools.count(1)

KIND_NUMERIC = 0
KIND_SYMBOL = 1
KIND_CONSTANT = 2
KIND_POWER = 3
KIND_MUL = 4
KIND_ADD = 5
KIND_FUNCTION = 6
KIND_PSERIES = 7
KIND_RELATIONAL = 8
KIND_LIST = 9
KIND_MATRIX = 10

_NUM_ZERO = num(0)
_NUM_ONE = num(1)


class Expr:
    """Base class.  Instances are immutable and hash-consable by value."""

    __slots__ = ("_hash",)
    kind = -1

    # -- operators ----------------------------------------------------

    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return add(self, mul(-1, other))

    def __rsub__(self, other):
        return add(other, mul(-1, self))

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return mul(self, power(other, -1))

    def __rtruediv__(self, other):
        return mul(other, power(self, -1))

    def __pow__(self, other):
        return power(self, other)

    def __rpow__(self, other):
        return power(other, self)

    def __neg__(self):
        return mul(-1, self)

    def __pos__(self):
        return self

    def __eq__(self, other):
        if isinstance(other, Expr):
            pass
        elif isinstance(other, (int, Fraction, float, Number)):
            other = lift(other)
        else:
            return NotImplemented
        return self is other or (self._hash == other._hash and compare(self, other) == 0)

    def __hash__(self):
        return self._hash

    def __str__(self):
        return to_string(self)

    def __repr__(self):
        return to_string(self)

    # -- conveniences ----------------------------------------------------

    def subs(self, bindings):
        return subs(self, bindings)

    def diff(self, x, n: int = 1):
        return diff(self, x, n)

    def expand(self):
        return expand(self)

    def evalf(self, prec: int = DEFAULT_DPS):
        return evalf(self, prec)

    def series(self, at, order: int):
        from .series import series_of

        return series_of(self, at, order)

    def normal(self):
        from .poly import normal

        return normal(self)

    def collect(self, x):
        from .poly import collect

        return collect(self, x)

    def degree(self, x):
        from .poly import degree

        return degree(self, x)

    def ldegree(self, x):
        from .poly import ldegree

        return ldegree(self, x)

    def coeff(self, x, k: int):
        from .poly import coeff

        return coeff(self, x, k)

    def is_zero(self) -> bool:
        return type(self) is Numeric and self.value.is_zero()

    def is_one(self) -> bool:
        return type(self) is Numeric and self.value.is_one()


class Numeric(Expr):
    __slots__ = ("value",)
    kind = KIND_NUMERIC

    def __init__(self, value: Number):
        self.value = value
        self._hash = hash64(KIND_NUMERIC, value._hash)


class Symbol(Expr):
    """A named indeterminate.  Identity is the creation serial."""

    __slots__ = ("serial", "name")
    kind = KIND_SYMBOL

    def __init__(self, name: str | None = None):
        self.serial = next(_serials)
        self.name = name if name is not None else f"symbol{self.serial}"
        self._hash = hash64(KIND_SYMBOL, self.serial)


class Constant(Expr):
    """A named constant: either a digit generator (Pi) or a fixed Number."""

    __slots__ = ("serial", "name", "fixed", "digits")
    kind = KIND_CONSTANT

    def __init__(self, name: str, fixed: Number | None = None, digits=None):
        if (fixed is None) == (digits is None):
            raise DomainError("constant needs exactly one of fixed value or digit generator")
        self.serial = next(_serials)
        self.name = name
        self.fixed = fixed
        self.digits = digits
        self._hash = hash64(KIND_CONSTANT, self.serial)


class Add(Expr):
    """overall + sum of key*rest.  Construct via add()."""

    __slots__ = ("coeff", "pairs")
    kind = KIND_ADD

    def __init__(self, coeff: Number, pairs):
        self.coeff = coeff
        self.pairs = pairs
        self._hash = hash64(
            KIND_ADD, coeff._hash, *(v for r, k in pairs for v in (r._hash, k._hash))
        )


class Mul(Expr):
    """overall * product of rest^key.  Construct via mul()."""

    __slots__ = ("coeff", "pairs")
    kind = KIND_MUL

    def __init__(self, coeff: Number, pairs):
        self.coeff = coeff
        self.pairs = pairs
        self._hash = hash64(
            KIND_MUL, coeff._hash, *(v for r, k in pairs for v in (r._hash, k._hash))
        )


class Power(Expr):
    __slots__ = ("base", "exponent")
    kind = KIND_POWER

    def __init__(self, base: Expr, exponent: Expr):
        self.base = base
        self.exponent = exponent
        self._hash = hash64(KIND_POWER, base._hash, exponent._hash)


class FunctionApp(Expr):
    """A deferred function application; exists only when eval declined."""

    __slots__ = ("fdef", "args")
    kind = KIND_FUNCTION

    def __init__(self, fdef, args):
        self.fdef = fdef
        self.args = args
        self._hash = hash64(KIND_FUNCTION, fdef.serial, *(a._hash for a in args))


class PSeriesNode(Expr):
    """Truncated power/Laurent series in one variable around a point.

    terms: ((coeff, exponent), ...) with strictly increasing integer
    exponents and nonzero coefficients free of the variable; order is the
    truncation exponent N (the O((x-point)^N) term) or None for a series
    that is exact (no order term).
    """

    __slots__ = ("var", "point", "terms", "order")
    kind = KIND_PSERIES

    def __init__(self, var: Symbol, point: Expr, terms, order: int | None):
        self.var = var
        self.point = point
        self.terms = terms
        self.order = order
        self._hash = hash64(
            KIND_PSERIES,
            var._hash,
            point._hash,
            -1 if order is None else order,
            *(v for c, e in terms for v in (c._hash, e)),
        )


class Relational(Expr):
    __slots__ = ("lhs", "rhs", "op")
    kind = KIND_RELATIONAL

    OPS = ("==", "!=", "<", "<=", ">", ">=")

    def __init__(self, lhs: Expr, rhs: Expr, op: str = "=="):
        if op not in self.OPS:
            raise DomainError(f"unknown relational operator {op!r}")
        self.lhs = lhs
        self.rhs = rhs
        self.op = op
        self._hash = hash64(KIND_RELATIONAL, self.OPS.index(op), lhs._hash, rhs._hash)


class ExprList(Expr):
    __slots__ = ("items",)
    kind = KIND_LIST

    def __init__(self, items):
        self.items = tuple(items)
        self._hash = hash64(KIND_LIST, *(a._hash for a in self.items))

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)


class MatrixNode(Expr):
    """Dense rows x cols matrix of expressions."""

    __slots__ = ("rows", "cols", "entries")
    kind = KIND_MATRIX

    def __init__(self, rows: int, cols: int, entries):
        entries = tuple(entries)
        if rows < 1 or cols < 1 or len(entries) != rows * cols:
            raise DomainError("matrix shape does not match entry count")
        self.rows = rows
        self.cols = cols
        self.entries = entries
        self._hash = hash64(KIND_MATRIX, rows, cols, *(a._hash for a in entries))

    def __getitem__(self, rc):
        r, c = rc
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise DomainError("matrix index out of range")
        return self.entries[r * self.cols + c]

    def row_list(self):
        n = self.cols
        return [list(self.entries[i * n : (i + 1) * n]) for i in range(self.rows)]


# ---------------------------------------------------------------- lifting


def lift(x) -> Expr:
    if isinstance(x, Expr):
        return x
    return Numeric(num(x))


ZERO = Numeric(_NUM_ZERO)
ONE = Numeric(_NUM_ONE)


# ---------------------------------------------------------------- ordering


def compare(a: Expr, b: Expr) -> int:
    """Total structural order; 0 exactly for structurally equal trees."""
    if a is b:
        return 0
    if a.kind != b.kind:
        return -1 if a.kind < b.kind else 1
    t = type(a)
    if t is Numeric:
        return num_cmp(a.value, b.value)
    if t is Symbol or t is Constant:
        return (a.serial > b.serial) - (a.serial < b.serial)
    if t is Power:
        return compare(a.base, b.base) or compare(a.exponent, b.exponent)
    if t is Add or t is Mul:
        if len(a.pairs) != len(b.pairs):
            return -1 if len(a.pairs) < len(b.pairs) else 1
        for (ra, ka), (rb, kb) in zip(a.pairs, b.pairs):
            c = compare(ra, rb) or num_cmp(ka, kb)
            if c:
                return c
        return num_cmp(a.coeff, b.coeff)
    if t is FunctionApp:
        if a.fdef.serial != b.fdef.serial:
            return -1 if a.fdef.serial < b.fdef.serial else 1
        return _cmp_seq(a.args, b.args)
    if t is PSeriesNode:
        c = compare(a.var, b.var) or compare(a.point, b.point)
        if c:
            return c
        oa = (1, 0) if a.order is None else (0, a.order)
        ob = (1, 0) if b.order is None else (0, b.order)
        if oa != ob:
            return -1 if oa < ob else 1
        if len(a.terms) != len(b.terms):
            return -1 if len(a.terms) < len(b.terms) else 1
        for (ca, ea), (cb, eb) in zip(a.terms, b.terms):
            if ea != eb:
                return -1 if ea < eb else 1
            c = compare(ca, cb)
            if c:
                return c
        return 0
    if t is Relational:
        ia, ib = Relational.OPS.index(a.op), Relational.OPS.index(b.op)
        if ia != ib:
            return -1 if ia < ib else 1
        return compare(a.lhs, b.lhs) or compare(a.rhs, b.rhs)
    if t is ExprList:
        return _cmp_seq(a.items, b.items)
    if t is MatrixNode:
        if (a.rows, a.cols) != (b.rows, b.cols):
            return -1 if (a.rows, a.cols) < (b.rows, b.cols) else 1
        return _cmp_seq(a.entries, b.entries)
    raise DomainError(f"cannot order {t.__name__}")


def _cmp_seq(xs, ys) -> int:
    if len(xs) != len(ys):
        return -1 if len(xs) < len(ys) else 1
    for x, y in zip(xs, ys):
        c = compare(x, y)
        if c:
            return c
    return 0


def _sort_pairs(pairs):
    import functools

    pairs.sort(key=functools.cmp_to_key(lambda p, q: compare(p[0], q[0])))
    return pairs


# --------------------------------------------------------- sum construction


def add(*terms) -> Expr:
    return _add_terms([lift(t) for t in terms])


def _add_terms(terms) -> Expr:
    overall = _NUM_ZERO
    bucket: dict[Expr, Number] = {}
    for t in terms:
        tt = type(t)
        if tt is Numeric:
            overall = num_add(overall, t.value)
        elif tt is Add:
            overall = num_add(overall, t.coeff)
            for r, k in t.pairs:
                _bucket_merge(bucket, r, k)
        else:
            r, k = _split_term(t)
            _bucket_merge(bucket, r, k)
    pairs = [(r, k) for r, k in bucket.items() if not k.is_zero()]
    if not pairs:
        return Numeric(overall)
    _sort_pairs(pairs)
    if overall.is_zero() and len(pairs) == 1:
        r, k = pairs[0]
        return r if k.is_one() else _scaled(r, k)
    return Add(overall, tuple(pairs))


def _bucket_merge(bucket, r, k):
    prev = bucket.get(r)
    bucket[r] = k if prev is None else num_add(prev, k)


def _split_term(t):
    """Write a non-numeric, non-Add term as key * rest with numeric key."""
    if type(t) is Mul and not t.coeff.is_one():
        if len(t.pairs) == 1:
            r, k = t.pairs[0]
            rest = r if k.is_one() else Power(r, Numeric(k))
        else:
            rest = Mul(_NUM_ONE, t.pairs)
        return rest, t.coeff
    return t, _NUM_ONE


def _scaled(rest: Expr, k: Number) -> Expr:
    """k * rest for numeric k not 0 or 1 and canonical non-Add rest."""
    if type(rest) is Mul:  # rest has coefficient 1 by the pair invariant
        return mul(Numeric(k), rest)
    return Mul(k, (_split_factor(rest),))


# ------------------------------------------------------ product construction


def mul(*factors) -> Expr:
    return _mul_factors([lift(f) for f in factors])


def _mul_factors(factors) -> Expr:
    overall = _NUM_ONE
    bucket: dict[Expr, Number] = {}
    for f in factors:
        tf = type(f)
        if tf is Numeric:
            overall = num_mul(overall, f.value)
        elif tf is Mul:
            overall = num_mul(overall, f.coeff)
            for b, k in f.pairs:
                _bucket_merge(bucket, b, k)
        else:
            b, k = _split_factor(f)
            _bucket_merge(bucket, b, k)
    if overall.is_zero() and overall.is_exact():
        return ZERO
    # rebuild until stable: merged exponents may collapse powers, which in
    # turn may release numeric factors or new bases
    while True:
        changed = False
        newbucket: dict[Expr, Number] = {}
        for b, k in bucket.items():
            if k.is_zero():
                changed = True
                continue
            p = b if k.is_one() else power(b, Numeric(k))
            tp = type(p)
            if tp is Numeric:
                overall = num_mul(overall, p.value)
                changed = True
            elif tp is Mul:
                overall = num_mul(overall, p.coeff)
                for b2, k2 in p.pairs:
                    if b2 in newbucket:
                        changed = True
                    _bucket_merge(newbucket, b2, k2)
                changed = True
            elif tp is Power and type(p.exponent) is Numeric and type(p.base) is not Numeric:
                if compare(p.base, b) != 0 or num_cmp(p.exponent.value, k) != 0:
                    changed = True
                if p.base in newbucket:
                    changed = True
                _bucket_merge(newbucket, p.base, p.exponent.value)
            else:
                b2, k2 = _split_factor(p)
                if compare(b2, b) != 0 or num_cmp(k2, k) != 0:
                    changed = True
                if b2 in newbucket:
                    changed = True
                _bucket_merge(newbucket, b2, k2)
        bucket = newbucket
        if overall.is_zero() and overall.is_exact():
            return ZERO
        if not changed:
            break
    pairs = [(b, k) for b, k in bucket.items() if not k.is_zero()]
    if overall.is_zero():  # float zero: contaminate but collapse
        return Numeric(overall)
    if not pairs:
        return Numeric(overall)
    _sort_pairs(pairs)
    if len(pairs) == 1:
        b, k = pairs[0]
        if overall.is_one():
            return b if k.is_one() else Power(b, Numeric(k))
        if type(b) is Add and k.is_one():
            # distribute a numeric coefficient over a lone sum
            return Add(
                num_mul(overall, b.coeff),
                tuple((r, num_mul(overall, kk)) for r, kk in b.pairs),
            )
    return Mul(overall, tuple(pairs))


def _split_factor(f):
    """Write a non-numeric, non-Mul factor as base ** key with numeric key."""
    if (
        type(f) is Power
        and type(f.exponent) is Numeric
        and type(f.base) is not Numeric
    ):
        return f.base, f.exponent.value
    return f, _NUM_ONE


# -------------------------------------------------------- power construction


def power(b, e) -> Expr:
    b, e = lift(b), lift(e)
    if type(e) is Numeric:
        ev = e.value
        if ev.is_zero() and ev.is_exact():
            return ONE  # includes 0^0 -> 1
        if ev.is_one():
            return b
        if type(b) is Numeric:
            return _numeric_power(b, e)
        if ev.is_integer():
            if type(b) is Power:
                return power(b.base, mul(b.exponent, e))
            if type(b) is Mul:
                n = e.value
                return _mul_factors(
                    [Numeric(num_pow(b.coeff, n))]
                    + [power(r, Numeric(num_mul(k, n))) for r, k in b.pairs]
                )
    return Power(b, e)


def _numeric_power(b: Numeric, e: Numeric) -> Expr:
    bv, ev = b.value, e.value
    if bv.is_exact() and ev.is_exact() and not ev.is_integer():
        # exact base, non-integer exact exponent: evaluate only when the
        # result is again rational, otherwise stay symbolic (sqrt 2)
        if bv.is_real() and ev.kind == "rat":
            fr = bv.as_fraction()
            if fr == 0:
                if ev.val > 0:
                    return ZERO
                raise ZeroDivisionError("zero to a negative power")
            if fr > 0:
                root = _exact_rational_root(fr, ev.val)
                if root is not None:
                    return Numeric(num(root))
        return Power(b, e)
    return Numeric(num_pow(bv, ev))


def _exact_rational_root(fr: Fraction, ex: Fraction) -> Fraction | None:
    a, bq = ex.numerator, ex.denominator
    rp = _iroot_exact(fr.numerator, bq)
    if rp is None:
        return None
    rq = _iroot_exact(fr.denominator, bq)
    if rq is None:
        return None
    return Fraction(rp, rq) ** a


def _iroot_exact(n: int, b: int) -> int | None:
    if n in (0, 1):
        return n
    x = 1 << ((n.bit_length() + b - 1) // b)
    while True:
        nx = ((b - 1) * x + n // x ** (b - 1)) // b
        if nx >= x:
            break
        x = nx
    return x if x**b == n else None


def sqrt(x) -> Expr:
    return power(x, Numeric(num(Fraction(1, 2))))


# ----------------------------------------------------- function application


def apply_function(fdef, args) -> Expr:
    """Build f(args) canonically: try the eval hook, then numeric args."""
    args = tuple(lift(a) for a in args)
    if len(args) != fdef.arity:
        raise DomainError(f"{fdef.name} expects {fdef.arity} argument(s), got {len(args)}")
    if fdef.eval_hook is not None:
        result = fdef.eval_hook(args)
        if result is not None:
            return lift(result)
    if (
        fdef.evalf_hook is not None
        and all(type(a) is Numeric for a in args)
        and any(not a.value.is_exact() for a in args)
    ):
        precs = []
        for a in args:
            v = a.value
            if v.kind == "float":
                precs.append(v.prec)
            elif v.kind == "cplx":
                precs.extend(p.prec for p in (v.re, v.im) if p.kind == "float")
        p = min(precs)
        return Numeric(fdef.evalf_hook([a.value for a in args], p))
    return FunctionApp(fdef, args)


# ------------------------------------------------------------- substitution


def _normalize_bindings(bindings) -> dict[int, tuple[Symbol, Expr]]:
    if isinstance(bindings, Relational):
        bindings = [bindings]
    elif isinstance(bindings, dict):
        bindings = list(bindings.items())
    table: dict[int, tuple[Symbol, Expr]] = {}
    for item in bindings:
        if isinstance(item, Relational):
            if item.op != "==":
                raise UnsupportedPatternError("substitution wants '==' relations")
            lhs, rhs = item.lhs, item.rhs
        else:
            lhs, rhs = item
            lhs = lift(lhs)
        if type(lhs) is not Symbol:
            raise UnsupportedPatternError(
                f"substitution left-hand side must be a symbol, got {to_string(lhs)}"
            )
        table[lhs.serial] = (lhs, lift(rhs))
    return table


def subs(e: Expr, bindings) -> Expr:
    """Simultaneous substitution of symbols; rebuilds canonically."""
    table = _normalize_bindings(bindings)
    if not table:
        return e
    cache: dict[int, Expr] = {}

    def walk(x: Expr) -> Expr:
        got = cache.get(id(x))
        if got is not None:
            return got
        t = type(x)
        if t is Symbol:
            pair = table.get(x.serial)
            out = x if pair is None else pair[1]
        elif t is Numeric or t is Constant:
            out = x
        elif t is Add:
            out = _add_terms(
                [Numeric(x.coeff)]
                + [_scaled_expr(walk(r), k) for r, k in x.pairs]
            )
        elif t is Mul:
            out = _mul_factors(
                [Numeric(x.coeff)]
                + [power(walk(r), Numeric(k)) for r, k in x.pairs]
            )
        elif t is Power:
            out = power(walk(x.base), walk(x.exponent))
        elif t is FunctionApp:
            out = apply_function(x.fdef, [walk(a) for a in x.args])
        elif t is PSeriesNode:
            if x.var.serial in table:
                raise UnsupportedPatternError("cannot substitute a series variable")
            out = pseries(x.var, walk(x.point), [(walk(c), k) for c, k in x.terms], x.order)
        elif t is Relational:
            out = Relational(walk(x.lhs), walk(x.rhs), x.op)
        elif t is ExprList:
            out = ExprList([walk(a) for a in x.items])
        elif t is MatrixNode:
            out = MatrixNode(x.rows, x.cols, [walk(a) for a in x.entries])
        else:
            raise DomainError(f"cannot substitute into {t.__name__}")
        cache[id(x)] = out
        return out

    return walk(e)


def _scaled_expr(r: Expr, k: Number) -> Expr:
    return r if k.is_one() else mul(Numeric(k), r)


# ----------------------------------------------------------- differentiation


def diff(e: Expr, x, n: int = 1) -> Expr:
    if not isinstance(x, Symbol):
        raise DomainError("diff needs a symbol to differentiate by")
    if not isinstance(n, int) or n < 0:
        raise DomainError("diff order must be a nonnegative integer")
    for _ in range(n):
        e = _diff1(e, x)
    return e


def _diff1(e: Expr, x: Symbol) -> Expr:
    t = type(e)
    if t is Numeric or t is Constant:
        return ZERO
    if t is Symbol:
        return ONE if e.serial == x.serial else ZERO
    if t is Add:
        return _add_terms([_scaled_expr(_diff1(r, x), k) for r, k in e.pairs])
    if t is Mul:
        total = []
        pairs = e.pairs
        for i, (r, k) in enumerate(pairs):
            dr = _diff1(r, x)
            if dr.is_zero():
                continue
            rest = [power(rr, Numeric(kk)) for j, (rr, kk) in enumerate(pairs) if j != i]
            total.append(
                _mul_factors(
                    [Numeric(e.coeff), Numeric(k), power(r, Numeric(num_add(k, num(-1)))), dr]
                    + rest
                )
            )
        return _add_terms(total)
    if t is Power:
        b, ex = e.base, e.exponent
        db = _diff1(b, x)
        if type(ex) is Numeric:
            return _mul_factors([ex, power(b, Numeric(num_add(ex.value, num(-1)))), db])
        de = _diff1(ex, x)
        from .functions import log

        pieces = []
        if not de.is_zero():
            pieces.append(mul(de, log(b)))
        if not db.is_zero():
            pieces.append(mul(ex, db, power(b, -1)))
        return mul(e, add(*pieces)) if pieces else ZERO
    if t is FunctionApp:
        hook = e.fdef.diff_hook
        parts = []
        for i, a in enumerate(e.args):
            da = _diff1(a, x)
            if da.is_zero():
                continue
            # only a dependence on x needs the rule; constants have
            # derivative zero whether or not one is registered
            if hook is None:
                raise UnevaluatedDerivativeError(
                    f"function {e.fdef.name} has no derivative rule"
                )
            parts.append(mul(hook(e.args, i), da))
        return add(*parts)
    if t is PSeriesNode:
        if e.var.serial == x.serial:
            terms = [(mul(c, k), k - 1) for c, k in e.terms if k != 0]
            order = None if e.order is None else e.order - 1
            return pseries(e.var, e.point, terms, order)
        terms = [(_diff1(c, x), k) for c, k in e.terms]
        return pseries(e.var, e.point, terms, e.order)
    raise DomainError(f"cannot differentiate {t.__name__}")


# ----------------------------------------------------------------- expansion


def expand(e: Expr) -> Expr:
    cache: dict[int, Expr] = {}

    def walk(x: Expr) -> Expr:
        got = cache.get(id(x))
        if got is not None:
            return got
        t = type(x)
        if t in (Numeric, Symbol, Constant):
            out = x
        elif t is Add:
            out = _add_terms(
                [Numeric(x.coeff)] + [_scaled_expr(walk(r), k) for r, k in x.pairs]
            )
        elif t is Mul:
            termlists = [[Numeric(x.coeff)]]
            for r, k in x.pairs:
                termlists.append(_expand_power_terms(walk(r), k))
            acc = termlists[0]
            for tl in termlists[1:]:
                if len(tl) == 1:
                    acc = [_mul_factors([a, tl[0]]) for a in acc]
                else:
                    acc = [_mul_factors([a, b]) for a in acc for b in tl]
            out = _add_terms(acc)
        elif t is Power:
            base = walk(x.base)
            exponent = walk(x.exponent)
            if (
                type(exponent) is Numeric
                and exponent.value.is_integer()
                and exponent.value.val > 1
                and type(base) is Add
            ):
                out = _add_terms(_expand_power_terms(base, exponent.value))
            else:
                out = power(base, exponent)
        elif t is FunctionApp:
            out = apply_function(x.fdef, [walk(a) for a in x.args])
        elif t is PSeriesNode:
            out = pseries(x.var, walk(x.point), [(walk(c), k) for c, k in x.terms], x.order)
        elif t is Relational:
            out = Relational(walk(x.lhs), walk(x.rhs), x.op)
        elif t is ExprList:
            out = ExprList([walk(a) for a in x.items])
        elif t is MatrixNode:
            out = MatrixNode(x.rows, x.cols, [walk(a) for a in x.entries])
        else:
            raise DomainError(f"cannot expand {t.__name__}")
        cache[id(x)] = out
        return out

    return walk(e)


def _expand_power_terms(base: Expr, k: Number) -> list[Expr]:
    """Terms of base**k when that distributes, else a one-element list."""
    entity = power(base, Numeric(k))
    if k.is_integer() and k.val > 0 and type(base) is Add:
        n = k.val
        square = _terms_of(base)
        result = None
        while True:
            if n & 1:
                result = square if result is None else _cross(result, square)
            n >>= 1
            if not n:
                break
            square = _cross(square, square)
        return result
    if type(entity) is Add:
        return _terms_of(entity)
    return [entity]


def _cross(xs: list[Expr], ys: list[Expr]) -> list[Expr]:
    merged = _add_terms([_mul_factors([a, b]) for a in xs for b in ys])
    return _terms_of(merged)


def _terms_of(e: Expr) -> list[Expr]:
    if type(e) is Add:
        out = [_scaled_expr(r, k) for r, k in e.pairs]
        if not e.coeff.is_zero():
            out.append(Numeric(e.coeff))
        return out
    return [e]


# ------------------------------------------------------- numeric evaluation


def evalf(e: Expr, prec: int = DEFAULT_DPS) -> Expr:
    check_precision(prec)
    cache: dict[int, Expr] = {}
    keep = []  # walked nodes include fresh pair entities; pin their ids

    def f(v: Number) -> Number:
        return num_to_float(v, prec) if v.is_exact() else v

    def walk(x: Expr) -> Expr:
        got = cache.get(id(x))
        if got is not None:
            return got
        t = type(x)
        if t is Numeric:
            out = Numeric(f(x.value))
        elif t is Constant:
            out = Numeric(x.fixed if x.fixed is not None else x.digits(prec))
        elif t is Symbol:
            out = x
        elif t is Add:
            out = _add_terms(
                [Numeric(f(x.coeff))]
                + [walk(_scaled_expr(r, k)) for r, k in x.pairs]
            )
        elif t is Mul:
            out = _mul_factors(
                [walk(r if k.is_one() else power(r, Numeric(k))) for r, k in x.pairs]
                + [Numeric(f(x.coeff))]
            )
        elif t is Power:
            out = power(walk(x.base), walk(x.exponent))
        elif t is FunctionApp:
            out = apply_function(x.fdef, [walk(a) for a in x.args])
        elif t is PSeriesNode:
            out = pseries(x.var, x.point, [(walk(c), k) for c, k in x.terms], x.order)
        elif t is Relational:
            out = Relational(walk(x.lhs), walk(x.rhs), x.op)
        elif t is ExprList:
            out = ExprList([walk(a) for a in x.items])
        elif t is MatrixNode:
            out = MatrixNode(x.rows, x.cols, [walk(a) for a in x.entries])
        else:
            raise DomainError(f"cannot evaluate {t.__name__} numerically")
        cache[id(x)] = out
        keep.append(x)
        return out

    return walk(e)


# ----------------------------------------------------------------- pseries


def pseries(var, point, terms, order: int | None) -> PSeriesNode:
    """Canonical series node: sorted exponents, zero coeffs dropped,
    terms at or beyond the order cut removed."""
    if type(var) is not Symbol:
        raise DomainError("series variable must be a symbol")
    point = lift(point)
    clean = []
    for c, k in terms:
        c = lift(c)
        if not isinstance(k, int) or isinstance(k, bool):
            raise DomainError("series exponents must be integers")
        if c.is_zero():
            continue
        if order is not None and k >= order:
            continue
        if var in free_symbols(c):
            raise DomainError("series coefficient depends on the series variable")
        clean.append((c, k))
    clean.sort(key=lambda ck: ck[1])
    for (_, k1), (_, k2) in zip(clean, clean[1:]):
        if k1 == k2:
            raise DomainError("duplicate series exponent")
    return PSeriesNode(var, point, tuple(clean), order)


# ----------------------------------------------------------------- printing

_PREC_ADD = 10
_PREC_MUL = 20
_PREC_POWER = 30
_PREC_ATOM = 40


def to_string(e: Expr) -> str:
    return _render(e, 0)


def _render(e: Expr, parent: int) -> str:
    t = type(e)
    if t is Numeric:
        v = e.value
        s = str(v)
        if parent > _PREC_ADD and (v.kind == "cplx" or v.is_negative() or v.kind == "rat"):
            if parent >= _PREC_POWER or v.kind == "cplx" or v.is_negative():
                return f"({s})"
        return s
    if t is Symbol or t is Constant:
        return e.name
    if t is Add:
        s = _render_sum(
            ([str(e.coeff)] if not e.coeff.is_zero() else [])
            + [_render_term(r, k) for r, k in e.pairs]
        )
        return f"({s})" if parent > _PREC_ADD else s
    if t is Mul:
        s = _render_product(e)
        return f"({s})" if parent > _PREC_MUL else s
    if t is Power:
        base = _render(e.base, _PREC_POWER + 1)
        exponent = _render_exponent(e.exponent)
        s = f"{base}^{exponent}"
        return f"({s})" if parent > _PREC_POWER else s
    if t is FunctionApp:
        args = ",".join(_render(a, 0) for a in e.args)
        return f"{e.fdef.name}({args})"
    if t is PSeriesNode:
        return _render_series(e, parent)
    if t is Relational:
        return f"{_render(e.lhs, 0)}{e.op}{_render(e.rhs, 0)}"
    if t is ExprList:
        return "[" + ",".join(_render(a, 0) for a in e.items) + "]"
    if t is MatrixNode:
        rows = e.row_list()
        return "[" + ",".join("[" + ",".join(_render(a, 0) for a in row) + "]" for row in rows) + "]"
    return f"<{t.__name__}>"


def _render_sum(parts: list[str]) -> str:
    out = []
    for p in parts:
        if out and not p.startswith("-"):
            out.append("+")
        out.append(p)
    return "".join(out) if out else "0"


def _render_term(r: Expr, k: Number) -> str:
    if k.is_one():
        return _render(r, _PREC_MUL)
    if num_cmp(k, num(-1)) == 0:
        return "-" + _render(r, _PREC_MUL)
    ks = str(k)
    if k.kind == "cplx" and not k.re.is_zero():
        ks = f"({ks})"
    return f"{ks}*{_render(r, _PREC_MUL)}"


def _render_product(e: Mul) -> str:
    parts = []
    coeff = e.coeff
    neg = False
    if not coeff.is_one():
        if coeff.is_real() and num_cmp(coeff, num(-1)) == 0:
            neg = True
        else:
            ks = str(coeff)
            if coeff.kind == "cplx" and not coeff.re.is_zero():
                ks = f"({ks})"
            parts.append(ks)
    for r, k in e.pairs:
        if k.is_one():
            parts.append(_render(r, _PREC_MUL + 1))
        else:
            parts.append(f"{_render(r, _PREC_POWER + 1)}^{_render_exponent(Numeric(k))}")
    s = "*".join(parts)
    return "-" + s if neg else s


def _render_exponent(x: Expr) -> str:
    if type(x) is Numeric:
        v = x.value
        if v.is_integer() and v.val >= 0:
            return str(v)
        return f"({v})"
    if type(x) in (Symbol, Constant, FunctionApp):
        return _render(x, _PREC_ATOM)
    return f"({_render(x, 0)})"


def _render_series(e: PSeriesNode, parent: int) -> str:
    x = e.var if e.point.is_zero() else add(e.var, mul(-1, e.point))
    xs = _render(x, _PREC_POWER + 1)
    parts = []
    for c, k in e.terms:
        if k == 0:
            mono = None
        elif k == 1:
            mono = xs
        else:
            mono = f"{xs}^{_render_exponent(lift(k))}"
        if mono is None:
            parts.append(_render(c, _PREC_ADD))
        elif c.is_one():
            parts.append(mono)
        elif c == lift(-1):
            parts.append("-" + mono)
        elif type(c) is Numeric:
            cs = str(c.value)
            if c.value.kind == "cplx" and not c.value.re.is_zero():
                cs = f"({cs})"
            parts.append(f"{cs}*{mono}")
        else:
            cs = _render(c, _PREC_MUL)
            parts.append(f"{cs}*{mono}")
    if e.order is not None:
        if e.order == 1:
            parts.append(f"O({xs})")
        else:
            parts.append(f"O({xs}^{_render_exponent(lift(e.order))})")
    s = _render_sum(parts)
    return f"({s})" if parent > _PREC_ADD and (len(parts) > 1) else s


# ------------------------------------------------------------------ helpers


def free_symbols(e: Expr) -> set[Symbol]:
    # shared subtrees are visited once; without the seen set the walk is
    # exponential on the reuse-heavy trees series arithmetic builds
    out: set[Symbol] = set()
    seen: set[int] = set()
    stack = [e]
    while stack:
        x = stack.pop()
        if id(x) in seen:
            continue
        seen.add(id(x))
        t = type(x)
        if t is Symbol:
            out.add(x)
        elif t is Add or t is Mul:
            stack.extend(r for r, _ in x.pairs)
        elif t is Power:
            stack.append(x.base)
            stack.append(x.exponent)
        elif t is FunctionApp:
            stack.extend(x.args)
        elif t is PSeriesNode:
            stack.append(x.var)
            stack.append(x.point)
            stack.extend(c for c, _ in x.terms)
        elif t is Relational:
            stack.append(x.lhs)
            stack.append(x.rhs)
        elif t is ExprList:
            stack.extend(x.items)
        elif t is MatrixNode:
            stack.extend(x.entries)
    return out


def symbols(names: str) -> tuple[Symbol, ...]:
    """symbols("x y z") -> three fresh symbols."""
    parts = names.replace(",", " ").split()
    return tuple(Symbol(p) for p in parts)


def Eq(lhs, rhs) -> Relational:
    return Relational(lift(lhs), lift(rhs), "==")


def rel(lhs, op: str, rhs) -> Relational:
    return Relational(lift(lhs), lift(rhs), op)


def _const_digits(mp_name: str):
    def digits(p: int) -> Number:
        bits = dps_to_prec(p)
        with mpmath.workprec(bits):
            value = +getattr(mpmath, mp_name)
        return Number("float", value._mpf_, p)

    return digits


Pi = Constant("Pi", digits=_const_digits("pi"))
Euler = Constant("Euler", digits=_const_digits("euler"))
Catalan = Constant("Catalan", digits=_const_digits("catalan"))
I = Numeric(IUNIT)
