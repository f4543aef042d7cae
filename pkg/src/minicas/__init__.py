"""minicas: a small symbolic computation kernel.

Exact arithmetic (integers, rationals, arbitrary-precision floats,
complex values built from them), canonical immutable expression trees,
multivariate polynomial GCDs and normal forms, truncated Laurent
series, symbolic functions with deferred evaluation, exact linear
algebra, a statement shell, and a digest-checked benchmark harness.

The package namespace re-exports the working vocabulary; the modules
remain importable on their own for the internals each one documents.
"""

from .bench import (
    CSV_HEADER,
    BenchRecord,
    bench_run,
    default_size,
    fnv1a64,
    registered_ids,
)
from .errors import (
    DomainError,
    NoUniqueSolutionError,
    ParseError,
    PoleError,
    RegistrationError,
    SeriesError,
    ShapeError,
    SingularMatrixError,
    UnevaluatedDerivativeError,
    UnsupportedPatternError,
)
from .expr import (
    Add,
    Catalan,
    Constant,
    Eq,
    Euler,
    Expr,
    ExprList,
    FunctionApp,
    I,
    MatrixNode,
    Mul,
    Numeric,
    Pi,
    Power,
    PSeriesNode,
    Relational,
    Symbol,
    add,
    apply_function,
    compare,
    diff,
    evalf,
    expand,
    free_symbols,
    lift,
    mul,
    power,
    pseries,
    rel,
    sqrt,
    subs,
    symbols,
    to_string,
)
from .functions import (
    FunctionDef,
    cos,
    exp,
    factorial,
    fn_apply,
    fn_lookup,
    fn_register,
    gamma,
    log,
    psi,
    registered_names,
    sin,
    zeta,
)
from .matrices import (
    hilbert,
    identity,
    mat_charpoly,
    mat_det,
    mat_inverse,
    mat_mul,
    matrix,
    solve_linear,
)
from .numbers import (
    DEFAULT_DPS,
    Number,
    bernoulli,
    from_decimal,
    num,
    num_to_float,
)
from .parser import Command, ParsedInput, parse, parse_expr
from .poly import (
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
from .series import (
    ps_add,
    ps_exp,
    ps_mul,
    ps_pow,
    ps_to_expr,
    series_coeff,
    series_of,
)
from .shell import Shell, repl, run_script

__version__ = "0.1.0"

__all__ = [
    "Add",
    "BenchRecord",
    "CSV_HEADER",
    "Catalan",
    "Command",
    "Constant",
    "DEFAULT_DPS",
    "DomainError",
    "Eq",
    "Euler",
    "Expr",
    "ExprList",
    "FunctionApp",
    "FunctionDef",
    "I",
    "MatrixNode",
    "Mul",
    "NoUniqueSolutionError",
    "Number",
    "Numeric",
    "PSeriesNode",
    "ParseError",
    "ParsedInput",
    "Pi",
    "PoleError",
    "Power",
    "RegistrationError",
    "Relational",
    "SeriesError",
    "ShapeError",
    "Shell",
    "SingularMatrixError",
    "Symbol",
    "UnevaluatedDerivativeError",
    "UnsupportedPatternError",
    "add",
    "apply_function",
    "bench_run",
    "bernoulli",
    "coeff",
    "collect",
    "compare",
    "content_primpart",
    "cos",
    "default_size",
    "degree",
    "diff",
    "evalf",
    "exact_quotient",
    "exp",
    "expand",
    "factorial",
    "fn_apply",
    "fn_lookup",
    "fn_register",
    "fnv1a64",
    "free_symbols",
    "from_decimal",
    "gamma",
    "heur_gcd",
    "hilbert",
    "identity",
    "lcm",
    "ldegree",
    "lift",
    "log",
    "mat_charpoly",
    "mat_det",
    "mat_inverse",
    "mat_mul",
    "matrix",
    "mul",
    "normal",
    "num",
    "num_to_float",
    "parse",
    "parse_expr",
    "poly_gcd",
    "power",
    "ps_add",
    "ps_exp",
    "ps_mul",
    "ps_pow",
    "ps_to_expr",
    "pseries",
    "psi",
    "registered_ids",
    "registered_names",
    "rel",
    "repl",
    "run_script",
    "series_coeff",
    "series_of",
    "sin",
    "solve_linear",
    "sqrt",
    "sr_gcd",
    "subs",
    "symbols",
    "to_string",
    "zeta",
]
