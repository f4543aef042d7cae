"""Exact linear algebra on rationals and symbols.

Hilbert matrices are the classic stress test: tiny determinants, huge
inverse entries, everything exact.  The same routines take symbolic
entries, so a characteristic polynomial falls out of the determinant
and a parametric system keeps its parameter through elimination.
"""

from minicas import (
    Eq,
    Symbol,
    add,
    hilbert,
    mat_charpoly,
    mat_det,
    mat_inverse,
    mat_mul,
    matrix,
    mul,
    solve_linear,
    to_string,
)


def main():
    h4 = hilbert(4)
    print("det H4  =", to_string(mat_det(h4)))
    print("H4^-1   =", to_string(mat_inverse(h4)))
    print("check   =", to_string(mat_mul(h4, mat_inverse(h4))))

    lam = Symbol("lambda")
    m = matrix([[1, 3], [-3, 2]])
    print("charpoly:", to_string(mat_charpoly(m, lam)))

    x, y, z, a = Symbol("x"), Symbol("y"), Symbol("z"), Symbol("a")
    eqs = [
        Eq(add(x, y, z), 6),
        Eq(add(x, mul(-1, y)), a),
        Eq(add(y, z), 4),
    ]
    print("lsolve  :", to_string(solve_linear(eqs, [x, y, z])))


if __name__ == "__main__":
    main()
