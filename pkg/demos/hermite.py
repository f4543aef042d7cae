"""The Hermite polynomial walk-through, end to end.

H_n(z) = (-1)^n e^(z^2) (d/dz)^n e^(-z^2).  The derivative produces a
polynomial multiple of the kernel, and normal cancels the kernel again,
so the whole identity runs on exact arithmetic.
"""

from fractions import Fraction

from minicas import Symbol, diff, evalf, exp, lift, mul, normal, power, subs, to_string


def hermite(n, z):
    ker = exp(mul(-1, power(z, 2)))
    return normal(mul((-1) ** n, diff(ker, z, n), power(ker, -1)))


def main():
    z = Symbol("z")
    for n in (1, 2, 3, 5):
        print(f"H_{n}(z) = {to_string(hermite(n, z))}")

    h11 = hermite(11, z)
    print()
    print("H_11(z) =", to_string(h11))
    print("H_11(4/5) =", to_string(subs(h11, {z: lift(Fraction(4, 5))})))
    print("H_11(0.8) =", to_string(evalf(subs(h11, {z: lift(0.8)}))))


if __name__ == "__main__":
    main()
