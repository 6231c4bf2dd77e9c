"""Exact rational arithmetic helpers shared by all modules.

Everything in this package computes with exact rationals.  The values that
appear in practice are dyadic (grid coordinates, displacement scales), so
`fractions.Fraction` stays fast; `gmpy2.mpq` is used transparently when
available because the pivoting modules can grow large numerators.
"""

from fractions import Fraction

try:  # pragma: no cover - environment dependent
    from gmpy2 import mpq as _mpq

    def QQ(a=0, b=1):
        return _mpq(a, b)
except ImportError:  # pragma: no cover
    def QQ(a=0, b=1):
        return Fraction(a, b)

# Rational constructor used throughout.  Accepts ints, Fractions, "p/q"
# strings and (num, den) pairs.
def rat(a, b=None):
    if b is not None:
        return QQ(a) / QQ(b)
    if isinstance(a, str):
        if "/" in a:
            p, q = a.split("/")
            return QQ(int(p), int(q))
        return QQ(int(a))
    return QQ(a) * QQ(1)


ZERO = rat(0)
ONE = rat(1)


def rat_str(x):
    """Render a rational as 'p/q' (or 'p' when integral)."""
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return "%d/%d" % (f.numerator, f.denominator)


def clip01(x):
    """Clip a rational into [0, 1]."""
    if x < 0:
        return ZERO
    if x > 1:
        return ONE
    return x


def vec(*xs):
    return tuple(rat(x) for x in xs)


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a):
    return tuple(c * x for x in a)


def vdot(a, b):
    return sum((x * y for x, y in zip(a, b)), ZERO)


def linf(a):
    return max((abs(x) for x in a), default=ZERO)


def linf_dist(a, b):
    return linf(vsub(a, b))


def solve_linear(A, b):
    """Solve A x = b exactly by fraction-free Gaussian elimination.

    A is a list of rows (rationals), b a list.  Returns the solution list,
    or None when A is singular.
    """
    n = len(A)
    M = [list(row) + [bi] for row, bi in zip(A, b)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if M[r][col] != 0:
                piv = r
                break
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        inv = M[col][col]
        for r in range(n):
            if r == col:
                continue
            f = M[r][col] / inv
            if f == 0:
                continue
            for c in range(col, n + 1):
                M[r][c] -= f * M[col][c]
    return [M[i][n] / M[i][i] for i in range(n)]


def null_direction(A):
    """One-dimensional kernel direction of a 3x4 matrix, or None.

    Uses the signed 3x3 minors: u_i = (-1)^i * det(A without column i).
    Returns a 4-vector (all-zero means rank < 3).
    """
    def det3(cols):
        (a, b, c), (d, e, f), (g, h, i) = [
            [A[r][cc] for cc in cols] for r in range(3)
        ]
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)

    u = []
    sign = 1
    for skip in range(4):
        cols = [c for c in range(4) if c != skip]
        u.append(sign * det3(cols))
        sign = -sign
    if all(x == 0 for x in u):
        return None
    return tuple(u)
