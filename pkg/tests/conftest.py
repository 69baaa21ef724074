import itertools
from fractions import Fraction

from parabolic_lattice.lattice import diagonal, direct_sum, hyperbolic_plane, make_lattice

U = hyperbolic_plane()
U2_M2 = make_lattice([[0, 2, 0], [2, 0, 0], [0, 0, -2]])
U_M2 = direct_sum(U, diagonal(-2))
D2 = diagonal(2, -2)
D3 = diagonal(2, -2, -4)

# every rank <= 3 lattice used by the oracle comparisons
SMALL_LATTICES = {
    "U": U,
    "U+<-2>": U_M2,
    "U(2)+<-2>": U2_M2,
    "<2>+<-2>": D2,
    "<2>+<-2>+<-4>": D3,
    "<-4>": diagonal(-4),
    "<2>+<2>": diagonal(2, 2),
    "diag(1,1,-1)": diagonal(1, 1, -1),
    "U(3)+<6>": make_lattice([[0, 3, 0], [3, 0, 0], [0, 0, 6]]),
    "skew3": make_lattice([[2, 1, 0], [1, -2, 1], [0, 1, 0]]),
}


def naive_q(gram, v):
    return sum(v[i] * gram[i][j] * v[j] for i in range(len(v)) for j in range(len(v)))


def naive_isotropic(gram, height):
    """Full box search, no cleverness."""
    from math import gcd
    from functools import reduce

    n = len(gram)
    out = []
    for v in itertools.product(range(-height, height + 1), repeat=n):
        if not any(v) or reduce(gcd, v) != 1:
            continue
        first = next(x for x in v if x)
        if first < 0:
            continue
        if naive_q(gram, v) == 0:
            out.append(v)
    return sorted(out)


def frac(s):
    return Fraction(s)
