"""Random valid inputs for the builders, driven by ``random.Random(seed)``."""
from __future__ import annotations

import random
from fractions import Fraction

from bihomconf.algebra import Algebra, DMap
from bihomconf.constructions import SuperAlgebraFD, cur, cur_associative
from bihomconf.kernel.poly import D, ONE, ZERO, Poly
from bihomconf.library import (dual_numbers, gl11, grassmann2, matrix_superalgebra, odd_heisenberg,
                               scalars, sl2, supercommutator, transport, transport_fd, twist_fd,
                               virasoro_ns)


def nonzero(rng: random.Random, lo: int = -3, hi: int = 3) -> Fraction:
    c = 0
    while c == 0:
        c = rng.randint(lo, hi)
    return Fraction(c, rng.choice((1, 1, 2)))


def _scaling(n, rng):
    return [nonzero(rng) for _ in range(n)]


# Diagonal automorphism families: each returns the scalings of the basis.

def _gl11_aut(rng):
    t = nonzero(rng)
    return [1, t, 1 / t, 1]          # E11, E12, E21, E22


def _sl2_aut(rng):
    t = nonzero(rng)
    return [1, t, 1 / t]             # h, e, f


def _heis_aut(rng):
    s, t = nonzero(rng), nonzero(rng)
    return [s * t, s, t]             # z, y1, y2


def _mat_aut(size, rng):
    d = _scaling(size, rng)
    return [d[i] / d[j] for i in range(size) for j in range(size)]


LIE_BASES = {
    "gl11": (gl11, _gl11_aut),
    "sl2": (sl2, _sl2_aut),
    "odd_heisenberg": (odd_heisenberg, _heis_aut),
    "gl20": (lambda: supercommutator(matrix_superalgebra(2, 0)), lambda rng: _mat_aut(2, rng)),
}


def random_even_matrix(parities, rng: random.Random):
    """Invertible parity-preserving scalar matrix (unitriangular blocks times scalings)."""
    n = len(parities)
    while True:
        m = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            m[i][i] = nonzero(rng)
            for j in range(i + 1, n):
                if parities[i] == parities[j] and rng.random() < 0.5:
                    m[i][j] = Fraction(rng.randint(-2, 2))
        perm = list(range(n))
        rng.shuffle(perm)
        # only permute within a parity class
        if all(parities[perm[i]] == parities[i] for i in range(n)):
            m = [m[perm[i]] for i in range(n)]
        P = DMap.from_matrix(m)
        if P.is_invertible():
            return P


def random_unimodular(parities, rng: random.Random, max_deg: int = 1) -> DMap:
    """Invertible even Q[D]-map: product of elementary moves ``e_j += p(D) e_i``."""
    n = len(parities)
    P = DMap.identity(n)
    for _ in range(rng.randint(0, 2)):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j or parities[i] != parities[j]:
            continue
        p = Poly.const(rng.randint(-2, 2)) + rng.randint(-1, 1) * D ** rng.randint(1, max_deg)
        E = DMap([tuple(ONE if r == k else (p if (r, k) == (i, j) else ZERO) for r in range(n))
                  for k in range(n)])
        P = P.compose(E)
    return P


def random_lie_fd(rng: random.Random):
    """(g, automorphism sampler) for one of the base Lie superalgebras."""
    name = rng.choice(sorted(LIE_BASES))
    make, aut = LIE_BASES[name]
    return make(), aut


def random_bihom_fd(rng: random.Random) -> SuperAlgebraFD:
    """Yau twist of a Lie superalgebra by commuting diagonal automorphisms, then a basis change."""
    g, aut = random_lie_fd(rng)
    a = DMap.diagonal(aut(rng))
    b = DMap.diagonal(aut(rng)) if rng.random() < 0.7 else a
    t = twist_fd(g, a, b)
    return transport_fd(t, random_even_matrix(t.parities, rng))


def random_bihom(rng: random.Random) -> Algebra:
    """Random BiHom-Lie conformal superalgebra: current algebra, possibly in a Q[D]-basis."""
    A = cur(random_bihom_fd(rng), check=False)
    if rng.random() < 0.5:
        A = transport(A, random_unimodular(A.parities, rng))
    return A


def random_lie_conformal_with_auts(rng: random.Random):
    """(R, a, b): a Lie conformal superalgebra (identity maps) with two commuting automorphisms."""
    if rng.random() < 0.25:
        R = virasoro_ns()
        a = DMap.diagonal([1, rng.choice((1, -1))])
        b = DMap.diagonal([1, rng.choice((1, -1))])
        return R, a, b
    g, aut = random_lie_fd(rng)
    R = cur(g, check=False)
    a, b = DMap.diagonal(aut(rng)), DMap.diagonal(aut(rng))
    P = random_unimodular(R.parities, rng) if rng.random() < 0.5 else DMap.identity(R.rank)
    Pi = P.inverse()
    return transport(R, P), Pi.compose(a).compose(P), Pi.compose(b).compose(P)


def random_lie_conformal(rng: random.Random) -> Algebra:
    return random_lie_conformal_with_auts(rng)[0]


def random_supercommutative(rng: random.Random) -> SuperAlgebraFD:
    B = rng.choice((dual_numbers, lambda: dual_numbers(True), grassmann2, scalars))()
    if B.dim > 1 and rng.random() < 0.5:
        B = transport_fd(B, random_even_matrix(B.parities, rng))
    return B


def random_assoc(rng: random.Random):
    """BiHom-associative current conformal algebra from a twisted matrix superalgebra."""
    m, n = rng.choice(((1, 1), (2, 0), (1, 0), (0, 2)))
    size = m + n
    A = matrix_superalgebra(m, n)
    a = DMap.diagonal(_mat_aut(size, rng))
    b = DMap.diagonal(_mat_aut(size, rng))
    t = twist_fd(A, a, b)
    if rng.random() < 0.5:
        t = transport_fd(t, random_even_matrix(t.parities, rng))
    return cur_associative(t)
