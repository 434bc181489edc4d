"""Built-in example algebras and a few classical finite-dimensional ones."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Tuple

from .algebra import Algebra, AssocConformal, DMap, sign
from .constructions import SuperAlgebraFD, cur
from .kernel.poly import D, ONE, ZERO, Poly, X


def virasoro_ns(f: Poly = ONE, g: Poly = ONE) -> Algebra:
    """Rank-2 example on L (even), E (odd); ``alpha = diag(f, g)``, ``beta = id``."""
    x = X(1)
    half, three_halves = Fraction(1, 2), Fraction(3, 2)
    table = {
        (0, 0): (D + 2 * x, ZERO),
        (0, 1): (ZERO, D + three_halves * x),
        (1, 0): (ZERO, half * D + three_halves * x),
    }
    return Algebra(("L", "E"), ("even", "odd"), table,
                   DMap.diagonal([Poly.coerce(f), Poly.coerce(g)]), DMap.identity(2))


def ex25() -> Algebra:
    """Rank-3 example: e1 even and central, e2/e3 odd, ``[e2_x e3] = [e3_x e2] = e1``.

    ``alpha`` swaps e2 and e3, ``beta`` swaps them with a sign.
    """
    e1 = (ONE, ZERO, ZERO)
    alpha = DMap([(ONE, ZERO, ZERO), (ZERO, ZERO, ONE), (ZERO, ONE, ZERO)])
    beta = DMap([(ONE, ZERO, ZERO), (ZERO, ZERO, -ONE), (ZERO, -ONE, ZERO)])
    return Algebra(("e1", "e2", "e3"), ("even", "odd", "odd"), {(1, 2): e1, (2, 1): e1}, alpha, beta)


def matrix_superalgebra(m: int, n: int) -> SuperAlgebraFD:
    """Associative superalgebra Mat(m|n) on elementary matrices ``E_ij``."""
    size = m + n
    par = lambda i: 0 if i < m else 1  # noqa: E731
    names, pars, index = [], [], {}
    for i in range(size):
        for j in range(size):
            index[(i, j)] = len(names)
            names.append(f"E{i + 1}{j + 1}")
            pars.append((par(i) + par(j)) % 2)
    dim = len(names)
    consts = {}
    for (i, j), a in index.items():
        for (k, l), b in index.items():
            if j == k:
                v = [0] * dim
                v[index[(i, l)]] = 1
                consts[(a, b)] = v
    return SuperAlgebraFD(names, pars, consts)


def supercommutator(A: SuperAlgebraFD) -> SuperAlgebraFD:
    """Lie superalgebra ``[a, b] = ab - (-1)^{|a||b|} ba`` (maps carried over)."""
    n = A.dim
    consts = {}
    for i in range(n):
        for j in range(n):
            ab = A.mul(A.basis(i), A.basis(j))
            ba = A.mul(A.basis(j), A.basis(i))
            s = sign(A.parities[i] * A.parities[j])
            v = [x - s * y for x, y in zip(ab, ba)]
            if any(v):
                consts[(i, j)] = v
    return SuperAlgebraFD(A.names, A.parities, consts, A.alpha, A.beta)


def gl11() -> SuperAlgebraFD:
    return supercommutator(matrix_superalgebra(1, 1))


def cur_gl11() -> Algebra:
    return cur(gl11())


def sl2() -> SuperAlgebraFD:
    # [h,e]=2e, [h,f]=-2f, [e,f]=h
    c = {(0, 1): [0, 2, 0], (1, 0): [0, -2, 0], (0, 2): [0, 0, -2], (2, 0): [0, 0, 2],
         (1, 2): [1, 0, 0], (2, 1): [-1, 0, 0]}
    return SuperAlgebraFD(("h", "e", "f"), ("even",) * 3, c)


def odd_heisenberg() -> SuperAlgebraFD:
    """``[y1, y2] = [y2, y1] = z`` with z even central and y1, y2 odd."""
    return SuperAlgebraFD(("z", "y1", "y2"), ("even", "odd", "odd"), {(1, 2): [1, 0, 0], (2, 1): [1, 0, 0]})


def dual_numbers(odd: bool = False) -> SuperAlgebraFD:
    """``Q[eps]/(eps^2)`` with eps even (or odd: then it is a Grassmann algebra on one generator)."""
    return SuperAlgebraFD(("one", "eps"), ("even", "odd" if odd else "even"),
                          {(0, 0): [1, 0], (0, 1): [0, 1], (1, 0): [0, 1]})


def grassmann2() -> SuperAlgebraFD:
    """Exterior algebra on two odd generators: basis 1, t1, t2, t1t2."""
    names = ("one", "t1", "t2", "t12")
    pars = ("even", "odd", "odd", "even")
    c = {}
    for i in range(4):
        c[(0, i)] = [1 if k == i else 0 for k in range(4)]
        c[(i, 0)] = [1 if k == i else 0 for k in range(4)]
    c[(1, 2)] = [0, 0, 0, 1]
    c[(2, 1)] = [0, 0, 0, -1]
    return SuperAlgebraFD(names, pars, c)


def scalars() -> SuperAlgebraFD:
    return SuperAlgebraFD(("one",), ("even",), {(0, 0): [1]})


def transport(A: Algebra, P: DMap) -> Algebra:
    """Same algebra written in the basis ``e'_i = P(e_i)`` (P invertible, even)."""
    Pi = P.inverse()
    if Pi is None:
        raise ValueError("basis change must be invertible over Q[d]")
    n = A.rank
    new = [P.images[i] for i in range(n)]
    table = [[Pi(A.bracket(new[i], new[j])) for j in range(n)] for i in range(n)]
    alpha = Pi.compose(A.alpha).compose(P)
    beta = Pi.compose(A.beta).compose(P)
    return type(A)(A.names, A.parities, table, alpha, beta)


def transport_fd(g: SuperAlgebraFD, P) -> SuperAlgebraFD:
    """Scalar basis change for a finite-dimensional superalgebra."""
    if not isinstance(P, DMap):
        P = DMap.from_matrix(P)
    Pi = P.inverse()
    if Pi is None or P.degree() > 0:
        raise ValueError("need an invertible scalar basis change")
    n = g.dim
    cols = [g.apply(P, g.basis(i)) for i in range(n)]
    consts = {}
    for i in range(n):
        for j in range(n):
            v = g.apply(Pi, g.mul(cols[i], cols[j]))
            if any(v):
                consts[(i, j)] = v
    return SuperAlgebraFD(g.names, g.parities, consts, Pi.compose(g.alpha).compose(P),
                          Pi.compose(g.beta).compose(P))


def twist_fd(g: SuperAlgebraFD, a: DMap, b: DMap) -> SuperAlgebraFD:
    """Scalar Yau twist ``[x, y]' = [a x, b y]`` with maps (a, b)."""
    n = g.dim
    consts = {}
    for i in range(n):
        for j in range(n):
            v = g.mul(g.apply(a, g.basis(i)), g.apply(b, g.basis(j)))
            if any(v):
                consts[(i, j)] = v
    return SuperAlgebraFD(g.names, g.parities, consts, a, b)


BUILTINS = {
    "virasoro_ns": virasoro_ns,
    "ex25": ex25,
    "cur_gl11": cur_gl11,
}
