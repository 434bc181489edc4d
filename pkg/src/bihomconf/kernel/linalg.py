"""Exact linear algebra over Q and over the univariate ring Q[D]."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .poly import ONE, ZERO, Poly

Row = Dict[int, Fraction]


class _Echelon:
    """Incremental sparse row reduction (fully reduced, fixed pivoting)."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: Dict[int, Row] = {}  # pivot column -> row with 1 at pivot

    def reduce(self, row: Row) -> Row:
        row = {c: v for c, v in row.items() if v}
        # pivot rows are zero on every other pivot column, so one pass suffices
        for p in [c for c in row if c in self.pivots]:
            f = row.get(p)
            if not f:
                continue
            for cc, vv in self.pivots[p].items():
                s = row.get(cc, 0) - f * vv
                if s:
                    row[cc] = s
                else:
                    row.pop(cc, None)
        return row

    def add(self, row: Row) -> bool:
        row = self.reduce(row)
        if not row:
            return False
        p = min(row)
        inv = 1 / row[p]
        row = {c: v * inv for c, v in row.items()}
        for q, other in self.pivots.items():
            f = other.get(p)
            if f:
                for cc, vv in row.items():
                    s = other.get(cc, 0) - f * vv
                    if s:
                        other[cc] = s
                    else:
                        other.pop(cc, None)
        self.pivots[p] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def kernel(self) -> List[List[Fraction]]:
        free = [c for c in range(self.ncols) if c not in self.pivots]
        basis = []
        for fcol in free:
            v = [Fraction(0)] * self.ncols
            v[fcol] = Fraction(1)
            for p, row in self.pivots.items():
                v[p] = -row.get(fcol, 0)
            basis.append(v)
        return basis


def _to_rows(m: Sequence[Sequence]) -> List[Row]:
    return [{j: Fraction(x) for j, x in enumerate(r) if x} for r in m]


def rref_kernel(m: Sequence[Sequence], ncols: Optional[int] = None) -> Tuple[List[List[Fraction]], int]:
    """Exact nullspace basis and rank of a rational matrix."""
    if ncols is None:
        ncols = len(m[0]) if m else 0
    ech = _Echelon(ncols)
    for r in _to_rows(m):
        ech.add(r)
    return ech.kernel(), ech.rank


def solve_affine(m: Sequence[Sequence], rhs: Sequence, ncols: Optional[int] = None):
    """Solve ``m x = rhs`` exactly.

    Returns ``None`` when inconsistent, else ``(particular, kernel_basis)``.
    """
    if len(m) != len(rhs):
        raise ValueError(f"dimension mismatch: {len(m)} rows vs rhs of length {len(rhs)}")
    if ncols is None:
        ncols = len(m[0]) if m else 0
    if any(len(r) != ncols for r in m):
        raise ValueError("ragged matrix")
    rows = _to_rows(m)
    for r, b in zip(rows, rhs):
        if b:
            r[ncols] = Fraction(b)
    return solve_sparse(rows, ncols)


def solve_sparse(rows: Sequence[Row], ncols: int):
    """Rows are ``{col: value}``; column ``ncols`` holds the right-hand side."""
    ech = _Echelon(ncols + 1)
    for r in rows:
        ech.add(dict(r))
    if ncols in ech.pivots:
        return None
    particular = [Fraction(0)] * ncols
    for p, row in ech.pivots.items():
        particular[p] = row.get(ncols, Fraction(0))
    kernel = [v[:ncols] for v in ech.kernel() if v[ncols] == 0]
    return particular, kernel


class LinearSystem:
    """Collects homogeneous linear constraints keyed by arbitrary hashable ids.

    Each unknown contributes a "column" given as a mapping ``key -> coefficient``;
    equations are the keys.  Used by every solver: the residual of a linear
    identity is evaluated once per ansatz basis element.
    """

    def __init__(self, nunknowns: int):
        self.n = nunknowns
        self._eqs: Dict[Hashable, Row] = {}

    def add_column_entries(self, col: int, entries: Dict[Hashable, Fraction]):
        for key, val in entries.items():
            if val:
                self._eqs.setdefault(key, {})[col] = Fraction(val)

    def add_rhs(self, entries: Dict[Hashable, Fraction]):
        for key, val in entries.items():
            if val:
                self._eqs.setdefault(key, {})[self.n] = Fraction(val)

    def rows(self) -> List[Row]:
        return [self._eqs[k] for k in sorted(self._eqs, key=repr)]

    def kernel(self) -> List[List[Fraction]]:
        ech = _Echelon(self.n)
        for r in self.rows():
            ech.add({c: v for c, v in r.items() if c < self.n})
        return ech.kernel()

    def solve(self):
        return solve_sparse(self.rows(), self.n)


# --- matrices over Q[D] ------------------------------------------------------

PolyMatrix = List[List[Poly]]


def pm_identity(n: int) -> PolyMatrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def pm_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = ZERO
            for t in range(k):
                if not a[i][t].is_zero() and not b[t][j].is_zero():
                    s = s + a[i][t] * b[t][j]
            row.append(s)
        out.append(row)
    return out


def pm_equal(a: PolyMatrix, b: PolyMatrix) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def pm_power(a: PolyMatrix, k: int) -> PolyMatrix:
    out = pm_identity(len(a))
    for _ in range(k):
        out = pm_mul(out, a)
    return out


def hermite_rows(rows: Sequence[Sequence[Poly]], track: bool = False):
    """Row echelon (Hermite) form over Q[D] by Euclidean row reduction.

    Pivot selection is by minimal D-degree; pivots are made monic and
    entries above pivots are reduced modulo the pivot.  Returns the nonzero
    rows (and the unimodular transform ``U`` with ``U*rows = H`` if
    ``track``).
    """
    rows = [list(r) for r in rows]
    nr = len(rows)
    ncols = len(rows[0]) if rows else 0
    U = pm_identity(nr) if track else None
    r0 = 0
    pivots = []
    for c in range(ncols):
        while True:
            cand = [i for i in range(r0, nr) if not rows[i][c].is_zero()]
            if not cand:
                break
            piv = min(cand, key=lambda i: (rows[i][c].degree(), i))
            if piv != r0:
                rows[piv], rows[r0] = rows[r0], rows[piv]
                if track:
                    U[piv], U[r0] = U[r0], U[piv]
            done = True
            for i in range(r0 + 1, nr):
                if rows[i][c].is_zero():
                    continue
                q, _ = rows[i][c].divmod_d(rows[r0][c])
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r0])]
                if track:
                    U[i] = [x - q * y for x, y in zip(U[i], U[r0])]
                if not rows[i][c].is_zero():
                    done = False
            if done:
                break
        if r0 < nr and not rows[r0][c].is_zero():
            _, lead = rows[r0][c].leading_d()
            inv = 1 / lead
            rows[r0] = [x * inv for x in rows[r0]]
            if track:
                U[r0] = [x * inv for x in U[r0]]
            for i in range(r0):
                if rows[i][c].is_zero():
                    continue
                q, _ = rows[i][c].divmod_d(rows[r0][c])
                if not q.is_zero():
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[r0])]
                    if track:
                        U[i] = [x - q * y for x, y in zip(U[i], U[r0])]
            pivots.append(c)
            r0 += 1
            if r0 == nr:
                break
    H = rows[:r0]
    if track:
        return H, pivots, U
    return H, pivots


def hnf_membership(gens: Sequence[Sequence[Poly]], v: Sequence[Poly]) -> bool:
    """Is ``v`` in the Q[D]-span of ``gens``?"""
    if all(x.is_zero() for x in v):
        return True
    if not gens:
        return False
    H, pivots = hermite_rows(gens)
    v = list(v)
    piv_of = dict(zip(pivots, H))
    for c in range(len(v)):
        if v[c].is_zero():
            continue
        if c not in piv_of:
            return False
        row = piv_of[c]
        q, r = v[c].divmod_d(row[c])
        if not r.is_zero():
            return False
        v = [x - q * y for x, y in zip(v, row)]
    return True


def pm_inverse(m: PolyMatrix) -> Optional[PolyMatrix]:
    """Inverse over Q[D] (exists iff det is a nonzero constant), else None."""
    n = len(m)
    if n == 0:
        return []
    H, pivots, U = hermite_rows(m, track=True)
    if len(H) != n or pivots != list(range(n)):
        return None
    for i in range(n):
        for j in range(n):
            want = ONE if i == j else ZERO
            if H[i][j] != want:
                return None
    return U


def pm_det(m: PolyMatrix) -> Poly:
    """Determinant by Laplace expansion along the sparsest row (small ranks)."""
    n = len(m)
    if n == 0:
        return ONE
    if n == 1:
        return m[0][0]
    r = min(range(n), key=lambda i: sum(1 for x in m[i] if not x.is_zero()))
    total = ZERO
    for j in range(n):
        if m[r][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for k, row in enumerate(m) if k != r]
        term = m[r][j] * pm_det(minor)
        total = total + term if (r + j) % 2 == 0 else total - term
    return total
