"""Builders turning verified inputs into new BiHom-Lie conformal superalgebras.

Every builder checks its hypotheses first and raises :class:`HypothesisError`
(carrying the failing identities) instead of silently building.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from .algebra import (Algebra, AssocConformal, CheckReport, DMap, Vec, block_diag, parse_parity,
                      sign)
from .kernel.poly import D, ONE, ZERO, Poly, X, unit, vadd, vscale, vsub, vzero
from .representations import RepModule


class HypothesisError(ValueError):
    def __init__(self, message: str, report: Optional[CheckReport] = None):
        super().__init__(message)
        self.report = report


class SuperAlgebraFD:
    """Finite-dimensional superalgebra with scalar structure constants.

    ``consts[(i, j)]`` is the coordinate vector of ``[x_i, x_j]`` (or of the
    product ``x_i x_j`` when used as a commutative associative algebra).
    """

    def __init__(self, names, parities, consts: Dict[Tuple[int, int], Sequence], alpha=None, beta=None):
        self.names = tuple(names)
        self.parities = tuple(parse_parity(p) for p in parities)
        n = self.dim = len(self.names)
        self.consts = {}
        for (i, j), v in consts.items():
            v = tuple(Fraction(c) for c in v)
            if len(v) != n:
                raise ValueError("structure constant vector of wrong length")
            if any(v):
                self.consts[(i, j)] = v
        self.alpha = self._scalar_map(alpha, n)
        self.beta = self._scalar_map(beta, n)

    @staticmethod
    def _scalar_map(m, n) -> DMap:
        if m is None:
            return DMap.identity(n)
        if not isinstance(m, DMap):
            m = DMap.from_matrix(m)
        if m.degree() > 0:
            raise ValueError("maps of a finite-dimensional superalgebra must be scalar")
        return m

    def mul(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        out = [Fraction(0)] * self.dim
        for (i, j), v in self.consts.items():
            c = x[i] * y[j]
            if c:
                for k in range(self.dim):
                    out[k] += c * v[k]
        return tuple(out)

    def basis(self, i: int) -> Tuple[Fraction, ...]:
        return tuple(Fraction(1 if k == i else 0) for k in range(self.dim))

    def apply(self, m: DMap, x) -> Tuple[Fraction, ...]:
        return tuple(c.const_value() for c in m(tuple(Poly.const(c) for c in x)))

    def _common(self, report: CheckReport):
        n = self.dim
        for i in range(n):
            e = self.basis(i)
            ab = self.apply(self.alpha, self.apply(self.beta, e))
            ba = self.apply(self.beta, self.apply(self.alpha, e))
            report.add("commute", (self.names[i],), _pv(_sub(ab, ba)))
        for nm, m in (("alpha", self.alpha), ("beta", self.beta)):
            if not m.is_even(self.parities, self.parities):
                report.violations.append(_scalar_violation("even", (nm,)))
        for (i, j), v in self.consts.items():
            bad = [c if self.parities[k] != (self.parities[i] + self.parities[j]) % 2 else 0 for k, c in enumerate(v)]
            report.add("grading", (self.names[i], self.names[j]), _pv(bad))
        for nm, m in (("alpha", self.alpha), ("beta", self.beta)):
            for i in range(n):
                for j in range(n):
                    x, y = self.basis(i), self.basis(j)
                    res = _sub(self.apply(m, self.mul(x, y)), self.mul(self.apply(m, x), self.apply(m, y)))
                    report.add("multiplicative", (self.names[i], self.names[j]), _pv(res), nm)

    def check_bihom_lie(self) -> CheckReport:
        """Scalar BiHom-Lie superalgebra axioms (independent of the conformal checker)."""
        report = CheckReport(names=self.names)
        self._common(report)
        a, b, n, p = self.alpha, self.beta, self.dim, self.parities
        ap = lambda m, x: self.apply(m, x)  # noqa: E731
        for i in range(n):
            for j in range(n):
                x, y = self.basis(i), self.basis(j)
                res = _add(self.mul(ap(b, x), ap(a, y)), _scale(sign(p[i] * p[j]), self.mul(ap(b, y), ap(a, x))))
                report.add("skew", (self.names[i], self.names[j]), _pv(res))
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    x, y, z = self.basis(i), self.basis(j), self.basis(k)
                    lhs = self.mul(ap(a, ap(b, x)), self.mul(y, z))
                    t1 = self.mul(self.mul(ap(b, x), y), ap(b, z))
                    t2 = self.mul(ap(b, y), self.mul(ap(a, x), z))
                    res = _sub(_sub(lhs, t1), _scale(sign(p[i] * p[j]), t2))
                    report.add("jacobi", (self.names[i], self.names[j], self.names[k]), _pv(res))
        return report

    def check_commutative_associative(self) -> CheckReport:
        report = CheckReport(names=self.names)
        self._common(report)
        n, p = self.dim, self.parities
        for i in range(n):
            for j in range(n):
                x, y = self.basis(i), self.basis(j)
                res = _sub(self.mul(x, y), _scale(sign(p[i] * p[j]), self.mul(y, x)))
                report.add("supercommutative", (self.names[i], self.names[j]), _pv(res))
                for k in range(n):
                    z = self.basis(k)
                    res = _sub(self.mul(self.mul(x, y), z), self.mul(x, self.mul(y, z)))
                    report.add("associative", (self.names[i], self.names[j], self.names[k]), _pv(res))
        return report


def _pv(v) -> Vec:
    return tuple(Poly.const(c) for c in v)


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _scale(c, u):
    return tuple(c * a for a in u)


def _scalar_violation(axiom, basis):
    from .algebra import Violation
    return Violation(axiom, basis, (ONE,), "scalar map parity")


def _require(report: CheckReport, what: str):
    if not report.ok:
        v = report.violations[0]
        raise HypothesisError(f"{what}: violated {v.axiom} at {v.basis}", report)


def _unique_names(a: Sequence[str], b: Sequence[str]) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    if not set(a) & set(b):
        return tuple(a), tuple(b)
    return tuple(f"{n}_1" for n in a), tuple(f"{n}_2" for n in b)


def cur(g: SuperAlgebraFD, check: bool = True) -> Algebra:
    """Current algebra: constant brackets ``[a_x b] = [a, b]`` on ``Q[D] (x) g``."""
    if check:
        _require(g.check_bihom_lie(), "cur needs a BiHom-Lie superalgebra")
    n = g.dim
    table = {(i, j): _pv(v) for (i, j), v in g.consts.items()}
    return Algebra(g.names, g.parities, table, g.alpha, g.beta)


def cur_associative(g: SuperAlgebraFD) -> AssocConformal:
    """Current associative conformal algebra ``a_x b = ab`` with g's maps."""
    table = {(i, j): _pv(v) for (i, j), v in g.consts.items()}
    return AssocConformal(g.names, g.parities, table, g.alpha, g.beta)


def _require_identity_maps(R: Algebra, what: str):
    if not (R.alpha.is_identity() and R.beta.is_identity()):
        raise HypothesisError(f"{what} needs alpha = beta = id")


def _morphism_report(R: Algebra, m: DMap, label: str, report: CheckReport):
    n = R.rank
    if not m.is_even(R.parities, R.parities):
        report.add("even", (label,), (ONE,), f"{label} must be even")
    for i in range(n):
        for j in range(n):
            ei, ej = R.gen(i), R.gen(j)
            res = vsub(m(R.bracket(ei, ej)), R.bracket(m(ei), m(ej)))
            report.add("multiplicative", (label, R.names[i], R.names[j]), res, label)


def _commute_report(R: Algebra, maps: Dict[str, DMap], report: CheckReport):
    items = list(maps.items())
    for x in range(len(items)):
        for y in range(x + 1, len(items)):
            (na, a), (nb, b) = items[x], items[y]
            for i in range(R.rank):
                e = R.gen(i)
                report.add("commute", (na, nb, R.names[i]), vsub(a(b(e)), b(a(e))))


def tensor_superalgebra(R: Algebra, B: SuperAlgebraFD, check: bool = True) -> Algebra:
    """``R (x) B`` with ``[(r(x)b)_x (r'(x)b')] = (-1)^{|b||r'|} [r_x r'] (x) bb'``."""
    _require_identity_maps(R, "tensor_superalgebra")
    if check:
        _require(B.check_commutative_associative(), "B must be supercommutative associative")
        _require(R.check(), "R must be a Lie conformal superalgebra")
    n, m = R.rank, B.dim
    names = tuple(f"{r}_{b}" for r in R.names for b in B.names)
    pars = tuple((pr + pb) % 2 for pr in R.parities for pb in B.parities)
    idx = lambda i, p: i * m + p  # noqa: E731
    table = {}
    for i in range(n):
        for p in range(m):
            for j in range(n):
                for q in range(m):
                    prod = B.mul(B.basis(p), B.basis(q))
                    if not any(prod):
                        continue
                    br = R.table[i][j]
                    s = sign(B.parities[p] * R.parities[j])
                    out = [ZERO] * (n * m)
                    for k in range(n):
                        if br[k].is_zero():
                            continue
                        for t in range(m):
                            if prod[t]:
                                out[idx(k, t)] = out[idx(k, t)] + br[k] * (s * prod[t])
                    table[(idx(i, p), idx(j, q))] = tuple(out)
    return Algebra(names, pars, table)


def yau_twist(R: Algebra, a: DMap, b: DMap) -> Algebra:
    """``[x_l y]' = [a(x)_l b(y)]`` with structure maps ``(a, b)``."""
    _require_identity_maps(R, "yau_twist")
    report = CheckReport(names=R.names)
    _commute_report(R, {"a": a, "b": b}, report)
    _morphism_report(R, a, "a", report)
    _morphism_report(R, b, "b", report)
    _require(report, "yau_twist hypotheses")
    n = R.rank
    table = [[R.bracket(a(R.gen(i)), b(R.gen(j))) for j in range(n)] for i in range(n)]
    return Algebra(R.names, R.parities, table, a, b)


def composition_twist(R: Algebra, a2: DMap, b2: DMap) -> Algebra:
    """Bracket ``[.,.] o (a2 (x) b2)`` with maps ``(alpha a2, beta b2)``."""
    report = CheckReport(names=R.names)
    _commute_report(R, {"alpha": R.alpha, "beta": R.beta, "a2": a2, "b2": b2}, report)
    _morphism_report(R, a2, "a2", report)
    _morphism_report(R, b2, "b2", report)
    _require(report, "composition_twist hypotheses")
    n = R.rank
    table = [[R.bracket(a2(R.gen(i)), b2(R.gen(j))) for j in range(n)] for i in range(n)]
    return Algebra(R.names, R.parities, table, R.alpha.compose(a2), R.beta.compose(b2))


def power_twist(R: Algebra, k: int) -> Algebra:
    """Bracket twisted by ``alpha^k (x) beta^k``; maps become ``alpha^(k+1), beta^(k+1)``."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return composition_twist(R, R.alpha.power(k), R.beta.power(k))


def direct_sum(R: Algebra, S: Algebra) -> Algebra:
    n, m = R.rank, S.rank
    rn, sn = _unique_names(R.names, S.names)
    table = {}
    for i in range(n):
        for j in range(n):
            table[(i, j)] = tuple(R.table[i][j]) + vzero(m)
    for i in range(m):
        for j in range(m):
            table[(n + i, n + j)] = vzero(n) + tuple(S.table[i][j])
    return Algebra(rn + sn, R.parities + S.parities, table,
                   block_diag(R.alpha, S.alpha), block_diag(R.beta, S.beta))


def from_associative(A: AssocConformal, check: bool = True) -> Algebra:
    """Super-commutator ``a_l b - (-1)^{|a||b|} a^-1 b(b)_{-l-D} a b^-1(a)``."""
    if check:
        _require(A.check(), "input must be BiHom-associative")
    ai, bi = A.alpha.inverse(), A.beta.inverse()
    if ai is None or bi is None:
        raise HypothesisError("from_associative needs invertible alpha and beta")
    left = ai.compose(A.beta)   # alpha^-1 beta
    right = A.alpha.compose(bi)  # alpha beta^-1
    n = A.rank
    table = {}
    for i in range(n):
        for j in range(n):
            ei, ej = A.gen(i), A.gen(j)
            t = A.product(ei, ej, X(1))
            s = sign(A.parities[i] * A.parities[j])
            u = A.product(left(ej), right(ei), -X(1) - D)
            table[(i, j)] = vsub(t, vscale(s, u))
    return Algebra(A.names, A.parities, table, A.alpha, A.beta)


def semidirect(R: Algebra, M: RepModule, check: bool = True) -> Algebra:
    """Semidirect product ``R x M`` with maps ``alpha + phi, beta + psi``."""
    if M.algebra is not R and not M.algebra.equals(R):
        raise HypothesisError("module is over a different algebra")
    if check:
        _require(R.check(), "R must be a BiHom-Lie conformal superalgebra")
        _require(M.check(), "M must be a module")
    ai, psii = R.alpha.inverse(), M.psi.inverse()
    if ai is None or psii is None:
        raise HypothesisError("semidirect needs invertible alpha and psi")
    twist_r = ai.compose(R.beta)   # alpha^-1 beta
    twist_m = M.phi.compose(psii)  # phi psi^-1
    n, m = R.rank, M.rank
    rn, mn = _unique_names(R.names, M.names)
    table = {}
    for i in range(n):
        for j in range(n):
            table[(i, j)] = tuple(R.table[i][j]) + vzero(m)
        for u in range(m):
            table[(i, n + u)] = vzero(n) + M.rho(R.gen(i), M.gen(u), X(1))
    for u in range(m):
        for j in range(n):
            s = sign(R.parities[j] * M.parities[u])
            v = M.rho(twist_r(R.gen(j)), twist_m(M.gen(u)), -D - X(1))
            table[(n + u, j)] = vzero(n) + vscale(-s, v)
    return Algebra(rn + mn, R.parities + M.parities, table,
                   block_diag(R.alpha, M.phi), block_diag(R.beta, M.psi))


def abelianization(R: Algebra) -> Algebra:
    """Same module and maps, zero bracket."""
    return Algebra(R.names, R.parities, {}, R.alpha, R.beta)


def cur_module(g: SuperAlgebraFD, names, parities, action: Dict[Tuple[int, int], Sequence],
               phi=None, psi=None, algebra: Optional[Algebra] = None) -> RepModule:
    """Module of ``Cur g`` from a module of g: ``rho(f(D) a)_l (h(D) m) = f(-l) h(D+l) a.m``.

    ``action[(i, u)]`` is the coordinate vector of ``x_i . m_u``.
    """
    A = algebra or cur(g, check=False)
    n = len(names)
    table = {(i, u): _pv(v) for (i, u), v in action.items()}
    phi = SuperAlgebraFD._scalar_map(phi, n)
    psi = SuperAlgebraFD._scalar_map(psi, n)
    return RepModule(A, names, parities, table, phi, psi)
