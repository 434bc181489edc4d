"""BiHom-conformal modules over a bracket-table algebra."""
from __future__ import annotations

from typing import Optional, Sequence

from .algebra import (Algebra, CheckReport, DMap, Vec, _check_table_entries, conformal_product,
                      parse_parity, render_vector, sign)
from .kernel.poly import D, ONE, ZERO, Poly, X, unit, vadd, vscale, vsub, vzero


class RepModule:
    """Module ``(M, phi, psi)`` with action table ``rho[i][u]`` (algebra gen i, module gen u)."""

    def __init__(self, algebra: Algebra, names, parities, rho_table, phi: Optional[DMap] = None,
                 psi: Optional[DMap] = None):
        self.algebra = algebra
        self.names = tuple(names)
        self.parities = tuple(parse_parity(p) for p in parities)
        self.rank = n = len(self.names)
        self.phi = phi if phi is not None else DMap.identity(n)
        self.psi = psi if psi is not None else DMap.identity(n)
        r = algebra.rank
        if isinstance(rho_table, dict):
            rows = [[vzero(n) for _ in range(n)] for _ in range(r)]
            for (i, u), v in rho_table.items():
                rows[i][u] = tuple(Poly.coerce(c) for c in v)
        else:
            rows = [[tuple(Poly.coerce(c) for c in rho_table[i][u]) for u in range(n)] for i in range(r)]
        self.rho_table = tuple(tuple(row) for row in rows)

    def gen(self, i, coeff: Poly = ONE) -> Vec:
        if isinstance(i, str):
            i = self.names.index(i)
        return unit(self.rank, i, coeff)

    def zero(self) -> Vec:
        return vzero(self.rank)

    def rho(self, a: Sequence[Poly], m: Sequence[Poly], lam: Poly = None) -> Vec:
        """``rho(a)_lam m``."""
        lam = X(1) if lam is None else lam
        if len(a) != self.algebra.rank or len(m) != self.rank:
            raise ValueError("dimension mismatch")
        return conformal_product(self.rho_table, a, m, lam, self.rank)

    def render(self, vec, slot_names=None) -> str:
        return render_vector(vec, self.names, slot_names)

    def is_regular(self) -> bool:
        return self.phi.is_invertible() and self.psi.is_invertible()

    def check(self) -> CheckReport:
        return check_module(self.algebra, self)

    def __repr__(self):
        return f"RepModule({', '.join(self.names)} over {self.algebra!r})"


def check_module(A: Algebra, M: RepModule) -> CheckReport:
    report = CheckReport(names=M.names)
    n, r = M.rank, A.rank
    phi, psi = M.phi, M.psi
    for u in range(n):
        report.add("3.2", (M.names[u],), vsub(phi(psi(M.gen(u))), psi(phi(M.gen(u)))), "phi psi commute")
    for nm, m in (("phi", phi), ("psi", psi)):
        for u in range(n):
            bad = tuple(c if M.parities[w] != M.parities[u] else ZERO for w, c in enumerate(m.images[u]))
            report.add("even", (M.names[u],), bad, f"{nm} must be even")
    _check_table_entries(M.rho_table, n, A.parities, M.parities, M.parities, report, A.names, M.names)
    for nm, mm, am in (("phi", phi, A.alpha), ("psi", psi, A.beta)):
        for i in range(r):
            for u in range(n):
                a, m = A.gen(i), M.gen(u)
                res = vsub(mm(M.rho(a, m)), M.rho(am(a), mm(m)))
                report.add("3.3", (A.names[i], M.names[u]), res, f"{nm} intertwines rho")
    lam, mu = X(1), X(2)
    al, be = A.alpha, A.beta
    for i in range(r):
        for j in range(r):
            for u in range(n):
                a, b, m = A.gen(i), A.gen(j), M.gen(u)
                lhs = M.rho(A.bracket(be(a), b, lam), psi(m), lam + mu)
                t1 = M.rho(al(be(a)), M.rho(b, m, mu), lam)
                t2 = M.rho(be(b), M.rho(al(a), m, lam), mu)
                s = sign(A.parities[i] * A.parities[j])
                res = vsub(vsub(lhs, t1), vscale(-s, t2))
                report.add("3.4", (A.names[i], A.names[j], M.names[u]), res, "composition law")
    return report


def adjoint_module(A: Algebra) -> RepModule:
    return RepModule(A, A.names, A.parities, A.table, A.alpha, A.beta)


def trivial_module(A: Algebra, names=("m",), parities=("even",), phi=None, psi=None) -> RepModule:
    n = len(names)
    return RepModule(A, names, parities, {}, phi or DMap.identity(n), psi or DMap.identity(n))


def zero_module(A: Algebra) -> RepModule:
    return RepModule(A, (), (), {}, DMap([], 0), DMap([], 0))
