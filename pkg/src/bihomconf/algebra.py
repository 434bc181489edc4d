"""Finite free BiHom-Lie conformal superalgebras given by bracket tables.

An element of a free Q[D]-module of rank ``r`` is a length-``r`` tuple of
:class:`Poly`; ``D`` acts by multiplication.  A lambda-valued element simply
carries extra slot variables ``X1, X2, ...`` in its coefficients.  Bracket
tables hold, for each ordered pair of generators, a vector over ``D`` and the
single slot ``X1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .kernel.linalg import hnf_membership, pm_inverse
from .kernel.poly import D, ONE, ZERO, Poly, X, unit, vadd, vis_zero, vscale, vsub, vzero

EVEN, ODD = 0, 1
Vec = Tuple[Poly, ...]


def sign(e: int) -> int:
    return -1 if e % 2 else 1


def parse_parity(p) -> int:
    if p in (0, 1):
        return int(p)
    if p == "even":
        return EVEN
    if p == "odd":
        return ODD
    raise ValueError(f"bad parity {p!r}")


def parity_name(p: int) -> str:
    return "odd" if p % 2 else "even"


@lru_cache(maxsize=200_000)
def _slot_at(entry: Vec, lam: Poly) -> Vec:
    return tuple(c.subs({1: lam}) for c in entry)


@lru_cache(maxsize=200_000)
def _at(p: Poly, var: int, value: Poly) -> Poly:
    return p.subs({var: value})


def conformal_product(table, left: Sequence[Poly], right: Sequence[Poly], lam: Poly, target_rank: int) -> Vec:
    """Bilinear extension of a generator table by conformal sesquilinearity.

    ``[p(D) e_i  _lam  q(D) f_j] = p(-lam) q(D+lam) T_ij(lam, D)``.
    ``lam`` may itself contain ``D`` (as in ``-lam - D``), which is then a
    plain polynomial substitution on the free module.
    """
    out = [ZERO] * target_rank
    minus = -lam
    shifted = D + lam
    for i, p in enumerate(left):
        if p.is_zero():
            continue
        pl = _at(p, 0, minus)
        if pl.is_zero():
            continue
        row = table[i]
        for j, q in enumerate(right):
            if q.is_zero():
                continue
            entry = row[j]
            if entry is None:
                continue
            ev = _slot_at(entry, lam)
            c = pl * _at(q, 0, shifted)
            for k, e in enumerate(ev):
                if not e.is_zero():
                    out[k] = out[k] + c * e
    return tuple(out)


class DMap:
    """A Q[D]-linear map between free modules, stored as images of generators."""

    __slots__ = ("images", "target_rank")

    def __init__(self, images: Sequence[Sequence[Poly]], target_rank: Optional[int] = None):
        self.images = tuple(tuple(Poly.coerce(c) for c in im) for im in images)
        if target_rank is None:
            target_rank = len(self.images[0]) if self.images else 0
        self.target_rank = target_rank
        if any(len(im) != target_rank for im in self.images):
            raise ValueError("inconsistent image lengths")

    @classmethod
    def identity(cls, n: int) -> "DMap":
        return cls([unit(n, i) for i in range(n)], n)

    @classmethod
    def zero(cls, n: int, m: int) -> "DMap":
        return cls([vzero(m) for _ in range(n)], m)

    @classmethod
    def diagonal(cls, entries: Sequence) -> "DMap":
        n = len(entries)
        return cls([unit(n, i, Poly.coerce(c)) for i, c in enumerate(entries)], n)

    @classmethod
    def from_matrix(cls, m: Sequence[Sequence]) -> "DMap":
        """``m[j][i]`` is the coefficient of generator j in the image of generator i."""
        n = len(m[0]) if m else 0
        return cls([[Poly.coerce(m[j][i]) for j in range(len(m))] for i in range(n)], len(m))

    @property
    def source_rank(self) -> int:
        return len(self.images)

    def __call__(self, x: Sequence[Poly]) -> Vec:
        if len(x) != self.source_rank:
            raise ValueError(f"dimension mismatch: map on rank {self.source_rank}, element of rank {len(x)}")
        out = [ZERO] * self.target_rank
        for c, im in zip(x, self.images):
            if c.is_zero():
                continue
            for k, e in enumerate(im):
                if not e.is_zero():
                    out[k] = out[k] + c * e
        return tuple(out)

    def compose(self, other: "DMap") -> "DMap":
        """``self o other``."""
        return DMap([self(im) for im in other.images], self.target_rank)

    __matmul__ = compose

    def power(self, k: int) -> "DMap":
        if k < 0:
            inv = self.inverse()
            if inv is None:
                raise ValueError("map is not invertible")
            return inv.power(-k)
        out = DMap.identity(self.source_rank)
        for _ in range(k):
            out = self.compose(out)
        return out

    def matrix(self) -> List[List[Poly]]:
        return [[self.images[i][j] for i in range(self.source_rank)] for j in range(self.target_rank)]

    def inverse(self) -> Optional["DMap"]:
        inv = pm_inverse(self.matrix())
        return None if inv is None else DMap.from_matrix(inv)

    def is_invertible(self) -> bool:
        return self.source_rank == self.target_rank and self.inverse() is not None

    def is_identity(self) -> bool:
        return self == DMap.identity(self.source_rank)

    def is_even(self, src_par: Sequence[int], dst_par: Sequence[int]) -> bool:
        return all(
            e.is_zero() or src_par[i] == dst_par[j]
            for i, im in enumerate(self.images)
            for j, e in enumerate(im)
        )

    def degree(self) -> int:
        return max((e.degree() for im in self.images for e in im), default=-1)

    def __add__(self, other: "DMap") -> "DMap":
        return DMap([vadd(a, b) for a, b in zip(self.images, other.images)], self.target_rank)

    def __sub__(self, other: "DMap") -> "DMap":
        return DMap([vsub(a, b) for a, b in zip(self.images, other.images)], self.target_rank)

    def scale(self, c) -> "DMap":
        return DMap([vscale(c, a) for a in self.images], self.target_rank)

    def __eq__(self, other) -> bool:
        return isinstance(other, DMap) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self) -> str:
        return f"DMap({[[str(c) for c in im] for im in self.images]})"


def block_diag(a: DMap, b: DMap) -> DMap:
    n, m = a.target_rank, b.target_rank
    imgs = [tuple(im) + vzero(m) for im in a.images] + [vzero(n) + tuple(im) for im in b.images]
    return DMap(imgs, n + m)


@dataclass
class Violation:
    axiom: str
    basis: Tuple[str, ...]
    residual: Tuple[Poly, ...]
    detail: str = ""

    def render(self, names: Sequence[str]) -> str:
        return render_vector(self.residual, names)


@dataclass
class CheckReport:
    violations: List[Violation] = field(default_factory=list)
    checked: Dict[str, int] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    names: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, axiom: str, basis, residual, detail: str = ""):
        self.checked[axiom] = self.checked.get(axiom, 0) + 1
        if not vis_zero(residual):
            self.violations.append(Violation(axiom, tuple(basis), tuple(residual), detail))

    def count(self, axiom: str):
        self.checked[axiom] = self.checked.get(axiom, 0) + 1

    def by_axiom(self, axiom: str) -> List[Violation]:
        return [v for v in self.violations if v.axiom == axiom]

    def extend(self, other: "CheckReport", prefix: str = ""):
        for v in other.violations:
            self.violations.append(Violation(prefix + v.axiom, v.basis, v.residual, v.detail))
        for k, n in other.checked.items():
            self.checked[prefix + k] = self.checked.get(prefix + k, 0) + n
        self.notes.extend(other.notes)

    def to_dict(self, names: Optional[Sequence[str]] = None) -> dict:
        names = names or self.names
        return {
            "ok": self.ok,
            "checked": dict(sorted(self.checked.items())),
            "violations": [
                {
                    "axiom": v.axiom,
                    "basis": list(v.basis),
                    "detail": v.detail,
                    "residual": v.render(names),
                }
                for v in self.violations
            ],
            "notes": list(self.notes),
        }


def render_vector(vec: Sequence[Poly], names: Sequence[str], slot_names=None) -> str:
    parts = []
    for c, nm in zip(vec, names):
        if c.is_zero():
            continue
        s = c.to_str(slot_names)
        if s == "1":
            parts.append(nm)
        elif s == "-1":
            parts.append(f"-{nm}")
        elif len(c.terms) == 1 and "+" not in s[1:] and "-" not in s[1:]:
            parts.append(f"{s}*{nm}")
        else:
            parts.append(f"({s})*{nm}")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


def _check_table_entries(table, rank, par_left, par_right, par_out, report: CheckReport, names_left, names_right):
    for i in range(len(par_left)):
        for j in range(len(par_right)):
            entry = table[i][j]
            bad = tuple(
                c if (par_out[k] != (par_left[i] + par_right[j]) % 2) else ZERO
                for k, c in enumerate(entry)
            )
            report.add("grading", (names_left[i], names_right[j]), bad, "entry off the parity |i|+|j|")
            extra = {v for c in entry for v in c.variables()} - {0, 1}
            if extra:
                report.notes.append(f"table entry ({names_left[i]},{names_right[j]}) uses symbols beyond d, x")


class Algebra:
    """A BiHom-Lie conformal superalgebra: free of finite rank, bracket table on generators."""

    kind = "lie"

    def __init__(self, names, parities, table, alpha: Optional[DMap] = None, beta: Optional[DMap] = None):
        self.names = tuple(names)
        self.parities = tuple(parse_parity(p) for p in parities)
        n = len(self.names)
        if len(set(self.names)) != n:
            raise ValueError("generator names must be unique")
        self.rank = n
        self.alpha = alpha if alpha is not None else DMap.identity(n)
        self.beta = beta if beta is not None else DMap.identity(n)
        if self.alpha.source_rank != n or self.beta.source_rank != n:
            raise ValueError("alpha/beta rank mismatch")
        self.table = self._normalize_table(table, n)

    @staticmethod
    def _normalize_table(table, n):
        if isinstance(table, dict):
            rows = [[vzero(n) for _ in range(n)] for _ in range(n)]
            for (i, j), v in table.items():
                rows[i][j] = tuple(Poly.coerce(c) for c in v)
        else:
            rows = [[tuple(Poly.coerce(c) for c in table[i][j]) for j in range(n)] for i in range(n)]
        for r in rows:
            for v in r:
                if len(v) != n:
                    raise ValueError("table entry of wrong length")
        return tuple(tuple(r) for r in rows)

    # element helpers
    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown generator {name!r}") from None

    def gen(self, name_or_index, coeff: Poly = ONE) -> Vec:
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        return unit(self.rank, i, Poly.coerce(coeff))

    def element(self, coeffs: Dict[str, object]) -> Vec:
        out = vzero(self.rank)
        for nm, c in coeffs.items():
            out = vadd(out, self.gen(nm, Poly.coerce(c)))
        return out

    def zero(self) -> Vec:
        return vzero(self.rank)

    def render(self, vec, slot_names=None) -> str:
        return render_vector(vec, self.names, slot_names)

    def parity_of(self, vec: Sequence[Poly]) -> Optional[int]:
        ps = {self.parities[i] for i, c in enumerate(vec) if not c.is_zero()}
        if len(ps) == 1:
            return ps.pop()
        return None

    # operations
    def bracket(self, a: Sequence[Poly], b: Sequence[Poly], lam: Poly = None) -> Vec:
        if len(a) != self.rank or len(b) != self.rank:
            raise ValueError("basis mismatch")
        lam = X(1) if lam is None else lam
        return conformal_product(self.table, a, b, lam, self.rank)

    product = bracket

    def bracket_into(self, a: Sequence[Poly], v: Sequence[Poly], slot: int) -> Vec:
        """``[a_{X_slot} v]`` where ``v`` may already carry other slots."""
        used = {s for c in v for s in c.variables()}
        if slot in used:
            raise ValueError(f"slot x{slot} already in use")
        return self.bracket(a, v, X(slot))

    def nth_product(self, a, b, n: int) -> Vec:
        if n < 0:
            return self.zero()
        br = self.bracket(a, b, X(1))
        f = math.factorial(n)
        return tuple(c.coefficient(1, n) * f for c in br)

    def n_products(self, a, b) -> Dict[int, Vec]:
        br = self.bracket(a, b, X(1))
        top = max((c.degree_in(1) for c in br), default=-1)
        return {n: self.nth_product(a, b, n) for n in range(top + 1)}

    def is_regular(self) -> bool:
        return self.alpha.is_invertible() and self.beta.is_invertible()

    def max_table_degree(self) -> int:
        return max((c.degree() for r in self.table for v in r for c in v), default=-1)

    def with_table(self, table, alpha=None, beta=None, names=None, parities=None):
        return type(self)(names or self.names, parities or self.parities, table,
                          alpha or self.alpha, beta or self.beta)

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(self.names)})"

    def equals(self, other: "Algebra") -> bool:
        return (self.names == other.names and self.parities == other.parities and self.table == other.table
                and self.alpha == other.alpha and self.beta == other.beta)

    # checks
    def _check_maps(self, report: CheckReport):
        a, b = self.alpha, self.beta
        n = self.rank
        for i in range(n):
            report.add("2.1", (self.names[i],), vsub(a(b(self.gen(i))), b(a(self.gen(i)))), "alpha beta commute")
        for nm, m in (("alpha", a), ("beta", b)):
            for i in range(n):
                bad = tuple(c if self.parities[j] != self.parities[i] else ZERO for j, c in enumerate(m.images[i]))
                report.add("even", (self.names[i],), bad, f"{nm} must be even")
        _check_table_entries(self.table, n, self.parities, self.parities, self.parities, report, self.names, self.names)
        for nm, m in (("alpha", a), ("beta", b)):
            for i in range(n):
                for j in range(n):
                    ei, ej = self.gen(i), self.gen(j)
                    res = vsub(m(self.bracket(ei, ej)), self.bracket(m(ei), m(ej)))
                    report.add("2.2", (self.names[i], self.names[j]), res, f"{nm} multiplicative")

    def skew_residual(self, i: int, j: int) -> Vec:
        a, b = self.alpha, self.beta
        ei, ej = self.gen(i), self.gen(j)
        lhs = self.bracket(b(ei), a(ej), X(1))
        rhs = self.bracket(b(ej), a(ei), -X(1) - D)
        s = sign(self.parities[i] * self.parities[j])
        return vadd(lhs, vscale(s, rhs))

    def jacobi_residual(self, i: int, j: int, k: int) -> Vec:
        a, b = self.alpha, self.beta
        ei, ej, ek = self.gen(i), self.gen(j), self.gen(k)
        lam, mu = X(1), X(2)
        lhs = self.bracket(a(b(ei)), self.bracket(ej, ek, mu), lam)
        t1 = self.bracket(self.bracket(b(ei), ej, lam), b(ek), lam + mu)
        t2 = self.bracket(b(ej), self.bracket(a(ei), ek, lam), mu)
        s = sign(self.parities[i] * self.parities[j])
        return vsub(vsub(lhs, t1), vscale(s, t2))

    def check(self) -> CheckReport:
        report = CheckReport(names=self.names)
        self._check_maps(report)
        n = self.rank
        for i in range(n):
            for j in range(n):
                report.add("2.4", (self.names[i], self.names[j]), self.skew_residual(i, j), "BiHom skew-symmetry")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    report.add("2.5", (self.names[i], self.names[j], self.names[k]),
                               self.jacobi_residual(i, j, k), "BiHom-Jacobi")
        return report

    # substructures
    def _span_ok(self, gens, v) -> bool:
        return hnf_membership(gens, v)

    def _closed(self, gens: Sequence[Vec], lefts: Sequence[Vec]) -> bool:
        gens = [tuple(Poly.coerce(c) for c in g) for g in gens]
        for g in gens:
            if not g or len(g) != self.rank:
                raise ValueError("basis mismatch")
            if any(not c.only_vars((0,)) for c in g):
                raise ValueError("subspace generators must be polynomials in d only")
        for g in gens:
            for m in (self.alpha, self.beta):
                if not self._span_ok(gens, m(g)):
                    return False
        for a in lefts:
            for b in gens:
                br = self.bracket(a, b, X(1))
                top = max((c.degree_in(1) for c in br), default=-1)
                for n in range(top + 1):
                    if not self._span_ok(gens, tuple(c.coefficient(1, n) for c in br)):
                        return False
        return True

    def is_subalgebra(self, gens: Sequence[Vec]) -> bool:
        return self._closed(gens, gens)

    def is_ideal(self, gens: Sequence[Vec]) -> bool:
        """Left ideal: ``[a_x u]`` in U for every a in the algebra and u in U."""
        return self._closed(gens, [self.gen(i) for i in range(self.rank)])


class AssocConformal(Algebra):
    """BiHom-associative conformal superalgebra (no symmetry of the product)."""

    kind = "assoc"

    def assoc_residual(self, i: int, j: int, k: int) -> Vec:
        a, b = self.alpha, self.beta
        ei, ej, ek = self.gen(i), self.gen(j), self.gen(k)
        lam, mu = X(1), X(2)
        lhs = self.product(a(ei), self.product(ej, ek, mu), lam)
        rhs = self.product(self.product(ei, ej, lam), b(ek), lam + mu)
        return vsub(lhs, rhs)

    def check(self) -> CheckReport:
        report = CheckReport(names=self.names)
        self._check_maps(report)
        n = self.rank
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    report.add("1.8", (self.names[i], self.names[j], self.names[k]),
                               self.assoc_residual(i, j, k), "BiHom-associativity")
        return report


def check_algebra(A: Algebra) -> CheckReport:
    return A.check()


def check_associative(A: AssocConformal) -> CheckReport:
    return A.check()
