"""Cochains, the differential, bounded-degree cochain solvers and O-operators."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import Algebra, CheckReport, DMap, Vec, conformal_product, sign
from .constructions import HypothesisError
from .kernel.linalg import LinearSystem
from .kernel.poly import (D, ONE, PARAM_BASE, ZERO, Poly, X, monomials, param, unit, vadd,
                          vis_zero, vscale, vsub, vzero)
from .representations import RepModule

Tup = Tuple[int, ...]


class Cochain:
    """An n-cochain stored by its values on n-tuples of algebra generators.

    ``table[(i1, ..., in)]`` is a module vector over ``D, X1..Xn`` (slot k is
    the lambda attached to argument k).  Missing tuples are zero.
    """

    def __init__(self, algebra: Algebra, module: RepModule, arity: int, parity: int,
                 table: Dict[Tup, Sequence[Poly]]):
        self.algebra, self.module = algebra, module
        self.arity, self.parity = arity, parity % 2
        clean = {}
        for t, v in table.items():
            if len(t) != arity:
                raise ValueError("tuple length differs from arity")
            v = tuple(Poly.coerce(c) for c in v)
            if not vis_zero(v):
                clean[tuple(t)] = v
        self.table = clean

    @classmethod
    def zero(cls, A, M, arity, parity=0):
        return cls(A, M, arity, parity, {})

    @classmethod
    def from_element(cls, A, M, m: Sequence[Poly], parity: Optional[int] = None):
        if parity is None:
            ps = {M.parities[u] for u, c in enumerate(m) if not c.is_zero()}
            parity = ps.pop() if len(ps) == 1 else 0
        return cls(A, M, 0, parity, {(): tuple(m)})

    def is_zero(self) -> bool:
        return not self.table

    def value(self, t: Tup) -> Vec:
        return self.table.get(tuple(t), vzero(self.module.rank))

    def evaluate(self, args: Sequence[Sequence[Poly]], slots: Optional[Sequence[Poly]] = None) -> Vec:
        """``gamma_{slots}(args)``, extended by conformal antilinearity in each argument."""
        n = self.arity
        if len(args) != n:
            raise ValueError(f"expected {n} arguments, got {len(args)}")
        if slots is None:
            slots = [X(k + 1) for k in range(n)]
        M = self.module
        if n == 0:
            return self.value(())
        supports = []
        for k, a in enumerate(args):
            nz = [(i, c.subs({0: -slots[k]})) for i, c in enumerate(a) if not c.is_zero()]
            nz = [(i, c) for i, c in nz if not c.is_zero()]
            if not nz:
                return vzero(M.rank)
            supports.append(nz)
        mapping = {k + 1: slots[k] for k in range(n)}
        out = [ZERO] * M.rank
        for combo in itertools.product(*supports):
            t = tuple(i for i, _ in combo)
            v = self.table.get(t)
            if v is None:
                continue
            coeff = ONE
            for _, c in combo:
                coeff = coeff * c
            for u, e in enumerate(v):
                if not e.is_zero():
                    out[u] = out[u] + coeff * e.subs(mapping)
        return tuple(out)

    def __add__(self, other: "Cochain") -> "Cochain":
        t = dict(self.table)
        for k, v in other.table.items():
            t[k] = vadd(t[k], v) if k in t else v
        return Cochain(self.algebra, self.module, self.arity, self.parity, t)

    def scale(self, c) -> "Cochain":
        return Cochain(self.algebra, self.module, self.arity, self.parity,
                       {k: vscale(c, v) for k, v in self.table.items()})

    def degree(self) -> int:
        return max((c.degree() for v in self.table.values() for c in v), default=-1)

    def render(self) -> Dict[str, str]:
        A, M = self.algebra, self.module
        return {",".join(A.names[i] for i in t) or "()": M.render(v) for t, v in sorted(self.table.items())}

    def __eq__(self, other):
        return isinstance(other, Cochain) and self.arity == other.arity and self.table == other.table


def _tuples(r: int, n: int) -> Iterable[Tup]:
    return itertools.product(range(r), repeat=n)


def check_cochain(gamma: Cochain) -> CheckReport:
    """Skew-symmetry on adjacent arguments and commutativity with the structure maps."""
    A, M, n = gamma.algebra, gamma.module, gamma.arity
    report = CheckReport(names=M.names)
    al, be = A.alpha, A.beta
    if n == 0:
        m = gamma.value(())
        report.add("commute", ("phi",), vsub(M.phi(m), m))
        report.add("commute", ("psi",), vsub(M.psi(m), m))
        return report
    slots = [X(k + 1) for k in range(n)]
    for t in _tuples(A.rank, n):
        gens = [A.gen(i) for i in t]
        label = tuple(A.names[i] for i in t)
        for mp, amap, nm in ((M.phi, al, "phi"), (M.psi, be, "psi")):
            res = vsub(gamma.evaluate([amap(g) for g in gens]), mp(gamma.evaluate(gens)))
            report.add("commute", label, res, nm)
        for p in range(n - 1):
            args = list(gens)
            args[p], args[p + 1] = be(gens[p]), al(gens[p + 1])
            lhs = gamma.evaluate(args, slots)
            args2 = list(gens)
            args2[p], args2[p + 1] = be(gens[p + 1]), al(gens[p])
            sw = list(slots)
            sw[p], sw[p + 1] = slots[p + 1], slots[p]
            rhs = gamma.evaluate(args2, sw)
            s = sign(A.parities[t[p]] * A.parities[t[p + 1]])
            report.add("skew", label, vadd(lhs, vscale(s, rhs)), f"positions {p + 1},{p + 2}")
    return report


@dataclass(frozen=True)
class DVariant:
    """Knobs of the differential, used by the finite variant search.

    The default is the literal transcription of the defining display:
    first-sum sign ``(-1)^{i+1} (-1)^{(|g| + A_i)|a_i|}``, acting element
    ``alpha beta^(n-1)(a_i)``, untwisted remaining arguments, and
    ``beta``-twisted remaining arguments in the second sum.
    """

    first_sign: str = "definition"   # or "proof": (-1)^{i+1+|g||a_i|+A_i}
    alpha_power: int = 1             # acting element alpha^p beta^(n-1+q)
    beta_shift: int = 0
    twist_first: str = "none"        # remaining args in the first sum: none | alpha | beta
    twist_second: str = "beta"       # remaining args in the second sum: none | alpha | beta
    zero_rule: str = "literal"       # n = 0: literal "(d g)_l a = a_l g" or "general"
    form: str = "display"            # "display" or "untwisted" (transport of the Lie conformal differential)

    def label(self) -> str:
        if self.form == "untwisted":
            return "untwisted transport of the Lie conformal differential"
        prefix = "literal: " if self == DVariant() else ""
        return prefix + (f"first_sign={self.first_sign}, rho(alpha^{self.alpha_power} beta^(n-1{self.beta_shift:+d})), "
                f"first_args={self.twist_first}, second_args={self.twist_second}, n0={self.zero_rule}")


LITERAL = DVariant()
UNTWISTED = DVariant(form="untwisted")


def _map_power(A: Algebra, p: int, q: int) -> DMap:
    return A.alpha.power(p).compose(A.beta.power(q))


def differential(A: Algebra, M: RepModule, gamma: Cochain, variant: DVariant = LITERAL) -> Cochain:
    """The coboundary ``d gamma`` (an (n+1)-cochain of the same parity)."""
    ainv = A.alpha.inverse()
    if ainv is None:
        raise HypothesisError("the differential needs an invertible alpha (regular algebra)")
    if variant.form == "untwisted":
        return _untwisted_differential(A, M, gamma)
    n = gamma.arity
    r = A.rank
    par = A.parities
    g = gamma.parity
    twist = {"none": DMap.identity(r), "alpha": A.alpha, "beta": A.beta}
    inner = ainv.compose(A.beta)
    table = {}
    if n == 0 and variant.zero_rule == "literal":
        m = gamma.value(())
        for i in range(r):
            table[(i,)] = M.rho(A.gen(i), m, X(1))
        return Cochain(A, M, 1, g, table)
    try:
        acting = _map_power(A, variant.alpha_power, n - 1 + variant.beta_shift)
    except ValueError:
        raise HypothesisError("the differential needs an invertible beta for this arity") from None
    t1, t2 = twist[variant.twist_first], twist[variant.twist_second]
    N = n + 1
    for t in _tuples(r, N):
        gens = [A.gen(i) for i in t]
        total = vzero(M.rank)
        A_pre = [sum(par[t[k]] for k in range(i)) for i in range(N)]
        for i in range(N):
            if variant.first_sign == "definition":
                e = i + (g + A_pre[i]) * par[t[i]]
            else:
                e = i + g * par[t[i]] + A_pre[i]
            rest = [t1(gens[k]) for k in range(N) if k != i]
            rest_slots = [X(k + 1) for k in range(N) if k != i]
            inner_val = gamma.evaluate(rest, rest_slots)
            if vis_zero(inner_val):
                continue
            term = M.rho(acting(gens[i]), inner_val, X(i + 1))
            total = vadd(total, vscale(sign(e), term))
        for i in range(N):
            for j in range(i + 1, N):
                e = (i + 1 + j + 1) + A_pre[i] * par[t[i]] + A_pre[j] * par[t[j]] + par[t[i]] * par[t[j]]
                br = A.bracket(inner(gens[i]), gens[j], X(i + 1))
                if vis_zero(br):
                    continue
                rest = [t2(gens[k]) for k in range(N) if k not in (i, j)]
                rest_slots = [X(k + 1) for k in range(N) if k not in (i, j)]
                term = gamma.evaluate([br] + rest, [X(i + 1) + X(j + 1)] + rest_slots)
                total = vadd(total, vscale(sign(e), term))
        table[t] = total
    return Cochain(A, M, N, g, table)


def _ce_terms(A, par, g, N, xs, bracket, act, c):
    """Chevalley-Eilenberg expression on arguments ``xs`` (parities ``par``)."""
    total = None
    A_pre = [sum(par[:i]) for i in range(N)]
    for i in range(N):
        rest = [xs[k] for k in range(N) if k != i]
        slots = [X(k + 1) for k in range(N) if k != i]
        val = c(rest, slots)
        if not vis_zero(val):
            term = vscale(sign(i + (g + A_pre[i]) * par[i]), act(xs[i], val, X(i + 1)))
            total = term if total is None else vadd(total, term)
    for i in range(N):
        for j in range(i + 1, N):
            br = bracket(xs[i], xs[j], X(i + 1))
            if vis_zero(br):
                continue
            e = i + j + A_pre[i] * par[i] + A_pre[j] * par[j] + par[i] * par[j]
            rest = [xs[k] for k in range(N) if k not in (i, j)]
            slots = [X(i + 1) + X(j + 1)] + [X(k + 1) for k in range(N) if k not in (i, j)]
            term = vscale(sign(e), c([br] + rest, slots))
            total = term if total is None else vadd(total, term)
    return total


def _untwisted_differential(A: Algebra, M: RepModule, gamma: Cochain) -> Cochain:
    """Differential obtained by untwisting to a Lie conformal algebra.

    With ``{x_l y} = [a^-1 x_l b^-1 y]`` and ``x.m = rho(a^-1 x) psi^-1 m`` the
    untwisted data is an ordinary Lie conformal superalgebra and module.  An
    n-cochain corresponds to ``c = gamma o (R_1^-1, ..., R_n^-1)`` with
    ``R_k = a^(2-k) b^(k-1)`` (the same R_k in every arity, so d^2 = 0 is
    inherited); ``d gamma`` is the Chevalley-Eilenberg differential of ``c``
    pulled back along the R_k.  For n = 0 this is ``(-1)^{|g||a|} a_l g``.
    """
    ainv, binv = A.alpha.inverse(), A.beta.inverse()
    psinv = M.psi.inverse()
    if ainv is None or binv is None or psinv is None:
        raise HypothesisError("the untwisted differential needs invertible alpha, beta and psi")
    n = gamma.arity
    N = n + 1
    rmaps = [_map_power(A, 2 - k, k - 1) for k in range(1, N + 1)]
    rinv = [_map_power(A, k - 2, 1 - k) for k in range(1, n + 1)]

    def c(xs, slots):
        return gamma.evaluate([rinv[k](x) for k, x in enumerate(xs)], slots)

    def bracket(x, y, lam):
        return A.bracket(ainv(x), binv(y), lam)

    def act(x, m, lam):
        return M.rho(ainv(x), psinv(m), lam)

    table = {}
    for t in _tuples(A.rank, N):
        xs = [rmaps[k](A.gen(i)) for k, i in enumerate(t)]
        val = _ce_terms(A, [A.parities[i] for i in t], gamma.parity, N, xs, bracket, act, c)
        if val is not None:
            table[t] = val
    return Cochain(A, M, N, gamma.parity, table)


def check_d_squared(A: Algebra, M: RepModule, gamma: Cochain, variant: DVariant = LITERAL) -> CheckReport:
    dd = differential(A, M, differential(A, M, gamma, variant), variant)
    report = CheckReport(names=M.names)
    for t in _tuples(A.rank, gamma.arity + 2):
        report.add("d2", tuple(A.names[i] for i in t), dd.value(t))
    return report


# --- bounded-degree solvers ---------------------------------------------------

def _flatten(prefix, vec: Sequence[Poly], out: Dict):
    for u, c in enumerate(vec):
        for m, v in c.items():
            key = prefix + (u, m)
            out[key] = out.get(key, 0) + v


def cochain_ansatz(A: Algebra, M: RepModule, n: int, parity: int, degree: int) -> List[Cochain]:
    """Monomial basis of all tables of total degree <= ``degree`` and the right grading."""
    mons = monomials(list(range(n + 1)), degree)
    out = []
    for t in _tuples(A.rank, n):
        target = (parity + sum(A.parities[i] for i in t)) % 2
        for u in range(M.rank):
            if M.parities[u] != target:
                continue
            for mono in mons:
                out.append(Cochain(A, M, n, parity, {t: unit(M.rank, u, mono)}))
    return out


def _residual_entries(report_fn, gamma) -> Dict:
    entries: Dict = {}
    rep = report_fn(gamma)
    for v in rep.violations:
        _flatten((v.axiom, v.basis, v.detail), v.residual, entries)
    return entries


def _combine(basis: Sequence[Cochain], coeffs: Sequence[Fraction], template: Cochain) -> Cochain:
    acc = Cochain(template.algebra, template.module, template.arity, template.parity, {})
    for c, b in zip(coeffs, basis):
        if c:
            acc = acc + b.scale(c)
    return acc


def solve_cochain_space(A: Algebra, M: RepModule, n: int, parity: int, degree: int) -> List[Cochain]:
    """Exact Q-basis of the n-cochains of the given parity with table degree <= ``degree``."""
    ansatz = cochain_ansatz(A, M, n, parity, degree)
    if not ansatz:
        return []
    sys = LinearSystem(len(ansatz))
    for k, b in enumerate(ansatz):
        sys.add_column_entries(k, _residual_entries(check_cochain, b))
    template = Cochain.zero(A, M, n, parity)
    return [_combine(ansatz, v, template) for v in sys.kernel()]


def generic_cochain(basis: Sequence[Cochain], first_param: int = 0) -> Cochain:
    """``sum_k c_k basis_k`` with free parameters ``c_k`` (symbolic ansatz)."""
    if not basis:
        raise ValueError("empty basis")
    acc = Cochain.zero(basis[0].algebra, basis[0].module, basis[0].arity, basis[0].parity)
    for k, b in enumerate(basis):
        acc = acc + b.scale(param(first_param + k))
    return acc


def _cochain_vector(gamma: Cochain) -> Dict:
    out: Dict = {}
    for t, v in gamma.table.items():
        _flatten((t,), v, out)
    return out


def _rank_of(vectors: Sequence[Dict]) -> int:
    keys = sorted({k for v in vectors for k in v}, key=repr)
    pos = {k: i for i, k in enumerate(keys)}
    from .kernel.linalg import _Echelon
    ech = _Echelon(len(keys))
    for v in vectors:
        ech.add({pos[k]: Fraction(c) for k, c in v.items()})
    return ech.rank


def cocycle_space(A, M, n, parity, degree, variant: DVariant = LITERAL) -> List[Cochain]:
    space = solve_cochain_space(A, M, n, parity, degree)
    if not space:
        return []
    sys = LinearSystem(len(space))
    for k, b in enumerate(space):
        sys.add_column_entries(k, _cochain_vector(differential(A, M, b, variant)))
    template = Cochain.zero(A, M, n, parity)
    return [_combine(space, v, template) for v in sys.kernel()]


@dataclass
class TruncatedCohomology:
    n: int
    parity: int
    degree: int
    cochains: int
    cocycles: int
    coboundaries: int
    coboundaries_in_slice: int
    ambient_degree: int

    @property
    def indicator(self) -> int:
        return self.cocycles - self.coboundaries_in_slice

    def to_dict(self) -> dict:
        return {
            "n": self.n, "parity": self.parity, "degree_bound": self.degree,
            "cochains": self.cochains, "cocycles": self.cocycles,
            "coboundaries": self.coboundaries, "coboundaries_in_slice": self.coboundaries_in_slice,
            "ambient_degree": self.ambient_degree, "truncation_indicator": self.indicator,
        }


def truncated_cohomology_report(A, M, n: int, parity: int, degree: int,
                                variant: DVariant = LITERAL) -> TruncatedCohomology:
    """Exact dimensions for the degree-<=D slice; never the full cohomology."""
    space = solve_cochain_space(A, M, n, parity, degree)
    cocycles = cocycle_space(A, M, n, parity, degree, variant)
    images = []
    if n >= 1:
        for b in solve_cochain_space(A, M, n - 1, parity, degree):
            images.append(differential(A, M, b, variant))
    vecs = [_cochain_vector(c) for c in images]
    cob = _rank_of(vecs) if vecs else 0
    ambient = max([degree] + [c.degree() for c in images])
    in_slice = 0
    if vecs:
        # combinations of coboundaries whose monomials above the bound cancel
        high_keys = sorted({k for v in vecs for k in v if sum(k[-1]) > degree}, key=repr)
        sys = LinearSystem(len(vecs))
        for col, v in enumerate(vecs):
            sys.add_column_entries(col, {k: c for k, c in v.items() if sum(k[-1]) > degree})
        combos = sys.kernel() if high_keys else [
            [Fraction(int(i == j)) for j in range(len(vecs))] for i in range(len(vecs))]
        sliced = []
        for coeffs in combos:
            acc: Dict = {}
            for c, v in zip(coeffs, vecs):
                if c:
                    for k, x in v.items():
                        acc[k] = acc.get(k, 0) + c * x
            sliced.append({k: x for k, x in acc.items() if x})
        in_slice = _rank_of(sliced) if sliced else 0
    return TruncatedCohomology(n, parity, degree, len(space), len(cocycles), cob, in_slice, ambient)


# --- variant search -----------------------------------------------------------

def variant_grid() -> List[DVariant]:
    out = []
    for fs in ("definition", "proof"):
        for ap in (1, 0):
            for bs in (0, 1, -1):
                for t1 in ("none", "beta", "alpha"):
                    for t2 in ("beta", "none", "alpha"):
                        for z in ("literal", "general"):
                            out.append(DVariant(fs, ap, bs, t1, t2, z))
    return out + [UNTWISTED]


def d_squared_vanishes(A, M, cochains: Sequence[Cochain], variant: DVariant) -> bool:
    try:
        return all(check_d_squared(A, M, g, variant).ok for g in cochains)
    except HypothesisError:
        return False


def preserves_cochains(A, M, cochains: Sequence[Cochain], variant: DVariant) -> bool:
    try:
        return all(check_cochain(differential(A, M, g, variant)).ok for g in cochains)
    except HypothesisError:
        return False


@dataclass
class VariantSearch:
    literal_ok: bool
    chosen: Optional[DVariant]
    tried: int

    def to_dict(self) -> dict:
        return {
            "literal_ok": self.literal_ok,
            "chosen": None if self.chosen is None else self.chosen.label(),
            "variants_tried": self.tried,
        }


def search_variant(A, M, cochains: Sequence[Cochain], grid: Optional[Sequence[DVariant]] = None) -> VariantSearch:
    """Literal differential first; otherwise the first grid variant with d^2 = 0 that keeps cochains cochains."""
    if d_squared_vanishes(A, M, cochains, LITERAL) and preserves_cochains(A, M, cochains, LITERAL):
        return VariantSearch(True, LITERAL, 1)
    tried = 1
    for v in grid or variant_grid():
        if v == LITERAL:
            continue
        tried += 1
        if d_squared_vanishes(A, M, cochains, v) and preserves_cochains(A, M, cochains, v):
            return VariantSearch(False, v, tried)
    return VariantSearch(False, None, tried)


# --- O-operators -------------------------------------------------------------

def _oop_parts(A: Algebra, M: RepModule):
    phii, psii = M.phi.inverse(), M.psi.inverse()
    if phii is None or psii is None:
        raise HypothesisError("O-operators need invertible phi and psi")
    return phii.compose(M.psi), M.phi.compose(psii)  # phi^-1 psi, phi psi^-1


def induced_entry(A, M, T, i: int, j: int, maps) -> Vec:
    u, v = M.gen(i), M.gen(j)
    left, right = maps
    s = sign(M.parities[i] * M.parities[j])
    t1 = M.rho(T(u), v, X(1))
    t2 = M.rho(T(left(v)), right(u), -X(1) - D)
    return vsub(t1, vscale(s, t2))


def check_o_operator(A: Algebra, M: RepModule, T: DMap) -> CheckReport:
    if T.source_rank != M.rank or T.target_rank != A.rank:
        raise ValueError("T must map the module into the algebra")
    maps = _oop_parts(A, M)
    report = CheckReport(names=A.names)
    for u in range(M.rank):
        m = M.gen(u)
        report.add("intertwine", (M.names[u],), vsub(T(M.phi(m)), A.alpha(T(m))), "T phi = alpha T")
        report.add("intertwine", (M.names[u],), vsub(T(M.psi(m)), A.beta(T(m))), "T psi = beta T")
    if not T.is_even(M.parities, A.parities):
        report.add("even", ("T",), (ONE,) + vzero(A.rank - 1) if A.rank else (ONE,), "T must be even")
    for i in range(M.rank):
        for j in range(M.rank):
            lhs = A.bracket(T(M.gen(i)), T(M.gen(j)), X(1))
            rhs = T(induced_entry(A, M, T, i, j, maps))
            report.add("O", (M.names[i], M.names[j]), vsub(rhs, lhs), "T(...) - [Tu_x Tv]")
    return report


def induced_bracket(A: Algebra, M: RepModule, T: DMap, check: bool = True) -> Algebra:
    """Algebra structure ``[u_x v]_T`` on M with maps (phi, psi)."""
    if check:
        rep = check_o_operator(A, M, T)
        if not rep.ok:
            raise HypothesisError("not an O-operator", rep)
    maps = _oop_parts(A, M)
    table = {(i, j): induced_entry(A, M, T, i, j, maps) for i in range(M.rank) for j in range(M.rank)}
    return Algebra(M.names, M.parities, table, M.phi, M.psi)


def homomorphism_residual(A: Algebra, M: RepModule, T: DMap, induced: Algebra) -> CheckReport:
    """``T([u_x v]_T) - [Tu_x Tv]`` on all module generator pairs."""
    report = CheckReport(names=A.names)
    for i in range(M.rank):
        for j in range(M.rank):
            lhs = T(induced.bracket(M.gen(i), M.gen(j)))
            rhs = A.bracket(T(M.gen(i)), T(M.gen(j)))
            report.add("hom", (M.names[i], M.names[j]), vsub(lhs, rhs))
    for nm, a, b in (("alpha", M.phi, A.alpha), ("beta", M.psi, A.beta)):
        for u in range(M.rank):
            report.add("hom", (nm, M.names[u]), vsub(T(a(M.gen(u))), b(T(M.gen(u)))))
    return report


def intertwiner_space(A: Algebra, M: RepModule, degree: int = 0) -> List[DMap]:
    """Even Q[D]-maps M -> A with entries of degree <= ``degree`` and T phi = alpha T, T psi = beta T."""
    mons = monomials([0], degree)
    ansatz = []
    for u in range(M.rank):
        for j in range(A.rank):
            if A.parities[j] != M.parities[u]:
                continue
            for mono in mons:
                imgs = [vzero(A.rank) for _ in range(M.rank)]
                imgs[u] = unit(A.rank, j, mono)
                ansatz.append(DMap(imgs, A.rank))
    if not ansatz:
        return []
    sys = LinearSystem(len(ansatz))
    for k, T in enumerate(ansatz):
        entries: Dict = {}
        for u in range(M.rank):
            m = M.gen(u)
            _flatten(("phi", u), vsub(T(M.phi(m)), A.alpha(T(m))), entries)
            _flatten(("psi", u), vsub(T(M.psi(m)), A.beta(T(m))), entries)
        sys.add_column_entries(k, entries)
    out = []
    for v in sys.kernel():
        acc = DMap.zero(M.rank, A.rank)
        for c, T in zip(v, ansatz):
            if c:
                acc = acc + T.scale(c)
        out.append(acc)
    return out


def search_o_operators(A: Algebra, M: RepModule, values=(-1, 0, 1), degree: int = 0,
                       limit: Optional[int] = None) -> List[DMap]:
    """Brute-force search over small integer combinations of the intertwiner basis."""
    basis = intertwiner_space(A, M, degree)
    found = []
    for coeffs in itertools.product(values, repeat=len(basis)):
        T = DMap.zero(M.rank, A.rank)
        for c, b in zip(coeffs, basis):
            if c:
                T = T + b.scale(c)
        if check_o_operator(A, M, T).ok:
            found.append(T)
            if limit and len(found) >= limit:
                break
    return found


def select_variant(A: Algebra, M: RepModule, arities: Sequence[int], degree: int) -> VariantSearch:
    """Variant search driven by generic cochains of the given arities (both parities)."""
    probes = []
    for n in sorted(set(a for a in arities if a >= 0)):
        for parity in (0, 1):
            space = solve_cochain_space(A, M, n, parity, degree)
            if space:
                probes.append(generic_cochain(space))
    return search_variant(A, M, probes)
