"""Conformal linear maps, the gc bracket, derivations and generalized derivations."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import Algebra, CheckReport, DMap, Vec, render_vector, sign
from .constructions import HypothesisError
from .kernel.linalg import LinearSystem, _Echelon
from .kernel.poly import (D, ONE, ZERO, Poly, X, monomials, shift_partial, unit, vadd, vis_zero,
                          vscale, vsub, vzero)

LAM, MU = X(1), X(2)


class ConfMap:
    """``f_x(e_i) = sum_j P_ji(x, d) e_j`` extended by ``f_x(p(d) m) = p(d + x) f_x(m)``.

    ``images[i]`` is the image of generator i, written with the slot ``x1``.
    """

    __slots__ = ("images", "parity")

    def __init__(self, images: Sequence[Sequence[Poly]], parity: int = 0):
        self.images = tuple(tuple(Poly.coerce(c) for c in im) for im in images)
        self.parity = parity % 2

    @property
    def rank(self) -> int:
        return len(self.images)

    @classmethod
    def zero(cls, n: int, parity: int = 0) -> "ConfMap":
        return cls([vzero(n) for _ in range(n)], parity)

    @classmethod
    def identity(cls, n: int) -> "ConfMap":
        return cls([unit(n, i) for i in range(n)], 0)

    @classmethod
    def from_dmap(cls, m: DMap, parity: int = 0) -> "ConfMap":
        return cls(m.images, parity)

    def __call__(self, x: Sequence[Poly], lam: Poly = LAM) -> Vec:
        return eval_confmap(self, x, lam)

    def is_zero(self) -> bool:
        return all(vis_zero(im) for im in self.images)

    def __add__(self, other: "ConfMap") -> "ConfMap":
        return ConfMap([vadd(a, b) for a, b in zip(self.images, other.images)], self.parity)

    def __sub__(self, other: "ConfMap") -> "ConfMap":
        return ConfMap([vsub(a, b) for a, b in zip(self.images, other.images)], self.parity)

    def scale(self, c) -> "ConfMap":
        return ConfMap([vscale(c, im) for im in self.images], self.parity)

    def __neg__(self) -> "ConfMap":
        return self.scale(-1)

    def degree(self) -> int:
        return max((c.degree() for im in self.images for c in im), default=-1)

    def compose_right(self, m: DMap) -> "ConfMap":
        """``f o m`` for a Q[D]-linear (x-free) map m."""
        return ConfMap([self(im) for im in m.images], self.parity)

    def compose_left(self, m: DMap) -> "ConfMap":
        """``m o f``."""
        return ConfMap([m(im) for im in self.images], self.parity)

    def is_homogeneous(self, parities: Sequence[int]) -> bool:
        return all(c.is_zero() or parities[j] == (parities[i] + self.parity) % 2
                   for i, im in enumerate(self.images) for j, c in enumerate(im))

    def render(self, names: Sequence[str]) -> Dict[str, str]:
        return {names[i]: render_vector(im, names) for i, im in enumerate(self.images)}

    def __eq__(self, other) -> bool:
        return isinstance(other, ConfMap) and self.images == other.images and (
            self.parity == other.parity or self.is_zero())

    def __hash__(self):
        return hash(self.images)

    def __repr__(self) -> str:
        return f"ConfMap({[[c.to_str() for c in im] for im in self.images]}, parity={self.parity})"


def eval_confmap(f: ConfMap, x: Sequence[Poly], lam: Poly = LAM) -> Vec:
    """``f_lam(x)``: coefficients of x are shifted by ``D -> D + lam`` first."""
    if len(x) != f.rank:
        raise ValueError(f"dimension mismatch: map on rank {f.rank}, element of rank {len(x)}")
    out = [ZERO] * f.rank
    same = lam == LAM
    for c, im in zip(x, f.images):
        if c.is_zero():
            continue
        c = shift_partial(c, lam)
        for j, e in enumerate(im):
            if not e.is_zero():
                out[j] = out[j] + c * (e if same else e.subs({1: lam}))
    return tuple(out)


def gc_bracket_raw(f: ConfMap, g: ConfMap) -> List[Vec]:
    """``[f_x1 g]_x2(e_i) = f_x1(g_{x2-x1} e_i) - (-1)^{|f||g|} g_{x2-x1}(f_x1 e_i)``."""
    if f.rank != g.rank:
        raise ValueError("maps on different ranks")
    s = sign(f.parity * g.parity)
    shift = MU - LAM
    out = []
    for i in range(f.rank):
        e = unit(f.rank, i)
        a = f(g(e, shift), LAM)
        b = g(f(e, LAM), shift)
        out.append(vsub(a, vscale(s, b)))
    return out


def gc_bracket(f: ConfMap, g: ConfMap) -> Dict[int, ConfMap]:
    """Coefficients of ``lambda^n`` in ``[f_lambda g]``, each a map in the slot ``mu`` (renamed x1)."""
    raw = gc_bracket_raw(f, g)
    par = (f.parity + g.parity) % 2
    top = max((c.degree_in(1) for im in raw for c in im if not c.is_zero()), default=-1)
    out = {}
    for n in range(top + 1):
        images = [tuple(c.coefficient(1, n).rename({2: 1}) for c in im) for im in raw]
        h = ConfMap(images, par)
        if not h.is_zero():
            out[n] = h
    return out


def gc_bracket_at(f: ConfMap, g: ConfMap, lam: Poly) -> ConfMap:
    """``[f_lam g]`` for a fixed (e.g. rational) value of lambda."""
    raw = gc_bracket_raw(f, g)
    images = [tuple(c.subs({1: lam}).rename({2: 1}) for c in im) for im in raw]
    return ConfMap(images, (f.parity + g.parity) % 2)


# --- residuals -----------------------------------------------------------------

def _kl(A: Algebra, k: int, l: int) -> DMap:
    if k < 0 or l < 0:
        raise ValueError("k and l must be nonnegative")
    return A.alpha.power(k).compose(A.beta.power(l))


def _left(A, f, tw, i, j):
    """``[f_l(a)_{l+mu} a^k b^l(b)]``."""
    return A.bracket(f(A.gen(i)), tw(A.gen(j)), LAM + MU)


def _right(A, f, tw, i, j):
    """``(-1)^{|a||f|} [a^k b^l(a)_mu f_l(b)]``."""
    return vscale(sign(A.parities[i] * f.parity), A.bracket(tw(A.gen(i)), f(A.gen(j)), MU))


def _inner(A, f, i, j):
    """``f_l([a_mu b])``."""
    return f(A.bracket(A.gen(i), A.gen(j), MU))


def omega_report(A: Algebra, f: ConfMap, report: Optional[CheckReport] = None) -> CheckReport:
    report = report if report is not None else CheckReport(names=A.names)
    for i in range(A.rank):
        e = A.gen(i)
        report.add("omega", (A.names[i],), vsub(f(A.alpha(e)), A.alpha(f(e))), "f alpha = alpha f")
        report.add("omega", (A.names[i],), vsub(f(A.beta(e)), A.beta(f(e))), "f beta = beta f")
    return report


def in_omega(A: Algebra, f: ConfMap) -> bool:
    return omega_report(A, f).ok


def _pairs(A):
    return [(i, j) for i in range(A.rank) for j in range(A.rank)]


def is_derivation(A: Algebra, f: ConfMap, k: int, l: int) -> CheckReport:
    tw = _kl(A, k, l)
    report = omega_report(A, f)
    for i, j in _pairs(A):
        res = vsub(_inner(A, f, i, j), vadd(_left(A, f, tw, i, j), _right(A, f, tw, i, j)))
        report.add("derivation", (A.names[i], A.names[j]), res)
    return report


def generalized_residual(A: Algebra, f: ConfMap, f1: ConfMap, f2: ConfMap, k: int, l: int) -> CheckReport:
    """Residual of ``[f(a) a^k b^l(b)] + (-1)^{|f||a|}[a^k b^l(a) f1(b)] = f2([a b])`` and Omega membership."""
    tw = _kl(A, k, l)
    report = CheckReport(names=A.names)
    for name, m in (("f", f), ("f'", f1), ("f''", f2)):
        sub = omega_report(A, m)
        report.extend(sub, prefix=f"{name}:")
    for i, j in _pairs(A):
        right = vscale(sign(A.parities[i] * f.parity), A.bracket(tw(A.gen(i)), f1(A.gen(j)), MU))
        res = vsub(vadd(_left(A, f, tw, i, j), right), _inner(A, f2, i, j))
        report.add("generalized", (A.names[i], A.names[j]), res)
    return report


def centroid_residuals(A: Algebra, f: ConfMap, k: int, l: int) -> Dict[str, CheckReport]:
    tw = _kl(A, k, l)
    out = {name: CheckReport(names=A.names) for name in ("centroid", "quasicentroid", "central_derivation")}
    for i, j in _pairs(A):
        L, R, F = _left(A, f, tw, i, j), _right(A, f, tw, i, j), _inner(A, f, i, j)
        b = (A.names[i], A.names[j])
        out["quasicentroid"].add("L=R", b, vsub(L, R))
        out["centroid"].add("L=R", b, vsub(L, R))
        out["centroid"].add("R=F", b, vsub(R, F))
        out["central_derivation"].add("L=0", b, L)
        out["central_derivation"].add("F=0", b, F)
    om = omega_report(A, f)
    for rep in out.values():
        rep.extend(om)
    return out


@dataclass
class Classification:
    centroid: bool
    quasicentroid: bool
    central_derivation: bool
    derivation: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def classify_map(A: Algebra, f: ConfMap, k: int, l: int) -> Classification:
    res = centroid_residuals(A, f, k, l)
    return Classification(res["centroid"].ok, res["quasicentroid"].ok, res["central_derivation"].ok,
                          is_derivation(A, f, k, l).ok)


# --- inner derivations -----------------------------------------------------------

def inner_derivation(A: Algebra, a: Sequence[Poly], k: int, l: int) -> ConfMap:
    """``f_x(b) = [a_x alpha^(k+1) beta^(l-1)(b)]`` for a fixed by alpha and beta."""
    a = tuple(Poly.coerce(c) for c in a)
    if A.alpha(a) != a or A.beta(a) != a:
        raise HypothesisError("inner derivations need alpha(a) = a = beta(a)")
    par = A.parity_of(a)
    if par is None:
        if vis_zero(a):
            par = 0
        else:
            raise HypothesisError("inner derivations need a homogeneous element")
    if l == 0 and A.beta.inverse() is None:
        raise HypothesisError("l = 0 needs an invertible beta")
    tw = A.alpha.power(k + 1).compose(A.beta.power(l - 1))
    return ConfMap([A.bracket(a, tw(A.gen(i)), LAM) for i in range(A.rank)], par)


# --- solvers ---------------------------------------------------------------------

def confmap_ansatz(A: Algebra, parity: int, degree: int) -> List[ConfMap]:
    mons = monomials([0, 1], degree)
    out = []
    for i in range(A.rank):
        for j in range(A.rank):
            if A.parities[j] != (A.parities[i] + parity) % 2:
                continue
            for m in mons:
                images = [vzero(A.rank) for _ in range(A.rank)]
                images[i] = unit(A.rank, j, m)
                out.append(ConfMap(images, parity))
    return out


def _flat(prefix, vec, out, scale=1):
    for u, c in enumerate(vec):
        for m, v in c.items():
            key = prefix + (u, m)
            out[key] = out.get(key, 0) + scale * v


def _omega_entries(A, f, out, tag=""):
    for i in range(A.rank):
        e = A.gen(i)
        _flat(("oa", tag, i), vsub(f(A.alpha(e)), A.alpha(f(e))), out)
        _flat(("ob", tag, i), vsub(f(A.beta(e)), A.beta(f(e))), out)


def _combine(basis: Sequence[ConfMap], coeffs: Sequence[Fraction], rank: int, parity: int) -> ConfMap:
    acc = ConfMap.zero(rank, parity)
    for c, b in zip(coeffs, basis):
        if c:
            acc = acc + b.scale(c)
    return acc


CLASSES = ("der", "c", "qc", "zder", "omega")


def _class_entries(A, f, tw, cls):
    out: Dict = {}
    _omega_entries(A, f, out)
    for i, j in _pairs(A):
        if cls == "omega":
            continue
        L, R, F = _left(A, f, tw, i, j), _right(A, f, tw, i, j), _inner(A, f, i, j)
        if cls == "der":
            _flat(("der", i, j), vsub(F, vadd(L, R)), out)
        elif cls in ("c", "qc"):
            _flat(("lr", i, j), vsub(L, R), out)
            if cls == "c":
                _flat(("rf", i, j), vsub(R, F), out)
        elif cls == "zder":
            _flat(("l", i, j), L, out)
            _flat(("f", i, j), F, out)
    return out


def solve_class(A: Algebra, cls: str, k: int, l: int, parity: int, degree: int) -> List[ConfMap]:
    """Basis of a class (der, c, qc, zder, omega) among maps with entries of degree <= ``degree``."""
    if cls not in CLASSES:
        raise ValueError(f"unknown class {cls!r}; expected one of {CLASSES}")
    ansatz = confmap_ansatz(A, parity, degree)
    if not ansatz:
        return []
    tw = _kl(A, k, l)
    sys = LinearSystem(len(ansatz))
    for col, f in enumerate(ansatz):
        sys.add_column_entries(col, _class_entries(A, f, tw, cls))
    return [_combine(ansatz, v, A.rank, parity) for v in sys.kernel()]


def solve_derivations(A: Algebra, k: int, l: int, parity: int, degree: int) -> List[ConfMap]:
    return solve_class(A, "der", k, l, parity, degree)


def _witness_columns(A, tw, f_parity, ansatz, role):
    cols = []
    for g in ansatz:
        out: Dict = {}
        _omega_entries(A, g, out, role)
        for i, j in _pairs(A):
            if role == "f'":
                vec = vscale(sign(A.parities[i] * f_parity), A.bracket(tw(A.gen(i)), g(A.gen(j)), MU))
            elif role == "f''":
                vec = vscale(-1, _inner(A, g, i, j))
            elif role == "self-g":
                vec = _left(A, g, tw, i, j)
            else:  # the map itself, in the quasiderivation solver
                vec = vadd(_left(A, g, tw, i, j), _right(A, g, tw, i, j))
            _flat(("gen", i, j), vec, out)
        cols.append(out)
    return cols


def _projected_basis(A, blocks, cols, parity):
    """Kernel of the stacked columns, row-reduced so pivots in the first block come first."""
    sys = LinearSystem(len(cols))
    for n, c in enumerate(cols):
        sys.add_column_entries(n, c)
    ech = _Echelon(len(cols))
    for v in sys.kernel():
        ech.add({i: x for i, x in enumerate(v) if x})
    first = len(blocks[0])
    out = []
    for p in sorted(ech.pivots):
        if p >= first:
            continue
        row = ech.pivots[p]
        coeffs = [row.get(i, Fraction(0)) for i in range(len(cols))]
        maps, start = [], 0
        for block in blocks:
            maps.append(_combine(block, coeffs[start:start + len(block)], A.rank, parity))
            start += len(block)
        out.append(tuple(maps))
    return out


def solve_quasiderivations(A: Algebra, k: int, l: int, parity: int, degree: int,
                           companion_degree: Optional[int] = None) -> List[Tuple[ConfMap, ConfMap]]:
    """Pairs ``(f, f')`` spanning the quasiderivations of the given degree bound.

    One pair per basis element of the projection onto f; ``f'`` is a
    companion witnessing membership.
    """
    if companion_degree is None:
        companion_degree = degree + A.max_table_degree()
    fa = confmap_ansatz(A, parity, degree)
    if not fa:
        return []
    ca = confmap_ansatz(A, parity, companion_degree)
    tw = _kl(A, k, l)
    cols = _witness_columns(A, tw, parity, fa, "self") + _witness_columns(A, tw, parity, ca, "f''")
    return _projected_basis(A, [fa, ca], cols, parity)


def solve_generalized(A: Algebra, k: int, l: int, parity: int, degree: int,
                      companion_degree: Optional[int] = None) -> List[Tuple[ConfMap, ConfMap, ConfMap]]:
    """Triples ``(f, f', f'')`` spanning the generalized derivations of the given degree bound."""
    if companion_degree is None:
        companion_degree = degree + A.max_table_degree()
    fa = confmap_ansatz(A, parity, degree)
    if not fa:
        return []
    f1 = confmap_ansatz(A, parity, degree)
    f2 = confmap_ansatz(A, parity, companion_degree)
    tw = _kl(A, k, l)
    cols = (_witness_columns(A, tw, parity, fa, "self-g") + _witness_columns(A, tw, parity, f1, "f'")
            + _witness_columns(A, tw, parity, f2, "f''"))
    return _projected_basis(A, [fa, f1, f2], cols, parity)


@dataclass
class DerivationWitness:
    f1: ConfMap
    f2: ConfMap
    k: int
    l: int

    def to_dict(self, names) -> dict:
        return {"k": self.k, "l": self.l, "f_prime": self.f1.render(names), "f_double_prime": self.f2.render(names)}


class WitnessSolver:
    """Affine solver for generalized-derivation witnesses, cached per (k, l, parity, degree, mode).

    ``mode`` is ``"gder"`` (solve f', f''), ``"zero"`` (f'' = 0) or ``"qder"`` (f' = f).
    """

    def __init__(self, A: Algebra, k: int, l: int, parity: int, degree: int, mode: str = "gder"):
        if mode not in ("gder", "zero", "qder"):
            raise ValueError("mode must be gder, zero or qder")
        self.A, self.k, self.l, self.parity, self.degree, self.mode = A, k, l, parity, degree, mode
        self.tw = _kl(A, k, l)
        ans = confmap_ansatz(A, parity, degree)
        self.f1_ansatz = ans if mode in ("gder", "zero") else []
        self.f2_ansatz = ans if mode in ("gder", "qder") else []
        cols = (_witness_columns(A, self.tw, parity, self.f1_ansatz, "f'")
                + _witness_columns(A, self.tw, parity, self.f2_ansatz, "f''"))
        self.ncols = len(cols)
        keys: Dict = {}
        rows: Dict[int, Dict[int, Fraction]] = {}
        for c, entries in enumerate(cols):
            for key, v in entries.items():
                if v:
                    r = keys.setdefault(key, len(keys))
                    rows.setdefault(r, {})[c] = Fraction(v)
        self.keys = keys
        # track row combinations in columns ncols + r so right-hand sides can be replayed
        self.ech = _Echelon(self.ncols + len(keys))
        for r in range(len(keys)):
            row = dict(rows.get(r, {}))
            row[self.ncols + r] = Fraction(1)
            self.ech.add(row)

    def _rhs(self, f: ConfMap) -> Dict:
        A, tw = self.A, self.tw
        out: Dict = {}
        _omega_entries(A, f, out, "f")
        for i, j in _pairs(A):
            vec = _left(A, f, tw, i, j)
            if self.mode == "qder":
                vec = vadd(vec, _right(A, f, tw, i, j))
            _flat(("gen", i, j), vec, out, scale=-1)
        return {k: v for k, v in out.items() if v}

    def solve(self, f: ConfMap) -> Optional[DerivationWitness]:
        if f.parity != self.parity:
            raise ValueError("parity of f differs from the solver's")
        rhs = self._rhs(f)
        if any(k[0] in ("oa", "ob") for k in rhs):
            return None  # f itself is not in Omega
        if any(k not in self.keys for k in rhs):
            return None
        r = {self.keys[k]: Fraction(v) for k, v in rhs.items()}
        x = [Fraction(0)] * self.ncols
        for p, row in self.ech.pivots.items():
            val = sum((c * r.get(col - self.ncols, 0) for col, c in row.items() if col >= self.ncols), Fraction(0))
            if p >= self.ncols:
                if val:
                    return None
            else:
                x[p] = val
        n1 = len(self.f1_ansatz)
        A = self.A
        f1 = _combine(self.f1_ansatz, x[:n1], A.rank, self.parity) if self.mode != "qder" else f
        f2 = _combine(self.f2_ansatz, x[n1:], A.rank, self.parity) if self.mode != "zero" else ConfMap.zero(A.rank, self.parity)
        return DerivationWitness(f1, f2, self.k, self.l)


def witness_generalized(A: Algebra, f: ConfMap, k: int, l: int, degree: int, mode: str = "gder") -> Optional[DerivationWitness]:
    """Witness ``(f', f'')`` with entries of degree <= ``degree``, or None ("not witnessed at this bound")."""
    return WitnessSolver(A, k, l, f.parity, degree, mode).solve(f)


# --- BiHom structure on Omega ----------------------------------------------------

def _op(m: ConfMap):
    return lambda slot: [(1, ((m, slot),))]


def _bracket_op(left, right, lam: Poly, s: int):
    """Operator ``nu -> [L_lam R]_nu`` from operator-valued functions of a slot."""
    def at(nu):
        out = []
        for c1, a in left(lam):
            for c2, b in right(nu - lam):
                out.append((c1 * c2, a + b))
                out.append((-s * c1 * c2, b + a))
        return out
    return at


def _run(terms, v: Vec) -> Vec:
    acc = vzero(len(v))
    for c, seq in terms:
        w = v
        for m, slot in reversed(seq):
            w = m(w, slot)
        acc = vadd(acc, vscale(c, w))
    return acc


def _twist(A: Algebra):
    return (lambda f: f.compose_right(A.alpha)), (lambda f: f.compose_right(A.beta))


def gc_skew_residual(A: Algebra, f: ConfMap, g: ConfMap) -> List[Vec]:
    """``[b'(f)_x1 a'(g)] + (-1)^{|f||g|} [b'(g)_{-x1-d} a'(f)]`` on each generator, result slot x2."""
    al, be = _twist(A)
    s = sign(f.parity * g.parity)
    t1 = _bracket_op(_op(be(f)), _op(al(g)), LAM, s)(MU)
    # d acts on a map in slot nu as -nu, so -x1-d becomes nu - x1
    t2 = _bracket_op(_op(be(g)), _op(al(f)), MU - LAM, s)(MU)
    return [vadd(_run(t1, A.gen(i)), vscale(s, _run(t2, A.gen(i)))) for i in range(A.rank)]


def gc_jacobi_residual(A: Algebra, f: ConfMap, g: ConfMap, h: ConfMap) -> List[Vec]:
    """BiHom-Jacobi for the gc bracket with twists ``f -> f o alpha``, ``f -> f o beta``.

    Slots: x1 for f, x2 for g, x3 for the result.
    """
    al, be = _twist(A)
    lam, mu, nu = X(1), X(2), X(3)
    pf, pg, ph = f.parity, g.parity, h.parity
    inner1 = _bracket_op(_op(g), _op(h), mu, sign(pg * ph))
    t1 = _bracket_op(_op(al(be(f))), inner1, lam, sign(pf * (pg + ph)))(nu)
    inner2 = _bracket_op(_op(be(f)), _op(g), lam, sign(pf * pg))
    t2 = _bracket_op(inner2, _op(be(h)), lam + mu, sign((pf + pg) * ph))(nu)
    inner3 = _bracket_op(_op(al(f)), _op(h), lam, sign(pf * ph))
    t3 = _bracket_op(_op(be(g)), inner3, mu, sign(pg * (pf + ph)))(nu)
    s = sign(pf * pg)
    out = []
    for i in range(A.rank):
        e = A.gen(i)
        out.append(vsub(vsub(_run(t1, e), _run(t2, e)), vscale(s, _run(t3, e))))
    return out
