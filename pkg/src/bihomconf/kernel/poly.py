"""Exact multivariate polynomials over the rationals.

Variable 0 is ``D`` (the derivation acting on a free module), variables
``1, 2, ...`` are the lambda-slots ``X1, X2, ...``.  Indices at or above
``PARAM_BASE`` are free parameters used for generic (symbolic) ansatz
coefficients; no structural substitution ever touches them.

Monomials are exponent tuples with trailing zeros stripped, so the symbol
universe grows on demand and two equal polynomials always share one
normalized representation.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

Monomial = Tuple[int, ...]

PARAM_BASE = 64


def _strip(exp: Sequence[int]) -> Monomial:
    n = len(exp)
    while n and exp[n - 1] == 0:
        n -= 1
    return tuple(exp[:n])


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return a
    out = list(a)
    for i, e in enumerate(b):
        out[i] += e
    return tuple(out)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    return Fraction(c)


class Poly:
    """Immutable polynomial with :class:`~fractions.Fraction` coefficients."""

    __slots__ = ("_t", "_h")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        t: Dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                c = _as_fraction(c)
                if c:
                    m = _strip(m)
                    s = t.get(m, 0) + c
                    if s:
                        t[m] = s
                    else:
                        t.pop(m, None)
        self._t = t
        self._h = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "Poly":
        # terms already normalized
        p = cls.__new__(cls)
        p._t = terms
        p._h = None
        return p

    # constructors
    @classmethod
    def const(cls, c) -> "Poly":
        c = _as_fraction(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, i: int, power: int = 1) -> "Poly":
        exp = [0] * (i + 1)
        exp[i] = power
        return cls._raw({_strip(exp): Fraction(1)})

    @classmethod
    def coerce(cls, x) -> "Poly":
        return x if isinstance(x, Poly) else cls.const(x)

    # inspection
    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_const(self) -> bool:
        return not self._t or (len(self._t) == 1 and () in self._t)

    def const_value(self) -> Fraction:
        return self._t.get((), Fraction(0))

    def degree(self) -> int:
        """Total degree; ``-1`` for the zero polynomial."""
        return max((sum(m) for m in self._t), default=-1)

    def degree_in(self, var: int) -> int:
        return max((m[var] if var < len(m) else 0 for m in self._t), default=-1)

    def variables(self) -> set:
        out = set()
        for m in self._t:
            out.update(i for i, e in enumerate(m) if e)
        return out

    def max_var(self) -> int:
        return max((len(m) - 1 for m in self._t), default=-1)

    def only_vars(self, allowed: Iterable[int]) -> bool:
        return self.variables() <= set(allowed)

    # arithmetic
    def __add__(self, other) -> "Poly":
        other = Poly.coerce(other)
        if not other._t:
            return self
        if not self._t:
            return other
        t = dict(self._t)
        for m, c in other._t.items():
            s = t.get(m, 0) + c
            if s:
                t[m] = s
            else:
                del t[m]
        return Poly._raw(t)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self._t.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-Poly.coerce(other))

    def __rsub__(self, other) -> "Poly":
        return Poly.coerce(other) + (-self)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = _as_fraction(other)
            if not c:
                return ZERO
            return Poly._raw({m: v * c for m, v in self._t.items()})
        if not self._t or not other._t:
            return ZERO
        a, b = self._t, other._t
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1 and () in b:
            c = b[()]
            return Poly._raw({m: v * c for m, v in a.items()})
        t: Dict[Monomial, Fraction] = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = _mono_mul(ma, mb)
                s = t.get(m, 0) + ca * cb
                if s:
                    t[m] = s
                else:
                    t.pop(m, None)
        return Poly._raw(t)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, c) -> "Poly":
        return self * (Fraction(1) / _as_fraction(c))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            try:
                other = Poly.const(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self._t == other._t

    def __hash__(self) -> int:
        if self._h is None:
            self._h = hash(frozenset(self._t.items()))
        return self._h

    # substitution
    def subs(self, mapping: Mapping[int, "Poly"]) -> "Poly":
        """Simultaneous substitution ``var -> poly`` for every key of ``mapping``."""
        if not self._t or not mapping:
            return self
        mapping = {k: Poly.coerce(v) for k, v in mapping.items()}
        if not (self.variables() & set(mapping)):
            return self
        powers: Dict[Tuple[int, int], Poly] = {}

        def pw(v: int, e: int) -> Poly:
            key = (v, e)
            if key not in powers:
                powers[key] = mapping[v] ** e
            return powers[key]

        acc: Dict[Monomial, Fraction] = {}
        out = ZERO
        for m, c in self._t.items():
            kept = []
            factor = None
            for v, e in enumerate(m):
                if e and v in mapping:
                    kept.append(0)
                    f = pw(v, e)
                    factor = f if factor is None else factor * f
                else:
                    kept.append(e)
            kept_m = _strip(kept)
            if factor is None:
                s = acc.get(kept_m, 0) + c
                if s:
                    acc[kept_m] = s
                else:
                    acc.pop(kept_m, None)
            else:
                out = out + Poly._raw({kept_m: c}) * factor
        return out + Poly._raw(acc)

    def rename(self, mapping: Mapping[int, int]) -> "Poly":
        """Permute/rename variables (a substitution by variables, done directly)."""
        t: Dict[Monomial, Fraction] = {}
        for m, c in self._t.items():
            exp: Dict[int, int] = {}
            for v, e in enumerate(m):
                if e:
                    w = mapping.get(v, v)
                    exp[w] = exp.get(w, 0) + e
            size = max(exp, default=-1) + 1
            nm = _strip([exp.get(i, 0) for i in range(size)])
            s = t.get(nm, 0) + c
            if s:
                t[nm] = s
            else:
                t.pop(nm, None)
        return Poly._raw(t)

    def coefficient(self, var: int, power: int) -> "Poly":
        """Coefficient of ``var**power`` (a polynomial free of ``var``)."""
        t: Dict[Monomial, Fraction] = {}
        for m, c in self._t.items():
            e = m[var] if var < len(m) else 0
            if e == power:
                if var < len(m):
                    mm = list(m)
                    mm[var] = 0
                    m = _strip(mm)
                t[m] = c
        return Poly._raw(t)

    def coefficients_in(self, var: int) -> Dict[int, "Poly"]:
        out: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self._t.items():
            e = m[var] if var < len(m) else 0
            if e:
                mm = list(m)
                mm[var] = 0
                m = _strip(mm)
            out.setdefault(e, {})[m] = c
        return {e: Poly._raw(t) for e, t in out.items()}

    # univariate (in D) division
    def leading_d(self) -> Tuple[int, Fraction]:
        if not self.only_vars((0,)):
            raise ValueError("not a polynomial in D alone")
        deg = self.degree()
        return deg, self._t.get((deg,) if deg > 0 else (), Fraction(0))

    def divmod_d(self, other: "Poly") -> Tuple["Poly", "Poly"]:
        """Euclidean division in Q[D]."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        dq, lq = other.leading_d()
        q, r = ZERO, self
        while not r.is_zero():
            dr, lr = r.leading_d()
            if dr < dq:
                break
            t = Poly._raw({_strip((dr - dq,)): lr / lq})
            q = q + t
            r = r - t * other
        return q, r

    # rendering
    def sort_key(self, m: Monomial):
        return (-sum(m), tuple(-e for e in m))

    def to_str(self, names: Mapping[int, str] | None = None) -> str:
        if not self._t:
            return "0"
        names = dict(names or {})
        parts = []
        for m in sorted(self._t, key=self.sort_key):
            c = self._t[m]
            factors = []
            for v, e in enumerate(m):
                if e:
                    nm = names.get(v) or default_name(v)
                    factors.append(nm if e == 1 else f"{nm}^{e}")
            mono = "*".join(factors)
            mag = abs(c)
            cs = str(mag)
            if mono:
                body = mono if mag == 1 else f"{cs}*{mono}"
            else:
                body = cs
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f"{sign}{body}"
        return out

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"Poly({self.to_str()})"


def default_name(v: int) -> str:
    if v == 0:
        return "d"
    if v >= PARAM_BASE:
        return f"c{v - PARAM_BASE}"
    return f"x{v}"


ZERO = Poly._raw({})
ONE = Poly._raw({(): Fraction(1)})
D = Poly.var(0)


def X(k: int) -> Poly:
    """The k-th lambda-slot symbol (k >= 1)."""
    if k < 1:
        raise ValueError("slot index starts at 1")
    return Poly.var(k)


def param(k: int) -> Poly:
    return Poly.var(PARAM_BASE + k)


def monomials(variables: Sequence[int], max_degree: int) -> list:
    """All monomials in ``variables`` of total degree <= max_degree, as Polys."""
    out = []
    if max_degree < 0:
        return out

    def rec(i, remaining, exp):
        if i == len(variables):
            e = [0] * (max(variables, default=0) + 1)
            for v, k in zip(variables, exp):
                e[v] = k
            out.append(Poly._raw({_strip(e): Fraction(1)}))
            return
        for k in range(remaining + 1):
            rec(i + 1, remaining - k, exp + [k])

    rec(0, max_degree, [])
    out.sort(key=lambda p: ONE.sort_key(next(iter(p._t))), reverse=True)
    return out


def shift_partial(p: Poly, by: Poly) -> Poly:
    """``D -> D + by``: the rule applied when a coefficient crosses a bracket."""
    return p.subs({0: D + by})


def substitute(p: Poly, var: int, expr: Poly) -> Poly:
    return p.subs({var: expr})


def skew_substitute(p: Poly, slot: int = 1) -> Poly:
    """``X_slot -> -X_slot - D``; an involution."""
    return p.subs({slot: -X(slot) - D})


# vectors of polynomials (module elements and lambda-valued brackets)

def vzero(n: int) -> tuple:
    return (ZERO,) * n


def vadd(u: Sequence[Poly], v: Sequence[Poly]) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence[Poly], v: Sequence[Poly]) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u: Sequence[Poly]) -> tuple:
    return tuple(a * c for a in u)


def vsubs(u: Sequence[Poly], mapping: Mapping[int, Poly]) -> tuple:
    return tuple(a.subs(mapping) for a in u)


def vrename(u: Sequence[Poly], mapping: Mapping[int, int]) -> tuple:
    return tuple(a.rename(mapping) for a in u)


def vis_zero(u: Sequence[Poly]) -> bool:
    return all(a.is_zero() for a in u)


def unit(n: int, i: int, coeff: Poly = ONE) -> tuple:
    return tuple(coeff if k == i else ZERO for k in range(n))
