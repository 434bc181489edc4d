"""Text format for algebras, modules, maps and O-operators.

A document is a sequence of blocks::

    algebra vir {
      generators: L: even, E: odd;
      alpha: L -> L;
      bracket [L, L] = (d+2*x)*L;
    }

Block headers are ``algebra NAME [associative]``, ``superalgebra NAME``,
``module NAME over ALG``, ``map NAME on ALG [parity even|odd]`` and
``ooperator NAME from MODULE to ALG``.  ``d`` is the derivation, ``x`` (or
``x1``) the bracket variable; rationals are written ``p/q``.  Omitted maps are
the identity and omitted table entries are zero.  ``#`` starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .algebra import Algebra, AssocConformal, DMap, parity_name, render_vector
from .constructions import SuperAlgebraFD
from .derivations import ConfMap
from .kernel.poly import D, ONE, ZERO, Poly, X, unit, vadd, vis_zero, vscale, vsub, vzero
from .representations import RepModule

RESERVED = {"d", "x"}
_SLOT = re.compile(r"x(\d+)$")


class DSLError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line, self.col = line, col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<arrow>->) | (?P<num>\d+) | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>[{}\[\]():;,=+\-*/^])
""", re.VERBOSE)


def tokenize(text: str) -> List[Token]:
    out, line, start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise DSLError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


@dataclass
class MapDef:
    name: str
    algebra: str
    map: ConfMap


@dataclass
class OOperatorDef:
    name: str
    module: str
    algebra: str
    map: DMap


@dataclass
class Document:
    """Named definitions in file order."""

    items: Dict[str, object] = field(default_factory=dict)

    def add(self, name: str, obj, tok: Optional[Token] = None):
        if name in self.items:
            raise DSLError(f"duplicate definition {name!r}", *(tok.line, tok.col) if tok else (0, 0))
        self.items[name] = obj

    def get(self, name: str, kind=None):
        if name not in self.items:
            raise DSLError(f"no definition named {name!r}")
        obj = self.items[name]
        if kind is not None and not isinstance(obj, kind):
            raise DSLError(f"{name!r} is not a {getattr(kind, '__name__', kind)}")
        return obj

    def first(self, kind) -> Tuple[str, object]:
        for name, obj in self.items.items():
            if isinstance(obj, kind):
                return name, obj
        raise DSLError(f"no {getattr(kind, '__name__', kind)} definition in the document")

    def names_of(self, kind) -> List[str]:
        return [n for n, o in self.items.items() if isinstance(o, kind)]


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.doc = Document()

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        raise DSLError(msg, tok.line, tok.col)

    def accept(self, text: str) -> Optional[Token]:
        if self.tok.text == text and self.tok.kind != "eof":
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, text: str) -> Token:
        t = self.accept(text)
        if t is None:
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return t

    def ident(self, what: str = "a name") -> Token:
        if self.tok.kind != "ident":
            self.error(f"expected {what}, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    # blocks
    def document(self) -> Document:
        while self.tok.kind != "eof":
            head = self.ident("a block keyword")
            handler = {
                "algebra": self.algebra_block, "superalgebra": self.superalgebra_block,
                "module": self.module_block, "map": self.map_block, "ooperator": self.ooperator_block,
            }.get(head.text)
            if handler is None:
                self.error(f"unknown block {head.text!r}", head)
            handler()
        return self.doc

    def _generators(self, block: Token):
        names, pars = [], []
        if self.tok.text == ";":
            self.error("empty generators block", block)
        while True:
            t = self.ident("a generator name")
            if t.text in RESERVED or _SLOT.match(t.text):
                self.error(f"{t.text!r} is reserved", t)
            if t.text in names:
                self.error(f"duplicate generator {t.text!r}", t)
            self.expect(":")
            p = self.ident("a parity")
            if p.text not in ("even", "odd"):
                self.error("parity must be even or odd", p)
            names.append(t.text)
            pars.append(0 if p.text == "even" else 1)
            if not self.accept(","):
                break
        self.expect(";")
        return names, pars

    def _body(self, allowed_tables: Sequence[str], maps: Sequence[str], call: Optional[str] = None):
        """Parse the statements of a block; returns (gens, maps, tables, calls)."""
        block = self.expect("{")
        gens = None
        found_maps: Dict[str, List] = {}
        tables: List = []
        calls: List = []
        while not self.accept("}"):
            kw = self.ident("a statement")
            if kw.text == "generators":
                if gens is not None:
                    self.error("generators declared twice", kw)
                self.expect(":")
                gens = self._generators(kw)
            elif kw.text in maps:
                if kw.text in found_maps:
                    self.error(f"{kw.text} declared twice", kw)
                self.expect(":")
                entries = []
                while True:
                    src = self.ident("a generator name")
                    self.expect("->")
                    entries.append((src, self.expr_tokens()))
                    if not self.accept(","):
                        break
                self.expect(";")
                found_maps[kw.text] = entries
            elif kw.text in allowed_tables:
                self.expect("[")
                a = self.ident("a generator name")
                self.expect(",")
                b = self.ident("a generator name")
                self.expect("]")
                self.expect("=")
                tables.append((kw, a, b, self.expr_tokens()))
                self.expect(";")
            elif call is not None and kw.text == call:
                self.expect("(")
                a = self.ident("a generator name")
                self.expect(")")
                self.expect("=")
                calls.append((kw, a, self.expr_tokens()))
                self.expect(";")
            else:
                self.error(f"unexpected statement {kw.text!r}", kw)
        return block, gens, found_maps, tables, calls

    def expr_tokens(self) -> List[Token]:
        """Collect the tokens of an expression (up to ',' or ';' at depth 0)."""
        out, opened = [], []
        while True:
            t = self.tok
            if opened and (t.text in (",", ";") or t.kind == "eof" or t.text in "{}" and t.kind == "sym"):
                self.error("unclosed '('", opened[-1])
            if t.kind == "eof" or t.text in "{}" and t.kind == "sym":
                self.error("unterminated expression")
            if t.text in (",", ";"):
                break
            if t.text == "(":
                opened.append(t)
            elif t.text == ")":
                if not opened:
                    self.error("unbalanced ')'")
                opened.pop()
            out.append(t)
            self.i += 1
        if not out:
            self.error("empty expression")
        return out

    def _need_gens(self, block, gens):
        if gens is None:
            self.error("missing generators statement", block)
        return gens

    def _map_from(self, entries, names, ctx, what) -> DMap:
        images = [unit(len(names), i) for i in range(len(names))]
        seen = set()
        for src, toks in entries:
            if src.text not in names:
                self.error(f"unknown generator {src.text!r} in {what}", src)
            if src.text in seen:
                self.error(f"{what} of {src.text!r} given twice", src)
            seen.add(src.text)
            images[names.index(src.text)] = ctx.vector(toks)
        return DMap(images, len(names))

    def _check_entry_parity(self, vec, names, pars, expected, tok, what):
        for c, p, nm in zip(vec, pars, names):
            if not c.is_zero() and p != expected:
                self.error(f"parity mismatch in {what}: {nm} has the wrong parity", tok)

    def _even_map(self, m: DMap, names, pars, tok, what):
        for i, im in enumerate(m.images):
            self._check_entry_parity(im, names, pars, pars[i], tok, f"{what}({names[i]})")

    def algebra_block(self):
        name = self.ident("an algebra name")
        assoc = bool(self.accept("associative"))
        block, gens, maps, tables, _ = self._body(("bracket", "product"), ("alpha", "beta"))
        names, pars = self._need_gens(block, gens)
        ctx = _Context(names, slots=False)
        alpha = self._map_from(maps.get("alpha", []), names, ctx, "alpha")
        beta = self._map_from(maps.get("beta", []), names, ctx, "beta")
        self._even_map(alpha, names, pars, block, "alpha")
        self._even_map(beta, names, pars, block, "beta")
        table = self._table(tables, names, names, names, pars, pars, pars)
        cls = AssocConformal if assoc else Algebra
        self.doc.add(name.text, cls(names, pars, table, alpha, beta), name)

    def _table(self, tables, left, right, out_names, lp, rp, op):
        ctx = _Context(out_names, slots=True)
        table = {}
        for kw, a, b, toks in tables:
            if a.text not in left:
                self.error(f"unknown generator {a.text!r}", a)
            if b.text not in right:
                self.error(f"unknown generator {b.text!r}", b)
            key = (left.index(a.text), right.index(b.text))
            if key in table:
                self.error(f"entry [{a.text}, {b.text}] given twice", kw)
            vec = ctx.vector(toks)
            self._check_entry_parity(vec, out_names, op, (lp[key[0]] + rp[key[1]]) % 2, kw,
                                     f"[{a.text}, {b.text}]")
            table[key] = vec
        return table

    def superalgebra_block(self):
        name = self.ident("a superalgebra name")
        block, gens, maps, tables, _ = self._body(("product", "bracket"), ("alpha", "beta"))
        names, pars = self._need_gens(block, gens)
        ctx = _Context(names, slots=False, scalar_only=True)
        alpha = self._map_from(maps.get("alpha", []), names, ctx, "alpha")
        beta = self._map_from(maps.get("beta", []), names, ctx, "beta")
        self._even_map(alpha, names, pars, block, "alpha")
        self._even_map(beta, names, pars, block, "beta")
        consts = {}
        for kw, a, b, toks in tables:
            for t in (a, b):
                if t.text not in names:
                    self.error(f"unknown generator {t.text!r}", t)
            key = (names.index(a.text), names.index(b.text))
            if key in consts:
                self.error(f"entry [{a.text}, {b.text}] given twice", kw)
            vec = ctx.vector(toks)
            self._check_entry_parity(vec, names, pars, (pars[key[0]] + pars[key[1]]) % 2, kw,
                                     f"[{a.text}, {b.text}]")
            consts[key] = tuple(c.const_value() for c in vec)
        self.doc.add(name.text, SuperAlgebraFD(names, pars, consts, alpha, beta), name)

    def module_block(self):
        name = self.ident("a module name")
        self.expect("over")
        alg_tok = self.ident("an algebra name")
        A = self._lookup(alg_tok, Algebra)
        block, gens, maps, tables, _ = self._body(("action",), ("phi", "psi"))
        names, pars = self._need_gens(block, gens)
        clash = set(names) & set(A.names)
        if clash:
            self.error(f"module generators clash with algebra generators: {sorted(clash)}", block)
        ctx = _Context(names, slots=False)
        phi = self._map_from(maps.get("phi", []), names, ctx, "phi")
        psi = self._map_from(maps.get("psi", []), names, ctx, "psi")
        self._even_map(phi, names, pars, block, "phi")
        self._even_map(psi, names, pars, block, "psi")
        table = self._table(tables, A.names, names, names, A.parities, pars, pars)
        self.doc.add(name.text, _ModuleRef(RepModule(A, names, pars, table, phi, psi), alg_tok.text), name)

    def _lookup(self, tok: Token, kind):
        obj = self.doc.items.get(tok.text)
        if isinstance(obj, _ModuleRef):
            obj = obj.module
        if obj is None or not isinstance(obj, kind):
            self.error(f"unresolved reference {tok.text!r}", tok)
        return obj

    def map_block(self):
        name = self.ident("a map name")
        self.expect("on")
        alg_tok = self.ident("an algebra name")
        A = self._lookup(alg_tok, Algebra)
        parity = 0
        if self.accept("parity"):
            p = self.ident("a parity")
            if p.text not in ("even", "odd"):
                self.error("parity must be even or odd", p)
            parity = 0 if p.text == "even" else 1
        block, gens, _, _, calls = self._body((), (), call=name.text)
        if gens is not None:
            self.error("maps take the generators of their algebra", block)
        ctx = _Context(A.names, slots=True)
        images = [vzero(A.rank) for _ in range(A.rank)]
        seen = set()
        for kw, a, toks in calls:
            if a.text not in A.names:
                self.error(f"unknown generator {a.text!r}", a)
            if a.text in seen:
                self.error(f"image of {a.text!r} given twice", a)
            seen.add(a.text)
            i = A.names.index(a.text)
            vec = ctx.vector(toks)
            self._check_entry_parity(vec, A.names, A.parities, (A.parities[i] + parity) % 2, kw,
                                     f"{name.text}({a.text})")
            images[i] = vec
        self.doc.add(name.text, MapDef(name.text, alg_tok.text, ConfMap(images, parity)), name)

    def ooperator_block(self):
        name = self.ident("an operator name")
        self.expect("from")
        mod_tok = self.ident("a module name")
        M = self._lookup(mod_tok, RepModule)
        self.expect("to")
        alg_tok = self.ident("an algebra name")
        A = self._lookup(alg_tok, Algebra)
        if M.algebra is not A:
            self.error(f"module {mod_tok.text!r} is not over {alg_tok.text!r}", mod_tok)
        block, gens, _, _, calls = self._body((), (), call=name.text)
        if gens is not None:
            self.error("operators take the generators of their module", block)
        ctx = _Context(A.names, slots=False)
        images = [vzero(A.rank) for _ in range(M.rank)]
        seen = set()
        for kw, u, toks in calls:
            if u.text not in M.names:
                self.error(f"unknown module generator {u.text!r}", u)
            if u.text in seen:
                self.error(f"image of {u.text!r} given twice", u)
            seen.add(u.text)
            k = M.names.index(u.text)
            vec = ctx.vector(toks)
            self._check_entry_parity(vec, A.names, A.parities, M.parities[k], kw, f"{name.text}({u.text})")
            images[k] = vec
        self.doc.add(name.text, OOperatorDef(name.text, mod_tok.text, alg_tok.text, DMap(images, A.rank)), name)


@dataclass
class _ModuleRef:
    module: RepModule
    algebra: str


class _Context:
    """Evaluates an expression token list to a vector over the given generators."""

    def __init__(self, names: Sequence[str], slots: bool, scalar_only: bool = False):
        self.names = list(names)
        self.slots = slots
        self.scalar_only = scalar_only

    def vector(self, toks: List[Token]) -> Tuple[Poly, ...]:
        self.toks, self.i = toks, 0
        val = self._sum()
        if self.i != len(toks):
            t = toks[self.i]
            raise DSLError(f"unexpected {t.text!r}", t.line, t.col)
        if isinstance(val, Poly):
            if val.is_zero():
                return vzero(len(self.names))
            t = toks[0]
            raise DSLError("expected a combination of generators", t.line, t.col)
        return val

    def _peek(self):
        return self.toks[self.i].text if self.i < len(self.toks) else None

    def _fail(self, msg):
        t = self.toks[min(self.i, len(self.toks) - 1)]
        raise DSLError(msg, t.line, t.col)

    def _sum(self):
        sgn = -1 if self._peek() == "-" else 1
        if self._peek() in ("-", "+"):
            self.i += 1
        acc = self._scale(sgn, self._product())
        while self._peek() in ("+", "-"):
            op = self.toks[self.i].text
            self.i += 1
            rhs = self._product()
            acc = self._add(acc, self._scale(-1 if op == "-" else 1, rhs))
        return acc

    def _scale(self, c, v):
        return v * c if isinstance(v, Poly) else vscale(c, v)

    def _add(self, a, b):
        if isinstance(a, Poly) and isinstance(b, Poly):
            return a + b
        if isinstance(a, Poly) or isinstance(b, Poly):
            zero_side = a if isinstance(a, Poly) else b
            if zero_side.is_zero():
                return b if isinstance(a, Poly) else a
            self._fail("cannot add a polynomial to a generator combination")
        return vadd(a, b)

    def _product(self):
        acc = self._power()
        while self._peek() in ("*", "/"):
            op = self.toks[self.i].text
            self.i += 1
            rhs = self._power()
            if op == "/":
                if not isinstance(rhs, Poly) or not rhs.is_const() or rhs.is_zero():
                    self._fail("division only by a nonzero rational")
                acc = self._scale(Fraction(1) / rhs.const_value(), acc)
            elif isinstance(acc, Poly):
                acc = acc * rhs if isinstance(rhs, Poly) else vscale(acc, rhs)
            elif isinstance(rhs, Poly):
                acc = vscale(rhs, acc)
            else:
                self._fail("cannot multiply two generator combinations")
        return acc

    def _power(self):
        base = self._atom()
        if self._peek() == "^":
            self.i += 1
            if self.i >= len(self.toks) or self.toks[self.i].kind != "num":
                self._fail("exponent must be a nonnegative integer")
            e = int(self.toks[self.i].text)
            self.i += 1
            if not isinstance(base, Poly):
                self._fail("cannot raise a generator combination to a power")
            base = base ** e
        return base

    def _atom(self):
        if self.i >= len(self.toks):
            self._fail("unexpected end of expression")
        t = self.toks[self.i]
        self.i += 1
        if t.kind == "num":
            return Poly.const(int(t.text))
        if t.text == "(":
            v = self._sum()
            if self._peek() != ")":
                self._fail("expected ')'")
            self.i += 1
            return v
        if t.text == "-":
            return self._scale(-1, self._atom())
        if t.kind == "ident":
            if t.text in self.names:
                return unit(len(self.names), self.names.index(t.text))
            if t.text == "d" and not self.scalar_only:
                return D
            m = _SLOT.match(t.text)
            if (t.text == "x" or m) and self.slots:
                if m and m.group(1) != "1":
                    raise DSLError(f"only the slot x (or x1) is available, not {t.text!r}", t.line, t.col)
                return X(1)
            raise DSLError(f"unknown symbol {t.text!r}", t.line, t.col)
        raise DSLError(f"unexpected {t.text!r}", t.line, t.col)


def parse(text: str) -> Document:
    doc = _Parser(text).document()
    # unwrap module references
    out = Document()
    for n, o in doc.items.items():
        out.items[n] = o.module if isinstance(o, _ModuleRef) else o
    return out


def parse_file(path) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# --- serialization ---------------------------------------------------------------

_SER_SLOTS = {1: "x"}


def _vec(v, names) -> str:
    return render_vector(v, names, _SER_SLOTS)


def _gens(names, pars) -> str:
    return "  generators: " + ", ".join(f"{n}: {parity_name(p)}" for n, p in zip(names, pars)) + ";\n"


def _map_line(label, m: DMap, names) -> str:
    entries = [f"{names[i]} -> {_vec(im, names)}" for i, im in enumerate(m.images) if im != unit(len(names), i)]
    return f"  {label}: " + ", ".join(entries) + ";\n" if entries else ""


def serialize_algebra(name: str, A: Algebra) -> str:
    assoc = isinstance(A, AssocConformal)
    out = f"algebra {name}{' associative' if assoc else ''} {{\n" + _gens(A.names, A.parities)
    out += _map_line("alpha", A.alpha, A.names) + _map_line("beta", A.beta, A.names)
    kw = "product" if assoc else "bracket"
    for i in range(A.rank):
        for j in range(A.rank):
            e = A.table[i][j]
            if not vis_zero(e):
                out += f"  {kw} [{A.names[i]}, {A.names[j]}] = {_vec(e, A.names)};\n"
    return out + "}\n"


def serialize_superalgebra(name: str, g: SuperAlgebraFD) -> str:
    out = f"superalgebra {name} {{\n" + _gens(g.names, g.parities)
    out += _map_line("alpha", g.alpha, g.names) + _map_line("beta", g.beta, g.names)
    for (i, j), v in sorted(g.consts.items()):
        vec = tuple(Poly.const(c) for c in v)
        if not vis_zero(vec):
            out += f"  product [{g.names[i]}, {g.names[j]}] = {_vec(vec, g.names)};\n"
    return out + "}\n"


def serialize_module(name: str, M: RepModule, algebra_name: str) -> str:
    out = f"module {name} over {algebra_name} {{\n" + _gens(M.names, M.parities)
    out += _map_line("phi", M.phi, M.names) + _map_line("psi", M.psi, M.names)
    A = M.algebra
    for i in range(A.rank):
        for u in range(M.rank):
            e = M.rho_table[i][u]
            if not vis_zero(e):
                out += f"  action [{A.names[i]}, {M.names[u]}] = {_vec(e, M.names)};\n"
    return out + "}\n"


def serialize_map(d: MapDef, A: Algebra) -> str:
    out = f"map {d.name} on {d.algebra} parity {parity_name(d.map.parity)} {{\n"
    for i, im in enumerate(d.map.images):
        if not vis_zero(im):
            out += f"  {d.name}({A.names[i]}) = {_vec(im, A.names)};\n"
    return out + "}\n"


def serialize_ooperator(d: OOperatorDef, M: RepModule, A: Algebra) -> str:
    out = f"ooperator {d.name} from {d.module} to {d.algebra} {{\n"
    for u, im in enumerate(d.map.images):
        if not vis_zero(im):
            out += f"  {d.name}({M.names[u]}) = {_vec(im, A.names)};\n"
    return out + "}\n"


def serialize(doc: Document) -> str:
    blocks = []
    names_of = {id(o): n for n, o in doc.items.items()}
    for name, obj in doc.items.items():
        if isinstance(obj, SuperAlgebraFD):
            blocks.append(serialize_superalgebra(name, obj))
        elif isinstance(obj, Algebra):
            blocks.append(serialize_algebra(name, obj))
        elif isinstance(obj, RepModule):
            blocks.append(serialize_module(name, obj, names_of[id(obj.algebra)]))
        elif isinstance(obj, MapDef):
            blocks.append(serialize_map(obj, doc.get(obj.algebra, Algebra)))
        elif isinstance(obj, OOperatorDef):
            blocks.append(serialize_ooperator(obj, doc.get(obj.module, RepModule), doc.get(obj.algebra, Algebra)))
    return "\n".join(blocks)


def document_of(**items) -> Document:
    doc = Document()
    for n, o in items.items():
        doc.add(n, o)
    return doc
