"""Parser and printer for the forge description language.

Top-level statements (one per line unless braced):

    a b d^-1 e^-1                                  twist word
    comm(a b, phi)    conj(w, e^-1)                commutator / conjugate
    gens: x,y ; rels: x y x^-1 y^-1                presentation
    bundle { fiber_genus 2; alpha: phi; beta: a b }
    luttinger { torus e beta; meridian comm(z, alpha''); slope +1 }
    ledger W { class F; class Gamma; pair F Gamma = 1 section_meets_fiber }
    form { ring Z; matrix [[0,1],[1,1]] (+) diag(-1,-1,-1,-1) }
    knot 4_1 { seifert [[1,1],[0,-1]]; g4 1; sna true }
    claim "my.check": a b a == b a b

``#`` starts a comment.  ``parse(print_program(nodes)) == nodes``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from . import mcg
from .bundles import BundleSpec, LuttingerDatum
from .forms import BilinearForm, direct_sum, form
from .homcalc import GroupPresentation
from .knots import InvalidSeifert, KnotRecord, SeifertMatrix
from .mcg import Comm, Conj, Gen, TwistWord
from .quotients import CycleLedger, PairEntry
from .words import Alphabet, Word

MCG_NAMES = frozenset(mcg.CHAIN) | {"phi", "eps"}
MERIDIAN_NAMES = frozenset(mcg.CURVE_WORDS) | {"alpha'", "beta'", "alpha''", "beta''"}
_KEYWORDS = {"comm", "conj"}


class ParseError(SyntaxError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


class UnknownGenerator(ParseError):
    pass


@dataclass(frozen=True)
class FormSpec:
    blocks: tuple[tuple[tuple[int, ...], ...], ...]
    ring: str = "Z"
    name: str = ""

    def form(self) -> BilinearForm:
        if not self.blocks:
            return BilinearForm((), self.ring)
        return direct_sum(*(form(b, self.ring) for b in self.blocks))


@dataclass(frozen=True)
class Claim:
    """User-stated mapping-class equality, checked by ``forge verify``."""

    id: str
    lhs: TwistWord
    rhs: TwistWord


Node = Union[TwistWord, GroupPresentation, BundleSpec, LuttingerDatum, CycleLedger, FormSpec, KnotRecord, Claim]


# -- lexer --------------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_LEX = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<string>"[^"\n]*")
  | (?P<sum>\(\+\))
  | (?P<eq2>==)
  | (?P<num>[+-]?\d+(?![A-Za-z0-9_']))
  | (?P<name>[A-Za-z0-9_][A-Za-z0-9_']*)
  | (?P<sym>[\^(){}\[\],;:=/])
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _LEX.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            out.append(Token("nl", "\n", line, col))
            line, line_start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            out.append(Token(kind, m.group(), line, col))
        pos = m.end()
    col = pos - line_start + 1
    out.append(Token("eof", "", line, col))
    return out


# -- parser -------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.depth = 0

    # token helpers
    def peek(self) -> Token:
        while self.depth and self.toks[self.i].kind == "nl":
            self.i += 1
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.peek()
        if t.kind != "eof":
            self.i += 1
        if t.text in ("{", "(", "["):
            self.depth += 1
        elif t.text in ("}", ")", "]"):
            self.depth -= 1
        return t

    def error(self, msg: str, tok: Optional[Token] = None) -> ParseError:
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "eof" else ("end of line" if tok.kind == "nl" else repr(tok.text))
        return ParseError(f"{msg}, found {found}", tok.line, tok.col)

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.text == text and t.kind in ("sym", "name", "sum", "eq2")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.peek().kind != kind:
            raise self.error(f"expected {what}")
        return self.next()

    def integer(self) -> int:
        return int(self.expect_kind("num", "an integer").text)

    def end_of_field(self, close: str = "}") -> None:
        if self.at(";"):
            self.next()
        elif not self.at(close):
            raise self.error(f"expected ';' or {close!r}")

    # program
    def program(self) -> list[Node]:
        nodes: list[Node] = []
        while True:
            t = self.peek()
            if t.kind == "eof":
                return nodes
            if t.kind == "nl" or t.text == ";":
                self.next()
                continue
            nodes.append(self.statement())
            t = self.peek()
            if t.kind not in ("nl", "eof") and t.text != ";":
                raise self.error("expected end of statement")

    def statement(self) -> Node:
        t = self.peek()
        if t.kind == "name":
            handler = {
                "gens": self.presentation, "bundle": self.bundle, "luttinger": self.luttinger,
                "ledger": self.ledger, "form": self.form_block, "knot": self.knot, "claim": self.claim,
            }.get(t.text)
            if handler is not None:
                return handler()
        return self.expr(MCG_NAMES)

    # expressions
    def expr(self, names: Optional[frozenset]) -> TwistWord:
        items = []
        seen = False
        while True:
            t = self.peek()
            if t.kind == "name":
                items.append(self.item(names))
            elif t.kind == "num" and t.text == "1":
                self.next()
            else:
                break
            seen = True
        if not seen:
            raise self.error("expected a word")
        return TwistWord(tuple(items))

    def item(self, names: Optional[frozenset]):
        t = self.next()
        if t.text in _KEYWORDS and self.at("("):
            self.next()
            left = self.expr(names)
            self.expect(",")
            right = self.expr(names)
            self.expect(")")
            return Comm(left, right) if t.text == "comm" else Conj(left, right)
        if names is not None and t.text not in names:
            raise UnknownGenerator(f"unknown generator {t.text!r}", t.line, t.col)
        exp = 1
        if self.at("^"):
            self.next()
            tok = self.peek()
            exp = self.integer()
            if exp == 0:
                raise ParseError("exponent must be nonzero", tok.line, tok.col)
        return Gen(t.text, exp)

    # statements
    def presentation(self) -> GroupPresentation:
        self.expect("gens")
        self.expect(":")
        gens: list[str] = []
        while True:
            tok = self.expect_kind("name", "a generator name")
            if tok.text in gens:
                raise ParseError(f"duplicate generator {tok.text!r}", tok.line, tok.col)
            gens.append(tok.text)
            if not self.at(","):
                break
            self.next()
        self.expect(";")
        self.expect("rels")
        self.expect(":")
        alpha = Alphabet(tuple(gens))
        rels: list[Word] = []
        if self.peek().kind not in ("nl", "eof"):
            rels.append(words_of(self.expr(frozenset(gens)), alpha))
            while self.at(","):
                self.next()
                rels.append(words_of(self.expr(frozenset(gens)), alpha))
        return GroupPresentation(alpha, tuple(rels))

    def _block_head(self, keyword: str, name_required: bool = False) -> tuple[str, Token]:
        start = self.expect(keyword)
        name = ""
        if self.peek().kind == "name":
            name = self.next().text
        elif name_required:
            raise self.error(f"{keyword} needs a name")
        self.expect("{")
        return name, start

    def bundle(self) -> BundleSpec:
        name, start = self._block_head("bundle")
        fields: dict = {}
        while not self.at("}"):
            key = self.expect_kind("name", "a bundle field").text
            if key == "fiber_genus":
                fields["fiber_genus"] = self.integer()
            elif key == "base":
                fields["base"] = self.expect_kind("name", "a base name").text
            elif key in ("alpha", "beta"):
                self.expect(":")
                fields[f"monodromy_{key}"] = self.expr(MCG_NAMES)
            else:
                raise ParseError(f"unknown bundle field {key!r}", start.line, start.col)
            self.end_of_field()
        self.expect("}")
        for k in ("monodromy_alpha", "monodromy_beta"):
            if k not in fields:
                raise ParseError(f"bundle is missing {k.split('_')[1]}", start.line, start.col)
        try:
            return BundleSpec(name=name or "R", **fields)
        except ValueError as exc:
            raise ParseError(str(exc), start.line, start.col) from None

    def luttinger(self) -> LuttingerDatum:
        name, start = self._block_head("luttinger")
        curve = direction = None
        meridian = None
        slope = 1
        while not self.at("}"):
            key = self.expect_kind("name", "a luttinger field").text
            if key == "torus":
                curve = self.expect_kind("name", "a fiber curve").text
                direction = self.expect_kind("name", "alpha or beta").text
            elif key == "meridian":
                meridian = self.expr(MERIDIAN_NAMES)
            elif key == "slope":
                slope = self.integer()
            else:
                raise ParseError(f"unknown luttinger field {key!r}", start.line, start.col)
            self.end_of_field()
        self.expect("}")
        if curve is None:
            raise ParseError("luttinger block needs a torus", start.line, start.col)
        try:
            return LuttingerDatum(curve, direction, meridian, slope, name)
        except ValueError as exc:
            raise ParseError(str(exc), start.line, start.col) from None

    def ledger(self) -> CycleLedger:
        name, start = self._block_head("ledger", name_required=True)
        classes: list[str] = []
        entries: list[PairEntry] = []
        while not self.at("}"):
            key = self.expect_kind("name", "'class' or 'pair'")
            if key.text == "class":
                classes.append(self.expect_kind("name", "a class name").text)
            elif key.text == "pair":
                a = self.expect_kind("name", "a class name")
                b = self.expect_kind("name", "a class name")
                for tok in (a, b):
                    if tok.text not in classes:
                        raise UnknownGenerator(f"undeclared class {tok.text!r}", tok.line, tok.col)
                self.expect("=")
                value = self.integer()
                prov = self.peek()
                if prov.kind not in ("name", "string"):
                    raise self.error("pair entry needs a provenance tag")
                self.next()
                entries.append(PairEntry(a.text, b.text, value, prov.text.strip('"')))
            else:
                raise ParseError(f"unknown ledger field {key.text!r}", key.line, key.col)
            self.end_of_field()
        self.expect("}")
        try:
            return CycleLedger(name, tuple(classes), tuple(entries))
        except (ValueError, KeyError) as exc:
            raise ParseError(str(exc), start.line, start.col) from None

    def matrix(self) -> tuple[tuple[int, ...], ...]:
        start = self.expect("[")
        rows = []
        while not self.at("]"):
            self.expect("[")
            row = []
            while not self.at("]"):
                row.append(self.integer())
                if not self.at("]"):
                    self.expect(",")
            self.expect("]")
            rows.append(tuple(row))
            if not self.at("]"):
                self.expect(",")
        self.expect("]")
        if any(len(r) != len(rows) for r in rows):
            raise ParseError("matrix must be square", start.line, start.col)
        return tuple(rows)

    def block(self) -> tuple[tuple[int, ...], ...]:
        if self.at("diag"):
            self.next()
            self.expect("(")
            entries = [self.integer()]
            while self.at(","):
                self.next()
                entries.append(self.integer())
            self.expect(")")
            n = len(entries)
            return tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n))
        return self.matrix()

    def form_block(self) -> FormSpec:
        name, start = self._block_head("form")
        ring = "Z"
        blocks: list = []
        while not self.at("}"):
            key = self.expect_kind("name", "'ring' or 'matrix'").text
            if key == "ring":
                self.expect("Z")
                ring = "Z"
                if self.at("/"):
                    self.next()
                    if self.integer() != 2:
                        raise self.error("only Z and Z/2 are supported")
                    ring = "Z/2"
            elif key == "matrix":
                blocks.append(self.block())
                while self.at("(+)"):
                    self.next()
                    blocks.append(self.block())
            else:
                raise ParseError(f"unknown form field {key!r}", start.line, start.col)
            self.end_of_field()
        self.expect("}")
        spec = FormSpec(tuple(blocks), ring, name)
        try:
            spec.form()
        except ValueError as exc:
            raise ParseError(str(exc), start.line, start.col) from None
        return spec

    def knot(self) -> KnotRecord:
        self.expect("knot")
        name = self.expect_kind("name", "a knot name").text
        start = self.expect("{")
        fields: dict = {}
        while not self.at("}"):
            key = self.expect_kind("name", "a knot field").text
            if key == "seifert":
                fields["seifert"] = self.matrix()
            elif key == "g4":
                fields["g4"] = self.integer()
            elif key == "sna":
                flag = self.expect_kind("name", "true or false")
                if flag.text not in ("true", "false"):
                    raise ParseError("expected true or false", flag.line, flag.col)
                fields["sna"] = flag.text == "true"
            else:
                raise ParseError(f"unknown knot field {key!r}", start.line, start.col)
            self.end_of_field()
        self.expect("}")
        missing = {"seifert", "g4", "sna"} - set(fields)
        if missing:
            raise ParseError(f"knot {name} is missing {sorted(missing)}", start.line, start.col)
        try:
            return KnotRecord(name, SeifertMatrix(fields["seifert"]), fields["g4"], fields["sna"])
        except InvalidSeifert as exc:
            raise ParseError(str(exc), start.line, start.col) from None

    def claim(self) -> Claim:
        self.expect("claim")
        ident = self.expect_kind("string", "a quoted check id").text.strip('"')
        self.expect(":")
        lhs = self.expr(MCG_NAMES)
        self.expect("==")
        rhs = self.expr(MCG_NAMES)
        return Claim(ident, lhs, rhs)


def parse(text: str) -> list[Node]:
    return _Parser(text).program()


def parse_expr(text: str, names: Optional[Iterable[str]] = MCG_NAMES) -> TwistWord:
    """Parse a single expression; ``names=None`` accepts any identifier."""
    p = _Parser(text)
    out = p.expr(None if names is None else frozenset(names))
    if p.peek().kind not in ("eof", "nl"):
        raise p.error("unexpected input after expression")
    return out


def words_of(expr: TwistWord, alpha: Alphabet) -> Word:
    """Evaluate an expression in the free group on ``alpha``."""
    out = Word()
    for item in expr.items:
        if isinstance(item, Gen):
            out = out * alpha.gen(item.name) ** item.exp
        elif isinstance(item, Comm):
            u, v = words_of(item.left, alpha), words_of(item.right, alpha)
            out = out * u * v * u.inverse() * v.inverse()
        else:
            body, by = words_of(item.body, alpha), words_of(item.by, alpha)
            out = out * by * body * by.inverse()
    return out


# -- printer --------------------------------------------------------------------------

def format_expr(tw: TwistWord) -> str:
    if not tw.items:
        return "1"
    parts = []
    for item in tw.items:
        if isinstance(item, Gen):
            parts.append(item.name if item.exp == 1 else f"{item.name}^{item.exp}")
        elif isinstance(item, Comm):
            parts.append(f"comm({format_expr(item.left)}, {format_expr(item.right)})")
        else:
            parts.append(f"conj({format_expr(item.body)}, {format_expr(item.by)})")
    return " ".join(parts)


def _format_matrix(m) -> str:
    return "[" + ",".join("[" + ",".join(map(str, r)) + "]" for r in m) + "]"


def _format_block(m) -> str:
    n = len(m)
    if n > 1 and all(m[i][j] == 0 for i in range(n) for j in range(n) if i != j):
        return "diag(" + ",".join(str(m[i][i]) for i in range(n)) + ")"
    return _format_matrix(m)


def format_node(node: Node) -> str:
    if isinstance(node, TwistWord):
        return format_expr(node)
    if isinstance(node, GroupPresentation):
        if not node.generators.names:
            raise ValueError("a presentation without generators has no DSL form")
        return node.to_dsl()
    if isinstance(node, (BundleSpec, LuttingerDatum, CycleLedger, KnotRecord)):
        return node.to_dsl()
    if isinstance(node, FormSpec):
        head = f"form {node.name}" if node.name else "form"
        mat = "" if not node.blocks else "; matrix " + " (+) ".join(_format_block(b) for b in node.blocks)
        return f"{head} {{ ring {node.ring}{mat} }}"
    if isinstance(node, Claim):
        return f'claim "{node.id}": {format_expr(node.lhs)} == {format_expr(node.rhs)}'
    raise TypeError(f"cannot print {type(node).__name__}")


def print_program(nodes: Iterable[Node]) -> str:
    return "\n".join(format_node(n) for n in nodes) + "\n"
