"""
Concrete syntax for Elements.

    element := term ( "+" term )*
    term    := [ integer "*" ] "gen" "(" name "," "deg=" integer ","
               "copies=" integer "," "marks=[" mark* "]" ")"
    mark    := "{g=" integer ";" [ point ( "," point )* ] "}"
    point   := "(" copyIndex "," pointLabel ")"

A term's name lists its provenance joined by "."; the unit class is
printed as "u". The zero Element prints as "0".

Labels of the form f<digits> are reserved: a grading-1 singleton mark whose
point carries one is a fresh mark created by lift, and keeps its tag.
"""
import re
from collections import Counter
from dataclasses import dataclass

from src.calculus import UNIT_NAME, DecoratedTerm
from src.errors import ElementSyntaxError
from src.garland import FRESH_PREFIX, Mark, PointRef, canonical_form
from src.signcalc import Coefficient

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<int>-?\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_.]*)
  | (?P<punct>[()\[\]{},;=*+])
""", re.VERBOSE)


_FRESH_LABEL = re.compile(re.escape(FRESH_PREFIX) + r"\d+")


def is_fresh_mark(mark):
    """A grading-1 singleton whose point carries a reserved fresh label."""
    return (mark.grading == 1 and len(mark.points) == 1
            and _FRESH_LABEL.fullmatch(mark.points[0].label) is not None)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text):
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ElementSyntaxError(f"unexpected character {text[pos]!r}",
                                     line, pos - line_start + 1)
        kind = match.lastgroup
        if kind == "ws":
            chunk = match.group()
            if "\n" in chunk:
                line += chunk.count("\n")
                line_start = pos + chunk.rindex("\n") + 1
        else:
            tokens.append(Token(kind, match.group(), line, pos - line_start + 1))
        pos = match.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class ElementParser:
    """Recursive-descent parser producing Elements for one algebra."""

    def __init__(self, algebra):
        self.algebra = algebra
        self.tokens = []
        self.pos = 0

    def parse(self, text):
        self.tokens = tokenize(text)
        self.pos = 0
        if self._peek().text == "0" and self.tokens[1].kind == "eof":
            return self.algebra.zero()
        terms = [self._term()]
        while self._peek().text == "+":
            self._advance()
            terms.append(self._term())
        self._expect_kind("eof")
        return self.algebra.collect(terms)

    # Token helpers

    def _peek(self, offset=0):
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def _advance(self):
        token = self._peek()
        self.pos += 1
        return token

    def _fail(self, message, token=None):
        token = token or self._peek()
        raise ElementSyntaxError(message, token.line, token.column)

    def _expect(self, text):
        token = self._advance()
        if token.text != text:
            self._fail(f"expected '{text}', found '{token.text or 'end of input'}'", token)
        return token

    def _expect_kind(self, kind):
        token = self._advance()
        if token.kind != kind:
            self._fail(f"expected {kind}, found '{token.text or 'end of input'}'", token)
        return token

    def _integer(self):
        return int(self._expect_kind("int").text)

    def _keyword(self, word):
        self._expect(word)
        self._expect("=")

    # Grammar

    def _term(self):
        coefficient = 1
        if self._peek().kind == "int" and self._peek(1).text == "*":
            coefficient = self._integer()
            self._expect("*")
        self._expect("gen")
        self._expect("(")
        name = self._expect_kind("name").text
        self._expect(",")
        self._keyword("deg")
        degree = self._integer()
        self._expect(",")
        self._keyword("copies")
        copies_token = self._peek()
        copies = self._integer()
        if copies < 0:
            self._fail("copy count must be ≥ 0", copies_token)
        self._expect(",")
        self._keyword("marks")
        self._expect("[")
        marks = []
        while self._peek().text == "{":
            marks.append(self._mark(copies))
            if self._peek().text == ",":
                self._advance()
        self._expect("]")
        self._expect(")")

        uses = Counter(point for mark in marks for point in mark.points)
        tags = [is_fresh_mark(mark) and uses[mark.points[0]] == 1 for mark in marks]
        shape, fresh = canonical_form(copies, marks, tags)
        names = [part for part in name.split(".") if part and part != UNIT_NAME]
        value = Coefficient(self.algebra.params.ring, coefficient)
        return DecoratedTerm(value, degree, shape, tuple(sorted(names)), fresh)

    def _mark(self, copies):
        self._expect("{")
        self._keyword("g")
        grading_token = self._peek()
        grading = self._integer()
        if grading < 1:
            self._fail("grading must be ≥ 1", grading_token)
        self._expect(";")
        points = []
        if self._peek().text == "(":
            points.append(self._point(copies))
            while self._peek().text == ",":
                self._advance()
                points.append(self._point(copies))
        self._expect("}")
        return Mark(tuple(points), grading)

    def _point(self, copies):
        self._expect("(")
        copy_token = self._peek()
        copy = self._integer()
        if not 0 <= copy < copies:
            self._fail(f"copy index {copy} out of range for {copies} copies", copy_token)
        self._expect(",")
        label = self._advance()
        if label.kind not in ("name", "int"):
            self._fail(f"expected point label, found '{label.text}'", label)
        self._expect(")")
        return PointRef(copy, label.text)


def parse_element(text, algebra):
    return ElementParser(algebra).parse(text)


def print_mark(mark):
    points = ",".join(f"({p.copy},{p.label})" for p in mark.points)
    return f"{{g={mark.grading};{points}}}"


def print_shape(shape):
    return "".join(print_mark(mark) for mark in shape.marks)


def print_term(term):
    value = term.coefficient.signed()
    prefix = "" if value == 1 else f"{value}*"
    name = ".".join(term.provenance) or UNIT_NAME
    return (f"{prefix}gen({name}, deg={term.degree}, copies={term.shape.copies}, "
            f"marks=[{print_shape(term.shape)}])")


def print_element(element):
    if element.is_zero():
        return "0"
    return " + ".join(print_term(term) for term in element.terms)


def print_generator(gen):
    return (f"gen({gen.name}, deg={gen.degree}, copies={gen.shape.copies}, "
            f"marks=[{print_shape(gen.shape)}])")
