"""
Operation layer of the garland calculus.

Elements are canonical formal sums of decorated terms. The product, bracket,
lift, proj and delta operations are rewrites of marks and gradings on the
terms' garland shapes.
"""
import logging
from collections import Counter
from dataclasses import dataclass, replace

from src.errors import GarlandError, ParamsMismatchError
from src.garland import (GarlandShape, Mark, PointRef, canonical_form,
                         disjoint_union)
from src.signcalc import RINGS, ZERO, Coefficient, ParityPoly


class ConstructionSigns:
    """Orientation signs of product and bracket summands (all zero)."""
    name = "zero"

    def product_exponent(self, t1, t2, n):
        return ZERO

    def bracket_exponent(self, t1, t2, n):
        return ZERO

    def swap_exponent(self, operation, d1, d2, n):
        """Exponent relating op(x, y) to op(y, x) for single terms."""
        return ZERO


class KoszulSigns(ConstructionSigns):
    """Koszul ordering: a summand whose factors are out of canonical order
    picks up the sign of swapping them."""
    name = "koszul"

    def product_exponent(self, t1, t2, n):
        if t2.key() < t1.key():
            return ParityPoly.constant(t1.degree * t2.degree)
        return ZERO

    def bracket_exponent(self, t1, t2, n):
        if t2.key() < t1.key():
            return ParityPoly.constant((t1.degree + n) * (t2.degree + n))
        return ZERO

    def swap_exponent(self, operation, d1, d2, n):
        if operation == "product":
            return ParityPoly.constant(d1 * d2)
        return ParityPoly.constant((d1 + n) * (d2 + n))


CONSTRUCTION_SIGNS = {
    "zero": ConstructionSigns(),
    "koszul": KoszulSigns(),
}


@dataclass(frozen=True)
class AlgebraParams:
    m: int = 2
    n: int = 1
    p_is_boundary: bool = False
    ring: str = "z2"
    sign_rule: str = "zero"

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise GarlandError(f"dimensions must be ≥ 1 (m={self.m}, n={self.n})")
        if self.ring not in RINGS:
            raise GarlandError(f"unknown ring '{self.ring}', expected one of {RINGS}")
        if self.sign_rule not in CONSTRUCTION_SIGNS:
            raise GarlandError(f"unknown sign rule '{self.sign_rule}'")

    @classmethod
    def from_config(cls, config):
        return cls(m=int(config.get("m", 2)),
                   n=int(config.get("n", 1)),
                   p_is_boundary=bool(config.get("p_is_boundary", False)),
                   ring=config.get("ring", "z2"),
                   sign_rule=config.get("sign_rule", "zero"))

    def replace(self, **changes):
        return replace(self, **changes)


UNIT_NAME = "u"
UNIT_SHAPE = GarlandShape(0, (Mark((), 1),))


@dataclass(frozen=True)
class BaseGenerator:
    """A formal bordism class: name, degree and canonical shape."""
    name: str
    degree: int
    shape: GarlandShape

    def __post_init__(self):
        object.__setattr__(self, "shape", canonical_form(self.shape.copies, self.shape.marks)[0])


@dataclass(frozen=True)
class DecoratedTerm:
    coefficient: Coefficient
    degree: int
    shape: GarlandShape
    provenance: tuple = ()
    freshness: tuple = ()

    def key(self):
        return (self.degree, self.shape.sort_key(), self.provenance,
                tuple(mark.sort_key() for mark in self.freshness))

    def collect_key(self):
        return (self.degree, self.shape, self.provenance, self.freshness)


@dataclass(frozen=True)
class Element:
    params: AlgebraParams
    terms: tuple = ()

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_zero(self):
        return not self.terms

    def degrees(self):
        return sorted({term.degree for term in self.terms})


def _fresh_label(marks, copy, stem):
    taken = {p.label for mark in marks for p in mark.points if p.copy == copy}
    label, suffix = stem, 0
    while label in taken:
        suffix += 1
        label = f"{stem}{suffix}"
    return label


def _tags(term):
    """Freshness flags parallel to term.shape.marks."""
    remaining = Counter(term.freshness)
    flags = []
    for mark in term.shape.marks:
        if remaining[mark] > 0:
            remaining[mark] -= 1
            flags.append(True)
        else:
            flags.append(False)
    return flags


class GarlandAlgebra:
    """Operations on Elements for one fixed set of AlgebraParams."""

    def __init__(self, params):
        self.params = params
        self.signs = CONSTRUCTION_SIGNS[params.sign_rule]
        self.m_component_brackets = 0

    # Construction

    def _term(self, coefficient, degree, copies, marks, tags, provenance):
        shape, fresh = canonical_form(copies, marks, tags)
        return DecoratedTerm(coefficient, degree, shape, tuple(sorted(provenance)), fresh)

    def _one(self):
        return Coefficient(self.params.ring, 1)

    def collect(self, terms):
        totals = {}
        for term in terms:
            key = term.collect_key()
            totals[key] = totals.get(key, 0) + term.coefficient.signed()
        collected = []
        for (degree, shape, provenance, freshness), value in totals.items():
            if self.params.ring == "z2":
                value %= 2
            if value:
                coefficient = Coefficient(self.params.ring, value)
                collected.append(DecoratedTerm(coefficient, degree, shape, provenance, freshness))
        collected.sort(key=DecoratedTerm.key)
        return Element(self.params, tuple(collected))

    def zero(self):
        return Element(self.params, ())

    def unit(self):
        term = DecoratedTerm(self._one(), 0, UNIT_SHAPE, (), ())
        return Element(self.params, (term,))

    def generator(self, gen, coefficient=1):
        """The Element of a base generator; the reserved unit name is anonymous."""
        provenance = () if gen.name == UNIT_NAME else (gen.name,)
        term = DecoratedTerm(Coefficient(self.params.ring, coefficient),
                             gen.degree, gen.shape, provenance, ())
        return self.collect([term])

    def _check(self, *elements):
        for element in elements:
            if element.params != self.params:
                raise ParamsMismatchError(
                    f"operand params {element.params} differ from session params {self.params}")

    # Linear structure

    def add(self, e1, e2):
        self._check(e1, e2)
        return self.collect(e1.terms + e2.terms)

    def scale(self, e, factor):
        self._check(e)
        return self.collect([replace(t, coefficient=Coefficient(
            self.params.ring, t.coefficient.signed() * factor)) for t in e.terms])

    def negate(self, e):
        return self.scale(e, -1)

    def subtract(self, e1, e2):
        return self.add(e1, self.negate(e2))

    def total(self, elements):
        terms = []
        for element in elements:
            self._check(element)
            terms.extend(element.terms)
        return self.collect(terms)

    # Product

    def _product_terms(self, t1, t2):
        g1 = t1.shape.grading_one_marks()
        g2 = t2.shape.grading_one_marks()
        if not g1 or not g2:
            return []
        _, first, second = disjoint_union(t1.shape, t2.shape)
        marks1 = [first.mark(m) for m in t1.shape.marks]
        marks2 = [second.mark(m) for m in t2.shape.marks]
        tags1, tags2 = _tags(t1), _tags(t2)
        coefficient = (t1.coefficient * t2.coefficient).with_exponent(
            self.signs.product_exponent(t1, t2, self.params.n))
        copies = t1.shape.copies + t2.shape.copies

        summands = []
        for i in g1:
            for j in g2:
                marks = [m for idx, m in enumerate(marks1) if idx != i]
                tags = [t for idx, t in enumerate(tags1) if idx != i]
                marks += [m for idx, m in enumerate(marks2) if idx != j]
                tags += [t for idx, t in enumerate(tags2) if idx != j]
                marks.append(Mark(marks1[i].points + marks2[j].points, 1))
                tags.append(False)
                summands.append(self._term(coefficient, t1.degree + t2.degree, copies,
                                           marks, tags, t1.provenance + t2.provenance))
        return summands

    def raw_product(self, e1, e2):
        self._check(e1, e2)
        return [s for t1 in e1.terms for t2 in e2.terms for s in self._product_terms(t1, t2)]

    def product(self, e1, e2):
        return self.collect(self.raw_product(e1, e2))

    # Bracket

    def _bracket_terms(self, t1, t2):
        k1, k2 = t1.shape.copies, t2.shape.copies
        if k1 == 0 or k2 == 0:
            self.m_component_brackets += 1
            logging.debug("Bracket with an M-component factor evaluates to 0")
            return []
        _, first, second = disjoint_union(t1.shape, t2.shape)
        marks = [first.mark(m) for m in t1.shape.marks] + [second.mark(m) for m in t2.shape.marks]
        coefficient = (t1.coefficient * t2.coefficient).with_exponent(
            self.signs.bracket_exponent(t1, t2, self.params.n))
        degree = t1.degree + t2.degree + 2 * self.params.n

        summands = []
        for c1 in range(k1):
            for c2 in range(k1, k1 + k2):
                a = PointRef(c1, _fresh_label(marks, c1, "bra"))
                b = PointRef(c2, _fresh_label(marks, c2, "ket"))
                new_marks = marks + [Mark((a, b), 2)]
                summands.append(self._term(coefficient, degree, k1 + k2, new_marks,
                                           [False] * len(new_marks),
                                           t1.provenance + t2.provenance))
        return summands

    def raw_bracket(self, e1, e2):
        self._check(e1, e2)
        return [s for t1 in e1.terms for t2 in e2.terms for s in self._bracket_terms(t1, t2)]

    def bracket(self, e1, e2):
        return self.collect(self.raw_bracket(e1, e2))

    # Lift, proj, delta

    def _lift_terms(self, term):
        bumped = [Mark(m.points, m.grading + 1) for m in term.shape.marks]
        copies = max(term.shape.copies, 1)
        degree = term.degree + self.params.n
        summands = []
        for c in range(copies):
            fresh = Mark((PointRef(c, _fresh_label(bumped, c, "lift")),), 1)
            summands.append(self._term(term.coefficient, degree, copies, bumped + [fresh],
                                       [False] * len(bumped) + [True], term.provenance))
        return summands

    def raw_lift(self, e):
        self._check(e)
        return [s for term in e.terms for s in self._lift_terms(term)]

    def lift(self, e):
        return self.collect(self.raw_lift(e))

    def _proj_term(self, term):
        marks = []
        for mark, fresh in zip(term.shape.marks, _tags(term)):
            if mark.grading != 1:
                marks.append(Mark(mark.points, mark.grading - 1))
            elif mark.size > 1:
                marks.append(Mark(mark.points, 2))
            elif fresh and self.params.p_is_boundary:
                return None
        return self._term(term.coefficient, term.degree, term.shape.copies, marks,
                          [False] * len(marks), term.provenance)

    def proj(self, e):
        self._check(e)
        projected = (self._proj_term(term) for term in e.terms)
        return self.collect([t for t in projected if t is not None])

    def delta(self, e):
        return self.lift(self.proj(e))
