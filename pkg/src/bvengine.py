"""
Abstract BV prover.

Words are graded-commutative products of generator symbols and Δ-atoms.
Gerstenhaber relations are checked for membership in the span of the
seven-term BV relation instances and the Δ² = 0 words, one parity assignment
of (|a|, |b|, |c|, n) at a time, with exact rational elimination.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.utilities.iterables import multiset_partitions
from tqdm import tqdm

from src.errors import BoundExceededError, GarlandError
from src.signcalc import ZERO, ParityPoly, koszul_sign

N = ParityPoly.var("n")
GENERATORS = ("a", "b", "c")
IDENTITIES = ("antisymmetry", "jacobi", "leibniz", "delta-leibniz")
SUPPORTS = {"antisymmetry": ("a", "b"), "jacobi": GENERATORS,
            "leibniz": GENERATORS, "delta-leibniz": ("a", "b")}


@dataclass(frozen=True)
class Atom:
    """A generator symbol, or Δ applied to a word (arg is set)."""
    name: str = ""
    arg: "Word" = None

    def is_delta(self):
        return self.arg is not None

    def parity(self):
        if self.is_delta():
            return self.arg.parity() + N
        return ParityPoly.var(self.name)

    def sort_key(self):
        if self.is_delta():
            return (1, "", self.arg.sort_key())
        return (0, self.name, ())

    def depth(self):
        return 1 + self.arg.depth() if self.is_delta() else 0

    def width(self):
        return self.arg.width() if self.is_delta() else 1

    def support(self):
        return self.arg.support() if self.is_delta() else frozenset([self.name])

    def is_double_delta(self):
        return self.is_delta() and len(self.arg.atoms) == 1 and self.arg.atoms[0].is_delta()

    def mentions_double_delta(self):
        if not self.is_delta():
            return False
        return self.is_double_delta() or self.arg.mentions_double_delta()

    def __str__(self):
        return f"Δ({self.arg})" if self.is_delta() else self.name


@dataclass(frozen=True)
class Word:
    """Atoms in canonical order with a sign exponent."""
    atoms: tuple = ()
    exponent: ParityPoly = ZERO
    zero: bool = False

    def parity(self):
        total = ZERO
        for atom in self.atoms:
            total = total + atom.parity()
        return total

    def body(self):
        return Word(self.atoms)

    def sort_key(self):
        return (len(self.atoms), tuple(atom.sort_key() for atom in self.atoms))

    def depth(self):
        return max((atom.depth() for atom in self.atoms), default=0)

    def width(self):
        return max([len(self.atoms)] + [atom.width() for atom in self.atoms])

    def support(self):
        names = frozenset()
        for atom in self.atoms:
            names |= atom.support()
        return names

    def mentions_double_delta(self):
        return any(atom.mentions_double_delta() for atom in self.atoms)

    def __str__(self):
        if self.zero:
            return "0"
        text = "·".join(str(atom) for atom in self.atoms) or "1"
        if not self.exponent.is_zero():
            text = f"(-1)^({self.exponent})·{text}"
        return text


ZERO_WORD = Word(zero=True)


def gen(name):
    return Word((Atom(name),))


def canonicalize_word(atoms, exponent=ZERO, nilpotent=True):
    """Sort atoms into canonical order, collecting the Koszul exponent.

    Δ-atom arguments are canonicalized first and their signs pulled out.
    With nilpotent set, Δ(Δ(w)) is the zero word.
    """
    exponent = ParityPoly.coerce(exponent)
    normalized = []
    for atom in atoms:
        if atom.is_delta():
            inner = canonicalize_word(atom.arg.atoms, atom.arg.exponent, nilpotent)
            if inner.zero or not inner.atoms:
                return ZERO_WORD
            if nilpotent and len(inner.atoms) == 1 and inner.atoms[0].is_delta():
                return ZERO_WORD
            exponent = exponent + inner.exponent
            atom = Atom(arg=inner.body())
        normalized.append(atom)
    order = sorted(range(len(normalized)), key=lambda i: normalized[i].sort_key())
    exponent = exponent + koszul_sign(order, [atom.parity() for atom in normalized])
    return Word(tuple(normalized[i] for i in order), exponent)


def multiply(w1, w2, nilpotent=True):
    if w1.zero or w2.zero:
        return ZERO_WORD
    return canonicalize_word(w1.atoms + w2.atoms, w1.exponent + w2.exponent, nilpotent)


def delta_word(word, nilpotent=True):
    if word.zero:
        return ZERO_WORD
    return canonicalize_word((Atom(arg=word.body()),), word.exponent, nilpotent)


def _vanishes(word, assignment):
    """Odd atoms squared are zero; so is any Δ of a vanishing word."""
    seen = set()
    for atom in word.atoms:
        if atom.is_delta() and _vanishes(atom.arg, assignment):
            return True
        if atom.parity().evaluate(assignment):
            if atom in seen:
                return True
            seen.add(atom)
    return False


@dataclass(frozen=True)
class ExprSum:
    """Sum of (rational coefficient, Word).

    Symbolic sums keep word exponents; evaluated sums have every sign folded
    into the coefficient and record the parity assignment.
    """
    terms: tuple = ()
    assignment: tuple = None

    @classmethod
    def of(cls, pairs, assignment=None):
        totals = {}
        for coefficient, word in pairs:
            if word.zero or coefficient == 0:
                continue
            key = word if assignment is None else word.body()
            totals[key] = totals.get(key, QQ.zero) + QQ.convert(coefficient)
        terms = tuple(sorted(((c, w) for w, c in totals.items() if c != 0),
                             key=lambda t: (t[1].sort_key(), t[1].exponent.sort_key())))
        return cls(terms, assignment)

    @classmethod
    def word(cls, word, coefficient=1):
        return cls.of([(coefficient, word)])

    def evaluate(self, assignment):
        values = dict(assignment)
        pairs = []
        for coefficient, word in self.terms:
            if _vanishes(word, values):
                continue
            sign = -1 if word.exponent.evaluate(values) else 1
            pairs.append((sign * coefficient, word.body()))
        return ExprSum.of(pairs, tuple(sorted(values.items())))

    def is_zero(self):
        return not self.terms

    def words(self):
        return [word for _, word in self.terms]

    def scale(self, factor):
        return ExprSum.of([(factor * c, w) for c, w in self.terms], self.assignment)

    def signed(self, exponent):
        extra = ParityPoly.coerce(exponent)
        return ExprSum.of([(c, Word(w.atoms, w.exponent + extra)) for c, w in self.terms],
                          self.assignment)

    def __add__(self, other):
        return ExprSum.of(list(self.terms) + list(other.terms), self.assignment)

    def __sub__(self, other):
        return self + other.scale(-1)

    def vector(self):
        return {word: coefficient for coefficient, word in self.terms}

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for coefficient, word in self.terms:
            parts.append(f"{'-' if coefficient < 0 else '+'} {abs(coefficient)}*{word}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else text


def sum_product(x, y, nilpotent=True):
    return ExprSum.of([(c * d, multiply(u, v, nilpotent))
                       for c, u in x.terms for d, v in y.terms])


def sum_delta(x, nilpotent=True):
    return ExprSum.of([(c, delta_word(w, nilpotent)) for c, w in x.terms])


def instantiate_bv(x, y, z, nilpotent=True):
    """The seven-term BV relation at (x, y, z), as LHS − RHS."""
    px, py = x.parity(), y.parity()

    def prod(*words):
        result = words[0]
        for word in words[1:]:
            result = multiply(result, word, nilpotent)
        return result

    def d(word):
        return delta_word(word, nilpotent)

    def signed(word, exponent):
        return Word(word.atoms, word.exponent + exponent, word.zero)

    pairs = [
        (1, d(prod(x, y, z))),
        (-1, prod(d(prod(x, y)), z)),
        (-1, signed(prod(x, d(prod(y, z))), px * N)),
        (-1, signed(prod(y, d(prod(x, z))), (px + N) * py)),
        (1, prod(d(x), y, z)),
        (1, signed(prod(x, d(y), z), px * N)),
        (1, signed(prod(x, y, d(z)), N * (px + py))),
    ]
    return ExprSum.of(pairs)


def gerstenhaber_bracket(x, y, nilpotent=True):
    """{x, y} = (−1)^{|x|n} Δ(xy) − (−1)^{|x|n} Δ(x)y − xΔ(y)."""
    sign = x.parity() * N
    first = delta_word(multiply(x, y, nilpotent), nilpotent)
    second = multiply(delta_word(x, nilpotent), y, nilpotent)
    third = multiply(x, delta_word(y, nilpotent), nilpotent)
    return ExprSum.of([
        (1, Word(first.atoms, first.exponent + sign, first.zero)),
        (-1, Word(second.atoms, second.exponent + sign, second.zero)),
        (-1, third),
    ])


def bracket_sums(x, y, nilpotent=True):
    total = ExprSum()
    for c, u in x.terms:
        for d, v in y.terms:
            total = total + gerstenhaber_bracket(u, v, nilpotent).scale(c * d)
    return total


def identity_target(identity, nilpotent=False):
    """LHS − RHS of one Gerstenhaber/Leibniz relation over generators a, b, c."""
    a, b, c = (gen(name) for name in GENERATORS)
    A, B, C = (ExprSum.word(w) for w in (a, b, c))
    pa, pb = a.parity(), b.parity()

    def br(x, y):
        return bracket_sums(x, y, nilpotent)

    if identity == "antisymmetry":
        return br(A, B) - br(B, A).signed(N + (pa + N) * (pb + N))
    if identity == "jacobi":
        return (br(A, br(B, C)) - br(br(A, B), C)
                - br(B, br(A, C)).signed((pa + N) * (pb + N)))
    if identity == "leibniz":
        return (br(A, ExprSum.word(multiply(b, c, nilpotent)))
                - sum_product(br(A, B), C, nilpotent)
                - sum_product(B, br(A, C), nilpotent).signed((pa + N) * pb))
    if identity == "delta-leibniz":
        inner = (br(ExprSum.word(delta_word(a, nilpotent)), B)
                 + br(A, ExprSum.word(delta_word(b, nilpotent))).signed(pa * N + 1))
        return sum_delta(br(A, B), nilpotent) - inner.signed(N + 1)
    raise GarlandError(f"unknown relation '{identity}'")


# Relation families


@dataclass(frozen=True)
class Relation:
    label: str
    family: str
    expr: ExprSum


@dataclass(frozen=True)
class RelationSet:
    relations: tuple
    word_bound: int
    max_depth: int
    support: frozenset = field(default_factory=frozenset)

    def in_universe(self, word):
        return word.width() <= self.word_bound and word.depth() <= self.max_depth

    def families(self):
        counts = {}
        for relation in self.relations:
            counts[relation.family] = counts.get(relation.family, 0) + 1
        return counts


@lru_cache(maxsize=None)
def words_over(support, depth, word_bound, nilpotent=False):
    """Canonical words using each generator of support exactly once."""
    results = {}
    for partition in multiset_partitions(list(support)):
        if len(partition) > word_bound:
            continue
        options = [_atoms_over(tuple(block), depth, word_bound, nilpotent) for block in partition]
        for atoms in product(*options):
            word = Word(tuple(sorted(atoms, key=Atom.sort_key)))
            results[word.sort_key()] = word
    return [results[key] for key in sorted(results)]


def _atoms_over(block, depth, word_bound, nilpotent):
    atoms = []
    if len(block) == 1:
        atoms.append(Atom(block[0]))
    if depth >= 1:
        for word in words_over(block, depth - 1, word_bound, nilpotent):
            atom = Atom(arg=word)
            if nilpotent and atom.is_double_delta():
                continue
            atoms.append(atom)
    return atoms


def _ordered_triples(support):
    names = sorted(support)
    for labels in product(range(3), repeat=len(names)):
        if set(labels) != {0, 1, 2}:
            continue
        yield tuple(tuple(n for n, l in zip(names, labels) if l == slot) for slot in range(3))


def build_relations(support, word_bound=4, max_depth=2, include_bv=True,
                    include_nilpotency=True, order_seed=None):
    """Relations among multilinear words over support.

    Families: "bv" (seven-term instances at all word arguments), "dbv"
    (Δ applied to bv instances) and "nil" (words containing ΔΔ).
    """
    support = tuple(sorted(support))
    universe = RelationSet((), word_bound, max_depth, frozenset(support))
    relations = []

    if include_bv:
        bv, dbv = [], []
        for blocks in _ordered_triples(support):
            choices = [words_over(block, max_depth, word_bound) for block in blocks]
            for x, y, z in product(*choices):
                instance = instantiate_bv(x, y, z, nilpotent=False)
                if instance.is_zero() or not all(universe.in_universe(w) for w in instance.words()):
                    continue
                args = f"{x}, {y}, {z}"
                bv.append(Relation(f"bv({args})", "bv", instance))
                lifted = sum_delta(instance, nilpotent=False)
                if not lifted.is_zero() and all(universe.in_universe(w) for w in lifted.words()):
                    dbv.append(Relation(f"Δbv({args})", "dbv", lifted))
        relations += bv + dbv

    if include_nilpotency:
        for word in words_over(support, max_depth, word_bound):
            if word.mentions_double_delta():
                relations.append(Relation(f"nil({word})", "nil", ExprSum.word(word)))

    if order_seed is not None:
        order = np.random.default_rng(order_seed).permutation(len(relations))
        relations = [relations[i] for i in order]

    logging.debug(f"Built {len(relations)} relations over {support}")
    return RelationSet(tuple(relations), word_bound, max_depth, frozenset(support))


# Membership


@dataclass(frozen=True)
class MembershipVerdict:
    member: bool
    certificate: tuple = ()
    residual: ExprSum = None

    def __str__(self):
        if self.member:
            return "member"
        return f"non-member, residual {self.residual}"


def check_membership(target, relations, assignment):
    """Decide whether target lies in the span of the relations at one assignment."""
    for word in target.words():
        if not relations.in_universe(word):
            raise BoundExceededError(
                f"word {word} exceeds the universe bound ({relations.word_bound} atoms, "
                f"depth {relations.max_depth})")

    goal = target.evaluate(assignment)
    if goal.is_zero():
        return MembershipVerdict(True)
    columns = [relation.expr.evaluate(assignment) for relation in relations.relations]

    words = {}
    for expr in columns + [goal]:
        for word in expr.words():
            words.setdefault(word.sort_key(), word)
    ordered = [words[key] for key in sorted(words)]
    index = {word: i for i, word in enumerate(ordered)}

    def vector(expr):
        column = [QQ.zero] * len(ordered)
        for coefficient, word in expr.terms:
            column[index[word]] = coefficient
        return column

    vectors = [vector(expr) for expr in columns]
    goal_vector = vector(goal)
    rows = [list(row) for row in zip(*(vectors + [goal_vector]))]
    augmented = DomainMatrix(rows, (len(ordered), len(vectors) + 1), QQ)
    reduced, pivots = augmented.rref()

    if len(vectors) in pivots:
        return MembershipVerdict(False, residual=_residual(vectors, goal_vector, ordered, goal))

    matrix = reduced.to_list()
    certificate = []
    for row, column in enumerate(pivots):
        value = matrix[row][len(vectors)]
        if value:
            certificate.append((relations.relations[column].label, value, column))

    replay = ExprSum.of([], goal.assignment)
    for _, value, column in certificate:
        replay = replay + columns[column].scale(value)
    if (replay - goal).terms:
        raise GarlandError("membership certificate does not reproduce the target")
    return MembershipVerdict(True, tuple((label, value) for label, value, _ in certificate))


def _residual(vectors, goal_vector, ordered, goal):
    """Reduce the goal modulo the row space of the relations."""
    residual = list(goal_vector)
    if vectors:
        span = DomainMatrix([list(vec) for vec in vectors], (len(vectors), len(ordered)), QQ)
        reduced, pivots = span.rref()
        matrix = reduced.to_list()
        for row, column in enumerate(pivots):
            factor = residual[column]
            if factor:
                for j in range(len(ordered)):
                    residual[j] -= factor * matrix[row][j]
    return ExprSum.of([(c, ordered[j]) for j, c in enumerate(residual) if c],
                      goal.assignment)


# Full verification


def parity_assignments():
    """All 16 assignments of (|a|, |b|, |c|, n), in a fixed order."""
    for bits in product((0, 1), repeat=4):
        yield dict(zip(GENERATORS + ("n",), bits))


@dataclass(frozen=True)
class RelationVerdict:
    identity: str
    assignment: tuple
    verdict: MembershipVerdict

    def assignment_text(self):
        return ",".join(f"{name}={bit}" for name, bit in self.assignment)


@dataclass
class GerstenhaberReport:
    word_bound: int
    max_depth: int
    include_bv: bool
    include_nilpotency: bool
    verdicts: list = field(default_factory=list)
    relation_counts: dict = field(default_factory=dict)

    @property
    def members(self):
        return sum(1 for v in self.verdicts if v.verdict.member)

    @property
    def all_members(self):
        return self.members == len(self.verdicts)


def _solve_assignment(payload):
    targets, relation_sets, assignment = payload
    results = []
    for identity in IDENTITIES:
        relations = relation_sets[identity]
        verdict = check_membership(targets[identity], relations, assignment)
        results.append(RelationVerdict(identity, tuple(sorted(assignment.items())), verdict))
    return results


def verify_prop51(word_bound=4, max_depth=2, include_bv=True, include_nilpotency=True,
                  order_seed=None, max_workers=None, show_progress=False):
    """Membership verdicts for every relation at all 16 parity assignments."""
    logging.info(f"Verifying Gerstenhaber relations (word bound {word_bound}, depth {max_depth})")
    by_support = {}
    relation_sets, targets = {}, {}
    for identity in IDENTITIES:
        targets[identity] = identity_target(identity)
        support = SUPPORTS[identity]
        if support not in by_support:
            by_support[support] = build_relations(support, word_bound, max_depth, include_bv,
                                                  include_nilpotency, order_seed)
        relation_sets[identity] = by_support[support]

    report = GerstenhaberReport(word_bound, max_depth, include_bv, include_nilpotency)
    for support, relations in sorted(by_support.items()):
        report.relation_counts["".join(support)] = relations.families()

    payloads = [(targets, relation_sets, assignment) for assignment in parity_assignments()]
    if max_workers and max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as executor:
            results = list(executor.map(_solve_assignment, payloads))
    else:
        results = [_solve_assignment(p) for p in tqdm(payloads, desc="Parity assignments",
                                                     disable=not show_progress)]

    verdicts = [v for batch in results for v in batch]
    report.verdicts = sorted(verdicts, key=lambda v: (v.identity, v.assignment))
    logging.info(f"{report.members}/{len(report.verdicts)} relations are members")
    return report
