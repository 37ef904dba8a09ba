"""
Sign arithmetic: multilinear polynomials over Z/2 in parity variables and
Koszul signs for permuting graded factors.
"""
from dataclasses import dataclass, field
from itertools import combinations

from src.errors import GarlandError, SignError, UnknownVariableError


def _monomial_key(monomial):
    return (len(monomial), tuple(sorted(monomial)))


@dataclass(frozen=True)
class ParityPoly:
    """A Z/2-valued multilinear polynomial, stored as a set of monomials.

    Each monomial is a frozenset of variable names; the empty monomial is the
    constant 1. Addition is symmetric difference of monomial sets, so the
    stored set is already the unique normal form.
    """
    monomials: frozenset = field(default_factory=frozenset)

    @classmethod
    def of(cls, monomials):
        acc = set()
        for monomial in monomials:
            acc ^= {frozenset(monomial)}
        return cls(frozenset(acc))

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls(frozenset([frozenset()]))

    @classmethod
    def constant(cls, bit):
        return cls.one() if int(bit) % 2 else cls.zero()

    @classmethod
    def var(cls, name):
        return cls(frozenset([frozenset([name])]))

    @staticmethod
    def coerce(value):
        if isinstance(value, ParityPoly):
            return value
        if isinstance(value, int):
            return ParityPoly.constant(value)
        if isinstance(value, str):
            return ParityPoly.var(value)
        raise GarlandError(f"cannot read {value!r} as a parity polynomial")

    def __add__(self, other):
        other = ParityPoly.coerce(other)
        return ParityPoly(self.monomials ^ other.monomials)

    __radd__ = __add__

    def __mul__(self, other):
        other = ParityPoly.coerce(other)
        acc = set()
        for left in self.monomials:
            for right in other.monomials:
                acc ^= {left | right}
        return ParityPoly(frozenset(acc))

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.monomials)

    def is_zero(self):
        return not self.monomials

    def is_constant(self):
        return all(not monomial for monomial in self.monomials)

    def degree(self):
        return max((len(monomial) for monomial in self.monomials), default=0)

    def variables(self):
        names = set()
        for monomial in self.monomials:
            names |= monomial
        return sorted(names)

    def evaluate(self, assignment=None):
        """Evaluate at a 0/1 assignment; constants need no assignment."""
        assignment = assignment or {}
        total = 0
        for monomial in self.monomials:
            value = 1
            for name in monomial:
                if name not in assignment:
                    raise UnknownVariableError(f"no value for parity variable '{name}'")
                value &= int(assignment[name]) & 1
            total ^= value
        return total

    def sorted_monomials(self):
        return sorted(self.monomials, key=_monomial_key)

    def sort_key(self):
        return tuple(_monomial_key(monomial) for monomial in self.sorted_monomials())

    def __str__(self):
        if not self.monomials:
            return "0"
        parts = []
        for monomial in self.sorted_monomials():
            parts.append("*".join(sorted(monomial)) if monomial else "1")
        return " + ".join(parts)


ZERO = ParityPoly.zero()
ONE = ParityPoly.one()


def parity_normalize(tree, variables=None):
    """Normalize an expression tree of +, * over parity variables and 0/1.

    Trees are ints, variable names, ParityPoly values, or tuples
    ("+", *args) / ("*", *args).
    """
    if isinstance(tree, ParityPoly):
        return tree
    if isinstance(tree, bool) or (isinstance(tree, int) and tree in (0, 1)):
        return ParityPoly.constant(int(tree))
    if isinstance(tree, str):
        if variables is not None and tree not in variables:
            raise UnknownVariableError(f"unknown parity variable '{tree}'")
        return ParityPoly.var(tree)
    if isinstance(tree, tuple) and len(tree) >= 2 and tree[0] in ("+", "*"):
        parts = [parity_normalize(arg, variables) for arg in tree[1:]]
        result = parts[0]
        for part in parts[1:]:
            result = result + part if tree[0] == "+" else result * part
        return result
    raise GarlandError(f"malformed parity expression: {tree!r}")


def evaluate_tree(tree, assignment):
    """Evaluate an expression tree directly, without normalizing."""
    if isinstance(tree, ParityPoly):
        return tree.evaluate(assignment)
    if isinstance(tree, int):
        return tree & 1
    if isinstance(tree, str):
        if tree not in assignment:
            raise UnknownVariableError(f"no value for parity variable '{tree}'")
        return int(assignment[tree]) & 1
    values = [evaluate_tree(arg, assignment) for arg in tree[1:]]
    if tree[0] == "+":
        return sum(values) & 1
    result = 1
    for value in values:
        result &= value
    return result


def koszul_sign(permutation, parities):
    """Sign exponent for reordering factors.

    The output position i holds input factor permutation[i]. The exponent is
    the sum of |x||y| over every input pair whose order is inverted.
    """
    permutation = list(permutation)
    if len(permutation) != len(parities):
        raise SignError(
            f"permutation of length {len(permutation)} for {len(parities)} factors")
    if sorted(permutation) != list(range(len(permutation))):
        raise SignError(f"not a permutation: {permutation}")

    polys = [ParityPoly.coerce(p) for p in parities]
    exponent = ZERO
    for i, j in combinations(range(len(permutation)), 2):
        if permutation[i] > permutation[j]:
            exponent = exponent + polys[permutation[i]] * polys[permutation[j]]
    return exponent


RINGS = ("z", "z2")


@dataclass(frozen=True)
class Coefficient:
    """A term coefficient: ring tag, integer magnitude and sign exponent."""
    ring: str
    magnitude: int
    exponent: ParityPoly = ZERO

    def __post_init__(self):
        if self.ring not in RINGS:
            raise GarlandError(f"unknown ring '{self.ring}'")

    def signed(self, assignment=None):
        """Integer value with the exponent folded in (mod 2 in Z/2 mode)."""
        if self.ring == "z2":
            return self.magnitude % 2
        sign = -1 if self.exponent.evaluate(assignment) else 1
        return sign * self.magnitude

    def resolved(self, assignment=None):
        return Coefficient(self.ring, self.signed(assignment))

    def is_zero(self):
        return self.signed() == 0 if self.exponent.is_constant() else self.magnitude == 0

    def __mul__(self, other):
        if self.ring != other.ring:
            raise GarlandError("coefficients from different rings")
        return Coefficient(self.ring, self.magnitude * other.magnitude,
                           self.exponent + other.exponent)

    def with_exponent(self, extra):
        return Coefficient(self.ring, self.magnitude, self.exponent + ParityPoly.coerce(extra))

    def __str__(self):
        return str(self.signed())
