"""
Search over sign conventions for the graded Jacobi identity.

A rule gives each of the three Jacobi summands a sign exponent (a parity
polynomial in |α₁|, |α₂|, |α₃|, n) and picks a construction-sign selector for
product and bracket summands. A rule survives if the signed Jacobi sum
vanishes on every sampled triple.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations, product

from tqdm import tqdm

from src.calculus import CONSTRUCTION_SIGNS, GarlandAlgebra
from src.errors import UnsupportedBoundError
from src.identity_lab import Bounds, random_generator, trial_seed
from src.signcalc import ParityPoly

VARIABLES = ("a1", "a2", "a3", "n")
SUPPORTED_BOUNDS = (1, 2)
SLOT_NAMES = ("g1", "g2", "g3")


def monomial_basis(degree_bound):
    """Square-free monomials of degree ≤ bound, constant first."""
    basis = []
    for degree in range(degree_bound + 1):
        basis.extend(frozenset(c) for c in combinations(VARIABLES, degree))
    return basis


def polynomials(degree_bound):
    """All polynomials over the monomial basis, in bitmask order."""
    if degree_bound not in SUPPORTED_BOUNDS:
        raise UnsupportedBoundError(
            f"degree bound must be one of {SUPPORTED_BOUNDS}, got {degree_bound}")
    basis = monomial_basis(degree_bound)
    return [ParityPoly(frozenset(basis[i] for i in range(len(basis)) if mask >> i & 1))
            for mask in range(2 ** len(basis))]


@dataclass(frozen=True)
class SignRule:
    exponents: tuple
    selector: str = "zero"

    def encoding(self):
        return " | ".join(str(e) for e in self.exponents) + f" | {self.selector}"

    def bits(self, assignment):
        return tuple(e.evaluate(assignment) for e in self.exponents)

    def mod2_shadow(self):
        """Over Z/2 every sign is +1; the shadow is the all-zero rule."""
        return SignRule((ParityPoly.zero(),) * 3, "zero")


def enumerate_rules(degree_bound, selectors=None):
    """Deterministic stream: selector, then slot exponents in bitmask order."""
    polys = polynomials(degree_bound)
    for selector in selectors or sorted(CONSTRUCTION_SIGNS):
        for e1, e2, e3 in product(polys, repeat=3):
            yield SignRule((e1, e2, e3), selector)


def jacobi_summands(alg, generators):
    x1, x2, x3 = (alg.generator(g) for g in generators)
    return (alg.bracket(alg.bracket(x1, x2), x3),
            alg.bracket(alg.bracket(x2, x3), x1),
            alg.bracket(alg.bracket(x3, x1), x2))


def signed_sum(alg, summands, bits):
    return alg.total([alg.scale(s, -1 if bit else 1) for s, bit in zip(summands, bits)])


@dataclass
class TrialData:
    """One sampled triple: its parity assignment and the sign patterns that cancel."""
    assignment: dict
    summands: tuple
    passing: frozenset


@dataclass
class SearchReport:
    degree_bound: int
    trials: int
    seed: int
    params: object
    total_rules: int = 0
    survivors: int = 0
    listed_survivors: list = field(default_factory=list)
    listed_eliminated: list = field(default_factory=list)

    @property
    def eliminated(self):
        return self.total_rules - self.survivors

    @property
    def untested(self):
        return self.trials == 0


def _sample(alg, trials, seed, bounds, show_progress):
    data = []
    for trial in tqdm(range(trials), desc=f"Sampling ({alg.params.sign_rule})",
                      disable=not show_progress):
        generators = [random_generator(trial_seed(seed, trial, slot), bounds, SLOT_NAMES[slot])
                      for slot in range(3)]
        summands = jacobi_summands(alg, generators)
        assignment = {"a1": generators[0].degree % 2, "a2": generators[1].degree % 2,
                      "a3": generators[2].degree % 2, "n": alg.params.n % 2}
        passing = frozenset(bits for bits in product((0, 1), repeat=3)
                            if signed_sum(alg, summands, bits).is_zero())
        data.append(TrialData(assignment, summands, passing))
    return data


def _first_failure(rule, data):
    for index, trial in enumerate(data):
        if rule.bits(trial.assignment) not in trial.passing:
            return index
    return None


def search(degree_bound, trials, seed, params, bounds=None, selectors=None,
           report_limit=50, show_progress=False):
    """Test every rule against `trials` sampled triples in Z mode."""
    polys = polynomials(degree_bound)
    bounds = bounds or Bounds()
    selectors = selectors or sorted(CONSTRUCTION_SIGNS)
    report = SearchReport(degree_bound, trials, seed, params.replace(ring="z"))
    report.total_rules = len(selectors) * len(polys) ** 3
    logging.info(f"Searching {report.total_rules} sign rules on {trials} trials")

    for selector in selectors:
        alg = GarlandAlgebra(params.replace(ring="z", sign_rule=selector))
        data = _sample(alg, trials, seed, bounds, show_progress)

        # A rule's outcome depends only on its values at the sampled assignments.
        tested = sorted({tuple(sorted(t.assignment.items())) for t in data})
        allowed = []
        for key in tested:
            sets = [t.passing for t in data if tuple(sorted(t.assignment.items())) == key]
            allowed.append(frozenset.intersection(*sets))
        values = [tuple(p.evaluate(dict(key)) for key in tested) for p in polys]

        groups = {}
        for index, signature in enumerate(values):
            groups.setdefault(signature, []).append(index)

        feasible = set()
        for s1 in groups:
            if any(not any(bits[0] == s1[i] for bits in allowed[i]) for i in range(len(tested))):
                continue
            for s2 in groups:
                if any(not any(bits[:2] == (s1[i], s2[i]) for bits in allowed[i])
                       for i in range(len(tested))):
                    continue
                for s3 in groups:
                    if all((s1[i], s2[i], s3[i]) in allowed[i] for i in range(len(tested))):
                        feasible.add((s1, s2, s3))

        survivors = sum(len(groups[s1]) * len(groups[s2]) * len(groups[s3])
                        for s1, s2, s3 in feasible)
        report.survivors += survivors
        _list_rules(report, selector, polys, values, feasible, data, alg, report_limit,
                    survivors)

    logging.info(f"{report.survivors} of {report.total_rules} rules survive")
    return report


def _list_rules(report, selector, polys, values, feasible, data, alg, limit, survivors):
    """Record the first survivors and eliminated rules in enumeration order."""
    firsts = {s1 for s1, _, _ in feasible}
    pairs = {(s1, s2) for s1, s2, _ in feasible}
    size = len(polys)

    for i in range(size):
        if len(report.listed_survivors) >= limit:
            break
        if values[i] not in firsts:
            continue
        for j in range(size):
            if (values[i], values[j]) not in pairs:
                continue
            for k in range(size):
                if (values[i], values[j], values[k]) in feasible:
                    report.listed_survivors.append(SignRule((polys[i], polys[j], polys[k]),
                                                            selector))
                    if len(report.listed_survivors) >= limit:
                        break
            if len(report.listed_survivors) >= limit:
                break

    wanted = min(limit, len(report.listed_eliminated) + size ** 3 - survivors)
    if len(report.listed_eliminated) >= wanted:
        return
    for i, j, k in product(range(size), repeat=3):
        if (values[i], values[j], values[k]) in feasible:
            continue
        rule = SignRule((polys[i], polys[j], polys[k]), selector)
        trial = _first_failure(rule, data)
        residual = signed_sum(alg, data[trial].summands, rule.bits(data[trial].assignment))
        report.listed_eliminated.append((rule, trial, residual))
        if len(report.listed_eliminated) >= wanted:
            return
