"""
Seeded randomized checking of the calculus identities, with counterexample
shrinking.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from tqdm import tqdm

from src.calculus import UNIT_SHAPE, BaseGenerator, GarlandAlgebra
from src.element_text import print_element, print_generator
from src.errors import GarlandError, MinimizationError, UnknownIdentityError
from src.garland import GarlandShape, Mark, PointRef

SLOT_NAMES = ("a", "b", "c")
FAMILIES = ("general", "one-grading-1-mark", "lift-image")

PASS = "PASS"
DIVERGES = "DIVERGES-FROM-PAPER"
OPEN_HOLDS = "OPEN-HOLDS"
OPEN_FAILS = "OPEN-FAILS"


@dataclass(frozen=True)
class Bounds:
    min_copies: int = 1
    max_copies: int = 3
    max_marks: int = 3
    max_grading: int = 3
    max_points: int = 3
    min_degree: int = -2
    max_degree: int = 6
    shared_point_rate: float = 0.1

    def __post_init__(self):
        if min(self.min_copies, self.max_copies, self.max_marks, self.max_points) < 0:
            raise GarlandError("random bounds must be non-negative")
        if self.max_grading < 1:
            raise GarlandError("max grading must be ≥ 1")
        if self.min_degree > self.max_degree:
            raise GarlandError("empty degree range")

    @classmethod
    def from_config(cls, config):
        defaults = cls()
        values = {name: type(getattr(defaults, name))(config.get(name, getattr(defaults, name)))
                  for name in cls.__dataclass_fields__}
        return cls(**values)


def trial_seed(seed, trial, slot):
    """Independent seed for one generator slot of one trial."""
    return np.random.SeedSequence([int(seed), int(trial), int(slot)])


def random_generator(seed, bounds=None, name="a", family="general"):
    """Draw a BaseGenerator within bounds, deterministically from seed."""
    bounds = bounds or Bounds()
    rng = np.random.default_rng(seed)
    degree = int(rng.integers(bounds.min_degree, bounds.max_degree + 1))
    low = min(bounds.min_copies, bounds.max_copies)
    copies = int(rng.integers(low, bounds.max_copies + 1))
    if copies == 0:
        return BaseGenerator(name, degree, UNIT_SHAPE)

    if family == "one-grading-1-mark":
        extra = int(rng.integers(0, bounds.max_marks)) if bounds.max_grading > 1 else 0
        gradings = [1] + [int(rng.integers(2, bounds.max_grading + 1)) for _ in range(extra)]
    else:
        count = int(rng.integers(0, bounds.max_marks + 1))
        gradings = [int(rng.integers(1, bounds.max_grading + 1)) for _ in range(count)]

    labels = [[] for _ in range(copies)]
    marks = []
    for grading in gradings:
        points = []
        for _ in range(int(rng.integers(0, bounds.max_points + 1))):
            copy = int(rng.integers(0, copies))
            if labels[copy] and rng.random() < bounds.shared_point_rate:
                label = labels[copy][int(rng.integers(0, len(labels[copy])))]
            else:
                label = f"q{sum(len(seen) for seen in labels)}"
                labels[copy].append(label)
            points.append(PointRef(copy, label))
        marks.append(Mark(tuple(points), grading))
    return BaseGenerator(name, degree, GarlandShape(copies, tuple(marks)))


def family_accepts(family, gen):
    if family == "one-grading-1-mark":
        return len(gen.shape.grading_one_marks()) == 1
    return True


# Identity recipes


def _degree(element):
    degrees = element.degrees()
    return degrees[0] if degrees else 0


def _sign(alg, operation, x, y):
    exponent = alg.signs.swap_exponent(operation, _degree(x), _degree(y), alg.params.n)
    return -1 if exponent.evaluate() else 1


def _triple(alg, x, y, z):
    return alg.product(alg.product(x, y), z)


def _bv_probe_right(alg, xs):
    a, b, c = xs
    n = alg.params.n
    da, db = _degree(a), _degree(b)

    def signed(element, exponent):
        return alg.scale(element, -1 if exponent % 2 else 1)

    d, p = alg.delta, alg.product
    return alg.total([
        p(d(p(a, b)), c),
        signed(p(a, d(p(b, c))), da * n),
        signed(p(b, d(p(a, c))), (da + n) * db),
        alg.negate(p(p(d(a), b), c)),
        alg.negate(signed(p(p(a, d(b)), c), da * n)),
        alg.negate(signed(p(p(a, b), d(c)), n * (da + db))),
    ])


@dataclass(frozen=True)
class IdentitySpec:
    name: str
    arity: int
    left: Callable
    right: Callable
    family: str = "general"
    ring: Optional[str] = None
    boundary: Optional[bool] = None
    expectation: str = "holds"

    def effective_params(self, params):
        changes = {}
        if self.ring is not None:
            changes["ring"] = self.ring
        if self.boundary is not None:
            changes["p_is_boundary"] = self.boundary
        return params.replace(**changes) if changes else params


IDENTITIES = {spec.name: spec for spec in [
    IdentitySpec(
        "comm", 2,
        lambda alg, x: alg.product(x[0], x[1]),
        lambda alg, x: alg.scale(alg.product(x[1], x[0]), _sign(alg, "product", x[0], x[1]))),
    IdentitySpec(
        "assoc", 3,
        lambda alg, x: alg.product(alg.product(x[0], x[1]), x[2]),
        lambda alg, x: alg.product(x[0], alg.product(x[1], x[2]))),
    IdentitySpec(
        "distrib", 3,
        lambda alg, x: (alg.product(x[0], alg.add(x[1], x[2])),
                        alg.product(alg.add(x[0], x[1]), x[2])),
        lambda alg, x: (alg.add(alg.product(x[0], x[1]), alg.product(x[0], x[2])),
                        alg.add(alg.product(x[0], x[2]), alg.product(x[1], x[2])))),
    IdentitySpec(
        "unit-law", 1,
        lambda alg, x: (alg.product(alg.unit(), x[0]), alg.product(x[0], alg.unit())),
        lambda alg, x: (x[0], x[0]),
        family="one-grading-1-mark"),
    IdentitySpec(
        "antisym-mod2", 2,
        lambda alg, x: alg.bracket(x[0], x[1]),
        lambda alg, x: alg.bracket(x[1], x[0]),
        ring="z2"),
    IdentitySpec(
        "jacobi-mod2", 3,
        lambda alg, x: alg.total([alg.bracket(alg.bracket(x[0], x[1]), x[2]),
                                  alg.bracket(alg.bracket(x[1], x[2]), x[0]),
                                  alg.bracket(alg.bracket(x[2], x[0]), x[1])]),
        lambda alg, x: alg.zero(),
        ring="z2"),
    IdentitySpec(
        "bilinear", 3,
        lambda alg, x: (alg.bracket(x[0], alg.add(x[1], x[2])),
                        alg.bracket(alg.add(x[0], x[1]), x[2]),
                        alg.lift(alg.add(x[0], x[1])),
                        alg.proj(alg.add(x[0], x[1])),
                        alg.delta(alg.add(x[0], x[1]))),
        lambda alg, x: (alg.add(alg.bracket(x[0], x[1]), alg.bracket(x[0], x[2])),
                        alg.add(alg.bracket(x[0], x[2]), alg.bracket(x[1], x[2])),
                        alg.add(alg.lift(x[0]), alg.lift(x[1])),
                        alg.add(alg.proj(x[0]), alg.proj(x[1])),
                        alg.add(alg.delta(x[0]), alg.delta(x[1])))),
    IdentitySpec(
        "prop42", 2,
        lambda alg, x: alg.bracket(x[0], x[1]),
        lambda alg, x: alg.proj(alg.product(alg.lift(x[0]), alg.lift(x[1])))),
    IdentitySpec(
        "prop43", 1,
        lambda alg, x: alg.proj(alg.lift(x[0])),
        lambda alg, x: alg.zero(),
        boundary=True),
    IdentitySpec(
        "delta-sq", 1,
        lambda alg, x: alg.delta(alg.delta(x[0])),
        lambda alg, x: alg.zero(),
        boundary=True),
    IdentitySpec(
        "bv-probe", 3,
        lambda alg, x: alg.delta(_triple(alg, x[0], x[1], x[2])),
        _bv_probe_right,
        expectation="open"),
]}


def get_identity(name):
    if name not in IDENTITIES:
        raise UnknownIdentityError(
            f"unknown identity '{name}', expected one of {', '.join(sorted(IDENTITIES))}")
    return IDENTITIES[name]


def _as_tuple(value):
    return value if isinstance(value, tuple) else (value,)


def evaluate_identity(spec, alg, generators, family):
    """Differences left − right, one per component of the identity."""
    inputs = [alg.generator(gen) for gen in generators]
    if family == "lift-image":
        inputs = [alg.lift(x) for x in inputs]
    left, right = _as_tuple(spec.left(alg, inputs)), _as_tuple(spec.right(alg, inputs))
    return tuple(alg.subtract(l, r) for l, r in zip(left, right))


def _diff_text(diffs):
    return " ; ".join(print_element(d) for d in diffs if not d.is_zero()) or "0"


@dataclass(frozen=True)
class Counterexample:
    identity: str
    family: str
    params: object
    generators: tuple
    trial: int = -1
    diff: str = ""

    def describe(self):
        return " | ".join(print_generator(g) for g in self.generators)


def failure_diffs(cx):
    spec = get_identity(cx.identity)
    alg = GarlandAlgebra(cx.params)
    return evaluate_identity(spec, alg, cx.generators, cx.family)


def fails(cx):
    return any(not d.is_zero() for d in failure_diffs(cx))


def _without_copy(gen, copy):
    marks = []
    for mark in gen.shape.marks:
        points = tuple(PointRef(p.copy - (p.copy > copy), p.label)
                       for p in mark.points if p.copy != copy)
        marks.append(Mark(points, mark.grading))
    return replace(gen, shape=GarlandShape(gen.shape.copies - 1, tuple(marks)))


def _without_mark(gen, index):
    marks = tuple(m for i, m in enumerate(gen.shape.marks) if i != index)
    return replace(gen, shape=GarlandShape(gen.shape.copies, marks))


def _without_point(gen, index, point):
    marks = list(gen.shape.marks)
    points = list(marks[index].points)
    points.remove(point)
    marks[index] = Mark(tuple(points), marks[index].grading)
    return replace(gen, shape=GarlandShape(gen.shape.copies, tuple(marks)))


def _shrinks(gen):
    if gen.shape.copies > 1:
        for copy in range(gen.shape.copies):
            yield _without_copy(gen, copy)
    for index in range(len(gen.shape.marks)):
        yield _without_mark(gen, index)
    for index, mark in enumerate(gen.shape.marks):
        for point in sorted(set(mark.points)):
            yield _without_point(gen, index, point)


def minimize(cx):
    """Greedily remove copies, marks and points while the failure persists."""
    if not fails(cx):
        raise MinimizationError(f"counterexample for '{cx.identity}' does not fail")
    current = cx
    improved = True
    while improved:
        improved = False
        for slot, gen in enumerate(current.generators):
            for smaller in _shrinks(gen):
                if not family_accepts(current.family, smaller):
                    continue
                generators = current.generators[:slot] + (smaller,) + current.generators[slot + 1:]
                candidate = replace(current, generators=generators)
                if fails(candidate):
                    current = candidate
                    improved = True
                    break
            if improved:
                break
    return replace(current, diff=_diff_text(failure_diffs(current)))


@dataclass
class TrialReport:
    identity: str
    family: str
    seed: int
    params: object
    trials: int
    expectation: str = "holds"
    passes: int = 0
    counterexample: Optional[Counterexample] = None
    minimized: Optional[Counterexample] = None
    m_component_brackets: int = 0
    failing_trials: list = field(default_factory=list)

    @property
    def failures(self):
        return self.trials - self.passes

    @property
    def verdict(self):
        if self.expectation == "open":
            return OPEN_HOLDS if self.failures == 0 else OPEN_FAILS
        return PASS if self.failures == 0 else DIVERGES

    @property
    def diverges(self):
        return self.verdict == DIVERGES


def check(identity, trials, seed, params, bounds=None, family=None,
          show_progress=False, shrink=True):
    """Evaluate both sides of an identity on fresh random generators per trial."""
    spec = get_identity(identity)
    bounds = bounds or Bounds()
    family = family or spec.family
    if family not in FAMILIES:
        raise GarlandError(f"unknown input family '{family}'")
    params = spec.effective_params(params)
    alg = GarlandAlgebra(params)

    report = TrialReport(identity, family, seed, params, trials, spec.expectation)
    logging.info(f"Checking {identity} on {trials} trials (seed {seed}, family {family})")

    for trial in tqdm(range(trials), desc=f"Checking {identity}", disable=not show_progress):
        generators = tuple(random_generator(trial_seed(seed, trial, slot), bounds,
                                            SLOT_NAMES[slot], family)
                           for slot in range(spec.arity))
        diffs = evaluate_identity(spec, alg, generators, family)
        if all(d.is_zero() for d in diffs):
            report.passes += 1
            continue
        report.failing_trials.append(trial)
        if report.counterexample is None:
            report.counterexample = Counterexample(identity, family, params, generators,
                                                   trial, _diff_text(diffs))
            logging.debug(f"First failure of {identity} at trial {trial}")

    report.m_component_brackets = alg.m_component_brackets
    if report.counterexample is not None and shrink:
        report.minimized = minimize(report.counterexample)

    logging.info(f"{identity}: {report.passes}/{trials} passed, verdict {report.verdict}")
    return report
