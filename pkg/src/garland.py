"""
Marks, multimarks and garland shapes, with canonical forms up to copy
permutation and point relabeling.
"""
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import lru_cache

from src.errors import ShapeValidationError

# Label stem of points in lift-created marks, as printed.
FRESH_PREFIX = "f"


@dataclass(frozen=True, order=True)
class PointRef:
    """A point on one copy of P. Labels only matter up to renaming."""
    copy: int
    label: str


@dataclass(frozen=True)
class Mark:
    """A multiset of points with a grading >= 1."""
    points: tuple = ()
    grading: int = 1

    def __post_init__(self):
        if not isinstance(self.grading, int) or self.grading < 1:
            raise ShapeValidationError("grading must be ≥ 1")
        points = tuple(sorted(self.points))
        for point in points:
            if not isinstance(point, PointRef):
                raise ShapeValidationError(f"not a point reference: {point!r}")
        object.__setattr__(self, "points", points)

    @property
    def size(self):
        return len(self.points)

    def sort_key(self):
        return (self.grading, tuple((p.copy, p.label) for p in self.points))


@dataclass(frozen=True)
class GarlandShape:
    """Copies of P plus a multiset of graded marks."""
    copies: int = 0
    marks: tuple = ()

    def __post_init__(self):
        if not isinstance(self.copies, int) or self.copies < 0:
            raise ShapeValidationError(f"copy count must be ≥ 0, got {self.copies!r}")
        for mark in self.marks:
            for point in mark.points:
                if not 0 <= point.copy < self.copies:
                    raise ShapeValidationError(
                        f"copy index {point.copy} out of range for {self.copies} copies")
        object.__setattr__(self, "marks", tuple(sorted(self.marks, key=Mark.sort_key)))

    def sort_key(self):
        return (self.copies, tuple(mark.sort_key() for mark in self.marks))

    def grading_one_marks(self):
        return [i for i, mark in enumerate(self.marks) if mark.grading == 1]


@dataclass(frozen=True)
class ComponentSignature:
    k: int
    gradings: tuple

    def __str__(self):
        return f"({self.k}; [{', '.join(str(g) for g in self.gradings)}])"


@dataclass(frozen=True)
class Embedding:
    """Copy shift taking one summand of a disjoint union into the union."""
    offset: int = 0

    def point(self, point):
        return PointRef(point.copy + self.offset, point.label)

    def mark(self, mark):
        return Mark(tuple(self.point(p) for p in mark.points), mark.grading)


def signature(shape):
    return ComponentSignature(shape.copies, tuple(sorted(m.grading for m in shape.marks)))


def disjoint_union(s1, s2):
    """Place s2's copies after s1's. Returns (shape, embedding1, embedding2)."""
    first, second = Embedding(0), Embedding(s1.copies)
    marks = tuple(first.mark(m) for m in s1.marks) + tuple(second.mark(m) for m in s2.marks)
    return GarlandShape(s1.copies + s2.copies, marks), first, second


def permute_shape(shape, copy_permutation, relabel=None):
    """Apply an isomorphism: copy c goes to copy_permutation[c], labels through relabel."""
    relabel = relabel or {}

    def move(point):
        return PointRef(copy_permutation[point.copy], relabel.get(point, point.label))

    marks = tuple(Mark(tuple(move(p) for p in mark.points), mark.grading)
                  for mark in shape.marks)
    return GarlandShape(shape.copies, marks)


def canonicalize(shape):
    return canonical_form(shape.copies, shape.marks)[0]


def shapes_equal(s1, s2):
    return canonicalize(s1) == canonicalize(s2)


def canonical_form(copies, marks, tags=None):
    """Canonical shape plus the canonical images of the tagged marks.

    tags is a parallel sequence of booleans marking some marks (lift's fresh
    marks); tagged and untagged marks are never identified.
    """
    marks = tuple(marks)
    tags = tuple(bool(t) for t in tags) if tags is not None else (False,) * len(marks)
    GarlandShape(copies, marks)
    return _canonical_form(copies, marks, tags)


def _rank(values):
    order = {value: i for i, value in enumerate(sorted(set(values)))}
    return [order[value] for value in values]


@lru_cache(maxsize=65536)
def _canonical_form(copies, marks, tags):
    # Points in a single mark are folded into mark-copy edges; points shared
    # between marks ("junctions") become vertices of their own.
    incidence = defaultdict(Counter)
    for index, mark in enumerate(marks):
        for point in mark.points:
            incidence[point][index] += 1
    junctions = sorted(p for p, seen in incidence.items() if len(seen) > 1)
    junction_index = {p: i for i, p in enumerate(junctions)}

    n_junctions = len(junctions)
    mark_base = copies + n_junctions
    total = mark_base + len(marks)
    neighbours = [Counter() for _ in range(total)]

    for index, mark in enumerate(marks):
        mark_vertex = mark_base + index
        private = defaultdict(list)
        for point, mult in Counter(mark.points).items():
            if point in junction_index:
                vertex = copies + junction_index[point]
                neighbours[mark_vertex][((1, mult), vertex)] += 1
                neighbours[vertex][((1, mult), mark_vertex)] += 1
            else:
                private[point.copy].append(mult)
        for copy, mults in private.items():
            label = (0, tuple(sorted(mults)))
            neighbours[mark_vertex][(label, copy)] += 1
            neighbours[copy][(label, mark_vertex)] += 1
    for point, index in junction_index.items():
        vertex = copies + index
        neighbours[vertex][((2,), point.copy)] += 1
        neighbours[point.copy][((2,), vertex)] += 1

    initial = ([(0,)] * copies + [(1,)] * n_junctions
               + [(2, mark.grading, int(tag)) for mark, tag in zip(marks, tags)])

    def refine(colors):
        while True:
            signatures = [
                (colors[v], tuple(sorted((label, colors[u], count)
                                         for (label, u), count in neighbours[v].items())))
                for v in range(total)
            ]
            refined = _rank(signatures)
            if len(set(refined)) == len(set(colors)):
                return refined
            colors = refined

    def encode(colors):
        copy_order = sorted(range(copies), key=lambda v: colors[v])
        new_copy = {old: new for new, old in enumerate(copy_order)}
        junction_order = sorted(range(copies, mark_base), key=lambda v: colors[v])
        new_junction = {old: new for new, old in enumerate(junction_order)}
        codes = []
        for mark, tag in zip(marks, tags):
            entries = []
            for point, mult in Counter(mark.points).items():
                if point in junction_index:
                    vertex = copies + junction_index[point]
                    entries.append((new_copy[point.copy], 1, new_junction[vertex], mult))
                else:
                    entries.append((new_copy[point.copy], 0, mult, 0))
            codes.append((mark.grading, int(tag), tuple(sorted(entries))))
        return (copies, tuple(sorted(codes)))

    def search(colors):
        colors = refine(colors)
        cells = defaultdict(list)
        for vertex, color in enumerate(colors):
            cells[color].append(vertex)
        target = next((cells[c] for c in sorted(cells) if len(cells[c]) > 1), None)
        if target is None:
            return encode(colors)
        best = None
        tried = []
        for vertex in target:
            # twins: swapping them is an automorphism, same subtree
            if any(neighbours[vertex] == neighbours[other] for other in tried):
                continue
            tried.append(vertex)
            code = search(_rank([(c, 0 if v == vertex else 1) for v, c in enumerate(colors)]))
            if best is None or code < best:
                best = code
        return best

    return _decode(search(_rank(initial)))


def _decode(code):
    """Rebuild a shape from its certificate; points of tagged marks get
    FRESH_PREFIX labels so the tag survives printing."""
    copies, mark_codes = code
    marks, fresh = [], []
    counter = 0
    for grading, tag, entries in mark_codes:
        points = []
        for copy, kind, first, second in entries:
            if kind == 1:
                points.extend([PointRef(copy, f"j{first}")] * second)
            else:
                stem = FRESH_PREFIX if tag else "p"
                points.extend([PointRef(copy, f"{stem}{counter}")] * first)
                counter += 1
        mark = Mark(tuple(points), grading)
        marks.append(mark)
        if tag:
            fresh.append(mark)
    return GarlandShape(copies, tuple(marks)), tuple(sorted(fresh, key=Mark.sort_key))
