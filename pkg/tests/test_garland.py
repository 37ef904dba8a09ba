from itertools import combinations_with_replacement, permutations

import pytest
from hypothesis import given, settings, strategies as st

from src.errors import ShapeValidationError
from src.garland import (GarlandShape, Mark, PointRef, canonical_form, canonicalize,
                         disjoint_union, permute_shape, shapes_equal, signature)


def shape(copies, *marks):
    return GarlandShape(copies, tuple(Mark(tuple(PointRef(c, l) for c, l in pts), g)
                                      for g, pts in marks))


@st.composite
def shapes(draw, max_copies=3):
    copies = draw(st.integers(1, max_copies))
    labels = st.tuples(st.integers(0, copies - 1), st.sampled_from(["x", "y", "z"]))
    marks = draw(st.lists(st.tuples(st.integers(1, 3), st.lists(labels, max_size=3)),
                          max_size=3))
    return shape(copies, *marks)


def test_grading_must_be_positive():
    with pytest.raises(ShapeValidationError, match="grading must be ≥ 1"):
        Mark((), 0)


def test_copy_index_checked():
    with pytest.raises(ShapeValidationError):
        shape(1, (1, [(1, "p")]))


def test_label_renaming_is_invisible():
    s1 = shape(1, (1, [(0, "p")]))
    s2 = shape(1, (1, [(0, "q")]))
    assert shapes_equal(s1, s2)


def test_copy_swap_is_invisible():
    s1 = shape(2, (1, [(0, "p")]), (2, [(1, "q")]))
    s2 = shape(2, (2, [(0, "p")]), (1, [(1, "q")]))
    assert canonicalize(s1) == canonicalize(s2)


def test_shared_point_distinguishes():
    shared = shape(1, (1, [(0, "p")]), (2, [(0, "p")]))
    separate = shape(1, (1, [(0, "p")]), (2, [(0, "q")]))
    assert not shapes_equal(shared, separate)


def test_multiplicity_distinguishes():
    double = shape(1, (1, [(0, "p"), (0, "p")]))
    pair = shape(1, (1, [(0, "p"), (0, "q")]))
    assert not shapes_equal(double, pair)


def test_which_copy_holds_the_mark_matters():
    same = shape(2, (1, [(0, "p")]), (2, [(0, "q")]))
    split = shape(2, (1, [(0, "p")]), (2, [(1, "q")]))
    assert not shapes_equal(same, split)


def test_canonicalize_is_idempotent():
    s = shape(3, (2, [(0, "a"), (1, "b")]), (2, [(1, "c"), (2, "d")]), (1, [(2, "d")]))
    assert canonicalize(canonicalize(s)) == canonicalize(s)


def test_signature_and_union():
    s1 = shape(1, (1, [(0, "p")]))
    s2 = shape(2, (3, [(0, "p"), (1, "q")]))
    union, first, second = disjoint_union(s1, s2)
    assert union.copies == 3
    assert second.point(PointRef(1, "q")) == PointRef(2, "q")
    assert first.point(PointRef(0, "p")) == PointRef(0, "p")
    assert str(signature(union)) == "(3; [1, 3])"


def test_union_of_empty_shapes():
    union, _, _ = disjoint_union(GarlandShape(), GarlandShape())
    assert union == GarlandShape(0, ())


def test_tagged_marks_are_not_identified():
    marks = (Mark((PointRef(0, "p"),), 1), Mark((PointRef(0, "q"),), 1))
    plain, fresh = canonical_form(1, marks, (False, True))
    assert len(fresh) == 1
    assert fresh[0] in plain.marks


@settings(max_examples=60, deadline=None)
@given(shapes(), st.data())
def test_relabeling_invariance(s, data):
    perm = data.draw(st.permutations(range(s.copies)))
    relabel = {p: f"r{i}" for i, p in enumerate(sorted({p for m in s.marks for p in m.points}))}
    assert canonicalize(permute_shape(s, perm, relabel)) == canonicalize(s)


def _isomorphic(s1, s2):
    """Brute force: try every copy permutation and label bijection per copy."""
    if s1.copies != s2.copies or sorted(m.grading for m in s1.marks) != \
            sorted(m.grading for m in s2.marks):
        return False
    labels1 = sorted({p for m in s1.marks for p in m.points})
    target = sorted((m.grading, m.points) for m in s2.marks)
    for perm in permutations(range(s1.copies)):
        moved = [PointRef(perm[p.copy], p.label) for p in labels1]
        candidates = sorted({p for m in s2.marks for p in m.points})
        if len(candidates) != len(moved):
            continue
        for image in permutations(candidates):
            if any(a.copy != b.copy for a, b in zip(moved, image)):
                continue
            mapping = dict(zip(labels1, image))
            mapped = sorted((m.grading, tuple(sorted(mapping[p] for p in m.points)))
                            for m in s1.marks)
            if mapped == target:
                return True
    return False


@settings(max_examples=80, deadline=None)
@given(shapes(max_copies=2), shapes(max_copies=2))
def test_canonical_form_decides_isomorphism(s1, s2):
    assert (canonicalize(s1) == canonicalize(s2)) == _isomorphic(s1, s2)


def small_shapes():
    """Every shape with k ≤ 2, at most 2 marks of grading ≤ 2 and at most 2 points."""
    found = set()
    for copies in range(3):
        pool = [PointRef(c, label) for c in range(copies) for label in ("x", "y")]
        contents = [points for size in range(3)
                    for points in combinations_with_replacement(pool, size)]
        marks = [Mark(points, grading) for grading in (1, 2) for points in contents]
        for count in range(3):
            for chosen in combinations_with_replacement(marks, count):
                if len({p for m in chosen for p in m.points}) <= 2:
                    found.add(GarlandShape(copies, chosen))
    return sorted(found, key=GarlandShape.sort_key)


def test_canonical_form_matches_brute_force_exhaustively():
    buckets = {}
    for s in small_shapes():
        key = (s.copies, tuple(sorted((m.grading, m.size) for m in s.marks)))
        buckets.setdefault(key, []).append(s)
    owner = {}
    for key, group in buckets.items():
        for s1 in group:
            assert owner.setdefault(canonicalize(s1), key) == key
        for i, s1 in enumerate(group):
            for s2 in group[i + 1:]:
                assert shapes_equal(s1, s2) == _isomorphic(s1, s2), (s1, s2)
