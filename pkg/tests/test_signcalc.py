from itertools import permutations, product

import pytest
from hypothesis import given, strategies as st

from src.errors import SignError, UnknownVariableError
from src.signcalc import (ONE, ZERO, Coefficient, ParityPoly, evaluate_tree,
                          koszul_sign, parity_normalize)

VARS = ("a", "b", "c", "n")

trees = st.recursive(
    st.sampled_from([0, 1] + list(VARS)),
    lambda children: st.tuples(st.sampled_from(["+", "*"]), children, children),
    max_leaves=8,
)
assignments = st.fixed_dictionaries({v: st.integers(0, 1) for v in VARS})


def test_characteristic_two():
    a = ParityPoly.var("a")
    assert (a + a).is_zero()
    assert a * a == a
    assert ONE + ONE == ZERO


def test_normalize_distributes():
    tree = ("*", ("+", "a", "n"), ("+", "b", "n"))
    poly = parity_normalize(tree)
    expected = ParityPoly.of([{"a", "b"}, {"a", "n"}, {"b", "n"}, {"n"}])
    assert poly == expected
    assert str(poly) == "n + a*b + a*n + b*n"


def test_normalize_unknown_variable():
    with pytest.raises(UnknownVariableError):
        parity_normalize(("+", "a", "z"), variables=VARS)


@given(trees, assignments)
def test_normalization_is_a_homomorphism(tree, assignment):
    assert parity_normalize(tree).evaluate(assignment) == evaluate_tree(tree, assignment)


def test_evaluate_needs_all_variables():
    with pytest.raises(UnknownVariableError):
        ParityPoly.var("a").evaluate({"b": 1})
    assert ONE.evaluate() == 1


def test_koszul_transposition():
    assert koszul_sign([1, 0], ["a", "b"]) == parity_normalize(("*", "a", "b"))
    assert koszul_sign([0, 1], ["a", "b"]).is_zero()


def test_koszul_odd_transposition_of_three():
    # all factors odd: (2, 0, 1) has two inversions
    assert koszul_sign([2, 0, 1], [1, 1, 1]).is_zero()
    assert koszul_sign([2, 1, 0], [1, 1, 1]) == ONE


def test_koszul_length_mismatch():
    with pytest.raises(SignError):
        koszul_sign([0, 1], ["a"])
    with pytest.raises(SignError):
        koszul_sign([0, 0], ["a", "b"])


@given(st.permutations(range(4)), st.permutations(range(4)), assignments)
def test_koszul_cocycle(sigma, tau, assignment):
    parities = [ParityPoly.var(v) for v in VARS]
    composite = [sigma[i] for i in tau]
    moved = [parities[i] for i in sigma]
    lhs = koszul_sign(composite, parities)
    rhs = koszul_sign(sigma, parities) + koszul_sign(tau, moved)
    assert lhs.evaluate(assignment) == rhs.evaluate(assignment)


def test_koszul_agrees_with_inversion_count_for_odd_factors():
    for perm in permutations(range(4)):
        inversions = sum(1 for i in range(4) for j in range(i + 1, 4) if perm[i] > perm[j])
        assert koszul_sign(perm, [1] * 4).evaluate() == inversions % 2


def test_coefficient_rings():
    odd = Coefficient("z", 3, ONE)
    assert odd.signed() == -3
    assert Coefficient("z2", 3, ONE).signed() == 1
    assert (odd * Coefficient("z", 2, ONE)).signed() == 6
    assert Coefficient("z", 1, ParityPoly.var("n")).signed({"n": 1}) == -1


def test_degree_and_variables():
    poly = ParityPoly.of([{"a", "n"}, set()])
    assert poly.degree() == 2
    assert poly.variables() == ["a", "n"]
    assert not poly.is_constant()
    assert [poly.evaluate(dict(zip(("a", "n"), bits))) for bits in product((0, 1), repeat=2)] \
        == [1, 1, 1, 0]
