import glob
import os

import pytest

from src.calculus import AlgebraParams, GarlandAlgebra
from src.element_text import parse_element, print_element, tokenize
from src.errors import ElementSyntaxError
from src.utils import read_text

ROOT = os.path.join(os.path.dirname(__file__), "..")
CORPUS = sorted(glob.glob(os.path.join(ROOT, "corpus", "*.txt")))


@pytest.fixture
def alg():
    return GarlandAlgebra(AlgebraParams(ring="z"))


def test_corpus_is_large_enough():
    assert len(CORPUS) >= 30


@pytest.mark.parametrize("path", CORPUS, ids=os.path.basename)
def test_corpus_round_trip(path, alg):
    element = parse_element(read_text(path), alg)
    printed = print_element(element)
    assert parse_element(printed, alg) == element
    assert print_element(parse_element(printed, alg)) == printed


def test_unit_text_parses_to_unit(alg):
    assert parse_element("gen(u, deg=0, copies=0, marks=[{g=1;}])", alg) == alg.unit()


def test_zero(alg):
    assert parse_element("0", alg).is_zero()
    assert print_element(alg.zero()) == "0"


def test_grading_error(alg):
    with pytest.raises(ElementSyntaxError, match="grading must be ≥ 1") as info:
        parse_element("gen(a, deg=2, copies=1, marks=[{g=0;(0,p)}])", alg)
    assert info.value.line == 1
    assert info.value.column == 35


def test_copy_index_out_of_range(alg):
    with pytest.raises(ElementSyntaxError, match="out of range"):
        parse_element("gen(a, deg=2, copies=1, marks=[{g=1;(1,p)}])", alg)


def test_position_on_later_line(alg):
    with pytest.raises(ElementSyntaxError) as info:
        parse_element("gen(a, deg=2, copies=1, marks=[])\n+ gen(b deg=1)", alg)
    assert info.value.line == 2
    assert info.value.column == 9


def test_unexpected_character():
    with pytest.raises(ElementSyntaxError, match="unexpected character"):
        tokenize("gen(a, deg=2 @")


def test_printing_is_canonical(alg):
    a = parse_element("gen(h, deg=1, copies=2, marks=[{g=2;(1,x)} {g=1;(0,y),(1,z)}])", alg)
    b = parse_element("gen(h, deg=1, copies=2, marks=[{g=2;(0,w)} {g=1;(1,v),(0,t)}])", alg)
    assert print_element(a) == print_element(b)


def test_coefficients_collect(alg):
    text = "gen(a, deg=2, copies=1, marks=[{g=1;(0,p)}])"
    element = parse_element(f"{text} + {text}", alg)
    assert print_element(element) == "2*gen(a, deg=2, copies=1, marks=[{g=1;(0,p0)}])"


def test_lifted_element_round_trips(alg):
    lifted = alg.lift(parse_element(read_text(os.path.join(ROOT, "corpus", "single_mark.txt")), alg))
    printed = print_element(lifted)
    assert printed == "gen(a, deg=3, copies=1, marks=[{g=1;(0,f0)}{g=2;(0,p1)}])"
    back = parse_element(printed, alg)
    assert back == lifted
    assert back.terms[0].freshness == lifted.terms[0].freshness != ()


def test_proj_of_reparsed_lift_vanishes_on_boundary():
    alg = GarlandAlgebra(AlgebraParams(ring="z", p_is_boundary=True))
    element = parse_element("gen(b, deg=3, copies=2, marks=[{g=1;(0,x),(1,y)} {g=2;(1,z)}])", alg)
    back = parse_element(print_element(alg.lift(element)), alg)
    assert alg.proj(back).is_zero()


def test_reserved_label_outside_singleton_is_plain(alg):
    element = parse_element("gen(a, deg=1, copies=1, marks=[{g=2;(0,f0)} {g=1;(0,f1),(0,q)}])", alg)
    assert element.terms[0].freshness == ()
    shared = parse_element("gen(a, deg=1, copies=1, marks=[{g=1;(0,f0)} {g=2;(0,f0)}])", alg)
    assert shared.terms[0].freshness == ()
