from src.dot_export import export_dot
from src.garland import GarlandShape, Mark, PointRef


def test_empty_shape_has_no_nodes():
    assert export_dot(GarlandShape()) == "digraph garland {\n}\n"


def test_two_copies_joined_by_one_mark():
    shape = GarlandShape(2, (Mark((PointRef(0, "p"), PointRef(1, "q")), 1),))
    text = export_dot(shape)
    lines = text.splitlines()
    assert sum("shape=circle" in line for line in lines) == 2
    assert sum("shape=box" in line for line in lines) == 1
    assert sum("->" in line for line in lines) == 2
    assert 'm0 [shape=box, label="g=1"];' in text


def test_multiplicity_label():
    shape = GarlandShape(1, (Mark((PointRef(0, "p"), PointRef(0, "q")), 2),))
    assert 'm0 -> c0 [label="2"];' in export_dot(shape)


def test_permuted_shape_gives_identical_text():
    s1 = GarlandShape(2, (Mark((PointRef(0, "a"),), 1), Mark((PointRef(1, "b"),), 3)))
    s2 = GarlandShape(2, (Mark((PointRef(1, "x"),), 1), Mark((PointRef(0, "y"),), 3)))
    assert export_dot(s1) == export_dot(s2)
