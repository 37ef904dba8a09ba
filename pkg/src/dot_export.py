"""
Graphviz DOT rendering of garland shapes.
"""
from collections import Counter

from src.garland import canonicalize


def export_dot(shape):
    """Copies as circles, marks as boxes, one edge per (mark, copy) pair.

    The shape is canonicalized first, so isomorphic shapes give identical text.
    """
    shape = canonicalize(shape)
    lines = ["digraph garland {"]
    for copy in range(shape.copies):
        lines.append(f'  c{copy} [shape=circle, label="P{copy}"];')
    for index, mark in enumerate(shape.marks):
        lines.append(f'  m{index} [shape=box, label="g={mark.grading}"];')
    for index, mark in enumerate(shape.marks):
        per_copy = Counter(point.copy for point in mark.points)
        for copy in sorted(per_copy):
            lines.append(f'  m{index} -> c{copy} [label="{per_copy[copy]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
