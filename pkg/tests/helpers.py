"""Shared builders for randomized table tests."""

from fractions import Fraction

from l3pair.graded import GradedElement, MultiTable
from l3pair.linfty import iter_normalized_tuples


def random_table(rng, V, arity, symmetry, map_degree, density=0.5):
    table = MultiTable(V, arity, symmetry, map_degree)
    for key in iter_normalized_tuples(V, arity, symmetry == "symmetric"):
        in_deg = sum(V.degree(nm) for nm in key)
        coords = {}
        for nm, d in V.symbols:
            if d == in_deg + map_degree and rng.random() < density:
                coords[nm] = Fraction(rng.randint(-3, 3))
        val = GradedElement(V, coords)
        if not val.is_zero():
            table.set_value(key, val)
    return table
