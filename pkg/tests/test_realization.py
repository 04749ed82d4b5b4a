from __future__ import annotations

import csv
import io
import re
from fractions import Fraction

import pytest

from circorder.abelian import RotationOrder, make_rotation_params
from circorder.errors import ElementMismatch, InvalidOrder, PreconditionError
from circorder.groups import FgAbelian, ball, cyclic_table
from circorder.orders import ExplicitTable, FiniteRotation, LexicographicOrder, LinearWrap, agreement
from circorder.realization import CSV_HEADER, RealizationMap, export, order_from_points, realize

from oracles import orient

Z4 = FgAbelian(0, 4)
Z2 = FgAbelian(2)


def test_z4_positions():
    m = realize(FiniteRotation(4, 1), [Z4.vec((), i) for i in range(4)])
    assert [p for _, p in m.entries] == [Fraction(0), Fraction(1, 2), Fraction(3, 4), Fraction(7, 8)]
    m3 = realize(FiniteRotation(4, 3), [Z4.vec((), i) for i in range(4)])
    # the reverse orientation: 2 goes between 1/2 and 1, then 3 between 0 and 1/2
    assert [p for _, p in m3.entries] == [Fraction(0), Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)]


def test_positions_reproduce_order_directly():
    c = RotationOrder(make_rotation_params(2, 0, ["sqrt(2)-1", "sqrt(3)-1"]))
    sample = ball(Z2, 2)
    m = realize(c, sample)
    pos = m.as_dict()
    for x in sample[:6]:
        for y in sample:
            for z in sample:
                if len({x, y, z}) == 3:
                    assert c(x, y, z) == orient(pos[x], pos[y], pos[z])
    assert all(p.denominator & (p.denominator - 1) == 0 for p in pos.values())  # dyadic


def test_round_trip_linear_wrap():
    c = LinearWrap(LexicographicOrder(2))
    sample = ball(Z2, 3)
    assert agreement(c, order_from_points(realize(c, sample)), sample) is None


def test_realize_rejects_bad_input():
    c = FiniteRotation(4, 1)
    with pytest.raises(PreconditionError):
        realize(c, [Z4.identity, Z4.identity])
    # a table that is not a circular order on the list: flipping one orbit on Z/7
    G = cyclic_table(7)
    bad = ExplicitTable.from_order(FiniteRotation(7, 1, G), range(7)).with_flipped(1, 2)
    with pytest.raises(InvalidOrder):
        realize(bad, list(range(7)))


def test_point_recovered_errors():
    m = RealizationMap(Z4, ((Z4.vec((), 0), Fraction(0)), (Z4.vec((), 1), Fraction(0))))
    with pytest.raises(InvalidOrder):
        order_from_points(m)
    ok = realize(FiniteRotation(4, 1), [Z4.vec((), i) for i in range(3)])
    with pytest.raises(ElementMismatch):
        order_from_points(ok).position(Z4.vec((), 3))


def test_csv_export():
    m = realize(FiniteRotation(4, 1), [Z4.vec((), i) for i in range(4)])
    rows = list(csv.reader(io.StringIO(export(m, "csv").decode())))
    assert tuple(rows[0]) == CSV_HEADER
    assert rows[1:] == [["0", "0", "1"], ["1", "1", "2"], ["2", "3", "4"], ["3", "7", "8"]]


def test_svg_export_is_deterministic():
    c = RotationOrder(make_rotation_params(2, 0, ["sqrt(2)-1", "sqrt(3)-1"]))
    m = realize(c, ball(Z2, 2))
    s1 = export(m, "svg")
    s2 = export(realize(c, ball(Z2, 2)), "svg")
    assert s1 == s2
    text = s1.decode()
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
    assert len(re.findall(r'class="tick"', text)) == len(m.entries)
    with pytest.raises(ValueError):
        export(m, "png")


def test_svg_snapshot_z4():
    m = realize(FiniteRotation(4, 1), [Z4.vec((), i) for i in range(4)])
    text = export(m, "svg").decode()
    # tick for position 1/4 turn... position 1/2 is on the left of the circle
    assert '<line class="tick" x1="58.0000" y1="200.0000" x2="42.0000" y2="200.0000"' in text
    assert '<line class="tick" x1="342.0000" y1="200.0000" x2="358.0000" y2="200.0000"' in text
