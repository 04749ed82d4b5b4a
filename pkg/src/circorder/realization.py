"""Place a finite list of group elements on the circle so their circular order is visible.

Insertion: the first element goes to 0, the second to 1/2, and every later
element to the midpoint of the arc between its two circular neighbours among
the points already placed.  All positions are dyadic rationals.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ElementMismatch, InvalidOrder, PreconditionError
from .groups import Group, check_element, element_to_json, format_element
from .orders import CircularOrder, PositionOrder


@dataclass(frozen=True)
class RealizationMap:
    group: Group
    entries: tuple  # ((element, Fraction), ...)

    def position(self, x) -> Fraction:
        for y, p in self.entries:
            if y == x:
                return p
        raise ElementMismatch(f"{x!r} was not placed")

    @property
    def elements(self) -> list:
        return [x for x, _ in self.entries]

    def as_dict(self) -> dict:
        return dict(self.entries)

    def to_json(self) -> dict:
        return {
            "entries": [
                {"element": element_to_json(self.group, x), "num": p.numerator, "den": p.denominator}
                for x, p in self.entries
            ]
        }


def realize(c: CircularOrder, elements: Sequence) -> RealizationMap:
    elements = list(elements)
    if len(set(elements)) != len(elements):
        raise PreconditionError("elements must be distinct")
    for x in elements:
        check_element(c.group, x)
    placed: list[tuple[Fraction, object]] = []  # sorted by position
    entries = []
    for i, x in enumerate(elements):
        if i == 0:
            pos = Fraction(0)
        elif i == 1:
            pos = Fraction(1, 2)
        else:
            pos = None
            k = len(placed)
            for j in range(k):
                (p, a), (q, b) = placed[j], placed[(j + 1) % k]
                v = c._eval(a, x, b)
                if v == 0:
                    raise InvalidOrder(f"order vanishes on distinct triple {(a, x, b)!r}")
                if v == 1:
                    if pos is not None:
                        raise InvalidOrder(f"{x!r} fits into two arcs; the order is not circular on this list")
                    pos = (p + q) / 2 if j + 1 < k else (p + 1) / 2
            if pos is None:
                raise InvalidOrder(f"{x!r} fits into no arc; the order is not circular on this list")
        entries.append((x, pos))
        placed.append((pos, x))
        placed.sort(key=lambda t: t[0])
    return RealizationMap(c.group, tuple(entries))


class PointRecovered(PositionOrder):
    """Order read from labelled points: ``c(x, y, z)`` is the orientation of their positions."""

    def __init__(self, m: RealizationMap):
        pos = {}
        for x, p in m.entries:
            if x in pos:
                raise InvalidOrder(f"{x!r} labelled twice")
            pos[x] = Fraction(p)
        if len(set(pos.values())) != len(pos):
            raise InvalidOrder("two labels share a position")
        self.group = m.group
        self.map = m
        self._pos = pos

    def position(self, x):
        try:
            return self._pos[x]
        except KeyError:
            raise ElementMismatch(f"{x!r} has no position") from None

    def __repr__(self):
        return f"PointRecovered({len(self._pos)} points)"


def order_from_points(m: RealizationMap) -> PointRecovered:
    return PointRecovered(m)


CSV_HEADER = ("element", "position_numerator", "position_denominator")

_SVG_SIZE = 400
_SVG_RADIUS = 150
_SVG_TICK = 8


def export(m: RealizationMap, fmt: str = "csv") -> bytes:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for x, p in m.entries:
            w.writerow((format_element(m.group, x), p.numerator, p.denominator))
        return buf.getvalue().encode()
    if fmt == "svg":
        cx = cy = _SVG_SIZE // 2
        r = _SVG_RADIUS
        lines = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_SIZE}" height="{_SVG_SIZE}" '
            f'viewBox="0 0 {_SVG_SIZE} {_SVG_SIZE}">',
            f'<circle cx="{cx}" cy="{cy}" r="{r}" fill="none" stroke="black" stroke-width="1"/>',
        ]
        for x, p in m.entries:
            ang = 2 * math.pi * float(p)
            ca, sa = math.cos(ang), math.sin(ang)
            x1, y1 = cx + (r - _SVG_TICK) * ca, cy - (r - _SVG_TICK) * sa
            x2, y2 = cx + (r + _SVG_TICK) * ca, cy - (r + _SVG_TICK) * sa
            lx, ly = cx + (r + 3 * _SVG_TICK) * ca, cy - (r + 3 * _SVG_TICK) * sa
            label = format_element(m.group, x).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            lines.append(f'<line class="tick" x1="{x1:.4f}" y1="{y1:.4f}" x2="{x2:.4f}" y2="{y2:.4f}" '
                         f'stroke="black" stroke-width="1"/>')
            lines.append(f'<text x="{lx:.4f}" y="{ly:.4f}" font-family="monospace" font-size="10" '
                         f'text-anchor="middle">{label}</text>')
        lines.append("</svg>")
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")
