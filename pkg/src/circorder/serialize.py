"""JSON encoding of orders.

An order document is an object with a ``"type"`` discriminator; the group it
lives on is supplied separately (or under ``"group"``).  Parse errors are
raised as :class:`SchemaError` carrying the JSON path of the offending value.
"""

from __future__ import annotations

from fractions import Fraction

from .abelian import IntertwinedOrder, RotationOrder, make_rotation_params, quotient_data
from .algebraic import AlgebraicReal
from .errors import CircOrderError, SchemaError, UnsupportedVariant
from .freeprod import LexFreeProductOrder
from .groups import (
    FgAbelian,
    FiniteTable,
    FreeProduct,
    Group,
    element_from_json,
    element_to_json,
    group_from_json,
    group_to_json,
)
from .orders import (
    AbelianAutomorphism,
    AutActed,
    ConeOrder,
    ExplicitTable,
    FiniteRotation,
    LexicographicOrder,
    LinearOrder,
    LinearWrap,
    TableAutomorphism,
    TranslationOrder,
)
from .realization import PointRecovered, RealizationMap

ORDER_TYPES = ("rotation", "finite_rotation", "linear_wrap", "intertwined", "lex_free_product",
               "explicit_table", "point_recovered", "aut_acted")
LINEAR_TYPES = ("translation", "lexicographic", "cone")


def _field(obj, key, path, default=...):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        if default is ...:
            raise SchemaError(f"{path}.{key}", "missing required field")
        return default
    return obj[key]


def _int(obj, key, path, default=...):
    v = _field(obj, key, path, default)
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"{path}.{key}", "expected an integer")
    return v


def _list(obj, key, path, default=...):
    v = _field(obj, key, path, default)
    if not isinstance(v, list):
        raise SchemaError(f"{path}.{key}", "expected an array")
    return v


def real_from_json(obj, path: str) -> AlgebraicReal:
    """A real given as a string expression, a number, or ``{"terms": [[d, "p/q"], ...]}``."""
    try:
        if isinstance(obj, str):
            return AlgebraicReal.parse(obj)
        if isinstance(obj, int) and not isinstance(obj, bool):
            return AlgebraicReal.rational(obj)
        if isinstance(obj, dict) and isinstance(obj.get("terms"), list):
            return AlgebraicReal.from_json(obj)
    except (ValueError, TypeError, ZeroDivisionError, CircOrderError) as exc:
        raise SchemaError(path, f"not an algebraic real: {exc}") from exc
    except Exception as exc:  # sympy parse failures come in several flavours
        raise SchemaError(path, f"not an algebraic real: {exc}") from exc
    raise SchemaError(path, "expected a string expression or {\"terms\": ...}")


def _elements(G: Group, items, path):
    return [element_from_json(G, x, f"{path}[{i}]") for i, x in enumerate(items)]


def _wrap(path, fn, *args):
    """Run a constructor, re-raising domain errors as schema errors at ``path``."""
    try:
        return fn(*args)
    except SchemaError:
        raise
    except CircOrderError as exc:
        raise SchemaError(path, str(exc)) from exc


# ---------------------------------------------------------------------------
# Linear orders


def linear_from_json(obj, G: Group | None, path: str = "$") -> LinearOrder:
    kind = _field(obj, "type", path)
    if kind == "translation":
        xs = _list(obj, "x", path)
        vals = [real_from_json(v, f"{path}.x[{i}]") for i, v in enumerate(xs)]
        return _wrap(path, TranslationOrder, vals)
    if kind == "lexicographic":
        signs = obj.get("signs")
        rank = _int(obj, "rank", path, len(signs) if isinstance(signs, list) else ...)
        return _wrap(path, LexicographicOrder, rank, signs)
    if kind == "cone":
        if G is None:
            raise SchemaError(path, "a cone order needs a group")
        cone = _elements(G, _list(obj, "cone", path), f"{path}.cone")
        return _wrap(path, ConeOrder, G, cone)
    raise SchemaError(f"{path}.type", f"unknown linear order type {kind!r}")


def linear_to_json(lin: LinearOrder) -> dict:
    if isinstance(lin, TranslationOrder):
        return {"type": "translation", "x": [v.to_json() for v in lin.x]}
    if isinstance(lin, LexicographicOrder):
        return {"type": "lexicographic", "rank": lin.rank, "signs": list(lin.signs)}
    if isinstance(lin, ConeOrder):
        G = lin.group
        cone = sorted((element_to_json(G, g) for g in lin.cone), key=repr)
        return {"type": "cone", "cone": cone}
    raise UnsupportedVariant(f"cannot serialize {type(lin).__name__}")


# ---------------------------------------------------------------------------
# Circular orders


def order_from_json(obj, G: Group | None = None, path: str = "$"):
    """Parse an order document; ``G`` may be omitted when the document has a ``"group"``."""
    if isinstance(obj, dict) and "group" in obj:
        G = group_from_json(obj["group"], f"{path}.group")
    if G is None:
        raise SchemaError(f"{path}.group", "no group given for the order")
    kind = _field(obj, "type", path)

    if kind == "rotation":
        if not isinstance(G, FgAbelian) or isinstance(G.torsion, tuple):
            raise SchemaError(path, "rotation orders need an fg_abelian group with cyclic torsion")
        theta = [real_from_json(v, f"{path}.theta[{i}]") for i, v in enumerate(_list(obj, "theta", path))]
        k = _int(obj, "k", path, 0)
        params = _wrap(path, make_rotation_params, G.rank, G.m, theta, k)
        return _wrap(path, RotationOrder, params, G)

    if kind == "finite_rotation":
        m = _int(obj, "m", path)
        k = _int(obj, "k", path)
        return _wrap(path, FiniteRotation, m, k, G)

    if kind == "linear_wrap":
        lin = linear_from_json(_field(obj, "linear", path), G, f"{path}.linear")
        if lin.group != G:
            raise SchemaError(f"{path}.linear", f"linear order lives on {lin.group}, not on the group")
        return LinearWrap(lin)

    if kind == "intertwined":
        if not isinstance(G, FgAbelian):
            raise SchemaError(path, "intertwined orders need an fg_abelian group")
        kernel = _elements(G, _list(obj, "kernel", path), f"{path}.kernel")
        qd = _wrap(path, quotient_data, G, kernel)
        raw_lin = obj.get("linear")
        lin = linear_from_json(raw_lin, FgAbelian(len(kernel)), f"{path}.linear") if raw_lin is not None else None
        qo = order_from_json(_field(obj, "quotient_order", path), qd.group, f"{path}.quotient_order")
        return _wrap(path, IntertwinedOrder, G, kernel, lin, qo)

    if kind == "lex_free_product":
        if not isinstance(G, FreeProduct):
            raise SchemaError(path, "lexicographic orders need a free_product group")
        cG = order_from_json(_field(obj, "left", path), G.left, f"{path}.left")
        cH = order_from_json(_field(obj, "right", path), G.right, f"{path}.right")
        return _wrap(path, LexFreeProductOrder, G, cG, cH)

    if kind == "explicit_table":
        pairs = {}
        for i, item in enumerate(_list(obj, "pairs", path)):
            p = f"{path}.pairs[{i}]"
            if not isinstance(item, list) or len(item) != 3 or item[2] not in (1, -1):
                raise SchemaError(p, "expected [a, b, +1|-1]")
            a = element_from_json(G, item[0], f"{p}[0]")
            b = element_from_json(G, item[1], f"{p}[1]")
            pairs[(a, b)] = item[2]
        return _wrap(path, ExplicitTable, G, pairs)

    if kind == "point_recovered":
        entries = []
        for i, item in enumerate(_list(obj, "entries", path)):
            p = f"{path}.entries[{i}]"
            x = element_from_json(G, _field(item, "element", p), f"{p}.element")
            num, den = _int(item, "num", p), _int(item, "den", p)
            if den <= 0:
                raise SchemaError(f"{p}.den", "must be positive")
            q = Fraction(num, den)
            if not (0 <= q < 1):
                raise SchemaError(p, "position must lie in [0, 1)")
            entries.append((x, q))
        return _wrap(path, PointRecovered, RealizationMap(G, tuple(entries)))

    if kind == "aut_acted":
        base = order_from_json(_field(obj, "base", path), G, f"{path}.base")
        if isinstance(G, FiniteTable):
            rho = _wrap(path, TableAutomorphism, G, _list(obj, "perm", path))
        elif isinstance(G, FgAbelian):
            rho = _wrap(path, AbelianAutomorphism, G, _list(obj, "matrix", path),
                        obj.get("hom"), _int(obj, "unit", path, 1))
        else:
            raise SchemaError(path, "automorphisms are supported on tables and fg_abelian groups")
        return _wrap(path, AutActed, base, rho)

    raise SchemaError(f"{path}.type", f"unknown order type {kind!r}")


def order_to_json(c, include_group: bool = False) -> dict:
    G = c.group
    if isinstance(c, RotationOrder):
        p = c.params
        out = {"type": "rotation", "theta": [t.to_json() for t in p.theta], "k": p.k}
    elif isinstance(c, FiniteRotation):
        out = {"type": "finite_rotation", "m": c.m, "k": c.k}
    elif isinstance(c, LinearWrap):
        out = {"type": "linear_wrap", "linear": linear_to_json(c.lin)}
    elif isinstance(c, IntertwinedOrder):
        out = {"type": "intertwined",
               "kernel": [element_to_json(G, g) for g in c.kernel],
               "linear": linear_to_json(c.lin) if c.lin is not None else None,
               "quotient_order": order_to_json(c.quotient_order)}
    elif isinstance(c, LexFreeProductOrder) and type(c) is LexFreeProductOrder:
        out = {"type": "lex_free_product", "left": order_to_json(c.cG), "right": order_to_json(c.cH)}
    elif isinstance(c, ExplicitTable):
        if not c.homogeneous:
            raise UnsupportedVariant("only homogeneous tables serialize")
        items = sorted(c.pairs().items(), key=repr)
        out = {"type": "explicit_table",
               "pairs": [[element_to_json(G, a), element_to_json(G, b), v] for (a, b), v in items]}
    elif isinstance(c, PointRecovered):
        out = {"type": "point_recovered", **c.map.to_json()}
    elif isinstance(c, AutActed):
        rho = c.rho
        out = {"type": "aut_acted", "base": order_to_json(c.base)}
        if isinstance(rho, TableAutomorphism):
            out["perm"] = list(rho.perm)
        else:
            out.update(matrix=[list(r) for r in rho.matrix], hom=list(rho.hom), unit=rho.unit)
    else:
        raise UnsupportedVariant(f"cannot serialize {type(c).__name__}")
    if include_group:
        out["group"] = group_to_json(G)
    return out


def rotation_params_to_json(p) -> dict:
    return p.to_json()
