"""Circular and linear orders on groups: evaluation, validation, abelian and
free-product constructions, dynamical realization and obstruction search."""

from .algebraic import AlgebraicReal
from .errors import *  # noqa: F401,F403
from .groups import (
    FgAbelian,
    FiniteTable,
    FreeGroup,
    FreeProduct,
    Vec,
    ball,
    cyclic_table,
    klein_four_table,
    quaternion_table,
)
from .orders import (
    ExplicitTable,
    FiniteRotation,
    LinearWrap,
    agreement,
    evaluate,
    is_linear_on,
    validate,
)
from .abelian import IntertwinedOrder, RotationOrder, make_rotation_params
from .freeprod import LexFreeProductOrder
from .obstruction import build_instance, enumerate_orders, search, solve, verify_certificate
from .realization import order_from_points, realize

__version__ = "0.1.0"
