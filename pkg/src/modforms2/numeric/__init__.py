"""Complex-valued evaluation, integration and transformation checks."""

from .evaluate import PI_I, ComplexEval, HalfPlaneError, eval_series, order_for_point
from .fields import KINDS, ODEField, SingularityError, field_rhs, make_field, potential_V
from .hypergeom import DomainError, hyp2f1, schwarz_map_check
from .integrate import IntegrationError, rk_integrate
from .transforms import LAWS, GroupError, Matrix2, transform_residual

__all__ = [
    "PI_I",
    "ComplexEval",
    "DomainError",
    "GroupError",
    "HalfPlaneError",
    "IntegrationError",
    "KINDS",
    "LAWS",
    "Matrix2",
    "ODEField",
    "SingularityError",
    "eval_series",
    "field_rhs",
    "hyp2f1",
    "make_field",
    "order_for_point",
    "potential_V",
    "rk_integrate",
    "schwarz_map_check",
    "transform_residual",
]
