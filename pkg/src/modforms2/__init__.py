"""Exact q-series and numerical checks for level-1 and level-2 modular forms.

Layers:

* :mod:`modforms2.series` -- truncated Laurent series in q**(1/24) over Q,
  with a lam = pi*i grading;
* :mod:`modforms2.catalog` -- named Eisenstein series, theta functions,
  eta/Delta quotients, the Hauptmodul s and the Halphen variables;
* :mod:`modforms2.dsl` -- a small expression language over the catalog;
* :mod:`modforms2.identities` -- the built-in identity registry;
* :mod:`modforms2.numeric` -- evaluation in the upper half-plane, ODE
  integration, hypergeometric functions and transformation laws.
"""

from .catalog import build
from .dsl import Environment, check_identity, eval_text, parse
from .identities import registry, verify, verify_all
from .series import INF, GradedSeries, LaurentSeries

__version__ = "0.1.0"

__all__ = [
    "INF",
    "Environment",
    "GradedSeries",
    "LaurentSeries",
    "build",
    "check_identity",
    "eval_text",
    "parse",
    "registry",
    "verify",
    "verify_all",
]
