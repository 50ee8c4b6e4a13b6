"""endokat: endogeny calculus over finite abelian groups and bi-module
linearization over prime fields, with machine-checked algebraic laws."""

from ._kernel import backend_name

__version__ = "0.1.0"

__all__ = ["backend_name", "__version__"]
