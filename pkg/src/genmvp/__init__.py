"""Exact checks of the generalized mean value property on R^d and on homogeneous trees."""
from genmvp.kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND", "__version__"]
